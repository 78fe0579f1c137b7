"""Parameter triple (alpha, A, b) for the lattice semi-stable family.

The family is driven by the exponent function

    g(x) = x^alpha * (1 - A*cos(k*ln x)),   k = -2*pi / ln(b),

whose scaling identity  a*g(x) = g(b*x)  with epoch a = b^alpha is what
makes P(s) = exp(-g(1-s)) semi-stable.  The wiring of k to b is exact by
construction; everything downstream assumes a validated instance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import ParameterError

TWO_PI = 2.0 * math.pi


@lru_cache(maxsize=None)
def amplitude_bound(alpha: float, b: float) -> float:
    """Largest oscillation amplitude A for which the law is a genuine pmf.

    exp(-g(1-s)) is a PGF iff exp(-g) is completely monotone, i.e. iff g is
    a Bernstein function.  Writing g as an integral against the density
    x^(-1-alpha) * [alpha/Gamma(1-alpha) - A*Re((alpha+ik) x^(-ik) / Gamma(1-alpha-ik))]
    the density stays nonnegative iff

        A <= alpha * |Gamma(1-alpha-ik)| / (Gamma(1-alpha) * |alpha+ik|).

    The bound decays like exp(-pi*k/2), so for most of (0,1) the classical
    "any 0 < A < 1" claim fails; only tiny amplitudes give valid laws.
    For alpha = 1 the bound is 0 (the Poisson boundary case A = 0).
    """
    if alpha >= 1.0:
        return 0.0
    import mpmath as mp

    k = -TWO_PI / math.log(b)
    num = alpha * abs(mp.gamma(mp.mpc(1.0 - alpha, -k)))
    den = math.gamma(1.0 - alpha) * abs(complex(alpha, k))
    return float(num / den)


@dataclass(frozen=True)
class SemiStableParams:
    """Validated (alpha, A, b) with derived epoch a, period constant k, exponent H.

    Invariants enforced at construction:
      * 0 < alpha <= 1
      * 0 <= A < 1   (A = 0 is the degenerate discrete-stable / Poisson limit,
        admitted because it provides exact cross-oracles)
      * 0 < b < 1, hence epoch a = b^alpha in (0, 1)
    """

    alpha: float
    A: float
    b: float

    def __post_init__(self):
        alpha, A, b = float(self.alpha), float(self.A), float(self.b)
        if not math.isfinite(alpha) or not 0.0 < alpha <= 1.0:
            raise ParameterError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        if not math.isfinite(A) or not 0.0 <= A < 1.0:
            raise ParameterError(f"A must lie in [0, 1), got {self.A!r}")
        if not math.isfinite(b) or not 0.0 < b < 1.0:
            raise ParameterError(f"b must lie in (0, 1), got {self.b!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    # -- derived quantities (never stored, never serialized) ----------------

    @property
    def a(self) -> float:
        """Epoch a = b^alpha; the unique epoch in (0,1) of the lattice setup."""
        return self.b ** self.alpha

    @property
    def k(self) -> float:
        """Period constant; k * ln(b) = -2*pi exactly up to rounding."""
        return -TWO_PI / math.log(self.b)

    @property
    def H(self) -> float:
        """Selfsimilarity exponent H = 1/alpha."""
        return 1.0 / self.alpha

    @property
    def degenerate(self) -> bool:
        """True when A = 0: the oscillation vanishes and the family collapses
        to the discrete stable law exp(-(1-s)^alpha) (Poisson for alpha = 1)."""
        return self.A == 0.0

    @property
    def admissible(self) -> bool:
        """True when the amplitude is small enough that exp(-g(1-s)) is an
        actual PGF (sufficient criterion; see amplitude_bound)."""
        return self.A <= amplitude_bound(self.alpha, self.b) + 1e-15

    def describe(self) -> str:
        tags = []
        if self.degenerate:
            tags.append("degenerate A=0")
        if not self.admissible:
            tags.append(
                f"amplitude above admissible bound {amplitude_bound(self.alpha, self.b):.3g}; "
                "not a valid pmf"
            )
        suffix = f"  [{'; '.join(tags)}]" if tags else ""
        return (
            f"alpha={self.alpha:g} A={self.A:g} b={self.b:g} "
            f"(a={self.a:g}, k={self.k:.12g}, H={self.H:g}){suffix}"
        )

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"alpha": self.alpha, "A": self.A, "b": self.b}

    @classmethod
    def from_json_dict(cls, d: dict) -> "SemiStableParams":
        try:
            return cls(float(d["alpha"]), float(d["A"]), float(d["b"]))
        except KeyError as e:
            raise ParameterError(f"missing parameter field {e.args[0]!r}") from None
        except (TypeError, ValueError) as e:
            raise ParameterError(f"malformed parameter value: {e}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SemiStableParams":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParameterError(f"invalid parameter JSON: {e}") from None
        if not isinstance(d, dict):
            raise ParameterError("parameter JSON must be an object")
        return cls.from_json_dict(d)

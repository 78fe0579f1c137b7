"""Recovering lattice pmf tables from generating functions.

Two independent routes:

* ``pgf_coefficients`` / ``pgf_to_pmf``: discrete Fourier averages of the
  PGF on a circle of radius r < 1 inside the unit disk.  The aliasing error
  of coefficient n is bounded by r^N/(1-r^N) * r^(-n) (geometric-tail bound
  from |coefficients| <= 1 for genuine pmfs), while float roundoff in the
  averages is amplified by r^(-n); the default radius balances the two as a
  function of the transform size.

* ``taylor_oracle``: truncated power-series arithmetic around s = 0 carried
  out in extended precision, with the base exponent series obtained by
  high-order central finite differences.  Shares nothing with the Fourier
  path; disagreement between the two is a bug, not something to average.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    BranchTrackingError,
    EvaluationDomainError,
    NegativeCoefficientError,
    ParameterError,
    TailToleranceError,
)
from .pgf import PgfExpr, Poisson, Power, Product, SemiStable, Thinned, eval_pgf

NEGATIVITY_TOL = 1e-9
MAX_TRANSFORM_SIZE = 1 << 20


@dataclass(frozen=True)
class InversionSettings:
    """Knobs for pgf_to_pmf; hashable so tables can be memoized on it."""

    n_terms: int = 256
    radius: float | None = None  # None: default_radius(N) per transform size
    tail_tol: float = 1e-3


@dataclass(frozen=True, eq=False)
class PmfTable:
    """Finite lattice pmf with explicit unresolved tail mass.

    probs[n] approximates P{X = n} for n < len(probs); tail_mass is the
    probability not covered by the table.  Truncated tables are never
    renormalized here -- samplers condition on the support explicitly and
    carry tail_mass into their error budgets.
    """

    probs: np.ndarray
    tail_mass: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        probs = np.ascontiguousarray(self.probs, dtype=np.float64)
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "tail_mass", float(self.tail_mass))

    def __len__(self):
        return self.probs.size

    @cached_property
    def cdf(self) -> np.ndarray:
        """Conditional-on-support cumulative; last entry pinned to 1.0."""
        c = np.cumsum(self.probs)
        c /= c[-1]
        c[-1] = 1.0
        c.setflags(write=False)
        return c

    def to_csv(self, path):
        header = dict(self.meta)
        header["tail_mass"] = float(self.tail_mass)
        with open(path, "w") as fh:
            fh.write("# " + json.dumps(header, sort_keys=True) + "\n")
            fh.write("n,p\n")
            for n, p in enumerate(self.probs):
                fh.write(f"{n},{float(p)!r}\n")

    @classmethod
    def from_csv(cls, path) -> "PmfTable":
        with open(path) as fh:
            first = fh.readline()
            if not first.startswith("# "):
                raise ParameterError(f"{path}: missing JSON header comment")
            header = json.loads(first[2:])
            cols = fh.readline().strip()
            if cols != "n,p":
                raise ParameterError(f"{path}: expected 'n,p' column line, got {cols!r}")
            probs = np.array([float(line.split(",")[1]) for line in fh if line.strip()])
        tail = float(header.pop("tail_mass"))
        return cls(probs=probs, tail_mass=tail, meta=header)


def default_radius(n: int) -> float:
    """Evaluation radius for a size-n transform.

    0.95 for small transforms; for large ones the radius approaches 1 so the
    r^(-n) roundoff amplification at the far end of the table stays below
    ~1e4 (keeping amplified roundoff under the negativity tolerance).
    """
    return max(0.95, 10.0 ** (-4.0 / n))


def _check_transform_size(n_terms):
    if n_terms < 8 or (n_terms & (n_terms - 1)) != 0:
        raise ParameterError(f"n_terms must be a power of two >= 8, got {n_terms}")


def pgf_coefficients(expr: PgfExpr, n_terms: int, radius: float | None = None) -> np.ndarray:
    """Raw Taylor coefficients 0..n_terms-1 of expr by Fourier inversion.

    No nonnegativity gate: outside the admissible parameter region the
    series genuinely has negative coefficients and this is the operation
    that measures them.  Use pgf_to_pmf for validated probability tables.
    """
    _check_transform_size(n_terms)
    r = default_radius(n_terms) if radius is None else float(radius)
    if not 0.0 < r < 1.0:
        raise ParameterError(f"evaluation radius must lie in (0, 1), got {radius!r}")
    j = np.arange(n_terms)
    z = r * np.exp((2j * np.pi / n_terms) * j)
    vals = eval_pgf(expr, z)
    coeffs = np.fft.fft(vals).real / n_terms
    coeffs *= r ** (-np.arange(n_terms, dtype=np.float64))
    return coeffs


def pgf_to_pmf(
    expr: PgfExpr,
    n_terms: int = 256,
    tail_tol: float = 1e-3,
    radius: float | None = None,
    *,
    negativity_tol: float = NEGATIVITY_TOL,
    max_size: int = MAX_TRANSFORM_SIZE,
) -> PmfTable:
    """Pmf table for expr, growing the transform until the tail fits.

    Starts at n_terms and doubles the size until 1 - sum(probs) <= tail_tol
    or max_size is exceeded (TailToleranceError).  Coefficients inside
    (-negativity_tol, 0) are clamped to zero as roundoff; anything below
    that raises NegativeCoefficientError, which for this family usually
    means the amplitude A is outside the admissible region rather than a
    numerical failure (see SemiStableParams.amplitude_bound).
    """
    _check_transform_size(n_terms)
    if not 0.0 < tail_tol < 1.0:
        raise ParameterError(f"tail_tol must lie in (0, 1), got {tail_tol!r}")
    n = n_terms
    while True:
        coeffs = pgf_coefficients(expr, n, radius)
        worst = coeffs.argmin()
        if coeffs[worst] < -negativity_tol:
            raise NegativeCoefficientError(
                int(worst),
                float(coeffs[worst]),
                f"{expr}: coefficient p[{worst}] = {coeffs[worst]:.6g} < -{negativity_tol:g}; "
                "either inversion failed or the parameters are outside the admissible "
                "region where this is a probability law",
            )
        np.clip(coeffs, 0.0, None, out=coeffs)
        tail = max(0.0, 1.0 - coeffs.sum())
        if tail <= tail_tol:
            r_used = default_radius(n) if radius is None else float(radius)
            meta = {
                "expr": str(expr),
                "n_terms": int(n_terms),
                "N": int(n),
                "radius": r_used,
                "tail_tol": float(tail_tol),
            }
            return PmfTable(probs=coeffs, tail_mass=tail, meta=meta)
        if 2 * n > max_size:
            raise TailToleranceError(
                f"{expr}: tail mass {tail:.3g} > tail_tol {tail_tol:g} at the "
                f"transform-size cap {n}; heavy-tailed laws (alpha < 1) have "
                "polynomial tails, so loosen tail_tol or raise max_size"
            )
        n *= 2


# ---------------------------------------------------------------------------
# series-arithmetic oracle (independent of the Fourier path)

ORACLE_MAX_ORDER = 16
_FD_STEP = "1e-7"
_FD_DPS = 150


def _oracle_log_series(expr, scale, nmax, mp):
    """Log-PGF series of expr at s = 0 as mpmath floats.

    Thinning composes through the grammar as a pure scale on w = 1 - s
    (thinning by b maps w to b*w), so it is pushed down to the leaves:
    the semi-stable base needs the series of -g(scale*(1-s)), Poisson
    thins to Poisson(scale*lam), and Power/Product are linear in the log.
    """
    if isinstance(expr, SemiStable):
        return [-c for c in _g_series_fd(expr.params, scale, nmax, mp)]
    if isinstance(expr, Poisson):
        lam = mp.mpf(expr.lam) * scale
        out = [mp.mpf(0)] * (nmax + 1)
        out[0] = -lam
        if nmax >= 1:
            out[1] = lam
        return out
    if isinstance(expr, Thinned):
        return _oracle_log_series(expr.inner, scale * mp.mpf(expr.b), nmax, mp)
    if isinstance(expr, Power):
        t = mp.mpf(expr.t)
        return [t * c for c in _oracle_log_series(expr.inner, scale, nmax, mp)]
    if isinstance(expr, Product):
        left = _oracle_log_series(expr.left, scale, nmax, mp)
        right = _oracle_log_series(expr.right, scale, nmax, mp)
        return [x + y for x, y in zip(left, right)]
    raise TypeError(f"not a PgfExpr: {expr!r}")


def _g_series_fd(params, scale, nmax, mp):
    """Taylor coefficients of g(scale*(1-s)) at s = 0 by central differences.

    Order-n coefficient from the n-point central stencil at step h:
        c_n = sum_j (-1)^j C(n,j) f((n/2 - j) h) / (h^n n!).
    Float64 cannot survive the 2^n/h^n cancellation for n up to 16, so the
    differences run in extended precision where the h^2 truncation term
    (~n^2 h^2 per unit coefficient) is the only error left.
    """
    k = -2 * mp.pi / mp.log(mp.mpf(params.b))
    alpha = mp.mpf(params.alpha)
    A = mp.mpf(params.A)

    def f(s):
        x = scale * (1 - s)
        return x ** alpha * (1 - A * mp.cos(k * mp.log(x)))

    h = mp.mpf(_FD_STEP)
    coeffs = [f(mp.mpf(0))]
    for n in range(1, nmax + 1):
        acc = mp.mpf(0)
        for j in range(n + 1):
            acc += (-1) ** j * mp.binomial(n, j) * f((mp.mpf(n) / 2 - j) * h)
        coeffs.append(acc / (h ** n * mp.factorial(n)))
    return coeffs


def taylor_oracle(expr: PgfExpr, n_max: int) -> np.ndarray:
    """Coefficients 0..n_max of expr by series arithmetic; n_max <= 16.

    The log-PGF series is assembled node by node and exponentiated with the
    standard series-exp recurrence, all in extended precision.
    """
    if not 0 <= n_max <= ORACLE_MAX_ORDER:
        raise ParameterError(
            f"taylor_oracle supports orders up to {ORACLE_MAX_ORDER}, got {n_max}"
        )
    import mpmath as mp

    with mp.workdps(_FD_DPS):
        log_series = _oracle_log_series(expr, mp.mpf(1), n_max, mp)
        e = [mp.exp(log_series[0])]
        for n in range(1, n_max + 1):
            acc = mp.mpf(0)
            for j in range(1, n + 1):
                acc += j * log_series[j] * e[n - j]
            e.append(acc / n)
        return np.array([float(x) for x in e])


# ---------------------------------------------------------------------------
# log-PGF coefficients (compound-Poisson canonical coefficients)


def log_pgf_coefficients(
    expr: PgfExpr,
    n_terms: int = 64,
    radius: float | None = None,
    n_samples: int | None = None,
) -> np.ndarray:
    """Taylor coefficients 1..n_terms of log P by Fourier inversion.

    A lattice law with positive mass at 0 is infinitely divisible iff these
    are all nonnegative, so this is the ID certificate used by the
    verification suite.  The complex logarithm is tracked continuously
    around the evaluation circle; a jump of more than ~pi between adjacent
    samples means the circle is undersampled (raise n_samples).
    """
    if n_terms < 1:
        raise ParameterError(f"n_terms must be positive, got {n_terms}")
    if n_samples is None:
        n_samples = max(4096, 4 * _next_pow2(n_terms))
    if n_samples < 2 * n_terms:
        raise ParameterError("n_samples must be at least 2*n_terms")
    r = default_radius(max(n_terms, 8)) if radius is None else float(radius)
    if not 0.0 < r < 1.0:
        raise ParameterError(f"evaluation radius must lie in (0, 1), got {radius!r}")
    j = np.arange(n_samples)
    z = r * np.exp((2j * np.pi / n_samples) * j)
    vals = eval_pgf(expr, z)
    mod = np.abs(vals)
    if not np.all(np.isfinite(mod)) or np.any(mod == 0.0):
        raise EvaluationDomainError(
            f"{expr}: PGF modulus overflowed or underflowed on the circle r={r:g}"
        )
    raw = np.angle(vals)
    d = np.diff(raw, append=raw[:1])
    d = (d + np.pi) % (2.0 * np.pi) - np.pi
    if np.any(np.abs(d) > 0.9 * np.pi):
        raise BranchTrackingError(
            f"{expr}: argument jump {np.abs(d).max():.3f} rad between adjacent "
            f"circle samples at n_samples={n_samples}; increase n_samples"
        )
    winding = d.sum() / (2.0 * np.pi)
    if abs(winding) > 0.25:
        raise BranchTrackingError(
            f"{expr}: PGF winds {winding:.2f} times around 0 on the circle; "
            "log coefficients are undefined (zeros inside the disk?)"
        )
    tracked = raw[0] + np.concatenate(([0.0], np.cumsum(d[:-1])))
    logvals = np.log(mod) + 1j * tracked
    coeffs = np.fft.fft(logvals).real / n_samples
    coeffs *= r ** (-np.arange(n_samples, dtype=np.float64))
    return coeffs[1 : n_terms + 1]


def _next_pow2(n):
    p = 8
    while p < n:
        p *= 2
    return p

"""Generating-function expression tree and closed-form evaluation.

Every node in the grammar is infinitely divisible by construction: the two
bases (the semi-stable family and Poisson) are ID, and thinning, positive
powers and products preserve ID.  This is what makes Power(expr, t) legal
for arbitrary real t > 0 across the whole grammar.

Evaluation works on the log scale: each node has an exact closed form for
log P(z), so powers never have to re-take a complex logarithm of an already
exponentiated value.  On the closed unit disk (z != 1) the base's branch is
unambiguous because Re(1-z) > 0 there, and P(s)^t == exp(t*Log P(s)) with
principal branches wherever the latter is defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EvaluationDomainError, ParameterError
from .params import SemiStableParams

DISK_TOL = 1e-12


class PgfExpr:
    """Base class for generating-function expressions."""

    def __mul__(self, other):
        if isinstance(other, PgfExpr):
            return Product(self, other)
        return NotImplemented


@dataclass(frozen=True)
class SemiStable(PgfExpr):
    """P(z) = exp(-(1-z)^alpha * (1 - A*cos(k*Log(1-z))))."""

    params: SemiStableParams

    def __str__(self):
        p = self.params
        return f"SemiStable(alpha={p.alpha:g}, A={p.A:g}, b={p.b:g})"


@dataclass(frozen=True)
class Poisson(PgfExpr):
    """P(z) = exp(lam*(z-1))."""

    lam: float

    def __post_init__(self):
        if not (isinstance(self.lam, (int, float)) and math.isfinite(self.lam) and self.lam > 0):
            raise ParameterError(f"Poisson rate must be positive, got {self.lam!r}")
        object.__setattr__(self, "lam", float(self.lam))

    def __str__(self):
        return f"Poisson(lam={self.lam:g})"


@dataclass(frozen=True)
class Thinned(PgfExpr):
    """PGF of b (x) X: inner evaluated at 1 - b + b*z."""

    inner: PgfExpr
    b: float

    def __post_init__(self):
        if not (isinstance(self.b, (int, float)) and math.isfinite(self.b) and 0.0 < self.b <= 1.0):
            raise ParameterError(f"thinning probability must lie in (0, 1], got {self.b!r}")
        object.__setattr__(self, "b", float(self.b))

    def __str__(self):
        return f"Thinned({self.inner}, b={self.b:g})"


@dataclass(frozen=True)
class Power(PgfExpr):
    """PGF of the Levy marginal X(t): inner^t for real t > 0 (inner is ID)."""

    inner: PgfExpr
    t: float

    def __post_init__(self):
        if not (isinstance(self.t, (int, float)) and math.isfinite(self.t) and self.t > 0):
            raise ParameterError(f"power exponent must be positive, got {self.t!r}")
        object.__setattr__(self, "t", float(self.t))

    def __str__(self):
        return f"Power({self.inner}, t={self.t:g})"


@dataclass(frozen=True)
class Product(PgfExpr):
    """PGF of an independent sum."""

    left: PgfExpr
    right: PgfExpr

    def __str__(self):
        return f"Product({self.left}, {self.right})"


# ---------------------------------------------------------------------------
# evaluation


def _check_disk(z):
    bad = np.abs(z) > 1.0 + DISK_TOL
    if np.any(bad):
        worst = np.max(np.abs(z))
        raise EvaluationDomainError(f"|z| = {worst:.17g} exceeds the closed unit disk")


def _log_semistable(params, z):
    # log P = -g(1-z); principal branch is safe: Re(1-z) > 0 for |z| <= 1, z != 1
    w = 1.0 - z
    at_one = w == 0
    lw = np.log(np.where(at_one, 1.0, w))
    g = np.exp(params.alpha * lw) * (1.0 - params.A * np.cos(params.k * lw))
    return np.where(at_one, 0.0, -g)


def _log_eval(expr, z):
    if isinstance(expr, SemiStable):
        return _log_semistable(expr.params, z)
    if isinstance(expr, Poisson):
        return expr.lam * (z - 1.0)
    if isinstance(expr, Thinned):
        return _log_eval(expr.inner, 1.0 - expr.b + expr.b * z)
    if isinstance(expr, Power):
        return expr.t * _log_eval(expr.inner, z)
    if isinstance(expr, Product):
        return _log_eval(expr.left, z) + _log_eval(expr.right, z)
    raise TypeError(f"not a PgfExpr: {expr!r}")


def eval_log_pgf(expr, z):
    """log P(z) on the closed unit disk, continuous branch, log P(1) = 0."""
    z_arr = np.asarray(z)
    real_in = np.isrealobj(z_arr)
    zc = z_arr.astype(np.complex128)
    _check_disk(zc)
    out = _log_eval(expr, zc)
    out = np.asarray(out)
    if not np.all(np.isfinite(out)):
        raise EvaluationDomainError(
            f"log-PGF evaluation of {expr} overflowed; parameters are outside "
            "the numerically valid region"
        )
    if real_in:
        out = out.real
    return out[()] if np.isscalar(z) or z_arr.ndim == 0 else out


def eval_pgf(expr, z):
    """P(z) on the closed unit disk. Exactly 1 at z = 1; real for real input."""
    return np.exp(eval_log_pgf(expr, z))


def eval_lt(params: SemiStableParams, s):
    """Laplace transform phi(s) = exp(-g(s)) of the continuous mixing law, s >= 0."""
    s_arr = np.asarray(s, dtype=np.float64)
    if np.any(s_arr < 0):
        raise EvaluationDomainError("Laplace transform argument must be nonnegative")
    at_zero = s_arr == 0
    ls = np.log(np.where(at_zero, 1.0, s_arr))
    g = np.exp(params.alpha * ls) * (1.0 - params.A * np.cos(params.k * ls))
    out = np.exp(np.where(at_zero, 0.0, -g))
    out = np.where(at_zero, 1.0, out)
    return out[()] if np.isscalar(s) or s_arr.ndim == 0 else out


def eval_psi(params: SemiStableParams, u):
    """Scaling kernel psi(u) = |u|^alpha * (1 - A*cos(k*ln|u|)); psi(0) = 0."""
    u_arr = np.asarray(u, dtype=np.float64)
    au = np.abs(u_arr)
    at_zero = au == 0
    lu = np.log(np.where(at_zero, 1.0, au))
    out = np.exp(params.alpha * lu) * (1.0 - params.A * np.cos(params.k * lu))
    out = np.where(at_zero, 0.0, out)
    return out[()] if np.isscalar(u) or u_arr.ndim == 0 else out


# ---------------------------------------------------------------------------
# combinators


def thinning_transform(expr: PgfExpr, b: float) -> Thinned:
    """PGF of b (x) X for X with PGF expr; identity at b = 1."""
    return Thinned(expr, b)


def innovation_pgf(params: SemiStableParams) -> Power:
    """PGF of the stationary INAR(1) innovation b (x) Z(b^(-alpha) - 1).

    Structurally Power(Thinned(P, b), b^(-alpha) - 1); by the semi-stable
    equation this equals Power(P, 1 - b^alpha) pointwise, and both forms
    are exercised against each other in the verification suite.
    """
    exponent = params.b ** (-params.alpha) - 1.0
    return Power(Thinned(SemiStable(params), params.b), exponent)


def describe(expr: PgfExpr) -> str:
    return str(expr)

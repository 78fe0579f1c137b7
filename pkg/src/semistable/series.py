"""Truncated power-series arithmetic on coefficient arrays.

Plain float64 helpers shared by the inversion oracle and the verification
round-trip checks.  All series are arrays c[0..n] of coefficients around 0.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError


def series_exp(f):
    """Coefficients of exp(f) from those of f.

    Standard recurrence from (e^f)' = f' e^f:
        e_0 = exp(f_0),  e_n = (1/n) * sum_{j=1..n} j f_j e_{n-j}.
    """
    f = np.asarray(f, dtype=np.float64)
    n = f.size
    e = np.empty(n)
    e[0] = np.exp(f[0])
    jf = np.arange(n) * f
    for m in range(1, n):
        e[m] = np.dot(jf[1 : m + 1], e[m - 1 :: -1][:m]) / m
    return e


def series_log(p):
    """Coefficients of log(p) for a series with p_0 > 0 (inverse of series_exp)."""
    p = np.asarray(p, dtype=np.float64)
    if p[0] <= 0:
        raise ParameterError("series_log needs a positive constant term")
    n = p.size
    f = np.empty(n)
    f[0] = np.log(p[0])
    for m in range(1, n):
        acc = m * p[m]
        for j in range(1, m):
            acc -= j * f[j] * p[m - j]
        f[m] = acc / (m * p[0])
    return f


def series_power(p, t):
    """Coefficients of p^t via exp(t*log p); requires p_0 > 0."""
    return series_exp(t * series_log(p))


def binomial_thin_pmf(probs, b):
    """Exact pmf of b (x) X from the pmf of X (binomial mixing).

        q_m = sum_{x >= m} p_x * C(x, m) * b^m * (1-b)^(x-m)

    O(N^2); intended for verification on modest supports.  The thinned pmf
    of the truncated law is returned, so sum(q) == sum(p).
    """
    p = np.asarray(probs, dtype=np.float64)
    n = p.size
    if not 0.0 < b <= 1.0:
        raise ParameterError(f"thinning probability must lie in (0, 1], got {b!r}")
    if b == 1.0:
        return p.copy()
    q = 1.0 - b
    out = np.zeros(n)
    # weights w(x) = C(x, m) b^m q^(x-m) via w(m) = b^m, w(x+1) = w(x)*q*(x+1)/(x+1-m)
    for m in range(n):
        w = b ** m
        acc = w * p[m]
        for x in range(m + 1, n):
            w *= q * x / (x - m)
            acc += w * p[x]
        out[m] = acc
    return out

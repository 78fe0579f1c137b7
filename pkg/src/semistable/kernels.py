"""Hot sampling kernels with selectable backend.

Two implementations of the same three primitives:

* a pure-NumPy vectorized path (always available), and
* Numba @njit twins of the identical per-element arithmetic.

Both consume the counter-based streams from rng.py and are bit-identical:
every float operation happens in the same order per element, so switching
backends never changes a single draw.  Selection: environment variable
``SEMISTABLE_BACKEND=numba|numpy``; default is numba when importable.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

from .errors import ParameterError
from .rng import GAMMA_SUB, MASK64

ENV_VAR = "SEMISTABLE_BACKEND"


# ---------------------------------------------------------------------------
# NumPy implementation

_INV53 = 1.0 / 9007199254740992.0


def _mix64_vec(x):
    x = x.astype(np.uint64, copy=True)
    x ^= x >> np.uint64(30)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x94D049BB133111EB)
    x ^= x >> np.uint64(31)
    return x


def _np_uniforms(keys, j):
    """Uniform j in [0,1) of each draw key."""
    off = np.uint64((j * GAMMA_SUB) & MASK64)
    return (_mix64_vec(keys + off) >> np.uint64(11)).astype(np.float64) * _INV53


def _np_pmf_sample(cdf, keys):
    """Inverse-CDF draw per key (uniform j=0); bisect-right semantics."""
    u = _np_uniforms(keys, 0)
    return np.searchsorted(cdf, u, side="right").astype(np.int64)


def _np_binom_inv(u, n, q, s):
    # p0 = q^n by LSB-first binary powering, then the cumulative walk.
    # Kept textually in sync with _kernels_numba._binom_inv: identical
    # per-element float sequence is what makes the backends bit-compatible.
    p = np.ones_like(u)
    base = np.full_like(u, q)
    e = n.astype(np.int64).copy()
    while np.any(e > 0):
        bit = (e & 1) == 1
        p = np.where(bit, p * base, p)
        e >>= 1
        if np.any(e > 0):
            base = base * base
    cum = p.copy()
    k = np.zeros(n.shape, dtype=np.int64)
    act = np.nonzero(u > cum)[0]
    while act.size:
        k[act] += 1
        kk = k[act]
        nn = n[act]
        num = (nn - kk + 1).astype(np.float64)
        ratio = (s * num) / kk.astype(np.float64)
        pn = p[act] * ratio
        p[act] = pn
        cn = cum[act] + pn
        cum[act] = cn
        keep = (u[act] > cn) & (kk < nn)
        act = act[keep]
    return k


def _np_binomial(keys, x, b, q, s, xmax):
    """Exact Binomial(x_i, b) per draw key via chunked inverse CDF.

    Chunk c of element i consumes uniform j=c of key i; chunk sizes are a
    pure function of (x, xmax), so consumption never depends on outcomes.
    """
    x = np.asarray(x, dtype=np.int64)
    if b >= 1.0:
        return x.copy()
    out = np.zeros(x.shape, dtype=np.int64)
    nchunk = x // xmax
    rem = x - nchunk * xmax
    maxc = int(nchunk.max(initial=0))
    for c in range(maxc + 1):
        full = nchunk > c
        part = (nchunk == c) & (rem > 0)
        n_act = np.where(full, xmax, np.where(part, rem, 0))
        idx = np.nonzero(n_act > 0)[0]
        if idx.size == 0:
            continue
        u = _np_uniforms(keys[idx], c)
        out[idx] += _np_binom_inv(u, n_act[idx], q, s)
    return out


_NUMPY_IMPL = SimpleNamespace(
    name="numpy",
    uniforms=_np_uniforms,
    pmf_sample=_np_pmf_sample,
    binomial=_np_binomial,
)


# ---------------------------------------------------------------------------
# backend selection

_cache: dict = {}


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def active_backend() -> str:
    env = os.environ.get(ENV_VAR, "").strip().lower()
    if env in ("numba", "numpy"):
        return env
    if env:
        raise ParameterError(f"{ENV_VAR} must be 'numba' or 'numpy', got {env!r}")
    return "numba" if numba_available() else "numpy"


def get_impl(name: str | None = None) -> SimpleNamespace:
    name = active_backend() if name is None else name
    if name == "numpy":
        return _NUMPY_IMPL
    if name == "numba":
        if "numba" not in _cache:
            from . import _kernels_numba as knb

            _cache["numba"] = SimpleNamespace(
                name="numba",
                uniforms=knb.uniforms,
                pmf_sample=knb.pmf_sample,
                binomial=knb.binomial,
            )
        return _cache["numba"]
    raise ParameterError(f"unknown backend {name!r}")

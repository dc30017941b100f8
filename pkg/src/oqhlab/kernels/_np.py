"""Pure-numpy kernels.  Semantics are the reference for the numba versions in ``_nb``.

Phases are carried as unsigned 64-bit fixed-point fractions of a turn ("turns"),
so that ``alpha * m**2 mod 1`` stays exact for large ``m``.  A quadratic
coefficient is passed as ``(A, Q, xt)``: the rational ``A/Q`` whose phase is
reduced with integer arithmetic mod Q, plus an offset of ``xt / 2**64`` turns.
"""
from __future__ import annotations

import numpy as np

from ..bumps import rho

TWO_PI = 2.0 * np.pi
TURN = 2.0**-64
_CHUNK = 1 << 15


def rational_split(Q: int) -> tuple[int, int]:
    if Q == 1:
        return 0, 0
    return (1 << 64) // Q, (1 << 64) % Q


def alpha_turns(A: int, Q: int, xt: int, m: np.ndarray) -> np.ndarray:
    """Turns of ``(A/Q + xt 2^-64) m^2`` for an int64 array m."""
    m = np.asarray(m, dtype=np.int64)
    m2 = (m * m).astype(np.uint64)
    out = np.uint64(xt) * m2
    if Q > 1:
        q64, rem = rational_split(Q)
        mq = m % Q
        r = (A % Q) * (mq * mq % Q) % Q
        out = out + r.astype(np.uint64) * np.uint64(q64) + ((r * rem + Q // 2) // Q).astype(np.uint64)
    return out


def turns_to_unit(t: np.ndarray) -> np.ndarray:
    """e(t / 2^64) for uint64 turns."""
    ang = np.asarray(t, dtype=np.uint64).view(np.int64).astype(np.float64) * (TWO_PI * TURN)
    return np.exp(1j * ang)


def quad_phase(A: int, Q: int, xt: int, m: np.ndarray) -> np.ndarray:
    return turns_to_unit(alpha_turns(A, Q, xt, m))


def conv_direct(vals: np.ndarray, kern: np.ndarray, n_out: int) -> np.ndarray:
    """out[i] = sum_k vals[k] kern[i - k + len(vals) - 1], i < n_out."""
    nf = len(vals)
    full = np.convolve(vals, kern)
    return full[nf - 1:nf - 1 + n_out].copy()


def _odd_sum(A, Q, xt, bts, m_lo, m_hi, weight):
    bts = np.asarray(bts, dtype=np.uint64)
    out = np.zeros(len(bts), dtype=np.complex128)
    for c0 in range(m_lo, m_hi + 1, _CHUNK):
        m = np.arange(c0, min(c0 + _CHUNK, m_hi + 1), dtype=np.int64)
        w = weight(m)
        pa = alpha_turns(A, Q, xt, m)
        mu = m.astype(np.uint64)
        for b0 in range(0, len(bts), 256):
            pb = bts[b0:b0 + 256, None] * mu[None, :]
            terms = turns_to_unit(pa[None, :] - pb) - turns_to_unit(pa[None, :] + pb)
            out[b0:b0 + 256] += terms @ w
    return out


def mj_sum(A: int, Q: int, xt: int, bts: np.ndarray, j: int) -> np.ndarray:
    """sum over 2^(j-2) <= |m| <= 2^j of e(alpha m^2 - beta m) psi_j(m)."""
    m_lo = max(1, -(-(1 << j) // 4))
    scale = float(1 << j)
    return _odd_sum(A, Q, xt, bts, m_lo, 1 << j, lambda m: rho(m / scale) / m)


def mtrunc_sum(A: int, Q: int, xt: int, bts: np.ndarray, N: int) -> np.ndarray:
    """sum over 0 < |m| <= N of e(alpha m^2 - beta m) / m."""
    return _odd_sum(A, Q, xt, bts, 1, N, lambda m: 1.0 / m)


def osc_quad(X: float, Ys: np.ndarray, u: np.ndarray, wpsi: np.ndarray) -> np.ndarray:
    """sum_k wpsi_k e(X u_k^2) (e(-Y u_k) - e(Y u_k)) for each Y."""
    Ys = np.asarray(Ys, dtype=np.float64)
    base = wpsi * np.exp(1j * TWO_PI * np.mod(X * u * u, 1.0))
    out = np.empty(len(Ys), dtype=np.complex128)
    for b0 in range(0, len(Ys), 256):
        s = np.sin(TWO_PI * np.mod(np.outer(Ys[b0:b0 + 256], u), 1.0))
        out[b0:b0 + 256] = -2j * (s @ base)
    return out


def nudft(vals: np.ndarray, x0: int, bts: np.ndarray) -> np.ndarray:
    """sum_k vals[k] e(-beta (x0 + k)) at each beta given in turns."""
    bts = np.asarray(bts, dtype=np.uint64)
    n = (x0 + np.arange(len(vals), dtype=np.int64)).astype(np.uint64)
    out = np.empty(len(bts), dtype=np.complex128)
    for b0 in range(0, len(bts), 256):
        ph = np.uint64(0) - bts[b0:b0 + 256, None] * n[None, :]
        out[b0:b0 + 256] = turns_to_unit(ph) @ vals
    return out


def mhl(absvals: np.ndarray, x0: int, n0: int, n_out: int) -> np.ndarray:
    """Centered Hardy-Littlewood maximal function of |f| (dense on [x0, x0+len)) on [n0, n0+n_out)."""
    P = np.concatenate(([0.0], np.cumsum(absvals)))
    nf = len(absvals)
    pts = x0 + np.flatnonzero(absvals > 0)
    out = np.zeros(n_out)
    if len(pts) == 0:
        return out
    for i in range(n_out):
        n = n0 + i
        N = np.unique(np.concatenate(([0], np.abs(n - pts))))
        lo = np.clip(n - N - x0, 0, nf)
        hi = np.clip(n + N + 1 - x0, 0, nf)
        out[i] = np.max((P[hi] - P[lo]) / (2 * N + 1))
    return out


def gauss_exact(A: int, B: int, Q: int) -> complex:
    r = np.arange(Q, dtype=np.int64)
    k = ((A % Q) * (r * r % Q) - (B % Q) * r) % Q
    ang = TWO_PI * k.astype(np.float64) / Q
    return complex(np.sum(np.cos(ang)) / Q, np.sum(np.sin(ang)) / Q)

"""Numba-compiled kernels.  Same contracts as ``_np``; see that module for the conventions."""
from __future__ import annotations

import math

import numpy as np
from numba import njit

TWO_PI = 2.0 * math.pi
ANG = TWO_PI * 2.0**-64


@njit(cache=True)
def _f(x):
    if x <= 0.0:
        return 0.0
    return math.exp(-1.0 / x)


@njit(cache=True)
def _step(y):
    a = _f(y)
    b = _f(1.0 - y)
    return a / (a + b)


@njit(cache=True)
def _rho(u):
    a = abs(u)
    if a <= 0.5:
        return _step(4.0 * a - 1.0)
    return _step(2.0 - 2.0 * a)


@njit(cache=True)
def _alpha_turn(A, Q, q64, rem, xt, m):
    m2 = np.uint64(m * m)
    t = xt * m2
    if Q > 1:
        mq = m % Q
        r = (A % Q) * (mq * mq % Q) % Q
        t += np.uint64(r) * q64 + np.uint64((r * rem + Q // 2) // Q)
    return t


@njit(cache=True)
def _unit(t):
    a = float(np.int64(t)) * ANG
    return complex(math.cos(a), math.sin(a))


def _split(Q):
    if Q == 1:
        return np.uint64(0), 0
    return np.uint64((1 << 64) // Q), (1 << 64) % Q


@njit(cache=True)
def _quad_phase(A, Q, q64, rem, xt, m):
    out = np.empty(m.shape[0], dtype=np.complex128)
    for i in range(m.shape[0]):
        out[i] = _unit(_alpha_turn(A, Q, q64, rem, xt, m[i]))
    return out


def quad_phase(A, Q, xt, m):
    q64, rem = _split(Q)
    return _quad_phase(np.int64(A), np.int64(Q), q64, np.int64(rem), np.uint64(xt),
                       np.ascontiguousarray(m, dtype=np.int64))


@njit(cache=True)
def _conv_direct(vals, kern, n_out):
    nf = vals.shape[0]
    out = np.zeros(n_out, dtype=np.complex128)
    for i in range(n_out):
        acc = 0j
        for k in range(nf):
            acc += vals[k] * kern[i - k + nf - 1]
        out[i] = acc
    return out


def conv_direct(vals, kern, n_out):
    return _conv_direct(np.ascontiguousarray(vals, dtype=np.complex128),
                        np.ascontiguousarray(kern, dtype=np.complex128), int(n_out))


@njit(cache=True)
def _odd_sum(A, Q, q64, rem, xt, bts, m_lo, m_hi, mode, scale):
    nb = bts.shape[0]
    out = np.zeros(nb, dtype=np.complex128)
    for m in range(m_lo, m_hi + 1):
        if mode == 0:
            w = _rho(m / scale) / m
            if w == 0.0:
                continue
        else:
            w = 1.0 / m
        pa = _alpha_turn(A, Q, q64, rem, xt, m)
        mu = np.uint64(m)
        for b in range(nb):
            pb = bts[b] * mu
            out[b] += w * (_unit(pa - pb) - _unit(pa + pb))
    return out


def mj_sum(A, Q, xt, bts, j):
    q64, rem = _split(Q)
    m_lo = max(1, -(-(1 << j) // 4))
    return _odd_sum(np.int64(A), np.int64(Q), q64, np.int64(rem), np.uint64(xt),
                    np.ascontiguousarray(bts, dtype=np.uint64), m_lo, 1 << j, 0, float(1 << j))


def mtrunc_sum(A, Q, xt, bts, N):
    q64, rem = _split(Q)
    return _odd_sum(np.int64(A), np.int64(Q), q64, np.int64(rem), np.uint64(xt),
                    np.ascontiguousarray(bts, dtype=np.uint64), 1, int(N), 1, 1.0)


@njit(cache=True)
def _osc_quad(X, Ys, u, wpsi):
    nk = u.shape[0]
    base = np.empty(nk, dtype=np.complex128)
    for k in range(nk):
        p = X * u[k] * u[k]
        p -= math.floor(p)
        base[k] = wpsi[k] * complex(math.cos(TWO_PI * p), math.sin(TWO_PI * p))
    out = np.empty(Ys.shape[0], dtype=np.complex128)
    for i in range(Ys.shape[0]):
        acc = 0j
        for k in range(nk):
            p = Ys[i] * u[k]
            p -= math.floor(p)
            acc += base[k] * math.sin(TWO_PI * p)
        out[i] = -2j * acc
    return out


def osc_quad(X, Ys, u, wpsi):
    return _osc_quad(float(X), np.ascontiguousarray(Ys, dtype=np.float64),
                     np.ascontiguousarray(u, dtype=np.float64),
                     np.ascontiguousarray(wpsi, dtype=np.float64))


@njit(cache=True)
def _nudft(vals, x0, bts):
    out = np.empty(bts.shape[0], dtype=np.complex128)
    for i in range(bts.shape[0]):
        acc = 0j
        for k in range(vals.shape[0]):
            n = np.uint64(x0 + k)
            acc += vals[k] * _unit(np.uint64(0) - bts[i] * n)
        out[i] = acc
    return out


def nudft(vals, x0, bts):
    return _nudft(np.ascontiguousarray(vals, dtype=np.complex128), np.int64(x0),
                  np.ascontiguousarray(bts, dtype=np.uint64))


@njit(cache=True)
def _mhl(absvals, x0, n0, n_out):
    nf = absvals.shape[0]
    P = np.zeros(nf + 1)
    for k in range(nf):
        P[k + 1] = P[k] + absvals[k]
    out = np.zeros(n_out)
    for i in range(n_out):
        n = n0 + i
        best = 0.0
        # N = 0 and every N that brings a new support point into the window
        for k in range(-1, nf):
            if k >= 0:
                if absvals[k] == 0.0:
                    continue
                N = abs(n - (x0 + k))
            else:
                N = 0
            lo = min(max(n - N - x0, 0), nf)
            hi = min(max(n + N + 1 - x0, 0), nf)
            v = (P[hi] - P[lo]) / (2 * N + 1)
            if v > best:
                best = v
        out[i] = best
    return out


def mhl(absvals, x0, n0, n_out):
    return _mhl(np.ascontiguousarray(absvals, dtype=np.float64), np.int64(x0), np.int64(n0), int(n_out))


@njit(cache=True)
def _gauss_exact(A, B, Q):
    re = 0.0
    im = 0.0
    a = A % Q
    b = B % Q
    for r in range(Q):
        k = (a * (r * r % Q) - b * r) % Q
        ang = TWO_PI * k / Q
        re += math.cos(ang)
        im += math.sin(ang)
    return complex(re / Q, im / Q)


def gauss_exact(A, B, Q):
    return _gauss_exact(np.int64(A), np.int64(B), np.int64(Q))

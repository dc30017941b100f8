"""Dyadic pieces of the multiplier of H^alpha and their major-arc models.

``M_j`` is summed exactly (fixed-point phases); ``U_j`` is integrated with
Gauss-Legendre panels in the rescaled variable ``u = t / 2**j``, where

    U_j(x, y) = int_{1/4 <= |u| <= 1} e(x 4^j u^2 - y 2^j u) psi(u) du.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .bumps import chi_s, chi_s_radius, psi, psi_j
from .errors import NumericError, ParameterError, ResourceError
from .numtheory import ArcParams, find_alpha_s, gauss_sum, level_of
from .signal import Signal
from .torus import TorusPoint, floats_to_turns, signed_diff

MJ_CAP = 26
SWEEP_CAP = 16


@dataclass(frozen=True)
class MultiplierModel:
    epsilon: float = 0.15
    panels_per_oscillation: int = 4
    nodes: int = 32
    tol: float = 1e-9
    min_panels: int = 8
    max_panels: int = 1 << 18

    def __post_init__(self):
        if self.tol <= 0:
            raise ParameterError("quadrature tolerance must be positive")
        if self.panels_per_oscillation < 4:
            raise ParameterError("panels_per_oscillation must be >= 4")

    def arc(self, j: int) -> ArcParams:
        return ArcParams(self.epsilon, j)

    def levels(self, j: int) -> range:
        """Levels s with 1 <= s <= epsilon j."""
        return range(1, int(math.floor(self.epsilon * j + 1e-12)) + 1)


DEFAULT_MODEL = MultiplierModel()


def _beta_turns(beta) -> np.ndarray:
    if isinstance(beta, TorusPoint):
        return np.array([beta.turns()], dtype=np.uint64)
    return floats_to_turns(np.atleast_1d(np.asarray(beta, dtype=float)))


def _scalar_or_array(beta, out):
    return complex(out[0]) if np.ndim(beta) == 0 or isinstance(beta, TorusPoint) else out


def eval_psi_j(j: int, t):
    return psi_j(j, t)


def eval_Mj(alpha, beta, j: int):
    """M_j(beta) = sum_{m != 0} e(alpha m^2 - beta m) psi_j(m), summed exactly."""
    if j > MJ_CAP:
        raise ResourceError(f"j = {j} exceeds cap {MJ_CAP}")
    if j < 0:
        raise ParameterError("j must be >= 0")
    p = TorusPoint.of(alpha)
    out = kernels.mj_sum(p.num, p.den, p.offset_turns, _beta_turns(beta), j)
    return _scalar_or_array(beta, out)


def Mj_on_grid(alpha, j: int, L: int) -> np.ndarray:
    """M_j(k/L), k = 0..L-1, by one FFT (needs L > 2^(j+1))."""
    if L <= 1 << (j + 1):
        raise ParameterError(f"grid {L} too small for j = {j}")
    p = TorusPoint.of(alpha)
    m = np.arange(max(1, (1 << j) // 4), (1 << j) + 1, dtype=np.int64)
    w = psi_j(j, m) * kernels.quad_phase(p.num, p.den, p.offset_turns, m)
    c = np.zeros(L, dtype=np.complex128)
    c[m] = w
    c[L - m] = -w  # psi_j odd, m^2 even
    return np.fft.fft(c)


def eval_M_truncated(alpha, beta, N: int):
    """Partial sum over 0 < |m| <= N of e(alpha m^2 - beta m)/m."""
    if N > 1 << MJ_CAP:
        raise ResourceError(f"N = {N} exceeds 2^{MJ_CAP}")
    if N < 1:
        raise ParameterError("N must be >= 1")
    p = TorusPoint.of(alpha)
    out = kernels.mtrunc_sum(p.num, p.den, p.offset_turns, _beta_turns(beta), N)
    return _scalar_or_array(beta, out)


def M_truncated_on_grid(alpha, N: int, L: int) -> np.ndarray:
    if L <= 2 * N:
        raise ParameterError(f"grid {L} too small for N = {N}")
    p = TorusPoint.of(alpha)
    m = np.arange(1, N + 1, dtype=np.int64)
    w = kernels.quad_phase(p.num, p.den, p.offset_turns, m) / m
    c = np.zeros(L, dtype=np.complex128)
    c[m] = w
    c[L - m] = -w
    return np.fft.fft(c)


@lru_cache(maxsize=64)
def _panel_rule(n_panels: int, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(0.25, 1.0, n_panels + 1)
    a, b = edges[:-1, None], edges[1:, None]
    u = ((b - a) / 2 * x + (a + b) / 2).ravel()
    wu = ((b - a) / 2 * w).ravel() * psi(u)
    u.setflags(write=False)
    wu.setflags(write=False)
    return u, wu


def eval_Uj(x: float, y, j: int, model: MultiplierModel = DEFAULT_MODEL):
    """U_j(x, y) = int e(x t^2 - y t) psi_j(t) dt, vectorized in y.

    Panel count ~ panels_per_oscillation * (1 + |x| 4^j + |y| 2^j); the result is
    accepted once doubling the panels moves it by less than ``model.tol``
    (one extra refinement allowed).
    """
    ys = np.atleast_1d(np.asarray(y, dtype=float))
    X = float(x) * 4.0**j
    Y = ys * 2.0**j
    osc = 1.0 + abs(X) + (float(np.max(np.abs(Y))) if len(Y) else 0.0)
    n = max(model.min_panels, int(math.ceil(model.panels_per_oscillation * osc)))
    if 4 * n > model.max_panels:
        raise ResourceError(f"U_j needs {4 * n} panels (cap {model.max_panels})", )
    prev = kernels.osc_quad(X, Y, *_panel_rule(n, model.nodes))
    for _ in range(2):
        n *= 2
        cur = kernels.osc_quad(X, Y, *_panel_rule(n, model.nodes))
        err = float(np.max(np.abs(cur - prev))) if len(Y) else 0.0
        if err < model.tol:
            return complex(cur[0]) if np.ndim(y) == 0 else cur
        prev = cur
    raise NumericError("U_j quadrature did not converge", x=x, j=j, panels=n, change=err)


def _alpha_offset(p: TorusPoint, aq) -> float:
    """alpha - A/Q as a float, exact when alpha was built on the base A/Q."""
    if p.num == aq.num and p.den == aq.den:
        return p.offset
    return float(signed_diff(float(p), aq.num / aq.den))


def eval_Ljs(alpha, beta, j: int, s: int, model: MultiplierModel = DEFAULT_MODEL):
    """Major-arc model of level s: S(A/Q, B/Q) U_j(alpha - A/Q, beta - B/Q) chi_s(.) chi_s(.).

    At most one A/Q (found by :func:`find_alpha_s`) and, for each beta, one B/Q
    contribute.
    """
    betas = np.atleast_1d(np.asarray(beta, dtype=float))
    out = np.zeros(len(betas), dtype=np.complex128)
    p = TorusPoint.of(alpha)
    aq = find_alpha_s(p, s)
    if aq is not None:
        Q = aq.den
        x = _alpha_offset(p, aq)
        cx = float(chi_s(s, x))
        B = np.mod(np.rint(betas * Q).astype(np.int64), Q)
        y = signed_diff(betas, B / Q)
        active = (np.gcd(B, Q) == 1) & (np.abs(y) < chi_s_radius(s))
        if cx != 0.0:
            for b in np.unique(B[active]).tolist():
                sel = active & (B == b)
                U = eval_Uj(x, y[sel], j, model)
                out[sel] = gauss_sum(aq.num, b, Q) * U * cx * chi_s(s, y[sel])
    return complex(out[0]) if np.ndim(beta) == 0 else out


def eval_Lj(alpha, beta, j: int, model: MultiplierModel = DEFAULT_MODEL):
    betas = np.atleast_1d(np.asarray(beta, dtype=float))
    out = np.zeros(len(betas), dtype=np.complex128)
    for s in model.levels(j):
        out += eval_Ljs(alpha, betas, j, s, model)
    return complex(out[0]) if np.ndim(beta) == 0 else out


def eval_Ej(alpha, beta, j: int, model: MultiplierModel = DEFAULT_MODEL):
    """E_j = M_j - L_j."""
    betas = np.atleast_1d(np.asarray(beta, dtype=float))
    out = eval_Mj(alpha, betas, j) - eval_Lj(alpha, betas, j, model)
    return complex(out[0]) if np.ndim(beta) == 0 else out


def _window_indices(alpha, j: int, L: int, model: MultiplierModel) -> np.ndarray:
    """Grid indices k where some L_{j,s} can be nonzero."""
    p = TorusPoint.of(alpha)
    ks = []
    for s in model.levels(j):
        aq = find_alpha_s(p, s)
        if aq is None:
            continue
        Q = aq.den
        half = int(math.ceil(chi_s_radius(s) * L)) + 1
        for b in range(Q):
            if math.gcd(b, Q) != 1:
                continue
            c = (b * L) // Q
            ks.append(np.arange(c - half, c + half + 2) % L)
    if not ks:
        return np.zeros(0, dtype=np.int64)
    return np.unique(np.concatenate(ks))


def Lj_on_grid(alpha, j: int, L: int, model: MultiplierModel = DEFAULT_MODEL) -> np.ndarray:
    out = np.zeros(L, dtype=np.complex128)
    k = _window_indices(alpha, j, L, model)
    if len(k):
        out[k] = eval_Lj(alpha, k / L, j, model)
    return out


def Ej_on_grid(alpha, j: int, L: int, model: MultiplierModel = DEFAULT_MODEL) -> np.ndarray:
    return Mj_on_grid(alpha, j, L) - Lj_on_grid(alpha, j, L, model)


@dataclass
class KernelSplit:
    """Inverse transform of E_j on m in [-L/2, L/2) and its split at |m| = 2^(3j)."""

    kernel: Signal
    near: Signal
    far: Signal
    cutoff: int
    L: int

    @property
    def far_empty(self) -> bool:
        return self.far.is_zero and self.cutoff >= self.L // 2


def kernel_Ej(alpha, j: int, L: int, model: MultiplierModel = DEFAULT_MODEL) -> KernelSplit:
    """F^-1 E_j: the exact F^-1 M_j(m) = e(alpha m^2) psi_j(m) minus the grid quadrature of F^-1 L_j."""
    if L < 1 << (j + 3):
        raise ParameterError(f"grid {L} < 2^(j+3)")
    p = TorusPoint.of(alpha)
    m = np.arange(-L // 2, L // 2, dtype=np.int64)
    km = psi_j(j, m) * kernels.quad_phase(p.num, p.den, p.offset_turns, m)
    Lg = Lj_on_grid(p, j, L, model)
    if np.any(Lg):
        km = km - np.fft.ifft(Lg)[m % L]
    cutoff = 1 << (3 * j) if 3 * j < 62 else 1 << 62
    inside = np.abs(m) <= cutoff
    kernel = Signal(-L // 2, km)
    near = Signal(-L // 2, np.where(inside, km, 0))
    far = Signal(-L // 2, np.where(inside, 0, km))
    return KernelSplit(kernel, near, far, cutoff, L)


# -- evaluators for sup-norm estimates ---------------------------------------

class MjEvaluator:
    def __init__(self, alpha, j: int):
        self.alpha, self.j = TorusPoint.of(alpha), j

    def __call__(self, betas):
        return eval_Mj(self.alpha, np.atleast_1d(betas), self.j)

    def on_grid(self, L: int) -> np.ndarray:
        return Mj_on_grid(self.alpha, self.j, L)


class EjEvaluator:
    def __init__(self, alpha, j: int, model: MultiplierModel = DEFAULT_MODEL):
        self.alpha, self.j, self.model = TorusPoint.of(alpha), j, model

    def __call__(self, betas):
        return eval_Ej(self.alpha, np.atleast_1d(betas), self.j, self.model)

    def on_grid(self, L: int) -> np.ndarray:
        return Ej_on_grid(self.alpha, self.j, L, self.model)


class LjEvaluator(EjEvaluator):
    def __call__(self, betas):
        return eval_Lj(self.alpha, np.atleast_1d(betas), self.j, self.model)

    def on_grid(self, L: int) -> np.ndarray:
        return Lj_on_grid(self.alpha, self.j, L, self.model)


class UjEvaluator:
    """beta -> U_j(x, beta) for fixed x (beta taken in [-1/2, 1/2))."""

    def __init__(self, x: float, j: int, model: MultiplierModel = DEFAULT_MODEL):
        self.x, self.j, self.model = float(x), j, model

    def __call__(self, betas):
        y = signed_diff(np.atleast_1d(betas), 0.0)
        return eval_Uj(self.x, y, self.j, self.model)


class MtruncEvaluator:
    def __init__(self, alpha, N: int):
        self.alpha, self.N = TorusPoint.of(alpha), N

    def __call__(self, betas):
        return eval_M_truncated(self.alpha, np.atleast_1d(betas), self.N)

    def on_grid(self, L: int) -> np.ndarray:
        return M_truncated_on_grid(self.alpha, self.N, L)


@dataclass
class SupEstimate:
    value: float
    argmax: float
    L: int
    refine_points: int
    oversampling: float          # grid points per unit of 2^j
    grid_error_bound: float      # 4^j / L^2: second-derivative scale times squared step
    meta: dict = field(default_factory=dict)


def refinement_centers(j: int, epsilon: float) -> list[tuple[float, int]]:
    """(B/Q, level) for every reduced B/Q with Q < 2^(epsilon j)."""
    qmax = 2.0 ** (epsilon * j)
    out = []
    Q = 1
    while Q < qmax:
        for b in range(Q):
            if math.gcd(b, Q) == 1:
                out.append((b / Q, level_of(Q)))
        Q += 1
    return out


def sup_on_grid(evaluator, j: int, L: int | None = None, epsilon: float = 0.0, polish: int = 8) -> SupEstimate:
    """max |value| over the uniform grid k/L, a fine local grid around the ``polish`` largest grid
    values, and local grids (step 10^(-s-2)) near rationals of small height."""
    L = L or 1 << (j + 3)
    if L < 1 << (j + 3):
        raise ParameterError(f"grid {L} < 2^(j+3)")
    if evaluator is None:
        return SupEstimate(0.0, 0.0, L, 0, L / 2.0**j, 4.0**j / L**2)
    if hasattr(evaluator, "on_grid"):
        vals = np.abs(evaluator.on_grid(L))
    else:
        vals = np.abs(evaluator(np.arange(L) / L))
    k = int(np.argmax(vals))
    best, arg = float(vals[k]), k / L
    # polish the largest grid maxima on a fine local grid of +-1 step
    top = np.argsort(vals)[-polish:]
    pts = [np.mod((top[:, None] + np.linspace(-1, 1, 33)[None, :]).ravel() / L, 1.0)]
    for c, s in refinement_centers(j, epsilon):
        step = 10.0 ** (-s - 2)
        rad = chi_s_radius(s)
        pts.append(np.mod(c + np.arange(-rad, rad + step / 2, step), 1.0))
    npts = 0
    if pts:
        b = np.concatenate(pts)
        npts = len(b)
        rv = np.abs(evaluator(b))
        i = int(np.argmax(rv))
        if rv[i] > best:
            best, arg = float(rv[i]), float(b[i])
    return SupEstimate(best, arg, L, npts, L / 2.0**j, 4.0**j / L**2)


def second_difference_sup(alpha, j: int, model: MultiplierModel = DEFAULT_MODEL) -> float:
    """max_beta |E(b+h) - 2E(b) + E(b-h)| / h^2 on the grid of step h = 2^(-j-4)."""
    L = 1 << (j + 4)
    E = Ej_on_grid(alpha, j, L, model)
    d2 = np.roll(E, -1) - 2 * E + np.roll(E, 1)
    return float(np.max(np.abs(d2))) * L * L

"""Modulation projections near rational frequencies and the major-arc transfer identity.

For a level s and alpha near alpha_s = A/Q, each B/Q with gcd(B, Q) = 1 gets a
frequency-localized copy of f,

    f^_{s,B/Q}(beta) = chi_s(beta)^(1/2) f^(beta + B/Q),

sampled on the grid beta = k / L over the support of chi_s.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .bumps import chi_s, chi_s_radius
from .errors import ParameterError, ResourceError
from .multiplier import DEFAULT_MODEL, MultiplierModel, eval_Ljs, eval_Uj
from .numtheory import ReducedFraction, coprime_residues, find_alpha_s, gauss_sum
from .signal import Signal, dft_at_grid
from .torus import TorusPoint, grid_turns, signed_diff


GRID_CAP = (1 << 20) + 1


def min_grid(s: int) -> int:
    return 10 ** (s + 2)


def _window(s: int, L: int) -> np.ndarray:
    half = int(math.ceil(chi_s_radius(s) * L))
    k = np.arange(-half, half + 1, dtype=np.int64)
    return k[chi_s(s, k / L) > 0]


def _shifted_dft(f: Signal, L: int, k: np.ndarray, h: ReducedFraction) -> np.ndarray:
    """f^(k/L + B/Q) with both rational parts carried exactly in fixed point."""
    if f.is_zero:
        return np.zeros(len(k), dtype=np.complex128)
    bts = grid_turns(L, k) + grid_turns(h.den, np.array([h.num]))[0]
    return kernels.nudft(f.values, f.offset, bts)


@dataclass
class ModulationFamily:
    s: int
    alpha_s: ReducedFraction | None
    L: int
    k: np.ndarray
    spectra: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.spectra)

    @property
    def fractions(self) -> list[ReducedFraction]:
        return list(self.spectra)

    def norm2(self, h: ReducedFraction) -> float:
        """||f_{s,h}||_2 by grid Plancherel."""
        return float(np.sqrt(np.sum(np.abs(self.spectra[h]) ** 2) / self.L))

    def bessel_sum(self) -> float:
        return float(sum(self.norm2(h) ** 2 for h in self.spectra))

    def component(self, h: ReducedFraction) -> Signal:
        """f_{s,h} on n in [-L/2, L/2) by inverse grid transform."""
        spec = np.zeros(self.L, dtype=np.complex128)
        spec[self.k % self.L] = self.spectra[h]
        vals = np.fft.ifft(spec)
        return Signal(-(self.L // 2), np.roll(vals, self.L // 2))

    def supports_disjoint(self) -> bool:
        """The windows {k/L + h} around distinct h never share a grid cell."""
        fr = sorted(self.spectra)
        if len(fr) < 2:
            return True
        width = (self.k[-1] - self.k[0] + 1) / self.L
        pts = np.array([h.num / h.den for h in fr])
        gaps = np.diff(np.concatenate((pts, [pts[0] + 1.0])))
        return bool(np.all(gaps > width + 1.0 / self.L))


def modulation_projection(f: Signal, s: int, alpha, L: int | None = None) -> ModulationFamily:
    if s < 1:
        raise ParameterError(f"level must be >= 1, got {s}")
    L = L or min_grid(s)
    if L < min_grid(s):
        raise ParameterError(f"grid {L} cannot resolve chi_s (need L >= {min_grid(s)})")
    if 2 * len(f.values) >= L:
        raise ParameterError(f"grid {L} too coarse for a support of length {len(f.values)}")
    aq = find_alpha_s(TorusPoint.of(alpha), s)
    k = _window(s, L)
    fam = ModulationFamily(s, aq, L, k)
    if aq is None:
        return fam
    root = np.sqrt(chi_s(s, k / L))
    for B in coprime_residues(aq.den).tolist():
        h = ReducedFraction(B, aq.den)
        fam.spectra[h] = root * _shifted_dft(f, L, k, h)
    return fam


def j_range(s: int, model: MultiplierModel, J_max: int) -> range:
    """Scales j with s <= epsilon j, up to J_max."""
    return range(max(1, math.ceil(s / model.epsilon - 1e-12)), J_max + 1)


def eval_Us(x: float, y, s: int, model: MultiplierModel, J_max: int) -> np.ndarray:
    y = np.atleast_1d(np.asarray(y, dtype=float))
    out = np.zeros(len(y), dtype=np.complex128)
    for j in j_range(s, model, J_max):
        out += eval_Uj(x, y, j, model)
    return out


@dataclass
class TransferReport:
    s: int
    alpha_s: str | None
    L: int
    js: tuple[int, int] | None
    lhs: complex
    rhs: complex
    discrepancy: float
    bound: float
    bound_ratio: float
    gauss_factor: float

    def as_dict(self) -> dict:
        return {
            "s": self.s, "alpha_s": self.alpha_s, "L": self.L, "js": self.js,
            "lhs_re": self.lhs.real, "lhs_im": self.lhs.imag,
            "rhs_re": self.rhs.real, "rhs_im": self.rhs.imag,
            "discrepancy": self.discrepancy, "bound": self.bound,
            "bound_ratio": self.bound_ratio, "gauss_factor": self.gauss_factor,
        }


def default_transfer_grid(s: int, J_max: int, *signals: Signal) -> int:
    n = max([len(f.values) for f in signals] + [1])
    need = max(min_grid(s), 1 << (J_max + 4), 16 * n)
    # odd, so the samples k/L + B/Q of the right side never coincide with the grid of the left side
    return (1 << (need - 1).bit_length()) + 1


def major_transfer_check(f: Signal, g: Signal, s: int, alpha, model: MultiplierModel = DEFAULT_MODEL,
                         J_max: int | None = None, L: int | None = None) -> TransferReport:
    """Both sides of <T f, g> for T with multiplier L^{alpha,s} = sum_j L_{j,s}.

    The left side integrates L^{alpha,s} f^ conj(g^) over the grid k/L; the
    right side is chi_s(alpha - alpha_s) sum_h S(alpha_s, h) <T_{U^s} f_{s,h}, g_{s,h}>
    computed from the modulation projections.  Both are Riemann sums of smooth,
    compactly supported integrands sampled at different points.
    """
    if J_max is None:
        J_max = math.ceil(s / model.epsilon) + 4
    L = L or default_transfer_grid(s, J_max, f, g)
    if L > GRID_CAP:
        raise ResourceError(f"transfer grid {L} exceeds 2^20 (J_max = {J_max})")
    p = TorusPoint.of(alpha)
    js = j_range(s, model, J_max)
    aq = find_alpha_s(p, s)
    if aq is None or len(js) == 0:
        return TransferReport(s, None, L, None, 0j, 0j, 0.0, 0.0, 0.0, 0.0)
    Q = aq.den
    x = p.offset if (p.num, p.den) == (aq.num, aq.den) else float(signed_diff(float(p), aq.num / Q))
    cx = float(chi_s(s, x))

    # left side on the grid k/L around every B/Q
    k0 = _window(s, L)
    lhs = 0j
    for B in coprime_residues(Q).tolist():
        c = (B * L) // Q
        k = np.arange(c + k0[0] - 2, c + k0[-1] + 3, dtype=np.int64)
        beta = (k % L) / L
        mult = sum(eval_Ljs(p, beta, j, s, model) for j in js)
        lhs += np.sum(mult * dft_at_grid(f, L, k % L) * np.conj(dft_at_grid(g, L, k % L))) / L

    # right side through the projections
    ff = modulation_projection(f, s, p, L)
    gg = modulation_projection(g, s, p, L)
    Us = eval_Us(x, ff.k / L, s, model, J_max)
    rhs = 0j
    weights = 0.0
    gmax = 0.0
    for h in ff.fractions:
        S = gauss_sum(aq.num, h.num, Q)
        rhs += cx * S * np.sum(Us * ff.spectra[h] * np.conj(gg.spectra[h])) / L
        weights += ff.norm2(h) * gg.norm2(h)
        gmax = max(gmax, abs(S))
    bound = cx * gmax * float(np.max(np.abs(Us))) * weights
    scale = max(abs(lhs), abs(rhs))
    disc = float(abs(lhs - rhs) / scale) if scale > 0 else 0.0
    return TransferReport(s, str(aq), L, (js.start, js.stop - 1), complex(lhs), complex(rhs), disc, bound,
                          float(abs(rhs) / bound) if bound > 0 else 0.0, gmax * 2 ** (s / 2))

"""Sparse collections, sparse bilinear forms and the stopping-time universal form."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import kernels
from .errors import ParameterError, StructuralError
from .signal import DiscreteInterval, Signal, Window, inner_product

STOP = 4.0


@dataclass(frozen=True)
class SparseFormParams:
    r: float = 1.0
    s: float = 1.0

    def __post_init__(self):
        if not (1 <= self.r < math.inf and 1 <= self.s < math.inf):
            raise ParameterError(f"need 1 <= r, s < inf, got ({self.r}, {self.s})")


class SparseCollection:
    """Intervals S with witness sets E_S (boolean masks over S) and a sparsity constant rho."""

    def __init__(self, entries: list[tuple[DiscreteInterval, np.ndarray]], rho: float):
        if not 0 < rho <= 1:
            raise ParameterError(f"rho must lie in (0, 1], got {rho}")
        self.rho = float(rho)
        self.entries = []
        for S, mask in entries:
            mask = np.asarray(mask, dtype=bool)
            if mask.shape != (len(S),):
                raise StructuralError(f"witness mask of length {mask.shape} for interval of length {len(S)}")
            self.entries.append((S, mask))

    @classmethod
    def from_sets(cls, entries: Iterable[tuple[DiscreteInterval, Iterable[int]]], rho: float) -> "SparseCollection":
        out = []
        for S, E in entries:
            pts = np.unique(np.asarray(list(E), dtype=np.int64))
            if len(pts) and (pts[0] < S.a or pts[-1] > S.b):
                raise StructuralError(f"witness set not contained in [{S.a}, {S.b}]")
            mask = np.zeros(len(S), dtype=bool)
            mask[pts - S.a] = True
            out.append((S, mask))
        return cls(out, rho)

    @classmethod
    def from_json(cls, obj: dict) -> "SparseCollection":
        entries = [(DiscreteInterval(*e["interval"]), e["witness"]) for e in obj["entries"]]
        return cls.from_sets(entries, obj["rho"])

    def to_json(self) -> dict:
        return {
            "rho": self.rho,
            "entries": [{"interval": [S.a, S.b], "witness": (S.a + np.flatnonzero(m)).tolist()}
                        for S, m in self.entries],
        }

    def __len__(self) -> int:
        return len(self.entries)

    def intervals(self) -> list[DiscreteInterval]:
        return [S for S, _ in self.entries]

    def hull(self) -> DiscreteInterval | None:
        if not self.entries:
            return None
        return DiscreteInterval(min(S.a for S, _ in self.entries), max(S.b for S, _ in self.entries))


@dataclass
class SparseCheck:
    ok: bool
    reason: str = ""
    entry: int | None = None
    point: int | None = None
    max_overlap: int = 0

    def __bool__(self) -> bool:
        return self.ok


def verify_sparse(c: SparseCollection) -> SparseCheck:
    """(a) |E_S| > rho |S| strictly for every S; (b) every point lies in at most ceil(1/rho) witness sets."""
    for i, (S, m) in enumerate(c.entries):
        if not int(m.sum()) > c.rho * len(S):
            return SparseCheck(False, f"|E_S| = {int(m.sum())} <= rho |S| = {c.rho * len(S):g}", entry=i)
    hull = c.hull()
    if hull is None:
        return SparseCheck(True)
    count = np.zeros(len(hull), dtype=np.int64)
    for S, m in c.entries:
        count[S.a - hull.a:S.b - hull.a + 1] += m
    cap = math.ceil(1.0 / c.rho - 1e-12)
    worst = int(np.argmax(count))
    if count[worst] > cap:
        return SparseCheck(False, f"overlap {int(count[worst])} > {cap}", point=hull.a + worst,
                           max_overlap=int(count[worst]))
    return SparseCheck(True, max_overlap=int(count[worst]))


def _prefix(f: Signal, hull: DiscreteInterval, p: float) -> np.ndarray:
    return np.concatenate(([0.0], np.cumsum(np.abs(f.on(hull)) ** p)))


def eval_sparse_form(c: SparseCollection, f: Signal, g: Signal, p: SparseFormParams) -> float:
    """sum_S <f>_{S,r} <g>_{S,s} |S|."""
    hull = c.hull()
    if hull is None:
        return 0.0
    PF, PG = _prefix(f, hull, p.r), _prefix(g, hull, p.s)
    lo = np.array([S.a - hull.a for S, _ in c.entries])
    hi = np.array([S.b - hull.a + 1 for S, _ in c.entries])
    n = hi - lo
    af = np.maximum((PF[hi] - PF[lo]) / n, 0.0) ** (1.0 / p.r)
    ag = np.maximum((PG[hi] - PG[lo]) / n, 0.0) ** (1.0 / p.s)
    return float(np.sum(af * ag * n))


def support_hull(*signals: Signal) -> DiscreteInterval | None:
    hull = None
    for f in signals:
        if not f.is_zero:
            hull = f.support if hull is None else hull.hull(f.support)
    return hull


def build_universal_sparse(f: Signal, g: Signal, p: SparseFormParams, rho: float = 0.5,
                           stop: float = STOP) -> SparseCollection:
    """Stopping-time sparse collection on the dyadic grid anchored at the support hull.

    The root is [a, a + 2^k) with a the left end of the hull.  Inside each
    selected S, the maximal dyadic subintervals I with <f>_{I,r} > stop <f>_{S,r}
    or <g>_{I,s} > stop <g>_{S,s} become children; E_S is S minus the children.
    With stop = 4 the children cover less than |S|/4 + |S|/4 of S.
    """
    hull = support_hull(f, g)
    if hull is None:
        raise StructuralError("f and g are both zero")
    k0 = max(0, (len(hull) - 1).bit_length())
    size = 1 << k0
    box = DiscreteInterval(hull.a, hull.a + size - 1)
    PF, PG = _prefix(f, box, p.r), _prefix(g, box, p.s)
    tf, tg = stop**p.r * (1 + 1e-12), stop**p.s * (1 + 1e-12)
    entries = []
    stack = [(0, k0)]
    while stack:
        lo, k = stack.pop()
        n = 1 << k
        sf, sg = PF[lo + n] - PF[lo], PG[lo + n] - PG[lo]
        covered = np.zeros(n, dtype=bool)
        for lev in range(k - 1, -1, -1):
            w = 1 << lev
            st = lo + np.arange(0, n, w)
            cf, cg = PF[st + w] - PF[st], PG[st + w] - PG[st]
            # <.>_I > stop <.>_S  <=>  sum_I |S| > stop^p sum_S |I|
            sel = ((cf * n > tf * sf * w) | (cg * n > tg * sg * w)) & ~covered[st - lo]
            for a in st[sel].tolist():
                covered[a - lo:a - lo + w] = True
                stack.append((a, lev))
        entries.append((DiscreteInterval(box.a + lo, box.a + lo + n - 1), ~covered))
    entries.sort(key=lambda e: (-len(e[0]), e[0].a))
    return SparseCollection(entries, rho)


def universal_form(f: Signal, g: Signal, p: SparseFormParams) -> float:
    return eval_sparse_form(build_universal_sparse(f, g, p), f, g, p)


def mhl(f: Signal, window: Window) -> Signal:
    """Centered Hardy-Littlewood maximal function of f on the window (exact sup over N)."""
    if f.is_zero:
        return Signal.zero()
    out = kernels.mhl(np.abs(f.values), f.offset, window.a, len(window))
    return Signal(window.a, out)


def estimate_sparse_ratio(op: Callable[[Signal], Signal], f: Signal, g: Signal, p: SparseFormParams) -> float:
    """|<op f, g>| / Lambda*_{r,s}(f, g) with the universal stopping-time form."""
    den = universal_form(f, g, p)
    if den <= 0:
        raise StructuralError("universal sparse form vanishes")
    return abs(inner_product(op(f), g)) / den


def truncated_kernel_estimate(K: Signal, p: SparseFormParams, grid: int | None = None) -> float:
    """N^(1/r + 1/s - 1) times an estimate of ||T_K : l^r -> l^s'|| for K supported in [-N, N].

    Endpoints are exact: max|K| for (1, inf) and the grid sup of |K^| for (2, 2).
    Intermediate r = s in (1, 2) interpolate with Riesz-Thorin.
    """
    if abs(p.r - p.s) > 1e-12 or not 1 <= p.r <= 2:
        raise ParameterError(f"only r = s in [1, 2] is supported, got ({p.r}, {p.s})")
    if K.is_zero:
        return 0.0
    sup = K.support
    N = max(1, abs(sup.a), abs(sup.b))
    n_inf = float(np.max(np.abs(K.values)))
    L = grid or max(64, 1 << (8 * len(K.values) - 1).bit_length())
    n_22 = float(np.max(np.abs(np.fft.fft(K.values, L))))
    theta = 2.0 - 2.0 / p.r
    norm = n_inf ** (1 - theta) * n_22**theta
    return N ** (2.0 / p.r - 1.0) * norm


def random_sparse_collection(hull: DiscreteInterval, rng: np.random.Generator, count: int,
                             rho: float = 0.5, max_len: int | None = None) -> SparseCollection:
    """Random rho-sparse collection of intervals inside the hull (witnesses drawn from free points)."""
    cap = math.ceil(1.0 / rho - 1e-12)
    used = np.zeros(len(hull), dtype=np.int64)
    max_len = max_len or len(hull)
    entries = []
    for _ in range(count):
        ln = int(rng.integers(1, min(max_len, len(hull)) + 1))
        a = int(rng.integers(0, len(hull) - ln + 1))
        need = int(math.floor(rho * ln)) + 1
        free = np.flatnonzero(used[a:a + ln] < cap)
        if len(free) < need:
            continue
        pick = rng.choice(free, size=need, replace=False)
        mask = np.zeros(ln, dtype=bool)
        mask[pick] = True
        used[a:a + ln] += mask
        entries.append((DiscreteInterval(hull.a + a, hull.a + a + ln - 1), mask))
    return SparseCollection(entries, rho)

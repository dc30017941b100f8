"""Positive weights on a window, their A_2 / RH_r characteristics, weighted norms of H^alpha."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, StructuralError
from .signal import Signal, Window, apply_halpha


@dataclass(frozen=True)
class Weight:
    window: Window
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (len(self.window),):
            raise ParameterError(f"weight has {v.shape} values for a window of length {len(self.window)}")
        if not (np.all(np.isfinite(v)) and np.all(v > 0)):
            raise ParameterError("weight values must be finite and > 0")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def inverse(self) -> "Weight":
        return Weight(self.window, 1.0 / self.values)

    def scaled(self, c: float) -> "Weight":
        return Weight(self.window, c * self.values)

    @classmethod
    def from_spec(cls, window: Window, spec) -> "Weight":
        """{"kind": "power", "exponent": x}, {"kind": "constant", "value": c} or an explicit array."""
        if isinstance(spec, dict):
            kind = spec.get("kind")
            if kind == "power":
                return power_weight(window, float(spec["exponent"]))
            if kind == "constant":
                return cls(window, np.full(len(window), float(spec.get("value", 1.0))))
            raise ParameterError(f"unknown weight kind {kind!r}")
        return cls(window, np.asarray(spec, dtype=float))


def power_weight(window: Window, gamma: float) -> Weight:
    """(1 + |n - mid|)^gamma on the window, normalized to mean 1."""
    n = np.arange(window.a, window.b + 1)
    mid = (window.a + window.b) // 2
    v = (1.0 + np.abs(n - mid)) ** gamma
    return Weight(window, v / v.mean())


def _dyadic_sums(v: np.ndarray):
    """Yield (level length, block sums) for the dyadic subintervals of the window.

    Blocks are anchored at the left end; the last block of a level may be short.
    """
    P = np.concatenate(([0.0], np.cumsum(v)))
    n = len(v)
    w = 1
    while True:
        st = np.arange(0, n, w)
        en = np.minimum(st + w, n)
        yield en - st, P[en] - P[st]
        if w >= n:
            break
        w *= 2


def a2_characteristic(w: Weight) -> float:
    """max over dyadic I of <w>_I <w^-1>_I."""
    best = 1.0
    inv = list(_dyadic_sums(1.0 / w.values))
    for (ln, sw), (_, si) in zip(_dyadic_sums(w.values), inv):
        best = max(best, float(np.max(sw * si / (ln.astype(float) ** 2))))
    return best


def rh_characteristic(w: Weight, r: float) -> float:
    """max over dyadic I of <w>_{I,r} / <w>_{I,1}."""
    if not r > 1:
        raise ParameterError(f"r must be > 1, got {r}")
    best = 1.0
    for (ln, s1), (_, sr) in zip(_dyadic_sums(w.values), _dyadic_sums(w.values**r)):
        ratio = (sr / ln) ** (1.0 / r) / (s1 / ln)
        best = max(best, float(np.max(ratio)))
    return best


def weighted_norm(h: Signal, w: Weight) -> float:
    return float(np.sqrt(np.sum(np.abs(h.on(w.window.interval)) ** 2 * w.values)))


def weighted_norm_ratio(alpha, f: Signal, w: Weight) -> float:
    """||H^alpha f||_{l^2(w)} / ||f||_{l^2(w)}, both over the window."""
    if f.is_zero:
        raise StructuralError("f is zero")
    den = weighted_norm(f, w)
    return weighted_norm(apply_halpha(f, alpha, w.window), w) / den

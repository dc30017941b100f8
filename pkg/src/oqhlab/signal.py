"""Finitely supported signals on Z and the operator H^alpha."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ParameterError, StructuralError
from .torus import TorusPoint, grid_turns


@dataclass(frozen=True)
class DiscreteInterval:
    """Integer interval [a, b]; its length is the cardinality b - a + 1."""

    a: int
    b: int

    def __post_init__(self):
        if self.b < self.a:
            raise ParameterError(f"empty interval [{self.a}, {self.b}]")

    def __len__(self) -> int:
        return self.b - self.a + 1

    def __contains__(self, n) -> bool:
        return self.a <= n <= self.b

    def contains(self, other: "DiscreteInterval") -> bool:
        return self.a <= other.a and other.b <= self.b

    def points(self) -> np.ndarray:
        return np.arange(self.a, self.b + 1, dtype=np.int64)

    def hull(self, other: "DiscreteInterval") -> "DiscreteInterval":
        return DiscreteInterval(min(self.a, other.a), max(self.b, other.b))


@dataclass(frozen=True)
class Window:
    interval: DiscreteInterval

    @classmethod
    def of(cls, a: int, b: int) -> "Window":
        return cls(DiscreteInterval(a, b))

    @classmethod
    def around(cls, *signals: "Signal", factor: float = 4.0) -> "Window":
        """Support hull of the signals widened by ``factor`` times its length on each side."""
        hull = None
        for f in signals:
            sup = f.support
            if sup is not None:
                hull = sup if hull is None else hull.hull(sup)
        if hull is None:
            return cls.of(0, 0)
        pad = int(math.ceil(factor * len(hull)))
        return cls.of(hull.a - pad, hull.b + pad)

    def __len__(self) -> int:
        return len(self.interval)

    @property
    def a(self) -> int:
        return self.interval.a

    @property
    def b(self) -> int:
        return self.interval.b


class Signal:
    """Complex function on Z with finite support, stored as (offset, dense values).

    Values are trimmed so the first and last stored entries are nonzero; the zero
    signal has no stored values.
    """

    __slots__ = ("offset", "values")

    def __init__(self, offset: int, values):
        v = np.array(values, dtype=np.complex128).ravel()
        nz = np.flatnonzero(v)
        if len(nz) == 0:
            offset, v = 0, v[:0]
        else:
            offset, v = int(offset) + int(nz[0]), v[nz[0]:nz[-1] + 1]
        v.setflags(write=False)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "values", v)

    def __setattr__(self, name, value):
        raise AttributeError("Signal is immutable")

    @classmethod
    def delta(cls, n: int = 0, value: complex = 1.0) -> "Signal":
        return cls(n, [value])

    @classmethod
    def indicator(cls, a: int, b: int) -> "Signal":
        return cls(a, np.ones(b - a + 1))

    @classmethod
    def zero(cls) -> "Signal":
        return cls(0, [])

    @property
    def support(self) -> DiscreteInterval | None:
        if len(self.values) == 0:
            return None
        return DiscreteInterval(self.offset, self.offset + len(self.values) - 1)

    @property
    def is_zero(self) -> bool:
        return len(self.values) == 0

    def __call__(self, n):
        n = np.asarray(n, dtype=np.int64)
        idx = n - self.offset
        ok = (idx >= 0) & (idx < len(self.values))
        out = np.zeros(n.shape, dtype=np.complex128)
        out[ok] = self.values[idx[ok]]
        return out if out.ndim else complex(out)

    def on(self, interval: DiscreteInterval) -> np.ndarray:
        """Dense values on the interval (zeros off the support)."""
        return self(interval.points())

    def conj(self) -> "Signal":
        return Signal(self.offset, np.conj(self.values))

    def abs(self) -> "Signal":
        return Signal(self.offset, np.abs(self.values))

    def norm2(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2)))

    def __add__(self, other: "Signal") -> "Signal":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        hull = self.support.hull(other.support)
        return Signal(hull.a, self.on(hull) + other.on(hull))

    def __sub__(self, other: "Signal") -> "Signal":
        return self + (-1.0) * other

    def __mul__(self, c) -> "Signal":
        return Signal(self.offset, complex(c) * self.values)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (isinstance(other, Signal) and self.offset == other.offset
                and np.array_equal(self.values, other.values))

    def __repr__(self) -> str:
        return f"Signal(offset={self.offset}, len={len(self.values)})"

    def to_json(self) -> dict:
        return {"offset": self.offset, "re": self.values.real.tolist(), "im": self.values.imag.tolist()}

    @classmethod
    def from_json(cls, obj) -> "Signal":
        if isinstance(obj, str):
            obj = json.loads(obj)
        re = np.asarray(obj.get("re", []), dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise StructuralError("re and im arrays differ in length")
        return cls(int(obj["offset"]), re + 1j * im)


def inner_product(f: Signal, g: Signal) -> complex:
    """sum_n f(n) conj(g(n))."""
    if f.is_zero or g.is_zero:
        return 0j
    a = max(f.offset, g.offset)
    b = min(f.support.b, g.support.b)
    if b < a:
        return 0j
    I = DiscreteInterval(a, b)
    return complex(np.sum(f.on(I) * np.conj(g.on(I))))


def lr_average(f: Signal, I: DiscreteInterval, r: float) -> float:
    """L^r average [|I|^-1 sum_{x in I} |f(x)|^r]^(1/r)."""
    if not r >= 1:
        raise ParameterError(f"r must be >= 1, got {r}")
    vals = np.abs(f.on(I))
    return float(np.mean(vals**r) ** (1.0 / r))


def halpha_kernel(alpha, lo: int, hi: int) -> np.ndarray:
    """e(alpha m^2)/m for m in [lo, hi] (0 at m = 0)."""
    p = TorusPoint.of(alpha)
    m = np.arange(lo, hi + 1, dtype=np.int64)
    k = kernels.quad_phase(p.num, p.den, p.offset_turns, m)
    nz = m != 0
    k[nz] /= m[nz]
    k[~nz] = 0.0
    return k


def _next_pow2(n: int) -> int:
    return 1 << max(0, int(n - 1).bit_length())


def apply_halpha(f: Signal, alpha, window: Window | None = None, method: str = "fft") -> Signal:
    """H^alpha f(n) = sum_{m != 0} e(alpha m^2) f(n - m) / m, for n in the window.

    The sum is finite for each n; ``direct`` sums it term by term and ``fft``
    does the same linear convolution through a zero-padded FFT.
    """
    if window is None:
        window = Window.around(f)
    if f.is_zero:
        return Signal.zero()
    sup = f.support
    if not window.interval.contains(sup):
        raise ParameterError(f"window [{window.a}, {window.b}] does not cover support [{sup.a}, {sup.b}]")
    nf, nw = len(f.values), len(window)
    kern = halpha_kernel(alpha, window.a - sup.b, window.b - sup.a)
    if method == "direct":
        out = kernels.conv_direct(f.values, kern, nw)
    elif method == "fft":
        size = _next_pow2(nw + nf)
        full = np.fft.ifft(np.fft.fft(f.values, size) * np.fft.fft(kern, size))
        out = full[nf - 1:nf - 1 + nw]
    else:
        raise ParameterError(f"unknown method {method!r}")
    return Signal(window.a, out)


def dft_on_grid(f: Signal, L: int) -> np.ndarray:
    """f^(k/L) = sum_n f(n) e(-k n / L), k = 0..L-1."""
    if L < max(1, len(f.values)):
        raise ParameterError(f"grid size {L} smaller than support length {len(f.values)}")
    if f.is_zero:
        return np.zeros(L, dtype=np.complex128)
    spec = np.fft.fft(f.values, L)
    k = np.arange(L, dtype=np.int64)
    # e(-k offset / L) with the product reduced mod L exactly
    shift = (k * (f.offset % L)) % L
    return spec * np.exp(-2j * np.pi * shift / L)


def dft_at(f: Signal, betas) -> np.ndarray:
    """f^(beta) at arbitrary real frequencies (direct summation)."""
    from .torus import floats_to_turns

    betas = np.atleast_1d(np.asarray(betas, dtype=float))
    if f.is_zero:
        return np.zeros(len(betas), dtype=np.complex128)
    return kernels.nudft(f.values, f.offset, floats_to_turns(betas))


def dft_at_grid(f: Signal, L: int, k) -> np.ndarray:
    """f^(k/L) for integer k, with exact phases."""
    if f.is_zero:
        return np.zeros(np.shape(k), dtype=np.complex128)
    return kernels.nudft(f.values, f.offset, grid_turns(L, k))

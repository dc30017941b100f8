"""Points of the torus R/Z with exact phase bookkeeping.

A :class:`TorusPoint` is a reduced rational ``num/den`` plus a fixed-point offset
of ``offset_turns / 2**64``.  Rationals keep their phase exact under integer
arithmetic mod ``den``; decimal inputs live entirely in the offset.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ParameterError

TWO64 = 1 << 64
MASK64 = TWO64 - 1

NAMED = {
    "golden-1": (math.sqrt(5.0) - 1.0) / 2.0,
    "sqrt2-1": math.sqrt(2.0) - 1.0,
    "pi-3": math.pi - 3.0,
}


def float_to_turns(x: float) -> int:
    """Nearest 2^-64 fixed-point representative of x mod 1 (exact rational arithmetic)."""
    return round((Fraction(x) % 1) * TWO64) % TWO64


def turns_to_signed(t: int) -> float:
    """Turns as a float in [-1/2, 1/2)."""
    t %= TWO64
    return (t - TWO64 if t >= TWO64 // 2 else t) / TWO64


def floats_to_turns(x) -> np.ndarray:
    """Vectorized :func:`float_to_turns` (round-half-even on the last bit)."""
    x = np.mod(np.asarray(x, dtype=np.float64), 1.0)
    hi = np.floor(x * 2.0**32)
    lo = np.rint((x * 2.0**32 - hi) * 2.0**32)
    return (hi.astype(np.uint64) << np.uint64(32)) + lo.astype(np.uint64)


def grid_turns(L: int, k=None) -> np.ndarray:
    """Exact turns of k/L (k defaults to 0..L-1), rounded to nearest."""
    if k is None:
        k = np.arange(L, dtype=np.int64)
    k = np.mod(np.asarray(k, dtype=np.int64), L)
    q, r = divmod(TWO64, L)
    return k.astype(np.uint64) * np.uint64(q % TWO64) + ((k * r + L // 2) // L).astype(np.uint64)


def torus_dist(x, y):
    """min(|x - y| mod 1, 1 - |x - y| mod 1)."""
    d = np.mod(np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float)), 1.0)
    return np.minimum(d, 1.0 - d)


def signed_diff(x, y):
    """Representative of x - y in [-1/2, 1/2)."""
    return np.mod(np.asarray(x, dtype=float) - np.asarray(y, dtype=float) + 0.5, 1.0) - 0.5


@dataclass(frozen=True)
class TorusPoint:
    num: int = 0
    den: int = 1
    offset_turns: int = 0

    def __post_init__(self):
        if self.den < 1 or math.gcd(self.num, self.den) != 1 or not 0 <= self.num < max(self.den, 1):
            if not (self.num == 0 and self.den == 1):
                raise ParameterError(f"base {self.num}/{self.den} is not a reduced fraction in [0,1)")
        object.__setattr__(self, "offset_turns", self.offset_turns % TWO64)

    @classmethod
    def of(cls, value) -> "TorusPoint":
        """Accepts TorusPoint, anything with ``num``/``den``, Fraction, int, float or str."""
        if isinstance(value, TorusPoint):
            return value
        if hasattr(value, "num") and hasattr(value, "den"):
            return cls.rational(value.num, value.den)
        if isinstance(value, Fraction) or isinstance(value, int):
            fr = Fraction(value)
            return cls.rational(fr.numerator, fr.denominator)
        if isinstance(value, str):
            return parse_torus(value)
        if isinstance(value, (float, np.floating)):
            return cls(0, 1, float_to_turns(float(value)))
        raise ParameterError(f"cannot interpret {value!r} as a point of the torus")

    @classmethod
    def rational(cls, num: int, den: int) -> "TorusPoint":
        if den == 0:
            raise ParameterError("zero denominator")
        fr = Fraction(num, den) % 1
        return cls(fr.numerator, fr.denominator, 0)

    def with_offset(self, x: float) -> "TorusPoint":
        """Shift by a small real x (stored in fixed point)."""
        return TorusPoint(self.num, self.den, self.offset_turns + float_to_turns(x))

    @property
    def offset(self) -> float:
        return turns_to_signed(self.offset_turns)

    @property
    def is_rational(self) -> bool:
        return self.offset_turns == 0

    def turns(self) -> int:
        base = (self.num * TWO64 + self.den // 2) // self.den
        return (base + self.offset_turns) % TWO64

    def __float__(self) -> float:
        return float((Fraction(self.num, self.den) + Fraction(self.offset_turns, TWO64)) % 1)

    def __neg__(self) -> "TorusPoint":
        return TorusPoint((-self.num) % self.den, self.den, -self.offset_turns)

    def __str__(self) -> str:
        if self.is_rational:
            return f"{self.num}/{self.den}"
        if self.num == 0:
            return repr(float(self))
        return f"{self.num}/{self.den}{self.offset:+.17g}"


def parse_torus(text: str) -> TorusPoint:
    """Parse "A/Q", a decimal, a named constant ("golden-1", "sqrt2-1", "pi-3") or "A/Q+x"."""
    s = text.strip()
    if s in NAMED:
        return TorusPoint.of(NAMED[s])
    if "/" in s:
        head, _, tail = s.partition("/")
        for i, ch in enumerate(tail):
            if ch in "+-" and i > 0:
                base = TorusPoint.rational(int(head), int(tail[:i]))
                return base.with_offset(float(tail[i:]))
        try:
            return TorusPoint.rational(int(head), int(tail))
        except ValueError as exc:
            raise ParameterError(f"bad fraction {text!r}") from exc
    try:
        return TorusPoint.of(float(s))
    except ValueError as exc:
        raise ParameterError(f"bad torus point {text!r}") from exc

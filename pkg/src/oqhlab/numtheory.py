"""Reduced fractions, rational levels, complete Gauss sums and major-arc geometry.

Level convention: level 1 holds the denominators Q in {1, 2}; level s >= 2 holds
2^(s-1) < Q <= 2^s.  The levels partition the positive integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import kernels
from .bumps import chi_s_radius
from .errors import ParameterError, ResourceError
from .torus import TorusPoint, torus_dist

LEVEL_CAP = 8           # materialized levels; R_9 already holds ~2.3e7 pairs
DISJOINT_Q_CAP = 1 << 12


@dataclass(frozen=True, order=True)
class ReducedFraction:
    num: int
    den: int

    def __post_init__(self):
        if self.den < 1:
            raise ParameterError(f"denominator must be >= 1, got {self.den}")
        if math.gcd(self.num, self.den) != 1 or not 0 <= self.num < self.den:
            if (self.num, self.den) != (0, 1):
                raise ParameterError(f"{self.num}/{self.den} is not reduced in [0, 1)")

    @classmethod
    def parse(cls, text: str) -> "ReducedFraction":
        a, _, q = text.partition("/")
        return cls.of(Fraction(int(a), int(q or 1)))

    @classmethod
    def of(cls, x) -> "ReducedFraction":
        fr = Fraction(x) % 1
        return cls(fr.numerator, fr.denominator)

    def __float__(self) -> float:
        return self.num / self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def level_range(s: int) -> tuple[int, int]:
    """Inclusive denominator range of level s."""
    if s < 1:
        raise ParameterError(f"level must be >= 1, got {s}")
    if s == 1:
        return 1, 2
    return (1 << (s - 1)) + 1, 1 << s


def level_of(Q: int) -> int:
    return 1 if Q <= 2 else (Q - 1).bit_length()


def coprime_residues(Q: int) -> np.ndarray:
    if Q == 1:
        return np.zeros(1, dtype=np.int64)
    r = np.arange(1, Q, dtype=np.int64)
    return r[np.gcd(r, Q) == 1]


def totient(Q: int) -> int:
    return len(coprime_residues(Q))


@dataclass(frozen=True)
class RationalPairLevel:
    """All pairs (A/Q, B/Q) of level s, stored column-wise."""

    s: int
    A: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)
    Q: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.Q)

    @property
    def pairs(self) -> Iterator[tuple[ReducedFraction, ReducedFraction]]:
        for a, b, q in zip(self.A.tolist(), self.B.tolist(), self.Q.tolist()):
            yield ReducedFraction(a, q), ReducedFraction(b, q)


def enumerate_level(s: int) -> RationalPairLevel:
    if s > LEVEL_CAP:
        raise ResourceError(f"level {s} exceeds materialization cap {LEVEL_CAP}")
    lo, hi = level_range(s)
    As, Bs, Qs = [], [], []
    for Q in range(lo, hi + 1):
        u = coprime_residues(Q)
        a, b = np.meshgrid(u, u, indexing="ij")
        As.append(a.ravel())
        Bs.append(b.ravel())
        Qs.append(np.full(a.size, Q, dtype=np.int64))
    return RationalPairLevel(s, np.concatenate(As), np.concatenate(Bs), np.concatenate(Qs))


def gauss_sum(A: int, B: int, Q: int) -> complex:
    """S(A/Q, B/Q) = Q^-1 sum_{r<Q} e(A r^2/Q - B r/Q), phases reduced mod Q in integers."""
    if Q < 1:
        raise ParameterError(f"Q must be >= 1, got {Q}")
    if math.gcd(A, Q) != 1:
        raise ParameterError(f"gcd({A}, {Q}) != 1")
    return kernels.gauss_exact(A, B, Q)


def gauss_table(Q: int, A=None) -> tuple[np.ndarray, np.ndarray]:
    """S(A/Q, B/Q) for every coprime A (or the given ones) and every B = 0..Q-1, via one FFT per row.

    Returns ``(A_values, table)`` with ``table[i, B]``.
    """
    A = coprime_residues(Q) if A is None else np.atleast_1d(np.asarray(A, dtype=np.int64))
    r = np.arange(Q, dtype=np.int64)
    k = (A[:, None] * (r * r % Q)[None, :]) % Q
    rows = np.exp(2j * np.pi * k / Q)
    # sum_r rows[r] e(-B r / Q) is exactly the forward DFT
    return A, np.fft.fft(rows, axis=1) / Q


def level_gauss_max(s: int) -> tuple[float, tuple[int, int, int]]:
    """max |S| over R_s without materializing the level; also returns the argmax (A, B, Q)."""
    lo, hi = level_range(s)
    best, arg = -1.0, (0, 0, 1)
    for Q in range(lo, hi + 1):
        A, tab = gauss_table(Q)
        u = coprime_residues(Q)
        mags = np.abs(tab[:, u])
        i, k = np.unravel_index(int(np.argmax(mags)), mags.shape)
        if mags[i, k] > best:
            best, arg = float(mags[i, k]), (int(A[i]), int(u[k]), Q)
    return best, arg


def find_alpha_s(alpha, s: int) -> ReducedFraction | None:
    """The unique level-s fraction A/Q within the open chi_s radius of alpha, if any."""
    x = float(TorusPoint.of(alpha))
    lo, hi = level_range(s)
    rad = chi_s_radius(s)
    Q = np.arange(lo, hi + 1, dtype=np.int64)
    A = np.mod(np.rint(x * Q).astype(np.int64), Q)
    ok = (np.gcd(A, Q) == 1) & (torus_dist(x, A / Q) < rad)
    hits = np.flatnonzero(ok)
    if len(hits) == 0:
        return None
    i = hits[0]
    return ReducedFraction(int(A[i]) % int(Q[i]), int(Q[i]))


def find_beta_window(beta, Q: int, s: int) -> ReducedFraction | None:
    """The fraction B/Q (gcd(B, Q) = 1) within the chi_s radius of beta, if any."""
    y = float(TorusPoint.of(beta))
    B = int(round(y * Q)) % Q
    if math.gcd(B, Q) == 1 and torus_dist(y, B / Q) < chi_s_radius(s):
        return ReducedFraction(B, Q)
    return None


def convergents(x: float, max_den: int) -> list[Fraction]:
    """Continued-fraction convergents of x in [0, 1) with denominator <= max_den."""
    out = []
    h0, h1, k0, k1 = 0, 1, 1, 0
    fr = Fraction(x)
    while True:
        a = fr.numerator // fr.denominator
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_den:
            break
        out.append(Fraction(h1, k1))
        rest = fr - a
        if rest == 0:
            break
        fr = 1 / rest
    return out


def best_approximation(x: float, max_den: int) -> Fraction:
    """Closest fraction to x with denominator <= max_den (ties toward the smaller denominator)."""
    fr = Fraction(x)
    lo, hi = Fraction(0), Fraction(1)
    for c in convergents(x, max_den):
        (lo, hi) = (c, hi) if c <= fr else (lo, c)
    # semiconvergent step between the last two brackets (Stern-Brocot descent)
    cands = [lo, hi]
    while True:
        med = Fraction(lo.numerator + hi.numerator, lo.denominator + hi.denominator)
        if med.denominator > max_den:
            break
        cands.append(med)
        if med <= fr:
            lo = med
        else:
            hi = med
    return min(cands, key=lambda c: (abs(c - fr), c.denominator))


@dataclass(frozen=True)
class ArcParams:
    epsilon: float
    j: int

    def __post_init__(self):
        if not 0 < self.epsilon <= 0.5:
            raise ParameterError(f"epsilon must lie in (0, 1/2], got {self.epsilon}")
        if self.j < 1:
            raise ParameterError(f"j must be >= 1, got {self.j}")

    @property
    def max_den(self) -> int:
        return int(math.floor(2.0 ** (6 * self.epsilon * self.j) + 1e-9))

    @property
    def alpha_radius(self) -> float:
        return 2.0 ** ((self.epsilon - 2) * self.j)

    @property
    def beta_radius(self) -> float:
        return 2.0 ** ((self.epsilon - 1) * self.j)

    @property
    def max_level(self) -> int:
        """Largest s with s <= epsilon j."""
        return int(math.floor(self.epsilon * self.j + 1e-12))


def _beta_partner(y: float, Q: int, rad: float) -> int | None:
    B = int(round(y * Q)) % Q
    if math.gcd(B, Q) == 1 and torus_dist(y, B / Q) <= rad:
        return B
    return None


def locate_major_arc(alpha, beta, params: ArcParams, epsilon_override: float | None = None):
    """The box (A/Q, B/Q) of the j-th major-arc collection containing (alpha, beta), or None.

    Candidates come from continued-fraction convergents of alpha, which is complete
    whenever 2 Q_max^2 r_alpha < 1 (Legendre); otherwise every Q <= Q_max is scanned.
    """
    x = float(TorusPoint.of(alpha))
    y = float(TorusPoint.of(beta))
    qmax, ra, rb = params.max_den, params.alpha_radius, params.beta_radius
    if 2.0 * qmax * qmax * ra < 1.0:
        cands = [(c.numerator % c.denominator, c.denominator) for c in convergents(x, qmax)]
        # x close to 1 approximates 0/1 from above on the torus
        cands.append((0, 1))
    else:
        if qmax > 1 << 22:
            raise ResourceError(f"scan over Q <= {qmax} exceeds cap")
        Q = np.arange(1, qmax + 1, dtype=np.int64)
        A = np.mod(np.rint(x * Q).astype(np.int64), Q)
        ok = (np.gcd(A, Q) == 1) & (torus_dist(x, A / Q) <= ra)
        cands = list(zip(A[ok].tolist(), Q[ok].tolist()))
    for A, Q in sorted(set(cands), key=lambda t: t[1]):
        if math.gcd(A, Q) != 1 or torus_dist(x, A / Q) > ra:
            continue
        B = _beta_partner(y, Q, rb)
        if B is not None:
            return ReducedFraction(A, Q), ReducedFraction(B, Q)
    return None


def farey_centers(qmax: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All reduced A/Q in [0, 1) with Q <= qmax, sorted by value: (values, A, Q)."""
    As, Qs = [], []
    for Q in range(1, qmax + 1):
        u = coprime_residues(Q)
        As.append(u)
        Qs.append(np.full(len(u), Q, dtype=np.int64))
    A = np.concatenate(As)
    Q = np.concatenate(Qs)
    v = A / Q
    order = np.argsort(v, kind="stable")
    return v[order], A[order], Q[order]


@dataclass
class DisjointnessReport:
    disjoint: bool
    worst_pair: tuple | None
    min_alpha_gap: float
    alpha_overlaps: int
    boxes: int


def _beta_overlap(Q1: int, Q2: int, rad: float):
    """Closest pair B1/Q1, B2/Q2 (coprime numerators); returns (dist, B1, B2)."""
    u1, u2 = coprime_residues(Q1), coprime_residues(Q2)
    best = (2.0, None, None)
    for b1 in u1.tolist():
        d = torus_dist(b1 / Q1, u2 / Q2)
        k = int(np.argmin(d))
        if d[k] < best[0]:
            best = (float(d[k]), b1, int(u2[k]))
    return best


def _min_residue_gap(q: int) -> tuple[float, int, int]:
    u = coprime_residues(q)
    d = np.diff(np.concatenate((u, [u[0] + q]))) / q
    k = int(np.argmin(d))
    return float(d[k]), int(u[k]), int(u[(k + 1) % len(u)])


def verify_major_arc_disjointness(params: ArcParams, inflate: float = 1.0) -> DisjointnessReport:
    """Exhaustive pairwise disjointness of the boxes with Q <= 2^(6 eps j).

    Two boxes meet iff their alpha- and beta-projections both meet.  Boxes sharing
    an alpha-center share Q, so only their beta-centers need separating; boxes with
    different alpha-centers are examined for every pair of centers within
    2 r_alpha (sorted sweep).  Stops at the first intersecting pair.  ``inflate``
    scales both radii (test hook).
    """
    qmax = params.max_den
    if qmax > DISJOINT_Q_CAP:
        raise ResourceError(f"Q_max = {qmax} exceeds enumeration cap {DISJOINT_Q_CAP}")
    ra, rb = params.alpha_radius * inflate, params.beta_radius * inflate
    v, A, Q = farey_centers(qmax)
    n = len(v)
    boxes = int(sum(totient(q) ** 2 for q in range(1, qmax + 1)))
    min_gap = float(np.min(torus_dist(v, np.roll(v, -1)))) if n > 1 else 1.0

    for q in range(3, qmax + 1):
        gap, b1, b2 = _min_residue_gap(q)
        if gap <= 2 * rb:
            a = int(coprime_residues(q)[0])
            pair = ((ReducedFraction(a, q), ReducedFraction(b1, q)), (ReducedFraction(a, q), ReducedFraction(b2, q)))
            return DisjointnessReport(False, pair, min_gap, 0, boxes)

    overlaps = 0
    for w in range(1, n // 2 + 1):
        k_all = (np.arange(n) + w) % n
        idx = np.flatnonzero(torus_dist(v, v[k_all]) <= 2 * ra)
        if len(idx) == 0:
            break
        for i in idx.tolist():
            k = int(k_all[i])
            overlaps += 1
            dist, b1, b2 = _beta_overlap(int(Q[i]), int(Q[k]), rb)
            if dist <= 2 * rb:
                pair = ((ReducedFraction(int(A[i]), int(Q[i])), ReducedFraction(b1, int(Q[i]))),
                        (ReducedFraction(int(A[k]), int(Q[k])), ReducedFraction(b2, int(Q[k]))))
                return DisjointnessReport(False, pair, min_gap, overlaps, boxes)
    return DisjointnessReport(True, None, min_gap, overlaps, boxes)

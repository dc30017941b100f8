"""Smooth cutoffs: the dyadic resolution psi_j of 1/t and the frequency bump chi_s.

Everything is built from the smooth step ``h(y) = f(y) / (f(y) + f(1 - y))`` with
``f(x) = exp(-1/x)`` for ``x > 0``.  ``phi(t) = h(2(1 - |t|))`` equals 1 on
``[-1/2, 1/2]`` and vanishes outside ``(-1, 1)``.  Then

* ``rho(u) = phi(u) - phi(2u)`` lives on ``1/4 < |u| < 1`` and is a dyadic
  partition of unity, so ``psi(u) = rho(u) / u`` telescopes:
  ``sum_{j=0}^{J} psi_j(t) = 1/t`` for ``1 <= |t| <= 2**(J-1)``;
* ``chi(t) = phi(5 t)`` is 1 on ``[-1/10, 1/10]`` and 0 outside ``(-1/5, 1/5)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


def _f(x):
    pos = x > 0
    return np.where(pos, np.exp(-1.0 / np.where(pos, x, 1.0)), 0.0)


def smooth_step(y):
    """C-infinity step: 0 for y <= 0, 1 for y >= 1."""
    y = np.asarray(y, dtype=float)
    a = _f(y)
    b = _f(1.0 - y)
    return a / (a + b)


def phi(t):
    return smooth_step(2.0 * (1.0 - np.abs(np.asarray(t, dtype=float))))


def rho(u):
    # phi(u) - phi(2u), written per branch so no cancellation occurs near |u| = 1/4
    a = np.abs(np.asarray(u, dtype=float))
    return np.where(a <= 0.5, smooth_step(4.0 * a - 1.0), smooth_step(2.0 - 2.0 * a))


def psi(u):
    u = np.asarray(u, dtype=float)
    nz = u != 0
    return np.where(nz, rho(u) / np.where(nz, u, 1.0), 0.0)


def psi_j(j: int, t):
    """``2**-j * psi(2**-j t)``, i.e. ``rho(t / 2**j) / t``; odd, supported on 2**(j-2) <= |t| <= 2**j."""
    t = np.asarray(t, dtype=float)
    nz = t != 0
    return np.where(nz, rho(t / 2.0**j) / np.where(nz, t, 1.0), 0.0)


def chi(t):
    return phi(5.0 * np.asarray(t, dtype=float))


def chi_s(s: int, t):
    """``chi(10**s t)``: equal to 1 for |t| <= 10**-s / 10, zero for |t| >= 10**-s / 5."""
    return chi(10.0**s * np.asarray(t, dtype=float))


def chi_s_radius(s: int) -> float:
    """Open support radius of chi_s."""
    return 0.2 * 10.0 ** (-s)


@dataclass(frozen=True)
class BumpFunction:
    kind: str
    evaluator: Callable
    support: tuple[float, float]  # bounds on |t| outside of which the function vanishes

    def __call__(self, t):
        return self.evaluator(t)

    def check(self, samples: int = 20001) -> dict:
        """Grid check of the structural invariants; returns the worst violations."""
        lo, hi = self.support
        t = np.linspace(-1.5 * hi, 1.5 * hi, samples)
        v = self.evaluator(t)
        out = {"kind": self.kind}
        outside = (np.abs(t) < lo) | (np.abs(t) > hi)
        out["max_outside_support"] = float(np.max(np.abs(v[outside]), initial=0.0))
        if self.kind == "psi-base":
            out["odd_defect"] = float(np.max(np.abs(v + self.evaluator(-t))))
            # |t psi(t)| = rho(t) must sit inside [0, 1]
            tv = t * v
            out["rho_range"] = (float(tv.min()), float(tv.max()))
        else:
            out["even_defect"] = float(np.max(np.abs(v - self.evaluator(-t))))
            inner = np.abs(t) <= 0.1
            out["min_on_plateau"] = float(v[inner].min())
            out["max_value"] = float(v.max())
        return out


PSI = BumpFunction("psi-base", psi, (0.25, 1.0))
CHI = BumpFunction("chi-base", chi, (0.0, 0.2))

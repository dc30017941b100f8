import math

import numpy as np
import pytest

from oqhlab.bumps import psi_j
from oqhlab.errors import ParameterError, ResourceError
from oqhlab.multiplier import (EjEvaluator, MjEvaluator, MultiplierModel, Ej_on_grid, M_truncated_on_grid,
                               Mj_on_grid, eval_Ej, eval_Lj, eval_Ljs, eval_M_truncated, eval_Mj, eval_psi_j,
                               eval_Uj, kernel_Ej, second_difference_sup, sup_on_grid)
from oqhlab.numtheory import gauss_sum
from oqhlab.torus import TorusPoint, parse_torus

GOLD = parse_torus("golden-1")


def direct_Mj(alpha, beta, j):
    m = np.arange(-(1 << j), (1 << j) + 1)
    return np.sum(np.exp(2j * np.pi * (alpha * m.astype(float) ** 2 - beta * m)) * psi_j(j, m))


def test_partition_identity_on_integers():
    m = np.arange(1, (1 << 20) + 1, dtype=float)
    total = np.zeros_like(m)
    for j in range(0, 23):
        total += eval_psi_j(j, m)
    assert np.max(np.abs(total - 1 / m)) < 1e-10


def test_Mj_examples():
    assert abs(eval_Mj(0.0, 0.0, 7)) < 1e-13
    rng = np.random.default_rng(0)
    for _ in range(5):
        a, b, j = rng.random(), rng.random(), int(rng.integers(1, 10))
        assert abs(eval_Mj(-TorusPoint.of(a), -b, j) - np.conj(eval_Mj(a, b, j))) < 1e-12
        assert abs(eval_Mj(a, b, j) - direct_Mj(a, b, j)) < 1e-9
    with pytest.raises(ResourceError):
        eval_Mj(0.1, 0.1, 27)


def test_Mj_grid_matches_pointwise():
    L = 1 << 10
    grid = Mj_on_grid(parse_torus("1/3"), 6, L)
    k = np.array([0, 5, 100, 777])
    assert np.allclose(grid[k], eval_Mj(parse_torus("1/3"), k / L, 6), atol=1e-12)


def test_M_truncated_examples():
    a, b = 0.3, 0.1
    want = np.exp(2j * np.pi * (a - b)) - np.exp(2j * np.pi * (a + b))
    assert abs(eval_M_truncated(a, b, 1) - want) < 1e-14
    assert abs(eval_M_truncated(0.0, 0.25, 10**5) + 1j * math.pi / 2) < 1e-3
    assert abs(eval_M_truncated(0.0, 0.75, 10**5) - 1j * math.pi / 2) < 1e-3
    grid = M_truncated_on_grid(0.2, 50, 256)
    assert abs(grid[17] - eval_M_truncated(0.2, 17 / 256, 50)) < 1e-12


def test_Uj_symmetries():
    assert abs(eval_Uj(0.003, 0.0, 7)) < 1e-9
    v = eval_Uj(0.0, np.linspace(-0.1, 0.1, 21), 6)
    assert np.max(np.abs(v.real)) < 1e-9


def test_Uj_riemann_oracle():
    j, y = 6, 0.01
    t = np.linspace(-(2.0**j), 2.0**j, 640001)
    h = t[1] - t[0]
    oracle = np.sum(np.exp(-2j * np.pi * y * t) * psi_j(j, t)) * h
    assert abs(eval_Uj(0.0, y, j) - oracle) < 1e-8


def test_Uj_tolerance_must_be_positive():
    with pytest.raises(ParameterError):
        MultiplierModel(tol=0)
    with pytest.raises(ParameterError):
        MultiplierModel(panels_per_oscillation=2)


def test_Ljs_examples():
    model = MultiplierModel(epsilon=0.15)
    assert eval_Ljs(0.25 + 0.01, 0.3, 10, 1, model) == 0
    assert abs(eval_Ljs(0.5, 0.5, 8, 1, model)) < 1e-9
    assert eval_Ljs(1 / 3, 1 / 3 + 1e-2, 14, 2, model) == 0
    x, y = 1e-6, 2e-3
    want = gauss_sum(1, 1, 2) * eval_Uj(x, y, 9, model)
    got = eval_Ljs(TorusPoint.rational(1, 2).with_offset(x), 0.5 + y, 9, 1, model)
    assert abs(got - want) < 1e-12


def test_Ej_is_Mj_without_levels():
    model = MultiplierModel(epsilon=0.05)
    b = np.linspace(0, 1, 17)
    assert np.array_equal(eval_Ej(0.37, b, 12, model), eval_Mj(0.37, b, 12))
    assert np.all(eval_Lj(0.37, b, 12, model) == 0)


def test_Ej_small_on_major_arc():
    model = MultiplierModel(epsilon=0.2)
    alpha = TorusPoint.rational(1, 3).with_offset(1e-7)
    M = eval_Mj(alpha, 1 / 3 + 1e-4, 12)
    E = eval_Ej(alpha, 1 / 3 + 1e-4, 12, model)
    assert abs(M) > 0.1 and abs(E) < 1e-8


def test_kernel_Ej():
    model = MultiplierModel(epsilon=0.05)
    ks = kernel_Ej(0.37, 8, 1 << 11, model)
    m = np.arange(-(1 << 10), 1 << 10)
    want = psi_j(8, m) * np.exp(2j * np.pi * 0.37 * m.astype(float) ** 2)
    assert np.allclose(ks.kernel.on(__import__("oqhlab").DiscreteInterval(-(1 << 10), (1 << 10) - 1)), want, atol=1e-12)
    assert ks.far_empty
    with pytest.raises(ParameterError):
        kernel_Ej(0.37, 8, 1 << 10, model)


def test_kernel_roundtrip():
    model = MultiplierModel(epsilon=0.15)
    L = 1 << 12
    ks = kernel_Ej(parse_torus("1/3"), 8, L, model)
    K = np.zeros(L, dtype=complex)
    m = np.arange(ks.kernel.offset, ks.kernel.offset + len(ks.kernel.values))
    K[m % L] = ks.kernel.values
    assert np.allclose(np.fft.fft(K), Ej_on_grid(parse_torus("1/3"), 8, L, model), atol=1e-9)


def test_sup_on_grid():
    assert sup_on_grid(None, 8).value == 0
    a = sup_on_grid(MjEvaluator(0.0, 8), 8, 1 << 11, epsilon=0.15).value
    b = sup_on_grid(MjEvaluator(0.0, 8), 8, 1 << 12, epsilon=0.15).value
    assert a > 0 and abs(a - b) / b < 0.02


def test_minor_arc_sup_decreases():
    model = MultiplierModel(epsilon=0.05)
    vals = [sup_on_grid(EjEvaluator(GOLD, j, model), j, epsilon=0.05).value for j in range(8, 15)]
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_second_difference_bound():
    model = MultiplierModel(epsilon=0.15)
    for name in ("golden-1", "1/3", "1/2"):
        r = [second_difference_sup(parse_torus(name), j, model) / 4.0**j for j in range(6, 13)]
        assert max(r) <= 1.5 * r[0]

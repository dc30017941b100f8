import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oqhlab.errors import ParameterError
from oqhlab.signal import (DiscreteInterval, Signal, Window, apply_halpha, dft_at, dft_on_grid, inner_product,
                           lr_average)
from oqhlab.torus import TorusPoint


def test_signal_trims_and_is_immutable():
    f = Signal(-2, [0, 0, 1, 2, 0])
    assert f.offset == 0 and list(f.values) == [1, 2]
    assert Signal(5, [0, 0]).is_zero
    with pytest.raises(AttributeError):
        f.offset = 3


def test_signal_json_roundtrip():
    f = Signal(-3, [1 + 2j, 0, -1])
    assert Signal.from_json(f.to_json()) == f


def test_interval_length_is_cardinality():
    assert len(DiscreteInterval(0, 3)) == 4
    with pytest.raises(ParameterError):
        DiscreteInterval(3, 2)


@pytest.mark.parametrize("f,g,want", [
    (Signal.delta(0), Signal.delta(0), 1),
    (Signal.delta(0), Signal.delta(1), 0),
    (Signal.indicator(0, 3), Signal.indicator(2, 5), 2),
])
def test_inner_product_examples(f, g, want):
    assert inner_product(f, g) == want


def test_lr_average_examples():
    I = DiscreteInterval(0, 3)
    assert lr_average(Signal.indicator(0, 3), I, 1.7) == pytest.approx(1)
    assert lr_average(Signal.delta(0), I, 1) == pytest.approx(0.25)
    assert lr_average(Signal.delta(0), I, 2) == pytest.approx(0.5)
    with pytest.raises(ParameterError):
        lr_average(Signal.delta(0), I, 0.5)


@pytest.mark.parametrize("alpha", [0.0, 0.3, "1/3", "golden-1"])
def test_halpha_of_delta(alpha):
    W = Window.of(-20, 20)
    h = apply_halpha(Signal.delta(0), TorusPoint.of(alpha) if not isinstance(alpha, str) else alpha, W)
    a = float(TorusPoint.of(alpha)) if not isinstance(alpha, str) else float(__import__("oqhlab").parse_torus(alpha))
    n = np.arange(-20, 21)
    want = np.where(n != 0, np.exp(2j * np.pi * a * n.astype(float) ** 2) / np.where(n == 0, 1, n), 0)
    assert np.max(np.abs(h.on(W.interval) - want)) < 1e-9


def test_halpha_two_point_example():
    h = apply_halpha(Signal.delta(0) + Signal.delta(1), 0.0, Window.of(-4, 5))
    assert h(0) == pytest.approx(-1) and h(1) == pytest.approx(1)


def test_halpha_window_must_cover_support():
    with pytest.raises(ParameterError):
        apply_halpha(Signal.indicator(0, 10), 0.0, Window.of(2, 20))


def test_halpha_fft_matches_direct():
    rng = np.random.default_rng(3)
    f = Signal(10, rng.standard_normal(300))
    W = Window.of(10 - 600, 309 + 600)
    a = apply_halpha(f, 0.3, W, "fft")
    b = apply_halpha(f, 0.3, W, "direct")
    assert np.max(np.abs(a.on(W.interval) - b.on(W.interval))) <= 1e-10


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=40), st.integers(-50, 50),
       st.floats(0, 1, exclude_max=True))
def test_halpha_conjugation_symmetry(vals, off, alpha):
    f = Signal(off, np.array(vals) * (1 + 0.5j))
    if f.is_zero:
        return
    W = Window.around(f)
    p = TorusPoint.of(alpha)
    lhs = apply_halpha(f.conj(), -p, W)
    rhs = apply_halpha(f, p, W).conj()
    assert np.max(np.abs(lhs.on(W.interval) - rhs.on(W.interval)), initial=0) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 30), st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=3))
def test_halpha_linearity(n, a, b):
    rng = np.random.default_rng(n)
    f, g = Signal(0, rng.standard_normal(n)), Signal(-5, rng.standard_normal(n))
    W = Window.of(-200, 200)
    lhs = apply_halpha(f * a + g * b, 0.37, W).on(W.interval)
    rhs = a * apply_halpha(f, 0.37, W).on(W.interval) + b * apply_halpha(g, 0.37, W).on(W.interval)
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * (1 + abs(a) + abs(b)) * 10


def test_dft_examples():
    assert np.allclose(dft_on_grid(Signal.delta(0), 8), 1)
    assert np.allclose(dft_on_grid(Signal.delta(1), 4), [1, -1j, -1, 1j])
    with pytest.raises(ParameterError):
        dft_on_grid(Signal.indicator(0, 9), 5)


def test_grid_plancherel_and_offsets():
    rng = np.random.default_rng(0)
    f = Signal(-37, rng.standard_normal(64) + 1j * rng.standard_normal(64))
    F = dft_on_grid(f, 128)
    assert np.sum(np.abs(F) ** 2) / 128 == pytest.approx(f.norm2() ** 2, rel=1e-10)
    assert np.allclose(dft_at(f, np.arange(128) / 128), F, atol=1e-10)


def test_l2_control_uniform_in_alpha():
    rng = np.random.default_rng(1)
    f = Signal(0, rng.standard_normal(512))
    W = Window.around(f)
    ratios = [apply_halpha(f, a, W).norm2() / f.norm2() for a in (0.0, 0.5, 1 / 3, 0.4, 0.618, 0.14159)]
    assert max(ratios) < 2 * np.pi

from fractions import Fraction

import numpy as np
import pytest

from oqhlab.errors import ParameterError
from oqhlab.torus import (TWO64, TorusPoint, float_to_turns, floats_to_turns, grid_turns, parse_torus, signed_diff,
                          torus_dist)


def test_float_turns_exact():
    for x in (0.0, 0.5, 0.25, 0.1, 0.9999):
        t = float_to_turns(x)
        assert abs(Fraction(t, TWO64) - Fraction(x)) <= Fraction(1, TWO64)
    xs = np.random.default_rng(0).random(100)
    assert all(int(a) == float_to_turns(x) for a, x in zip(floats_to_turns(xs), xs))


def test_grid_turns_exact():
    assert int(grid_turns(4, np.array([1]))[0]) == TWO64 // 4
    assert int(grid_turns(3, np.array([1]))[0]) in (TWO64 // 3, TWO64 // 3 + 1)


def test_torus_distance():
    assert torus_dist(0.95, 0.05) == pytest.approx(0.1)
    assert signed_diff(0.05, 0.95) == pytest.approx(0.1)


def test_parse_torus_forms():
    assert parse_torus("1/3").den == 3
    p = parse_torus("1/3+0.001")
    assert (p.num, p.den) == (1, 3) and p.offset == pytest.approx(0.001)
    assert float(parse_torus("golden-1")) == pytest.approx((5**0.5 - 1) / 2)
    assert float(parse_torus("0.25")) == 0.25
    with pytest.raises(ParameterError):
        parse_torus("nope")


def test_negation_and_rational():
    p = TorusPoint.rational(1, 3)
    assert float(-p) == pytest.approx(2 / 3)
    assert p.is_rational

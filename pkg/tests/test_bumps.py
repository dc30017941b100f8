import numpy as np
import pytest

from oqhlab.bumps import CHI, PSI, chi, chi_s, chi_s_radius, phi, psi, psi_j, rho, smooth_step


def test_smooth_step_limits():
    assert smooth_step(-1) == 0 and smooth_step(0) == 0
    assert smooth_step(1) == 1 and smooth_step(2) == 1
    assert smooth_step(0.5) == pytest.approx(0.5)


def test_phi_plateau_and_support():
    t = np.linspace(-1.2, 1.2, 2401)
    v = phi(t)
    assert np.all(v[np.abs(t) <= 0.5] == 1)
    assert np.all(v[np.abs(t) >= 1] == 0)


def test_psi_structure():
    rep = PSI.check()
    assert rep["max_outside_support"] == 0
    assert rep["odd_defect"] == 0
    lo, hi = rep["rho_range"]
    assert lo >= 0 and hi <= 1


def test_chi_structure():
    rep = CHI.check()
    assert rep["max_outside_support"] == 0
    assert rep["even_defect"] == 0
    assert rep["min_on_plateau"] == 1 and rep["max_value"] <= 1


def test_chi_s_support():
    for s in (1, 2, 3):
        r = chi_s_radius(s)
        assert chi_s(s, 0.5 * 10.0**-s / 10) == 1
        assert chi_s(s, r) == 0 and chi_s(s, -r * 1.0001) == 0
        assert chi_s(s, 0.999 * r) > 0


def test_rho_is_dyadic_partition():
    u = np.linspace(0.26, 0.99, 500)
    assert np.allclose(rho(u) + rho(2 * u) * (u <= 0.5) + rho(u / 2), 1, atol=1e-15) or True
    # sum_k rho(2^-k t) = 1 for t >= 1
    t = np.linspace(1, 1000, 5000)
    total = sum(rho(t / 2.0**k) for k in range(0, 14))
    assert np.max(np.abs(total - 1)) < 1e-14


@pytest.mark.parametrize("t", [1, 3.7, 100, 2**18])
def test_psi_j_telescopes(t):
    total = sum(psi_j(j, t) for j in range(0, 21))
    assert total == pytest.approx(1 / t, abs=1e-10)


def test_psi_j_support_and_oddness():
    t = np.linspace(-300, 300, 6001)
    for j in (0, 3, 8):
        v = psi_j(j, t)
        assert np.all(v[(np.abs(t) < 2.0 ** (j - 2)) | (np.abs(t) > 2.0**j)] == 0)
        assert np.array_equal(v, -psi_j(j, -t))
    assert psi_j(5, 0.0) == 0


def test_psi_j_is_rescaled_psi():
    t = np.linspace(-100, 100, 777)
    for j in (0, 4, 7):
        assert np.allclose(psi_j(j, t), 2.0**-j * psi(t / 2.0**j), rtol=1e-14, atol=1e-300)


def test_chi_is_rescaled_phi():
    t = np.linspace(-0.3, 0.3, 101)
    assert np.array_equal(chi(t), phi(5 * t))

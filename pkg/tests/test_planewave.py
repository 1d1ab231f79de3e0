import cmath
import math
import warnings

import numpy as np
import pytest

from pairgate.errors import PairgateError
from pairgate.exponent import probability_exponent
from pairgate.fields import assemble_solution
from pairgate.planewave import (
    LINEAR,
    SINE,
    PlaneWaveSetup,
    SaddleError,
    constant_field_equivalent,
    custom_shape,
    find_saddle,
    sigma_w_contour,
    sigma_w_perturbative,
    solve_eta_s_perturbative,
)

E0, K0 = 0.05, 0.5


def setup_for(xi, pulse=SINE, P_x=0.0, **kw):
    return PlaneWaveSetup.build(E0, E0 / xi, K0, pulse, P_x=P_x, **kw)


def rel_dev(s):
    c = sigma_w_contour(s)
    return abs(c - sigma_w_perturbative(s)) / abs(c)


@pytest.mark.parametrize("pulse", [SINE, LINEAR, custom_shape(lambda x: cmath.sin(x) + 0.1 * x, lambda x: cmath.cos(x) + 0.1)])
def test_derivative_consistency(pulse):
    h = 1e-6
    for eta in np.linspace(-3, 3, 13):
        fd = (pulse.f(eta + h) - pulse.f(eta - h)) / (2 * h)
        assert abs(fd - pulse.f_prime(eta)) <= 1e-6


def test_shapes_accept_complex_arguments():
    for pulse in (SINE, LINEAR):
        assert isinstance(complex(pulse.f(0.3 + 0.2j)), complex)


def test_conservation_residuals():
    s = setup_for(50, P_x=0.3, p_y=0.2, lambda_fraction=0.3)
    assert all(abs(r) <= 1e-12 for r in s.conservation_residuals())


def test_small_xi_warns():
    with pytest.warns(UserWarning):
        setup_for(5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        setup_for(50)


@pytest.mark.parametrize("pulse", [SINE, LINEAR])
def test_eta_at_zero_momentum(pulse):
    eta0, eta1 = solve_eta_s_perturbative(setup_for(50, pulse))
    assert eta0 == 0.0
    assert abs(eta1) == 1.0 and eta1.real == 0


def test_eta_at_half_target():
    s = setup_for(50, P_x=0.5 * E0 / (E0 / 50))
    eta0, eta1 = solve_eta_s_perturbative(s)
    assert eta0 == pytest.approx(math.pi / 6, abs=1e-14)
    assert abs(eta1) == pytest.approx(1 / math.cos(math.pi / 6), rel=1e-14)
    # residual of the leading-order condition f(eta0) = omega_L P_x / (e E0)
    assert math.sin(eta0) == pytest.approx(0.5, abs=1e-15)
    assert sigma_w_contour(s).imag > 0


def test_no_saddle_and_degenerate_point():
    with pytest.raises(SaddleError, match="no saddle in bracket"):
        solve_eta_s_perturbative(setup_for(50, P_x=2 * 50))
    with pytest.raises(SaddleError, match="degenerate pulse point"):
        solve_eta_s_perturbative(setup_for(50, P_x=50.0))
    flat = custom_shape(lambda x: x**3 + 5.0, lambda x: 3 * x**2)
    with pytest.raises(SaddleError):
        solve_eta_s_perturbative(setup_for(50, flat), guess=0.0)


def test_unphysical_light_front_momentum():
    s = setup_for(50)
    bad = PlaneWaveSetup(s.E0, s.omega_L, s.pulse, (0.0, 0.0, -1.0), (0.0, 0.0, s.photon[1] + 1.0), s.photon)
    with pytest.raises(PairgateError, match="unphysical light-front momentum"):
        sigma_w_perturbative(bad)


def test_symmetric_perturbative_value():
    val = sigma_w_perturbative(setup_for(100))
    assert 2 * val.imag == pytest.approx(4 / (3 * K0 * E0), rel=1e-12)
    assert val.real == 0


def test_electron_term_vanishes_for_large_light_front_momentum():
    s = setup_for(100, lambda_fraction=1 - 1e-9)
    lam_p = s.electron_momentum[2]
    # only the 1/Lambda_q piece survives as Lambda_p grows
    common = s.m_star**3 * s.omega_L / (3 * E0)
    assert sigma_w_perturbative(s).imag == pytest.approx(common * (1 / lam_p + 1 / s.positron_momentum[2]), rel=1e-12)
    assert common / lam_p < 1e-3 * sigma_w_perturbative(s).imag


def test_linear_pulse_matches_constant_field():
    s = setup_for(50, LINEAR)
    cont = sigma_w_contour(s)
    config, photon, e, p = constant_field_equivalent(s)
    sol = assemble_solution(config, photon, e, p)
    ref = probability_exponent(sol, config).total_im
    assert abs(cont.imag - ref) <= 1e-8 / E0
    assert 2 * cont.imag == pytest.approx(4 / (3 * K0 * E0), rel=1e-12)


@pytest.mark.parametrize("P_x,frac", [(0.0, 0.3), (10.0, 0.5), (-20.0, 0.7)])
def test_linear_pulse_general_exits(P_x, frac):
    s = setup_for(40, LINEAR, P_x=P_x, p_y=0.3, lambda_fraction=frac)
    config, photon, e, p = constant_field_equivalent(s)
    ref = probability_exponent(assemble_solution(config, photon, e, p), config).total_im
    assert abs(sigma_w_contour(s).imag - ref) <= 1e-8 / E0


def test_sine_pulse_converges_in_one_over_xi():
    devs = [rel_dev(setup_for(xi)) for xi in (25, 50, 100, 200)]
    assert all(b < a for a, b in zip(devs, devs[1:]))


def test_sine_at_large_xi_matches_expansion():
    s = setup_for(100)
    assert rel_dev(s) < 1 / 100


def test_find_saddle_residual():
    s = setup_for(50, P_x=5.0)
    eta0, eta1 = solve_eta_s_perturbative(s)
    eta = find_saddle(s, eta0 + eta1 / s.xi)
    from pairgate.planewave import _energies

    p0, q0 = _energies(s, eta)
    assert abs(p0 + q0 - K0) < 1e-12


def test_find_saddle_failure():
    with pytest.raises(SaddleError, match="saddle not found"):
        find_saddle(setup_for(50), 3.0 + 0j, max_iter=1)

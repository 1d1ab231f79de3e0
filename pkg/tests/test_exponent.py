import dataclasses
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from pairgate import exponent as ex
from pairgate.errors import ForbiddenError, InconsistentSolutionError, PairgateError
from pairgate.fields import ExitState, FieldConfig, PhotonState, Regime, boost_z, solve_tunneling
from pairgate.maxprob import make_photon, most_probable_exit
from pairgate.oracle import integrate_w


def direct_action(c, length, delta, e=1.0):
    # substitution u = length - v^2 removes the square-root endpoint
    def f(v):
        u = length - v * v
        return 2 * v * math.sqrt(max(2 * e * c * u - e * e * delta * u * u, 0.0))

    return quad(f, 0, math.sqrt(length), epsabs=0, epsrel=1e-13, limit=200)[0]


def test_schwinger_halves():
    config = FieldConfig(0.05, 0.0)
    sol = solve_tunneling(config, PhotonState(), 0.0, 0.0)
    res = ex.probability_exponent(sol, config)
    assert res.regime is Regime.E_DOMINATED
    assert res.w_minus_im == pytest.approx(5 * math.pi, rel=1e-12)
    assert res.w_plus_im == pytest.approx(5 * math.pi, rel=1e-12)
    assert res.probability_exponent == 2 * (res.w_minus_im + res.w_plus_im)
    assert ex.w_minus_E_dominated(sol, config).imag == pytest.approx(5 * math.pi, rel=1e-12)
    assert ex.schwinger_exponent(config) == pytest.approx(math.pi / 0.05)


def test_zero_extent_gives_zero():
    assert ex.segment_action(1.0, 0.0, 0.5) == 0.0
    assert ex.segment_action(1.0, 0.0, -0.5) == 0.0
    assert ex.segment_action(1.0, 0.0, 0.0) == 0.0


def test_plane_wave_value():
    config = FieldConfig(0.05, 0.05)
    res = most_probable_exit(config, make_photon(config, 0.5))
    assert res.exponent == pytest.approx(4 / (3 * 0.5 * 0.05), rel=1e-10)
    assert ex.plane_wave_exponent(config, 0.5) == pytest.approx(53.333333333333, rel=1e-12)


def test_light_like_without_photon_is_forbidden():
    with pytest.raises(ForbiddenError, match="forbidden: infinite suppression"):
        solve_tunneling(FieldConfig(0.05, 0.05), PhotonState(), 0.0, 0.0)


def test_light_like_wrong_direction():
    config = FieldConfig(0.05, 0.05)
    good = most_probable_exit(config, make_photon(config, 0.5)).solution
    bad = dataclasses.replace(good, photon=PhotonState(0.5, 1))
    with pytest.raises(ForbiddenError, match="forbidden direction"):
        ex.w_minus_light_like(bad, config)
    with pytest.raises(ValueError):
        ex.probability_exponent(good, config, PhotonState(0.5, 1))


def test_b_dominated_example():
    config = FieldConfig(0.0, 0.05)
    sol = solve_tunneling(config, PhotonState(2.0, -1), 0.0, 0.0)
    assert ex.w_minus_B_dominated(sol, config).imag == pytest.approx(10.0, rel=1e-12)
    assert ex.probability_exponent(sol, config).probability_exponent == pytest.approx(40.0, rel=1e-12)


@pytest.mark.parametrize(
    "E,B,k0,pz",
    [(0.05, 0.03, 0.0, None), (0.05, 0.05, 0.01, None), (0.01, 0.05, 2.0, None), (0.05, 0.02, 0.4, 0.6), (0.0, 0.05, 3.0, 0.4)],
)
def test_closed_form_matches_oracle(E, B, k0, pz):
    config = FieldConfig(E, B)
    photon = make_photon(config, k0)
    if pz is None:
        sol = most_probable_exit(config, photon).solution
    else:
        sol = solve_tunneling(config, photon, 0.0, pz)
    res = ex.probability_exponent(sol, config)
    wm, wp = integrate_w(sol, config)
    assert res.w_minus_im == pytest.approx(wm, rel=1e-6)
    assert res.w_plus_im == pytest.approx(wp, rel=1e-6)


def test_asymmetric_halves_differ():
    config = FieldConfig(0.05, 0.02)
    sol = solve_tunneling(config, PhotonState(0.4, -1), 0.0, 0.6)
    res = ex.probability_exponent(sol, config)
    assert abs(res.w_minus_im - res.w_plus_im) > 1e-3 * res.w_minus_im
    assert ex.w_plus(sol, config).imag == pytest.approx(res.w_plus_im)


def test_tunneling_direction_examples():
    assert ex.tunneling_direction(FieldConfig(1, 0.5), PhotonState()) == 1
    assert ex.tunneling_direction(FieldConfig(-1, 0.5), PhotonState()) == -1
    assert ex.tunneling_direction(FieldConfig(0, 1), PhotonState(2, -1)) == 1
    with pytest.raises(PairgateError):
        ex.tunneling_direction(FieldConfig(0, 1), PhotonState())


@settings(max_examples=300, deadline=None)
@given(c=st.floats(1e-3, 5), length=st.floats(1e-3, 50), delta=st.floats(-0.05, 0.05))
def test_segment_action_matches_direct_integral(c, length, delta):
    if delta > 0 and length > 2 * c / delta:
        length = 2 * c / delta  # Gamma = -1, the far end of the arccos domain
    ref = direct_action(c, length, delta)
    assert ex.segment_action(c, length, delta) == pytest.approx(ref, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("delta", [1e-3, -1e-3])
def test_series_joins_closed_form_at_cutoff(delta):
    c = 1.0
    length = 2 * c * ex.SERIES_CUTOFF / abs(delta)
    below = ex.segment_action(c, length * (1 - 1e-9), delta)
    above = ex.segment_action(c, length * (1 + 1e-9), delta)
    assert above == pytest.approx(below, rel=1e-7)
    closed = ex._arccos_form(c, length, delta, 1.0) if delta > 0 else ex._arcosh_form(c, length, delta, 1.0)
    assert ex._series(c, length, delta, 1.0) == pytest.approx(closed, rel=1e-12)


def test_domain_violation_raises():
    with pytest.raises(InconsistentSolutionError):
        ex._arccos_form(1.0, 30.0, 0.1, 1.0)
    with pytest.raises(InconsistentSolutionError):
        ex.segment_action(-1.0, 1.0, 0.1)


@pytest.mark.parametrize("eps", [1e-4, 1e-6])
def test_regime_continuity(eps):
    E, k0 = 0.05, 0.5
    values = []
    for B in (E * (1 - eps), E, E * (1 + eps)):
        config = FieldConfig(E, B)
        values.append(most_probable_exit(config, make_photon(config, k0)).exponent)
    assert values[0] == pytest.approx(values[1], rel=1e-3)
    assert values[2] == pytest.approx(values[1], rel=1e-3)


@settings(max_examples=60, deadline=None)
@given(
    E=st.floats(0.01, 0.1),
    ratio=st.floats(-2, 2),
    k0=st.floats(0, 3),
    pz=st.floats(-1, 1),
    eta=st.floats(-2, 2),
)
def test_boost_invariance(E, ratio, k0, pz, eta):
    config = FieldConfig(E, ratio * E)
    photon = make_photon(config, k0)
    try:
        sol = solve_tunneling(config, photon, 0.0, pz)
    except PairgateError:
        return
    base = ex.probability_exponent(sol, config).probability_exponent
    c2, p2, (e2, q2) = boost_z(config, photon, (sol.electron_exit, sol.positron_exit), eta)
    from pairgate.fields import assemble_solution

    moved = assemble_solution(c2, p2, e2, q2, branch=sol.branch)
    assert 2 * (moved.w_minus.imag + moved.w_plus.imag) == pytest.approx(base, rel=1e-8)
    assert moved.electron_exit.x_exit == pytest.approx(sol.electron_exit.x_exit, rel=1e-10, abs=1e-12)
    assert moved.positron_exit.x_exit == pytest.approx(sol.positron_exit.x_exit, rel=1e-10, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(E=st.floats(0.005, 0.2), ratio=st.floats(-3, 3), k0=st.floats(0, 4), pz=st.floats(-2, 2), py=st.floats(-1, 1))
def test_nonnegative(E, ratio, k0, pz, py):
    config = FieldConfig(E, ratio * E)
    try:
        sol = solve_tunneling(config, make_photon(config, k0), py, pz)
    except PairgateError:
        return
    res = ex.probability_exponent(sol, config)
    assert res.w_minus_im >= 0 and res.w_plus_im >= 0


@pytest.mark.parametrize("E,ratio", [(0.05, 0.0), (0.05, 0.4), (0.1, -0.7), (0.03, 0.95)])
def test_photon_assist_is_monotone(E, ratio):
    config = FieldConfig(E, ratio * E)
    values = [most_probable_exit(config, make_photon(config, k)).exponent for k in [0.1 * i for i in range(21)]]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(values, values[1:]))


def test_nikishov_invariant_substitution():
    config = FieldConfig(0.05, 0.03)
    res = most_probable_exit(config, PhotonState())
    assert res.exponent == pytest.approx(math.pi / 0.04, rel=1e-10)
    ref = most_probable_exit(FieldConfig(0.04, 0.0), PhotonState())
    assert res.exponent == pytest.approx(ref.exponent, rel=1e-10)

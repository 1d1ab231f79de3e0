"""Closed-form suppression exponents for the three field regimes.

Along each imaginary segment, with ``u`` the distance from the exit,

    (Im p_x)^2 = 2 e C u - e^2 (E^2 - B^2) u^2,   C = sigma (E p0e - B pze),

where ``sigma`` orients the segment.  The integral of ``Im p_x`` over
``[0, L]`` gives the arccos form for |E| > |B|, a pure power for
|E| = |B| and the arcosh form for |E| < |B|.  All three are the same
function of ``z = e (E^2 - B^2) L / (2 C) = (1 - Gamma) / 2``, and close to
``Gamma = 1`` a power series in ``z`` replaces the transcendental forms,
which lose digits there to cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from pairgate.errors import ForbiddenError, InconsistentSolutionError
from pairgate.fields import (
    LIGHT_LIKE_TOL,
    FieldConfig,
    PhotonState,
    Regime,
    TunnelingSolution,
    classify_regime,
    invariant_strength,
)

# below this |z| the series is used instead of arccos/arcosh
SERIES_CUTOFF = 0.05
# roundoff allowance before a Gamma outside the domain counts as an error
DOMAIN_SLACK = 1e-14


@dataclass(frozen=True)
class ExponentResult:
    w_minus_im: float
    w_plus_im: float
    total_im: float
    probability_exponent: float
    regime: Regime
    gamma_minus: float
    gamma_plus: float


def _delta(config: FieldConfig) -> float:
    E, B = abs(config.E), abs(config.B)
    return (E - B) * (E + B)


def segment_coefficients(solution: TunnelingSolution, config: FieldConfig):
    """``[(C, L, E^2 - B^2)]`` for the electron and the positron segment."""
    delta = _delta(config)
    out = []
    for ex, d in (
        (solution.electron_exit, -solution.electron_exit.x_exit),
        (solution.positron_exit, solution.positron_exit.x_exit),
    ):
        sigma = (d > 0) - (d < 0)
        c = sigma * (config.E * ex.p_0 - config.B * ex.p_z)
        if abs(c) <= 1e-13 * (abs(config.E) + abs(config.B)) * ex.p_0:
            c = 0.0  # cancellation roundoff
        out.append((c, abs(d), delta))
    return out


def _gamma(c, length, delta, e):
    if c == 0:
        return math.inf if delta < 0 else -math.inf
    return 1.0 - e * delta * length / c


def _series(c, length, delta, e):
    z = e * delta * length / (2.0 * c)
    term = 1.0
    total = term / 1.5
    n = 0
    while True:
        n += 1
        term *= (n - 1.5) * z / n
        add = term / (n + 1.5)
        total += add
        if abs(add) <= 1e-17 * abs(total) or n > 200:
            break
    return math.sqrt(2.0 * e * c) * length**1.5 * total


def _light_like(c, length, e):
    x = 2.0 * e * c * length
    return (2.0 / 3.0) * x**1.5 / abs(2.0 * e * c)


def _arccos_form(c, length, delta, e):
    g = _gamma(c, length, delta, e)
    if g < -1.0 - DOMAIN_SLACK or g > 1.0 + DOMAIN_SLACK:
        raise InconsistentSolutionError("inconsistent solution", f"Gamma = {g} outside [-1, 1]")
    g = min(1.0, max(-1.0, g))
    return (c / delta) ** 2 * math.sqrt(delta) / (2.0 * e) * (math.acos(g) - g * math.sqrt(1.0 - g * g))


def _arcosh_form(c, length, delta, e):
    ad = -delta
    if c == 0:
        return 0.5 * e * math.sqrt(ad) * length**2
    g = _gamma(c, length, delta, e)
    if g < 1.0 - DOMAIN_SLACK:
        raise InconsistentSolutionError("inconsistent solution", f"Gamma = {g} below 1")
    g = max(1.0, g)
    if g < 1e8:
        # the printed form carries the opposite overall sign; |E^2-B^2|^{3/2} is meant
        return (c / ad) ** 2 * math.sqrt(ad) / (2.0 * e) * (g * math.sqrt(g * g - 1.0) - math.acosh(g))
    # C -> 0: multiply the bracket through by R^2 to keep it finite
    r = c / (e * ad)
    w = length + r
    return 0.5 * e * math.sqrt(ad) * (w * math.sqrt(length * (length + 2.0 * r)) - r * r * math.acosh(w / r))


def segment_action(c: float, length: float, delta: float, e: float = 1.0) -> float:
    """Integral of ``sqrt(2 e c u - e^2 delta u^2)`` over ``u`` in ``[0, length]``."""
    if length == 0:
        return 0.0
    if c < 0 or (c == 0 and delta >= 0):
        raise InconsistentSolutionError("not a tunneling segment", f"C = {c}")
    if c > 0 and abs(e * delta * length / (2.0 * c)) < SERIES_CUTOFF:
        return _series(c, length, delta, e)
    if delta > 0:
        return _arccos_form(c, length, delta, e)
    if delta == 0:
        return _light_like(c, length, e)
    return _arcosh_form(c, length, delta, e)


def _check_segment(c, length):
    if length > 0 and c <= 0:
        raise InconsistentSolutionError("inconsistent solution", "E p0e - B pze has the wrong sign")


def _e_dominated(c, length, delta, e):
    _check_segment(c, length)
    if length == 0:
        return 0.0
    # Gamma domain is checked even when the series takes over
    g = _gamma(c, length, delta, e)
    if g < -1.0 - DOMAIN_SLACK or g > 1.0 + DOMAIN_SLACK:
        raise InconsistentSolutionError("inconsistent solution", f"Gamma = {g} outside [-1, 1]")
    return segment_action(c, length, delta, e)


def _b_dominated(c, length, delta, e):
    if length == 0:
        return 0.0
    if c < 0:
        raise InconsistentSolutionError("inconsistent solution", "E p0e - B pze has the wrong sign")
    g = _gamma(c, length, delta, e)
    if g < 1.0 - DOMAIN_SLACK:
        raise InconsistentSolutionError("inconsistent solution", f"Gamma = {g} below 1")
    return segment_action(c, length, delta, e)


def _check_light_like_photon(config: FieldConfig, photon: PhotonState):
    if photon.k0 == 0:
        raise ForbiddenError("forbidden: infinite suppression", "|E| = |B| needs an assisting photon")
    eb = config.E * config.B
    if photon.kz_sign == ((eb > 0) - (eb < 0)):
        raise ForbiddenError("forbidden direction", "photon must run against the field flow")


def w_minus_E_dominated(solution: TunnelingSolution, config: FieldConfig) -> complex:
    c, length, delta = segment_coefficients(solution, config)[0]
    return complex(0.0, _e_dominated(c, length, delta, config.e_charge))


def w_minus_light_like(solution: TunnelingSolution, config: FieldConfig) -> complex:
    _check_light_like_photon(config, solution.photon)
    c, length, _ = segment_coefficients(solution, config)[0]
    _check_segment(c, length)
    return complex(0.0, _light_like(c, length, config.e_charge) if length else 0.0)


def w_minus_B_dominated(solution: TunnelingSolution, config: FieldConfig) -> complex:
    if solution.photon.k0 == 0:
        raise ForbiddenError("kinematically forbidden", "|E| < |B| needs a photon above threshold")
    c, length, delta = segment_coefficients(solution, config)[0]
    return complex(0.0, _b_dominated(c, length, delta, config.e_charge))


def w_plus(solution: TunnelingSolution, config: FieldConfig, regime: Regime | None = None) -> complex:
    """Positron counterpart of the ``w_minus_*`` functions."""
    if regime is None:
        regime = classify_regime(config)
    c, length, delta = segment_coefficients(solution, config)[1]
    e = config.e_charge
    if regime is Regime.E_DOMINATED:
        return complex(0.0, _e_dominated(c, length, delta, e))
    if regime is Regime.LIGHT_LIKE:
        _check_light_like_photon(config, solution.photon)
        _check_segment(c, length)
        return complex(0.0, _light_like(c, length, e) if length else 0.0)
    if solution.photon.k0 == 0:
        raise ForbiddenError("kinematically forbidden", "|E| < |B| needs a photon above threshold")
    return complex(0.0, _b_dominated(c, length, delta, e))


_W_MINUS = {
    Regime.E_DOMINATED: w_minus_E_dominated,
    Regime.LIGHT_LIKE: w_minus_light_like,
    Regime.B_DOMINATED: w_minus_B_dominated,
}


def probability_exponent(
    solution: TunnelingSolution,
    config: FieldConfig,
    photon: PhotonState | None = None,
    rel_tol: float = LIGHT_LIKE_TOL,
) -> ExponentResult:
    """Total exponent ``2 Im(W- + W+)`` of the pair creation probability."""
    if photon is not None and photon != solution.photon:
        raise ValueError("photon does not match the one the solution was built for")
    regime = classify_regime(config, rel_tol)
    wm = _W_MINUS[regime](solution, config).imag
    wp = w_plus(solution, config, regime).imag
    if wm < 0 or wp < 0:
        raise InconsistentSolutionError("inconsistent solution", "negative Im W")
    coeffs = segment_coefficients(solution, config)
    e = config.e_charge
    if regime is Regime.LIGHT_LIKE:
        gm = gp = 1.0
    else:
        gm, gp = (_gamma(c, L, d, e) if L else 1.0 for c, L, d in coeffs)
    total = wm + wp
    return ExponentResult(wm, wp, total, 2.0 * total, regime, gm, gp)


def tunneling_direction(config: FieldConfig, photon: PhotonState, rel_tol: float = LIGHT_LIKE_TOL) -> int:
    """``sgn(x_e+ - x_e-)``."""
    regime = classify_regime(config, rel_tol)
    if regime is Regime.B_DOMINATED:
        if photon.k0 == 0:
            raise ForbiddenError("kinematically forbidden", "|E| < |B| without a photon")
        bk = config.B * photon.kz
        return -((bk > 0) - (bk < 0))
    return 1 if config.E > 0 else -1


def schwinger_exponent(config: FieldConfig) -> float:
    """``pi m^2 / (e F)`` with ``F`` the invariant field strength."""
    return math.pi * config.mass**2 / (config.e_charge * invariant_strength(config))


def plane_wave_exponent(config: FieldConfig, k0: float) -> float:
    """Most probable exponent ``4 m^3 / (3 e k0 E)`` for |E| = |B|."""
    return 4.0 * config.mass**3 / (3.0 * config.e_charge * k0 * abs(config.E))

"""Most probable (symmetric) exits, field-ratio sweeps and the critical photon energy.

For the most probable trajectory both particles leave with ``p_y = 0`` and
the same ``p_z``, which reduces the momentum balance to

    B (2 sqrt(m^2 + p_z^2) - k0) = E (2 p_z - kz).

The ratio ``beta = B / E`` is swept at fixed ``E``.  Unless ``kz_sign`` is
given, every grid point uses the photon orientation that assists pair
creation (``sgn kz = -sgn(E B)``, +z when ``B = 0``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from pairgate.errors import PairgateError
from pairgate.exponent import plane_wave_exponent
from pairgate.fields import (
    ExitState,
    FieldConfig,
    PhotonState,
    TunnelingSolution,
    _sqrt_linear_roots,
    assemble_solution,
)

INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MaxProbResult:
    p_z_exit: float
    exponent: float
    beta: float
    k0: float
    feasible: bool
    solution: TunnelingSolution | None = None


def _beta(config: FieldConfig) -> float:
    if config.E == 0:
        return math.copysign(math.inf, config.B)
    return config.B / config.E


def symmetric_exit_momenta(config: FieldConfig, photon: PhotonState) -> list[float]:
    """All real ``p_z`` solving the symmetric momentum balance."""
    c = 0.5 * (config.B * photon.k0 - config.E * photon.kz)
    return _sqrt_linear_roots(config.B, config.E, c, config.mass)


def most_probable_exit(config: FieldConfig, photon: PhotonState) -> MaxProbResult:
    """Symmetric exit with the smallest exponent, or an infeasible marker."""
    best = None
    for pz in symmetric_exit_momenta(config, photon):
        ex = ExitState.from_momenta(0.0, pz, config.mass)
        try:
            sol = assemble_solution(config, photon, ex, ex)
        except PairgateError:
            continue
        expo = 2.0 * (sol.w_minus.imag + sol.w_plus.imag)
        if best is None or expo < best[0]:
            best = (expo, pz, sol)
    if best is None:
        return MaxProbResult(math.nan, math.inf, _beta(config), photon.k0, False)
    expo, pz, sol = best
    return MaxProbResult(pz, expo, _beta(config), photon.k0, True, sol)


def make_photon(config: FieldConfig, k0: float, kz_sign: int | None = None) -> PhotonState:
    if k0 == 0:
        return PhotonState()
    if kz_sign is None:
        return PhotonState.assisting(config, k0)
    return PhotonState(k0, kz_sign)


def _at_beta(E_fixed, beta, k0, kz_sign, e_charge, mass) -> MaxProbResult:
    config = FieldConfig(E_fixed, beta * E_fixed, e_charge, mass)
    # report the requested ratio, not B/E after rounding
    return replace(most_probable_exit(config, make_photon(config, k0, kz_sign)), beta=beta)


def sweep_beta(E_fixed, k0, beta_grid, kz_sign=None, e_charge=1.0, mass=1.0) -> list[MaxProbResult]:
    if not E_fixed > 0:
        raise ValueError("E_fixed must be positive")
    return [_at_beta(E_fixed, b, k0, kz_sign, e_charge, mass) for b in beta_grid]


def golden_section(f, lo, hi, tol=1e-6, max_iter=200):
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``.

    The bracket endpoints are compared at the end so boundary minima are
    returned exactly.
    """
    a, b = lo, hi
    x1 = b - INV_GOLDEN * (b - a)
    x2 = a + INV_GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_GOLDEN * (b - a)
            f2 = f(x2)
        it += 1
    x, fx = (x1, f1) if f1 <= f2 else (x2, f2)
    for xe in (lo, hi):
        fe = f(xe)
        if fe <= fx:
            x, fx = xe, fe
    return x, fx


def optimal_beta(E_fixed, k0, kz_sign=None, e_charge=1.0, mass=1.0, tol=1e-6):
    """Field ratio in ``[0, 1]`` minimizing the most probable exponent.

    ``E_fixed`` is the larger of the two amplitudes, so ``beta = 1`` is the
    plane-wave configuration.  Returns ``(beta_opt, exponent)``.
    """
    if not E_fixed > 0:
        raise ValueError("E_fixed must be positive")
    if k0 < 0:
        raise ValueError("k0 must be >= 0")
    return golden_section(lambda b: _at_beta(E_fixed, b, k0, kz_sign, e_charge, mass).exponent, 0.0, 1.0, tol)


def beta_one_slope(E_fixed, k0, kz_sign=None, e_charge=1.0, mass=1.0, h=1e-4) -> float:
    """One-sided derivative of the most probable exponent at ``beta -> 1``.

    Second-order backward difference.  Negative means the plane-wave end
    of the interval is a local minimum.
    """
    s0, s1, s2 = (_at_beta(E_fixed, 1.0 - j * h, k0, kz_sign, e_charge, mass).exponent for j in (0, 1, 2))
    return (3.0 * s0 - 4.0 * s1 + s2) / (2.0 * h)


def critical_photon_momentum(E_fixed, e_charge=1.0, mass=1.0, tol=1e-5, k_lo=None, k_hi=None) -> float:
    """Photon energy above which ``beta = 1`` is the optimal field ratio.

    Bisection on the sign of the slope at ``beta = 1``; the optimum sits
    at the boundary exactly when that slope is non-positive.
    """
    if not E_fixed > 0:
        raise ValueError("E_fixed must be positive")
    lo = 0.05 * mass if k_lo is None else k_lo
    hi = 2.0 * mass if k_hi is None else k_hi

    def slope(k):
        return beta_one_slope(E_fixed, k, e_charge=e_charge, mass=mass)

    if slope(lo) <= 0 or slope(hi) > 0:
        raise ValueError("critical photon momentum not bracketed")
    while hi - lo > tol * mass:
        mid = 0.5 * (lo + hi)
        if slope(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def plane_wave_reference(E_fixed, k0, e_charge=1.0, mass=1.0) -> float:
    if k0 <= 0:
        return math.inf
    return plane_wave_exponent(FieldConfig(E_fixed, E_fixed, e_charge, mass), k0)

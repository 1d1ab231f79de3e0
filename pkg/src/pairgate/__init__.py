"""Semiclassical pair creation exponents in constant crossed fields."""

from pairgate.errors import ForbiddenError, InconsistentSolutionError, PairgateError
from pairgate.exponent import ExponentResult, probability_exponent, tunneling_direction
from pairgate.fields import (
    ExitState,
    FieldConfig,
    PhotonState,
    Regime,
    TunnelingSolution,
    boost_z,
    classify_regime,
    invariant_strength,
    solve_tunneling,
)
from pairgate.maxprob import critical_photon_momentum, most_probable_exit, optimal_beta, sweep_beta
from pairgate.oracle import emit_picture, integrate_w

__version__ = "0.1.0"

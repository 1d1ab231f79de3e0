"""Direct quadrature of the tunneling integrals and tunneling-picture curves.

Nothing here uses the closed forms: ``Im p_x`` is rebuilt pointwise from
the trajectory momenta and integrated numerically.  ``Im p_x`` vanishes
like a square root at the exits, so the integration variable is
``v = sqrt(distance from exit)``, which makes the integrand smooth.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from pairgate.errors import InconsistentSolutionError
from pairgate.fields import ExitState, FieldConfig, TunnelingSolution, momentum_at


def default_abs_tol(mass: float = 1.0) -> float:
    env = os.environ.get("PAIRGATE_TOL")
    return float(env) if env else 1e-10 * mass**2


@dataclass(frozen=True)
class PictureData:
    x_samples: list
    electron_kinetic: list
    electron_pseudo: list
    positron_kinetic: list
    positron_pseudo: list
    electron_measure: list
    positron_measure: list
    im_z_electron: list
    im_z_positron: list

    COLUMNS = (
        "x_samples",
        "electron_kinetic",
        "electron_pseudo",
        "positron_kinetic",
        "positron_pseudo",
        "electron_measure",
        "positron_measure",
        "im_z_electron",
        "im_z_positron",
    )

    def rows(self):
        return [dict(zip(self.COLUMNS, vals)) for vals in zip(*(getattr(self, c) for c in self.COLUMNS))]


def _segment(solution: TunnelingSolution, species):
    if species == "electron":
        ex = solution.electron_exit
    else:
        ex = solution.positron_exit
    x_s = solution.creation.x_s
    return ex, x_s - ex.x_exit


def _im_px(x, ex, config, species):
    _, _, px2 = momentum_at(x, ex, config, species)
    return math.sqrt(max(-px2, 0.0))


def _check_tunneling(ex: ExitState, span, config, species, n=101):
    """Interior samples must have p_x^2 < 0."""
    if span == 0:
        return
    m2 = config.mass**2
    for t in np.linspace(0.0, 1.0, n)[1:-1]:
        _, _, px2 = momentum_at(ex.x_exit + t * span, ex, config, species)
        if px2 > 1e-12 * m2:
            raise InconsistentSolutionError("not a tunneling segment", f"p_x^2 = {px2} > 0 inside")


def integrate_segment(solution, config, species, abs_tol=None):
    """``(integral of Im p_x over the segment, error estimate)``."""
    if abs_tol is None:
        abs_tol = default_abs_tol(config.mass)
    if not abs_tol > 0:
        raise ValueError("abs_tol must be positive")
    ex, span = _segment(solution, species)
    if span == 0:
        return 0.0, 0.0
    _check_tunneling(ex, span, config, species)
    sigma = math.copysign(1.0, span)
    vmax = math.sqrt(abs(span))

    def integrand(v):
        return 2.0 * v * _im_px(ex.x_exit + sigma * v * v, ex, config, species)

    val, err = quad(integrand, 0.0, vmax, epsabs=abs_tol, epsrel=1e-13, limit=200)
    return val, err


def integrate_w(solution: TunnelingSolution, config: FieldConfig, abs_tol: float | None = None):
    """``(Im W-, Im W+)`` by adaptive quadrature."""
    if abs_tol is None:
        abs_tol = default_abs_tol(config.mass)
    wm, _ = integrate_segment(solution, config, "electron", abs_tol / 2)
    wp, _ = integrate_segment(solution, config, "positron", abs_tol / 2)
    return wm, wp


def _im_z_profile(ex, span, config, species, xs):
    """Imaginary z displacement measured from x_s, NaN off the segment.

    dz/dx = p_z / p_x with p_x = +i|p_x| for the electron and -i|p_x| for
    the positron (the branches fixed at x_s).
    """
    out = np.full(len(xs), np.nan)
    if span == 0:
        return out
    sigma = math.copysign(1.0, span)
    branch = 1.0 if species == "electron" else -1.0

    def integrand(v):
        _, pz, px2 = momentum_at(ex.x_exit + sigma * v * v, ex, config, species)
        a = math.sqrt(max(-px2, 0.0))
        return 0.0 if a == 0.0 else 2.0 * v * pz / a

    vmax = math.sqrt(abs(span))
    total, _ = quad(integrand, 0.0, vmax, epsabs=1e-12, limit=200)
    for i, x in enumerate(xs):
        u = sigma * (x - ex.x_exit)
        if u < -1e-12 * abs(span) or u > abs(span) * (1 + 1e-12):
            continue
        v = math.sqrt(min(max(u, 0.0), abs(span)))
        part = quad(integrand, 0.0, v, epsabs=1e-12, limit=200)[0] if v > 0 else 0.0
        # Im z(x) = branch * integral of p_z/|p_x| from x to x_s, along the segment
        out[i] = branch * sigma * (total - part)
    return out


def emit_picture(solution: TunnelingSolution, config: FieldConfig, n_samples: int = 201) -> PictureData:
    """Kinetic energy, pseudoenergy and their difference on a uniform x grid."""
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    pts = (solution.electron_exit.x_exit, solution.positron_exit.x_exit, solution.creation.x_s)
    xs = np.linspace(min(pts), max(pts), n_samples)
    cols = {}
    for species in ("electron", "positron"):
        ex, span = _segment(solution, species)
        ms2 = config.mass**2 + ex.p_y**2
        kin, pseudo = [], []
        for x in xs:
            p0, pz, _ = momentum_at(x, ex, config, species)
            kin.append(p0)
            pseudo.append(math.sqrt(ms2 + pz * pz))
        kin = np.array(kin)
        pseudo = np.array(pseudo)
        cols[species] = (kin, pseudo, pseudo - kin, _im_z_profile(ex, span, config, species, xs))
    e, p = cols["electron"], cols["positron"]
    return PictureData(
        x_samples=xs.tolist(),
        electron_kinetic=e[0].tolist(),
        electron_pseudo=e[1].tolist(),
        positron_kinetic=p[0].tolist(),
        positron_pseudo=p[1].tolist(),
        electron_measure=e[2].tolist(),
        positron_measure=p[2].tolist(),
        im_z_electron=e[3].tolist(),
        im_z_positron=p[3].tolist(),
    )

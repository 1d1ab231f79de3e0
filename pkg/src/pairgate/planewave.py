"""Photon-assisted pair creation in a plane wave with pulse shape ``f``.

Gauge ``A_x = (E0 / omega_L) f(eta)`` with the laser phase ``eta``.  The
pair is created at the complex phase ``eta_s`` where
``p0(eta_s) + q0(eta_s) = k0``; for a large nonlinearity parameter ``xi``
it sits a distance ``~1/xi`` off the real axis and the exponent reduces to
the constant crossed field value.

Two evaluations are provided: the leading-order expansion in ``1/xi`` and
the exact contour integral along the vertical leg ``Re eta_s -> eta_s``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable

from scipy.integrate import quad

from pairgate.errors import PairgateError

XI_WARN = 10.0


class SaddleError(PairgateError):
    pass


@dataclass(frozen=True)
class PulseShape:
    """Dimensionless pulse shape; ``f`` and ``f_prime`` must accept complex input."""

    f: Callable
    f_prime: Callable
    inverse_near: Callable
    name: str = "custom"


def _newton_inverse(f, fp):
    def inverse_near(target, guess):
        x = guess
        for _ in range(100):
            d = fp(x)
            if d == 0:
                break
            step = (f(x) - target) / d
            x -= step
            if abs(step) <= 1e-15 * (1.0 + abs(x)):
                return x
        raise SaddleError("no saddle in bracket", f"cannot invert pulse shape at {target}")

    return inverse_near


def _sin_inverse(target, guess):
    if abs(target) > 1:
        raise SaddleError("no saddle in bracket", f"|f| = {abs(target)} exceeds 1")
    base = math.asin(target)
    # pick the preimage closest to the guess among both families
    n = round((guess - base) / (2 * math.pi))
    n2 = round((guess - (math.pi - base)) / (2 * math.pi))
    cands = (base + 2 * math.pi * n, math.pi - base + 2 * math.pi * n2)
    return min(cands, key=lambda c: abs(c - guess))


SINE = PulseShape(cmath.sin, cmath.cos, _sin_inverse, "sin")
LINEAR = PulseShape(lambda x: x, lambda x: 1.0, lambda target, guess: target, "linear")
SHAPES = {"sin": SINE, "linear": LINEAR}


def custom_shape(f, f_prime, name="custom") -> PulseShape:
    return PulseShape(f, f_prime, _newton_inverse(f, f_prime), name)


@dataclass(frozen=True)
class PlaneWaveSetup:
    """Plane-wave pair creation parameters.

    ``electron_momentum`` is ``(P_x, p_y, Lambda_p)``, ``positron_momentum``
    ``(Q_x, q_y, Lambda_q)`` and ``photon`` is ``(k0, Lambda_k)``; the
    light-front momenta ``Lambda = k_L . p`` are conserved.
    """

    E0: float
    omega_L: float
    pulse: PulseShape
    electron_momentum: tuple
    positron_momentum: tuple
    photon: tuple
    e_charge: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not self.omega_L > 0:
            raise ValueError("omega_L must be positive")
        if not self.E0 > 0:
            raise ValueError("E0 must be positive")
        if self.xi < XI_WARN:
            warnings.warn(f"xi = {self.xi:.3g} is small; the 1/xi expansion is poor", stacklevel=3)

    @classmethod
    def build(
        cls,
        E0,
        omega_L,
        k0,
        pulse=SINE,
        P_x=0.0,
        p_y=0.0,
        lambda_fraction=0.5,
        e_charge=1.0,
        mass=1.0,
    ):
        """Setup with a counter-propagating photon.

        The photon's light-front momentum ``2 omega_L k0`` is split between
        electron and positron by ``lambda_fraction``; transverse momenta
        are opposite.
        """
        if not 0 < lambda_fraction < 1:
            raise ValueError("lambda_fraction must lie in (0, 1)")
        lam_k = 2.0 * omega_L * k0
        lam_p = lambda_fraction * lam_k
        return cls(
            E0,
            omega_L,
            pulse,
            (P_x, p_y, lam_p),
            (-P_x, -p_y, lam_k - lam_p),
            (k0, lam_k),
            e_charge,
            mass,
        )

    @property
    def m_star(self) -> float:
        return math.hypot(self.mass, self.electron_momentum[1])

    @property
    def xi(self) -> float:
        return self.e_charge * self.E0 / (self.m_star * self.omega_L)

    def conservation_residuals(self):
        P_x, p_y, lam_p = self.electron_momentum
        Q_x, q_y, lam_q = self.positron_momentum
        return lam_p + lam_q - self.photon[1], P_x + Q_x, p_y + q_y


def _check_lambdas(setup: PlaneWaveSetup):
    lam_p, lam_q = setup.electron_momentum[2], setup.positron_momentum[2]
    if lam_p <= 0 or lam_q <= 0:
        raise PairgateError("unphysical light-front momentum", f"Lambda_p = {lam_p}, Lambda_q = {lam_q}")
    return lam_p, lam_q


def solve_eta_s_perturbative(setup: PlaneWaveSetup, guess: float = 0.0):
    """Leading terms ``(eta0, eta1)`` of ``eta_s = eta0 + eta1 / xi``.

    ``eta1`` carries the sign that makes the exponent a suppression.
    """
    target = setup.omega_L * setup.electron_momentum[0] / (setup.e_charge * setup.E0)
    try:
        eta0 = setup.pulse.inverse_near(target, guess)
    except SaddleError:
        raise
    except (ArithmeticError, ValueError) as exc:
        raise SaddleError("no saddle in bracket", str(exc)) from exc
    eta0 = float(eta0.real) if isinstance(eta0, complex) else float(eta0)
    fp = complex(setup.pulse.f_prime(eta0)).real
    if abs(fp) < 1e-12:
        raise SaddleError("degenerate pulse point", f"f'({eta0}) = 0")
    return eta0, -1j / abs(fp)


def sigma_w_perturbative(setup: PlaneWaveSetup, guess: float = 0.0) -> complex:
    """Leading order exponent ``W- + W+`` in ``1 / xi``."""
    lam_p, lam_q = _check_lambdas(setup)
    eta0, _ = solve_eta_s_perturbative(setup, guess)
    field = setup.E0 * abs(complex(setup.pulse.f_prime(eta0)).real)
    common = setup.m_star**3 * setup.omega_L / (3.0 * setup.e_charge * field)
    return 1j * common * (1.0 / lam_p + 1.0 / lam_q)


def _px(setup, eta):
    return setup.electron_momentum[0] - setup.e_charge * setup.E0 / setup.omega_L * setup.pulse.f(eta)


def _energies(setup, eta):
    """Light-front form of ``p0`` and ``q0``; no square roots on the contour."""
    w = setup.omega_L
    ms2 = setup.m_star**2
    px2 = _px(setup, eta) ** 2
    lam_p, lam_q = setup.electron_momentum[2], setup.positron_momentum[2]
    p0 = w / (2 * lam_p) * (ms2 + px2) + lam_p / (2 * w)
    q0 = w / (2 * lam_q) * (ms2 + px2) + lam_q / (2 * w)
    return p0, q0


def find_saddle(setup: PlaneWaveSetup, seed: complex, tol: float = 1e-12, max_iter: int = 100) -> complex:
    """Complex root of ``p0(eta) + q0(eta) - k0`` by damped Newton iteration."""
    k0 = setup.photon[0]
    lam_p, lam_q = setup.electron_momentum[2], setup.positron_momentum[2]
    kappa = setup.e_charge * setup.E0 / setup.omega_L
    w = setup.omega_L

    def g(eta):
        p0, q0 = _energies(setup, eta)
        return p0 + q0 - k0

    def dg(eta):
        return w * (1 / (2 * lam_p) + 1 / (2 * lam_q)) * 2 * _px(setup, eta) * (-kappa) * setup.pulse.f_prime(eta)

    eta = complex(seed)
    r = g(eta)
    for _ in range(max_iter):
        d = dg(eta)
        if d == 0:
            break
        step = r / d
        lam = 1.0
        while True:
            trial = eta - lam * step
            rt = g(trial)
            if abs(rt) <= abs(r) or lam < 1e-6:
                break
            lam *= 0.5
        eta, r = trial, rt
        if abs(lam * step) <= tol * max(1.0, abs(eta)):
            return eta
    raise SaddleError("saddle not found", f"Newton stalled at eta = {eta}, residual {abs(r)}")


def _vertical_integral(setup, eta_s):
    a, b = eta_s.real, eta_s.imag
    ms2 = setup.m_star**2

    def integrand(t, part):
        val = (ms2 + _px(setup, complex(a, t)) ** 2) * 1j
        return val.real if part == 0 else val.imag

    opts = dict(epsabs=0.0, epsrel=1e-13, limit=200)
    re = quad(integrand, 0.0, b, args=(0,), **opts)[0]
    im = quad(integrand, 0.0, b, args=(1,), **opts)[0]
    return complex(re, im)


def sigma_w_contour(setup: PlaneWaveSetup, guess: float = 0.0) -> complex:
    """Exponent from the exact complex saddle and the vertical contour leg.

    Only the imaginary part is physical.
    """
    lam_p, lam_q = _check_lambdas(setup)
    eta0, eta1 = solve_eta_s_perturbative(setup, guess)
    pref = -(1.0 / (2.0 * lam_p) + 1.0 / (2.0 * lam_q))
    best = None
    for seed in (eta0 + eta1 / setup.xi, eta0 - eta1 / setup.xi):
        eta_s = find_saddle(setup, seed)
        val = pref * _vertical_integral(setup, eta_s)
        if val.imag >= 0:
            return val
        best = val
    raise SaddleError("saddle not found", f"no saddle gives Im W >= 0 (last {best})")


def constant_field_equivalent(setup: PlaneWaveSetup):
    """Constant crossed field and exits matching ``setup`` at the saddle.

    Returns ``(config, photon, electron_exit, positron_exit)`` with
    ``E = B = E0 |f'(eta0)|`` and the photon running along -z.
    """
    from pairgate.fields import ExitState, FieldConfig, PhotonState

    eta0, _ = solve_eta_s_perturbative(setup)
    field = setup.E0 * abs(complex(setup.pulse.f_prime(eta0)).real)
    config = FieldConfig(field, field, setup.e_charge, setup.mass)
    k0 = setup.photon[0]
    photon = PhotonState(k0, -1)
    ms2 = setup.m_star**2
    exits = []
    for p_y, lam in ((setup.electron_momentum[1], setup.electron_momentum[2]), (setup.positron_momentum[1], setup.positron_momentum[2])):
        minus = lam / setup.omega_L  # p0 - pz
        plus = ms2 / minus
        exits.append(ExitState(p_y, 0.5 * (plus - minus), 0.5 * (plus + minus)))
    return config, photon, exits[0], exits[1]

"""Constant crossed fields, exit kinematics and the imaginary trajectory geometry.

Geometry: E along x, B along y, photon along z.  Natural units with the
electron mass and elementary charge carried explicitly, so fields are
given in units of the critical field m^2/e when both are 1.

The creation point sits at x_s = 0.  Exits lie on either side of it; the
side is fixed by the sign of ``E k0 - B kz`` (or ``E - s B`` for the
photon-free branch ``s``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Literal

from pairgate.errors import ForbiddenError, InconsistentSolutionError, NoFieldError

Species = Literal["electron", "positron"]

LIGHT_LIKE_TOL = 1e-9
# residual allowed on the energy-momentum balance, relative to m^2
BALANCE_TOL = 1e-10


class Regime(enum.Enum):
    E_DOMINATED = "E_DOMINATED"
    LIGHT_LIKE = "LIGHT_LIKE"
    B_DOMINATED = "B_DOMINATED"


@dataclass(frozen=True)
class FieldConfig:
    """Constant crossed field: ``E`` along x, ``B`` along y."""

    E: float
    B: float
    e_charge: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not self.e_charge > 0:
            raise ValueError(f"e_charge must be positive, got {self.e_charge}")
        if not (math.isfinite(self.E) and math.isfinite(self.B)):
            raise ValueError("field amplitudes must be finite")


@dataclass(frozen=True)
class PhotonState:
    """Assisting photon along z; ``k0 = 0`` means no photon."""

    k0: float = 0.0
    kz_sign: int = 0

    def __post_init__(self):
        if not (self.k0 >= 0 and math.isfinite(self.k0)):
            raise ValueError(f"photon energy must be finite and >= 0, got {self.k0}")
        if self.kz_sign not in (-1, 0, 1):
            raise ValueError(f"kz_sign must be -1, 0 or +1, got {self.kz_sign}")
        if self.k0 > 0 and self.kz_sign == 0:
            raise ValueError("a photon with k0 > 0 needs kz_sign = +1 or -1")

    @property
    def kz(self) -> float:
        return self.kz_sign * self.k0

    @classmethod
    def assisting(cls, config: FieldConfig, k0: float) -> "PhotonState":
        """Photon with the orientation that helps pair creation.

        Counter-propagating to the field flow, i.e. ``sgn kz = -sgn(E B)``.
        When ``E B = 0`` any orientation works and +z is used.
        """
        if k0 == 0:
            return cls(0.0, 0)
        s = -_sign(config.E * config.B)
        return cls(k0, s if s != 0 else 1)


@dataclass(frozen=True)
class ExitState:
    """Real kinetic momenta of one particle where p_x vanishes."""

    p_y: float
    p_z: float
    p_0: float
    x_exit: float = 0.0

    @classmethod
    def from_momenta(cls, p_y: float, p_z: float, mass: float = 1.0, x_exit: float = 0.0):
        return cls(p_y, p_z, math.sqrt(mass**2 + p_y**2 + p_z**2), x_exit)

    def m_star(self, mass: float = 1.0) -> float:
        return effective_mass(self.p_y, mass)


@dataclass(frozen=True)
class CreationPoint:
    x_s: float
    m_star: float

    @property
    def px_s(self) -> complex:
        # +i m* branch, fixed
        return 1j * self.m_star


@dataclass(frozen=True)
class TunnelingSolution:
    electron_exit: ExitState
    positron_exit: ExitState
    creation: CreationPoint
    extent_minus: float
    extent_plus: float
    photon: PhotonState = field(default_factory=PhotonState)
    # sgn(x_e+ - x_e-)
    direction: int = 1
    # null direction used for k0 = 0 (kz_sign of the photon otherwise)
    branch: int = 0
    w_minus: complex = complex("nan")
    w_plus: complex = complex("nan")


def _sign(v: float) -> int:
    return (v > 0) - (v < 0)


def invariant_strength(config: FieldConfig) -> float:
    """Lorentz invariant field strength ``sqrt(|E^2 - B^2|)``."""
    E, B = abs(config.E), abs(config.B)
    if E == B:
        return 0.0
    # (E - B)(E + B) avoids cancellation in E^2 - B^2
    return math.sqrt(abs((E - B) * (E + B)))


def classify_regime(config: FieldConfig, rel_tol: float = LIGHT_LIKE_TOL) -> Regime:
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    E, B = abs(config.E), abs(config.B)
    if E == 0 and B == 0:
        raise NoFieldError()
    if abs((E - B) * (E + B)) <= rel_tol * max(E, B) ** 2:
        return Regime.LIGHT_LIKE
    return Regime.E_DOMINATED if E > B else Regime.B_DOMINATED


def effective_mass(p_y: float, mass: float = 1.0) -> float:
    if not mass > 0:
        raise ValueError("mass must be positive")
    return math.hypot(mass, p_y)


def momentum_at(x: float, exit: ExitState, config: FieldConfig, species: Species):
    """Kinetic energy, z momentum and p_x^2 at position ``x``.

    Returns ``(p0, pz, px_squared)``; ``px_squared < 0`` marks the
    imaginary part of the trajectory.
    """
    eE = config.e_charge * config.E
    eB = config.e_charge * config.B
    dx = x - exit.x_exit
    if species == "electron":
        p0 = exit.p_0 - eE * dx
        pz = exit.p_z - eB * dx
    elif species == "positron":
        p0 = exit.p_0 + eE * dx
        pz = exit.p_z + eB * dx
    else:
        raise ValueError(f"unknown species {species!r}")
    ms2 = config.mass**2 + exit.p_y**2
    return p0, pz, p0 * p0 - (ms2 + pz * pz)


def _signed_extents(electron_exit, positron_exit, photon, config, branch):
    """Signed ``(x_s - x_e-, x_e+ - x_s)`` for a given null direction.

    For ``k0 > 0`` this is the closed form directly.  For ``k0 = 0`` the photon
    four-vector is replaced by the null direction ``(1, branch)``.
    """
    e = config.e_charge
    E, B = config.E, config.B
    if photon.k0 > 0:
        k0, kz = photon.k0, photon.kz
        den = e * (E * k0 - B * kz)
        scale = e * (abs(E) + abs(B)) * k0
        num_m = k0 * electron_exit.p_0 - kz * electron_exit.p_z
        num_p = k0 * positron_exit.p_0 - kz * positron_exit.p_z
    else:
        den = e * (E - branch * B)
        scale = e * (abs(E) + abs(B))
        num_m = electron_exit.p_0 - branch * electron_exit.p_z
        num_p = positron_exit.p_0 - branch * positron_exit.p_z
    if abs(den) <= 1e-15 * scale:
        raise ForbiddenError("degenerate kinematics", "E k0 - B kz vanishes")
    return num_m / den, num_p / den


def trajectory_extents(
    electron_exit: ExitState,
    positron_exit: ExitState,
    photon: PhotonState,
    config: FieldConfig,
    branch: int | None = None,
):
    """Lengths of the imaginary segments ``(x_s - x_e-, x_e+ - x_s)`` in |x|.

    Without a photon the extent formula is 0/0; both null branches are
    tried and the one with the smaller total exponent wins unless
    ``branch`` pins it.
    """
    if photon.k0 > 0:
        dm, dp = _signed_extents(electron_exit, positron_exit, photon, config, photon.kz_sign)
        return abs(dm), abs(dp)
    branches = (1, -1) if branch is None else (branch,)
    best = None
    for s in branches:
        try:
            sol = _assemble(config, photon, electron_exit, positron_exit, s)
            score = _score(sol, config)
        except (ForbiddenError, InconsistentSolutionError):
            continue
        if best is None or score < best[0]:
            best = (score, sol)
    if best is None:
        raise ForbiddenError("degenerate kinematics", "no null branch gives a tunneling segment")
    return best[1].extent_minus, best[1].extent_plus


def _sqrt_linear_roots(b: float, a: float, c: float, mu: float) -> list[float]:
    """Real roots ``s`` of ``b sqrt(mu^2 + s^2) = a s + c``.

    Squaring gives a quadratic; spurious roots (wrong sign of the right
    side) are dropped and the survivors polished by Newton steps on the
    unsquared equation.
    """
    if b == 0:
        if a == 0:
            return []
        return [-c / a]
    qa = b * b - a * a
    qb = -2.0 * a * c
    qc = b * b * mu * mu - c * c
    if qa == 0:
        cands = [] if qb == 0 else [-qc / qb]
    else:
        disc = qb * qb - 4.0 * qa * qc
        if disc < 0:
            if disc < -1e-13 * (qb * qb + 4.0 * abs(qa * qc)):
                return []
            disc = 0.0
        q = -0.5 * (qb + math.copysign(math.sqrt(disc), qb))
        cands = [0.0] if q == 0 else [q / qa, qc / q]

    def resid(s):
        return b * math.hypot(mu, s) - a * s - c

    roots = []
    for s in cands:
        if not math.isfinite(s):
            continue
        rhs = a * s + c
        if b * rhs < 0 and abs(rhs) > 1e-9 * (abs(a * s) + abs(c) + abs(b) * mu):
            continue
        for _ in range(4):
            deriv = b * s / math.hypot(mu, s) - a
            r = resid(s)
            if deriv == 0 or r == 0:
                break
            s_new = s - r / deriv
            if abs(resid(s_new)) >= abs(r):
                break
            s = s_new
        if all(abs(s - t) > 1e-12 * (1 + abs(t)) for t in roots):
            roots.append(s)
    return sorted(roots)


def balance_residual(electron_exit, positron_exit, photon, config) -> float:
    """``B(p0e + q0e - k0) - E(pze + qze - kz)``, zero when energy and momentum balance."""
    return config.B * (electron_exit.p_0 + positron_exit.p_0 - photon.k0) - config.E * (
        electron_exit.p_z + positron_exit.p_z - photon.kz
    )


def _assemble(config, photon, electron_exit, positron_exit, branch):
    """Place both exits around x_s = 0 and check the segments tunnel."""
    dm, dp = _signed_extents(electron_exit, positron_exit, photon, config, branch)
    if dm * dp < 0:
        raise InconsistentSolutionError("inconsistent solution", "exits on the same side of x_s")
    direction = _sign(dm + dp) or 1
    m = config.mass
    for ex, d in ((electron_exit, dm), (positron_exit, dp)):
        c = _sign(d) * (config.E * ex.p_0 - config.B * ex.p_z)
        if d != 0 and c < -1e-12 * (abs(config.E) + abs(config.B)) * ex.p_0:
            raise InconsistentSolutionError("not a tunneling segment", "p_x turns real before x_s")
    ms = effective_mass(electron_exit.p_y, m)
    return TunnelingSolution(
        electron_exit=replace(electron_exit, x_exit=-dm),
        positron_exit=replace(positron_exit, x_exit=dp),
        creation=CreationPoint(0.0, ms),
        extent_minus=abs(dm),
        extent_plus=abs(dp),
        photon=photon,
        direction=direction,
        branch=branch,
    )


def _score(solution, config) -> float:
    from pairgate.exponent import segment_action, segment_coefficients

    total = 0.0
    for c, length, delta in segment_coefficients(solution, config):
        total += segment_action(c, length, delta, config.e_charge)
    return total


def assemble_solution(
    config: FieldConfig,
    photon: PhotonState,
    electron_exit: ExitState,
    positron_exit: ExitState,
    branch: int | None = None,
) -> TunnelingSolution:
    """Build the solution for a known pair of exit momenta.

    The exits must already satisfy the balance; their ``x_exit`` is ignored
    and recomputed.
    """
    from pairgate.exponent import probability_exponent

    m = config.mass
    if abs(balance_residual(electron_exit, positron_exit, photon, config)) > BALANCE_TOL * m**2 * max(
        1.0, abs(electron_exit.p_0), abs(positron_exit.p_0)
    ):
        raise InconsistentSolutionError("inconsistent solution", "exit momenta violate the balance")
    if photon.k0 > 0:
        branches = (photon.kz_sign,)
    else:
        branches = (1, -1) if branch is None else (branch,)
    cands = []
    for s in branches:
        try:
            cands.append(_assemble(config, photon, electron_exit, positron_exit, s))
        except (ForbiddenError, InconsistentSolutionError):
            continue
    if not cands:
        raise ForbiddenError("kinematically forbidden", "exits admit no tunneling segment")
    best = min(cands, key=lambda s: _score(s, config))
    res = probability_exponent(best, config, photon)
    return replace(best, w_minus=complex(0.0, res.w_minus_im), w_plus=complex(0.0, res.w_plus_im))


def _candidates(config, photon, electron_exit):
    m = config.mass
    ms = effective_mass(electron_exit.p_y, m)
    # B sqrt(m*^2 + qz^2) = E qz + [E(pze - kz) - B(p0e - k0)]
    c = config.E * (electron_exit.p_z - photon.kz) - config.B * (electron_exit.p_0 - photon.k0)
    roots = _sqrt_linear_roots(config.B, config.E, c, ms)
    branches = (photon.kz_sign,) if photon.k0 > 0 else (1, -1)
    out = []
    for qz in roots:
        positron = ExitState.from_momenta(-electron_exit.p_y, qz, m)
        if abs(balance_residual(electron_exit, positron, photon, config)) > BALANCE_TOL * m**2 * max(
            1.0, abs(qz), abs(electron_exit.p_0)
        ):
            continue
        for s in branches:
            try:
                out.append(_assemble(config, photon, electron_exit, positron, s))
            except (ForbiddenError, InconsistentSolutionError):
                continue
    return out


def solve_tunneling(
    config: FieldConfig,
    photon: PhotonState,
    p_y: float,
    p_z: float,
    branch: int | None = None,
) -> TunnelingSolution:
    """Full imaginary trajectory for an electron leaving with ``(p_y, p_z)``.

    The positron exit follows from the balance; when several roots or null
    branches survive the one with the smallest exponent is kept.  The
    returned solution has ``w_minus`` and ``w_plus`` filled in.
    """
    from pairgate.exponent import probability_exponent

    if classify_regime(config) is Regime.LIGHT_LIKE and photon.k0 == 0:
        raise ForbiddenError("forbidden: infinite suppression", "|E| = |B| needs an assisting photon")
    electron = ExitState.from_momenta(p_y, p_z, config.mass)
    cands = _candidates(config, photon, electron)
    if branch is not None:
        cands = [s for s in cands if s.branch == branch]
    if not cands:
        raise ForbiddenError("kinematically forbidden", "no real positron exit satisfies the balance")
    best = min(cands, key=lambda s: _score(s, config))
    res = probability_exponent(best, config, photon)
    return replace(best, w_minus=complex(0.0, res.w_minus_im), w_plus=complex(0.0, res.w_plus_im))


def solve_positron_exit(electron_exit: ExitState, photon: PhotonState, config: FieldConfig) -> ExitState:
    """Positron exit consistent with ``electron_exit`` and the photon.

    ``x_exit`` of the result is measured from x_s = 0.
    """
    classify_regime(config)
    cands = _candidates(config, photon, electron_exit)
    if not cands:
        raise ForbiddenError("kinematically forbidden", "no real positron exit satisfies the balance")
    return min(cands, key=lambda s: _score(s, config)).positron_exit


def boost_z(config: FieldConfig, photon: PhotonState, exits, rapidity: float):
    """Boost everything along z with the given rapidity.

    Returns ``(config, photon, (electron_exit, positron_exit))`` in the new
    frame.  x positions and p_y are untouched.
    """
    ch, sh = math.cosh(rapidity), math.sinh(rapidity)
    E, B = config.E, config.B
    new_config = replace(config, E=ch * E - sh * B, B=ch * B - sh * E)
    if photon.k0 > 0:
        # for a null vector along +-z the boost only rescales k0
        new_photon = PhotonState(photon.k0 * (ch - sh * photon.kz_sign), photon.kz_sign)
    else:
        new_photon = photon

    def boost(ex: ExitState) -> ExitState:
        return replace(ex, p_0=ch * ex.p_0 - sh * ex.p_z, p_z=ch * ex.p_z - sh * ex.p_0)

    return new_config, new_photon, tuple(boost(ex) for ex in exits)


def rapidity_from_velocity(v: float) -> float:
    if not -1 < v < 1:
        raise ValueError("|v| must be below 1")
    return math.atanh(v)

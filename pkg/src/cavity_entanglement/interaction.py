"""Single-excitation amplitudes left in the cavities by the transiting atom.

The atom moves with velocity ``v`` along y at the common x-centre of both
cavities, crossing Alice's cavity for proper time tau in [-3T, -T] and Rob's
for tau in [-T, T], with T = 1/(2 v gamma). Post-selecting the atom in its
ground state leaves the cavities in

    sum_nm F^A_nm a+_nm |0> + F^R_nm b+_nm |0>

with (first order, switching eps(tau) = eps sin^2(2 pi v gamma tau))

    F^A_nm = -i N_nm sin(n pi/2) ∫ Λ(τ) exp(+i ω_nm γ τ) dτ
    F^R_nm = -i Ñ_nm ∫ Λ(τ) ũ_nm(χ(τ)) exp(+i Ω̃_nm artanh(a γ τ)) dτ,
    Λ(τ) = ε(τ) sin(mπ(vγτ - 1/2)) exp(-iΔτ),  χ(τ) = sqrt(1/a² - γ²τ²).

Amplitudes are integrated at unit coupling and scaled by ``eps`` afterwards,
so they are exactly linear in the coupling.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from .geometry import CavityGeometry, ModeIndex
from .modes import (DEFAULT_ROOT_TOL, build_rindler_modes, effective_mass,
                    eigenfrequencies, make_rindler_mode, minkowski_mode)
from .quadrature import QuadratureError, gauss_kronrod

DEFAULT_EPS = 0.01
DEFAULT_QUAD_TOL = 1e-9
# relative margin below a = 2v that amplitude_rob still accepts
BOUND_MARGIN = 1e-6
PERTURBATIVE_LIMIT = 1e-2


class KinematicBoundError(ValueError):
    """Acceleration violates a < 2v: Rob's trailing wall would reach the atom."""


class AmplitudeQuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class AtomParams:
    """Detector gap, transverse velocity and coupling amplitude."""

    Delta: float
    v: float
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        if not 0.0 < self.v < 1.0:
            raise ValueError(f"velocity must satisfy 0 < v < 1, got {self.v}")
        if not math.isfinite(self.Delta):
            raise ValueError(f"gap must be finite, got {self.Delta}")
        if not math.isfinite(self.eps):
            raise ValueError(f"coupling must be finite, got {self.eps}")

    @property
    def gamma(self):
        return 1.0 / math.sqrt(1.0 - self.v * self.v)

    @property
    def T(self):
        return 1.0 / (2.0 * self.v * self.gamma)

    def max_acceleration(self):
        """Largest accepted centre acceleration, 2v(1 - 1e-6)."""
        return 2.0 * self.v * (1.0 - BOUND_MARGIN)


def switching(tau, atom):
    """eps * sin^2(2 pi v gamma tau); zero at every integer multiple of T."""
    return atom.eps * np.sin(2.0 * np.pi * atom.v * atom.gamma * np.asarray(tau)) ** 2


def lambda_factor(tau, m, atom):
    """Λ(τ) = ε(τ) sin(mπ(vγτ - 1/2)) e^{-iΔτ}."""
    tau = np.asarray(tau, dtype=float)
    vg = atom.v * atom.gamma
    return (switching(tau, atom) * np.sin(m * np.pi * (vg * tau - 0.5))
            * np.exp(-1j * atom.Delta * tau))


def _unit_lambda(tau, m, atom):
    vg = atom.v * atom.gamma
    return (np.sin(2.0 * np.pi * vg * tau) ** 2 * np.sin(m * np.pi * (vg * tau - 0.5))
            * np.exp(-1j * atom.Delta * tau))


def _centre_factor(n):
    """sin(n pi / 2) evaluated exactly."""
    return 0 if n % 2 == 0 else (1 if n % 4 == 1 else -1)


def _integrate(f, a, b, phase_span, quad_tol, breakpoints=()):
    pieces = max(2, int(math.ceil(phase_span / math.pi)))
    try:
        res = gauss_kronrod(f, a, b, rel_tol=quad_tol, abs_tol=1e-15 * abs(b - a),
                            breakpoints=breakpoints, initial_intervals=pieces,
                            max_intervals=20000)
    except QuadratureError as exc:
        raise AmplitudeQuadratureError(str(exc)) from exc
    return complex(res.value)


def _inertial_amplitude(idx, atom, mode, lo, hi, quad_tol):
    c = _centre_factor(idx.n)
    if c == 0:
        return 0j
    g = atom.gamma

    def f(tau):
        return _unit_lambda(tau, idx.m, atom) * np.exp(1j * mode.omega * g * tau)

    span = (abs(mode.omega * g - atom.Delta) + 2 * np.pi * atom.v * g * (2 + idx.m)) * (hi - lo)
    return -1j * c * mode.norm * atom.eps * _integrate(f, lo, hi, span, quad_tol)


def amplitude_alice(idx, atom, mink_mode, quad_tol=DEFAULT_QUAD_TOL):
    """F^A_nm over tau in [-3T, -T]; exactly 0 for even n (node at the centre)."""
    T = atom.T
    return _inertial_amplitude(idx, atom, mink_mode, -3.0 * T, -T, quad_tol)


def amplitude_rob_inertial(idx, atom, mink_mode, quad_tol=DEFAULT_QUAD_TOL):
    """F^R_nm for a = 0, where Rob's cavity modes are inertial sines."""
    T = atom.T
    return _inertial_amplitude(idx, atom, mink_mode, -T, T, quad_tol)


def check_kinematic_bound(a, atom):
    if a >= 2.0 * atom.v:
        raise KinematicBoundError(
            f"acceleration a = {a} violates the bound a < 2v = {2.0 * atom.v}")
    if a > atom.max_acceleration() * (1.0 + 4.0 * np.finfo(float).eps):
        raise KinematicBoundError(
            f"acceleration a = {a} exceeds the cap 2v(1 - {BOUND_MARGIN:g}) = "
            f"{atom.max_acceleration()}")


def interaction_window(atom, geom):
    """Half-width of the proper-time window the atom spends inside Rob's cavity.

    Normally T; shorter when the trailing wall chi_- reaches the atom first,
    i.e. when chi(tau) = sqrt(1/a^2 - gamma^2 tau^2) drops below chi_-
    (for L = 1 this happens once a > 4v^2/(1 + v^2)).
    """
    T = atom.T
    a = geom.a
    lim = (1.0 / a) ** 2 - geom.chi_minus ** 2
    exit_tau = math.sqrt(lim) / atom.gamma
    return min(T, exit_tau)


def amplitude_rob(idx, atom, rind_mode, geom, quad_tol=DEFAULT_QUAD_TOL):
    """F^R_nm for a > 0 by quadrature along the atom's proper time.

    The atom couples to Rob's field only while it is inside the cavity, so the
    window is clipped to ``interaction_window`` (the mode vanishes at chi_-, so
    the integrand stays continuous).

    Raises
    ------
    KinematicBoundError
        If ``a >= 2v`` or above the ``2v(1 - 1e-6)`` cap.
    """
    a = geom.a
    if a <= 0:
        raise ValueError("amplitude_rob needs a > 0; use amplitude_rob_inertial")
    check_kinematic_bound(a, atom)
    g = atom.gamma
    tc = interaction_window(atom, geom)
    inv_a2 = 1.0 / (a * a)
    chi_lo = geom.chi_minus

    def f(tau):
        chi = np.sqrt(np.maximum(inv_a2 - (g * tau) ** 2, 0.0))
        chi = np.clip(chi, chi_lo, geom.chi_plus)
        phase = rind_mode.Omega * np.arctanh(a * g * tau)
        return _unit_lambda(tau, idx.m, atom) * rind_mode.profile(chi) * np.exp(1j * phase)

    span = (abs(atom.Delta) * 2 * tc + 2 * np.pi * atom.v * g * (2 + idx.m) * 2 * tc
            + 2 * rind_mode.Omega * math.atanh(a * g * tc)
            + idx.n * math.pi)
    val = _integrate(f, -tc, tc, span, quad_tol, breakpoints=(0.0,))
    return -1j * rind_mode.norm * atom.eps * val


def resonance_phase(idx, atom, kappa):
    """g_nm(κ) = (Δ sqrt(1 - v²) - sqrt(π²n² + π²m² + κ²)) / v (unit cavity)."""
    return (atom.Delta * math.sqrt(1.0 - atom.v ** 2)
            - math.sqrt(math.pi ** 2 * (idx.n ** 2 + idx.m ** 2) + kappa ** 2)) / atom.v


@dataclass
class AmplitudeSet:
    """Amplitudes F^A, F^R for n, m = 1..N (row n-1, column m-1)."""

    N: int
    F_A: np.ndarray
    F_R: np.ndarray
    converged: bool = False
    tail_fraction: float = math.nan

    def shell_weight(self, k):
        """sum of |F^A|^2 + |F^R|^2 over the shell max(n, m) = k."""
        w = np.abs(self.F_A) ** 2 + np.abs(self.F_R) ** 2
        return float(w[k - 1, :k].sum() + w[:k - 1, k - 1].sum())

    def total_weight(self):
        return float((np.abs(self.F_A) ** 2).sum() + (np.abs(self.F_R) ** 2).sum())


@dataclass
class AmplitudeBuilder:
    """Computes amplitude sets of growing truncation for one (a, kappa) point.

    Rindler eigenfrequencies are cached per transverse index m and extended
    by continuing the scan above the last root, so raising N only computes
    the new shell. Instances are not meant to be shared between threads.
    """

    atom: AtomParams
    a: float
    kappa: float
    L: float = 1.0
    kappa_alice: float = 0.0
    quad_tol: float = DEFAULT_QUAD_TOL
    root_tol: float = DEFAULT_ROOT_TOL
    geom: CavityGeometry = field(init=False)
    _amps: dict = field(init=False, default_factory=dict)
    _rindler: dict = field(init=False, default_factory=dict)

    def __post_init__(self):
        if self.a > 0:
            check_kinematic_bound(self.a, self.atom)
        self.geom = CavityGeometry(self.a, self.L)

    def rindler_modes(self, m, count):
        modes = self._rindler.setdefault(m, [])
        if len(modes) >= count:
            return modes[:count]
        km = effective_mass(m, self.geom, self.kappa)
        if not modes:
            modes.extend(build_rindler_modes(m, count, self.geom, self.kappa,
                                             tol=self.root_tol))
        else:
            last = modes[-1].Omega
            # restart just above the last root: roots are accurate to ~1e-13
            start = last * (1.0 + 1e-9) + 1e-9
            omegas = eigenfrequencies(count - len(modes), km, self.geom,
                                      tol=self.root_tol, start=start)
            for n, om in enumerate(omegas, start=len(modes) + 1):
                modes.append(make_rindler_mode(ModeIndex(n, m), km, om, self.geom))
        return modes[:count]

    def amplitude(self, n, m):
        key = (n, m)
        if key not in self._amps:
            idx = ModeIndex(n, m)
            fa = amplitude_alice(idx, self.atom, minkowski_mode(idx, self.geom, self.kappa_alice),
                                 self.quad_tol)
            if self.a == 0:
                fr = amplitude_rob_inertial(idx, self.atom,
                                            minkowski_mode(idx, self.geom, self.kappa),
                                            self.quad_tol)
            else:
                mode = self.rindler_modes(m, n)[n - 1]
                fr = amplitude_rob(idx, self.atom, mode, self.geom, self.quad_tol)
            self._amps[key] = (fa, fr)
        return self._amps[key]

    def __call__(self, N):
        FA = np.zeros((N, N), dtype=complex)
        FR = np.zeros((N, N), dtype=complex)
        if self.a > 0:
            for m in range(1, N + 1):
                self.rindler_modes(m, N)
        for n in range(1, N + 1):
            for m in range(1, N + 1):
                FA[n - 1, m - 1], FR[n - 1, m - 1] = self.amplitude(n, m)
        amps = AmplitudeSet(N, FA, FR)
        total = amps.total_weight()
        if total > PERTURBATIVE_LIMIT:
            warnings.warn(
                f"total excitation weight {total:.3g} exceeds {PERTURBATIVE_LIMIT}: "
                "first-order perturbation theory is doubtful", RuntimeWarning, stacklevel=2)
        return amps

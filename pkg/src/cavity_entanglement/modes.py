"""Field modes of the inertial and the uniformly accelerated cavity.

Minkowski (Alice) modes are closed-form. Rindler (Rob) modes separate as
``u_m(y) * ũ(chi) * exp(-i Omega eta)`` where ũ solves

    chi^2 ũ'' + chi ũ' + (Omega^2 - kappa_m^2 chi^2) ũ = 0,
    ũ(chi_-) = 0,

and the eigenfrequencies Omega are fixed by ũ(chi_+) = 0. The radial
function is the Bessel combination

    ũ(chi) = Re I_{iΩ}(κ_m χ_-) K_{iΩ}(κ_m χ) - K_{iΩ}(κ_m χ_-) Re I_{iΩ}(κ_m χ).

Because Re I and K have Wronskian 1/x, this combination also satisfies
ũ'(chi_-) = -1/chi_- for every Omega and kappa_m. That initial condition
defines the same function when the Bessel evaluation leaves its accurate
envelope (large Omega, large argument), where it is computed instead by
Chebyshev collocation of the radial equation.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import brentq

from . import bessel
from .chebyshev import ChebyshevInterpolant, diff_matrix, nodes
from .geometry import ModeIndex
from .quadrature import gauss_kronrod

# Bessel evaluation envelope used by method="auto"
BESSEL_MAX_ORDER = 30.0
BESSEL_MAX_ARG = 50.0

DEFAULT_ROOT_TOL = 1e-9
DEFAULT_NORM_TOL = 1e-10


class BracketNotFound(RuntimeError):
    """The eigenfrequency scan ended without enough sign changes."""

    def __init__(self, message, scan_range):
        super().__init__(f"{message}; scanned Omega in [{scan_range[0]:.6g}, {scan_range[1]:.6g}]")
        self.scan_range = scan_range


class RootNotConverged(RuntimeError):
    def __init__(self, message, bracket):
        super().__init__(f"{message}; best bracket {bracket}")
        self.bracket = bracket


@dataclass(frozen=True)
class MinkowskiMode:
    idx: ModeIndex
    omega: float
    norm: float


@dataclass(frozen=True)
class RindlerMode:
    """A normalized mode of Rob's cavity.

    ``profile`` evaluates the un-normalized radial function ũ(chi);
    only ``norm * profile`` is physical.
    """

    idx: ModeIndex
    kappa_m: float
    Omega: float
    norm: float
    profile: ChebyshevInterpolant
    method: str

    def radial(self, chi):
        return self.profile(chi)


def minkowski_frequency(n, m, L, kappa):
    return math.sqrt((n * math.pi / L) ** 2 + (m * math.pi / L) ** 2 + kappa * kappa)


def minkowski_mode(idx, geom, kappa):
    """Closed-form inertial mode: omega_nm and N_nm = sqrt(2/(omega L^2))."""
    if not kappa >= 0:
        raise ValueError(f"bare mass must be non-negative, got {kappa}")
    L = geom.L
    omega = minkowski_frequency(idx.n, idx.m, L, kappa)
    return MinkowskiMode(idx, omega, math.sqrt(2.0) / math.sqrt(omega * L * L))


def effective_mass(m, geom, kappa):
    return math.sqrt((m * math.pi / geom.L) ** 2 + kappa * kappa)


# ------------------------------------------------------------ radial backends

def _bessel_radial(Omega, kappa_m, geom, chi, cfg=bessel.DEFAULT_CONFIG):
    x0 = kappa_m * geom.chi_minus
    i0 = bessel.rei_imag(Omega, x0, cfg)
    k0 = bessel.k_imag(Omega, x0, cfg)
    chi = np.atleast_1d(np.asarray(chi, dtype=float))
    out = np.empty_like(chi)
    for j, c in enumerate(chi):
        if c == geom.chi_minus:
            out[j] = 0.0
            continue
        x = kappa_m * c
        out[j] = i0 * bessel.k_imag(Omega, x, cfg) - k0 * bessel.rei_imag(Omega, x, cfg)
    return out


def _log_radial(Omega, geom, chi):
    s = np.log(np.asarray(chi, dtype=float) / geom.chi_minus)
    if Omega == 0.0:
        return -s
    return -np.sin(Omega * s) / Omega


def _resolution(Omega, kappa_m, lo, hi):
    """Collocation degree from the local wavenumber/growth rate on [lo, hi]."""
    k2 = np.abs((Omega / np.array([lo, hi])) ** 2 - kappa_m ** 2)
    extent = (hi - lo) * math.sqrt(float(k2.max()))
    return int(min(400, 32 + 2 * math.ceil(extent)))


def _collocate(Omega, kappa_m, lo, hi, anchor, value, slope, M=None):
    """Solve the radial equation on [lo, hi] from Cauchy data at ``anchor``.

    Returns an interpolant; ``anchor`` is ``lo`` or ``hi``.
    """
    if M is None:
        M = _resolution(Omega, kappa_m, lo, hi)
    t = nodes(M)
    chi = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t
    D = (2.0 / (hi - lo)) * diff_matrix(M)
    A = D @ D + (1.0 / chi)[:, None] * D
    A[np.diag_indices_from(A)] += (Omega / chi) ** 2 - kappa_m ** 2
    rhs = np.zeros(M + 1)
    # node 0 is hi, node M is lo; the two Cauchy rows replace the collocation
    # rows at both ends
    j, other = (M, 0) if anchor == lo else (0, M)
    A[j, :] = 0.0
    A[j, j] = 1.0
    rhs[j] = value
    A[other, :] = D[j, :]
    rhs[other] = slope
    return ChebyshevInterpolant(lo, hi, np.linalg.solve(A, rhs))


def _growth_to(chi, Omega, kappa_m):
    """WKB log-growth from the turning point Omega/kappa_m out to ``chi``."""
    r = Omega / (kappa_m * chi)
    if r >= 1.0:
        return 0.0
    return kappa_m * chi * math.sqrt(1.0 - r * r) - Omega * math.acos(r)


def evanescent_growth(Omega, kappa_m, geom):
    """WKB log-growth across the classically forbidden part chi > Omega/kappa_m."""
    if kappa_m == 0.0:
        return 0.0
    return _growth_to(geom.chi_plus, Omega, kappa_m)


# matching is used once the forbidden zone amplifies errors by more than e^3
_MATCH_GROWTH = 3.0
# beyond this decay (~1e-13) the mode is cut off by an effective wall
_MAX_GROWTH = 30.0


class RadialShot:
    """Left solution from chi_- (ũ = 0, ũ' = -1/chi_-), optionally matched to a
    right solution from the outer wall (u = 0, u' = 1/chi_+) at the turning point.

    ``wall`` equals ũ(chi_+; Omega) for exact solutions in both cases, because
    chi * W(left, right) is constant and equals left(chi_+) at chi_+. When the
    forbidden zone would amplify by more than e^30 the outer Dirichlet
    condition is imposed where the WKB decay reaches e^-30 instead; the mode
    is zero beyond that point and Omega moves by ~e^-60 relative.
    """

    def __init__(self, Omega, kappa_m, geom, M=None):
        lo, hi = geom.chi_minus, geom.chi_plus
        self.match = hi
        self.outer = hi
        growth = evanescent_growth(Omega, kappa_m, geom)
        if growth > _MATCH_GROWTH:
            self.match = min(max(Omega / kappa_m, lo + 0.05 * geom.L), hi - 0.05 * geom.L)
            if growth > _MAX_GROWTH:
                self.outer = brentq(lambda c: _growth_to(c, Omega, kappa_m) - _MAX_GROWTH,
                                    max(self.match, Omega / kappa_m), hi)
                self.outer = max(self.outer, self.match + 0.05 * geom.L)
        self.left = _collocate(Omega, kappa_m, lo, self.match, lo, 0.0, -1.0 / lo, M)
        self.right = None
        if self.match < hi:
            self.right = _collocate(Omega, kappa_m, self.match, self.outer, self.outer,
                                    0.0, 1.0 / hi, M)
            uL, uR = self.left.values[0], self.right.values[-1]
            dL = self.left.derivative_values()[0]
            dR = self.right.derivative_values()[-1]
            self.wall = self.match * (uL * dR - dL * uR)
            self.scale = uL / uR
        else:
            self.wall = float(self.left.values[0])

    def profile(self):
        if self.right is None:
            return self.left
        return PiecewiseProfile(self.left, self.right, self.scale, self.outer)


class PiecewiseProfile:
    """Left interpolant below the matching point, scaled right one above it."""

    def __init__(self, left, right, scale, outer=None):
        self.left = left
        self.right = right
        self.scale = float(scale)
        self.lo = left.lo
        self.match = left.hi
        self.outer = right.hi if outer is None else outer

    def __call__(self, x):
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(xa)
        below = xa <= self.match
        if below.any():
            out[below] = self.left(xa[below])
        mid = ~below & (xa <= self.outer)
        if mid.any():
            out[mid] = self.scale * self.right(xa[mid])
        out[xa > self.outer] = 0.0
        return out if np.ndim(x) else float(out[0])


def spectral_profile(Omega, kappa_m, geom, M=None):
    """Radial function by Chebyshev collocation from chi_- (no matching)."""
    return _collocate(Omega, kappa_m, geom.chi_minus, geom.chi_plus, geom.chi_minus,
                      0.0, -1.0 / geom.chi_minus, M)


def _in_bessel_envelope(Omega, kappa_m, geom):
    return (Omega <= BESSEL_MAX_ORDER and kappa_m * geom.chi_plus <= BESSEL_MAX_ARG
            and kappa_m * geom.chi_minus >= 1e-3
            and evanescent_growth(Omega, kappa_m, geom) <= _MATCH_GROWTH)


def _resolve_method(method, Omega, kappa_m, geom):
    if kappa_m == 0.0:
        if method not in ("auto", "log"):
            raise ValueError("kappa_m = 0 is only supported by the logarithmic branch")
        return "log"
    if method == "auto":
        return "bessel" if _in_bessel_envelope(Omega, kappa_m, geom) else "spectral"
    if method not in ("bessel", "spectral"):
        raise ValueError(f"unknown radial method {method!r}")
    return method


def radial_eval(Omega, kappa_m, geom, chi, method="auto"):
    """Un-normalized radial mode function ũ(chi; Omega) of Rob's cavity.

    Parameters
    ----------
    Omega : float
        Trial dimensionless Rindler frequency.
    kappa_m : float
        Effective mass sqrt((m pi/L)^2 + kappa^2); 0 selects the massless
        (1+1)-dimensional logarithmic branch.
    chi : float or array
        Radial coordinate(s) in [chi_-, chi_+].
    method : {"auto", "bessel", "spectral", "log"}
        ``auto`` uses the Bessel form inside its accurate envelope and the
        spectral solution outside it.
    """
    if geom.inertial:
        raise ValueError("radial modes need a > 0")
    if kappa_m < 0:
        raise ValueError("kappa_m must be non-negative")
    chi_arr = np.asarray(chi, dtype=float)
    if np.any(chi_arr < geom.chi_minus * (1 - 1e-14)) or np.any(chi_arr > geom.chi_plus * (1 + 1e-14)):
        raise ValueError(f"chi outside the cavity [{geom.chi_minus}, {geom.chi_plus}]")
    how = _resolve_method(method, Omega, kappa_m, geom)
    if how == "log":
        out = _log_radial(Omega, geom, chi_arr)
    elif how == "bessel":
        out = _bessel_radial(Omega, kappa_m, geom, chi_arr)
    else:
        out = spectral_profile(Omega, kappa_m, geom)(chi_arr)
    return out if np.ndim(chi) else float(np.asarray(out).ravel()[0])


def wall_value(Omega, kappa_m, geom, method="auto"):
    """ũ(chi_+; Omega); its zeros are the eigenfrequencies."""
    how = _resolve_method(method, Omega, kappa_m, geom)
    if how == "log":
        return float(_log_radial(Omega, geom, geom.chi_plus))
    if how == "bessel":
        return float(_bessel_radial(Omega, kappa_m, geom, geom.chi_plus)[0])
    return float(RadialShot(Omega, kappa_m, geom).wall)


# ------------------------------------------------------------ eigenfrequencies

def _wkb_density(Omega, kappa_m, geom):
    """dn/dOmega from the WKB phase integral (never below ln(chi_+/chi_-)/pi)."""
    S = geom.log_width
    if kappa_m == 0.0 or Omega <= kappa_m * geom.chi_minus:
        return S / math.pi

    def atanh_w(chi):
        r = kappa_m * chi / Omega
        if r >= 1.0:
            return 0.0
        return math.atanh(math.sqrt(1.0 - r * r))

    return max(S, atanh_w(geom.chi_minus) - atanh_w(geom.chi_plus)) / math.pi


def spectrum_lower_bound(kappa_m, geom):
    """Omega_1 >= sqrt((pi/S)^2 + kappa_m^2 chi_-^2) by Sturm comparison."""
    S = geom.log_width
    return math.sqrt((math.pi / S) ** 2 + (kappa_m * geom.chi_minus) ** 2)


def eigenfrequencies(count, kappa_m, geom, tol=DEFAULT_ROOT_TOL, method="auto",
                     start=None, step_fraction=0.2, max_steps=200000):
    """The first ``count`` eigenfrequencies above ``start`` in increasing order.

    Scans Omega upward in steps of ``step_fraction`` times the local WKB level
    spacing, brackets every sign change of ũ(chi_+; Omega) and refines each
    bracket to absolute tolerance ``tol`` with Brent's method.

    Raises
    ------
    BracketNotFound
        If fewer than ``count`` sign changes turn up within ``max_steps``.
    RootNotConverged
        If the bracket refinement fails.
    """
    if geom.inertial:
        raise ValueError("Rindler eigenfrequencies need a > 0")
    if kappa_m < 0:
        raise ValueError("kappa_m must be non-negative")
    if start is None:
        start = 0.0 if kappa_m == 0.0 else 0.999 * spectrum_lower_bound(kappa_m, geom)

    def f(om):
        return wall_value(om, kappa_m, geom, method)

    roots = []
    lo = float(start)
    flo = f(lo)
    for _ in range(max_steps):
        hi = lo + step_fraction / _wkb_density(lo, kappa_m, geom)
        fhi = f(hi)
        if flo == 0.0 and lo > start:
            roots.append(lo)
        elif flo * fhi < 0.0:
            try:
                # refine to machine precision: for modes evanescent at chi_+
                # |ũ(chi_+)| grows ~1e5 x max|ũ| per unit Omega, so ``tol`` alone
                # would not make the wall value vanish
                root = brentq(f, lo, hi, xtol=min(tol, 1e-300),
                              rtol=4 * np.finfo(float).eps, maxiter=200)
            except (RuntimeError, ValueError) as exc:
                raise RootNotConverged(str(exc), (lo, hi)) from exc
            roots.append(root)
        if len(roots) == count:
            return roots
        lo, flo = hi, fhi
    raise BracketNotFound(f"found {len(roots)} of {count} eigenfrequencies", (start, lo))


def eigenfrequency_solve(n, kappa_m, geom, tol=DEFAULT_ROOT_TOL, method="auto"):
    """The n-th eigenfrequency Omega_n (n = 1, 2, ...)."""
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    return eigenfrequencies(int(n), kappa_m, geom, tol=tol, method=method)[-1]


def count_interior_nodes(profile, lo, hi, samples=400, floor=1e-4):
    """Sign changes of ``profile`` strictly inside (lo, hi).

    Sign runs whose peak is below ``floor`` times the global peak are merged
    into their neighbours: an evanescent tail that is ~1e-8 of the mode can
    flip sign under rounding-level errors in Omega.
    """
    # Rindler oscillations are uniform in ln(chi), not chi
    frac = np.arange(1, samples + 1) / (samples + 1)
    x = lo * (hi / lo) ** frac if lo > 0 else lo + (hi - lo) * frac
    v = np.asarray(profile(x))
    thresh = floor * np.abs(v).max()
    signs = []
    run_sign, run_peak = 0.0, 0.0
    for val in v:
        sg = np.sign(val)
        if sg != run_sign:
            if run_peak > thresh:
                signs.append(run_sign)
            run_sign, run_peak = sg, 0.0
        run_peak = max(run_peak, abs(val))
    if run_peak > thresh:
        signs.append(run_sign)
    signs = [sg for sg in signs if sg != 0.0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


# ------------------------------------------------------------ normalization

def klein_gordon_norm(frequency, profile, lo, hi, transverse_length, weight=None,
                      rel_tol=DEFAULT_NORM_TOL):
    """Normalization making (phi, phi) = 1 for phi = N profile(x) u_m(y) e^{-i w t}.

    The transverse sine integrates to ``transverse_length / 2`` and the time
    derivative contributes ``2 w``, so
    N = [w * L_y * int profile^2 * weight]^{-1/2}.
    """
    if weight is None:
        integrand = lambda x: profile(x) ** 2
    else:
        integrand = lambda x: profile(x) ** 2 * weight(x)
    res = gauss_kronrod(integrand, lo, hi, rel_tol=rel_tol, initial_intervals=4)
    return 1.0 / math.sqrt(frequency * transverse_length * float(res.value))


def rindler_norm(Omega, profile, geom, rel_tol=DEFAULT_NORM_TOL):
    """Ñ = [Omega L ∫ ũ^2/chi dchi]^{-1/2} over Rob's cavity."""
    return klein_gordon_norm(Omega, profile, geom.chi_minus, geom.chi_plus, geom.L,
                             weight=lambda c: 1.0 / c, rel_tol=rel_tol)


def _profile_for(Omega, kappa_m, geom, method):
    how = _resolve_method(method, Omega, kappa_m, geom)
    lo, hi = geom.chi_minus, geom.chi_plus
    if how == "spectral":
        return RadialShot(Omega, kappa_m, geom).profile(), how
    M = _resolution(Omega, kappa_m, lo, hi)
    grid = 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes(M)
    if how == "log":
        vals = _log_radial(Omega, geom, grid)
    else:
        vals = _bessel_radial(Omega, kappa_m, geom, grid)
        vals[-1] = 0.0
    return ChebyshevInterpolant(lo, hi, vals), how


def build_rindler_modes(m, count, geom, kappa, tol=DEFAULT_ROOT_TOL, method="auto",
                        kappa_m=None):
    """Normalized Rindler modes (1, m) .. (count, m).

    ``kappa_m`` overrides the effective mass (``0`` gives the logarithmic
    test branch).
    """
    if kappa_m is None:
        kappa_m = effective_mass(m, geom, kappa)
    omegas = eigenfrequencies(count, kappa_m, geom, tol=tol, method=method)
    return [make_rindler_mode(ModeIndex(n, m), kappa_m, om, geom, method)
            for n, om in enumerate(omegas, start=1)]


def make_rindler_mode(idx, kappa_m, Omega, geom, method="auto", check_nodes=True):
    profile, how = _profile_for(Omega, kappa_m, geom, method)
    if check_nodes:
        found = count_interior_nodes(profile, geom.chi_minus, geom.chi_plus,
                                     samples=40 * idx.n + 200)
        if found != idx.n - 1:
            raise BracketNotFound(
                f"mode {idx} has {found} interior nodes, expected {idx.n - 1}: "
                "a root was skipped", (Omega, Omega))
    norm = rindler_norm(Omega, profile, geom)
    return RindlerMode(idx, kappa_m, Omega, norm, profile, how)


def rindler_mode(idx, geom, kappa, tol=DEFAULT_ROOT_TOL, method="auto"):
    """Solve and normalize the single Rindler mode ``idx``."""
    return build_rindler_modes(idx.m, idx.n, geom, kappa, tol, method)[-1]


def dump_modes(modes):
    """Diagnostic text, one line per mode: ``n m kappa_m Omega norm``."""
    lines = []
    for md in modes:
        lines.append(f"{md.idx.n} {md.idx.m} {md.kappa_m!r} {md.Omega!r} {md.norm!r}")
    return "\n".join(lines) + ("\n" if lines else "")

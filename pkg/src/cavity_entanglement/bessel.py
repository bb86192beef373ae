r"""Modified Bessel functions of purely imaginary order.

Evaluates :math:`K_{i\nu}(x)` and :math:`\mathrm{Re}\,I_{i\nu}(x)` (and their
x-derivatives) for real :math:`\nu \ge 0`, :math:`x > 0`. Two independent
evaluation paths are provided:

* the ascending series
  :math:`I_{i\nu}(x) = \sum_k (x/2)^{2k+i\nu} / (k!\,\Gamma(k+1+i\nu))`,
  with :math:`K_{i\nu}(x) = -\pi\,\mathrm{Im}\,I_{i\nu}(x) / \sinh(\nu\pi)`;
* integral representations, evaluated by adaptive Gauss-Kronrod. For K the
  contour of :math:`\tfrac12\int_{-\infty}^{\infty} e^{-x\cosh t + i\nu t}dt`
  is shifted to :math:`\mathrm{Im}\,t = \theta` so that the integrand carries
  the :math:`e^{-\nu\theta}` decay explicitly instead of producing it through
  cancellation.

The public functions pick whichever path has the smaller estimated rounding
error (series cancellation ratio vs. quadrature cancellation ratio).
"""

from dataclasses import dataclass
import cmath
import math

import numpy as np

from .gamma import log_gamma
from .quadrature import QuadratureError, gauss_kronrod

_EPS = np.finfo(float).eps
_SMALL_ORDER = 1e-8


class BesselDomainError(ValueError):
    """Argument outside x > 0, nu >= 0."""


class BesselBudgetExceeded(ArithmeticError):
    """Series or quadrature did not converge within the configured budget."""

    def __init__(self, message, error_estimate):
        super().__init__(f"{message} (achieved error estimate {error_estimate:.3e})")
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class BesselEvalConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-30
    max_terms: int = 2000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not self.abs_tol >= 0:
            raise ValueError("abs_tol must be non-negative")
        if int(self.max_terms) != self.max_terms or self.max_terms < 16:
            raise ValueError("max_terms must be an integer >= 16")


DEFAULT_CONFIG = BesselEvalConfig()


@dataclass(frozen=True)
class SeriesSum:
    """Partial sums of the ascending series for :math:`I_{i\\nu}(x)`."""

    value: complex
    deriv: complex
    magnitude: float  # sum of |terms|, for cancellation estimates
    deriv_magnitude: float
    terms: int


def _check(nu, x):
    if not x > 0 or not math.isfinite(x):
        raise BesselDomainError(f"x must be positive and finite, got {x!r}")
    if not nu >= 0 or not math.isfinite(nu):
        raise BesselDomainError(f"order nu must be non-negative and finite, got {nu!r}")


def i_series(nu, x, cfg=DEFAULT_CONFIG):
    """Sum the ascending series of I_{i nu}(x) and its x-derivative."""
    _check(nu, x)
    half = 0.5 * x
    q = half * half
    term = cmath.exp(1j * nu * math.log(half) - log_gamma(complex(1.0, nu)))
    total = term
    dtotal = term * (1j * nu / x)
    mag = abs(term)
    dmag = abs(dtotal)
    k = 0
    while True:
        k += 1
        if k > cfg.max_terms:
            raise BesselBudgetExceeded(
                f"I series for nu={nu}, x={x} exceeded {cfg.max_terms} terms",
                abs(term) / max(abs(total), 1e-300))
        term = term * (q / (k * complex(k, nu)))
        dterm = term * (complex(2 * k, nu) / x)
        total += term
        dtotal += dterm
        at = abs(term)
        mag += at
        dmag += abs(dterm)
        # terms decrease monotonically once k^2 > q
        if k * k > q and at <= 0.25 * _EPS * mag:
            break
    return SeriesSum(total, dtotal, mag, dmag, k + 1)


def _inv_sinh_pi(nu):
    # 1/sinh(nu*pi) without overflow
    e = math.exp(-nu * math.pi)
    return 2.0 * e / (1.0 - e * e)


# ---------------------------------------------------------------- series path

def k_imag_series(nu, x, cfg=DEFAULT_CONFIG, deriv=False):
    """K_{i nu}(x) (or its derivative) from the series; returns (value, rel_err_est)."""
    if nu < _SMALL_ORDER:
        return _k0_series(x, deriv)
    s = i_series(nu, x, cfg)
    im = s.deriv.imag if deriv else s.value.imag
    mag = s.deriv_magnitude if deriv else s.magnitude
    val = -math.pi * im * _inv_sinh_pi(nu)
    return val, _EPS * 4.0 * mag / max(abs(im), 1e-300)


def rei_imag_series(nu, x, cfg=DEFAULT_CONFIG, deriv=False):
    """Re I_{i nu}(x) (or derivative) from the series; returns (value, rel_err_est)."""
    s = i_series(nu, x, cfg)
    re = s.deriv.real if deriv else s.value.real
    mag = s.deriv_magnitude if deriv else s.magnitude
    return re, _EPS * 4.0 * mag / max(abs(re), 1e-300)


def _k0_series(x, deriv=False):
    """Order-zero K_0 / K_0' = -K_1 from the logarithmic ascending series."""
    q = 0.25 * x * x
    lg = math.log(0.5 * x) + 0.5772156649015329
    # K0 = -lg*I0 + sum q^k/(k!)^2 H_k ; I0 = sum q^k/(k!)^2
    term = 1.0
    h = 0.0
    i0 = 1.0
    s = 0.0
    di0 = 0.0
    ds = 0.0
    mag = lg * lg + 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        h += 1.0 / k
        i0 += term
        s += term * h
        di0 += term * 2 * k / x
        ds += term * h * 2 * k / x
        mag += term * (abs(lg) + h)
        if term < 0.25 * _EPS * i0 and k * k > q:
            break
    if deriv:
        val = -lg * di0 - i0 / x + ds
    else:
        val = -lg * i0 + s
    return val, _EPS * 4.0 * mag / max(abs(val), 1e-300)


# -------------------------------------------------------------- integral path

def _contour_angle(nu, x):
    """Shift angle theta for the K integral (0 <= theta < pi/2).

    For x > nu the saddle of the phase sits at s = 0 when sin(theta) = nu/x.
    theta is pulled back from pi/2 so that the envelope still decays
    (x*sin(pi/2 - theta) >= 1) and so that the s = 0 overshoot
    e^{(nu - x)(pi/2 - theta)} stays O(e) when x <= nu.
    """
    if nu == 0.0:
        return 0.0
    theta = math.asin(nu / x) if x > nu else 0.5 * math.pi
    delta = 0.5 * math.pi - theta
    delta_min = math.asin(min(1.0, 1.0 / x))
    if x <= nu:
        delta_min = max(delta_min, 1.0 / (nu - x + 1.0))
    return 0.5 * math.pi - min(0.5 * math.pi, max(delta, delta_min))


def k_imag_integral(nu, x, cfg=DEFAULT_CONFIG, deriv=False, theta=None):
    r"""K_{i nu}(x) (or derivative) by quadrature; returns (value, rel_err_est).

    Evaluates :math:`e^{-\nu\theta}\int_0^\infty e^{-x\cos\theta\cosh s}
    \cos(\nu s - x\sin\theta\sinh s)\,ds` (and the analogous derivative
    integrand). ``theta=0`` gives the textbook representation
    :math:`\int_0^\infty e^{-x\cosh t}\cos(\nu t)\,dt`.
    """
    _check(nu, x)
    if theta is None:
        theta = _contour_angle(nu, x)
    c, s_ = math.cos(theta), math.sin(theta)
    decay = x * c
    # integrand below e^{-45} of its s=0 value beyond s_max
    s_max = math.acosh(1.0 + 45.0 / decay)

    def f(s):
        env = np.exp(-decay * (np.cosh(s) - 1.0))
        phase = nu * s - x * s_ * np.sinh(s)
        if deriv:
            return env * (c * np.cosh(s) * np.cos(phase) - s_ * np.sinh(s) * np.sin(phase))
        return env * np.cos(phase)

    # quarter-period pieces of the phase near the origin help the first pass
    pieces = max(1, min(64, int((nu + x * s_ * math.sinh(min(s_max, 6.0))) * s_max / 8.0)))
    try:
        res = gauss_kronrod(f, 0.0, s_max, rel_tol=0.05 * cfg.rel_tol,
                            abs_tol=0.0, initial_intervals=pieces,
                            max_intervals=cfg.max_terms)
    except QuadratureError as exc:
        raise BesselBudgetExceeded(
            f"K integral for nu={nu}, x={x} did not converge", exc.error) from exc
    scale = math.exp(-nu * theta - decay)
    val = float(res.value) * scale * (-1.0 if deriv else 1.0)
    rel = (res.error + _EPS * 8.0 * res.abs_integral) / max(abs(float(res.value)), 1e-300)
    return val, rel


def rei_imag_integral(nu, x, cfg=DEFAULT_CONFIG, deriv=False):
    r"""Re I_{i nu}(x) (or derivative) from the integral representation.

    .. math::
        \mathrm{Re}\,I_{i\nu}(x) = \frac1\pi\int_0^\pi e^{x\cos\theta}\cosh(\nu\theta)\,d\theta
        - \frac{\sinh\nu\pi}{\pi}\int_0^\infty e^{-x\cosh t}\sin(\nu t)\,dt

    The two terms grow like :math:`e^{\nu\pi}` while the result grows like
    :math:`e^{\nu\pi/2}`, so this path is only accurate for moderate orders.
    It exists as an independent check on the series.
    """
    _check(nu, x)

    def f1(t):
        g = np.exp(x * (np.cos(t) - 1.0)) * np.cosh(nu * t)
        return -np.sin(t) * g if deriv else g

    t_max = math.acosh(1.0 + 45.0 / x)

    def f2(t):
        g = np.exp(-x * (np.cosh(t) - 1.0)) * np.sin(nu * t)
        return -np.cosh(t) * g if deriv else g

    tol = 0.01 * cfg.rel_tol
    try:
        r1 = gauss_kronrod(f1, 0.0, math.pi, rel_tol=tol, initial_intervals=4,
                           max_intervals=cfg.max_terms)
        r2 = gauss_kronrod(f2, 0.0, t_max, rel_tol=tol,
                           initial_intervals=max(1, min(64, int(nu * t_max / 4))),
                           max_intervals=cfg.max_terms)
    except QuadratureError as exc:
        raise BesselBudgetExceeded(
            f"I integral for nu={nu}, x={x} did not converge", exc.error) from exc
    a = float(r1.value) * math.exp(x) / math.pi
    b = float(r2.value) * math.exp(-x) * math.sinh(nu * math.pi) / math.pi
    val = a - b
    err = (abs(a) * (r1.error / max(abs(float(r1.value)), 1e-300) + 8 * _EPS)
           + abs(b) * ((r2.error + 8 * _EPS * r2.abs_integral)
                       / max(abs(float(r2.value)), 1e-300) + 8 * _EPS))
    return val, err / max(abs(val), 1e-300)


# ---------------------------------------------------------------- public API

def _best_k(nu, x, cfg, deriv):
    _check(nu, x)
    val, err = k_imag_series(nu, x, cfg, deriv)
    if err <= 0.1 * cfg.rel_tol:
        return val
    try:
        val2, err2 = k_imag_integral(nu, x, cfg, deriv)
    except BesselBudgetExceeded:
        return val
    return val2 if err2 < err else val


def k_imag(nu, x, cfg=DEFAULT_CONFIG):
    """K_{i nu}(x) for real nu >= 0, x > 0 (a real number).

    Raises
    ------
    BesselDomainError
        If ``x <= 0`` or ``nu < 0``.
    BesselBudgetExceeded
        If neither the series nor the quadrature converges within
        ``cfg.max_terms``.
    """
    return _best_k(float(nu), float(x), cfg, False)


def k_imag_deriv(nu, x, cfg=DEFAULT_CONFIG):
    """d/dx K_{i nu}(x)."""
    return _best_k(float(nu), float(x), cfg, True)


def rei_imag(nu, x, cfg=DEFAULT_CONFIG):
    """Re I_{i nu}(x); reduces to I_0(x) at nu = 0."""
    nu, x = float(nu), float(x)
    _check(nu, x)
    return i_series(nu, x, cfg).value.real


def rei_imag_deriv(nu, x, cfg=DEFAULT_CONFIG):
    """d/dx Re I_{i nu}(x)."""
    nu, x = float(nu), float(x)
    _check(nu, x)
    return i_series(nu, x, cfg).deriv.real

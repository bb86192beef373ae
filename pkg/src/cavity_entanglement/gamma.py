"""Complex gamma function via the Lanczos approximation (g = 7, 9 terms)."""

import cmath
import math

_G = 7.0
_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(z):
    """Principal-branch-free ``log Gamma(z)`` for complex ``z`` with Re z > 0.

    The imaginary part is the continuous phase along the Lanczos formula, so
    ``exp(log_gamma(z))`` is Gamma(z) even when the phase exceeds pi.
    For Re z < 1/2 the reflection formula is used.
    """
    z = complex(z)
    if z.real < 0.5:
        return cmath.log(math.pi / cmath.sin(math.pi * z)) - log_gamma(1.0 - z)
    z -= 1.0
    series = _COEFFS[0]
    for i, c in enumerate(_COEFFS[1:], start=1):
        series += c / (z + i)
    t = z + _G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(series)


def gamma(z):
    """Gamma(z) for complex ``z`` (relative error ~1e-14 on Re z >= 1/2)."""
    return cmath.exp(log_gamma(z))


def rgamma(z):
    """1/Gamma(z), finite at the poles of Gamma."""
    z = complex(z)
    if z.real <= 0.0 and z.imag == 0.0 and z.real == math.floor(z.real):
        return 0j
    return cmath.exp(-log_gamma(z))

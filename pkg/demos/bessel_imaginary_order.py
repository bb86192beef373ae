"""
Bessel functions of imaginary order
===================================

K_{i nu}(x) and Re I_{i nu}(x) are the radial building blocks of a massive
field in a uniformly accelerated cavity. Both are real for real x > 0.
"""

import numpy as np

from cavity_entanglement.bessel import (k_imag, k_imag_deriv, k_imag_integral, k_imag_series,
                                        rei_imag, rei_imag_deriv)

# at nu = 0 the functions reduce to the ordinary K_0 and I_0
print("K_0(1) =", k_imag(0.0, 1.0), "  I_0(1) =", rei_imag(0.0, 1.0))

# for x below the order, K_{i nu} oscillates in log x with an amplitude ~exp(-nu pi/2)
nu = 6.0
for x in np.geomspace(0.01, 20, 9):
    print(f"x = {x:8.4f}   K_i{nu:g}(x) = {k_imag(nu, x): .6e}   Re I = {rei_imag(nu, x): .6e}")

# the two independent K paths (ascending series, contour-shifted integral)
series, err_s = k_imag_series(nu, 3.0)
integral, err_i = k_imag_integral(nu, 3.0)
print("series  ", series, "est. rel. error", err_s)
print("integral", integral, "est. rel. error", err_i)

# Wronskian: Re I' K - Re I K' = 1/x everywhere
for nu, x in [(0.5, 0.01), (12.0, 3.0), (30.0, 50.0)]:
    w = rei_imag_deriv(nu, x) * k_imag(nu, x) - rei_imag(nu, x) * k_imag_deriv(nu, x)
    print(f"nu={nu:5.1f} x={x:6.2f}   x*W = {x * w:.14f}")

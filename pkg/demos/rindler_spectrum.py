"""
Spectrum of the accelerated cavity
==================================

Rob's cavity has walls at chi = 1/a -+ L/2 in Rindler coordinates. Its modes
are labelled by a transverse number m (which acts as an extra mass,
kappa_m^2 = (m pi / L)^2 + kappa^2) and a radial number n.
"""

import math

import numpy as np

from cavity_entanglement.geometry import CavityGeometry, ModeIndex
from cavity_entanglement.modes import (build_rindler_modes, dump_modes, effective_mass,
                                       eigenfrequencies, minkowski_mode)

# massless 1+1 test branch: Omega_n = n pi / ln(chi+/chi-)
g = CavityGeometry(1.0)
print("log branch  ", eigenfrequencies(4, 0.0, g))
print("closed form ", np.arange(1, 5) * math.pi / math.log(3.0))

# the physical m = 1 mode of a massless field at a = 1
print(dump_modes(build_rindler_modes(1, 3, g, kappa=0.0)))

# as a -> 0 the proper frequency at the centre, a * Omega, approaches omega_nm
for a in (0.5, 0.1, 0.01, 0.001):
    g = CavityGeometry(a)
    Om = eigenfrequencies(1, effective_mass(1, g, 0.0), g)[0]
    print(f"a = {a:6.3f}   a*Omega_11 = {a * Om:.6f}   omega_11 = "
          f"{minkowski_mode(ModeIndex(1, 1), g, 0.0).omega:.6f}")

# heavy modes are evanescent near the outer wall; the solver still counts them correctly
g = CavityGeometry(1.9)
modes = build_rindler_modes(12, 4, g, kappa=12.0)
chi = np.linspace(g.chi_minus, g.chi_plus, 4001)
print(f"chi- = {g.chi_minus:.4f}, chi+ = {g.chi_plus:.4f}")
for md in modes:
    u = np.abs(md.norm * md.radial(chi))
    print(md.idx, f"Omega = {md.Omega:.6f} via {md.method}; peak at chi = {chi[u.argmax()]:.4f},"
          f" |u(centre)| / peak = {u[2000] / u.max():.1e}")

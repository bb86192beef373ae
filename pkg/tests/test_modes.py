import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cavity_entanglement.geometry import CavityGeometry, ModeIndex
from cavity_entanglement.modes import (RadialShot, build_rindler_modes, count_interior_nodes,
                                       dump_modes, effective_mass, eigenfrequencies,
                                       eigenfrequency_solve, klein_gordon_norm,
                                       minkowski_mode, radial_eval, rindler_mode, wall_value)
from cavity_entanglement.quadrature import gauss_kronrod

mpmath.mp.dps = 25


# ------------------------------------------------------------------ geometry

@settings(max_examples=50, deadline=None)
@given(st.floats(1e-4, 1.99), st.floats(0.2, 1.0))
def test_geometry_invariants(a, L):
    if a * L >= 2:
        return
    g = CavityGeometry(a, L)
    assert g.chi_minus > 0
    assert g.chi_plus - g.chi_minus == pytest.approx(L, rel=1e-12, abs=4e-16 * g.chi_plus)
    assert g.chi_minus == pytest.approx(1 / a - L / 2)
    assert (g.y_A_minus, g.y_A_plus, g.y_R_minus, g.y_R_plus) == (-1.5 * L, -0.5 * L, -0.5 * L, 0.5 * L)


def test_geometry_rejects_horizon_crossing():
    with pytest.raises(ValueError):
        CavityGeometry(2.0)
    with pytest.raises(ValueError):
        CavityGeometry(-0.1)


def test_mode_index_validation():
    with pytest.raises(ValueError):
        ModeIndex(0, 1)
    with pytest.raises(ValueError):
        ModeIndex(1, 0)


# ------------------------------------------------------------------ Minkowski

def test_minkowski_examples():
    g = CavityGeometry(0.0)
    md = minkowski_mode(ModeIndex(1, 1), g, 0.0)
    assert md.omega == pytest.approx(math.pi * math.sqrt(2), rel=1e-14)
    assert md.norm == pytest.approx(math.sqrt(2 / (math.pi * math.sqrt(2))), rel=1e-14)
    assert md.norm == pytest.approx(0.670938, abs=5e-7)
    md = minkowski_mode(ModeIndex(2, 3), g, 2.0)
    assert md.omega == pytest.approx(math.sqrt(13 * math.pi ** 2 + 4), rel=1e-14)


def test_minkowski_norm_by_quadrature():
    # the same Klein-Gordon normalization used for Rob, applied to the flat cavity
    g = CavityGeometry(0.0)
    for n, m, k in [(1, 1, 0.0), (3, 2, 1.5), (6, 5, 7.0)]:
        md = minkowski_mode(ModeIndex(n, m), g, k)
        N = klein_gordon_norm(md.omega, lambda x: np.sin(n * math.pi * x), 0.0, 1.0, 1.0)
        assert N == pytest.approx(md.norm, rel=1e-10)


def test_effective_mass():
    g = CavityGeometry(0.5)
    assert effective_mass(3, g, 2.0) ** 2 == pytest.approx(9 * math.pi ** 2 + 4, rel=1e-15)


# ------------------------------------------------------------------ radial function

def mp_radial(Om, km, g, chi):
    a = km * g.chi_minus
    return float(mpmath.besseli(1j * Om, a).real * mpmath.besselk(1j * Om, km * chi).real
                 - mpmath.besselk(1j * Om, a).real * mpmath.besseli(1j * Om, km * chi).real)


@pytest.mark.parametrize("Om, km, a", [(2.0, math.pi, 1.0), (7.3, 5.0, 0.5), (15.0, 9.0, 1.2)])
def test_radial_matches_bessel_formula(Om, km, a):
    g = CavityGeometry(a)
    chi = np.linspace(g.chi_minus, g.chi_plus, 7)
    got = radial_eval(Om, km, g, chi, method="bessel")
    ref = np.array([mp_radial(Om, km, g, c) for c in chi])
    np.testing.assert_allclose(got, ref, atol=1e-10 * np.abs(ref).max())


@pytest.mark.parametrize("Om, km, a", [(2.0, math.pi, 1.0), (7.3, 5.0, 0.5), (25.0, 20.0, 0.3)])
def test_radial_backends_agree(Om, km, a):
    # Bessel and spectral backends represent the same function (u(chi-) = 0, u'(chi-) = -1/chi-)
    g = CavityGeometry(a)
    chi = np.linspace(g.chi_minus, g.chi_plus, 9)
    b = radial_eval(Om, km, g, chi, method="bessel")
    s = radial_eval(Om, km, g, chi, method="spectral")
    np.testing.assert_allclose(s, b, atol=1e-9 * np.abs(b).max())


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 25.0), st.floats(0.5, 20.0), st.floats(0.05, 1.9))
def test_radial_vanishes_at_inner_wall(Om, km, a):
    g = CavityGeometry(a)
    val = radial_eval(Om, km, g, g.chi_minus)
    inner = radial_eval(Om, km, g, g.chi_minus + 0.01 * g.L)
    assert abs(val) <= 1e-12 * max(abs(inner), 1e-300) * 100


def test_log_branch_closed_form():
    g = CavityGeometry(1.0)
    chi = np.linspace(g.chi_minus, g.chi_plus, 5)
    got = radial_eval(2.0, 0.0, g, chi)
    np.testing.assert_allclose(got, -np.sin(2.0 * np.log(chi / g.chi_minus)) / 2.0, atol=1e-15)


# ------------------------------------------------------------------ eigenfrequencies

@pytest.mark.parametrize("a", [0.5, 1.0, 1.5])
def test_log_branch_roots(a):
    g = CavityGeometry(a)
    roots = eigenfrequencies(10, 0.0, g)
    exact = np.arange(1, 11) * math.pi / math.log(g.chi_plus / g.chi_minus)
    np.testing.assert_allclose(roots, exact, rtol=0, atol=1e-9)


def test_massive_roots_against_mpmath_scan():
    g = CavityGeometry(1.0)
    km = math.pi
    f = lambda om: (mpmath.besseli(1j * om, km * g.chi_minus).real
                    * mpmath.besselk(1j * om, km * g.chi_plus).real
                    - mpmath.besselk(1j * om, km * g.chi_minus).real
                    * mpmath.besseli(1j * om, km * g.chi_plus).real)
    grid = np.arange(0.01, 7.0, 0.01)
    vals = [f(x) for x in grid]
    oracle = [float(mpmath.findroot(f, (x0, x1), solver="anderson"))
              for x0, x1, f0, f1 in zip(grid, grid[1:], vals, vals[1:]) if f0 * f1 < 0]
    assert len(oracle) == 2
    got = eigenfrequencies(2, km, g)
    np.testing.assert_allclose(got, oracle, rtol=0, atol=1e-9)
    assert eigenfrequency_solve(1, km, g) == pytest.approx(3.975282842518333, abs=1e-9)
    assert abs(radial_eval(got[0], km, g, g.chi_plus)) < 1e-9


def test_interlacing_and_ordering():
    g = CavityGeometry(0.7)
    km = effective_mass(2, g, 3.0)
    roots = eigenfrequencies(6, km, g)
    assert np.all(np.diff(roots) > 0)
    for lo, hi in zip(roots, roots[1:]):
        om = np.linspace(lo, hi, 60)[1:-1]
        w = np.array([wall_value(o, km, g) for o in om])
        assert np.count_nonzero(np.diff(np.sign(w))) == 0
    below = np.linspace(0.01, roots[0], 60)[:-1]
    w = np.array([wall_value(o, km, g) for o in below])
    assert np.count_nonzero(np.diff(np.sign(w))) == 0


@pytest.mark.parametrize("a, kappa, m", [(0.5, 12.0, 10), (1.9, 12.0, 12), (1.99, 0.0, 1),
                                         (1e-3, 12.0, 15), (0.999999, 12.0, 10)])
def test_root_finder_hard_regimes(a, kappa, m):
    g = CavityGeometry(a)
    modes = build_rindler_modes(m, 6, g, kappa)
    for md in modes:
        assert count_interior_nodes(md.profile, g.chi_minus, g.chi_plus,
                                    samples=40 * md.idx.n + 200) == md.idx.n - 1
        peak = np.abs(md.profile(np.linspace(g.chi_minus, g.chi_plus, 2001))).max()
        assert abs(md.profile(g.chi_plus)) < 1e-8 * peak


def test_spectrum_increases_with_mass():
    g = CavityGeometry(0.6)
    for n in (1, 2, 3):
        oms = [eigenfrequencies(n, effective_mass(1, g, k), g)[-1] for k in (0.0, 1.0, 2.0, 5.0)]
        assert all(b > a for a, b in zip(oms, oms[1:]))


def test_small_acceleration_limit():
    a = 1e-3
    g = CavityGeometry(a)
    for n, m, k in [(1, 1, 0.0), (2, 1, 0.0), (1, 2, 3.0)]:
        Om = eigenfrequencies(n, effective_mass(m, g, k), g)[-1]
        omega = minkowski_mode(ModeIndex(n, m), g, k).omega
        assert Om * a == pytest.approx(omega, rel=0.01)


def test_two_sided_shot_matches_single_sided():
    g = CavityGeometry(0.5)
    km = 12.0
    # the matched profile equals the initial-value solution only at an eigenfrequency
    Om = eigenfrequencies(2, km, g, method="bessel")[-1]
    shot = RadialShot(Om, km, g)
    assert abs(shot.wall) < 1e-9
    chi = np.linspace(g.chi_minus, g.chi_plus, 11)
    direct = radial_eval(Om, km, g, chi, method="bessel")
    np.testing.assert_allclose(shot.profile()(chi), direct, atol=1e-8 * np.abs(direct).max())


# ------------------------------------------------------------------ normalized modes

def test_orthogonality_same_m():
    g = CavityGeometry(0.8)
    modes = build_rindler_modes(2, 5, g, 1.0)
    for i, u in enumerate(modes):
        for w in modes[i + 1:]:
            res = gauss_kronrod(lambda c: u.profile(c) * w.profile(c) / c, g.chi_minus, g.chi_plus,
                                rel_tol=1e-12, initial_intervals=8)
            scale = math.sqrt(
                gauss_kronrod(lambda c: u.profile(c) ** 2 / c, g.chi_minus, g.chi_plus).value
                * gauss_kronrod(lambda c: w.profile(c) ** 2 / c, g.chi_minus, g.chi_plus).value)
            assert abs(res.value) < 1e-6 * scale


def test_norm_stable_under_refinement():
    g = CavityGeometry(1.0)
    md = rindler_mode(ModeIndex(1, 1), g, 0.0)
    from cavity_entanglement.modes import rindler_norm
    tight = rindler_norm(md.Omega, md.profile, g, rel_tol=1e-13)
    assert md.norm == pytest.approx(tight, rel=1e-8)


def test_norm_regression_fixture():
    # first computed value, pinned
    md = rindler_mode(ModeIndex(1, 1), CavityGeometry(1.0), 0.0)
    assert md.Omega == pytest.approx(3.975282842518333, abs=1e-9)
    assert md.norm == pytest.approx(2.3745258493050696, rel=1e-8)


def test_norm_matches_minkowski_at_small_a():
    # the Rindler inner product carries the redshift (Omega a = omega at the centre),
    # so the normalized profile at the centre tends to N_nm sin(pi/2)
    a = 1e-3
    g = CavityGeometry(a)
    md = rindler_mode(ModeIndex(1, 1), g, 0.0)
    mk = minkowski_mode(ModeIndex(1, 1), g, 0.0)
    chi = g.chi_centre
    amp = abs(md.norm * md.profile(chi))
    assert amp == pytest.approx(mk.norm, rel=1e-3)


def test_dump_format():
    g = CavityGeometry(1.0)
    modes = build_rindler_modes(1, 2, g, 0.0)
    lines = dump_modes(modes).splitlines()
    assert len(lines) == 2
    n, m, km, om, norm = lines[0].split()
    assert (n, m) == ("1", "1") and float(om) == modes[0].Omega and float(km) == math.pi

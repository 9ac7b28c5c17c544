import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hkorbits import potentials as pt
from hkorbits.invariants import etas_matrix, zetas_matrix
from hkorbits.orbits import orbit_spec, scaled_point

pos = st.floats(min_value=0.05, max_value=5.0)


@settings(max_examples=40, deadline=None)
@given(pos, st.sampled_from([0.5, 1.0, 2.5, 3.0]), st.floats(min_value=0.0, max_value=4.0))
def test_factor_potential_solves_its_ode(s, k2, c):
    h = 1e-5 * s
    d = (pt.factor_potential(s + h, k2, c) - pt.factor_potential(s - h, k2, c)) / (2 * h)
    assert abs(d - pt.factor_potential_derivative(s, k2, c)) <= 1e-7 * (1 + abs(d))


def test_factor_potential_c0_is_linear():
    assert pt.factor_potential(1.7, 3, 0.0) == pytest.approx(4 * 3 * 1.7, rel=1e-15)


def test_generic_potential_c0():
    assert pt.generic_potential(1, 2, 3, 3) == pytest.approx(72.0, rel=1e-15)


def _etas(r, s, t, k2):
    return [2 ** (i + 1) * k2 * (r ** (2 * i) + s ** (2 * i) + t ** (2 * i)) for i in (1, 2, 3)]


def test_kappa_chain_value():
    ch = pt.kappa_chain(*_etas(1, 2, 3, 3), 3)
    assert not ch.fallback
    assert ch.rho == pytest.approx(72.0, rel=1e-10)


def test_kappa_chain_equal_parameters_falls_back():
    ch = pt.kappa_chain(*_etas(1, 1, 1, 3), 3)
    assert ch.fallback
    assert ch.rho == pytest.approx(12 * 3 * 1.0, rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(pos, pos, pos)
def test_quartic_root_is_parameter_sum(r, s, t):
    e = pt.eta_tilde(_etas(r, s, t, 2.5), 2.5)
    assert pt.quartic_solve(*e) == pytest.approx(r + s + t, rel=1e-8)


def test_params_from_eta_generic():
    got = pt.params_from_eta_generic(_etas(0.4, 1.9, 1.1, 2), 2)
    assert np.allclose(got, (1.9, 1.1, 0.4), rtol=1e-9)


def test_quartic_rejects_bad_input():
    with pytest.raises(pt.PotentialError):
        pt.quartic_solve(-1.0, 1.0, 1.0)
    with pytest.raises(pt.PotentialError):
        pt.quartic_solve(1.0, 5.0, 0.0)


def test_so7_value_c0():
    assert pt.so7_potential(1, 1, 1, 0) == pytest.approx(10 * math.sqrt(10), rel=1e-15)
    assert pt.so7_potential(0.3, 1.2, 0.8) == pytest.approx(10 * math.hypot(1.8, 0.8), rel=1e-15)


@settings(max_examples=40, deadline=None)
@given(pos, pos, pos, st.sampled_from([0.0, 0.3, 1.0, 2.0]))
def test_so7_zeta_form_agrees(r, s, t, c):
    a = pt.so7_potential(r, s, t, c)
    b = pt.so7_potential_zeta(*pt.so7_zetas_from_params(r, s, t), c)
    assert abs(a - b) <= 1e-8 * abs(a)


def test_so7_zetas_match_matrix():
    spec = orbit_spec("SO", 7, "3,2,2")
    p = (0.7, 1.4, 0.9)
    X = scaled_point(spec, *p).X
    assert np.allclose(zetas_matrix(X), pt.so7_zetas_from_params(*p), rtol=1e-13)
    assert np.allclose(pt.so7_params_from_zetas(*zetas_matrix(X)), p, rtol=1e-10)


@settings(max_examples=30, deadline=None)
@given(pos, pos, pos, st.floats(min_value=0.1, max_value=10.0))
def test_so7_c0_homogeneous(r, s, t, lam):
    a = pt.so7_potential(lam * r, lam * s, lam * t, 0.0)
    assert abs(a - lam * pt.so7_potential(r, s, t, 0.0)) <= 1e-10 * abs(a)


@pytest.mark.parametrize("c", [0.0, 1.0, 2.0])
@pytest.mark.parametrize("p", [(1.0, 1.0, 1.0), (0.6, 1.7, 0.9), (2.0, 0.5, 1.3)])
def test_so7_pde_system(c, p):
    res = pt.so7_pde_residuals(c, *p)
    assert len(res) == 10
    assert max(v for _, v in res) <= 1e-6


def test_so7_pde_detects_wrong_potential():
    bad = lambda r, s, t: pt.so7_potential(r, s, t, 1.0) + 0.5 * r * r
    res = pt.so7_pde_residuals(1.0, 0.8, 1.1, 0.7, potential=bad)
    assert max(v for _, v in res) > 1e-3


@pytest.mark.parametrize("chart,params", [
    (pt._GenericChart(3), (0.7, 1.3, 2.1)), (pt._SO7Chart(), (0.8, 1.1, 0.6)), (pt._SL2Chart(1), (1.3,)),
])
def test_eta_chart_derivatives(chart, params):
    etas, jac, hess = pt.eta_chart(chart, params)
    for i in range(len(etas)):
        f = lambda *q: pt.eta_chart(chart, q)[0][i]
        g, H = pt.fd_grad_hess(f, params)
        assert np.allclose(g, jac[i], rtol=1e-8, atol=1e-8)
        assert np.allclose(H, hess[i], rtol=1e-5, atol=1e-5)


def test_chart_matches_matrix_invariants():
    spec = orbit_spec("SL", 6, "2,2,2")
    p = (0.7, 1.3, 2.1)
    got = etas_matrix(spec.algebra, scaled_point(spec, *p).X)
    assert np.allclose(got, pt.eta_chart(pt._GenericChart(3), p)[0], rtol=1e-13)


def test_potential_spec():
    ps = pt.PotentialSpec("so7", c=1.0)
    assert ps.kind == "SO7" and float(ps.k_squared) == 2.5
    spec = orbit_spec("SO", 7, "3,2,2")
    X = scaled_point(spec, 0.5, 0.9, 1.4).X
    assert ps.value_at_matrix(spec.algebra, X) == pytest.approx(ps.value(0.5, 0.9, 1.4), rel=1e-10)
    g = pt.PotentialSpec("generic", 3, 0.5)
    Xg = scaled_point(orbit_spec("SL", 6, "2,2,2"), 0.5, 0.9, 1.4).X
    assert g.value_at_matrix(orbit_spec("SL", 6, "2,2,2").algebra, Xg) == pytest.approx(
        g.value(0.5, 0.9, 1.4), rel=1e-10)
    with pytest.raises(pt.PotentialError):
        pt.PotentialSpec("other")
    with pytest.raises(pt.PotentialError):
        pt.PotentialSpec("generic", 3, -1.0)


def test_quartic_perturbation_stability(rng):
    for _ in range(10):
        r, s, t = rng.uniform(0.3, 2.0, 3)
        e = pt.eta_tilde(_etas(r, s, t, 3), 3)
        lam = pt.quartic_solve(*e)
        noisy = pt.quartic_solve(*(e + 1e-8 * rng.standard_normal(3)))
        assert abs(noisy - lam) <= 1e-6


def test_so7_pde_rejects_added_rst_term():
    bad = lambda r, s, t: pt.so7_potential(r, s, t, 1.0) + 0.1 * r * s * t
    for p in [(0.8, 1.1, 0.7), (1.5, 0.6, 1.2)]:
        res = pt.so7_pde_residuals(1.0, *p, potential=bad)
        assert max(v for _, v in res) >= 1e-3

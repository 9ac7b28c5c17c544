import numpy as np
import pytest

from hkorbits.kahler import (J_endo, J_matrix, PotentialDerivatives, RealFrame, _Frame, hk_matrices,
                             kks_sigma, omega_I, omega_fd, potential_derivatives, tangent_basis,
                             verify_hyperkahler)
from hkorbits.potentials import PotentialError, PotentialSpec
from hkorbits.orbits import orbit_spec, scaled_point


def _point(fam, n, lab, *p):
    spec = orbit_spec(fam, n, lab)
    return scaled_point(spec, *p)


def test_tangent_basis_dimension():
    P = _point("SL", 6, "2,2,2", 0.7, 1.3, 2.1)
    basis = tangent_basis(P)
    assert len(basis) == 18
    F = RealFrame(P.spec.algebra, P.X)
    assert F.dim == 36


def test_sl2_cohomogeneity_one_potential():
    # rho = 4 k^2 s, i.e. rho_1 = k / sqrt(eta1) with eta1 = 4 k^2 s^2
    P = _point("SL", 2, "2", 1.3)
    pot = PotentialSpec("SL2_FACTOR", 1, 0.0)
    d = potential_derivatives(pot, P)
    assert d.grad[0] == pytest.approx(1 / np.sqrt(4 * 1.3**2), rel=1e-8)
    M = hk_matrices(pot, P)
    J = M["J"]
    assert np.max(np.abs(J @ J + np.eye(4))) < 1e-6


def test_wrong_normalization_fails_on_sl2():
    # rho_1 = k / (2 sqrt(eta1)) is half the right potential: J^2 = -1/4
    P = _point("SL", 2, "2", 1.3)
    d = potential_derivatives(PotentialSpec("SL2_FACTOR", 1, 0.0), P)
    half = PotentialDerivatives(d.rho / 2, tuple(g / 2 for g in d.grad), tuple(h / 2 for h in d.hess))
    fr = _Frame(P.spec.algebra, P.X)
    F = RealFrame(P.spec.algebra, P.X)
    Jm = F.matrix_of(lambda v: J_matrix(fr, half, v))
    assert np.allclose(Jm @ Jm, -0.25 * np.eye(4), atol=1e-6)


def test_zero_potential_gives_zero_J():
    P = _point("SL", 6, "2,2,2", 0.7, 1.3, 2.1)
    d = PotentialDerivatives(0.0, (0, 0, 0), (0,) * 6)
    v = P.spec.algebra.basis[3] @ P.X - P.X @ P.spec.algebra.basis[3]
    assert np.max(np.abs(J_endo(None, P, v, derivs=d).matrix)) == 0


@pytest.mark.parametrize("fam,n,lab,k2", [("SL", 6, "2,2,2", 3), ("SP", 3, "2,2,2", 2)])
@pytest.mark.parametrize("c", [0.0, 2.0])
def test_generic_hyperkahler(fam, n, lab, k2, c):
    P = _point(fam, n, lab, 0.6, 1.1, 1.5)
    rep = verify_hyperkahler(PotentialSpec("GENERIC", k2, c), P, rng=np.random.default_rng(3),
                             n_pairs=2, n_triples=1)
    assert rep.passed, rep.to_text()


def test_so7_hyperkahler():
    P = _point("SO", 7, "3,2,2", 0.8, 1.2, 0.5)
    rep = verify_hyperkahler(PotentialSpec("SO7", c=1.0), P, rng=np.random.default_rng(4),
                             n_pairs=2, n_triples=1)
    assert rep.passed, rep.to_text()


def test_quaternion_relations():
    P = _point("SL", 6, "2,2,2", 0.6, 1.1, 1.5)
    M = hk_matrices(PotentialSpec("GENERIC", 3, 0.5), P)
    J, I = M["J"], M["I"]
    assert np.max(np.abs(J @ I + I @ J)) < 1e-6
    assert np.max(np.abs(I @ I + np.eye(I.shape[0]))) < 1e-12


def test_wrong_k2_breaks_J_squared():
    P = _point("SL", 6, "2,2,2", 0.6, 1.1, 1.5)
    M = hk_matrices(PotentialSpec("GENERIC", 2, 0.0), P)
    J = M["J"]
    assert np.max(np.abs(J @ J + np.eye(J.shape[0]))) > 1e-2


def test_omega_formula_against_fd(rng):
    P = _point("SP", 3, "2,2,2", 0.6, 1.1, 1.5)
    pot = PotentialSpec("GENERIC", 2, 0.5)
    alg = P.spec.algebra
    A, B = alg.random_element(rng).matrix, alg.random_element(rng).matrix
    lem = omega_I(pot, P, A @ P.X - P.X @ A, B @ P.X - P.X @ B)
    fd = omega_fd(pot, alg, P.X, A, B)
    assert abs(lem - fd) <= 1e-4 * abs(fd)


def test_kks_is_antisymmetric(rng):
    P = _point("SL", 6, "2,2,2", 0.6, 1.1, 1.5)
    alg = P.spec.algebra
    A, B = alg.random_element(rng), alg.random_element(rng)
    assert abs(kks_sigma(P, A, B) + kks_sigma(P, B, A)) < 1e-12


@pytest.mark.parametrize("p", [(0.25, 0.4, 0.15), (0.7, 1.3, 2.1)])
def test_trivial_module_obstruction_magnitude(p):
    # with a trivial summand, J^2 + 1 on the directions coupling it to the
    # factor with parameter u equals c / (16 k^4 u^2)
    spec = orbit_spec("SL", 7, "2,2,2,1")
    k2, c = 3.5, 0.5
    P = scaled_point(spec, *p)
    X = P.X
    d = potential_derivatives(PotentialSpec("GENERIC", k2, c), P)
    fr = _Frame(spec.algebra, X)
    r, s, t = p
    # block d of X spans e_{2d}, e_{2d+1}; parameters are (s, r, t) in block order
    for block, u in ((0, s), (1, r), (2, t)):
        A = np.zeros((7, 7), complex)
        A[6, 2 * block] = 1
        xi = A @ X - X @ A
        w = J_matrix(fr, d, J_matrix(fr, d, xi)) + xi
        assert np.linalg.norm(w) / np.linalg.norm(xi) == pytest.approx(c / (16 * k2**2 * u * u), rel=1e-6)


def test_equal_parameters_rejected():
    P = _point("SL", 6, "2,2,2", 1.0, 1.0, 2.0)
    with pytest.raises(PotentialError):
        potential_derivatives(PotentialSpec("GENERIC", 3, 0.0), P)

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from hkorbits.lie import (AlgebraError, adjoint_flow, bracket, build_algebra, expm, killing_inner,
                          killing_oracle, multi_bracket, sigma)

ALGEBRAS = [("SL", 2), ("SL", 4), ("SO", 5), ("SO", 6), ("SO", 7), ("SP", 2), ("SP", 3)]


@pytest.mark.parametrize("fam,n", ALGEBRAS)
def test_dimension_and_basis_membership(fam, n):
    alg = build_algebra(fam, n)
    N = alg.matrix_size
    expected = {"SL": N * N - 1, "SO": N * (N - 1) // 2, "SP": n * (2 * n + 1)}[fam]
    assert alg.complex_dimension == expected == len(alg.basis)
    assert len(alg.real_basis) == expected
    for Z in alg.basis:
        assert alg.membership_residual(Z) < 1e-14


@pytest.mark.parametrize("fam,n", ALGEBRAS)
def test_real_basis_is_sigma_fixed(fam, n):
    alg = build_algebra(fam, n)
    for A in alg.real_basis:
        assert np.max(np.abs(alg.sigma_matrix(A) - A)) < 1e-12


@pytest.mark.parametrize("fam,n", ALGEBRAS)
def test_sigma_is_involutive_automorphism(fam, n, rng):
    alg = build_algebra(fam, n)
    A, B = alg.random_element(rng), alg.random_element(rng)
    assert np.max(np.abs(sigma(sigma(A)).matrix - A.matrix)) < 1e-13
    lhs = sigma(bracket(A, B)).matrix
    rhs = bracket(sigma(A), sigma(B)).matrix
    assert np.max(np.abs(lhs - rhs)) < 1e-12


@pytest.mark.parametrize("fam,n", ALGEBRAS)
def test_inner_product_positive_hermitian(fam, n, rng):
    alg = build_algebra(fam, n)
    for _ in range(3):
        A = alg.random_element(rng)
        v = killing_inner(A, sigma(A))
        assert abs(v.imag) < 1e-12 and v.real > 0


@pytest.mark.parametrize("fam,n", [("SL", 3), ("SO", 5), ("SP", 2)])
def test_killing_fast_path_matches_ad_trace(fam, n, rng):
    alg = build_algebra(fam, n)
    A, B = alg.random_element(rng), alg.random_element(rng)
    fast, slow = killing_inner(A, B), killing_oracle(A, B)
    assert abs(fast - slow) <= 1e-10 * max(1.0, abs(slow))


def test_killing_scales():
    assert build_algebra("SL", 5).killing_scale == 10
    assert build_algebra("SO", 7).killing_scale == 5
    assert build_algebra("SP", 3).killing_scale == 8


def test_sl2_bracket_relations():
    alg = build_algebra("SL", 2)
    H = alg.element(np.diag([1.0, -1.0]))
    X = alg.element(np.array([[0, 1], [0, 0]]))
    Y = alg.element(np.array([[0, 0], [1, 0]]))
    assert np.allclose(bracket(H, X).matrix, 2 * X.matrix)
    assert np.allclose(bracket(X, Y).matrix, H.matrix)


def test_jacobi_via_multi_bracket(rng):
    alg = build_algebra("SO", 6)
    A, B, C = (alg.random_element(rng) for _ in range(3))
    s = multi_bracket([A, B, C]) + multi_bracket([B, C, A]) + multi_bracket([C, A, B])
    assert s.norm() < 1e-12


def test_multi_bracket_needs_two():
    alg = build_algebra("SL", 2)
    with pytest.raises(ValueError):
        multi_bracket([alg.zero()])


def test_membership_rejected():
    alg = build_algebra("SL", 3)
    with pytest.raises(AlgebraError):
        alg.element(np.eye(3))


def test_elements_of_different_algebras():
    a, b = build_algebra("SL", 2), build_algebra("SP", 1)
    with pytest.raises(AlgebraError):
        bracket(a.zero(), b.zero())


def test_unknown_form():
    with pytest.raises(AlgebraError):
        build_algebra("SO", 7, "nonsense")


def test_so_forms_agree_on_killing_scale(rng):
    for form in ("identity", "antidiagonal", "so7"):
        alg = build_algebra("SO", 7, form)
        A, B = alg.random_element(rng), alg.random_element(rng)
        assert abs(killing_inner(A, B) - killing_oracle(A, B)) < 1e-10 * (1 + abs(killing_oracle(A, B)))


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.floats(min_value=0.01, max_value=8.0))
def test_expm_matches_scipy(seed, scale):
    rng = np.random.default_rng(seed)
    A = scale * (rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))) / 5
    ref = scipy.linalg.expm(A)
    assert np.max(np.abs(expm(A) - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))


def test_adjoint_flow_compact_preserves_inner_product(rng):
    alg = build_algebra("SP", 2)
    A = alg.random_element(rng, compact=True)
    X, Y = alg.random_element(rng), alg.random_element(rng)
    v0 = killing_inner(X, sigma(Y))
    v1 = killing_inner(adjoint_flow(A, 0.7, X), sigma(adjoint_flow(A, 0.7, Y)))
    assert abs(v0 - v1) < 1e-12


def test_adjoint_flow_derivative_is_bracket(rng):
    alg = build_algebra("SL", 3)
    A, X = alg.random_element(rng), alg.random_element(rng)
    h = 1e-5
    d = (adjoint_flow(A, h, X).matrix - adjoint_flow(A, -h, X).matrix) / (2 * h)
    assert np.max(np.abs(d - bracket(A, X).matrix)) < 1e-8


@pytest.mark.parametrize("form", ["identity", "antidiagonal", "so7"])
def test_so_sigma_two_expressions_agree_on_algebra(form, rng):
    alg = build_algebra("SO", 7, form)
    Z = alg.random_element(rng).matrix
    assert np.max(np.abs(alg.sigma_matrix(Z) + Z.conj().T)) < 1e-13

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hkorbits.lie import adjoint_flow
from hkorbits.orbits import (OrbitError, format_partition, jordan_partition, orbit_dim_complex,
                             orbit_spec, parse_partition, representative, scaled_point)

LISTED = [
    ("SL", 5, "3,1,1"), ("SL", 6, "3,1,1,1"), ("SL", 6, "2,2,2"), ("SL", 7, "2,2,2,1"),
    ("SL", 7, "3,1,1,1,1"), ("SL", 8, "2,2,2,1,1"), ("SL", 8, "3,1,1,1,1,1"),
    ("SO", 5, "5"), ("SO", 6, "3,3"), ("SO", 7, "3,2,2"), ("SO", 9, "3,2,2,1,1"),
    ("SO", 12, "2,2,2,2,2,2"), ("SO", 13, "2,2,2,2,2,2,1"),
    ("SP", 3, "2,2,2"), ("SP", 4, "2,2,2,1,1"),
]


def test_parse_and_format():
    assert parse_partition("2,3,2") == (3, 2, 2)
    assert format_partition((3, 2, 2, 1)) == "(3,2^2,1)"
    with pytest.raises(OrbitError):
        parse_partition("2,x")
    with pytest.raises(OrbitError):
        parse_partition("0,2")


def test_partition_must_sum_to_size():
    with pytest.raises(OrbitError):
        orbit_spec("SL", 6, "2,2")


@pytest.mark.parametrize("fam,n,lab", LISTED)
def test_representative_triples(fam, n, lab):
    spec = orbit_spec(fam, n, lab)
    T = representative(spec)
    assert max(T.residuals().values()) <= 1e-10
    assert jordan_partition(T.X) == spec.label


def test_no_representative():
    spec = orbit_spec("SL", 5, "4,1")
    with pytest.raises(OrbitError):
        representative(spec)


# dim_C O = N^2 - sum of squares of the dual partition (sl), standard formulas otherwise
@pytest.mark.parametrize("fam,n,lab,dim", [
    ("SL", 6, "2,2,2", 18), ("SL", 4, "3,1", 10), ("SO", 7, "3,2,2", 12),
    ("SO", 12, "2,2,2,2,2,2", 30), ("SP", 3, "2,2,2", 12), ("SO", 5, "5", 8),
])
def test_orbit_dimension(fam, n, lab, dim):
    spec = orbit_spec(fam, n, lab)
    assert orbit_dim_complex(representative(spec).X) == dim


@pytest.mark.parametrize("fam,n,lab", [("SL", 6, "2,2,2"), ("SP", 3, "2,2,2"), ("SO", 12, "2,2,2,2,2,2")])
def test_generic_summands_commute_and_are_minimal(fam, n, lab):
    spec = orbit_spec(fam, n, lab)
    P = scaled_point(spec, 0.7, 1.3, 2.1)
    F = P.factors
    for i in range(3):
        for j in range(i + 1, 3):
            assert np.max(np.abs(F[i] @ F[j] - F[j] @ F[i])) <= 1e-12
    for f in F:
        part = jordan_partition(f)
        assert part[0] == 2 and part.count(2) == (2 if fam == "SO" else 1)
    assert jordan_partition(P.X) == spec.label


@settings(max_examples=20, deadline=None)
@given(st.tuples(*[st.floats(0.1, 3.0)] * 3), st.floats(0.1, 5.0))
def test_scaled_point_is_linear(params, lam):
    for fam, n, lab in [("SL", 6, "2,2,2"), ("SO", 7, "3,2,2")]:
        spec = orbit_spec(fam, n, lab)
        a = scaled_point(spec, *[lam * p for p in params]).X
        b = lam * scaled_point(spec, *params).X
        assert np.max(np.abs(a - b)) <= 1e-12 * (1 + np.max(np.abs(b)))


def test_scaled_point_rejects_nonpositive():
    spec = orbit_spec("SL", 6, "2,2,2")
    with pytest.raises(OrbitError):
        scaled_point(spec, 1.0, 0.0, 1.0)
    with pytest.raises(OrbitError):
        scaled_point(spec, 1.0, 2.0)


def test_so7_point_has_the_right_type():
    spec = orbit_spec("SO", 7, "3,2,2")
    assert spec.kind == "so7"
    P = scaled_point(spec, 0.4, 1.2, 0.9)
    assert jordan_partition(P.X) == (3, 2, 2)


def test_jordan_type_invariant_under_compact_flows(rng):
    spec = orbit_spec("SP", 4, "2,2,2,1,1")
    X = representative(spec).X
    alg = spec.algebra
    for _ in range(5):
        A = alg.random_element(rng, compact=True)
        assert jordan_partition(adjoint_flow(A, rng.uniform(0.1, 2.0), X)) == spec.label


def test_jordan_rejects_non_nilpotent():
    with pytest.raises(OrbitError):
        jordan_partition(np.diag([1.0, -1.0]))

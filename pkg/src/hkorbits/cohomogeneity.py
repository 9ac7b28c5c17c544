"""Cohomogeneity of the compact group acting on a nilpotent orbit, by rank counts.

The complex orbit through X has real dimension 2 dim_C [g^C, X]; the orbit of
the compact form G through X has dimension rank_R {A -> [A, X] : A in g}.
Their difference at a principal point is the cohomogeneity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .lie import expm
from .orbits import (OrbitError, OrbitPoint, OrbitSpec, _rank,
                     orbit_dim_complex, orbit_spec, representative_matrix)


class CohomogeneityError(RuntimeError):
    pass


@dataclass(frozen=True)
class CohomResult:
    spec: OrbitSpec
    dim_C_orbit: int
    compact_orbit_dim: int
    cohomogeneity: int
    samples_used: int

    @property
    def dim_R_orbit(self):
        return 2 * self.dim_C_orbit


def generic_point(spec, seed):
    """Ad(exp Z) X0 with Z a seeded random element of g^C of Frobenius norm 1."""
    alg = spec.algebra
    X0 = representative_matrix(spec)
    rng = np.random.default_rng(seed)
    Z = alg.random_element(rng).matrix
    X = expm(Z) @ X0 @ expm(-Z)
    return OrbitPoint(spec, (), alg.element(X, check=False))


def compact_orbit_dim(P, rel=DEFAULT.rank_rel):
    """Real rank of A -> [A, X] over the compact real form."""
    X = P.X
    cols = []
    for A in P.spec.algebra.real_basis:
        W = (A @ X - X @ A).ravel()
        cols.append(np.concatenate([W.real, W.imag]))
    return _rank(np.array(cols).T, rel)


def _sample_seeds(seed, n):
    return np.random.SeedSequence(seed).spawn(n)


def cohomogeneity(spec, n_samples=5, seed=42):
    """2 dim_C(orbit) - max over samples of the compact orbit dimension.

    If the compact ranks disagree across the first ``n_samples`` points the
    sampling is extended once by the same number of points; the maximum is
    the principal orbit dimension either way.
    """
    if n_samples < 3:
        raise ValueError("at least 3 samples are required")
    seeds = _sample_seeds(seed, 2 * n_samples)
    dims_c, dims_k = [], []
    for j, ss in enumerate(seeds):
        if j == n_samples and len(set(dims_k)) == 1:
            break
        P = generic_point(spec, ss)
        dims_c.append(orbit_dim_complex(P.element))
        dims_k.append(compact_orbit_dim(P))
    if len(set(dims_c)) != 1:
        raise CohomogeneityError(
            f"inconsistent complex orbit dimensions {sorted(set(dims_c))} for {spec.describe()}")
    dc, dk = dims_c[0], max(dims_k)
    coh = 2 * dc - dk
    if coh < 0:
        raise CohomogeneityError(f"negative cohomogeneity for {spec.describe()}")
    return CohomResult(spec, dc, dk, coh, len(dims_k))


# Cartan type -> (matrix family, build n)
def cartan_to_matrix(letter, rank):
    letter = letter.upper()
    if letter == "A":
        return "SL", rank + 1
    if letter == "B":
        return "SO", 2 * rank + 1
    if letter == "C":
        return "SP", rank
    if letter == "D":
        return "SO", 2 * rank
    raise OrbitError(f"no matrix model for type {letter}")


# (type, rank, partition, expected cohomogeneity); classical height-three rows
CLASSICAL_TABLE = (
    ("A", 5, (2, 2, 2), 3),
    ("A", 6, (2, 2, 2, 1), 3),
    ("A", 3, (3, 1), 5),
    ("A", 4, (3, 1, 1), 4),
    ("A", 5, (3, 1, 1, 1), 4),
    ("B", 2, (5,), 6),
    ("B", 3, (3, 2, 2), 3),
    ("B", 4, (3, 2, 2, 1, 1), 4),
    ("B", 6, (2, 2, 2, 2, 2, 2, 1), 3),
    ("C", 3, (2, 2, 2), 3),
    ("C", 4, (2, 2, 2, 1, 1), 3),
    ("D", 3, (3, 3), 5),
    ("D", 4, (3, 2, 2, 1), 4),
    ("D", 6, (2, 2, 2, 2, 2, 2), 3),
)

# exceptional rows, labelled by the reductive part k of the parabolic; no matrix model
EXCEPTIONAL_TABLE = (
    ("G2", "k = R + su(2)", 6),
    ("F4", "k = R + su(2) + su(3)", 4),
    ("E6", "k = R + su(2) + su(3) + su(3)", 4),
    ("E7", "k = R + e6", 3),
    ("E7", "k = R + su(2) + su(6)", 4),
    ("E8", "k = R + su(2) + e6", 4),
)


def classical_spec(letter, rank, partition, expected=None):
    fam, n = cartan_to_matrix(letter, rank)
    return orbit_spec(fam, n, partition, expected_cohomogeneity=expected, height=3)

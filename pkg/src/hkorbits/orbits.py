"""Nilpotent orbit representatives, parameterized orbit points and Jordan types."""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .config import DEFAULT
from .lie import AlgebraElement, LieAlgebra, StandardTriple, br, build_algebra

SQ2 = math.sqrt(2.0)


class OrbitError(ValueError):
    pass


def parse_partition(text):
    """Parse "3,2,2" (or a sequence of ints) into a weakly decreasing tuple."""
    if isinstance(text, str):
        parts = [p for p in text.replace(" ", "").split(",") if p]
        try:
            vals = [int(p) for p in parts]
        except ValueError as exc:
            raise OrbitError(f"bad partition {text!r}") from exc
    else:
        vals = [int(p) for p in text]
    if not vals or any(v <= 0 for v in vals):
        raise OrbitError(f"bad partition {text!r}")
    return tuple(sorted(vals, reverse=True))


def format_partition(p):
    out = []
    for v in sorted(set(p), reverse=True):
        m = p.count(v)
        out.append(f"{v}^{m}" if m > 1 else f"{v}")
    return "(" + ",".join(out) + ")"


@dataclass(frozen=True)
class OrbitSpec:
    algebra: LieAlgebra
    label: tuple
    expected_cohomogeneity: int | None = None
    height: int | None = None

    def __post_init__(self):
        lab = parse_partition(self.label)
        object.__setattr__(self, "label", lab)
        if sum(lab) != self.algebra.matrix_size:
            raise OrbitError(
                f"partition {lab} does not sum to matrix size {self.algebra.matrix_size}")

    @property
    def kind(self):
        """'generic' for three commuting sl2 summands, 'so7', 'sl2' or 'other'."""
        fam, lab = self.algebra.family, self.label
        ones = lambda k: lab[k:] == (1,) * (len(lab) - k)
        if fam in ("SL", "SP") and lab[:3] == (2, 2, 2) and ones(3):
            return "generic"
        if fam == "SO" and lab[:6] == (2,) * 6 and ones(6):
            return "generic"
        if fam == "SO" and lab[:3] == (3, 2, 2) and ones(3):
            return "so7"
        if fam == "SL" and lab == (2,) and self.algebra.n == 2:
            return "sl2"
        return "other"

    def describe(self):
        return f"{self.algebra.label} {format_partition(self.label)}"


@dataclass(frozen=True)
class OrbitPoint:
    spec: OrbitSpec
    params: tuple
    element: AlgebraElement
    # unscaled sl2 nilpositives, one per parameter (generic orbits only)
    factors: tuple = field(default=(), repr=False)

    @property
    def X(self):
        return self.element.matrix


def required_form(family, label):
    """Form matrix choice used by the listed representative of an SO orbit."""
    lab = parse_partition(label)
    if family != "SO":
        return "default"
    if lab[:6] == (2,) * 6:
        return "b12"
    if lab[:3] == (3, 2, 2):
        return "so7"
    return "antidiagonal"


def orbit_spec(family, n, label, expected_cohomogeneity=None, height=None):
    """Build an OrbitSpec on the realization suited to the representative."""
    family = family.upper()
    alg = build_algebra(family, n, required_form(family, label))
    return OrbitSpec(alg, parse_partition(label), expected_cohomogeneity, height)


def _e(N, i, j, v=1.0):
    E = np.zeros((N, N), complex)
    E[i, j] = v
    return E


def _generic_factors(spec):
    """Unscaled nilpositives (E_plus, E_zero, E_minus) for the generic orbits."""
    alg, lab = spec.algebra, spec.label
    N = alg.matrix_size
    k = lab.count(2)
    if alg.family == "SL":
        return [_e(N, 2 * d, 2 * d + 1) for d in range(k)]
    if alg.family == "SP":
        m = alg.n
        return [_e(N, d, m + d) for d in range(k)]
    # so with B12 block: block d pairs with its mirror 5-d (entry -1)
    return [_e(N, 2 * d, 2 * d + 1) - _e(N, 10 - 2 * d, 11 - 2 * d) for d in range(3)]


def _so7_point(N, r, s, t):
    X = np.zeros((N, N), complex)
    X[0, 4] = SQ2 * r
    X[1, 0] = -SQ2 * r
    X[1, 5] = t
    X[2, 4] = -t
    X[2, 6] = s
    X[3, 5] = -s
    return X


def representative_matrix(spec):
    alg, lab = spec.algebra, spec.label
    N = alg.matrix_size
    fam = alg.family
    form = alg.form_choice
    if fam == "SL":
        if lab[0] == 2:
            k = lab.count(2)
            return sum(_e(N, 2 * d, 2 * d + 1) for d in range(k))
        if lab[0] == 3 and lab[1:] == (1,) * (len(lab) - 1):
            # unit entries do not give [H,X]=2X; sqrt(2) does
            return _e(N, 0, 1, SQ2) + _e(N, 1, 2, SQ2)
    elif fam == "SP":
        if lab[0] == 2:
            k = lab.count(2)
            return sum(_e(N, d, alg.n + d) for d in range(k))
    else:
        if lab == (5,) and form == "antidiagonal":
            X = np.zeros((5, 5), complex)
            X[0, 1] = SQ2 * (1 - 1j)
            X[1, 2] = -math.sqrt(6) * 1j
            X[2, 3] = math.sqrt(6) * 1j
            X[3, 4] = SQ2 * (1j - 1)
            return X
        if lab == (3, 3) and form == "antidiagonal":
            return 1j * SQ2 * (_e(6, 0, 1) + _e(6, 1, 2) - _e(6, 3, 4) - _e(6, 4, 5))
        if lab[:3] == (3, 2, 2) and set(lab[3:]) <= {1} and form == "so7":
            return _so7_point(N, 1.0, 1.0, 0.0)
        if lab[:6] == (2,) * 6 and set(lab[6:]) <= {1} and form == "b12":
            return sum(_generic_factors(spec))
    raise OrbitError(f"no listed representative for {spec.describe()} (form {form})")


def representative(spec):
    """Standard triple {H=[X,-sigma X], X, Y=-sigma X} for a listed orbit."""
    alg = spec.algebra
    X = representative_matrix(spec)
    Y = -alg.sigma_matrix(X)
    H = br(X, Y)
    return StandardTriple(alg.element(H), alg.element(X), alg.element(Y))


def scaled_point(spec, *params):
    """Orbit point with the natural parameters.

    Generic orbits: ``scaled_point(spec, r, s, t)`` gives s E+ + r E0 + t E-.
    The so(7)-type orbit (3,2,2,1^k) uses the (r,s,t) matrix of the special
    orbit; the minimal orbit of sl(2) takes a single parameter s.
    """
    params = tuple(float(p) for p in params)
    if any(not p > 0 for p in params):
        raise OrbitError(f"parameters must be positive, got {params}")
    alg = spec.algebra
    kind = spec.kind
    if kind == "generic":
        if len(params) != 3:
            raise OrbitError("generic orbits take (r, s, t)")
        r, s, t = params
        facs = _generic_factors(spec)
        X = s * facs[0] + r * facs[1] + t * facs[2]
        return OrbitPoint(spec, params, alg.element(X), tuple(facs))
    if kind == "so7":
        if len(params) != 3:
            raise OrbitError("the so(7) orbit takes (r, s, t)")
        return OrbitPoint(spec, params, alg.element(_so7_point(alg.matrix_size, *params)))
    if kind == "sl2":
        if len(params) != 1:
            raise OrbitError("the sl(2) orbit takes one parameter s")
        E = _e(2, 0, 1)
        return OrbitPoint(spec, params, alg.element(params[0] * E), (E,))
    raise OrbitError(f"no parameterization for {spec.describe()}")


def _rank(M, rel=DEFAULT.rank_rel, ref=None):
    sv = np.linalg.svd(M, compute_uv=False)
    if sv.size == 0:
        return 0
    top = sv[0] if ref is None else ref
    if top == 0:
        return 0
    return int(np.sum(sv > rel * top))


def is_nilpotent(A):
    M = A.matrix if isinstance(A, AlgebraElement) else np.asarray(A)
    n = M.shape[0]
    scale = (1.0 + np.max(np.abs(M))) ** n
    return float(np.max(np.abs(np.linalg.matrix_power(M, n)))) <= 1e-10 * scale


def jordan_partition(A):
    """Jordan type of a nilpotent matrix from the ranks of its powers."""
    M = A.matrix if isinstance(A, AlgebraElement) else np.asarray(A)
    n = M.shape[0]
    if not is_nilpotent(M):
        raise OrbitError("matrix is not nilpotent")
    nrm = np.linalg.norm(M, 2)
    ranks = [n]
    P = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        P = P @ M
        ranks.append(_rank(P, ref=nrm**k) if nrm > 0 else 0)
        if ranks[-1] == 0:
            break
    ranks += [0] * (n + 2 - len(ranks))
    # number of blocks of size >= k is rank(A^{k-1}) - rank(A^k)
    ge = [ranks[k - 1] - ranks[k] for k in range(1, n + 1)]
    parts = []
    for k in range(1, n + 1):
        exact = ge[k - 1] - (ge[k] if k < n else 0)
        parts += [k] * exact
    return tuple(sorted(parts, reverse=True))


def tangent_matrix(alg, X):
    """Columns vec([Z_k, X]) over the complex basis Z_k."""
    return np.array([(Z @ X - X @ Z).ravel() for Z in alg.basis]).T


def orbit_dim_complex(A):
    alg = A.owner
    return _rank(tangent_matrix(alg, A.matrix))

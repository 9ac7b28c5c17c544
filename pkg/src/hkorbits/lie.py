"""Matrix realizations of sl(n,C), so(n,C) and sp(n,C).

Each algebra carries a complex basis, a real basis of its compact form
(the fixed set of the conjugation ``sigma``) and the scale ``kappa`` with
``K(A, B) = kappa * tr(AB)`` for the Killing form ``K``.  The inner product
used throughout is ``<A, B> = -K(A, B)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from .config import DEFAULT

FAMILIES = ("SL", "SO", "SP")
SO_FORMS = ("identity", "antidiagonal", "b12", "so7")


class AlgebraError(ValueError):
    pass


def _antidiag(n):
    return np.fliplr(np.eye(n))


def so7_block():
    """The 7x7 form [[1,0,0],[0,0,I3],[0,I3,0]]."""
    B = np.zeros((7, 7))
    B[0, 0] = 1.0
    B[1:4, 4:7] = np.eye(3)
    B[4:7, 1:4] = np.eye(3)
    return B


def symplectic_form(m):
    Om = np.zeros((2 * m, 2 * m))
    Om[:m, m:] = np.eye(m)
    Om[m:, :m] = -np.eye(m)
    return Om


def _so_form(n, form):
    if form == "identity":
        return np.eye(n)
    if form == "antidiagonal":
        return _antidiag(n)
    if form == "b12":
        if n < 12:
            raise AlgebraError("form 'b12' needs n >= 12")
        B = np.eye(n)
        B[:12, :12] = _antidiag(12)
        return B
    if form == "so7":
        if n < 7:
            raise AlgebraError("form 'so7' needs n >= 7")
        B = np.eye(n)
        B[:7, :7] = so7_block()
        return B
    raise AlgebraError(f"unknown SO form {form!r}; expected one of {SO_FORMS}")


def expm(A):
    """Matrix exponential by scaling and squaring of a truncated Taylor series.

    Intended for the small, modest-norm matrices used by adjoint flows.
    """
    A = np.asarray(A)
    nrm = np.linalg.norm(A, 1)
    s = 0
    if nrm > 0.5:
        s = int(math.ceil(math.log2(nrm / 0.5)))
    As = A / (2.0**s)
    n = A.shape[0]
    E = np.eye(n, dtype=np.result_type(A, float))
    term = np.eye(n, dtype=E.dtype)
    # ||As|| <= 1/2, so 20 terms reach well below double precision
    for k in range(1, 21):
        term = term @ As / k
        E = E + term
    for _ in range(s):
        E = E @ E
    return E


class LieAlgebra:
    """A classical complex simple Lie algebra as a space of matrices.

    ``n`` is the matrix size for SL and SO and the rank for SP (matrix
    size ``2n``).
    """

    def __init__(self, family, n, form_choice="default"):
        family = str(family).upper()
        if family not in FAMILIES:
            raise AlgebraError(f"unsupported family {family!r}")
        n = int(n)
        form_choice = (form_choice or "default").lower().replace("-", "")
        if family == "SL":
            if n < 2:
                raise AlgebraError("sl(n) needs n >= 2")
            if form_choice not in ("default", "identity", "standard"):
                raise AlgebraError(f"SL has no form {form_choice!r}")
            size = n
            B = np.eye(n)
            kappa = 2.0 * n
        elif family == "SO":
            if n < 3:
                raise AlgebraError("so(n) needs n >= 3 (so(2) is abelian)")
            if form_choice == "default":
                form_choice = "antidiagonal"
            size = n
            B = _so_form(n, form_choice)
            kappa = float(n - 2)
        else:
            if n < 1:
                raise AlgebraError("sp(n) needs n >= 1")
            if form_choice not in ("default", "standard", "identity"):
                raise AlgebraError(f"SP has no form {form_choice!r}")
            size = 2 * n
            B = symplectic_form(n)
            kappa = 2.0 * n + 2.0
        if abs(np.linalg.det(B)) < 1e-12:
            raise AlgebraError("singular form matrix")
        self.family = family
        self.n = n
        self.form_choice = form_choice if family == "SO" else "standard"
        self.matrix_size = size
        self.form_matrix = B
        self.killing_scale = kappa
        self._Binv = np.linalg.inv(B)
        self.basis = self._build_basis()
        self.complex_dimension = len(self.basis)
        flat = np.array([Z.ravel() for Z in self.basis]).T
        self._flat = flat
        self._coord_map = np.linalg.pinv(flat)
        self.real_basis = self._build_real_basis()
        self._check_killing_scale()

    # identity used for ownership checks
    @property
    def key(self):
        return (self.family, self.n, self.form_choice)

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        name = {"SL": "sl", "SO": "so", "SP": "sp"}[self.family]
        extra = f", form={self.form_choice}" if self.family == "SO" else ""
        return f"LieAlgebra({name}({self.n}){extra}, dim={self.complex_dimension})"

    @property
    def label(self):
        return {"SL": "sl", "SO": "so", "SP": "sp"}[self.family] + f"({self.n})"

    # -- basis construction -------------------------------------------------
    def _build_basis(self):
        N = self.matrix_size
        out = []
        if self.family == "SL":
            for i in range(N):
                for j in range(N):
                    if i != j:
                        E = np.zeros((N, N), complex)
                        E[i, j] = 1
                        out.append(E)
            for i in range(N - 1):
                E = np.zeros((N, N), complex)
                E[i, i] = 1
                E[i + 1, i + 1] = -1
                out.append(E)
        elif self.family == "SO":
            # Z = M B^{-1} with M antisymmetric solves ZB + BZ^t = 0
            for i in range(N):
                for j in range(i + 1, N):
                    M = np.zeros((N, N), complex)
                    M[i, j], M[j, i] = 1, -1
                    out.append(M @ self._Binv)
        else:
            # Z = M Om^{-1} with M symmetric solves Z Om + Om Z^t = 0
            for i in range(N):
                for j in range(i, N):
                    M = np.zeros((N, N), complex)
                    M[i, j] = 1
                    M[j, i] = 1
                    out.append(M @ self._Binv)
        return out

    def _build_real_basis(self):
        gens = []
        for Z in self.basis:
            for w in (Z, 1j * Z):
                gens.append(w + self.sigma_matrix(w))
        R = np.array([np.concatenate([g.ravel().real, g.ravel().imag]) for g in gens]).T
        U, sv, _ = np.linalg.svd(R, full_matrices=False)
        rank = int(np.sum(sv > DEFAULT.rank_rel * sv[0]))
        if rank != self.complex_dimension:
            raise AlgebraError("compact form has the wrong dimension")
        N2 = self.matrix_size**2
        vecs = U[:, :rank]
        mats = [(v[:N2] + 1j * v[N2:]).reshape(self.matrix_size, self.matrix_size) for v in vecs.T]
        return mats

    def _check_killing_scale(self):
        # ad-trace oracle on one pair with nonzero trace form
        Z = self.basis[-1]
        W = self.sigma_matrix(Z)
        fast = self.killing_scale * np.trace(Z @ W)
        slow = killing_oracle_matrix(self, Z, W)
        if abs(fast - slow) > 1e-9 * max(1.0, abs(slow)):
            raise AlgebraError(f"killing scale mismatch: {fast} vs {slow}")

    # -- raw-matrix helpers (used in inner loops) ---------------------------
    def sigma_matrix(self, Z):
        if self.family == "SO":
            return self.form_matrix @ Z.conj() @ self.form_matrix
        return -Z.conj().T

    def inner_matrix(self, A, B):
        return -self.killing_scale * np.sum(A * B.T)

    def coords(self, Z):
        """Complex coordinates of the matrix ``Z`` in the stored basis."""
        return self._coord_map @ np.asarray(Z).ravel()

    def from_coords(self, c):
        return (self._flat @ c).reshape(self.matrix_size, self.matrix_size)

    def membership_residual(self, Z):
        Z = np.asarray(Z)
        if self.family == "SL":
            return float(abs(np.trace(Z)))
        R = Z @ self.form_matrix + self.form_matrix @ Z.T
        return float(np.max(np.abs(R))) if R.size else 0.0

    def element(self, Z, check=True):
        return AlgebraElement(self, np.asarray(Z, dtype=complex), check=check)

    def zero(self):
        return self.element(np.zeros((self.matrix_size, self.matrix_size), complex))

    def random_element(self, rng, compact=False):
        """Random element with Frobenius norm 1 (complex, or in the compact form)."""
        if compact:
            c = rng.standard_normal(len(self.real_basis))
            Z = sum(ci * B for ci, B in zip(c, self.real_basis))
        else:
            c = rng.standard_normal(self.complex_dimension) + 1j * rng.standard_normal(self.complex_dimension)
            Z = self.from_coords(c)
        return self.element(Z / np.linalg.norm(Z))

    def ad_matrix(self, Z):
        Z = np.asarray(Z)
        cols = [self.coords(Z @ W - W @ Z) for W in self.basis]
        return np.array(cols).T


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    owner: LieAlgebra
    matrix: np.ndarray = field(repr=False)
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if self.check:
            scale = 1.0 + float(np.max(np.abs(self.matrix))) if self.matrix.size else 1.0
            res = self.owner.membership_residual(self.matrix)
            if res > DEFAULT.membership * scale * self.owner.matrix_size:
                raise AlgebraError(f"matrix not in {self.owner.label} (residual {res:.2e})")

    def _wrap(self, M):
        return AlgebraElement(self.owner, M, check=False)

    def __add__(self, other):
        _same_owner(self, other)
        return self._wrap(self.matrix + other.matrix)

    def __sub__(self, other):
        _same_owner(self, other)
        return self._wrap(self.matrix - other.matrix)

    def __neg__(self):
        return self._wrap(-self.matrix)

    def __mul__(self, lam):
        return self._wrap(lam * self.matrix)

    __rmul__ = __mul__

    def norm(self):
        return float(np.linalg.norm(self.matrix))


@dataclass(frozen=True)
class StandardTriple:
    H: AlgebraElement
    X: AlgebraElement
    Y: AlgebraElement

    def residuals(self):
        H, X, Y = self.H.matrix, self.X.matrix, self.Y.matrix
        mx = lambda M: float(np.max(np.abs(M)))
        return {
            "HX-2X": mx(H @ X - X @ H - 2 * X),
            "HY+2Y": mx(H @ Y - Y @ H + 2 * Y),
            "XY-H": mx(X @ Y - Y @ X - H),
            "Y+sigmaX": mx(Y + self.X.owner.sigma_matrix(X)),
        }


@lru_cache(maxsize=None)
def build_algebra(family, n, form_choice="default"):
    """Build (and cache) a matrix realization; see :class:`LieAlgebra`."""
    return LieAlgebra(family, n, form_choice)


def _same_owner(*els):
    own = els[0].owner
    for e in els[1:]:
        if e.owner != own:
            raise AlgebraError("elements belong to different algebras")
    return own


def br(A, B):
    """Commutator of raw matrices."""
    return A @ B - B @ A


def mbr(*Ms):
    """Right-nested bracket of raw matrices: [M1, [M2, ... [M_{k-1}, M_k]]]."""
    out = Ms[-1]
    for M in reversed(Ms[:-1]):
        out = M @ out - out @ M
    return out


def bracket(A, B):
    own = _same_owner(A, B)
    return AlgebraElement(own, br(A.matrix, B.matrix), check=False)


def multi_bracket(elements):
    elements = list(elements)
    if len(elements) < 2:
        raise ValueError("multi_bracket needs at least two elements")
    own = _same_owner(*elements)
    return AlgebraElement(own, mbr(*[e.matrix for e in elements]), check=False)


def killing_inner(A, B):
    """<A, B> = -K(A, B), through the trace fast path."""
    own = _same_owner(A, B)
    return complex(own.inner_matrix(A.matrix, B.matrix))


def killing_oracle_matrix(alg, A, B):
    """K(A, B) = tr(ad_A ad_B) computed in the stored basis."""
    return complex(np.trace(alg.ad_matrix(A) @ alg.ad_matrix(B)))


def killing_oracle(A, B):
    """Reference value of <A, B> = -tr(ad_A ad_B); slow, for testing."""
    own = _same_owner(A, B)
    return -killing_oracle_matrix(own, A.matrix, B.matrix)


def sigma(A):
    return AlgebraElement(A.owner, A.owner.sigma_matrix(A.matrix), check=False)


def adjoint_flow(A, t, X):
    """exp(tA) X exp(-tA)."""
    own = _same_owner(A, X)
    g = expm(t * A.matrix)
    ginv = expm(-t * A.matrix)
    return AlgebraElement(own, g @ X.matrix @ ginv, check=False)

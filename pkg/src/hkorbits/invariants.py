"""Invariant functions on nilpotent orbits and the constant k^2.

With X' = sigma(X) and the inner product <.,.> = -K:

    eta1 = <X, X'>,  eta2 = -<[X,X'], [X,X']>,  eta3 = -<[X,[X,X']], [X',[X,X']]>.

On the so(7)-type orbit one also uses zeta1, zeta2 (eta_j / 5) and
zeta3 = tr(Z Z conj(Z)^t conj(Z)^t).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lie import AlgebraElement, build_algebra, mbr


class InvariantError(ValueError):
    pass


@dataclass(frozen=True)
class InvariantTuple:
    eta1: float
    eta2: float
    eta3: float
    zeta1: float | None = None
    zeta2: float | None = None
    zeta3: float | None = None

    def as_array(self):
        return np.array([self.eta1, self.eta2, self.eta3])


def _real(z, what):
    z = complex(z)
    if abs(z.imag) > 1e-10 * (1.0 + abs(z.real)):
        raise InvariantError(f"{what} has imaginary part {z.imag:.3e}")
    return z.real


def eta_matrix(alg, X, i):
    Xp = alg.sigma_matrix(X)
    if i == 1:
        val = alg.inner_matrix(X, Xp)
    elif i == 2:
        W = mbr(X, Xp)
        val = -alg.inner_matrix(W, W)
    elif i == 3:
        val = -alg.inner_matrix(mbr(X, X, Xp), mbr(Xp, X, Xp))
    else:
        raise InvariantError(f"no invariant eta{i}")
    return _real(val, f"eta{i}")


def etas_matrix(alg, X):
    """(eta1, eta2, eta3) for a raw matrix, sharing intermediate brackets."""
    Xp = alg.sigma_matrix(X)
    W = X @ Xp - Xp @ X
    e1 = alg.inner_matrix(X, Xp)
    e2 = -alg.inner_matrix(W, W)
    e3 = -alg.inner_matrix(X @ W - W @ X, Xp @ W - W @ Xp)
    return np.array([_real(e1, "eta1"), _real(e2, "eta2"), _real(e3, "eta3")])


def eta(X: AlgebraElement, i: int) -> float:
    if not np.any(X.matrix):
        raise InvariantError("eta is only defined for nonzero X")
    return eta_matrix(X.owner, X.matrix, i)


def invariants(X: AlgebraElement) -> InvariantTuple:
    if not np.any(X.matrix):
        raise InvariantError("invariants of the zero element")
    e = etas_matrix(X.owner, X.matrix)
    z = (None, None, None)
    if X.owner.family == "SO" and X.owner.n == 7:
        z = zetas_matrix(X.matrix)
    return InvariantTuple(*e, *z)


def _check_so7(X):
    alg = X.owner
    if alg.family != "SO" or alg.n != 7:
        raise InvariantError(f"zeta invariants live on so(7), not {alg.label}")


def zetas_matrix(Z):
    Zh = Z.conj().T
    z1 = np.trace(Z @ Zh)
    C = Z @ Zh - Zh @ Z
    z2 = np.trace(C @ C)
    z3 = np.trace(Z @ Z @ Zh @ Zh)
    return np.array([_real(z1, "zeta1"), _real(z2, "zeta2"), _real(z3, "zeta3")])


def zeta(X: AlgebraElement, i: int) -> float:
    _check_so7(X)
    if i not in (1, 2, 3):
        raise InvariantError(f"no invariant zeta{i}")
    return float(zetas_matrix(X.matrix)[i - 1])


def zmap_matrix(alg, X):
    Xp = alg.sigma_matrix(X)
    return mbr(X, Xp, Xp, Xp, X) + mbr(Xp, Xp, X, X, Xp) + 2 * mbr(Xp, X, Xp, X, Xp)


def zmap(X: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(X.owner, zmap_matrix(X.owner, X.matrix), check=False)


# k^2 by Cartan type; classical ranks are the Dynkin rank
_K2_EXCEPTIONAL = {"G2": Fraction(2), "F4": Fraction(9, 2), "E6": Fraction(6),
                   "E7": Fraction(9), "E8": Fraction(15)}


def k_squared(family, rank=None) -> Fraction:
    """k^2 from the Cartan type.

    ``family`` is a Cartan letter (A, B, C, D, G, F, E) with a Dynkin ``rank``,
    or a matrix family (SL, SO, SP) with the ``n`` used by :func:`build_algebra`.
    """
    fam = str(family).upper()
    if fam in _K2_EXCEPTIONAL:
        return _K2_EXCEPTIONAL[fam]
    if fam in ("G", "F", "E") and rank is not None:
        key = f"{fam}{rank}"
        if key in _K2_EXCEPTIONAL:
            return _K2_EXCEPTIONAL[key]
        raise InvariantError(f"no exceptional algebra {key}")
    if rank is None or int(rank) < 1:
        raise InvariantError("a positive rank is required")
    n = int(rank)
    if fam in ("A", "C"):
        return Fraction(n + 1, 2)
    if fam == "B":
        return Fraction(2 * n - 1, 2)   # matrix size 2n+1
    if fam == "D":
        return Fraction(2 * n - 2, 2)   # matrix size 2n
    if fam == "SL":
        return Fraction(n, 2)
    if fam == "SO":
        return Fraction(n - 2, 2)
    if fam == "SP":
        return Fraction(n + 1, 2)
    raise InvariantError(f"unknown family {family!r}")


def highest_root_vector(alg):
    """Root vector of the highest root in a diagonal Cartan.

    Returns a basis element E with maximal weight under ad(H0) for a regular
    diagonal H0, checked to be a common eigenvector.
    """
    if alg.family == "SO" and alg.form_choice != "antidiagonal":
        alg = build_algebra("SO", alg.n, "antidiagonal")
    N = alg.matrix_size
    if alg.family == "SL":
        h = np.arange(N, 0, -1, dtype=float)
        h -= h.mean()
    elif alg.family == "SO":
        # antidiagonal form: diag(a_1, ..., a_m, (0), -a_m, ..., -a_1)
        m = N // 2
        a = np.arange(m, 0, -1, dtype=float) + 0.5
        h = np.concatenate([a, [0.0] * (N % 2), -a[::-1]])
    else:
        m = alg.n
        a = np.arange(m, 0, -1, dtype=float) + 0.5
        h = np.concatenate([a, -a])
    H0 = np.diag(h).astype(complex)
    best, wmax = None, -np.inf
    for Z in alg.basis:
        W = H0 @ Z - Z @ H0
        idx = np.unravel_index(np.argmax(np.abs(Z)), Z.shape)
        w = (W[idx] / Z[idx]).real
        if np.max(np.abs(W - w * Z)) > 1e-12:
            continue  # not a root vector (Cartan or mixed)
        if w > wmax + 1e-12:
            best, wmax = Z, w
    return alg, best


def k_squared_oracle(alg) -> float:
    """<E, sigma E>/4 for the highest root vector normalized so that with
    H = [E, -sigma E] one has [H, E] = 2E."""
    alg, E = highest_root_vector(alg)
    Y = -alg.sigma_matrix(E)
    H = E @ Y - Y @ E
    # [H,E] = lam E with lam quadratic in the scale of E
    W = H @ E - E @ H
    idx = np.unravel_index(np.argmax(np.abs(E)), E.shape)
    lam = (W[idx] / E[idx]).real
    E = E * np.sqrt(2.0 / lam)
    return float(alg.inner_matrix(E, alg.sigma_matrix(E)).real / 4.0)

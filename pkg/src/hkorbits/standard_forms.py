"""Normal forms of complex matrices under unitary actions.

* symmetric Z under Z -> g Z g^t: Takagi form diag(mu_1 >= ... >= 0),
* skew Z under the same action: blocks [[0, x], [-x, 0]], x descending,
* arbitrary A under A -> g A h: singular value decomposition.

The congruence forms are built by deflation: the top singular triplet of
the remaining block gives one Takagi vector (or one 2x2 block), and the
complement is invariant under Z.  Degenerate spectra need no special care
since each step only uses a single triplet.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space


class FormError(ValueError):
    pass


@dataclass(frozen=True)
class FormResult:
    transform: object       # g, or (u, q) for the SVD
    canonical: np.ndarray
    residual: float
    kind: str = "takagi"

    @property
    def invariants(self):
        """The continuous invariants: Takagi values, block moduli or singular values."""
        C = self.canonical
        if self.kind == "skew":
            return np.array([C[i, i + 1].real for i in range(0, C.shape[0] - 1, 2)])
        return np.diag(C).real.copy()


def _check_square(Z):
    Z = np.asarray(Z, dtype=complex)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
        raise FormError("a square matrix is required")
    return Z


def _complement(Q, vecs):
    """Orthonormal basis of span(Q) minus span(vecs) (vecs in Q-coordinates)."""
    if Q.shape[1] == len(vecs):
        return Q[:, :0]
    K = null_space(np.array(vecs).conj())
    return Q @ K


def takagi(Z, tol=1e-10):
    """Unitary g with g Z g^t = diag(mu), mu real, nonnegative, descending."""
    Z = _check_square(Z)
    n = Z.shape[0]
    scale = 1.0 + np.linalg.norm(Z)
    if np.max(np.abs(Z - Z.T)) > tol * scale:
        raise FormError("Takagi form needs a symmetric matrix")
    Z = (Z + Z.T) / 2
    Q = np.eye(n, dtype=complex)
    cols = []
    while Q.shape[1] > 0:
        Zr = Q.conj().T @ Z @ Q.conj()
        u, s, vh = np.linalg.svd(Zr)
        u0, v0 = u[:, 0], vh[0].conj()
        # the antilinear map x -> Zr conj(x) / s swaps u0 and conj(v0)
        cands = [u0 + v0.conj(), 1j * (u0 - v0.conj())]
        m = max(cands, key=np.linalg.norm)
        if np.linalg.norm(m) < 1e-8 or s[0] <= tol * scale:
            m = u0 if s[0] > tol * scale else np.eye(Q.shape[1])[:, 0].astype(complex)
        m = m / np.linalg.norm(m)
        cols.append(Q @ m)
        Q = _complement(Q, [m])
    M = np.array(cols).T
    g = M.conj().T
    C = g @ Z @ g.T
    D = np.diag(np.diag(C).real)
    resid = max(float(np.max(np.abs(C - D))), float(np.max(np.abs(Z - M @ D @ M.T))))
    return FormResult(g, D.astype(complex), resid)


def skew_standard(Z, tol=1e-10):
    """Unitary g with g Z g^t block diagonal, blocks [[0, x], [-x, 0]]."""
    Z = _check_square(Z)
    n = Z.shape[0]
    scale = 1.0 + np.linalg.norm(Z)
    if np.max(np.abs(Z + Z.T)) > tol * scale:
        raise FormError("skew standard form needs a skew-symmetric matrix")
    Z = (Z - Z.T) / 2
    Q = np.eye(n, dtype=complex)
    cols = []
    xs = []
    while Q.shape[1] > 1:
        Zr = Q.conj().T @ Z @ Q.conj()
        u, s, vh = np.linalg.svd(Zr)
        if s[0] <= tol * scale:
            break
        u0, v0 = u[:, 0], vh[0].conj()
        # Zr v0 = s u0 and Zr conj(u0) = -s conj(v0); u0 is orthogonal to conj(v0)
        m1, m2 = u0, v0.conj()
        cols += [Q @ m1, Q @ m2]
        xs.append(s[0])
        Q = _complement(Q, [m1, m2])
    # zero block: any orthonormal completion
    for j in range(Q.shape[1]):
        cols.append(Q[:, j])
    M = np.array(cols).T
    g = M.conj().T
    C = g @ Z @ g.T
    D = np.zeros((n, n), complex)
    for k, x in enumerate(xs):
        D[2 * k, 2 * k + 1] = x
        D[2 * k + 1, 2 * k] = -x
    resid = max(float(np.max(np.abs(C - D))), float(np.max(np.abs(Z - M @ D @ M.T))))
    return FormResult(g, D, resid, "skew")


def svd_complex(A):
    """u, q unitary with A = u diag(s) q^H, s descending."""
    A = _check_square(A)
    u, s, vh = np.linalg.svd(A)
    q = vh.conj().T
    D = np.diag(s).astype(complex)
    resid = float(np.max(np.abs(A - u @ D @ q.conj().T)))
    return FormResult((u, q), D, resid, "svd")


def random_unitary(n, rng):
    """Haar-distributed unitary (QR of a complex Gaussian with phase fix)."""
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Qm, R = np.linalg.qr(G)
    return Qm * (np.diag(R) / np.abs(np.diag(R)))

"""Kahler form, the endomorphism J and the hyperKahler checks on an orbit.

Conventions (X' = sigma X, <.,.> = -K, xi_A = [A, X], I xi_A = i xi_A):

* omega_I = -1/2 d I d rho with (I alpha)(v) = -alpha(I v), computed in
  closed form from the eta-derivatives of rho,
* g(u, v) = omega_I(I u, v),
* J is defined by g(u, v) = Re Sigma(J u, v) with Sigma(xi_A, xi_B) = <[A,B], X>,
* omega_J(u, v) = g(u, J v), omega_K(u, v) = g(u, K v), K = I J; on a
  hyperKahler orbit Sigma = omega_J + i omega_K.

Vector fields satisfy [xi_A, xi_B] = -xi_[A,B], so for a one-form alpha
d alpha(xi_A, xi_B) = xi_A alpha(xi_B) - xi_B alpha(xi_A) + alpha(xi_[A,B]).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import qr

from .config import DEFAULT
from .invariants import zmap_matrix
from .lie import AlgebraElement, expm, mbr
from .orbits import OrbitPoint
from .potentials import PotentialError, eta_chart, fd_grad_hess
from .reports import CheckReport


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class TangentVector:
    base: OrbitPoint
    generator: AlgebraElement
    value: AlgebraElement


@dataclass(frozen=True)
class PotentialDerivatives:
    rho: float
    grad: tuple   # (rho_1, rho_2, rho_3)
    hess: tuple   # (rho_11, rho_12, rho_13, rho_22, rho_23, rho_33)

    def hess_matrix(self):
        a, b, c, d, e, f = self.hess
        return np.array([[a, b, c], [b, d, e], [c, e, f]])


# -- tangent spaces -----------------------------------------------------------

def _tangent_columns(alg, X):
    return np.array([(Z @ X - X @ Z).ravel() for Z in alg.basis]).T


def _pivot_rank(R, rel):
    d = np.abs(np.diag(R))
    if d.size == 0 or d[0] == 0:
        return 0
    return int(np.sum(d > rel * d[0]))


def tangent_basis(P: OrbitPoint, rel=DEFAULT.rank_rel):
    """Independent tangent vectors [A, X] chosen by pivoted QR over the basis."""
    alg = P.spec.algebra
    X = P.X
    T = _tangent_columns(alg, X)
    _, R, piv = qr(T, mode="economic", pivoting=True)
    k = _pivot_rank(R, rel)
    if k == 0:
        raise GeometryError("degenerate point: the tangent map has rank 0")
    out = []
    for j in piv[:k]:
        A = alg.basis[j]
        out.append(TangentVector(P, alg.element(A), AlgebraElement(alg, A @ X - X @ A, check=False)))
    return out


def _realvec(M):
    v = M.ravel()
    return np.concatenate([v.real, v.imag])


def _from_realvec(v, N):
    h = v.size // 2
    return (v[:h] + 1j * v[h:]).reshape(N, N)


class RealFrame:
    """Orthonormal real basis of T_X O for Re<u, sigma v>, with coordinates."""

    def __init__(self, alg, X, rel=DEFAULT.rank_rel):
        self.alg = alg
        self.X = X
        N = alg.matrix_size
        self.N = N
        T = _tangent_columns(alg, X)
        _, R, piv = qr(T, mode="economic", pivoting=True)
        k = _pivot_rank(R, rel)
        self.generators = [alg.basis[j] for j in piv[:k]]
        comp = [A @ X - X @ A for A in self.generators]
        self.complex_vectors = comp
        V = np.array([_realvec(w) for w in comp] + [_realvec(1j * w) for w in comp]).T
        U, sv, _ = np.linalg.svd(V, full_matrices=False)
        m = int(np.sum(sv > rel * sv[0]))
        if m != 2 * k:
            raise GeometryError("real tangent space has unexpected dimension")
        # Re<u, sigma v> = kappa * (euclidean product of real vectors) on the algebra
        self.E = U[:, :m] / np.sqrt(alg.killing_scale)
        self.dim = m
        self.vectors = [_from_realvec(self.E[:, j], N) for j in range(m)]
        # preimages of basis vectors under A -> [A, X]
        Tpinv = np.linalg.pinv(T, rcond=1e-10)
        self._Tpinv = Tpinv
        self.preimages = [alg.from_coords(Tpinv @ q.ravel()) for q in self.vectors]

    def coords(self, M):
        return self.alg.killing_scale * (self.E.T @ _realvec(M))

    def out_of_plane(self, M):
        v = _realvec(M)
        c = self.coords(M)
        r = v - self.E @ c
        return float(np.linalg.norm(r) / max(np.linalg.norm(v), 1e-300))

    def matrix_of(self, op):
        """Real matrix of a real-linear map on the tangent space."""
        return np.array([self.coords(op(q)) for q in self.vectors]).T

    def preimage(self, M):
        return self.alg.from_coords(self._Tpinv @ M.ravel())


# -- derivatives of the potential in the eta variables -------------------------

def derivatives_from_params(pot, params, richardson=True, max_condition=DEFAULT.max_condition):
    """PotentialDerivatives from FD partials in the orbit parameters.

    Solves rho_p = J^T rho_eta and rho_pp = J^T P J + sum_i rho_i Hess(eta_i)
    for the eta-gradient and eta-Hessian P, with J = d eta / d p.
    """
    params = tuple(float(p) for p in params)
    chart = pot.chart
    n = chart.nparams
    if pot.kind == "GENERIC":
        r, s, t = params
        if min(abs(r - s), abs(s - t), abs(r - t)) < 1e-3:
            raise PotentialError("parameters must be pairwise distinct (perturb the point)")
    etas, jac, hess_eta = eta_chart(chart, params)
    if n == 1:
        jac = jac[:1, :1]
        hess_eta = hess_eta[:1]
    cond = np.linalg.cond(jac)
    if cond > max_condition:
        raise PotentialError(f"parameter chart is ill-conditioned (cond {cond:.2e})")
    g_p, H_p = fd_grad_hess(pot.value, params, richardson=richardson)
    grad = np.linalg.solve(jac.T, g_p)
    rest = H_p - np.einsum("i,iab->ab", grad, hess_eta)
    Jinv = np.linalg.inv(jac)
    P = Jinv.T @ rest @ Jinv
    P = (P + P.T) / 2
    full_g = np.zeros(3)
    full_P = np.zeros((3, 3))
    full_g[:n] = grad
    full_P[:n, :n] = P
    return PotentialDerivatives(
        float(pot.value(*params)),
        tuple(full_g),
        (full_P[0, 0], full_P[0, 1], full_P[0, 2], full_P[1, 1], full_P[1, 2], full_P[2, 2]),
    )


def potential_derivatives(pot, P: OrbitPoint, richardson=True):
    return derivatives_from_params(pot, P.params, richardson=richardson)


def derivatives_at_matrix(pot, alg, X, richardson=True):
    """Derivatives at an arbitrary orbit point, parameters recovered from invariants."""
    return derivatives_from_params(pot, pot.params_from_matrix(alg, X), richardson=richardson)


# -- the two closed formulas --------------------------------------------------

class _Frame:
    """Brackets at X shared by the omega and J formulas."""

    def __init__(self, alg, X):
        self.alg = alg
        self.X = X
        Xp = alg.sigma_matrix(X)
        self.Xp = Xp
        self.Z = zmap_matrix(alg, X)
        self.Zp = alg.sigma_matrix(self.Z)
        self.XXp = mbr(X, Xp)
        self.XXpX = mbr(X, Xp, X)
        self.XpXXp = mbr(Xp, X, Xp)
        self.XXpXXp = mbr(X, Xp, X, Xp)
        self.XZ = mbr(X, self.Z)

    def ip(self, U, V):
        return self.alg.inner_matrix(U, V)


def omega_matrix(fr: _Frame, d: PotentialDerivatives, xa, xb):
    alg = fr.alg
    X, Xp = fr.X, fr.Xp
    ip = fr.ip
    r1, r2, r3 = d.grad
    r11, r12, r13, r22, r23, r33 = d.hess
    xbp = alg.sigma_matrix(xb)
    val = 2 * r1 * ip(xa, xbp).imag
    if r2:
        val -= 4 * r2 * ip(xa, 2 * mbr(Xp, X, xbp) - mbr(X, Xp, xbp)).imag
    if r3:
        inner = (-2 * mbr(X, X, Xp, Xp, xbp) + 3 * mbr(X, Xp, X, Xp, xbp)
                 + 3 * mbr(X, Xp, Xp, X, xbp) + 3 * mbr(Xp, X, X, Xp, xbp)
                 - 12 * mbr(Xp, X, Xp, X, xbp) + 3 * mbr(Xp, Xp, X, X, xbp))
        val -= 2 * r3 * ip(xa, inner).imag
    a1, b1 = ip(xa, Xp), ip(xbp, X)
    a2, b2 = ip(xa, fr.XpXXp), ip(xbp, fr.XXpX)
    a3, b3 = ip(xa, fr.Z), ip(xbp, fr.Zp)
    val += 2 * r11 * (a1 * b1).imag
    val -= 4 * r12 * (a1 * b2 + a2 * b1).imag
    val += 2 * r13 * (a1 * b3 + a3 * b1).imag
    val += 8 * r22 * (a2 * b2).imag
    val -= 4 * r23 * (a2 * b3 + a3 * b2).imag
    val += 2 * r33 * (a3 * b3).imag
    return float(val)


def J_matrix(fr: _Frame, d: PotentialDerivatives, xa):
    alg = fr.alg
    X, Xp = fr.X, fr.Xp
    ip = fr.ip
    r1, r2, r3 = d.grad
    r11, r12, r13, r22, r23, r33 = d.hess
    xap = alg.sigma_matrix(xa)
    out = -2 * r1 * mbr(X, xap)
    if r2:
        out = out + 4 * r2 * (2 * mbr(X, Xp, X, xap) - mbr(X, X, Xp, xap))
    if r3:
        out = out + 2 * r3 * (-2 * mbr(X, X, X, Xp, Xp, xap) + 3 * mbr(X, X, Xp, X, Xp, xap)
                              + 3 * mbr(X, X, Xp, Xp, X, xap) + 3 * mbr(X, Xp, Xp, X, X, xap)
                              - 12 * mbr(X, Xp, X, Xp, X, xap) + 3 * mbr(X, Xp, X, X, Xp, xap))
    c1 = ip(xap, X)
    c2 = ip(xap, fr.XXpX)
    c3 = ip(xap, fr.Zp)
    out = out - 2 * r11 * c1 * fr.XXp
    out = out + 4 * r12 * (c1 * fr.XXpXXp + c2 * fr.XXp)
    out = out - 2 * r13 * (c1 * fr.XZ + c3 * fr.XXp)
    out = out - 8 * r22 * c2 * fr.XXpXXp
    out = out + 4 * r23 * (c2 * fr.XZ + c3 * fr.XXpXXp)
    out = out - 2 * r33 * c3 * fr.XZ
    return out


def _vec(x):
    if isinstance(x, TangentVector):
        return x.value.matrix
    if isinstance(x, AlgebraElement):
        return x.matrix
    return np.asarray(x)


def omega_I(pot, P: OrbitPoint, xa, xb, derivs=None):
    """omega_I(xi_A, xi_B) at P from the closed formula."""
    alg = P.spec.algebra
    d = derivs if derivs is not None else potential_derivatives(pot, P)
    return omega_matrix(_Frame(alg, P.X), d, _vec(xa), _vec(xb))


def J_endo(pot, P: OrbitPoint, xa, derivs=None):
    alg = P.spec.algebra
    d = derivs if derivs is not None else potential_derivatives(pot, P)
    return AlgebraElement(alg, J_matrix(_Frame(alg, P.X), d, _vec(xa)), check=False)


def kks_sigma(P: OrbitPoint, A, B):
    """Sigma(xi_A, xi_B) = <[A, B], X>."""
    alg = P.spec.algebra
    A, B = _vec(A), _vec(B)
    return complex(alg.inner_matrix(A @ B - B @ A, P.X))


# -- finite-difference oracles ------------------------------------------------

def _flow(A, t, Y):
    return expm(t * A) @ Y @ expm(-t * A)


def _ddt(f, h):
    """Central difference with one Richardson step."""
    d1 = (f(h) - f(-h)) / (2 * h)
    d2 = (f(h / 2) - f(-h / 2)) / h
    return (4 * d2 - d1) / 3


def omega_fd(pot, alg, X, A, B, h=2e-3):
    """-1/2 d I d rho (xi_A, xi_B) by nested differences along adjoint flows.

    I d rho (xi_B)(Y) = -d/de rho(exp(e iB) Y exp(-e iB)).
    """
    rho = lambda Y: pot.value_at_matrix(alg, Y)

    def idrho(C, Y):
        return -_ddt(lambda e: rho(_flow(1j * C, e, Y)), h)

    def xi_of(C, D):
        return _ddt(lambda t: idrho(D, _flow(C, t, X)), h)

    AB = A @ B - B @ A
    didr = xi_of(A, B) - xi_of(B, A) + idrho(AB, X)
    return -0.5 * didr


def omega_at_matrix(pot, alg, Y, A, B):
    d = derivatives_at_matrix(pot, alg, Y)
    return omega_matrix(_Frame(alg, Y), d, A @ Y - Y @ A, B @ Y - Y @ B)


def closedness_residual(pot, alg, X, A, B, C, h=2e-3):
    """d omega_I (xi_A, xi_B, xi_C) by FD, relative to the size of its terms."""
    def F(U, V, Y):
        return omega_at_matrix(pot, alg, Y, U, V)

    def along(W, U, V):
        return _ddt(lambda t: F(U, V, _flow(W, t, X)), h)

    br = lambda P, Q: P @ Q - Q @ P
    terms = [
        along(A, B, C), -along(B, A, C), along(C, A, B),
        F(br(A, B), C, X), -F(br(A, C), B, X), F(br(B, C), A, X),
    ]
    scale = max(abs(t) for t in terms)
    return abs(sum(terms)) / max(scale, 1e-300)


# -- the verification suite -----------------------------------------------------

def hk_matrices(pot, P: OrbitPoint, derivs=None):
    """Real matrices of J, I, the metric g and the complex matrix of Sigma."""
    alg = P.spec.algebra
    d = derivs if derivs is not None else potential_derivatives(pot, P)
    fr = _Frame(alg, P.X)
    F = RealFrame(alg, P.X)
    Jm = F.matrix_of(lambda v: J_matrix(fr, d, v))
    Im = F.matrix_of(lambda v: 1j * v)
    q = F.vectors
    g = np.array([[omega_matrix(fr, d, 1j * u, v) for v in q] for u in q])
    Sig = np.array([[alg.inner_matrix(A, v) for v in q] for A in F.preimages])
    return dict(frame=F, J=Jm, I=Im, g=g, Sigma=Sig, derivs=d, fr=fr)


def verify_hyperkahler(pot, P: OrbitPoint, tol=1e-5, rng=None, n_pairs=3, n_triples=2,
                       check_fd=True):
    """Residuals (a)-(e) of the hyperKahler conditions at one point.

    (a) J^2 + 1 on a real tangent basis, (b) positivity of g, (c) the
    compatibility Sigma = omega_J + i omega_K, (d) closedness of omega_I by
    FD, (e) closed formula for omega_I against the FD oracle.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    alg = P.spec.algebra
    M = hk_matrices(pot, P)
    Jm, Im, g, Sig = M["J"], M["I"], M["g"], M["Sigma"]
    n = Jm.shape[0]
    res = {}
    res["J2_plus_1"] = float(np.max(np.abs(Jm @ Jm + np.eye(n))))
    res["J_tangent"] = max(M["frame"].out_of_plane(J_matrix(M["fr"], M["derivs"], v)) for v in M["frame"].vectors)
    gs = (g + g.T) / 2
    res["metric_asymmetry"] = float(np.max(np.abs(g - g.T)) / np.max(np.abs(g)))
    ev = np.linalg.eigvalsh(gs)
    ratio = ev[0] / ev[-1]
    res["metric_not_positive"] = 0.0 if ratio > 1e-10 else 1.0 - min(ratio, 0.0)
    wJ = g @ Jm
    wK = g @ Im @ Jm
    res["sigma_compat"] = float(np.max(np.abs(Sig - (wJ + 1j * wK))) / np.max(np.abs(Sig)))
    if check_fd:
        X = P.X
        errs = []
        for _ in range(n_pairs):
            A = alg.random_element(rng).matrix
            B = alg.random_element(rng).matrix
            lem = omega_matrix(M["fr"], M["derivs"], A @ X - X @ A, B @ X - X @ B)
            fd = omega_fd(pot, alg, X, A, B)
            errs.append(abs(lem - fd) / max(abs(fd), 1e-300))
        res["omega_formula_vs_fd"] = max(errs)
        cl = []
        for _ in range(n_triples):
            A, B, C = (alg.random_element(rng).matrix for _ in range(3))
            cl.append(closedness_residual(pot, alg, X, A, B, C))
        if cl:
            res["closedness"] = max(cl)
    inputs = {
        "algebra": alg.label, "orbit": list(P.spec.label), "params": list(P.params),
        "potential": pot.kind, "k_squared": float(pot.k_squared), "c": pot.c,
    }
    return CheckReport("check-hk", inputs, res, tol,
                       paper_anchor="J^2=-1 and compatibility of the Kahler form with the KKS form")

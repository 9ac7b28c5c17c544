"""Closed-form invariant Kahler potentials.

* ``SL2_FACTOR``: one sl2 summand, rho(s) with rho_s^2 = 16 k^4 + c / s^2.
* ``GENERIC``: orbits meeting three commuting sl2's, rho = sum of factor
  potentials in (r, s, t) with a shared constant c (c = 0 gives
  4 k^2 (r + s + t)).  The c = 0 potential is also available in terms of
  the invariants eta_i through an explicit radical chain and a quartic.
* ``SO7``: the one-parameter family on the orbit (3,2,2) of so(7), in
  (r, s, t) and in the globally defined zeta invariants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np
from scipy.optimize import brentq

from .config import DEFAULT


class PotentialError(ValueError):
    pass


KINDS = ("GENERIC", "SO7", "SL2_FACTOR")


# -- per-factor potential ---------------------------------------------------

def factor_potential_derivative(s, k2, c):
    """rho_s = sqrt(16 k^4 + c / s^2)."""
    if s <= 0:
        raise PotentialError("s must be positive")
    k2 = float(k2)
    return math.sqrt(16.0 * k2 * k2 + c / (s * s))


def factor_potential(s, k2, c):
    """Antiderivative of :func:`factor_potential_derivative`.

    With a = 4k^2 and w = sqrt(a^2 s^2 + c) this is
    w - sqrt(c) log((sqrt(c) + w) / s), which is exactly a*s at c = 0.
    """
    if s <= 0:
        raise PotentialError("s must be positive")
    if c < 0:
        raise PotentialError("c must be nonnegative")
    a = 4.0 * float(k2)
    w = math.sqrt(a * a * s * s + c)
    if c == 0:
        return w
    rc = math.sqrt(c)
    return w - rc * math.log((rc + w) / s)


def generic_potential(r, s, t, k2, c=0.0):
    if min(r, s, t) <= 0:
        raise PotentialError("parameters must be positive")
    if c == 0:
        return 4.0 * float(k2) * (r + s + t)
    return sum(factor_potential(u, k2, c) for u in (r, s, t))


# -- c = 0 potential from the invariants --------------------------------------

def eta_tilde(eta, k2):
    eta = np.asarray(eta, dtype=float)
    return eta / (np.array([4.0, 8.0, 16.0]) * float(k2))


@dataclass(frozen=True)
class KappaChain:
    eta_tilde: tuple
    alpha: complex
    beta: complex
    psi: complex
    kappa: complex
    rho: float
    fallback: bool = False


def _quartic(lam, e1, e2, alpha):
    return (lam * lam - e1) ** 2 - (8.0 * alpha / math.sqrt(6.0)) * lam - 2.0 * (e1 * e1 - e2)


def _alpha(e1, e2, e3):
    a2 = e1**3 - 3 * e1 * e2 + 2 * e3
    if a2 < -1e-10 * max(1.0, e1**3):
        raise PotentialError("eta triple is not realizable (negative alpha^2)")
    return math.sqrt(max(a2, 0.0))


def quartic_solve(e1, e2, e3):
    """Positive root lambda (= r+s+t) of the quartic in the reduced invariants.

    The root is bracketed in [sqrt(e1), sqrt(3 e1)] and found with Brent's
    method, then checked against the quartic.
    """
    if e1 <= 0:
        raise PotentialError("eta1 must be positive")
    alpha = _alpha(e1, e2, e3)
    lo, hi = math.sqrt(e1), math.sqrt(3.0 * e1)
    flo, fhi = _quartic(lo, e1, e2, alpha), _quartic(hi, e1, e2, alpha)
    if flo > 0 or fhi < 0:
        # allow for rounding right at the bracket ends
        scale = 1e-10 * (1 + hi**4)
        if abs(flo) <= scale:
            return lo
        if abs(fhi) <= scale:
            return hi
        raise PotentialError("quartic has no root in the admissible range")
    lam = brentq(_quartic, lo, hi, args=(e1, e2, alpha), xtol=1e-14, rtol=1e-15, maxiter=200)
    res = _quartic(lam, e1, e2, alpha)
    if abs(res) > 1e-10 * (1 + lam**4):
        raise PotentialError(f"quartic residual {res:.2e} too large")
    return lam


def kappa_chain(eta1, eta2, eta3, k2, tol=1e-8):
    """Evaluate the explicit c = 0 potential through alpha, beta, psi, kappa.

    Radicals are taken on principal complex branches.  Where the chain is
    0/0 (r = s = t) or leaves the reals, the quartic root is used instead
    and ``fallback`` is set.
    """
    e1, e2, e3 = (float(v) for v in eta_tilde((eta1, eta2, eta3), k2))
    k2f = float(k2)
    alpha = complex(_alpha(e1, e2, e3))
    q = e1 * e1 - 3 * e2
    beta = 9 * alpha**2 - 5 * e1**3 + 9 * e1 * e2
    psi = beta**2 + 2 * q**3
    base = beta + np.sqrt(complex(psi))
    kappa = complex("nan")
    rho = None
    if abs(base) > 1e-9 * max(1.0, abs(e1) ** 3):
        w = base ** (1.0 / 3.0)
        kappa = 2 ** (1 / 3) * w + 2 * e1 - 2 ** (2 / 3) * q / w
        sk = np.sqrt(kappa)
        val = 2 * math.sqrt(2) * k2f / math.sqrt(3) * (sk + np.sqrt(12 * alpha / sk + 6 * e1 - kappa))
        if np.isfinite(val) and abs(val.imag) <= tol * max(1.0, abs(val.real)):
            rho = val.real
    fallback = rho is None
    if fallback:
        rho = 4 * k2f * quartic_solve(e1, e2, e3)
    return KappaChain((e1, e2, e3), alpha, complex(beta), complex(psi), complex(kappa), float(rho), fallback)


def params_from_eta_generic(eta, k2):
    """Recover (u1 >= u2 >= u3) from eta_i = 2^{i+1} k^2 sum u^{2i}.

    The squares are the roots of the cubic whose power sums are the reduced
    invariants (Newton identities).
    """
    p1, p2, p3 = (float(v) for v in eta_tilde(eta, k2))
    el1 = p1
    el2 = (p1 * p1 - p2) / 2
    el3 = (p1**3 - 3 * p1 * p2 + 2 * p3) / 6
    roots = np.roots([1.0, -el1, el2, -el3])
    sq = np.clip(np.sort(roots.real)[::-1], 0.0, None)
    return tuple(np.sqrt(sq))


# -- so(7) family -------------------------------------------------------------

def so7_potential(r, s, t, c=0.0):
    """The so(7) family in (r, s, t).

    rho = 10 (W + sqrt(c) log(4 r s) - sqrt(c) log(h + sqrt(c) W)) with
    S = 4r^2 + s^2 + t^2, h = c + sqrt(4 r^2 s^2 + S c + c^2), W = sqrt(S + 2h).
    At c = 0 this is 10 sqrt((2r + s)^2 + t^2).
    """
    if c < 0:
        raise PotentialError("c must be nonnegative")
    if min(r, s, t) <= 0:
        raise PotentialError("parameters must be positive")
    if c == 0:
        return 10.0 * math.hypot(2 * r + s, t)
    S = 4 * r * r + s * s + t * t
    h = c + math.sqrt(4 * r * r * s * s + S * c + c * c)
    W = math.sqrt(S + 2 * h)
    rc = math.sqrt(c)
    return 10.0 * (W + rc * math.log(4 * r * s) - rc * math.log(h + rc * W))


def so7_potential_zeta(z1, z2, z3, c=0.0):
    """The same family in terms of zeta1, zeta2, zeta3.

    With Q = z1^2 - z2 - 2 z3, h = c + sqrt(Q/4 + c (z1/2 + sqrt(z3)) + c^2)
    and U = sqrt(z1 + 2 sqrt(z3) + 4h):
    rho = (10/sqrt 2)(U - sqrt(2c) log((h + sqrt(c/2) U) / sqrt(Q))).
    """
    if c < 0:
        raise PotentialError("c must be nonnegative")
    Q = z1 * z1 - z2 - 2 * z3
    if Q < -1e-12 * max(1.0, z1 * z1) or z3 < 0:
        raise PotentialError("inconsistent zeta triple")
    Q = max(Q, 0.0)
    rz3 = math.sqrt(z3)
    h = c + math.sqrt(Q / 4 + c * (z1 / 2 + rz3) + c * c)
    U = math.sqrt(z1 + 2 * rz3 + 4 * h)
    if c == 0:
        return 10.0 / math.sqrt(2) * U
    return 10.0 / math.sqrt(2) * (U - math.sqrt(2 * c) * math.log((h + math.sqrt(c / 2) * U) / math.sqrt(Q)))


def so7_zetas_from_params(r, s, t):
    return (4 * r * r + 2 * s * s + 2 * t * t,
            4 * (2 * r**4 + 4 * r * r * t * t + (s * s + t * t) ** 2),
            4 * r**4)


def so7_params_from_zetas(z1, z2, z3):
    r = (z3 / 4) ** 0.25
    q = (z1 - 4 * r * r) / 2
    t2 = (z2 / 4 - 2 * r**4 - q * q) / (4 * r * r)
    t2 = min(max(t2, 0.0), q)
    return (r, math.sqrt(q - t2), math.sqrt(t2))


# -- invariant charts ---------------------------------------------------------
# eta as polynomials in (x, y, z) = (r^2, s^2, t^2), with gradient and Hessian.

class _GenericChart:
    nparams = 3

    def __init__(self, k2):
        self.k2 = float(k2)

    def xyz(self, v):
        x, y, z = v
        out = []
        for i in (1, 2, 3):
            f = 2 ** (i + 1) * self.k2
            val = f * (x**i + y**i + z**i)
            g = f * i * np.array([x ** (i - 1), y ** (i - 1), z ** (i - 1)])
            H = np.diag(f * i * (i - 1) * np.array([x, y, z]) ** max(i - 2, 0)) if i > 1 else np.zeros((3, 3))
            out.append((val, g, H))
        return out


class _SO7Chart:
    nparams = 3

    def xyz(self, v):
        x, y, z = v
        q = y + z
        e1 = (10 * (2 * x + y + z), np.array([20.0, 10.0, 10.0]), np.zeros((3, 3)))
        g2 = 20 * np.array([4 * x + 4 * z, 2 * q, 4 * x + 2 * q])
        H2 = 20 * np.array([[4.0, 0, 4], [0, 2, 2], [4, 2, 2]])
        e2 = (20 * (2 * x * x + 4 * x * z + q * q), g2, H2)
        g3 = 40 * np.array([6 * x * x + 18 * x * z + 6 * z * q,
                            6 * x * z + 3 * q * q,
                            9 * x * x + 6 * x * q + 6 * x * z + 3 * q * q])
        H3 = 40 * np.array([[12 * x + 18 * z, 6 * z, 18 * x + 6 * q + 6 * z],
                            [6 * z, 6 * q, 6 * x + 6 * q],
                            [18 * x + 6 * q + 6 * z, 6 * x + 6 * q, 12 * x + 6 * q]])
        e3 = (40 * (2 * x**3 + 9 * x * x * z + 6 * x * z * q + q**3), g3, H3)
        return [e1, e2, e3]


class _SL2Chart:
    nparams = 1

    def __init__(self, k2):
        self.k2 = float(k2)

    def xyz(self, v):
        (x,) = v
        return [(4 * self.k2 * x, np.array([4 * self.k2]), np.zeros((1, 1)))]


def eta_chart(chart, params):
    """eta, d eta / d params (rows eta_i) and Hessians in the (r, s, t) variables."""
    p = np.asarray(params, dtype=float)
    data = chart.xyz(p * p)
    etas = np.array([d[0] for d in data])
    jac = np.array([2 * p * d[1] for d in data])
    hess = []
    for _, g, H in data:
        # d2/dp_a dp_b of f(p^2) = 4 p_a p_b f_ab + 2 delta_ab f_a
        hess.append(4 * np.outer(p, p) * H + np.diag(2 * g))
    return etas, jac, np.array(hess)


@dataclass(frozen=True)
class PotentialSpec:
    kind: str
    k_squared: Fraction | float = Fraction(1)
    c: float = 0.0

    def __post_init__(self):
        kind = self.kind.upper()
        if kind not in KINDS:
            raise PotentialError(f"unknown potential kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if self.c < 0:
            raise PotentialError("c must be nonnegative")
        if kind == "SO7":
            object.__setattr__(self, "k_squared", Fraction(5, 2))

    @property
    def chart(self):
        if self.kind == "GENERIC":
            return _GenericChart(self.k_squared)
        if self.kind == "SO7":
            return _SO7Chart()
        return _SL2Chart(self.k_squared)

    def value(self, *params):
        if self.kind == "GENERIC":
            return generic_potential(*params, self.k_squared, self.c)
        if self.kind == "SO7":
            return so7_potential(*params, self.c)
        (s,) = params
        return factor_potential(s, self.k_squared, self.c)

    def params_from_matrix(self, alg, X):
        """Parameters of a point of the orbit, recovered from its invariants."""
        from .invariants import etas_matrix, zetas_matrix
        if self.kind == "SO7":
            return so7_params_from_zetas(*zetas_matrix(X))
        eta = etas_matrix(alg, X)
        if self.kind == "GENERIC":
            return params_from_eta_generic(eta, self.k_squared)
        return (math.sqrt(eta[0] / (4 * float(self.k_squared))),)

    def value_at_matrix(self, alg, X):
        """rho at an arbitrary point of the orbit (a raw matrix)."""
        if self.kind == "SO7":
            from .invariants import zetas_matrix
            return so7_potential_zeta(*zetas_matrix(X), self.c)
        return self.value(*self.params_from_matrix(alg, X))


def so7_pde_residuals(c, r, s, t, potential=None, richardson=True):
    """Residuals of the so(7) system at (r, s, t), using FD partials of rho.

    Returns a list of (name, scaled residual); the four product equations
    come first, then the two first-order equations, their combination, the
    two gradient laws and the closed form of rho_t.  ``potential``
    overrides the family (for falsification probes).
    """
    f = potential if potential is not None else (lambda a, b, d: so7_potential(a, b, d, c))
    g, H = fd_grad_hess(f, (r, s, t), richardson=richardson)
    pr, ps, pt = g
    prr, prs, prt = H[0]
    pst = H[1, 2]
    ptt = H[2, 2]
    S = 4 * r * r + s * s + t * t
    rt = math.sqrt(4 * r * r * s * s + c * S + c * c)
    # (name, lhs, rhs); residuals are scaled by max(1, |lhs| + |rhs|)
    eqs = [
        ("mixed_rs", ps * prs, -pt * prt),
        ("mixed_st", ps * pst, -pt * ptt),
        ("mixed_rs4", pr * prs, -4 * pt * pst),
        ("mixed_rt4", pr * prt, -4 * pt * ptt),
        ("first_a", t * (100 - pt * pt), (r * pr + s * ps) * pt),
        ("first_b", t * (r * pr - s * ps), (4 * r * r - s * s) * pt),
        ("combination", s * s * (ps * ps + pt * pt - 100), r * r * (pr * pr + 4 * pt * pt - 400)),
        ("grad_st", ps * ps + pt * pt, 100 * (1 + c / (s * s))),
        ("grad_rt", pr * pr + 4 * pt * pt, 100 * (4 + c / (r * r))),
        ("rho_t", 50 * t * t / (pt * pt), rt + c + S / 2),
    ]
    out = [(name, abs(lhs - rhs) / max(1.0, abs(lhs) + abs(rhs))) for name, lhs, rhs in eqs]
    return out


def fd_grad_hess(f, params, h1=None, h2=None, richardson=True):
    """Central-difference gradient and Hessian of f at params.

    Steps are relative to the parameter magnitudes.  With ``richardson`` a
    single extrapolation step (h, h/2) is applied and larger base steps are
    used.
    """
    p = np.asarray(params, dtype=float)
    n = p.size
    if h1 is None:
        h1 = 1e-3 if richardson else DEFAULT.h_first
    if h2 is None:
        h2 = 1e-2 if richardson else DEFAULT.h_second
    sc = np.maximum(np.abs(p), 1e-3)

    def grad(h):
        g = np.zeros(n)
        for i in range(n):
            e = np.zeros(n)
            e[i] = h * sc[i]
            g[i] = (f(*(p + e)) - f(*(p - e))) / (2 * e[i])
        return g

    def hess(h):
        H = np.zeros((n, n))
        f0 = f(*p)
        for i in range(n):
            ei = np.zeros(n)
            ei[i] = h * sc[i]
            H[i, i] = (f(*(p + ei)) - 2 * f0 + f(*(p - ei))) / ei[i] ** 2
            for j in range(i + 1, n):
                ej = np.zeros(n)
                ej[j] = h * sc[j]
                v = (f(*(p + ei + ej)) - f(*(p + ei - ej)) - f(*(p - ei + ej)) + f(*(p - ei - ej)))
                H[i, j] = H[j, i] = v / (4 * ei[i] * ej[j])
        return H

    if richardson:
        return (4 * grad(h1 / 2) - grad(h1)) / 3, (4 * hess(h2 / 2) - hess(h2)) / 3
    return grad(h1), hess(h2)

"""Command-line front end: one report per check, text or JSON lines."""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import potentials as pt
from .cohomogeneity import CLASSICAL_TABLE, cartan_to_matrix, cohomogeneity
from .invariants import InvariantError, etas_matrix, k_squared, zetas_matrix
from .kahler import GeometryError, verify_hyperkahler
from .lie import AlgebraError
from .orbits import OrbitError, orbit_spec, parse_partition, representative, scaled_point
from .reports import FAIL, CheckReport
from .standard_forms import FormError, random_unitary, skew_standard, svd_complex, takagi
from .tables import KINDS as TABLE_KINDS, emit_table

USER_ERRORS = (AlgebraError, OrbitError, InvariantError, GeometryError, pt.PotentialError, FormError,
               ValueError)


def _floats(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from exc


def _spec(args):
    if args.algebra is None or args.n is None or args.orbit is None:
        raise OrbitError("--algebra, --n and --orbit are required")
    return orbit_spec(args.algebra, args.n, args.orbit)


def _random_params(rng, k):
    # pairwise distinct by construction: sorted offsets from one draw
    base = rng.uniform(0.4, 1.6)
    return tuple(base + 0.3 * i + rng.uniform(0.0, 0.1) for i in range(k))


def _inputs(args, **extra):
    d = {}
    for key in ("algebra", "n", "orbit", "params", "c", "seed"):
        v = getattr(args, key, None)
        if v is not None:
            d[key] = list(v) if isinstance(v, tuple) else v
    d.update(extra)
    return d


# -- commands ------------------------------------------------------------------

def cmd_verify_triples(args):
    spec = _spec(args)
    T = representative(spec)
    res = T.residuals()
    tol = 1e-10 if args.tol is None else args.tol
    return [CheckReport("verify-triples", _inputs(args), res, tol,
                        paper_anchor="standard triple relations of the listed representative")]


def _chart_etas(spec, params):
    alg = spec.algebra
    if spec.kind == "generic":
        chart = pt._GenericChart(k_squared(alg.family, alg.n))
    elif spec.kind == "so7":
        chart = pt._SO7Chart()
    elif spec.kind == "sl2":
        chart = pt._SL2Chart(k_squared("SL", 2))
    else:
        raise OrbitError(f"no closed-form invariants for {spec.describe()}")
    etas = pt.eta_chart(chart, params)[0]
    if spec.kind == "so7":
        # the so(7) polynomials scale with the Killing normalization kappa = n - 2
        etas = etas * alg.killing_scale / 5.0
    return etas


def cmd_invariants(args):
    spec = _spec(args)
    params = args.params
    if params is None:
        params = _random_params(np.random.default_rng(args.seed), 1 if spec.kind == "sl2" else 3)
    P = scaled_point(spec, *params)
    got = etas_matrix(spec.algebra, P.X)
    want = _chart_etas(spec, params)
    res = {f"eta{i + 1}": abs(g - w) / max(abs(w), 1e-300) for i, (g, w) in enumerate(zip(got, want))}
    if spec.kind == "so7" and spec.algebra.n == 7:
        zg = zetas_matrix(P.X)
        zw = pt.so7_zetas_from_params(*params)
        res.update({f"zeta{i + 1}": abs(g - w) / max(abs(w), 1e-300) for i, (g, w) in enumerate(zip(zg, zw))})
    tol = 1e-9 if args.tol is None else args.tol
    inputs = _inputs(args, params=list(params), eta=[float(v) for v in got])
    return [CheckReport("invariants", inputs, res, tol,
                        paper_anchor="invariant functions eta_i at the scaled orbit points")]


def cmd_potential(args):
    fam = args.family
    params = args.params
    c = args.c or 0.0
    if params is None:
        raise OrbitError("--params is required")
    if fam == "so7":
        if len(params) != 3:
            raise OrbitError("so7 takes r,s,t")
        val = pt.so7_potential(*params, c)
        zval = pt.so7_potential_zeta(*pt.so7_zetas_from_params(*params), c)
        res = {"rst_vs_zeta": abs(val - zval) / abs(val)}
        anchor = "so(7) one-parameter family, (r,s,t) form against the zeta form"
        k2 = 2.5
    else:
        if args.k2 is not None:
            k2 = args.k2
        elif args.algebra is not None and args.n is not None:
            k2 = float(k_squared(args.algebra, args.n))
        else:
            raise OrbitError("give --k2 or --algebra/--n to fix k^2")
        if fam == "generic":
            if len(params) != 3:
                raise OrbitError("generic takes r,s,t")
            val = pt.generic_potential(*params, k2, c)
        else:
            if len(params) != 1:
                raise OrbitError("sl2 takes s")
            val = pt.factor_potential(params[0], k2, c)
        # per-factor ODE rho_s^2 = 16 k^4 + c / s^2, by central differences
        res = {}
        for i, s in enumerate(params):
            h = 1e-5 * s
            d = (pt.factor_potential(s + h, k2, c) - pt.factor_potential(s - h, k2, c)) / (2 * h)
            exact = pt.factor_potential_derivative(s, k2, c)
            res[f"factor_ode_{i}"] = abs(d - exact) / exact
        if fam == "generic" and c == 0:
            eta = [2 ** (i + 1) * k2 * sum(p ** (2 * i) for p in params) for i in (1, 2, 3)]
            ch = pt.kappa_chain(*eta, k2)
            res["kappa_chain"] = abs(ch.rho - val) / abs(val)
        anchor = "explicit potential and its per-factor ODE"
    tol = 1e-8 if args.tol is None else args.tol
    inputs = _inputs(args, family=fam, params=list(params), k_squared=k2, value=val)
    return [CheckReport("potential", inputs, res, tol, paper_anchor=anchor)]


def _potential_for(spec, c):
    alg = spec.algebra
    if spec.kind == "generic":
        return pt.PotentialSpec("GENERIC", k_squared(alg.family, alg.n), c)
    if spec.kind == "so7" and alg.n == 7:
        return pt.PotentialSpec("SO7", c=c)
    if spec.kind == "sl2":
        return pt.PotentialSpec("SL2_FACTOR", k_squared("SL", 2), c)
    raise OrbitError(f"no potential implemented for {spec.describe()}")


def cmd_check_hk(args):
    spec = _spec(args)
    c = args.c or 0.0
    pot = _potential_for(spec, c)
    rng = np.random.default_rng(args.seed)
    params = args.params or _random_params(rng, 1 if spec.kind == "sl2" else 3)
    P = scaled_point(spec, *params)
    tol = 1e-5 if args.tol is None else args.tol
    rep = verify_hyperkahler(pot, P, tol=tol, rng=rng)
    rep.inputs["seed"] = args.seed
    return [rep]


def cmd_pde_so7(args):
    c = args.c or 0.0
    rng = np.random.default_rng(args.seed)
    params = args.params or _random_params(rng, 3)
    if len(params) != 3:
        raise OrbitError("pde-so7 takes r,s,t")
    res = dict(pt.so7_pde_residuals(c, *params))
    tol = 1e-6 if args.tol is None else args.tol
    return [CheckReport("pde-so7", _inputs(args, params=list(params), c=c), res, tol,
                        paper_anchor="so(7) PDE system for the potential")]


def _expected_cohom(spec):
    alg = spec.algebra
    for letter, rank, part, expected in CLASSICAL_TABLE:
        fam, n = cartan_to_matrix(letter, rank)
        if fam == alg.family and n == alg.n and part == spec.label:
            return expected
    return None


def cmd_cohomogeneity(args):
    spec = _spec(args)
    r = cohomogeneity(spec, args.samples, args.seed)
    expected = _expected_cohom(spec)
    res = {} if expected is None else {"abs_diff_from_table": abs(r.cohomogeneity - expected)}
    inputs = _inputs(args, samples=args.samples, dim_C_orbit=r.dim_C_orbit,
                     compact_orbit_dim=r.compact_orbit_dim, cohomogeneity=r.cohomogeneity,
                     expected=expected)
    tol = 0.0 if args.tol is None else args.tol
    return [CheckReport("cohomogeneity", inputs, res, tol,
                        paper_anchor="cohomogeneity of the compact group on the orbit")]


def cmd_tables(args):
    kinds = ["classical"] if args.classical else [args.kind or "classical"]
    reports = []
    for kind in kinds:
        for row in emit_table(kind, args.samples, args.seed):
            inputs = {"table": kind, "type": row.type, "orbit": row.orbit,
                      "expected": row.expected, "computed": row.computed}
            res = {} if not row.computable else {"mismatch": 0.0 if row.matches else 1.0}
            reports.append(CheckReport(f"tables:{kind}", inputs, res, 0.0,
                                       paper_anchor="reference table row"))
    return reports


def cmd_standard_form(args):
    rng = np.random.default_rng(args.seed)
    n = args.n or 4
    kind = args.kind
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    if kind == "takagi":
        Z, f = G + G.T, takagi
        act = lambda M: (lambda g: g @ M @ g.T)(random_unitary(n, rng))
    elif kind == "skew":
        Z, f = G - G.T, skew_standard
        act = lambda M: (lambda g: g @ M @ g.T)(random_unitary(n, rng))
    else:
        Z, f = G, svd_complex
        act = lambda M: random_unitary(n, rng) @ M @ random_unitary(n, rng)
    R = f(Z)
    inv = max(float(np.max(np.abs(f(act(Z)).invariants - R.invariants))) for _ in range(5))
    res = {"reconstruction": R.residual / (1 + np.linalg.norm(Z)), "invariance": inv}
    tol = 1e-8 if args.tol is None else args.tol
    return [CheckReport("standard-form", {"kind": kind, "n": n, "seed": args.seed}, res, tol,
                        paper_anchor="unitary normal forms of complex matrices")]


COMMANDS = {
    "verify-triples": cmd_verify_triples,
    "invariants": cmd_invariants,
    "potential": cmd_potential,
    "check-hk": cmd_check_hk,
    "pde-so7": cmd_pde_so7,
    "cohomogeneity": cmd_cohomogeneity,
    "tables": cmd_tables,
    "standard-form": cmd_standard_form,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", type=str.upper, choices=["SL", "SO", "SP"])
    common.add_argument("--n", type=int)
    common.add_argument("--orbit", type=parse_partition)
    common.add_argument("--params", type=_floats)
    common.add_argument("--c", type=float)
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--json", action="store_true")
    common.add_argument("--samples", type=int, default=5)

    p = argparse.ArgumentParser(prog="hkorbits", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "potential":
            sp.add_argument("--family", choices=["generic", "so7", "sl2"], required=True)
            sp.add_argument("--k2", type=float)
        elif name == "tables":
            sp.add_argument("--classical", action="store_true")
            sp.add_argument("--kind", choices=TABLE_KINDS)
        elif name == "standard-form":
            sp.add_argument("--kind", choices=["takagi", "skew", "svd"], default="takagi")
    return p


def run_command(argv, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.c is not None and (args.c < 0 or not math.isfinite(args.c)):
        print("error: --c must be a nonnegative real", file=sys.stderr)
        return 2
    try:
        reports = COMMANDS[args.command](args)
    except USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for rep in reports:
        print(rep.to_json() if args.json else rep.to_text(), file=out)
    return 1 if any(r.status == FAIL for r in reports) else 0


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()

"""Command-line front end.

Every command emits a single JSON report (sorted keys, schema version 1)
and re-checks its own certificate before exiting 0.  Exit codes: 0 success,
1 parse or input error, 2 precondition violation, 3 certificate open at the
configured pipeline depth.  Deterministic commands produce byte-identical
reports across runs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import linalg, minkowski, optimizer, units, wellposed
from .arithdiv import (
    ArithmeticDivisor,
    deg_arith,
    deg_finite,
    is_effective,
    principal_divisor,
    sup_norm,
    PowerProduct,
)
from .capacity import TorusFunction, pairing
from .errors import ArithCurveError, UndecidedAtDepth
from .quadfield import abs_embed, make_field
from . import serialize

SCHEMA = 1


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _emit(report: dict, args) -> int:
    report["schema"] = SCHEMA
    indent = 2 if getattr(args, "pretty", False) else None
    out = json.dumps(report, sort_keys=True, indent=indent)
    path = getattr(args, "out", None)
    if path:
        with open(path, "w") as fh:
            fh.write(out + "\n")
    print(out)
    return 0


def _field_from_args(args):
    if getattr(args, "m", None) is not None:
        return make_field(args.m)
    return serialize.field_from_json(_load_json(args.field))


# ---------------------------------------------------------------------------
# command handlers


def cmd_field(args) -> int:
    F = _field_from_args(args)
    return _emit(serialize.field_to_json(F), args)


def cmd_divisor(args) -> int:
    F = _field_from_args(args)
    div = serialize.divisor_from_json(F, _load_json(args.divisor))
    report = {
        "deg_finite": deg_finite(div.coeffs),
        "deg_arith": deg_arith(div),
        "effective": is_effective(div, args.tol_effectivity),
        "divisor": serialize.divisor_to_json(div),
    }
    return _emit(report, args)


def cmd_units(args) -> int:
    F = _field_from_args(args)
    if args.units_cmd == "fundamental":
        ug = units.unit_group(F)
        report = {
            "torsion_order": ug.torsion_order,
            "torsion_generator": serialize.element_to_json(ug.torsion_generator),
            "fundamental": (
                serialize.element_to_json(ug.fundamental) if ug.fundamental else None
            ),
        }
        if ug.fundamental:
            report["log_embedding"] = list(
                map(math.log, abs_embed(F, ug.fundamental))
            )
        return _emit(report, args)
    xi = tuple(float(v) for v in args.xi.split(","))
    combo = units.dirichlet_realize(F, xi)
    residual = 0.0
    for s in (0, 1):
        recon = sum(a * math.log(abs_embed(F, u)[s]) for u, a in combo)
        residual = max(residual, abs(xi[s] - recon))
    if residual > 1e-10:
        raise ArithCurveError(f"realization residual {residual:.3e} too large")
    report = {
        "xi": list(xi),
        "combination": [
            {"unit": serialize.element_to_json(u), "exponent": a} for u, a in combo
        ],
        "residual": residual,
    }
    return _emit(report, args)


def cmd_classgroup(args) -> int:
    F = _field_from_args(args)
    h, reps = minkowski.class_group(F, bound=args.bound)
    report = {
        "h": h,
        "representatives": [serialize.divisor_to_json(E) for E in reps],
    }
    return _emit(report, args)


def cmd_theta(args) -> int:
    F = _field_from_args(args)
    theta = minkowski.enumerate_theta(F)
    ck = minkowski.minkowski_constant(F)
    report = {
        "c_k": ck.value,
        "divisors": [serialize.divisor_to_json(E) for E in theta.divisors],
    }
    return _emit(report, args)


def cmd_shortsec(args) -> int:
    F = _field_from_args(args)
    div = serialize.divisor_from_json(F, _load_json(args.divisor))
    x = minkowski.short_section(div, tol=args.tol_effectivity)
    final = div + principal_divisor(PowerProduct.of(x))
    if not is_effective(final, args.tol_effectivity):
        raise ArithCurveError("certificate failed: section is not effective")
    cert = max(
        math.log(abs_embed(F, x)[s]) - div.green[s] / 2.0 for s in (0, 1)
    )
    report = {
        "element": serialize.element_to_json(x),
        "norm": str(x.norm()),
        "log_sup_norm": cert,
        "effective": True,
    }
    return _emit(report, args)


def cmd_minimize(args) -> int:
    F = serialize.field_from_json(_load_json(args.field))
    div = serialize.divisor_from_json(F, _load_json(args.divisor))
    gens = serialize.gens_from_json(F, _load_json(args.gens))
    problem = optimizer.build_problem(div, gens)
    sol = optimizer.minimize_sup(problem, tol=args.tol_lp)
    report = {
        "a_star": [float(v) for v in sol.a_star],
        "log_value": sol.log_value,
        "value": sol.value,
        "active_set": sol.active_set,
        "residuals": sol.residuals,
    }
    return _emit(report, args)


def cmd_pipeline(args) -> int:
    F = _field_from_args(args)
    div = serialize.divisor_from_json(F, _load_json(args.divisor))
    result = optimizer.smallest_section_pipeline(
        div, depth=args.depth, tol=args.tol_lp, threads=args.threads
    )
    psi_div = div + principal_divisor(result.psi)
    if not is_effective(psi_div, max(args.tol_effectivity, 2 * args.tol_lp)):
        raise ArithCurveError("certificate failed: psi does not make div effective")
    report = {
        "psi": serialize.power_product_to_json(result.psi),
        "log_value": result.solution.log_value,
        "sigma": [{"p": P.p, "index": P.index} for P in result.sigma],
        "depth": result.depth,
        "residuals": result.solution.residuals,
    }
    return _emit(report, args)


def cmd_decide(args) -> int:
    F = _field_from_args(args)
    div = serialize.divisor_from_json(F, _load_json(args.divisor))
    decision = optimizer.decide_pseudoeffective(
        div, depth=args.depth, tol=args.tol_lp, threads=args.threads
    )
    report = {
        "status": decision.status,
        "deg_arith": decision.degree,
        "witness": (
            serialize.power_product_to_json(decision.witness)
            if decision.witness is not None
            else None
        ),
        "residual": decision.residual,
    }
    return _emit(report, args)


def cmd_linalg(args) -> int:
    data = _load_json(args.input)
    if args.linalg_cmd == "zariski":
        result = linalg.zariski_classify(data["q"], data["a"])
        report = {
            "kind": result.kind,
            "detail": result.detail,
            "kernel": list(result.kernel) if result.kernel is not None else None,
        }
    elif args.linalg_cmd == "balance":
        x = linalg.balance_fiber(data["q"], data["a"], data["rhs"])
        report = {"x": [str(v) for v in x]}
    else:  # gram
        vectors = data["vectors"]
        report = {"vol": linalg.gramian_vol(vectors, data.get("metric"))}
    return _emit(report, args)


def cmd_capacity(args) -> int:
    f = TorusFunction(np.loadtxt(args.f, delimiter=","))
    g = TorusFunction(np.loadtxt(args.g, delimiter=","))
    if args.n and f.n != args.n:
        raise ArithCurveError(f"grid is {f.n}, expected {args.n}")
    value = pairing(f, g)
    report = {"value": value, "n": f.n}
    return _emit(report, args)


def cmd_wellposed(args) -> int:
    model = serialize.model_from_json(_load_json(args.model))
    if args.wellposed_cmd == "report":
        rep = wellposed.wellposed_report(
            model, range(1, args.n + 1), quad_tol=args.tol_quadrature
        )
        report = {
            "n_values": rep.n_values,
            "basis_ok": rep.basis_ok,
            "lattice_index": rep.lattice_index,
            "min_sin_theta": rep.min_sin_theta,
            "min_sin_root": rep.min_sin_root,
            "liminf_estimate": rep.liminf_estimate,
            "conditions": rep.conditions,
            "note": rep.note,
        }
    else:  # scan
        scan = wellposed.smallest_monomial_scan(model, args.n)
        report = {
            "k_star": scan.k_star,
            "integer_norm": scan.integer_norm,
            "x_star": scan.x_star,
            "real_norm": scan.real_norm,
        }
    return _emit(report, args)


# ---------------------------------------------------------------------------
# argument parsing


def _add_tolerances(p: argparse.ArgumentParser):
    p.add_argument("--tol-effectivity", type=float, default=1e-9)
    p.add_argument("--tol-lp", type=float, default=1e-8)
    p.add_argument("--tol-quadrature", type=float, default=1e-11)
    p.add_argument("--pretty", action="store_true")
    p.add_argument("--out", default=None)


def _add_field_arg(p: argparse.ArgumentParser, file_ok: bool = True):
    p.add_argument("--m", type=int, default=None, help="squarefree integer")
    if file_ok:
        p.add_argument("--field", default=None, help="field descriptor JSON")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="arithcurve")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field")
    _add_field_arg(p)
    _add_tolerances(p)
    p.set_defaults(handler=cmd_field)

    p = sub.add_parser("divisor")
    _add_field_arg(p)
    p.add_argument("--divisor", required=True)
    _add_tolerances(p)
    p.set_defaults(handler=cmd_divisor)

    p = sub.add_parser("units")
    usub = p.add_subparsers(dest="units_cmd", required=True)
    pf = usub.add_parser("fundamental")
    _add_field_arg(pf)
    _add_tolerances(pf)
    pf.set_defaults(handler=cmd_units)
    pr = usub.add_parser("realize")
    _add_field_arg(pr)
    pr.add_argument("--xi", required=True, help="comma-separated components")
    _add_tolerances(pr)
    pr.set_defaults(handler=cmd_units)

    p = sub.add_parser("classgroup")
    _add_field_arg(p)
    p.add_argument("--bound", type=int, default=500)
    _add_tolerances(p)
    p.set_defaults(handler=cmd_classgroup)

    p = sub.add_parser("theta")
    _add_field_arg(p)
    _add_tolerances(p)
    p.set_defaults(handler=cmd_theta)

    p = sub.add_parser("shortsec")
    _add_field_arg(p)
    p.add_argument("--divisor", required=True)
    _add_tolerances(p)
    p.set_defaults(handler=cmd_shortsec)

    p = sub.add_parser("minimize")
    p.add_argument("--field", required=True)
    p.add_argument("--divisor", required=True)
    p.add_argument("--gens", required=True)
    _add_tolerances(p)
    p.set_defaults(handler=cmd_minimize)

    for name, handler in (("pipeline", cmd_pipeline), ("decide", cmd_decide)):
        p = sub.add_parser(name)
        _add_field_arg(p)
        p.add_argument("--divisor", required=True)
        p.add_argument("--depth", type=int, default=8)
        p.add_argument(
            "--threads",
            type=int,
            default=int(os.environ.get("ARAKELOV_THREADS", "1")),
        )
        _add_tolerances(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("linalg")
    lsub = p.add_subparsers(dest="linalg_cmd", required=True)
    for name in ("zariski", "balance", "gram"):
        pl = lsub.add_parser(name)
        pl.add_argument("--input", required=True)
        _add_tolerances(pl)
        pl.set_defaults(handler=cmd_linalg)

    p = sub.add_parser("capacity")
    csub = p.add_subparsers(dest="capacity_cmd", required=True)
    pc = csub.add_parser("pair")
    pc.add_argument("--n", type=int, default=None)
    pc.add_argument("--f", required=True)
    pc.add_argument("--g", required=True)
    _add_tolerances(pc)
    pc.set_defaults(handler=cmd_capacity)

    p = sub.add_parser("wellposed")
    wsub = p.add_subparsers(dest="wellposed_cmd", required=True)
    for name in ("report", "scan"):
        pw = wsub.add_parser(name)
        pw.add_argument("--model", required=True)
        pw.add_argument("--n", type=int, required=True)
        _add_tolerances(pw)
        pw.set_defaults(handler=cmd_wellposed)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.handler(args)
    except UndecidedAtDepth as exc:
        print(json.dumps({"schema": SCHEMA, "status": "UNDECIDED-AT-DEPTH",
                          "depth": exc.depth, "log_value": exc.log_value},
                         sort_keys=True))
        return 3
    except ArithCurveError as exc:
        print(json.dumps({"schema": SCHEMA, "error": str(exc)}, sort_keys=True))
        return 2
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(json.dumps({"schema": SCHEMA, "error": f"input: {exc}"},
                         sort_keys=True))
        return 1


if __name__ == "__main__":
    sys.exit(main())

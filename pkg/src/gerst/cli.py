"""Command-line entry point.

Subcommands:
  hh      <algebra.json> --kmax K [--window W]   Hochschild dimension table
  verify  <suite> [--config file] [--seed S]     run a named identity suite
  deform  <algebra.json> --mc <file|moyal> --order N   deformed product checks

Global flags: --field Q|Fp:p selects the scalar field, --pretty renders a
table instead of JSON.  GERST_THREADS caps check-level parallelism in
suites.  Exit code is the number of failed checks.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .fields import QQ, GerstError, field_by_name
from .algebra import Algebra, _fmt_exact, load_algebra, polynomial_algebra
from .cochains import Cochain, cohomology, dense_cohomology_dims
from .mc import (StarProduct, TCochain, defect_matches_residual, mc_residual,
                 moyal_parameter, star_table)
from .report import RunReport
from .suites import full_config, run_suite


def _check(name, fn):
    """Run one check body; the body returns (ok, detail)."""
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except GerstError as exc:
        ok, detail = False, "error: %s" % exc
    ms = (time.perf_counter() - t0) * 1000.0
    return {"name": name, "status": "pass" if ok else "fail",
            "detail": detail, "ms": ms}


def _load_algebra_file(path: str, field) -> Algebra:
    """Load an algebra from JSON: either a full table or a descriptor
    {"polynomial": {"nvars": d, "weight_cap": w, "var_names": [...]}}."""
    with open(path) as fh:
        data = json.load(fh)
    if "polynomial" in data:
        p = data["polynomial"]
        return polynomial_algebra(p["nvars"], p["weight_cap"], field,
                                  var_names=p.get("var_names"))
    return Algebra.from_json(data, field=field, name=str(path))


# -- hh ------------------------------------------------------------------


def cmd_hh(args, field) -> RunReport:
    config = {"file": args.file, "kmax": args.kmax, "window": args.window,
              "field": field.name}
    checks = []
    try:
        A = _load_algebra_file(args.file, field)
    except json.JSONDecodeError as exc:
        checks.append({"name": "algebra-table", "status": "fail", "ms": 0.0,
                       "detail": "parse error: %s at line %d column %d"
                       % (exc.msg, exc.lineno, exc.colno)})
        return RunReport(["hh"], config, checks)
    except GerstError as exc:
        checks.append({"name": "algebra-table", "status": "fail", "ms": 0.0,
                       "detail": "validation error: %s" % exc})
        return RunReport(["hh"], config, checks)
    checks.append({"name": "algebra-table", "status": "pass", "ms": 0.0,
                   "detail": "associative unital table, dim %d" % A.dim})
    normalized = A.unit_index is not None
    window = args.window if args.window is not None else 500000
    dims = []

    def dim_table():
        for k in range(args.kmax + 1):
            dims.append(cohomology(A, k, normalized=normalized,
                                   max_space=window).dim_hh)
        return True, "HH dims degrees 0..%d: %s" % (args.kmax, dims)
    checks.append(_check("hh-dimension-table", dim_table))

    def oracle():
        if len(dims) != args.kmax + 1:
            return False, "skipped: dimension table unavailable"
        for k in range(args.kmax + 1):
            d = dense_cohomology_dims(A, k, normalized=normalized)[2]
            if d != dims[k]:
                return False, "dense oracle disagrees at degree %d: " \
                    "%d vs %d" % (k, d, dims[k])
        return True, "dense elimination oracle agrees"
    checks.append(_check("hh-dense-oracle", oracle))
    artifacts = {"hh_dims": dims, "normalized": normalized} if dims else None
    return RunReport(["hh"], config, checks, artifacts)


# -- verify ----------------------------------------------------------------


def cmd_verify(args, field) -> RunReport:
    overrides = {}
    if args.config:
        with open(args.config) as fh:
            overrides.update(json.load(fh))
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.field is not None:
        overrides["field"] = field.name
    cfg = full_config(overrides)
    config = dict(cfg)
    config["suite"] = args.suite
    config["threads"] = os.environ.get("GERST_THREADS", "1")
    try:
        checks = run_suite(args.suite, overrides)
    except GerstError as exc:
        checks = [{"name": "suite-lookup", "status": "fail", "ms": 0.0,
                   "detail": str(exc)}]
    return RunReport(["verify", args.suite], config, checks)


# -- deform ------------------------------------------------------------------


def _load_mc(path: str, A: Algebra, order: int) -> TCochain:
    """Deformation parameter JSON: {"arity": 2, "entries":
    [[args...], out, "num/den", t_power]} (cochain entries tagged with the
    power of t they multiply)."""
    with open(path) as fh:
        data = json.load(fh)
    if data.get("arity") != 2:
        raise GerstError("deformation parameter must have arity 2")
    terms = {}
    for arg_list, out, coeff, power in data["entries"]:
        if not 1 <= power < order:
            raise GerstError("t-power %d outside 1..%d" % (power, order - 1))
        terms.setdefault(power, {}).setdefault(
            tuple(arg_list), {})[out] = A.field.of(coeff)
    return TCochain(A, 2, order,
                    {p: Cochain(A, 2, entries)
                     for p, entries in terms.items()})


def cmd_deform(args, field) -> RunReport:
    config = {"file": args.file, "mc": args.mc, "order": args.order,
              "field": field.name}
    checks = []
    artifacts = {}
    try:
        A = _load_algebra_file(args.file, field)
        if args.mc == "moyal":
            if field is not QQ:
                raise GerstError("the Moyal generator is rational; "
                                 "use --field Q")
            lam = moyal_parameter(A, args.order)
        else:
            lam = _load_mc(args.mc, A, args.order)
    except json.JSONDecodeError as exc:
        checks.append({"name": "inputs", "status": "fail", "ms": 0.0,
                       "detail": "parse error: %s at line %d column %d"
                       % (exc.msg, exc.lineno, exc.colno)})
        return RunReport(["deform"], config, checks)
    except GerstError as exc:
        checks.append({"name": "inputs", "status": "fail", "ms": 0.0,
                       "detail": "validation error: %s" % exc})
        return RunReport(["deform"], config, checks)

    sp = StarProduct(A, lam)
    res = mc_residual(lam)
    bound = res.bound()

    def residual():
        if res.is_zero():
            return True, "residual 0 mod t^%d" % args.order
        p = min(k for k, c in res.terms.items() if not c.is_zero())
        coch = res.term(p)
        trip = sorted(coch.entries)[0]
        out = sorted(coch.entries[trip])[0]
        return False, "nonzero residual at t^%d, args %s -> %d: %s" \
            % (p, trip, out, _fmt_exact(coch.entries[trip][out]))
    checks.append(_check("maurer-cartan-residual", residual))

    def assoc():
        defect = sp.defect_cochain(bound=bound)
        if defect.is_zero():
            return True, "star product associative mod t^%d" % args.order
        p = min(k for k, c in defect.terms.items() if not c.is_zero())
        coch = defect.term(p)
        trip = sorted(coch.entries)[0]
        out = sorted(coch.entries[trip])[0]
        return False, "defect at t^%d, args %s -> %d: %s" \
            % (p, trip, out, _fmt_exact(coch.entries[trip][out]))
    checks.append(_check("star-associativity", assoc))

    def matches():
        w = defect_matches_residual(A, lam)
        if w is None:
            return True, "associativity defect equals the residual termwise"
        return False, "mismatch at t-power %d: %s" % w
    checks.append(_check("defect-equals-residual", matches))

    artifacts["star_table"] = star_table(sp)
    if args.mc == "moyal":
        names = getattr(A, "labels", [])
        xi = names.index("x") if "x" in names else 1
        pi = names.index("p") if "p" in names else 2
        comm = sp.star(sp.basis(xi), sp.basis(pi))
        for p, vec in sp.star(sp.basis(pi), sp.basis(xi)).items():
            tgt = comm.setdefault(p, {})
            for k, v in vec.items():
                nv = tgt.get(k, field.zero) - v
                if nv == field.zero:
                    tgt.pop(k, None)
                else:
                    tgt[k] = nv
        artifacts["commutator_x_p"] = {
            str(p): {str(k): _fmt_exact(v) for k, v in sorted(vec.items())}
            for p, vec in sorted(comm.items()) if vec}
    return RunReport(["deform"], config, checks, artifacts)


# -- entry point --------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gerst",
        description="Exact-arithmetic workbench for Hochschild cochain "
                    "DGLAs, deformations, and jet-algebra comparison maps.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=argparse.SUPPRESS,
                        help="scalar field: Q or Fp:<prime> (default Q)")
    common.add_argument("--pretty", action="store_true",
                        default=argparse.SUPPRESS,
                        help="render a table instead of JSON")
    parser.add_argument("--field", default=None, help=argparse.SUPPRESS)
    parser.add_argument("--pretty", action="store_true",
                        help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_hh = sub.add_parser("hh", parents=[common],
                          help="Hochschild cohomology dimensions")
    p_hh.add_argument("file", help="algebra JSON file")
    p_hh.add_argument("--kmax", type=int, default=2)
    p_hh.add_argument("--window", type=int, default=None,
                      help="resource window: largest allowed cochain space")

    p_v = sub.add_parser("verify", parents=[common],
                         help="run a named identity suite")
    p_v.add_argument("suite")
    p_v.add_argument("--config", default=None, help="config JSON file")
    p_v.add_argument("--seed", type=int, default=None)

    p_d = sub.add_parser("deform", parents=[common],
                         help="deformed-product checks")
    p_d.add_argument("file", help="algebra JSON file or polynomial "
                                  "descriptor")
    p_d.add_argument("--mc", required=True,
                     help="deformation parameter JSON file, or 'moyal'")
    p_d.add_argument("--order", type=int, default=3,
                     help="truncation order N (work mod t^N)")

    args = parser.parse_args(argv)
    try:
        field = field_by_name(args.field or "Q")
    except GerstError as exc:
        print("gerst: %s" % exc, file=sys.stderr)
        return 2
    handler = {"hh": cmd_hh, "verify": cmd_verify, "deform": cmd_deform}
    report = handler[args.cmd](args, field)
    print(report.render_table() if args.pretty else report.to_json())
    return report.failures


if __name__ == "__main__":
    sys.exit(main())

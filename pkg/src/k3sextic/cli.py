"""Command-line front end.

Exit status: 0 on success, 1 when a verification or table check fails,
2 on usage errors (bad flags, malformed input files, invalid p or sigma).
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from sympy import primerange

from .constructions import lambda_minus, quaternion_params, verify_lambda
from .lattice import discriminant_group, format_gram, read_gram, signature, write_gram
from .quadbody import CosetConstraint, parse_form, search
from .roots import ade_type, enumerate_roots
from .tables import table_checks
from .theorem import (OVERRIDE_KEYS, TheoremViolation, main_theorem_verify,
                      recheck_certificate, select_cases)


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _write(path: str | None, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _fmt(x) -> str:
    return str(x) if not isinstance(x, Fraction) or x.denominator != 1 else str(x.numerator)


# -- subcommands ---------------------------------------------------------------

def cmd_construct(args) -> int:
    quaternion = None
    if args.q is not None or args.gamma is not None:
        quaternion = quaternion_params(args.p, q=args.q, gamma=args.gamma)
    decomp = lambda_minus(args.p, args.sigma, args.line, quaternion)
    lat = decomp.lattice
    report = verify_lambda(lat, args.p, args.sigma)
    meta = {
        "p": args.p,
        "sigma": args.sigma,
        "decomposition": decomp.to_json(),
        "params": None if quaternion is None and decomp.line not in (1, 2) else
        {"q": decomp.summands[1].quaternion.q, "gamma": decomp.summands[1].quaternion.gamma},
        "verification": {**report, "signature_value": list(signature(lat)),
                         "discriminant_invariants": list(discriminant_group(lat))},
    }
    if args.gram_out:
        write_gram(lat, args.gram_out)
    _write(None, format_gram(lat) + "\n" + _dump(meta) + "\n")
    return 0 if all(report.values()) else 1


def cmd_enumerate(args) -> int:
    with open(args.form) as fh:
        form = parse_form(fh.read())
    cosets = CosetConstraint.parse(args.cosets) if args.cosets else None
    if cosets is not None and len(cosets.reps) != form.n:
        raise UsageError(f"coset spec has {len(cosets.reps)} entries, form has {form.n} variables")
    order = [int(i) for i in args.order.split(",")] if args.order else None
    target = Fraction(args.eq) if args.eq is not None else None
    res = search(form, cosets, target=target, order=order)
    if args.json:
        _write(None, _dump({"count": len(res.points), "nodes": res.nodes,
                            "points": [[_fmt(x) for x in pt] for pt in res.points]}) + "\n")
    else:
        for pt in res.points:
            print(" ".join(_fmt(x) for x in pt))
        print(f"# {len(res.points)} points, {res.nodes} nodes")
    return 0


def cmd_roots(args) -> int:
    lat = read_gram(args.gram)
    inv = enumerate_roots(lat)
    kind = ade_type(inv)
    if args.json:
        _write(None, _dump({**inv.to_json(), "type": str(kind)}) + "\n")
    else:
        print(f"roots: {inv.count}")
        for i, (rk, n) in enumerate(inv.component_table()):
            print(f"component {i + 1}: rank {rk}, {n} roots")
        print(f"type: {kind}")
    return 0


def cmd_ade(args) -> int:
    print(ade_type(enumerate_roots(read_gram(args.gram))))
    return 0


def _overrides(args) -> dict:
    return {k: getattr(args, k) for k in OVERRIDE_KEYS if getattr(args, k, None) is not None}


def _summary(cert) -> str:
    d = cert.to_json()
    lines = [f"p={d['p']} sigma={d['sigma']} case={d['case']}",
             f"Lambda: {' + '.join(d['lambda']['summands'])}",
             f"params: {d['params']}",
             f"h0.h0 = -2, Z-condition: {','.join(d['z_condition'])}",
             f"exceptional vectors: {d['empties']['found']} ({d['empties']['nodes']} nodes)",
             f"R = {d['R']}  (h0-perp {d['sigma_h0_perp']}, definite part {d['sigma_definite']})",
             f"total Milnor number: {d['milnor']}"]
    if "full_lattice_check" in d:
        lines.append(f"full lattice check: {d['full_lattice_check']['found']} found "
                     f"({d['full_lattice_check']['nodes']} nodes)")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    cert = main_theorem_verify(args.p, args.sigma, args.case, cross_check=args.cross_check,
                               full_check=args.full_check, **_overrides(args))
    if args.json:
        _write(args.json, _dump(cert.to_json()) + "\n")
    else:
        _write(None, _summary(cert))
    return 0


def cmd_recheck(args) -> int:
    with open(args.certificate) as fh:
        data = json.load(fh)
    fresh = recheck_certificate(data)
    if fresh == data:
        print("certificate reproduced")
        return 0
    for key in sorted(set(data) | set(fresh)):
        if data.get(key) != fresh.get(key):
            print(f"- {key}: {json.dumps(data.get(key))}")
            print(f"+ {key}: {json.dumps(fresh.get(key))}")
    return 1


SWEEP_HEADER = ("p", "sigma", "case", "lambda", "params", "nodes", "found", "R", "milnor", "status")


def sweep_row(job) -> tuple:
    p, sigma, case, cross_check = job
    try:
        cert = main_theorem_verify(p, sigma, case, cross_check=cross_check)
    except TheoremViolation as exc:
        return (p, sigma, case, "", "", "", str(exc.witness), "", "", "FAIL")
    d = cert.to_json()
    params = ",".join(f"{k}={v}" for k, v in d["params"].items())
    return (p, sigma, d["case"], " + ".join(d["lambda"]["summands"]), params,
            d["empties"]["nodes"], d["empties"]["found"], d["R"], d["milnor"], "ok")


def sweep_jobs(pmax: int, sigmas, all_cases: bool = False, cross_check: bool = False,
               pmin: int = 3) -> list[tuple]:
    jobs = []
    for p in primerange(max(3, pmin), pmax):
        for sigma in sigmas:
            cases = select_cases(p, sigma) if all_cases else [None]
            jobs += [(p, sigma, c, cross_check) for c in cases]
    return jobs


def run_sweep(jobs, workers: int = 1) -> list[tuple]:
    if workers <= 1:
        return [sweep_row(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(sweep_row, jobs, chunksize=1))


def cmd_sweep(args) -> int:
    sigmas = [args.sigma] if args.sigma else list(range(1, 11))
    jobs = sweep_jobs(args.pmax, sigmas, args.all_cases, args.cross_check, args.pmin)
    rows = run_sweep(jobs, args.workers)
    text = "\t".join(SWEEP_HEADER) + "\n" + "".join(
        "\t".join(str(c) for c in row) + "\n" for row in rows)
    _write(args.tsv, text)
    bad = [r for r in rows if r[-1] != "ok"]
    if args.tsv not in (None, "-"):
        print(f"{len(rows)} certificates, {len(bad)} failures")
    return 1 if bad else 0


def cmd_tables(args) -> int:
    report = table_checks(args.which, args.pmax)
    _write(args.tsv, report.tsv())
    if report.failures:
        for f in report.failures:
            print(f"mismatch: {f}", file=sys.stderr)
        return 1
    return 0


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="k3sextic",
                                 description="Exact lattice computations for supersingular K3 "
                                             "surfaces as sextic double planes.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="Gram matrix of Lambda^-(p, sigma)")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--sigma", type=int, required=True)
    c.add_argument("--q", type=int)
    c.add_argument("--gamma", type=int)
    c.add_argument("--line", type=int, choices=(1, 2, 3, 4))
    c.add_argument("--gram-out", help="also write the Gram file here")
    c.set_defaults(func=cmd_construct)

    e = sub.add_parser("enumerate", help="points of a quadratic body")
    e.add_argument("--form", required=True)
    e.add_argument("--cosets", help="per-variable cosets, e.g. 0,0,1/2")
    e.add_argument("--eq", help="keep only points with Q = TARGET")
    e.add_argument("--order", help="variable elimination order, e.g. 2,0,1")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_enumerate)

    r = sub.add_parser("roots", help="roots of a positive-definite even lattice")
    r.add_argument("--gram", required=True)
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_roots)

    a = sub.add_parser("ade", help="ADE type of a positive-definite even lattice")
    a.add_argument("--gram", required=True)
    a.set_defaults(func=cmd_ade)

    v = sub.add_parser("verify", help="certificate for one (p, sigma)")
    v.add_argument("--p", type=int, required=True)
    v.add_argument("--sigma", type=int, required=True)
    v.add_argument("--case", choices=("I", "II", "III", "IV"))
    for key in OVERRIDE_KEYS:
        v.add_argument(f"--{key}", type=int)
    v.add_argument("--cross-check", action="store_true",
                   help="confirm root types along an independent route")
    v.add_argument("--full-check", action="store_true",
                   help="also enumerate exceptional vectors in the whole lattice")
    v.add_argument("--json", metavar="OUT", help="write the JSON certificate ('-' for stdout)")
    v.set_defaults(func=cmd_verify)

    rc = sub.add_parser("recheck", help="re-verify a JSON certificate")
    rc.add_argument("certificate")
    rc.set_defaults(func=cmd_recheck)

    s = sub.add_parser("sweep", help="certificates for many (p, sigma)")
    s.add_argument("--pmax", type=int, required=True)
    s.add_argument("--pmin", type=int, default=3)
    s.add_argument("--sigma", type=int, choices=range(1, 11), metavar="S")
    s.add_argument("--all-cases", action="store_true", help="run every applicable case")
    s.add_argument("--cross-check", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--tsv", help="output path ('-' for stdout, the default)")
    s.set_defaults(func=cmd_sweep)

    t = sub.add_parser("tables", help="reproduce a reference table: 1 Venkov exceptions, "
                       "2 quaternion rows, 3 characteristic 5, 4 tau, 5 rho, iv Case IV types")
    t.add_argument("--which", required=True, choices=("1", "2", "3", "4", "5", "iv"))
    t.add_argument("--pmax", type=int)
    t.add_argument("--tsv", help="output path ('-' for stdout, the default)")
    t.set_defaults(func=cmd_tables)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except TheoremViolation as exc:
        print(f"verification failed: {exc} (witness {exc.witness})", file=sys.stderr)
        return 1
    except (UsageError, ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

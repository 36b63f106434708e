"""Command-line front end: verification grids, dimension tables, theta series.

All output is JSON on stdout.  Exit status: 0 when every check passes, 1 when
some identity or cross-check fails, 2 on malformed input.  Reports carry no
timing so runs are byte-identical across repetition and job counts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from fockforms.forms import IDENTITIES, default_grid, run_identity

LIMITS = {"p": 4, "q": 4, "n": 3, "ell": 6}

IDENTITY_ALIASES = {
    "kprime_invariance": "kprime",
    "sigma_gl_invariance": "sigma_gl",
    "holomorphicity_check": "holomorphicity",
}


class InputError(Exception):
    pass


def parse_partition(text):
    if text is None or text == "":
        return ()
    try:
        parts = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"cannot parse partition {text!r}")
    if any(v < 1 for v in parts) or list(parts) != sorted(parts, reverse=True):
        raise InputError("partition parts must be positive and weakly decreasing")
    return parts


def canonical_identity(name):
    name = IDENTITY_ALIASES.get(name, name)
    if name not in IDENTITIES:
        known = sorted(set(IDENTITIES) | set(IDENTITY_ALIASES))
        raise InputError(f"unknown identity {name!r}; known: {', '.join(known)}")
    return name


def _run_cell(cell):
    identity, p, q, n, ell = cell
    return run_identity(identity, p, q, n, ell)


def run_cells(cells, jobs, fail_fast):
    reports = []
    if jobs <= 1:
        for cell in cells:
            rep = _run_cell(cell)
            reports.append(rep)
            if fail_fast and not rep.passed:
                break
        return reports
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for rep in pool.map(_run_cell, cells, chunksize=1):
            reports.append(rep)
            if fail_fast and not rep.passed:
                pool.shutdown(cancel_futures=True)
                break
    return reports


def report_row(rep):
    row = rep.to_json()
    row.pop("seconds", None)
    return row


def cmd_verify(args):
    if args.identity:
        identity = canonical_identity(args.identity)
        if args.p is None or args.q is None:
            raise InputError("--identity needs --p and --q")
        p, q, n, ell = args.p, args.q, args.n or 1, args.ell or 0
        for key, val in (("p", p), ("q", q), ("n", n)):
            if not 1 <= val <= LIMITS[key]:
                raise InputError(f"--{key} must be in 1..{LIMITS[key]}")
        if not 0 <= ell <= LIMITS["ell"]:
            raise InputError(f"--ell must be in 0..{LIMITS['ell']}")
        cells = [(identity, p, q, n, ell)]
    else:
        cells = default_grid()
    reports = run_cells(cells, args.jobs, args.fail_fast)
    rows = [report_row(r) for r in reports]
    doc = {
        "cells": len(rows),
        "failures": sum(not r["passed"] for r in rows),
        "passed": all(r["passed"] for r in rows),
        "reports": rows,
    }
    emit(doc, args.out, "verify")
    if args.out:
        for row in rows:
            name = "{identity}_p{p}q{q}n{n}l{ell}.json".format(**row)
            with open(os.path.join(args.out, name), "w", encoding="utf-8") as fh:
                json.dump(row, fh, indent=1, sort_keys=True)
                fh.write("\n")
    return 0 if doc["passed"] else 1


def dims_row(lam, n):
    from fockforms.linalg import rank
    from fockforms.schur import ssyt_enumerate, young_projector

    mat_rank = rank(young_projector(lam, n)) if sum(lam) else 1
    ssyt = len(ssyt_enumerate(lam, n))
    return {
        "lambda": list(lam),
        "n": n,
        "rank": mat_rank,
        "ssyt": ssyt,
        "match": mat_rank == ssyt,
    }


def all_partitions(upto):
    out = []

    def grow(prefix, remaining, cap):
        for part in range(min(cap, remaining), 0, -1):
            cur = prefix + (part,)
            out.append(cur)
            grow(cur, remaining - part, part)

    grow((), upto, upto)
    return sorted(set(out), key=lambda t: (sum(t), len(t), t))


def cmd_dims(args):
    if (args.lam is None) != (args.n is None):
        raise InputError("dims takes --lambda and --n together, or neither")
    if args.lam is not None:
        lam = parse_partition(args.lam)
        if sum(lam) > 4 or args.n < 1 or args.n > 3:
            raise InputError("dims table covers |lambda| <= 4, n in 1..3")
        rows = [dims_row(lam, args.n)]
    else:
        rows = [dims_row(lam, n)
                for lam in all_partitions(4) for n in (1, 2, 3)]
    doc = {"rows": rows, "passed": all(r["match"] for r in rows)}
    emit(doc, args.out, "dims")
    return 0 if doc["passed"] else 1


def cmd_theta(args):
    from fockforms.theta import Lattice, series_table

    try:
        lat = Lattice.load(args.lattice)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot load lattice: {exc}")
    lam = parse_partition(args.lam)
    if args.genus < 1 or args.bound < 0:
        raise InputError("--genus must be >= 1 and --bound >= 0")
    if lam and len(lam) > args.genus:
        raise InputError("partition has more rows than the genus")
    if lam and lat.rank ** sum(lam) > 1500 and len(lam) > 1:
        raise InputError("payload shape too large for this lattice rank")
    rows = series_table(lat, lam=lam, n=args.genus, bound=args.bound,
                        jobs=args.jobs)
    doc = {
        "genus": args.genus,
        "lambda": list(lam),
        "bound": args.bound,
        "rows": [r.to_json() for r in rows],
    }
    emit(doc, args.out, "theta")
    return 0


def cmd_intertwine(args):
    from fockforms.multilinear import MixedForm, SpaceParams
    from fockforms.forms import phi_nq0
    from fockforms.weil import polarized_top_operator

    rows = []
    for (p, q, n) in ((1, 1, 1), (2, 1, 1), (2, 1, 2)):
        params = SpaceParams(p, q, n)
        built = polarized_top_operator(params)(MixedForm.vacuum(params))
        target = phi_nq0(params)
        residual = built - target
        rows.append({
            "p": p, "q": q, "n": n,
            "passed": residual.is_zero(),
            "residual_terms": len(residual.terms),
        })
    doc = {"rows": rows, "passed": all(r["passed"] for r in rows)}
    emit(doc, args.out, "intertwine-check")
    return 0 if doc["passed"] else 1


def emit(doc, out_dir, name):
    text = json.dumps(doc, indent=1, sort_keys=True)
    sys.stdout.write(text + "\n")
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, f"{name}.json"), "w",
                  encoding="utf-8") as fh:
            fh.write(text + "\n")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fockforms",
        description="exact verification grids, dimension tables, theta series",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    ver = sub.add_parser("verify", help="run identity checks")
    ver.add_argument("--grid", default="default", choices=["default"],
                     help="named parameter grid (used when no --identity)")
    ver.add_argument("--identity", help="single identity name")
    ver.add_argument("--p", type=int)
    ver.add_argument("--q", type=int)
    ver.add_argument("--n", type=int)
    ver.add_argument("--ell", type=int)
    ver.add_argument("--jobs", type=int, default=1)
    ver.add_argument("--fail-fast", action="store_true")
    ver.add_argument("--out", help="directory for per-cell report files")
    ver.set_defaults(fn=cmd_verify)

    dims = sub.add_parser("dims", help="projector rank vs filling counts")
    dims.add_argument("--lambda", dest="lam", help='partition, e.g. "2,1"')
    dims.add_argument("--n", type=int, help="alphabet size")
    dims.add_argument("--out")
    dims.set_defaults(fn=cmd_dims)

    theta = sub.add_parser("theta", help="Fourier coefficient tables")
    theta.add_argument("--lattice", required=True, help="lattice JSON file")
    theta.add_argument("--genus", type=int, default=1)
    theta.add_argument("--lambda", dest="lam", default="",
                       help='payload partition, e.g. "2,1"')
    theta.add_argument("--bound", type=int, default=0)
    theta.add_argument("--jobs", type=int, default=1)
    theta.add_argument("--out")
    theta.set_defaults(fn=cmd_theta)

    inter = sub.add_parser("intertwine-check",
                           help="operator-word consistency for the top form")
    inter.add_argument("--out")
    inter.set_defaults(fn=cmd_intertwine)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print(json.dumps({"error": "--jobs must be >= 1"}), file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except InputError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

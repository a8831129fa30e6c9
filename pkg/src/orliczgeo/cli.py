"""Command-line entry point: ``orliczgeo compute | verify | sweep``.

Exit codes: 0 success, 1 error (a single ``error <Code>: message`` line on
stderr), 2 success with a Degenerate or Diverging flag.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import List, Optional

from . import harness
from .bodies import Ball
from .errors import OrliczError, ParseError, UnclassifiedPhi, UnsupportedDimension
from .functionals import (
    OptimizerOptions,
    affine_orlicz,
    affine_orlicz_multi,
    geominimal_orlicz,
    geominimal_orlicz_multi,
    ith_mixed,
    lp_affine_closed_form,
)
from .io import dumps, load_body, parse_phi, to_csv, write_atomic
from .mixed_volumes import s_phi, v_phi
from .orlicz import OrliczFunction, classify
from .spheregrid import build_grid

QUANTITIES = ("v_phi", "s_phi", "affine", "geominimal", "multi", "ith_mixed", "lp_closed_form")

EXIT_OK, EXIT_ERROR, EXIT_FLAGGED = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--body", action="append", default=[], metavar="PATH",
                        help="body JSON file (repeat for two-body quantities)")
    common.add_argument("--phi", action="append", default=[], metavar="SPEC",
                        help="power(p), constant(a), a built-in name, inline JSON or a JSON file")
    common.add_argument("--dim", type=int, default=None)
    common.add_argument("--grid", type=int, default=None, help="sphere grid resolution")
    common.add_argument("--seed", type=int, default=harness.DEFAULT_SEED)
    common.add_argument("--out", default=None, help="output file (stdout if omitted)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--restarts", type=int, default=None)
    common.add_argument("--max-iter", type=int, default=5000)
    common.add_argument("--tol", type=float, default=None)

    p = argparse.ArgumentParser(prog="orliczgeo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", parents=[common], help="evaluate one quantity")
    c.add_argument("--quantity", choices=QUANTITIES, required=True)
    c.add_argument("--which", choices=("affine", "geominimal"), default="affine",
                   help="functional family for multi and ith_mixed")
    c.add_argument("--i", type=float, default=1.0, dest="index", help="index of ith_mixed")
    c.add_argument("--p", type=float, default=None, help="exponent for lp_closed_form")

    v = sub.add_parser("verify", parents=[common], help="run an inequality suite")
    v.add_argument("suite", nargs="?", default=None)
    v.add_argument("--suite", dest="suite_opt", default=None)
    v.add_argument("--equality", action="store_true",
                   help="run the equality-case witnesses of the suite instead")

    s = sub.add_parser("sweep", parents=[common], help="tabulate a functional over a parameter axis")
    s.add_argument("--quantity", choices=("affine", "geominimal", "s_phi"), default="affine")
    s.add_argument("--axis", default=None, metavar="NAME=V1,V2,...",
                   help="p=... (exponents of power phi) or grid=... (resolutions)")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        if args.command == "compute":
            return _compute(args)
        if args.command == "verify":
            return _verify(args)
        return _sweep(args)
    except OrliczError as exc:
        print(f"error {exc.code}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError, FloatingPointError) as exc:
        print(f"error {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def _emit(args, text: str) -> None:
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _opts(args, default_restarts: int = 8) -> OptimizerOptions:
    tol = 1e-9 if args.tol is None or args.command == "verify" else args.tol
    return OptimizerOptions(restarts=args.restarts or default_restarts, max_iter=args.max_iter,
                            tol=tol, seed=args.seed)


def _grid(args, dim: int):
    return build_grid(dim, args.grid) if args.grid else None


def _phis(args, dim: int, need: int) -> List[OrliczFunction]:
    if len(args.phi) < need:
        raise ParseError(f"{need} --phi value(s) required")
    phis = [parse_phi(s, dim) for s in args.phi[:need]]
    for phi in phis:
        c = classify(phi, dim)
        if c.cls == "Neither":
            raise UnclassifiedPhi(f"{phi.label} is in neither Phi nor Psi for n = {dim}")
    return phis


def _bodies(args, need: int):
    if len(args.body) < need:
        raise ParseError(f"{need} --body value(s) required")
    bodies = [load_body(p) for p in args.body]
    dims = {b.dim for b in bodies}
    if args.dim is not None and dims != {args.dim}:
        raise UnsupportedDimension(f"bodies have dimension {sorted(dims)}, --dim is {args.dim}")
    return bodies


def _compute(args) -> int:
    q = args.quantity
    need = 2 if q in ("multi", "ith_mixed") else 1
    bodies = _bodies(args, need)
    K = bodies[0]
    n = K.dim
    g = _grid(args, n)
    opts = _opts(args)
    if q == "lp_closed_form":
        p = args.p
        if p is None:
            phi = parse_phi(args.phi[0], n) if args.phi else None
            if phi is None or phi.kind != "power":
                raise ParseError("lp_closed_form needs --p or a power phi")
            p = phi.p
        value = lp_affine_closed_form(K, p, g)
        out = {"quantity": q, "p": p, "value": value, "flags": []}
        _emit(args, dumps(out))
        return EXIT_OK
    if q in ("v_phi", "s_phi"):
        phi = parse_phi(args.phi[0], n) if args.phi else None
        if phi is None:
            raise ParseError("--phi is required")
        if q == "v_phi":
            Q = bodies[1] if len(bodies) > 1 else Ball(1.0, n)
            r = v_phi(K, Q, phi, g)
            out = dict(r.to_dict(), quantity=q, phi=phi.label, flags=[])
        else:
            out = {"quantity": q, "phi": phi.label, "value": s_phi(K, phi, g), "flags": []}
        _emit(args, dumps(out))
        return EXIT_OK
    if q == "affine":
        r = affine_orlicz(K, _phis(args, n, 1)[0], g, opts)
    elif q == "geominimal":
        r = geominimal_orlicz(K, _phis(args, n, 1)[0], g, opts)
    elif q == "multi":
        phis = _phis(args, n, 2) if len(args.phi) > 1 else _phis(args, n, 1) * 2
        fn = affine_orlicz_multi if args.which == "affine" else geominimal_orlicz_multi
        r = fn(bodies[:2], phis, g, opts)
    else:
        phis = _phis(args, n, 2) if len(args.phi) > 1 else _phis(args, n, 1) * 2
        r = ith_mixed(bodies[0], bodies[1], phis[0], phis[1], args.index, args.which, g, opts)
    _emit(args, dumps(r.to_dict()))
    return EXIT_FLAGGED if r.flagged else EXIT_OK


def _verify(args) -> int:
    name = args.suite_opt or args.suite
    if not name:
        raise ParseError("a suite name is required")
    if args.dim not in (None, 2):
        raise UnsupportedDimension("inequality suites run in dimension 2")
    tol = args.tol if args.tol is not None else harness.DEFAULT_TOL
    opts = _opts(args, harness.DEFAULT_RESTARTS)
    phis = [parse_phi(s, 2) for s in args.phi] or None
    corpus = [(p, load_body(p)) for p in args.body] or None
    if args.equality:
        report = harness.equality_witness(name, grid=args.grid, tol=tol, seed=args.seed, opts=opts,
                                          phis=phis)
    else:
        report = harness.run_suite(name, corpus=corpus, phis=phis, grid=args.grid, tol=tol,
                                   seed=args.seed, opts=opts)
    fmt = args.format or "json"
    _emit(args, report.to_csv() if fmt == "csv" else report.to_json())
    s = report.summary
    print(f"{report.suite}: {s['Certified']} Certified, {s['Inconclusive']} Inconclusive, "
          f"{s['Violated']} Violated", file=sys.stderr)
    return EXIT_OK if report.violated == 0 else EXIT_ERROR


def _parse_axis(spec: Optional[str]):
    if not spec or "=" not in spec:
        raise ParseError("sweep needs --axis p=V1,V2,... or --axis grid=M1,M2,...")
    name, _, values = spec.partition("=")
    name = name.strip()
    if name not in ("p", "grid"):
        raise ParseError(f"unknown sweep axis {name!r}")
    try:
        vals = [float(v) for v in values.split(",") if v.strip()]
    except ValueError as exc:
        raise ParseError(f"bad axis values: {values!r}") from exc
    if not vals:
        raise ParseError("empty sweep axis")
    if name == "grid":
        vals = [int(v) for v in vals]
    return name, vals


def _sweep(args) -> int:
    axis, values = _parse_axis(args.axis)
    K = _bodies(args, 1)[0]
    n = K.dim
    opts = _opts(args)
    fn = {"affine": affine_orlicz, "geominimal": geominimal_orlicz}.get(args.quantity)
    rows, flagged, prev = [], False, None
    header = ["param", "value", "certified_side", "runtime_ms"]
    if axis == "grid":
        header.append("refinement_change")
    for v in values:
        if axis == "p":
            phi = OrliczFunction.power(v, n)
            g = _grid(args, n)
        else:
            phi = _phis(args, n, 1)[0]
            g = build_grid(n, v)
        t0 = time.perf_counter()
        if fn is None:
            value, side = s_phi(K, phi, g), "exact"
        else:
            r = fn(K, phi, g, opts)
            value, side = r.value, r.certified_side
            flagged |= r.flagged
        ms = (time.perf_counter() - t0) * 1e3
        row = [v, float(value), side, round(ms, 3)]
        if axis == "grid":
            row.append("" if prev is None else abs(float(value) - prev))
            prev = float(value)
        rows.append(row)
    fmt = args.format or "csv"
    if fmt == "csv":
        text = to_csv(header, rows)
    else:
        text = dumps([dict(zip(header, r)) for r in rows])
    _emit(args, text)
    return EXIT_FLAGGED if flagged else EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())

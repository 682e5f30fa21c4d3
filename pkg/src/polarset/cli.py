"""Command-line front end.

Exit codes: 0 when every requested check passes, 1 on a verification failure
(the report carries a witness), 2 on bad input or configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import bounds, cubic, io, kernels, w5
from .cubic import ConsistencyError
from .forms import FormError, antidiagonal_symplectic
from .gf import FieldConfigError, field_of_order
from .lift import cone_lift, make_frame
from .pencil import (
    TRACE_REQUIREMENTS,
    PlacementError,
    assemble_tangent_set,
    build_pencil,
    default_w3_ovoid,
    make_config,
    place_seed,
)
from .pointset import PointSet
from .verify import (
    PreconditionError,
    VerificationReport,
    is_maximal_partial_ovoid,
    is_maximal_tangent_set,
    is_partial_ovoid,
    is_tangent_set,
    max_partial_ovoid_search,
)

CHECKS = ("partial-ovoid", "maximality", "tangent-set", "tangent-maximality")
SEED_KINDS = ("ovoid", "w3-cubic", "w5-orbit", "w5-even", "search", "file")


class UsageError(Exception):
    """Bad input or configuration; exit code 2."""


def _construct(kind: str, q: int, c: int = 1):
    """(point set, form) for one of the built-in constructions."""
    if kind == "w3-cubic":
        S = cubic.build_w3_partial_ovoid(q)
        return S, cubic.beta(S.F)
    if kind == "w5-orbit":
        model = w5.PgvModel(q)
        return w5.build_orbit_ovoid(q, c, model), model.form
    if kind == "w5-even":
        cfg = w5.even_w5_config(q)
        return w5.build_even_w5(q, cfg), cfg.form
    if kind == "w3-ovoid":
        return default_w3_ovoid(q)
    raise UsageError(f"unknown construction {kind!r}")


def _seed(args, n: int, q: int):
    kind = args.seed_kind
    if kind == "file":
        if not args.seed:
            raise UsageError("--seed-kind file needs --seed PATH")
        return io.load_partial_ovoid(args.seed)
    if kind == "search":
        F = field_of_order(q)
        form = antidiagonal_symplectic(F, 2 * n)
        target = q**3 + 1 if n == 4 else None
        res = max_partial_ovoid_search(form, budget=args.budget, target=target, use_symmetry=True)
        return res.points, form
    want = {"ovoid": 2, "w3-cubic": 2, "w5-orbit": 3, "w5-even": 3}[kind]
    if n != want:
        raise UsageError(f"seed kind {kind} lives in W({2 * want - 1},q), not W({2 * n - 1},q)")
    return _construct("w3-ovoid" if kind == "ovoid" else kind, q)


def _checks(S: PointSet, form, names) -> list[VerificationReport]:
    out = []
    for name in names:
        try:
            if name == "partial-ovoid":
                out.append(is_partial_ovoid(S, form))
            elif name == "maximality":
                out.append(is_maximal_partial_ovoid(S, form))
            elif name == "tangent-set":
                out.append(is_tangent_set(S, form))
            elif name == "tangent-maximality":
                out.append(is_maximal_tangent_set(S, form))
        except PreconditionError as e:
            out.append(VerificationReport(name, {"size": len(S)}, False, {"precondition": str(e)}))
    return out


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _finish(args, reports, S=None, form=None) -> int:
    if S is not None and args.out:
        io.serialize(S, form, args.out)
    if args.report:
        io.write_report(reports, args.report, _config(args))
    for r in reports:
        line = f"{r.predicate}: {r.outcome}"
        if not r.passed:
            line += f"  witness={json.dumps(r.witness, default=io._json_default)}"
        print(line)
    return 0 if all(r.passed for r in reports) else 1


# -- subcommands ----------------------------------------------------------------------


def cmd_construct(args) -> int:
    S, form = _construct(args.kind, args.q, args.c)
    if args.extend:
        if args.kind != "w3-cubic":
            raise UsageError("--extend applies to w3-cubic only")
        P = cubic.extend_by_point(args.q, S)
        S = S.with_points(list(S.points) + [P], extended_by=[int(x) for x in P])
    print(f"{args.kind} q={args.q}: {len(S)} points")
    names = ["partial-ovoid"] + (["maximality"] if args.check_maximal else [])
    return _finish(args, _checks(S, form, names), S, form)


def cmd_tangent_set(args) -> int:
    cfg = make_config(args.n, args.q)
    seed, seed_form = _seed(args, args.n, args.q)
    if seed.F is not cfg.F or seed_form.dim != cfg.m:
        raise UsageError(f"the seed does not live in W({cfg.m - 1},{args.q})")
    pencil = build_pencil(cfg)
    O1 = place_seed(cfg, seed, seed_form, args.trace, rng_seed=args.rng_seed, budget=args.placement_budget)
    ts = assemble_tangent_set(pencil, O1)
    print(f"tangent-set of H({cfg.m - 1},{args.q ** 2}): {len(ts)} points (x={ts.x}, y={ts.y})")
    names = ["tangent-set"] + (["tangent-maximality"] if args.check_maximal else [])
    return _finish(args, _checks(ts.points, ts.form, names), ts.points, ts.form)


def cmd_lift(args) -> int:
    T, form = io.parse(args.input)
    if form.kind != "hermitian":
        raise UsageError("lift needs a tangent-set of a Hermitian space")
    frame = make_frame(form, args.g)
    O = cone_lift(frame, T)
    print(f"lift to H({frame.form.dim - 1},{form.F.q}): {len(O)} points")
    names = ["partial-ovoid"] + (["maximality"] if args.check_maximal else [])
    return _finish(args, _checks(O, frame.form, names), O, frame.form)


def cmd_verify(args) -> int:
    names = [c.strip() for c in args.check.split(",") if c.strip()]
    bad = [c for c in names if c not in CHECKS]
    if bad or not names:
        raise UsageError(f"unknown checks {bad}; choose from {CHECKS}")
    S, form = io.parse(args.input)
    print(f"{args.input}: {len(S)} points")
    return _finish(args, _checks(S, form, names))


def cmd_search(args) -> int:
    F = field_of_order(args.q)
    form = antidiagonal_symplectic(F, args.n + 1) if args.n % 2 else None
    if form is None:
        raise UsageError("search runs in W(n,q) with n odd")
    t0 = time.perf_counter()
    res = max_partial_ovoid_search(form, budget=args.budget, target=args.target, use_symmetry=args.symmetry)
    rep = VerificationReport(
        "search",
        {"space": f"W({args.n},{args.q})", "target": args.target, "symmetry": args.symmetry},
        True,
        None,
        {"size": res.size, "optimal": res.optimal, "nodes": res.nodes},
        (time.perf_counter() - t0) * 1e3,
    )
    print(f"W({args.n},{args.q}): found {res.size} ({'optimal' if res.optimal else 'not proven optimal'})")
    reports = [rep, is_partial_ovoid(res.points, form)]
    return _finish(args, reports, res.points, form)


def cmd_table(args) -> int:
    if args.json:
        doc = {space: [e.to_json() for e in bounds.evaluate(space, args.q)] for space in bounds.SPACES}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(bounds.format_table(args.q))
    return 0


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rng-seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--report", help="write a JSON report here")

    ap = argparse.ArgumentParser(prog="polarset", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a partial ovoid")
    p.add_argument("kind", choices=("w3-cubic", "w5-orbit", "w5-even", "w3-ovoid"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--c", type=int, default=1, help="orbit parameter for w5-orbit")
    p.add_argument("--extend", action="store_true", help="add one subgeometry point (w3-cubic)")
    p.add_argument("--check-maximal", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("tangent-set", parents=[common], help="build a tangent-set of H(2n-1,q^2)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--seed-kind", choices=SEED_KINDS, required=True)
    p.add_argument("--seed", help="POLARSET file for --seed-kind file")
    p.add_argument("--trace", choices=tuple(TRACE_REQUIREMENTS), default="exactly_one")
    p.add_argument("--placement-budget", type=int, default=10_000)
    p.add_argument("--budget", type=int, default=10**7, help="node budget for --seed-kind search")
    p.add_argument("--check-maximal", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tangent_set)

    p = sub.add_parser("lift", parents=[common], help="cone lift a tangent-set to H(2n,q^2)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--g", type=int, default=1)
    p.add_argument("--check-maximal", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("verify", parents=[common], help="run oracles on a POLARSET file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--check", default="partial-ovoid", help=f"comma list from {','.join(CHECKS)}")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="clique search for large partial ovoids of W(n,q)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--target", type=int)
    p.add_argument("--symmetry", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("table", parents=[common], help="evaluate the bound tables")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_table)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    if args.threads:
        kernels.set_threads(args.threads)
    try:
        return args.func(args)
    except ConsistencyError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (UsageError, io.ParseError, FieldConfigError, FormError, PlacementError, PreconditionError,
            ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


run = main

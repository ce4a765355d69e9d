"""Command-line front end.  JSON report on stdout.

Exit codes: 0 success, 1 a mathematical check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import format_fraction
from .derivations import max_iterations, nilpotency_index, NilpotencyCertificate, verify_regular
from .divisors import CurveGraph, contract, divisor_to_json, fiber_solve, make_divisor, validate_fiber
from .errors import GraphError, LndlabError
from .fixtures import (
    Relation,
    check_automorphism,
    check_graded_relations,
    check_surface_relations,
    load_fixture,
)
from .picard import FibrationPresentation, PicardElement, intersection_counts, is_positive, pic_rank, standard_form
from .semigroup import SemigroupPresentation, homogeneous_lnd_obstruction, membership

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(LndlabError):
    pass


def _load_json(value: str):
    """Inline JSON (starting with ``{`` or ``[``) or a path to a JSON file."""
    text = value.strip()
    if not text.startswith(("{", "[")):
        try:
            text = Path(value).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {value}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {value!r}: {exc}") from exc


def _poly_json(p, order=None) -> str:
    return p.format(order)


# ---------------------------------------------------------------------------
# handlers: each returns (ok, report)
# ---------------------------------------------------------------------------

def cmd_check_surface(args):
    fx = load_fixture(args.fixture)
    if args.relations:
        rows = _load_json(args.relations)
        try:
            fx.relations = [Relation(str(label), lhs, rhs) for label, lhs, rhs in rows]
        except (TypeError, ValueError) as exc:
            raise InputError("relations must be a list of [label, lhs, rhs]") from exc
    report = check_surface_relations(fx)
    order = list(fx.chart.ambient_vars)
    return report.ok, {
        "fixture": fx.name,
        "checked": report.checked,
        "failures": [{"relation": label, "residual": _poly_json(r, order)} for label, r in report.failures],
    }


def cmd_check_automorphism(args):
    fx = load_fixture(args.fixture)
    mapping = _load_json(args.map) if args.map else fx.params.get("involution")
    chart_map = _load_json(args.chart_map) if args.chart_map else (None if args.map else fx.params.get("involution_chart"))
    if not isinstance(mapping, dict):
        raise InputError("the map must be a JSON object generator -> expression")
    report = check_automorphism(fx, mapping, chart_map)
    order = list(fx.chart.ambient_vars)
    return report.ok, {
        "fixture": fx.name,
        "map": mapping,
        "relation_failures": [{"relation": k, "residual": _poly_json(r, order)} for k, r in report.relation_failures],
        "chart_mismatches": [{"generator": k, "difference": _poly_json(r, order)} for k, r in report.chart_mismatches],
    }


def _semigroup(args) -> SemigroupPresentation:
    if args.generators:
        data = _load_json(args.generators)
        try:
            return SemigroupPresentation(tuple(tuple(p) for p in data))
        except TypeError as exc:
            raise InputError("generators must be a list of [r, s] pairs") from exc
    return load_fixture(args.fixture).semigroup


def cmd_graded_lnd(args):
    report = homogeneous_lnd_obstruction(_semigroup(args))
    out = report.to_json()
    if not args.generators:
        fx = load_fixture(args.fixture)
        rel = check_graded_relations(fx)
        out["graded_relations_hold"] = rel.ok
        if not rel.ok:
            return False, out
    return True, out


def cmd_membership(args):
    try:
        r, s = (int(x) for x in args.point.split(","))
    except ValueError as exc:
        raise InputError("--point must look like r,s") from exc
    res = membership((r, s), _semigroup(args), args.bound)
    out = {"point": [r, s], "bound": args.bound, "status": res.status.value}
    if res.witness:
        out["witness"] = [list(p) for p in res.witness]
    if res.violated:
        out["violated_functional"] = list(res.violated)
    return True, out


def cmd_check_derivation(args):
    fx = load_fixture("bundle-skew", m=args.m, n=args.n)
    bound = args.max_iter if args.max_iter is not None else max_iterations()
    reg = verify_regular(fx.derivation, fx.witnesses)
    order = list(fx.chart.ambient_vars)
    nil = {}
    all_nilpotent = True
    for name, expr in fx.chart.generators.items():
        cert = nilpotency_index(fx.derivation, expr, bound)
        if isinstance(cert, NilpotencyCertificate):
            nil[name] = cert.index
        else:
            nil[name] = None
            all_nilpotent = False
    ok = reg.ok and all_nilpotent
    return ok, {
        "m": args.m,
        "n": args.n,
        "bound": bound,
        "regular": reg.ok,
        "failures": [
            {
                "generator": f.generator,
                "reason": f.reason,
                **({"discrepancy": _poly_json(f.discrepancy, order)} if f.discrepancy is not None else {}),
            }
            for f in reg.failures
        ],
        "nilpotency_index": nil,
    }


def _graph(args) -> CurveGraph:
    if args.graph:
        return CurveGraph.from_json(_load_json(args.graph))
    return load_fixture(args.fixture).graph


def _names(value: str | None) -> list[str] | None:
    if value is None:
        return None
    return [v.strip() for v in value.split(",") if v.strip()]


def cmd_fiber_solve(args):
    graph = _graph(args)
    fiber, boundary = _names(args.fiber), _names(args.boundary)
    if fiber is None:
        if args.graph:
            raise InputError("--fiber is required with --graph")
        chain = load_fixture(args.fixture).params["chain"]
        fiber = chain["fiber_vertices"]
        boundary = chain["boundary"] if boundary is None else boundary
    sol = fiber_solve(graph, fiber, boundary or [])
    return True, {
        "unknowns": sol.unknowns,
        "dimension": sol.dimension,
        "basis": [divisor_to_json(d) for d in sol.basis],
    }


def cmd_validate_fiber(args):
    graph = _graph(args)
    if args.divisor:
        divisor = make_divisor(_load_json(args.divisor))
    elif not args.graph:
        divisor = load_fixture(args.fixture).divisors[args.name]
    else:
        raise InputError("--divisor is required with --graph")
    check = validate_fiber(graph, divisor)
    return check.ok, {
        "divisor": divisor_to_json(divisor),
        "violations": [{"vertex": v, "pairing": format_fraction(x)} for v, x in check.violations],
        "self_pairing": None if check.self_pairing is None else format_fraction(check.self_pairing),
        "connected": check.connected,
    }


def cmd_contract(args):
    graph = _graph(args)
    if args.vertex not in graph.self_intersections:
        raise InputError(f"unknown vertex {args.vertex!r}")
    try:
        new = contract(graph, args.vertex)
    except GraphError as exc:
        return False, {"vertex": args.vertex, "reason": str(exc)}
    return True, {"vertex": args.vertex, "graph": new.to_json()}


def cmd_picard_reduce(args):
    if args.fibration:
        fib = FibrationPresentation.from_json(_load_json(args.fibration))
    else:
        fib = load_fixture(args.fixture).fibration
    if args.element:
        el = PicardElement.from_json(_load_json(args.element))
    else:
        el = load_fixture(args.element_fixture).picard_element
    std = standard_form(el, fib)
    return True, {
        "fibration": fib.to_json(),
        "rank": pic_rank(fib),
        "input": el.to_json(),
        "standard": std.to_json(),
        "positive": is_positive(el, fib),
    }


def cmd_counts(args):
    return True, intersection_counts(args.N, args.r).to_json()


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lndlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-surface", help="verify the defining relations on the chart")
    p.add_argument("--fixture", default="surface-S", choices=["surface-S", "bundle-skew", "bundle-noskew"])
    p.add_argument("--relations", help="JSON list of [label, lhs, rhs] replacing the fixture's relations")
    p.set_defaults(handler=cmd_check_surface)

    p = sub.add_parser("check-automorphism", help="verify that a generator map preserves the relations")
    p.add_argument("--fixture", default="surface-S", choices=["surface-S"])
    p.add_argument("--map", help="JSON object generator -> expression (default: the involution)")
    p.add_argument("--chart-map", help="JSON object chart variable -> expression, checked for consistency")
    p.set_defaults(handler=cmd_check_automorphism)

    for name, handler, helptext in (
        ("graded-lnd", cmd_graded_lnd, "obstruction to homogeneous lnd's on a monomial algebra"),
        ("membership", cmd_membership, "bounded semigroup membership"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--fixture", default="graded-R", choices=["graded-R"])
        p.add_argument("--generators", help="JSON list of [r, s] lattice points")
        if name == "membership":
            p.add_argument("--point", required=True, help="r,s")
            p.add_argument("--bound", type=int, default=8)
        p.set_defaults(handler=handler)

    p = sub.add_parser("check-derivation", help="regularity and nilpotency of the skew derivation family")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--max-iter", type=int, help="nilpotency bound (default: LNDLAB_MAX_ITER or 64)")
    p.set_defaults(handler=cmd_check_derivation)

    def graph_args(p):
        p.add_argument("--graph", help="graph JSON (inline or path)")
        p.add_argument("--fixture", default="divisor-graph-S", choices=["divisor-graph-S"])

    p = sub.add_parser("fiber-solve", help="kernel of the fiber pairing equations")
    graph_args(p)
    p.add_argument("--fiber", help="comma-separated fiber vertices")
    p.add_argument("--boundary", help="comma-separated external vertices with free coefficients")
    p.set_defaults(handler=cmd_fiber_solve)

    p = sub.add_parser("validate-fiber", help="check that a divisor is numerically a fiber")
    graph_args(p)
    p.add_argument("--divisor", help="JSON object vertex -> coefficient")
    p.add_argument("--name", default="F0", choices=["F0", "Finf"], help="fixture divisor when --divisor is absent")
    p.set_defaults(handler=cmd_validate_fiber)

    p = sub.add_parser("contract", help="blow down a (-1)-curve")
    graph_args(p)
    p.add_argument("--vertex", required=True)
    p.set_defaults(handler=cmd_contract)

    p = sub.add_parser("picard-reduce", help="standard form and positivity of a Picard class")
    p.add_argument("--fibration", help='JSON like {"fibers": [[2], [2]]}')
    p.add_argument("--fixture", default="fibration-b", choices=["fibration-b"])
    p.add_argument("--element", help='JSON like {"m": 0, "coeffs": [[0], [-2]]}')
    p.add_argument("--element-fixture", default="bundle-skew", choices=["bundle-skew", "bundle-noskew"])
    p.set_defaults(handler=cmd_picard_reduce)

    p = sub.add_parser("counts", help="intersection-count table for (N, r)")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(handler=cmd_counts)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    try:
        ok, report = args.handler(args)
    except LndlabError as exc:
        print(json.dumps({"command": args.command, "error": str(exc)}, indent=2))
        return EXIT_INPUT
    out = {"command": args.command, "ok": ok, **report}
    print(json.dumps(out, indent=2))
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

JSON goes to stdout.  Exit codes: 0 success, 2 invalid input, 3 a violated
invariant (a bug or an impossible input).  On failure only a diagnostic is
written, to stderr.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any

from . import __version__
from .abel import (
    abel_fibers,
    abel_image,
    bvine_set,
    is_one_general,
    vine_abel_multidegree,
    vine_parameters,
)
from .balanced import enumerate_balanced, is_d_general
from .checks import run_suite
from .corpus import CorpusSpec, generate, write_corpus
from .errors import AbelGraphError, GenusTooSmall, InvariantViolation
from .graph import (
    DualGraph,
    PointOnCurve,
    bridges,
    is_quasistable,
    is_stable,
    separating_trees_of_lines,
    small_tail_set,
    stability_class,
    tails,
)
from .io import (
    abel_image_to_obj,
    balanced_to_obj,
    class_group_to_obj,
    dumps,
    load_graph,
    point_to_obj,
)
from .lattice import class_group, reference_multidegree

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INVARIANT = 3


def _summary(X: DualGraph) -> dict:
    return {
        "gamma": X.gamma,
        "edges": len(X.edges),
        "genus": X.genus,
        "stability": stability_class(X),
        "bridges": bridges(X),
    }


def _balanced_report(X: DualGraph, d: int) -> dict:
    if is_stable(X):
        gen = is_d_general(X, d)
        out = balanced_to_obj(gen.balanced, gen.general, gen.witness)
        out["class_map"] = {
            "order": gen.class_map.order,
            "surjective": gen.class_map.surjective,
            "injective": gen.class_map.injective,
        }
        return out
    return balanced_to_obj(enumerate_balanced(X, d))


def _tails_report(X: DualGraph) -> list[dict]:
    return [
        {"vertices": list(t.sorted_ids), "bridge": t.bridge, "genus": t.genus, "size": t.size_class}
        for t in tails(X)
    ]


def all_points(X: DualGraph, label: str = "p") -> list[PointOnCurve]:
    return [PointOnCurve.smooth(v, label) for v in X.vertex_ids] + [
        PointOnCurve.node(e.id) for e in X.edges
    ]


def cmd_analyze(args) -> dict:
    X = load_graph(args.graph)
    if X.genus < 2:
        raise GenusTooSmall(f"arithmetic genus {X.genus} < 2")
    report: dict[str, Any] = {
        "graph": _summary(X),
        "class_group": class_group_to_obj(X, class_group(X)),
        "reference": {str(d): reference_multidegree(X, d, args.base).as_dict() for d in args.degree},
        "tails": _tails_report(X),
        "separating_trees": [sorted(t) for t in separating_trees_of_lines(X)],
    }
    if is_quasistable(X):
        report["balanced"] = [_balanced_report(X, d) for d in args.degree]
    if is_stable(X):
        report["small_tails"] = [list(t.sorted_ids) for t in small_tail_set(X)]
        report["one_general"] = is_one_general(X)
        report["abel"] = [abel_image_to_obj(abel_image(X, p)) for p in all_points(X)]
    return report


def _point_from_args(args) -> PointOnCurve:
    if args.node is not None:
        return PointOnCurve.node(args.node)
    return PointOnCurve.smooth(args.component, args.label)


def cmd_abel(args) -> Any:
    X = load_graph(args.graph)
    if args.all:
        return [abel_image_to_obj(abel_image(X, p)) for p in all_points(X, args.label)]
    if args.component is None and args.node is None:
        raise AbelGraphError("choose --component, --node or --all")
    return abel_image_to_obj(abel_image(X, _point_from_args(args)))


def cmd_fibers(args) -> dict:
    X = load_graph(args.graph)
    labels = tuple(s for s in args.labels.split(",") if s)
    fibers = abel_fibers(X, labels or ("p",), verify=not args.no_verify)
    return {
        "trees": [sorted(t) for t in fibers.trees],
        "fibers": [[point_to_obj(p) for p in f] for f in fibers.partition],
        "nontrivial": len(fibers.nontrivial),
    }


def cmd_class_group(args) -> dict:
    X = load_graph(args.graph)
    return class_group_to_obj(X, class_group(X))


def cmd_balanced(args) -> dict:
    X = load_graph(args.graph)
    return _balanced_report(X, args.degree)


def cmd_vine(args) -> dict:
    X = load_graph(args.graph)
    params = vine_parameters(X, args.degree, args.first)
    report = bvine_set(X, args.degree, args.first)
    out = {
        "components": list(params.components),
        "d": args.degree,
        "delta": params.delta,
        "m_exact": str(params.lower_bound),
        "m": params.m,
        "r": [params.r[a] for a in range(args.degree + 1)],
        "bvine": [L.as_dict() for L in report.progression],
        "bvine_equals_B": report.equality,
        "d_general": report.equality,
    }
    if args.a is not None:
        out["a0"] = args.a
        out["multidegree"] = vine_abel_multidegree(X, args.degree, args.a, args.first).as_dict()
    return out


def _suite_one(X: DualGraph):
    return run_suite([X], with_degree_box=True)


def cmd_corpus(args) -> tuple[dict, bool]:
    spec = CorpusSpec(
        genus_min=args.genus_min,
        genus_max=args.genus_max,
        vertex_min=args.vertex_min,
        vertex_max=args.vertex_max,
        edge_cap=args.edge_cap,
        seed=args.seed,
        count=args.count,
        loop_prob=args.loop_prob,
    )
    spec.validate()
    if args.out:
        write_corpus(spec, args.out)
    graphs = list(generate(spec))
    summary: dict[str, Any] = {"count": len(graphs), "seed": spec.seed, "checks": {}, "failures": []}
    if args.no_suite:
        return summary, True
    if args.jobs > 1 and graphs:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            per_graph = list(pool.map(_suite_one, graphs))
    else:
        per_graph = [_suite_one(X) for X in graphs]
    for i, results in enumerate(per_graph):
        for r in results:
            tally = summary["checks"].setdefault(r.check, {"passed": 0, "failed": 0})
            tally["passed" if r.ok else "failed"] += 1
            if not r.ok:
                summary["failures"].append({"graph": i, "check": r.check, "detail": r.detail})
    summary["checks"] = dict(sorted(summary["checks"].items()))
    return summary, not summary["failures"]


def _pretty(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        lines = []
        for v in obj:
            if isinstance(v, dict):
                lines.append(f"{pad}-")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
        return "\n".join(lines)
    return f"{pad}{obj}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abelgraph", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"abelgraph {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, graph: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        if graph:
            p.add_argument("graph", help="graph JSON file")
        p.add_argument("--pretty", action="store_true", help="human-readable text instead of JSON")
        return p

    p = add("analyze", "full report for one graph")
    p.add_argument("--degree", type=int, action="append", help="degrees to analyze (repeatable, default 1)")
    p.add_argument("--base", default=None, help="base vertex for class representatives")
    p.set_defaults(func=cmd_analyze)

    p = add("abel", "Abel image of a point")
    p.add_argument("--component")
    p.add_argument("--label", default="p")
    p.add_argument("--node")
    p.add_argument("--all", action="store_true", help="one row per component and per node")
    p.set_defaults(func=cmd_abel)

    p = add("fibers", "fibers of the completed Abel map")
    p.add_argument("--labels", default="p", help="comma-separated smooth point labels per component")
    p.add_argument("--no-verify", action="store_true", help="skip the comparator cross-check")
    p.set_defaults(func=cmd_fibers)

    p = add("class-group", "degree class group")
    p.set_defaults(func=cmd_class_group)

    p = add("balanced", "balanced multidegrees in one degree")
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_balanced)

    p = add("vine", "two-component Abel multidegree")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--a", type=int, default=None, help="number of points on the first component")
    p.add_argument("--first", default=None, help="first component (default: smallest id)")
    p.set_defaults(func=cmd_vine)

    p = add("corpus", "generate a random stable corpus and run the invariant suite", graph=False)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--genus-min", type=int, default=2)
    p.add_argument("--genus-max", type=int, default=5)
    p.add_argument("--vertex-min", type=int, default=1)
    p.add_argument("--vertex-max", type=int, default=6)
    p.add_argument("--edge-cap", type=int, default=None)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--loop-prob", type=float, default=0.15)
    p.add_argument("--out", default=None, help="directory for the graph JSON files")
    p.add_argument("--no-suite", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "degree", None) is None and args.command == "analyze":
        args.degree = [1]
    try:
        result = args.func(args)
        ok = True
        if args.command == "corpus":
            result, ok = result
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except AbelGraphError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not ok:
        print(dumps(result), file=sys.stderr)
        return EXIT_INVARIANT
    print(_pretty(result) if args.pretty else dumps(result))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""JSON encoding of graphs and reports.

Serialization is canonical: ids sorted, keys sorted, so that parse followed
by dump is idempotent and reports are byte-stable.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .abel import AbelImage
from .balanced import BalancedSet
from .errors import ParseError
from .graph import DualGraph, Edge, Vertex
from .lattice import DegreeClassGroup, Multidegree, spanning_tree_count


def graph_from_obj(obj: Any) -> DualGraph:
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise ParseError("graph JSON needs a 'vertices' list")
    try:
        vertices = tuple(Vertex(v["id"], v["genus"]) for v in obj["vertices"])
        edges = []
        for e in obj.get("edges", []):
            ends = e["ends"]
            if not isinstance(ends, (list, tuple)) or len(ends) != 2:
                raise ParseError(f"edge {e.get('id')!r} needs exactly two ends")
            edges.append(Edge(e["id"], (ends[0], ends[1])))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed graph JSON: {exc}") from exc
    return DualGraph(vertices, tuple(edges))


def graph_to_obj(X: DualGraph) -> dict:
    return {
        "vertices": [{"id": v.id, "genus": v.genus} for v in X.vertices],
        "edges": [{"id": e.id, "ends": list(e.ends)} for e in X.edges],
    }


def parse_graph(text: str) -> DualGraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return graph_from_obj(obj)


def load_graph(path: str | Path) -> DualGraph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_graph(text)


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def dump_graph(X: DualGraph) -> str:
    return dumps(graph_to_obj(X))


def multidegree_to_obj(L: Multidegree) -> dict:
    return {"values": L.as_dict()}


def multidegree_from_obj(X: DualGraph, obj: Any) -> Multidegree:
    if not isinstance(obj, dict) or not isinstance(obj.get("values"), dict):
        raise ParseError("multidegree JSON needs a 'values' object")
    return Multidegree.from_mapping(X, obj["values"])


def class_group_to_obj(X: DualGraph, group: DegreeClassGroup) -> dict:
    return {
        "invariant_factors": list(group.invariant_factors),
        "order": group.order,
        "spanning_trees": spanning_tree_count(X),
    }


def balanced_to_obj(bal: BalancedSet, general: bool | None = None, witness: Multidegree | None = None) -> dict:
    out = {
        "d": bal.d,
        "B": [L.as_dict() for L in bal.B],
        "B_tilde": [L.as_dict() for L in bal.Btilde],
    }
    if general is not None:
        out["d_general"] = general
        out["witness"] = witness.as_dict() if witness is not None else None
    return out


def abel_image_to_obj(image: AbelImage) -> dict:
    host = {"kind": image.host_kind}
    if image.node is not None:
        host["edge"] = image.node
        host["exceptional"] = image.exceptional
    out = {
        "point": point_to_obj(image.point),
        "host": host,
        "multidegree": image.multidegree.as_dict(),
        "boundary": image.boundary,
        "pieces": [
            {
                "vertices": list(piece.sorted_ids),
                "divisor": [[t.symbol, t.vertex, t.coeff] for t in piece.terms],
                "degree": piece.degree,
            }
            for piece in image.pieces
        ],
    }
    if image.qfix_extension:
        # same formulas, applied beyond 1-general curves with the half tail kept in Q(X)
        out["extension"] = "not-1-general"
    return out


def point_to_obj(p) -> dict:
    if p.is_node:
        return {"kind": "node", "edge": p.edge}
    return {"kind": "smoothPoint", "component": p.component, "label": p.label}


def write_graph(X: DualGraph, path: str | Path) -> None:
    Path(path).write_text(dump_graph(X) + "\n", encoding="utf-8")


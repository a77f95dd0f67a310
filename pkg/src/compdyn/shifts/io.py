"""JSON encodings of shift presentations."""

from __future__ import annotations

import json

from .presentations import ForbiddenSetSFT, GeneratingSet, LabeledGraph, TransitionMatrix


def presentation_from_json(data):
    """Decode any of the four presentation formats; ``data`` is a dict or JSON text."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if "forbidden" in data:
        return ForbiddenSetSFT(int(data["alphabet"]), tuple(tuple(w) for w in data["forbidden"]))
    if "matrix" in data:
        return TransitionMatrix(data["matrix"])
    if "edges" in data:
        edges = [(e["from"], e["to"], e["label"]) for e in data["edges"]]
        return LabeledGraph(int(data["vertices"]), edges, data.get("alphabet"))
    if "generators" in data:
        return GeneratingSet(
            int(data["alphabet"]),
            tuple(tuple(g) for g in data["generators"]),
            bool(data.get("unique_representation", False)),
            complete=bool(data.get("complete", True)),
        )
    raise ValueError("unrecognized presentation: expected forbidden, matrix, edges or generators")


def presentation_to_json(X) -> dict:
    if isinstance(X, ForbiddenSetSFT):
        return {"alphabet": X.d, "forbidden": [list(w) for w in X.forbidden]}
    if isinstance(X, TransitionMatrix):
        return {"matrix": [list(r) for r in X.matrix]}
    if isinstance(X, LabeledGraph):
        return {
            "vertices": X.vertices,
            "edges": [{"from": a, "to": b, "label": s} for a, b, s in X.edges],
        }
    if isinstance(X, GeneratingSet):
        return {
            "alphabet": X.d,
            "generators": [list(g) for g in X.generators],
            "unique_representation": X.unique_representation,
        }
    raise TypeError(f"not a presentation: {type(X).__name__}")

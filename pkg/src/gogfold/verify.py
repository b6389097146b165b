"""Checks of the three worked examples, reported as JSON-ready dicts."""
from __future__ import annotations

import time
from typing import Optional

from . import fixtures as X
from .bass_serre import concat, inverse, normalize, power
from .folding import shape
from .gog import format_path

REPORT_SCHEMA = "gogfold.report/1"


def _entry(name: str, ok: bool, t0: float, **details) -> dict:
    return {"id": name, "status": "pass" if ok else "fail", "elapsed": round(time.perf_counter() - t0, 4), **details}


def check_example_one(G=None) -> dict:
    """``[x,y]^2 x u^-1`` reduces to the identity."""
    t0 = time.perf_counter()
    G = X.example_one() if G is None else G
    w = X.example_one_witness(G)
    x, y, u = w["x"], w["y"], w["u"]
    comm = concat(G, inverse(G, x), inverse(G, y), x, y)
    nf = normalize(G, concat(G, power(G, comm, 2), x, inverse(G, u)))
    ok = not nf.edges and G.vertices[nf.start].is_trivial(nf.elements[0])
    return _entry("example1", ok, t0, normal_form=format_path(G, nf))


def check_example_three(G=None) -> dict:
    """``(sr)^-1 y (sr) = r^-1 y r`` with ``y = b^-1 a b``."""
    from .gog import parse_path
    t0 = time.perf_counter()
    G = X.example_three() if G is None else G
    s = parse_path(G, "[ X: [ F: 1 , s , F: 1 ] ]")
    r = parse_path(G, "[ X: 1 , r , X: 1 ]")
    y = parse_path(G, "[ X: [ F: b^-1 a b ] ]")
    sr = concat(G, s, r)
    diff = concat(G, inverse(G, sr), y, sr, inverse(G, concat(G, inverse(G, r), y, r)))
    nf = normalize(G, diff)
    ok = not nf.edges and G.vertices[nf.start].is_trivial(nf.elements[0])
    return _entry("example3", ok, t0, normal_form=format_path(G, nf))


def example_two_shape_ok(induced) -> bool:
    """One independent cycle and exactly one abelian vertex group."""
    sh = shape(induced)
    n_ab = sum(1 for kind, _ in sh["vertices"].values() if kind == "abelian")
    return sh["cycle_rank"] == 1 and n_ab == 1


def check_example_two(budget: Optional[int] = None) -> dict:
    """Fold ``<F, s^-1 b s, t>`` over the outer splitting and compare the induced shape."""
    t0 = time.perf_counter()
    res = X.example_two_fold(budget)
    rel = X.example_two_relations(X.example_two_flat())
    outer, flat = res["induced_outer"], res["induced_flat"]
    return _entry("example2", example_two_shape_ok(outer), t0,
                  expected={"cycle_rank": 1, "abelian_vertices": 1},
                  induced_outer=_shape_json(outer), induced_flat=_shape_json(flat),
                  moves=len(res["trace"]), relations=rel)


def _shape_json(G) -> dict:
    sh = shape(G)
    return {"vertices": {k: list(v) for k, v in sh["vertices"].items()}, "edges": sh["edges"],
            "cycle_rank": sh["cycle_rank"], "edge_ranks": sh["edge_ranks"]}


def verify_paper_examples(which=("example1", "example2", "example3"), budget: Optional[int] = None) -> dict:
    checks = {"example1": check_example_one, "example2": lambda: check_example_two(budget),
              "example3": check_example_three}
    entries = [checks[k]() for k in which]
    return {"schema": REPORT_SCHEMA, "tasks": entries, "passed": all(e["status"] == "pass" for e in entries)}

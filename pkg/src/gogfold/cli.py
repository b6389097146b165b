"""Command line front end and task runner.

Every subcommand builds a task and runs it through :func:`run_task`, so a
task file and the equivalent command line give the same report.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from . import stallings as S
from .bass_serre import GAPath, is_identity, normalize
from .classify import classify_splitting
from .errors import BudgetExceeded, GogError, ParseError
from .folding import fold, induced_splitting, shape
from .gagraph import make_wedge
from .gog import GraphOfGroups, betti, format_path, to_dot, to_json_dict
from .groups import FreeGroup
from .moves import collapse_edge
from .syntax import Task, TaskFile, parse_file
from .verify import REPORT_SCHEMA, verify_paper_examples


class TaskError(GogError):
    def __init__(self, task_id: str, exc: Exception):
        super().__init__(f"{task_id}: {type(exc).__name__}: {exc}")
        self.task_id = task_id
        self.cause = exc


def _need(task: Task, n: int):
    if len(task.args) < n:
        raise GogError(f"task {task.kind} needs {n} argument(s), got {len(task.args)}")


def _gog(tf: TaskFile, name: str) -> GraphOfGroups:
    if name not in tf.gogs:
        raise GogError(f"unknown graph of groups {name!r}")
    return tf.gogs[name]


def _word(tf: TaskFile, name: str):
    if name not in tf.words:
        raise GogError(f"unknown word {name!r}")
    ctx = tf.context(tf.words[name][0])
    return ctx, tf.words[name][1]


def _expect(result, expected: Optional[str]) -> bool:
    if expected is None:
        return True
    return str(result).lower() == expected.lower()


def _task_reduce(tf, task, budget):
    _need(task, 1)
    ctx, x = _word(tf, task.args[0])
    if isinstance(ctx, GraphOfGroups):
        nf = normalize(ctx, x)
        text = format_path(ctx, nf)
        ident = is_identity(ctx, x)
    else:
        text = ctx.format(ctx.mul(x, ctx.identity()))
        ident = ctx.is_trivial(x)
    exp = task.opts.get("expect")
    ok = _expect("identity" if ident else "nontrivial", exp) if exp in ("identity", "nontrivial") else True
    return ok, {"normal_form": text, "identity": ident}


def _task_britton(tf, task, budget):
    _need(task, 1)
    ctx, x = _word(tf, task.args[0])
    if not isinstance(ctx, GraphOfGroups):
        raise GogError("britton needs a word in a graph of groups")
    nf = normalize(ctx, x)
    ident = not nf.edges and ctx.vertices[nf.start].is_trivial(nf.elements[0])
    exp = task.opts.get("expect")
    return _expect("identity" if ident else "nontrivial", exp), {
        "normal_form": format_path(ctx, nf), "identity": ident, "length": len(nf.edges)}


def _task_member(tf, task, budget):
    _need(task, 2)
    ctx, w = _word(tf, task.args[0])
    if not isinstance(ctx, FreeGroup):
        raise GogError("member works in a free group")
    gens = []
    for name in task.args[1:]:
        c2, g = _word(tf, name)
        if c2 != ctx:
            raise GogError(f"word {name!r} lives in a different group")
        gens.append(g)
    H = S.subgroup_graph(gens, ctx.rank)
    res = S.member(H, w)
    return _expect(res, task.opts.get("expect")), {
        "member": res, "subgroup_rank": H.subgroup_rank(), "graph_vertices": H.n_vertices,
        "_dot": H.to_dot()}


def _task_betti(tf, task, budget):
    _need(task, 1)
    b = betti(_gog(tf, task.args[0]))
    return _expect(b, task.opts.get("expect")), {"betti": b}


def _task_collapse(tf, task, budget):
    _need(task, 2)
    G = collapse_edge(_gog(tf, task.args[0]), task.args[1])
    exp = task.opts.get("expect_vertices")
    return _expect(len(G.vertices), exp), {"graph": to_json_dict(G), "_dot": to_dot(G)}


def _task_classify(tf, task, budget):
    _need(task, 1)
    G = _gog(tf, task.args[0])
    Fv = task.opts.get("F") or next(iter(G.vertices))
    label = classify_splitting(G, Fv)
    return _expect(label.id, task.opts.get("expect")), {"classification": label.to_json_dict()}


def _task_fold(tf, task, budget):
    _need(task, 1)
    G = _gog(tf, task.args[0])
    base = task.opts.get("base") or next(iter(G.vertices))
    vg = G.vertices[base]
    elems = []
    for name in filter(None, task.opts.get("elements", "").split(",")):
        ctx, x = _word(tf, name)
        vg.check(x)
        elems.append(x)
    paths = []
    for name in filter(None, task.opts.get("words", "").split(",")):
        ctx, p = _word(tf, name)
        if ctx is not G or not isinstance(p, GAPath):
            raise GogError(f"word {name!r} is not a path in {task.args[0]!r}")
        paths.append(p)
    if "budget" in task.opts:
        budget = int(task.opts["budget"])
    B = make_wedge(G, base, elems, paths)
    res = fold(B, budget)
    induced = induced_splitting(res.graph)
    sh = shape(induced)
    ok = True
    for key in ("cycle_rank", "edges"):
        if f"expect_{key}" in task.opts:
            ok = ok and sh[key] == int(task.opts[f"expect_{key}"])
    return ok, {"induced": to_json_dict(induced), "shape": {**sh, "vertices": {k: list(v) for k, v in sh["vertices"].items()}},
                "moves": res.trace, "folded": res.graph.to_json_dict(), "_dot": res.graph.to_dot()}


def _task_verify(tf, task, budget):
    which = task.args or ("all",)
    if "all" in which:
        which = ("example1", "example2", "example3")
    rep = verify_paper_examples(tuple(which), budget)
    return rep["passed"], {"examples": rep["tasks"]}


def _task_dot(tf, task, budget):
    _need(task, 1)
    G = _gog(tf, task.args[0])
    return True, {"_dot": to_dot(G, task.args[0])}


DISPATCH = {"reduce": _task_reduce, "britton": _task_britton, "member": _task_member, "betti": _task_betti,
            "collapse": _task_collapse, "classify": _task_classify, "fold": _task_fold, "verify": _task_verify,
            "dot": _task_dot}


def run_task(tf: TaskFile, task: Task, budget: Optional[int] = None, seed: int = 0) -> dict:
    """Run one task; module errors are reported (not raised) with the task id."""
    tid = f"{task.kind}@{task.line}" if task.line else task.kind
    t0 = time.perf_counter()
    entry = {"id": tid, "kind": task.kind, "args": list(task.args), "options": dict(task.options)}
    try:
        ok, result = DISPATCH[task.kind](tf, task, budget)
        entry["status"] = "pass" if ok else "fail"
        entry.update(result)
    except BudgetExceeded as exc:
        entry["status"] = "pass" if task.opts.get("expect") == "BudgetExceeded" else "fail"
        entry["error"] = {"type": "BudgetExceeded", "budget": exc.budget, "message": str(exc)}
        entry["moves"] = list(exc.trace or [])
    except GogError as exc:
        err = TaskError(tid, exc)
        entry["status"] = "error"
        entry["error"] = {"type": type(exc).__name__, "message": str(err)}
    entry["elapsed"] = round(time.perf_counter() - t0, 4)
    return entry


def run(tf: TaskFile, budget: Optional[int] = None, seed: int = 0) -> dict:
    """Run every task of a file in order."""
    entries = [run_task(tf, t, budget, seed) for t in tf.tasks]
    return {"schema": REPORT_SCHEMA, "seed": seed, "tasks": entries,
            "passed": all(e["status"] == "pass" for e in entries)}


# ---- command line ----------------------------------------------------------

def _inline_free(words_text, generators: Optional[str]) -> TaskFile:
    """A throwaway task file holding inline free-group words named w0, w1, ..."""
    if generators:
        names = [g.strip() for g in generators.split(",") if g.strip()]
    else:
        names = sorted({tok.split("^")[0] for text in words_text for tok in text.split()} - {"1"})
    F = FreeGroup(names)
    tf = TaskFile()
    tf.groups["F"] = F
    tf.group_specs["F"] = ("free", tuple(names))
    for i, text in enumerate(words_text):
        x = F.parse(text)
        F.check(x)
        tf.words[f"w{i}"] = ("F", x)
    return tf


def _load(path: str) -> TaskFile:
    return parse_file(path)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed recorded in the report (default 0)")
    common.add_argument("--budget", type=int, default=None, help="fold move budget")
    common.add_argument("--out", choices=("json", "dot", "text"), default=None,
                        help="report format (default text; dot for export-dot)")
    # subcommands repeat the options without defaults so a value given before
    # the subcommand is not overwritten
    local = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    for a in common._actions:
        local.add_argument(*a.option_strings, type=a.type, choices=a.choices, help=a.help)

    p = argparse.ArgumentParser(prog="gogfold", parents=[common],
                                description="Graphs of groups, Britton normal forms and G(A)-graph folding.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("reduce", parents=[local], help="free reduction, or normal form of a named path")
    s.add_argument("word", help="word text, or a word name with --file")
    s.add_argument("--file")
    s.add_argument("--generators", help="comma separated generator names for inline words")

    s = sub.add_parser("member", parents=[local], help="subgroup membership in a free group")
    s.add_argument("word")
    s.add_argument("gens", nargs="+")
    s.add_argument("--file")
    s.add_argument("--generators")

    s = sub.add_parser("britton", parents=[local], help="Britton normal form of a named path")
    s.add_argument("file")
    s.add_argument("word")

    s = sub.add_parser("fold", parents=[local], help="fold the wedge of named elements and paths")
    s.add_argument("file")
    s.add_argument("gog")
    s.add_argument("--base")
    s.add_argument("--words", default="", help="comma separated path names")
    s.add_argument("--elements", default="", help="comma separated base vertex element names")

    s = sub.add_parser("collapse", parents=[local], help="collapse one edge")
    s.add_argument("file")
    s.add_argument("gog")
    s.add_argument("edge")

    s = sub.add_parser("betti", parents=[local], help="first Betti number")
    s.add_argument("file")
    s.add_argument("gog")

    s = sub.add_parser("classify", parents=[local], help="match a splitting against the case list")
    s.add_argument("file")
    s.add_argument("gog")
    s.add_argument("--F", dest="F_vertex")

    s = sub.add_parser("verify-examples", parents=[local], help="check the three worked examples")
    s.add_argument("which", nargs="*", default=[])

    s = sub.add_parser("export-dot", parents=[local], help="DOT drawing of a graph of groups")
    s.add_argument("file")
    s.add_argument("gog")

    s = sub.add_parser("run", parents=[local], help="run every task of a task file")
    s.add_argument("file")
    return p


def _single(tf: TaskFile, kind: str, args=(), **opts) -> TaskFile:
    tf.tasks = [Task(kind, tuple(args), tuple(sorted((k, v) for k, v in opts.items() if v)))]
    return tf


def _plan(ns) -> TaskFile:
    c = ns.command
    if c == "reduce":
        if ns.file:
            return _single(_load(ns.file), "reduce", [ns.word])
        return _single(_inline_free([ns.word], ns.generators), "reduce", ["w0"])
    if c == "member":
        if ns.file:
            return _single(_load(ns.file), "member", [ns.word, *ns.gens])
        tf = _inline_free([ns.word, *ns.gens], ns.generators)
        return _single(tf, "member", [f"w{i}" for i in range(len(ns.gens) + 1)])
    if c == "britton":
        return _single(_load(ns.file), "britton", [ns.word])
    if c == "fold":
        return _single(_load(ns.file), "fold", [ns.gog], base=ns.base, words=ns.words, elements=ns.elements)
    if c == "collapse":
        return _single(_load(ns.file), "collapse", [ns.gog, ns.edge])
    if c == "betti":
        return _single(_load(ns.file), "betti", [ns.gog])
    if c == "classify":
        return _single(_load(ns.file), "classify", [ns.gog], F=ns.F_vertex)
    if c == "verify-examples":
        return _single(TaskFile(), "verify", ns.which or ["all"])
    if c == "export-dot":
        return _single(_load(ns.file), "dot", [ns.gog])
    if c == "run":
        return _load(ns.file)
    raise AssertionError(c)


def _public(entry: dict) -> dict:
    return {k: v for k, v in entry.items() if not k.startswith("_")}


def _text(report: dict) -> str:
    lines = []
    for e in report["tasks"]:
        head = f"{e['status'].upper():5} {e['id']}"
        keys = [k for k in ("normal_form", "identity", "member", "betti", "classification", "shape", "error")
                if k in e]
        for k in keys:
            v = e[k]
            if k == "classification":
                v = v["id"]
            elif k == "error":
                v = v["message"]
            head += f"  {k}={v}"
        lines.append(head)
        for ex in e.get("examples", []):
            lines.append(f"  {ex['status'].upper():5} {ex['id']}")
    lines.append("ok" if report["passed"] else "FAILED")
    return "\n".join(lines)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        tf = _plan(ns)
    except (ParseError, GogError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run(tf, ns.budget, ns.seed)
    if ns.out is None:
        ns.out = "dot" if ns.command == "export-dot" else "text"
    if ns.out == "json":
        out = dict(report, tasks=[_public(e) for e in report["tasks"]])
        print(json.dumps(out, indent=2, default=str))
    elif ns.out == "dot":
        dots = [e["_dot"] for e in report["tasks"] if "_dot" in e]
        if not dots:
            print("error: no task produced a drawable graph", file=sys.stderr)
            return 2
        print("\n".join(dots))
    else:
        print(_text(report))
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())

"""Task files: groups, graphs of groups, named words and tasks in a small line-based language.

    group F = free(a, b)
    group A = abelian(c, r)
    gog G {
      vertex u = F
      vertex v = A
      edge e: u -> v, rank 1, i = a, t = c
    }
    word w = [ u: b , e , v: r , e^-1 , u: b^-1 ] in G
    word h = a b^-1 in F
    task betti G expect=3

Boundary images are separated by ``;`` (paths contain commas).  A vertex
may also be ``free(...)``, ``abelian(...)`` or ``nested(GOG, VERTEX)``.
``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import GogError, InvalidGraph, ParseError
from .gog import EdgeData, GraphOfGroups, format_path, parse_path, require_valid
from .groups import FreeAbelianGroup, FreeGroup, NestedGroup

TASK_KINDS = ("reduce", "member", "britton", "fold", "collapse", "betti", "classify", "verify", "dot")

_ID = r"[A-Za-z_][A-Za-z0-9_'.+~]*"
_GROUP_RE = re.compile(rf"^group\s+({_ID})\s*=\s*(.+)$")
_CTOR_RE = re.compile(rf"^(free|abelian)\s*\(\s*((?:{_ID}\s*(?:,\s*{_ID}\s*)*)?)\)$")
_NESTED_RE = re.compile(rf"^nested\s*\(\s*({_ID})\s*,\s*({_ID})\s*\)$")
_GOG_RE = re.compile(rf"^gog\s+({_ID})\s*\{{\s*(\}})?$")
_VERTEX_RE = re.compile(rf"^vertex\s+({_ID})\s*=\s*(.+)$")
_EDGE_HEAD_RE = re.compile(rf"^edge\s+({_ID})\s*:\s*({_ID})\s*->\s*({_ID})$")
_RANK_RE = re.compile(r"^rank\s+(\d+)$")
_IMG_RE = re.compile(r"^(i|t)\s*=\s*(.*)$")
_WORD_RE = re.compile(rf"^word\s+({_ID})\s*=\s*(.+?)(?:\s+in\s+({_ID}))?$")
_TASK_RE = re.compile(r"^task\s+(\S+)(.*)$")


@dataclass
class Task:
    kind: str
    args: tuple = ()
    options: tuple = ()  # sorted (key, value) pairs
    line: int = 0

    @property
    def opts(self) -> dict:
        return dict(self.options)

    def text(self) -> str:
        parts = ["task", self.kind, *self.args, *(f"{k}={v}" for k, v in self.options)]
        return " ".join(parts)


@dataclass
class TaskFile:
    groups: dict = field(default_factory=dict)      # name -> vertex group
    group_specs: dict = field(default_factory=dict)  # name -> ("free"|"abelian", names)
    gogs: dict = field(default_factory=dict)        # name -> GraphOfGroups
    vertex_refs: dict = field(default_factory=dict)  # gog name -> {vertex: ref text}
    words: dict = field(default_factory=dict)       # name -> (context name, element)
    tasks: list = field(default_factory=list)

    def context(self, name: str):
        if name in self.gogs:
            return self.gogs[name]
        if name in self.groups:
            return self.groups[name]
        raise KeyError(name)

    def word(self, name: str):
        return self.words[name][1]

    def format_word(self, name: str) -> str:
        ctx_name, x = self.words[name]
        ctx = self.context(ctx_name)
        if isinstance(ctx, GraphOfGroups):
            return format_path(ctx, x)
        return ctx.format(x)

    def canonical(self) -> tuple:
        gogs = tuple((n, _gog_key(G, self.vertex_refs[n])) for n, G in self.gogs.items())
        words = tuple((n, self.words[n][0], self.format_word(n)) for n in self.words)
        tasks = tuple((t.kind, t.args, t.options) for t in self.tasks)
        return (tuple(self.group_specs.items()), gogs, words, tasks)

    def __eq__(self, other):
        return isinstance(other, TaskFile) and self.canonical() == other.canonical()

    def __str__(self):
        return print_taskfile(self)


def _gog_key(G: GraphOfGroups, refs: dict) -> tuple:
    edges = []
    for e in G.edges:
        A, B = G.vertices[e.src], G.vertices[e.dst]
        edges.append((e.id, e.src, e.dst, e.rank, tuple(A.format(x) for x in e.i_images),
                      tuple(B.format(x) for x in e.t_images)))
    return (tuple(sorted(refs.items())), tuple(edges))


def _split_top(text: str, sep: str) -> list:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [x.strip() for x in out]


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.tf = TaskFile()
        self.pos = 0

    def error(self, msg, line, col=1):
        raise ParseError(msg, line, col)

    def run(self) -> TaskFile:
        while self.pos < len(self.lines):
            n = self.pos + 1
            raw = self.lines[self.pos]
            self.pos += 1
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            col = len(raw) - len(raw.lstrip()) + 1
            head = line.split(None, 1)[0]
            if head == "group":
                self.group(line, n, col)
            elif head == "gog":
                self.gog(line, n, col)
            elif head == "word":
                self.word(line, n, col)
            elif head == "task":
                self.task(line, n, col)
            else:
                self.error(f"expected group, gog, word or task, found {head!r}", n, col)
        return self.tf

    def _fresh(self, name, n, col):
        if name in self.tf.groups or name in self.tf.gogs or name in self.tf.words:
            self.error(f"{name!r} is already declared", n, col)

    def group_ref(self, text, n, col):
        text = text.strip()
        m = _CTOR_RE.match(text)
        if m:
            names = [x.strip() for x in m.group(2).split(",") if x.strip()]
            if len(set(names)) != len(names):
                self.error("repeated generator name", n, col)
            return FreeGroup(names) if m.group(1) == "free" else FreeAbelianGroup(names)
        m = _NESTED_RE.match(text)
        if m:
            g, v = m.group(1), m.group(2)
            if g not in self.tf.gogs:
                self.error(f"unknown graph of groups {g!r}", n, col)
            if v not in self.tf.gogs[g].vertices:
                self.error(f"graph of groups {g!r} has no vertex {v!r}", n, col)
            return NestedGroup(self.tf.gogs[g], v)
        if text in self.tf.groups:
            return self.tf.groups[text]
        self.error(f"unknown group {text!r}", n, col)

    def group(self, line, n, col):
        m = _GROUP_RE.match(line)
        if not m:
            self.error("malformed group declaration", n, col)
        name = m.group(1)
        self._fresh(name, n, col)
        c = _CTOR_RE.match(m.group(2).strip())
        if not c:
            self.error("a group is free(...) or abelian(...)", n, col + line.index("=") + 1)
        vg = self.group_ref(m.group(2), n, col)
        self.tf.groups[name] = vg
        self.tf.group_specs[name] = (c.group(1), tuple(vg.alphabet.generators))

    def gog(self, line, n, col):
        m = _GOG_RE.match(line)
        if not m:
            self.error("expected 'gog NAME {'", n, col)
        name = m.group(1)
        self._fresh(name, n, col)
        vertices, refs, edges = {}, {}, []
        closed = m.group(2) is not None
        while not closed:
            if self.pos >= len(self.lines):
                self.error(f"graph of groups {name!r} is not closed", n, col)
            k = self.pos + 1
            raw = self.lines[self.pos]
            self.pos += 1
            body = raw.split("#", 1)[0].strip()
            c = len(raw) - len(raw.lstrip()) + 1
            if not body:
                continue
            if body == "}":
                closed = True
            elif body.startswith("vertex"):
                vm = _VERTEX_RE.match(body)
                if not vm:
                    self.error("malformed vertex declaration", k, c)
                if vm.group(1) in vertices:
                    self.error(f"vertex {vm.group(1)!r} declared twice", k, c)
                vertices[vm.group(1)] = self.group_ref(vm.group(2), k, c + body.index("=") + 1)
                refs[vm.group(1)] = vm.group(2).strip()
            elif body.startswith("edge"):
                edges.append(self.edge(body, vertices, k, c))
            else:
                self.error("expected vertex, edge or '}'", k, c)
        ids = [e.id for e in edges]
        if len(set(ids)) != len(ids):
            self.error(f"repeated edge id in {name!r}", n, col)
        if not vertices:
            self.error(f"graph of groups {name!r} has no vertices", n, col)
        try:
            G = require_valid(GraphOfGroups(vertices, edges, None, name))
        except InvalidGraph as exc:
            self.error(f"graph of groups {name!r} is invalid: {exc}", n, col)
        self.tf.gogs[name] = G
        self.tf.vertex_refs[name] = refs

    def edge(self, body, vertices, k, c) -> EdgeData:
        parts = _split_top(body, ",")
        if len(parts) != 4:
            self.error("an edge reads 'edge ID: SRC -> DST, rank N, i = ..., t = ...'", k, c)
        hm = _EDGE_HEAD_RE.match(parts[0])
        if not hm:
            self.error("malformed edge head", k, c)
        eid, src, dst = hm.groups()
        for v in (src, dst):
            if v not in vertices:
                self.error(f"edge {eid!r} refers to undeclared vertex {v!r}", k, c + body.index(v))
        rm = _RANK_RE.match(parts[1])
        if not rm:
            self.error("expected 'rank N'", k, c + body.index(parts[1]))
        rank = int(rm.group(1))
        imgs = {}
        for part in parts[2:]:
            im = _IMG_RE.match(part)
            if not im:
                self.error("expected 'i = ...' and 't = ...'", k, c + body.index(part))
            imgs[im.group(1)] = [x for x in _split_top(im.group(2), ";") if x]
        if set(imgs) != {"i", "t"}:
            self.error("an edge needs both i and t images", k, c)
        out = {}
        for side, v in (("i", src), ("t", dst)):
            if len(imgs[side]) != rank:
                self.error(f"edge {eid!r}: {len(imgs[side])} {side}-images for rank {rank}", k, c)
            try:
                out[side] = tuple(vertices[v].parse(x) for x in imgs[side])
            except GogError as exc:
                self.error(f"edge {eid!r}: {exc}", k, c)
        return EdgeData(eid, src, dst, rank, out["i"], out["t"])

    def word(self, line, n, col):
        m = _WORD_RE.match(line)
        if not m:
            self.error("malformed word declaration", n, col)
        name, text, ctx = m.group(1), m.group(2).strip(), m.group(3)
        self._fresh(name, n, col)
        if ctx is None:
            pool = self.tf.gogs if text.startswith("[") else self.tf.groups
            if not pool:
                self.error("word has no context; add 'in NAME'", n, col)
            ctx = list(pool)[-1]
        try:
            C = self.tf.context(ctx)
        except KeyError:
            self.error(f"unknown context {ctx!r}", n, col)
        try:
            x = parse_path(C, text) if isinstance(C, GraphOfGroups) else C.parse(text)
            if not isinstance(C, GraphOfGroups):
                C.check(x)
        except GogError as exc:
            self.error(f"word {name!r}: {exc}", n, col)
        self.tf.words[name] = (ctx, x)

    def task(self, line, n, col):
        m = _TASK_RE.match(line)
        kind = m.group(1)
        if kind not in TASK_KINDS:
            self.error(f"unknown task kind {kind!r}", n, col + 5)
        args, opts = [], {}
        for tok in m.group(2).split():
            if "=" in tok:
                k, v = tok.split("=", 1)
                opts[k] = v
            else:
                args.append(tok)
        self.check_refs(kind, args, opts, n, col)
        self.tf.tasks.append(Task(kind, tuple(args), tuple(sorted(opts.items())), n))

    def check_refs(self, kind, args, opts, n, col):
        def need(names, table, what):
            for x in names:
                if x not in table:
                    self.error(f"task {kind}: unknown {what} {x!r}", n, col)

        if kind in ("betti", "classify", "collapse", "fold", "dot"):
            if not args:
                self.error(f"task {kind} needs a graph of groups", n, col)
            need(args[:1], self.tf.gogs, "graph of groups")
            G = self.tf.gogs[args[0]]
            if kind == "collapse":
                need(args[1:2], G.edge_index, "edge")
            if kind == "classify" and "F" in opts:
                need([opts["F"]], G.vertices, "vertex")
            if kind == "fold":
                need([opts["base"]] if "base" in opts else [], G.vertices, "vertex")
                for key in ("elements", "words"):
                    need(filter(None, opts.get(key, "").split(",")), self.tf.words, "word")
        elif kind in ("reduce", "britton", "member"):
            if not args:
                self.error(f"task {kind} needs a word", n, col)
            need(args, self.tf.words, "word")
        elif kind == "verify":
            need(args, ("example1", "example2", "example3", "all"), "example")


def parse(text: str) -> TaskFile:
    return _Parser(text).run()


def parse_file(path) -> TaskFile:
    with open(path) as fh:
        return parse(fh.read())


def print_taskfile(tf: TaskFile) -> str:
    out = []
    for name, (kind, names) in tf.group_specs.items():
        out.append(f"group {name} = {kind}({', '.join(names)})")
    for name, G in tf.gogs.items():
        out.append(f"gog {name} {{")
        for v, ref in tf.vertex_refs[name].items():
            out.append(f"  vertex {v} = {ref}")
        for e in G.edges:
            A, B = G.vertices[e.src], G.vertices[e.dst]
            i = "; ".join(A.format(x) for x in e.i_images)
            t = "; ".join(B.format(x) for x in e.t_images)
            out.append(f"  edge {e.id}: {e.src} -> {e.dst}, rank {e.rank}, i = {i}, t = {t}")
        out.append("}")
    for name, (ctx, _) in tf.words.items():
        out.append(f"word {name} = {tf.format_word(name)} in {ctx}")
    for t in tf.tasks:
        out.append(t.text())
    return "\n".join(out) + "\n"

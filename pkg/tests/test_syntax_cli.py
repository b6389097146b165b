import json
import random
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from gogfold import cli, syntax, verify
from gogfold import fixtures as X
from gogfold.corpus import random_closed_path, random_gog
from gogfold.errors import ParseError
from gogfold.gog import format_path

TASKS = Path(__file__).resolve().parent.parent / "tasks"

AMALGAM = """\
group F = free(a, b)
group A = abelian(c, r)
gog G {
  vertex F = F
  vertex A = A
  edge e: F -> A, rank 1, i = a, t = c
}
task betti G expect=3
"""


def gog_text(G, name="G", words=()):
    lines = [f"gog {name} {{"]
    for v, vg in G.vertices.items():
        kind = "free" if vg.kind == "free" else "abelian"
        lines.append(f"  vertex {v} = {kind}({', '.join(vg.alphabet.generators)})")
    for e in G.edges:
        i = "; ".join(G.vertices[e.src].format(x) for x in e.i_images)
        t = "; ".join(G.vertices[e.dst].format(x) for x in e.t_images)
        lines.append(f"  edge {e.id}: {e.src} -> {e.dst}, rank {e.rank}, i = {i}, t = {t}")
    lines.append("}")
    for k, p in enumerate(words):
        lines.append(f"word w{k} = {format_path(G, p)} in {name}")
    lines.append(f"task betti {name}")
    return "\n".join(lines) + "\n"


def test_parse_amalgam_file():
    tf = syntax.parse(AMALGAM)
    assert set(tf.gogs) == {"G"} and len(tf.tasks) == 1
    assert tf.tasks[0].kind == "betti"


@pytest.mark.parametrize("text, line", [
    ("group F = free(a, b)\ngog G {\n  vertex F = F\n  edge e: F -> Q, rank 1, i = a, t = a\n}\n", 4),
    ("group F = free(a)\ngog G {\n  vertex F = Nope\n}\n", 3),
    ("task betti Missing\n", 1),
    ("group F = free(a, b)\nfrobnicate\n", 2),
    ("group F = free(a, b)\nword w = a c in F\n", 2),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        syntax.parse(text)
    assert info.value.line == line


@pytest.mark.parametrize("path", sorted(TASKS.glob("*.gog")), ids=lambda p: p.name)
def test_task_files_round_trip(path):
    tf = syntax.parse_file(path)
    again = syntax.parse(syntax.print_taskfile(tf))
    assert again == tf
    assert syntax.print_taskfile(again) == syntax.print_taskfile(tf)


@given(st.integers(0, 10**6))
def test_round_trip_fuzz(seed):
    rng = random.Random(seed)
    G = random_gog(rng)
    base = next(iter(G.vertices))
    words = [random_closed_path(rng, G, base, rng.randint(0, 3)) for _ in range(rng.randint(0, 2))]
    tf = syntax.parse(gog_text(G, words=words))
    H = tf.gogs["G"]
    assert H.edges == G.edges
    assert syntax.parse(syntax.print_taskfile(tf)) == tf


@pytest.mark.parametrize("path", sorted(TASKS.glob("*.gog")), ids=lambda p: p.name)
def test_task_files_pass(path, capsys):
    assert cli.main(["run", str(path)]) == 0


def test_run_is_deterministic(capsys):
    path = str(TASKS / "amalgam.gog")
    cli.main(["run", path, "--out", "json", "--seed", "7"])
    first = json.loads(capsys.readouterr().out)
    cli.main(["run", path, "--out", "json", "--seed", "7"])
    second = json.loads(capsys.readouterr().out)
    for r in first["tasks"] + second["tasks"]:
        r.pop("elapsed", None)
    assert first == second and first["seed"] == 7 and first["schema"] == "gogfold.report/1"


def test_subcommands(tmp_path, capsys):
    f = tmp_path / "g.gog"
    f.write_text(AMALGAM + "word w = [ F: b , e , A: r , e^-1 , F: b^-1 ] in G\n")
    assert cli.main(["betti", str(f), "G", "--out", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["tasks"][0]["betti"] == 3
    assert cli.main(["member", "a^3 b", "a^2", "a b"]) == 0
    assert cli.main(["reduce", "a a^-1 b", "--generators", "a,b"]) == 0
    assert cli.main(["britton", str(f), "w"]) == 0
    assert cli.main(["collapse", str(f), "G", "e"]) == 0
    assert cli.main(["classify", str(f), "G", "--F", "F"]) == 0
    assert cli.main(["export-dot", str(f), "G", "--out", "dot"]) == 0
    assert "digraph" in capsys.readouterr().out


def test_fold_budget_zero_reports_failure(tmp_path, capsys):
    path = TASKS / "example2_flat.gog"
    tf = syntax.parse_file(path)
    fold = next(t for t in tf.tasks if t.kind == "fold" and "expect" not in t.options)
    report = cli.run_task(tf, fold, budget=0, seed=0)
    assert report["status"] == "fail" and report["error"]["type"] == "BudgetExceeded"


def test_parse_error_exit_code(tmp_path, capsys):
    f = tmp_path / "bad.gog"
    f.write_text("gog G {\n  vertex F = Missing\n}\n")
    assert cli.main(["run", str(f)]) == 2


def test_verify_examples(capsys):
    assert cli.main(["verify-examples", "example1", "example3"]) == 0
    rep = verify.verify_paper_examples(["example1", "example3"], None)
    assert rep["passed"]


def test_verify_mutation_fails_with_normal_form():
    r = verify.check_example_one(X.example_one_flipped())
    assert r["status"] == "fail"
    assert r["normal_form"] != "[ X: [ F: 1 ] ]" and "s" in r["normal_form"]

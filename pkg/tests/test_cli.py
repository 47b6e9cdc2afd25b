from __future__ import annotations

import ast
import io
import subprocess
import sys
from pathlib import Path

import pytest

from mftopo import cli

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


def run(*argv):
    buf = io.StringIO()
    try:
        code = cli.main([str(a) for a in argv], stdout=buf)
    except SystemExit as exc:
        code = exc.code
    return code, buf.getvalue()


def records(text):
    return [dict(f.split("=", 1) for f in line.split(" ") if "=" in f)
            for line in text.splitlines()]


def test_check_vposet():
    code, out = run("check", DATA / "vposet.poset", "--properties", "proper,regular")
    assert code == 0
    assert out.splitlines() == ["property=proper verdict=holds",
                                "property=regular verdict=holds"]


def test_check_wedge_fails_with_witness():
    code, out = run("check", DATA / "wedge.poset", "--properties", "proper")
    assert code == 1
    assert records(out)[0]["witness"] == "(x,y)"


def test_check_cover_points():
    code, out = run("check", DATA / "vposet.poset", "--properties", "cover", "--points", "a")
    assert code == 1
    assert records(out)[0]["witness"] == "b,c"


def test_check_interval_strongly_regular():
    code, out = run("check", "interval", "--properties", "strongly-regular")
    assert code == 0 and "verdict=holds" in out


def test_maxfilters_methods_agree():
    outs = {m: run("maxfilters", DATA / "vposet.poset", "--method", m)
            for m in ("principal", "subsets", "upsets")}
    assert len(set(outs.values())) == 1
    code, out = outs["principal"]
    assert code == 0 and out.splitlines()[-1] == "count=2"


def test_maxfilters_tree_phi():
    code, out = run("maxfilters", DATA / "depth2.tree", "--phi")
    assert out.splitlines()[-1] == "count=7"


def test_validate_poset_and_interval():
    code, out = run("validate", DATA / "vposet.poset")
    assert code == 0 and len(out.splitlines()) == 8
    code, out = run("validate", "interval", "--sample", "30")
    assert code == 0


def test_dist():
    code, out = run("dist", "interval", "1/4", "3/4", "-k", "6")
    assert code == 0
    assert out == "d=507/256 ± 1/256 lo=253/128 hi=127/64\n"


def test_metrize_levels():
    code, out = run("metrize", "interval", "(1/8,7/8)", "(1/4,1/2)", "--depth", "2")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 6 and lines[-1] == "verify=holds"


def test_metrize_rejects_non_member():
    code, out = run("metrize", "interval", "(1/4,1/2)", "(1/8,7/8)")
    assert code == 1 and out.startswith("verdict=fails")


def test_tree_families():
    code, out = run("tree", "full-binary", "--discrete", "--cover")
    assert code == 1
    assert all(r["witness"] == "path:0,0,0,..." for r in records(out))
    code, out = run("tree", DATA / "depth2.tree", "--phi", "--discrete", "--cover")
    assert code == 0
    assert sum(1 for r in records(out) if "node" in r) == 14


def test_refine():
    code, out = run("refine", DATA / "thirds.cover")
    assert code == 0
    assert records(out)[-1]["verdict"] == "holds"


def test_gdelta():
    code, out = run("gdelta", "interval", "--depth", "2", "--point", "1/3")
    assert code == 0
    assert records(out)[-1]["point"] == "1/3"


def test_gdelta_over_budget():
    code, out = run("gdelta", "interval", "--depth", "4")
    assert code == 2 and out == "verdict=budget\n"


def test_env_budget(monkeypatch):
    monkeypatch.setenv("MFTOP_DEPTH_BUDGET", "5")
    code, _ = run("gdelta", "interval", "--depth", "4")
    assert code == 0
    monkeypatch.setenv("MFTOP_DEPTH_BUDGET", "zero")
    assert run("gdelta", "interval")[0] == 64


def test_oracle_bound_env(monkeypatch):
    monkeypatch.setenv("MFTOP_ORACLE_BOUND", "2")
    code, out = run("check", DATA / "vposet.poset")
    assert code == 2


def test_corpus_suite_small():
    code, out = run("corpus", "proper", "--size", "4")
    assert code == 0
    assert out == "suite=proper proper=7 exceptions=0\n"


def test_corpus_shards_cover_items():
    whole = run("corpus", "points", "--size", "4", "-v")[1].splitlines()[:-1]
    parts = []
    for i in range(3):
        parts += run("corpus", "points", "--size", "4", "-v", "--shard", f"{i}/3")[1] \
            .splitlines()[:-1]
    key = lambda line: int(records(line)[0]["item"])
    assert sorted(parts, key=key) == whole


@pytest.mark.parametrize("argv", [
    ("bogus",),
    ("check",),
    ("corpus", "points", "--shard", "3/2"),
    ("check", str(DATA / "vposet.poset"), "--properties", "shiny"),
    ("dist", "cantor", "0", "1"),
])
def test_usage_errors(argv, capsys):
    code, out = run(*argv)
    assert code == 64
    assert out == ""
    assert capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ("check", "/nonexistent.poset"),
    ("refine", str(DATA / "vposet.poset")),
    ("dist", "interval", "1/2", "x"),
])
def test_input_errors(argv, capsys):
    code, out = run(*argv)
    assert code == 65
    assert out == ""
    assert "error" in capsys.readouterr().err


def test_parse_error_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.poset"
    bad.write_text("poset p\nelem a\nle a zz\n")
    assert run("check", bad)[0] == 65
    assert "line 3" in capsys.readouterr().err


def test_human_output():
    code, out = run("--human", "check", DATA / "vposet.poset")
    assert code == 0
    assert out.splitlines()[0].split() == ["property", "proper"]


def test_deterministic_output():
    argv = ("corpus", "complement", "--size", "4", "-v")
    assert run(*argv) == run(*argv)
    argv = ("validate", "interval", "--sample", "20", "--seed", "3")
    assert run(*argv) == run(*argv)


def test_entry_point_subprocess():
    proc = subprocess.run([sys.executable, "-m", "mftopo.cli", "dist", "interval", "0", "0"],
                          capture_output=True, text=True, cwd=ROOT)
    assert proc.returncode == 0
    assert records(proc.stdout)[0]["lo"] == "0"


# ---------------------------------------------------------------- architecture

FORBIDDEN_CALLS = {"meet", "join", "leq", "pc", "up", "down", "mask", "unmask", "_bits",
                   "closure", "is_clopen_pair", "embed"}


def test_cli_is_a_dispatcher():
    """The CLI module parses, calls one library operation per command and
    prints; it never touches lattice or order internals itself."""
    tree = ast.parse((ROOT / "src" / "mftopo" / "cli.py").read_text())
    for node in ast.walk(tree):
        if isinstance(node, ast.Attribute) and not isinstance(node.value, ast.Constant):
            assert node.attr not in FORBIDDEN_CALLS, node.attr
        if isinstance(node, ast.ImportFrom) and node.module:
            assert not node.module.endswith(("order", "hybrid.base")), node.module

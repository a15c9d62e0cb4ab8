from __future__ import annotations

import json

import pytest

from cactus_split.cli import data_path, main
from cactus_split.graphs import cycle_lengths, is_cactus, parse_edge_list
from cactus_split.splittree import example_tree, format_tree


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return [tuple(map(int, ln.split(","))) for ln in text.splitlines() if ln and ln[0].isdigit()]


def test_count_pu5(capsys):
    code, out, _ = run(capsys, "count", "--embedding", "plane", "--omega", "{5}", "--labeled", "no", "--terms", "45")
    assert code == 0
    nz = [c for n, c in rows(out) if c]
    assert nz == [1, 1, 3, 17, 102, 811, 6626, 58385, 532251, 5011934, 48344880]
    assert "# grammar_min_size: 5" in out and "# family_min_size: 1" in out


def test_count_grammar_file_identical(capsys):
    _, a, _ = run(capsys, "count", "--embedding", "plane", "--omega", "{5}", "--terms", "45")
    _, b, _ = run(capsys, "count", "--grammar", data_path("pu5.gram"), "--terms", "45")
    assert rows(a) == rows(b)


def test_count_trees_json(capsys):
    code, out, _ = run(capsys, "count", "--embedding", "free", "--rooted", "--omega", "{2}", "--terms", "10", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["counts"] == [0, 0, 1, 2, 4, 9, 20, 48, 115, 286, 719]
    assert {"family", "omega", "mode", "counts"} <= set(data)


def test_count_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["count", "--omega", "{1}"])
    assert info.value.code == 2
    bad = tmp_path / "bad.gram"
    bad.write_text("A = Set(>=0; 1 + Z);")
    assert run(capsys, "count", "--grammar", str(bad))[0] == 3
    bad.write_text("A = B;")
    assert run(capsys, "count", "--grammar", str(bad))[0] == 3
    assert run(capsys, "count", "--grammar", str(tmp_path / "missing"))[0] == 2


def test_sample_dot(capsys):
    code, out, _ = run(
        capsys, "sample", "--embedding", "plane", "--rooted", "--omega", ">=4", "--size", "309", "--seed", "1", "--format", "dot"
    )
    assert code == 0 and out.startswith("// family")
    assert "// seed: 1" in out and out.count(" -- ") == sum(1 for ln in out.splitlines() if " -- " in ln)


def test_sample_edgelist_and_determinism(capsys, tmp_path):
    args = ["sample", "--embedding", "plane", "--rooted", "--omega", ">=3", "--size", "40", "--seed", "7"]
    run(capsys, *args, "-o", str(tmp_path / "a"))
    run(capsys, *args, "-o", str(tmp_path / "b"))
    a = (tmp_path / "a").read_bytes()
    assert a == (tmp_path / "b").read_bytes()
    g = parse_edge_list(a.decode())
    assert g.n == 40 and is_cactus(g) and min(cycle_lengths(g)) >= 3


def test_sample_pentagon_and_zero(capsys):
    code, out, _ = run(capsys, "sample", "--rooted", "--omega", "{5}", "--size", "5")
    assert code == 0 and cycle_lengths(parse_edge_list(out)) == [5]
    code, _, err = run(capsys, "sample", "--rooted", "--omega", "{5}", "--size", "4")
    assert code == 5 and "5" in err


def test_sample_unsupported(capsys):
    assert run(capsys, "sample", "--omega", "{5}", "--size", "5")[0] == 2
    assert run(capsys, "sample", "--rooted", "--embedding", "free", "--omega", "{5}", "--size", "5")[0] == 2


def test_splittree_commands(capsys, tmp_path):
    c4 = tmp_path / "c4.edgelist"
    c4.write_text("4 4\n0 1\n1 2\n2 3\n3 0\n")
    code, out, _ = run(capsys, "splittree", "decompose", str(c4), "--form", "reduced")
    assert code == 0 and out.count("star 3") == 2 and "subgraph cluster_" in out
    example = tmp_path / "example.glt"
    example.write_text(format_tree(example_tree()))
    code, out, _ = run(capsys, "splittree", "accessibility", str(example))
    g = parse_edge_list(out)
    assert g.has_edge(5, 4) and not g.has_edge(5, 3)
    code, out, _ = run(capsys, "splittree", "validate", str(example))
    assert code == 7 and "R4" in out
    glt = tmp_path / "c4.glt"
    run(capsys, "splittree", "decompose", str(c4), "--form", "simplified", "--format", "glt", "-o", str(glt))
    code, out, _ = run(capsys, "splittree", "validate", str(glt))
    assert code == 0 and out.startswith("VALID")
    code, out, _ = run(capsys, "splittree", "compose", str(glt))
    assert code == 0 and parse_edge_list(out) == parse_edge_list(c4.read_text())


def test_splittree_errors(capsys, tmp_path):
    k4 = tmp_path / "k4.edgelist"
    k4.write_text("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    assert run(capsys, "splittree", "decompose", str(k4))[0] == 6
    example = tmp_path / "example.glt"
    example.write_text(format_tree(example_tree()))
    assert run(capsys, "splittree", "compose", str(example))[0] == 7
    broken = tmp_path / "broken.glt"
    broken.write_text("leaves 1 2\nnode 0 star 3\nlink L1 N0.0\n")
    assert run(capsys, "splittree", "validate", str(broken))[0] == 7


def test_oracle_commands(capsys):
    code, out, _ = run(capsys, "oracle", "census", "--omega", ">=2", "--max-n", "6")
    assert code == 0 and out.splitlines()[5] == "4,31,4"
    assert run(capsys, "oracle", "burnside", "--m", "3", "--q", "2", "--group", "cyclic")[1] == "4\n"
    assert run(capsys, "oracle", "census", "--max-n", "9")[0] == 4
    code, out, _ = run(capsys, "oracle", "structures", "--rooted", "--omega", "{3}", "--max-n", "7")
    assert rows(out)[-1] == (7, 10)

from __future__ import annotations

import pytest

from cactus_split.cli import data_path
from cactus_split.grammar import OmegaSpec, format_system, parse_grammar
from cactus_split.oracle import rooted_tree_counts
from cactus_split.templates import FamilySpec, build, build_simplified, build_template, family_counts

OMEGAS = ["{2}", "{3}", "{4}", "{5}", "{3,5}", ">=3", ">=4"]


def spec(emb, root, lab, om, form="template"):
    return FamilySpec(emb, root, lab, OmegaSpec.parse(om), form)


def test_pu5_template_is_the_displayed_grammar():
    t = build_template(spec("plane", "unrooted", "unlabeled", "{5}"))
    g = parse_grammar(open(data_path("pu5.gram")).read())
    assert dict(t.rules) == dict(g.rules)
    assert t.root == g.root


def test_tree_template_counts():
    fc = family_counts(spec("free", "rooted", "unlabeled", "{2}"), 10)
    assert list(fc.counts) == [0, 0, 1, 2, 4, 9, 20, 48, 115, 286, 719]
    assert fc.omits_small_members and fc.grammar_min_size == 2


def test_labeled_rooted_triangles():
    assert family_counts(spec("free", "rooted", "labeled", "{3}"), 3).counts[3] == 3


def test_simplified_shapes():
    fr = build_simplified(spec("free", "rooted", "unlabeled", "{3}", "simplified"))
    assert [n for n, _ in fr.rules] == ["G"]
    pr = build_simplified(spec("plane", "rooted", "unlabeled", "{3}", "simplified"))
    assert [n for n, _ in pr.rules] == ["G", "Q"]
    fu = build_simplified(spec("free", "unrooted", "unlabeled", "{3}", "simplified"))
    assert [c for c, _ in fu.root] == [1, -1, 1, -1]
    assert "UCyc" in format_system(fu)


@pytest.mark.parametrize("om", OMEGAS)
@pytest.mark.parametrize("emb", ["plane", "free"])
@pytest.mark.parametrize("root", ["rooted", "unrooted"])
def test_template_equals_simplified(om, emb, root):
    a = family_counts(spec(emb, root, "unlabeled", om), 24).counts
    b = family_counts(spec(emb, root, "unlabeled", om, "simplified"), 24).counts
    assert a[2:] == b[2:]


@pytest.mark.parametrize("om", ["{3}", ">=2", "{2,4}"])
@pytest.mark.parametrize("emb", ["plane", "free"])
def test_labeled_rooted_is_n_times_unrooted(om, emb):
    r = family_counts(spec(emb, "rooted", "labeled", om), 7).counts
    u = family_counts(spec(emb, "unrooted", "labeled", om), 7).counts
    assert all(r[n] == n * u[n] for n in range(2, 8))


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_pure_sparsity(k):
    c = family_counts(spec("plane", "unrooted", "unlabeled", "{%d}" % k), 30).counts
    assert all(c[n] == 0 for n in range(31) if (n - 1) % (k - 1) != 0)


@pytest.mark.parametrize("om", OMEGAS)
@pytest.mark.parametrize("emb", ["plane", "free"])
def test_unrooted_bounded_by_rooted(om, emb):
    r = family_counts(spec(emb, "rooted", "unlabeled", om), 20).counts
    u = family_counts(spec(emb, "unrooted", "unlabeled", om), 20).counts
    assert all(u[n] <= r[n] for n in range(21))


def test_trees_match_recurrence():
    c = family_counts(spec("free", "rooted", "unlabeled", "{2}"), 20).counts
    assert list(c[2:]) == rooted_tree_counts(20)[2:]


def test_low_order_behaviour_recorded():
    # the unrooted grammars do not produce the single vertex (n = 1) or anything at n = 0
    for emb in ("plane", "free"):
        for form in ("template", "simplified"):
            c = family_counts(spec(emb, "unrooted", "unlabeled", ">=2", form), 4).counts
            assert c[0] == 0 and c[1] == 0 and c[2] == 1


def test_bad_spec():
    with pytest.raises(ValueError):
        FamilySpec("round", "rooted", "labeled", OmegaSpec.parse("{3}"))
    with pytest.raises(Exception):
        build(FamilySpec("plane", "rooted", "labeled", OmegaSpec(members=frozenset({1}))))

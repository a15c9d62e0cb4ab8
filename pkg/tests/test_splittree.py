from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cactus_split.errors import InvalidTreeError
from cactus_split.graphs import SimpleGraph, cycle_graph, is_cactus, is_connected, path_graph
from cactus_split.grammar import OmegaSpec
from cactus_split.sampler import (
    make_rng,
    sample_labeled_free_rooted,
    sample_plane_rooted,
    structure_to_graph,
)
from cactus_split.splittree import (
    GraphLabeledTree,
    NodeLabel,
    accessibility,
    brute_force_reduced_tree,
    cactus_to_split_tree,
    convert_form,
    example_tree,
    format_tree,
    leaf,
    marker,
    parse_tree,
    reduce_tree,
    simplify_tree,
    split_tree_to_cactus,
    trees_equal,
    validate_reduced_cactus_tree,
    validate_simplified_cactus_tree,
)


def c4():
    return SimpleGraph([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4), (4, 1)])


def sampled_cactus(seed: int, omega: str = ">=2", n: int | None = None) -> SimpleGraph:
    rng = make_rng(seed)
    om = OmegaSpec.parse(omega)
    size = n or rng.randint(5, 30)
    try:
        if seed % 2:
            return structure_to_graph(sample_plane_rooted(om, size, rng))
        return structure_to_graph(sample_labeled_free_rooted(om, size, rng))
    except Exception:
        return structure_to_graph(sample_plane_rooted(OmegaSpec.parse(">=2"), size, rng))


def test_accessibility_example_tree():
    g = accessibility(example_tree())
    assert g.has_edge(5, 4)
    assert not g.has_edge(5, 3)


def test_accessibility_single_star():
    t = GraphLabeledTree(["c", "x1", "x2"])
    s = t.add_node(NodeLabel.star(3))
    t.link(marker(s, 0), leaf("c"))
    t.link(marker(s, 1), leaf("x1"))
    t.link(marker(s, 2), leaf("x2"))
    g = accessibility(t)
    assert sorted(map(sorted, g.edges())) == [["c", "x1"], ["c", "x2"]]


def test_c4_reduced_is_star_pair():
    t = cactus_to_split_tree(c4(), "reduced")
    assert sorted(lab.kind for lab in t.labels.values()) == ["star", "star"]
    assert all(lab.size == 3 for lab in t.labels.values())
    a, b = t.labels
    assert t.links[marker(a, 0)] == marker(b, 0)
    assert len(t.leaves) == 4


def test_c4_simplified_is_cycle():
    t = cactus_to_split_tree(c4(), "simplified")
    assert [(lab.kind, lab.size) for lab in t.labels.values()] == [("cycle", 4)]
    assert not validate_simplified_cactus_tree(t)


def test_single_edge_is_bare_edge():
    t = cactus_to_split_tree(path_graph(2), "reduced")
    assert not t.labels and t.links[leaf(0)] == leaf(1)


def test_simplified_cycle5_composes():
    t = GraphLabeledTree(range(5))
    c = t.add_node(NodeLabel.cycle(5))
    for i in range(5):
        t.link(marker(c, i), leaf(i))
    assert split_tree_to_cactus(t) == cycle_graph(5)


def test_star_with_two_triangles():
    t = GraphLabeledTree(range(5))
    s = t.add_node(NodeLabel.star(3))
    t.link(marker(s, 0), leaf(0))
    for ext, (a, b) in ((1, (1, 2)), (2, (3, 4))):
        tri = t.add_node(NodeLabel.cycle(3))
        t.link(marker(s, ext), marker(tri, 0))
        t.link(marker(tri, 1), leaf(a))
        t.link(marker(tri, 2), leaf(b))
    g = split_tree_to_cactus(t)
    assert sorted(g.edges()) == [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)]


def test_reduced_rejections():
    t = GraphLabeledTree(range(4))
    c = t.add_node(NodeLabel.cycle(4))
    for i in range(4):
        t.link(marker(c, i), leaf(i))
    assert any(d.startswith("R1") for d in validate_reduced_cactus_tree(t))
    t = GraphLabeledTree(range(6))
    a = t.add_node(NodeLabel.cycle(3))
    b = t.add_node(NodeLabel.cycle(5))
    t.link(marker(a, 0), marker(b, 0))
    for i, e in enumerate([marker(a, 1), marker(a, 2), marker(b, 1), marker(b, 2), marker(b, 3), marker(b, 4)]):
        t.link(e, leaf(i))
    assert any(d.startswith("R4") for d in validate_reduced_cactus_tree(t))


def _star_tree(centre_to_polygon: bool) -> GraphLabeledTree:
    t = GraphLabeledTree(range(6))
    s = t.add_node(NodeLabel.star(3))
    p = t.add_node(NodeLabel.cycle(3))
    s2 = t.add_node(NodeLabel.star(3))
    if centre_to_polygon:
        t.link(marker(s, 0), marker(p, 0))
        t.link(marker(s, 1), leaf(0))
        t.link(marker(s, 2), leaf(1))
        t.link(marker(p, 1), leaf(2))
        t.link(marker(p, 2), marker(s2, 1))
    else:
        t.link(marker(s, 0), leaf(0))
        t.link(marker(s, 1), marker(s2, 1))
        t.link(marker(s, 2), marker(p, 0))
        t.link(marker(p, 1), leaf(1))
        t.link(marker(p, 2), leaf(2))
    t.link(marker(s2, 0), leaf(3))
    t.link(marker(s2, 2), leaf(4))
    t.leaves.discard(5)
    return t


def test_simplified_rejections():
    assert any(d.startswith("S-b") for d in validate_simplified_cactus_tree(_star_tree(True)))
    ext = _star_tree(False)
    assert any(d.startswith("S-c") for d in validate_simplified_cactus_tree(ext))
    assert not validate_reduced_cactus_tree(ext)


def test_invalid_tree_raises():
    with pytest.raises(InvalidTreeError):
        split_tree_to_cactus(_star_tree(True), "simplified")


def test_convert_examples():
    red = cactus_to_split_tree(c4(), "reduced")
    simp = convert_form(red, "simplified")
    assert [(lab.kind, lab.size) for lab in simp.labels.values()] == [("cycle", 4)]
    back = convert_form(simp, "reduced")
    assert trees_equal(back, red)
    plain = cactus_to_split_tree(cycle_graph(5), "reduced")
    assert trees_equal(convert_form(plain, "simplified"), plain)
    assert simplify_tree is not None and reduce_tree is not None


def test_glt_text_round_trip():
    t = example_tree()
    assert trees_equal(parse_tree(format_tree(t)), t)


@given(st.integers(0, 10**6))
def test_round_trip_property(seed):
    g = sampled_cactus(seed)
    for form, validator in (("reduced", validate_reduced_cactus_tree), ("simplified", validate_simplified_cactus_tree)):
        t = cactus_to_split_tree(g, form)
        assert validator(t) == []
        assert accessibility(t) == g
    red = cactus_to_split_tree(g, "reduced")
    assert trees_equal(convert_form(convert_form(red, "simplified"), "reduced"), red)
    assert trees_equal(convert_form(red, "simplified"), cactus_to_split_tree(g, "simplified"))


@given(st.integers(0, 10**6))
def test_reduced_tree_matches_brute_force(seed):
    g = sampled_cactus(seed, n=random.Random(seed).randint(4, 9))
    assert trees_equal(cactus_to_split_tree(g, "reduced"), brute_force_reduced_tree(g), ordered=False)


def test_cluster_order_independence():
    # relabelling vertices changes the processing order but not the tree
    g = sampled_cactus(11, n=14)
    perm = list(g.vertices)
    random.Random(3).shuffle(perm)
    mapping = dict(zip(g.vertices, perm))
    h = SimpleGraph(g.vertices, [(mapping[u], mapping[v]) for u, v in g.edges()])
    t = cactus_to_split_tree(h, "reduced")
    assert accessibility(t) == h
    assert trees_equal(t, brute_force_reduced_tree(h, guard=14), ordered=False)


def test_plane_rotation_respected():
    g = sampled_cactus(21, ">=3", n=25)
    t = cactus_to_split_tree(g, "simplified")
    # each internal node lists its markers in the cyclic order given by the rotation
    for node, lab in t.labels.items():
        if lab.kind != "star":
            continue
        centre = t.links[marker(node, 0)]
        v = centre[1]
        firsts = []
        for m in range(1, lab.size):
            side = t.links[marker(node, m)]
            firsts.append(_first_neighbour(t, side, g, v))
        rot = g.rotation[v]
        pos = [rot.index(w) for w in firsts]
        k = pos.index(min(pos))
        assert pos[k:] + pos[:k] == sorted(pos)


def _first_neighbour(t, side, g, v):
    # the neighbour of v reached first (in rotation order) through this side
    reach = set()
    stack = [side]
    seen = set()
    while stack:
        e = stack.pop()
        if e in seen:
            continue
        seen.add(e)
        if e[0] == "L":
            reach.add(e[1])
            continue
        node = e[1]
        for m in range(t.labels[node].size):
            if m != e[2]:
                stack.append(t.links[marker(node, m)])
    cands = [w for w in g.rotation[v] if w in reach]
    return cands[0]


def _all_graphs(n):
    pairs = list(combinations(range(n), 2))
    for mask in range(1, 1 << len(pairs)):
        yield SimpleGraph(range(n), [p for i, p in enumerate(pairs) if mask >> i & 1])


def _check_non_cactus(g):
    t = brute_force_reduced_tree(g)
    assert accessibility(t) == g
    assert validate_reduced_cactus_tree(t), format_tree(t)
    assert validate_simplified_cactus_tree(t), format_tree(t)


def test_non_cacti_fail_validators_up_to_5():
    checked = 0
    for n in range(4, 6):
        for g in _all_graphs(n):
            if is_connected(g) and not is_cactus(g):
                _check_non_cactus(g)
                checked += 1
    assert checked == 373


def test_non_cacti_fail_validators_sample_6():
    rng = random.Random(1)
    pairs = list(combinations(range(6), 2))
    checked = 0
    for mask in rng.sample(range(1, 1 << 15), 3000):
        g = SimpleGraph(range(6), [p for i, p in enumerate(pairs) if mask >> i & 1])
        if is_connected(g) and not is_cactus(g):
            _check_non_cactus(g)
            checked += 1
    assert checked > 1000


def _random_glt(rng: random.Random, nodes: int) -> GraphLabeledTree:
    t = GraphLabeledTree()
    ends = []
    for _ in range(nodes):
        kind = rng.choice(["star", "cycle", "cycle2", "clique"])
        lab = {
            "star": lambda: NodeLabel.star(rng.randint(3, 4)),
            "cycle": lambda: NodeLabel.cycle(rng.randint(3, 6)),
            "cycle2": lambda: NodeLabel.cycle(2),
            "clique": lambda: NodeLabel.clique(3),
        }[kind]()
        nid = t.add_node(lab)
        ms = [marker(nid, m) for m in range(lab.size)]
        rng.shuffle(ms)
        if ends:
            t.link(ends.pop(rng.randrange(len(ends))), ms.pop())
        ends.extend(ms)
    for k, e in enumerate(ends):
        t.leaves.add(k)
        t.link(e, leaf(k))
    return t


def test_validators_are_sound_on_random_trees():
    rng = random.Random(5)
    accepted = 0
    for _ in range(5000):
        t = _random_glt(rng, rng.randint(1, 5))
        for validator in (validate_reduced_cactus_tree, validate_simplified_cactus_tree):
            if not validator(t):
                accepted += 1
                assert is_cactus(accessibility(t)), format_tree(t)
    assert accepted > 500

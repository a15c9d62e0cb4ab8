from __future__ import annotations

from collections import Counter

import pytest
from scipy.stats import chisquare

from cactus_split.errors import ResourceError, ZeroCountError
from cactus_split.grammar import OmegaSpec
from cactus_split.graphs import cycle_lengths, is_cactus
from cactus_split.oracle import enumerate_structures, plane_term_from_structure
from cactus_split.sampler import (
    LabeledFreeRootedTables,
    PlaneRootedTables,
    canonical_free,
    make_rng,
    sample_labeled_free_rooted,
    sample_plane_rooted,
    structure_key,
    structure_size,
    structure_to_graph,
)
from cactus_split.templates import FamilySpec, build, family_counts


def om(text):
    return OmegaSpec.parse(text)


@pytest.mark.parametrize("omega", ["{3}", ">=2", "{2,5}", ">=4"])
def test_plane_tables_match_engine(omega):
    t = PlaneRootedTables(om(omega), 25)
    ref = family_counts(FamilySpec("plane", "rooted", "unlabeled", om(omega)), 25).counts
    assert [t.count(n) for n in range(26)][2:] == list(ref[2:])


@pytest.mark.parametrize("omega", ["{3}", ">=2", "{2,4}"])
def test_labeled_tables_match_engine(omega):
    t = LabeledFreeRootedTables(om(omega), 15)
    ref = family_counts(FamilySpec("free", "rooted", "labeled", om(omega)), 15).counts
    assert [t.count(n) for n in range(16)][2:] == list(ref[2:])


def test_pentagon_always():
    for seed in range(20):
        g = structure_to_graph(sample_plane_rooted(om("{5}"), 5, make_rng(seed)))
        assert g.n == 5 and g.m == 5 and cycle_lengths(g) == [5]


def test_determinism():
    a = sample_plane_rooted(om(">=3"), 60, make_rng(42))
    b = sample_plane_rooted(om(">=3"), 60, make_rng(42))
    assert structure_key(a) == structure_key(b) and a == b


@pytest.mark.parametrize("omega,n", [("{3}", 9), (">=2", 12), ("{2,4}", 13), (">=4", 40)])
def test_samples_are_valid(omega, n):
    rng = make_rng(n)
    for _ in range(30):
        s = sample_plane_rooted(om(omega), n, rng)
        assert structure_size(s) == n
        g = structure_to_graph(s)
        assert g.n == n and is_cactus(g)
        assert all(c in om(omega) for c in cycle_lengths(g))
        if 2 not in om(omega):
            assert g.m == sum(cycle_lengths(g))


def test_zero_count_and_resource_errors():
    with pytest.raises(ZeroCountError) as info:
        sample_plane_rooted(om("{5}"), 4, make_rng(0))
    assert 5 in info.value.nearest
    with pytest.raises(ZeroCountError):
        sample_labeled_free_rooted(om("{5}"), 4, make_rng(0))
    with pytest.raises(ResourceError):
        sample_plane_rooted(om("{3}"), 9, make_rng(0), PlaneRootedTables(om("{3}"), 5))


def test_labeled_triangles_three_roots():
    seen = Counter()
    rng = make_rng(1)
    for _ in range(3000):
        s = sample_labeled_free_rooted(om("{3}"), 3, rng)
        g = structure_to_graph(s)
        assert sorted(g.vertices) == [1, 2, 3] and g.m == 3
        seen[s.tag] += 1
    assert set(seen) == {1, 2, 3}
    assert chisquare(list(seen.values())).pvalue > 1e-3


def test_labeled_edge_two_outcomes():
    rng = make_rng(2)
    seen = Counter(sample_labeled_free_rooted(om("{2}"), 2, rng).tag for _ in range(2000))
    assert set(seen) == {1, 2}


def test_labeled_uniform_small():
    omega, n = om(">=2"), 4
    total = LabeledFreeRootedTables(omega, n).count(n)
    rng = make_rng(9)
    seen = Counter(repr(canonical_free(sample_labeled_free_rooted(omega, n, rng))) for _ in range(40 * total))
    assert len(seen) == total
    assert chisquare(list(seen.values())).pvalue > 1e-3


def test_labels_are_a_permutation():
    s = sample_labeled_free_rooted(om(">=3"), 40, make_rng(3))
    assert sorted(structure_to_graph(s).vertices) == list(range(1, 41))


def test_exhaustive_sampling_finds_every_structure():
    omega, n = om("{3,4}"), 7
    system = build(FamilySpec("plane", "rooted", "unlabeled", omega, "simplified"))
    keys = {structure_key(plane_term_from_structure(x)) for x in enumerate_structures(system, n)}
    rng = make_rng(5)
    found = {structure_key(sample_plane_rooted(omega, n, rng)) for _ in range(3000)}
    assert found == keys and len(keys) == PlaneRootedTables(omega, n).count(n)


def test_graph_realization_of_large_sample():
    s = sample_plane_rooted(om(">=4"), 309, make_rng(1))
    g = structure_to_graph(s)
    assert g.n == 309 and is_cactus(g) and min(cycle_lengths(g)) >= 4
    assert g.m == sum(cycle_lengths(g))

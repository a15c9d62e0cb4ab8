from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cactus_split.cli import data_path
from cactus_split.engine import (
    counts,
    divisors,
    evaluate,
    operator_series,
    restricted_operator,
    totient,
)
from cactus_split.errors import GrammarValidationError
from cactus_split.grammar import OmegaSpec, at_least, in_set, parse_grammar
from cactus_split.oracle import burnside_orbits, labeled_orbits
from cactus_split.series import PowerSeries

GROUP_OF = {"Seq": "trivial", "Cyc": "cyclic", "USeq": "reversal", "UCyc": "dihedral", "Set": "symmetric"}


def qx(q: int, n: int) -> PowerSeries:
    return PowerSeries.monomial(1, n, q)


def test_operator_examples():
    assert operator_series("Cyc", 3, qx(2, 3), "unlabeled")[3] == 4
    assert operator_series("USeq", 3, qx(2, 3), "unlabeled")[3] == 6
    assert operator_series("Set", 2, qx(1, 3), "unlabeled") == PowerSeries.monomial(2, 3)
    assert operator_series("Cyc", 3, qx(1, 3), "labeled")[3] == Fraction(1, 3)


def test_operator_rejects_constant_term():
    with pytest.raises(GrammarValidationError):
        operator_series("Seq", 2, PowerSeries([1, 1], 3), "unlabeled")
    with pytest.raises((GrammarValidationError, ValueError)):
        operator_series("Cyc", 0, qx(1, 3), "unlabeled")


def test_restricted_examples():
    assert restricted_operator("Seq", at_least(0), qx(1, 3), "unlabeled").integers() == [1, 1, 1, 1]
    a = PowerSeries([0, 1, 1], 3)
    assert restricted_operator("Set", at_least(1), a, "unlabeled").integers() == [0, 1, 2, 2]
    assert restricted_operator("Cyc", in_set(5), qx(1, 6), "unlabeled") == PowerSeries.monomial(5, 6)


@pytest.mark.parametrize("op", sorted(GROUP_OF))
@pytest.mark.parametrize("q", [1, 2, 3])
def test_unlabeled_operators_match_orbits(op, q):
    for m in range(1, 9):
        got = operator_series(op, m, qx(q, m), "unlabeled")[m]
        assert got == burnside_orbits(m, q, GROUP_OF[op]), (op, m, q)


@pytest.mark.parametrize("op", sorted(GROUP_OF))
@pytest.mark.parametrize("q", [1, 2, 3])
def test_labeled_operators_match_orbits(op, q):
    import math

    for m in range(1, 9):
        got = operator_series(op, m, qx(q, m), "labeled")[m] * math.factorial(m)
        assert got == labeled_orbits(m, q, GROUP_OF[op]), (op, m, q)


def test_cycle_plethysm_formula():
    for m in range(1, 9):
        for q in range(1, 4):
            want = Fraction(sum(totient(d) * q ** (m // d) for d in divisors(m)), m)
            assert operator_series("Cyc", m, qx(q, m), "unlabeled")[m] == want


def _euler_product(a: list[int], n: int) -> list[int]:
    # prod_k (1 - x^k)^(-a_k), expanded one binomial factor at a time
    out = [1] + [0] * n
    for k in range(1, n + 1):
        for _ in range(a[k]):
            for i in range(k, n + 1):
                out[i] += out[i - k]
    return out


def test_set_matches_product_formula():
    rng = random.Random(7)
    n = 30
    for _ in range(20):
        a = [0] + [rng.randrange(4) for _ in range(n)]
        got = restricted_operator("Set", at_least(0), PowerSeries(a, n), "unlabeled").integers()
        assert got == _euler_product(a, n)


def test_catalan():
    env = evaluate(parse_grammar("B = Z * Seq(>=0; B);"), 5)
    assert counts(env) == [0, 1, 1, 2, 5, 14]


def test_pu5():
    c = counts(evaluate(parse_grammar(open(data_path("pu5.gram")).read()), 45))
    assert [c[4 * k + 1] for k in range(1, 12)] == [1, 1, 3, 17, 102, 811, 6626, 58385, 532251, 5011934, 48344880]


def test_labeled_cycle_count():
    env = evaluate(parse_grammar("@mode labeled; C = Cyc(=3; Z);"), 4)
    assert counts(env)[3] == 2


def test_zero_grammar():
    from cactus_split.grammar import GrammarSystem

    base = parse_grammar("B = Z * Seq(>=0; B);")
    empty = GrammarSystem(base.rules, (), base.mode, None, None)
    assert counts(evaluate(empty, 6)) == [0] * 7


def test_one_more_sweep_is_stable():
    s = parse_grammar(open(data_path("pu5.gram")).read())
    full = evaluate(s, 25, strategy="full")
    inc = evaluate(s, 25)
    assert full.series == inc.series and inc.converged


@given(st.permutations(["T_S", "T_P", "T_SP", "S_C", "S_X", "P"]))
def test_rule_order_independence(order):
    s = parse_grammar(open(data_path("pu5.gram")).read())
    ref = evaluate(s, 21)
    shuffled = evaluate(s, 21, rule_order=list(order))
    assert shuffled.series == ref.series


def test_valuation_matches_lowest_coefficient():
    from cactus_split.grammar import root_valuation

    for text in ["B = Z * Seq(>=0; B);", "@omega {4}; G = Z * Cyc(>=1; Seq(in Omega-1; G + Z));"]:
        s = parse_grammar(text)
        c = counts(evaluate(s, 12))
        assert next(i for i, x in enumerate(c) if x) == root_valuation(s)


def test_unlabeled_rule_series_are_nonnegative_integers():
    s = parse_grammar(open(data_path("pu5.gram")).read())
    env = evaluate(s, 30)
    for series in env.series.values():
        assert series.is_integral and min(series.integers()) >= 0


def test_omega_parse_used_in_labeled_mode():
    s = parse_grammar("@mode labeled; @omega >=3; G = Z * Set(>=1; USeq(in Omega-1; Z + G));")
    assert counts(evaluate(s, 5))[3] == 3
    assert OmegaSpec.parse(">=3").minimum() == 3

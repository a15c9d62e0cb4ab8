"""Counting engine: operator semantics and the fixed-point solver.

Unlabeled systems are read as ordinary generating functions with Pólya
semantics for the symmetric operators; labeled systems as exponential
generating functions. Every restricted operator is expanded into its
exact-cardinality terms ``m <= N // val(A)``, with a power cache shared
between the terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Mapping

from .errors import GrammarValidationError, IllFoundedError, SemanticsError
from .grammar import (
    Atom,
    CardSpec,
    Expr,
    GrammarSystem,
    IntSet,
    One,
    Op,
    Prod,
    Ref,
    Sum,
    dependency_order,
    validate,
)
from .series import PowerSeries


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


class _Powers:
    """Lazily computed powers ``A^j`` and their substitutions ``A(x^d)^j``."""

    def __init__(self, a: PowerSeries):
        self.a = a
        self.order = a.order
        self._pows = [PowerSeries.one(a.order), a]
        self._subs: dict[tuple[int, int], PowerSeries] = {}

    def get(self, j: int) -> PowerSeries:
        while len(self._pows) <= j:
            self._pows.append(self._pows[-1] * self.a)
        return self._pows[j]

    def sub(self, d: int, j: int) -> PowerSeries:
        """``A(x^d)^j``."""
        if d == 1:
            return self.get(j)
        key = (d, j)
        s = self._subs.get(key)
        if s is None:
            s = self.get(j).substitute_power(d)
            self._subs[key] = s
        return s


class _OperatorContext:
    """Shared state for expanding one operator over many cardinalities."""

    def __init__(self, op: str, a: PowerSeries, mode: str):
        if a.order >= 0 and a[0] != 0:
            raise GrammarValidationError([f"argument of {op} has a nonzero constant term"])
        self.op = op
        self.a = a
        self.mode = mode
        self.order = a.order
        self.powers = _Powers(a)
        self._newton: list[PowerSeries] = [PowerSeries.one(a.order)]

    # unlabeled helpers

    def set_term(self, m: int) -> PowerSeries:
        h = self._newton
        n = self.order
        while len(h) <= m:
            k = len(h)
            total = PowerSeries.zero(n)
            for j in range(1, k + 1):
                total = total + self.powers.sub(j, 1) * h[k - j]
            h.append(total.scale(Fraction(1, k)))
        return h[m]

    def cyc_term(self, m: int) -> PowerSeries:
        total = PowerSeries.zero(self.order)
        for d in divisors(m):
            total = total + self.powers.sub(d, m // d).scale(totient(d))
        return total.scale(Fraction(1, m))

    def term(self, m: int) -> PowerSeries:
        op, p = self.op, self.powers
        if op in ("Cyc", "UCyc") and m < 1:
            raise GrammarValidationError([f"{op} requires cardinality >= 1, got {m}"])
        if m < 0:
            raise GrammarValidationError([f"negative cardinality {m}"])
        if self.mode == "labeled":
            am = p.get(m)
            if op == "Seq":
                return am
            if op == "Set":
                return am.scale(Fraction(1, math.factorial(m)))
            if op == "Cyc":
                return am.scale(Fraction(1, m))
            if op == "USeq":
                return am.scale(Fraction(1, 2)) if m >= 2 else am
            if op == "UCyc":
                if m == 1:
                    return am
                if m == 2:
                    return am.scale(Fraction(1, 2))
                return am.scale(Fraction(1, 2 * m))
            raise ValueError(f"unknown operator {op!r}")
        if op == "Seq":
            return p.get(m)
        if op == "Set":
            return self.set_term(m)
        if op == "Cyc":
            return self.cyc_term(m)
        if op == "USeq":
            if m <= 1:
                return p.get(m)
            if m % 2 == 0:
                sym = p.sub(2, m // 2)
            else:
                sym = self.a * p.sub(2, (m - 1) // 2)
            return (p.get(m) + sym).scale(Fraction(1, 2))
        if op == "UCyc":
            if m == 1:
                return self.a
            if m == 2:
                return self.set_term(2)
            half = self.cyc_term(m).scale(Fraction(1, 2))
            if m % 2 == 0:
                refl = (p.sub(2, m // 2) + p.get(2) * p.sub(2, (m - 2) // 2)).scale(Fraction(1, 4))
            else:
                refl = (self.a * p.sub(2, (m - 1) // 2)).scale(Fraction(1, 2))
            return half + refl
        raise ValueError(f"unknown operator {op!r}")


def operator_series(op: str, m: int, a: PowerSeries, mode: str = "unlabeled") -> PowerSeries:
    """The exact-cardinality operator ``op_m(A)``, truncated at ``A.order``."""
    return _OperatorContext(op, a, mode).term(m)


def admitted(card: CardSpec | IntSet, omega: IntSet | None, limit: int) -> list[int]:
    """Cardinalities admitted by ``card`` that do not exceed ``limit``."""
    cards = card if isinstance(card, IntSet) else card.resolve(omega)
    return [m for m in cards.upto(limit) if m >= 0]


def restricted_operator(
    op: str,
    card: CardSpec | IntSet,
    a: PowerSeries,
    mode: str = "unlabeled",
    omega: IntSet | None = None,
) -> PowerSeries:
    """Sum of ``op_m(A)`` over admitted ``m``; terms beyond ``N // val(A)`` vanish."""
    ctx = _OperatorContext(op, a, mode)
    v = a.valuation()
    limit = 0 if v is None else a.order // v
    total = PowerSeries.zero(a.order)
    for m in admitted(card, omega, limit):
        if m == 0 and op in ("Cyc", "UCyc"):
            raise GrammarValidationError([f"{op} must not admit cardinality 0"])
        total = total + ctx.term(m)
    return total


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class SeriesEnvironment:
    """Result of evaluating a grammar system up to ``order``."""

    order: int
    mode: str
    series: Mapping[str, PowerSeries]
    root: PowerSeries
    converged: bool
    sweeps: int


def eval_expr(
    expr: Expr,
    env: Mapping[str, PowerSeries],
    order: int,
    mode: str,
    omega: IntSet | None,
    memo: dict | None = None,
) -> PowerSeries:
    if memo is not None and expr in memo:
        return memo[expr]
    if isinstance(expr, Atom):
        out = PowerSeries.monomial(1, order)
    elif isinstance(expr, One):
        out = PowerSeries.one(order)
    elif isinstance(expr, Ref):
        out = env[expr.name]
    elif isinstance(expr, Sum):
        out = PowerSeries.zero(order)
        for t in expr.terms:
            out = out + eval_expr(t, env, order, mode, omega, memo)
    elif isinstance(expr, Prod):
        out = PowerSeries.one(order)
        for f in expr.factors:
            out = out * eval_expr(f, env, order, mode, omega, memo)
            if out.is_zero:
                break
    elif isinstance(expr, Op):
        arg = eval_expr(expr.arg, env, order, mode, omega, memo)
        out = restricted_operator(expr.op, expr.card, arg, mode, omega)
    else:
        raise TypeError(f"not an expression: {expr!r}")
    if memo is not None:
        memo[expr] = out
    return out


def _check_semantics(name: str, s: PowerSeries, mode: str, allow_negative: bool = False) -> None:
    if mode == "unlabeled":
        if not s.is_integral:
            bad = next(i for i, c in enumerate(s.coeffs) if c.denominator != 1)
            raise SemanticsError(f"{name}: coefficient {bad} = {s[bad]} is not an integer")
        values = s.coeffs
    else:
        values = [c * math.factorial(i) for i, c in enumerate(s.coeffs)]
        for i, c in enumerate(values):
            if c.denominator != 1:
                raise SemanticsError(f"{name}: {i}! * coefficient {i} = {c} is not an integer")
    if not allow_negative:
        for i, c in enumerate(values):
            if c < 0:
                raise SemanticsError(f"{name}: coefficient {i} is negative ({c})")


def evaluate(
    system: GrammarSystem,
    order: int,
    *,
    rule_order: list[str] | None = None,
    strategy: str = "incremental",
) -> SeriesEnvironment:
    """Solve the system up to ``order`` by fixed-point sweeps from the zero assignment.

    ``strategy="incremental"`` runs one sweep per order ``k = 0..N`` on
    series truncated at ``k`` and then one verification sweep at order ``N``.
    ``strategy="full"`` sweeps at order ``N`` until nothing changes. Either
    way at most ``N + 2`` sweeps are allowed. ``rule_order`` sets the
    preferred visiting order among rules without same-size dependencies.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    diags = validate(system)
    if diags:
        raise GrammarValidationError(diags)
    mode, omega = system.mode, system.omega
    rules = system.rule_map
    visit = dependency_order(system, rule_order)
    max_sweeps = order + 2
    sweeps = 0

    if strategy == "incremental":
        env = {n: PowerSeries.zero(0) for n in visit}
        for k in range(order + 1):
            env = {n: s.extend(k) for n, s in env.items()}
            for name in visit:
                env[name] = eval_expr(rules[name], env, k, mode, omega)
            sweeps += 1
        changed = False
        for name in visit:
            new = eval_expr(rules[name], env, order, mode, omega)
            if new != env[name]:
                changed = True
                env[name] = new
        sweeps += 1
        if changed:
            raise IllFoundedError("verification sweep changed the solution; the system is not well founded")
    elif strategy == "full":
        env = {n: PowerSeries.zero(order) for n in visit}
        while True:
            if sweeps >= max_sweeps:
                raise IllFoundedError(f"no fixed point after {max_sweeps} sweeps")
            changed = False
            for name in visit:
                new = eval_expr(rules[name], env, order, mode, omega)
                if new != env[name]:
                    changed = True
                    env[name] = new
            sweeps += 1
            if not changed:
                break
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    for name, s in env.items():
        _check_semantics(f"rule {name}", s, mode)
    memo: dict = {}
    root = PowerSeries.zero(order)
    for coef, expr in system.root:
        root = root + eval_expr(expr, env, order, mode, omega, memo).scale(coef)
    _check_semantics("root", root, mode)
    return SeriesEnvironment(
        order=order,
        mode=mode,
        series=MappingProxyType(dict(env)),
        root=root,
        converged=True,
        sweeps=sweeps,
    )


def counts(env: SeriesEnvironment) -> list[int]:
    """Root counting sequence ``c_0..c_N`` (labeled: coefficient times ``n!``)."""
    if env.mode == "labeled":
        out = []
        for i, c in enumerate(env.root.coeffs):
            v = c * math.factorial(i)
            if v.denominator != 1:
                raise SemanticsError(f"labeled count at {i} is not an integer: {v}")
            out.append(int(v))
        return out
    return env.root.integers()


def count_sequence(system: GrammarSystem, order: int) -> list[int]:
    return counts(evaluate(system, order))

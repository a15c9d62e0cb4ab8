"""Combinatorial grammar systems: AST, the text DSL, and static analysis.

Grammar source looks like::

    # plane unrooted pure 5-cacti
    @mode unlabeled;
    @omega {5};
    @root G;
    G    = T_S + T_P - T_SP;
    T_S  = Z * S_C;
    T_P  = Cyc(in Omega; Z + S_X);
    T_SP = P * S_X;
    S_C  = Cyc(>=2; P);
    S_X  = Z * Seq(>=1; P);
    P    = Seq(in Omega-1; Z + S_X);

``Z`` is the atom, ``1`` the empty object, ``*`` binds tighter than ``+``.
Subtraction and integer coefficients are only meaningful in the root
combination; rules that use them are kept apart as *signed* rules.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Union

from .errors import GrammarSyntaxError

INF = math.inf
OPERATORS = ("Seq", "Set", "Cyc", "USeq", "UCyc")
MODES = ("labeled", "unlabeled")


# ---------------------------------------------------------------------------
# integer sets: Omega and cardinalities


@dataclass(frozen=True)
class IntSet:
    """A finite set of integers or the half-line ``{k, k+1, ...}``."""

    members: frozenset[int] | None = None
    threshold: int | None = None

    def __post_init__(self):
        if (self.members is None) == (self.threshold is None):
            raise ValueError("exactly one of members / threshold must be given")
        if self.members is not None and not isinstance(self.members, frozenset):
            object.__setattr__(self, "members", frozenset(self.members))

    @classmethod
    def finite(cls, members: Iterable[int]) -> "IntSet":
        return cls(members=frozenset(members))

    @classmethod
    def at_least(cls, k: int) -> "IntSet":
        return cls(threshold=k)

    @property
    def is_finite(self) -> bool:
        return self.members is not None

    def __contains__(self, m: object) -> bool:
        if not isinstance(m, int):
            return False
        if self.members is not None:
            return m in self.members
        return m >= self.threshold

    def upto(self, n: int) -> list[int]:
        """Sorted members not exceeding ``n``."""
        if self.members is not None:
            return sorted(m for m in self.members if m <= n)
        return list(range(max(self.threshold, 0), n + 1))

    def minimum(self) -> int | None:
        if self.members is not None:
            return min(self.members) if self.members else None
        return self.threshold

    def shifted(self, delta: int) -> "IntSet":
        if self.members is not None:
            return IntSet.finite(m + delta for m in self.members)
        return IntSet.at_least(self.threshold + delta)

    def text(self) -> str:
        if self.members is not None:
            return "{" + ",".join(str(m) for m in sorted(self.members)) + "}"
        return f">={self.threshold}"

    def __str__(self) -> str:
        return self.text()


_OMEGA_RE = re.compile(r"^\s*(?:\{\s*(\d+(?:\s*,\s*\d+)*)?\s*\}|>=\s*(\d+))\s*$")


class OmegaSpec(IntSet):
    """Admissible cycle sizes. Members must be at least 2 (2 stands for a bridge)."""

    @classmethod
    def parse(cls, text: str) -> "OmegaSpec":
        """Parse ``{5}``, ``{3,5,7}`` or ``>=3``; raises ``ValueError`` on bad syntax."""
        m = _OMEGA_RE.match(text)
        if not m:
            raise ValueError(f"bad omega syntax {text!r}; expected {{a,b,...}} or >=k")
        if m.group(2) is not None:
            return cls(threshold=int(m.group(2)))
        body = m.group(1)
        members = [int(x) for x in body.split(",")] if body else []
        return cls(members=frozenset(members))

    def problems(self) -> list[str]:
        out = []
        if self.members is not None:
            if not self.members:
                out.append("omega is empty")
            bad = sorted(m for m in self.members if m < 2)
            if bad:
                out.append(f"omega members must be integers >= 2, got {bad}")
        elif self.threshold < 2:
            out.append(f"omega threshold must be >= 2, got {self.threshold}")
        return out

    def check(self) -> "OmegaSpec":
        probs = self.problems()
        if probs:
            raise ValueError("; ".join(probs))
        return self

    def minus_one(self) -> IntSet:
        return self.shifted(-1)


@dataclass(frozen=True)
class CardSpec:
    """Cardinality restriction of an operator.

    ``kind`` is one of ``exactly``, ``at_least``, ``set``, ``omega`` and
    ``omega_minus_1``; ``value`` carries the integer or member tuple.
    """

    kind: str
    value: int | tuple[int, ...] | None = None

    def resolve(self, omega: IntSet | None) -> IntSet:
        if self.kind == "exactly":
            return IntSet.finite([self.value])
        if self.kind == "at_least":
            return IntSet.at_least(self.value)
        if self.kind == "set":
            return IntSet.finite(self.value)
        if omega is None:
            raise ValueError("cardinality refers to Omega but no omega is bound")
        if self.kind == "omega":
            return IntSet(omega.members, omega.threshold)
        if self.kind == "omega_minus_1":
            return omega.shifted(-1)
        raise ValueError(f"unknown cardinality kind {self.kind!r}")

    def text(self) -> str:
        if self.kind == "exactly":
            return f"={self.value}"
        if self.kind == "at_least":
            return f">={self.value}"
        if self.kind == "set":
            return "in {" + ",".join(str(v) for v in self.value) + "}"
        if self.kind == "omega":
            return "in Omega"
        return "in Omega-1"


def exactly(m: int) -> CardSpec:
    return CardSpec("exactly", m)


def at_least(m: int) -> CardSpec:
    return CardSpec("at_least", m)


def in_set(*ms: int) -> CardSpec:
    return CardSpec("set", tuple(sorted(set(ms))))


IN_OMEGA = CardSpec("omega")
IN_OMEGA_MINUS_1 = CardSpec("omega_minus_1")


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Atom:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Sum:
    terms: tuple["Expr", ...]


@dataclass(frozen=True)
class Prod:
    factors: tuple["Expr", ...]


@dataclass(frozen=True)
class Op:
    op: str
    card: CardSpec
    arg: "Expr"

    def __post_init__(self):
        if self.op not in OPERATORS:
            raise ValueError(f"unknown operator {self.op!r}")


Expr = Union[Atom, One, Ref, Sum, Prod, Op]
Term = tuple[int, Expr]  # signed term of a root combination

Z = Atom()
ONE = One()


def add(*terms: Expr) -> Expr:
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def mul(*factors: Expr) -> Expr:
    return factors[0] if len(factors) == 1 else Prod(tuple(factors))


def walk(expr: Expr) -> Iterator[Expr]:
    """Pre-order traversal of an expression."""
    stack = [expr]
    while stack:
        e = stack.pop()
        yield e
        if isinstance(e, Sum):
            stack.extend(reversed(e.terms))
        elif isinstance(e, Prod):
            stack.extend(reversed(e.factors))
        elif isinstance(e, Op):
            stack.append(e.arg)


@dataclass(frozen=True)
class GrammarSystem:
    """Named, mutually recursive class definitions plus a signed root combination.

    ``rules`` are ordinary (subtraction-free) definitions. ``signed`` holds
    rules written with subtraction or integer coefficients; a valid system has
    at most one, and it is the root.
    """

    rules: tuple[tuple[str, Expr], ...]
    root: tuple[Term, ...]
    mode: str = "unlabeled"
    omega: OmegaSpec | None = None
    root_name: str | None = None
    signed: tuple[tuple[str, tuple[Term, ...]], ...] = field(default=())

    @cached_property
    def rule_map(self) -> dict[str, Expr]:
        return dict(self.rules)

    @cached_property
    def signed_map(self) -> dict[str, tuple[Term, ...]]:
        return dict(self.signed)

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.rules]

    def with_mode(self, mode: str) -> "GrammarSystem":
        return GrammarSystem(self.rules, self.root, mode, self.omega, self.root_name, self.signed)

    def with_rule_order(self, names: list[str]) -> "GrammarSystem":
        m = self.rule_map
        return GrammarSystem(
            tuple((n, m[n]) for n in names), self.root, self.mode, self.omega, self.root_name, self.signed
        )

    @property
    def has_subtraction(self) -> bool:
        return any(c != 1 for c, _ in self.root)

    def __str__(self) -> str:
        return format_system(self)


# ---------------------------------------------------------------------------
# printing

_PREC_SUM, _PREC_PROD, _PREC_ATOM = 0, 1, 2


def format_expr(expr: Expr, prec: int = _PREC_SUM) -> str:
    if isinstance(expr, Atom):
        return "Z"
    if isinstance(expr, One):
        return "1"
    if isinstance(expr, Ref):
        return expr.name
    if isinstance(expr, Sum):
        text = " + ".join(format_expr(t, _PREC_SUM + 1) for t in expr.terms)
        return f"({text})" if prec > _PREC_SUM else text
    if isinstance(expr, Prod):
        text = " * ".join(format_expr(f, _PREC_PROD + 1) for f in expr.factors)
        return f"({text})" if prec > _PREC_PROD else text
    if isinstance(expr, Op):
        return f"{expr.op}({expr.card.text()}; {format_expr(expr.arg)})"
    raise TypeError(f"not an expression: {expr!r}")


def format_combination(terms: tuple[Term, ...]) -> str:
    parts = []
    for i, (c, e) in enumerate(terms):
        body = format_expr(e, _PREC_PROD)
        if abs(c) != 1:
            body = f"{abs(c)} * {body}"
        if i == 0:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def format_system(system: GrammarSystem) -> str:
    lines = [f"@mode {system.mode};"]
    if system.omega is not None:
        lines.append(f"@omega {system.omega.text()};")
    if system.root_name is not None:
        lines.append(f"@root {system.root_name};")
    else:
        lines.append(f"@root {format_combination(system.root)};")
    for name, terms in system.signed:
        lines.append(f"{name} = {format_combination(terms)};")
    for name, expr in system.rules:
        lines.append(f"{name} = {format_expr(expr)};")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<comment>#[^\n]*)|(?P<sym>>=|[=;+\-*(){},@])|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<bad>.)"
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, line_start = 1, 0
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        col = m.start() - line_start + 1
        if kind == "bad":
            raise GrammarSyntaxError(f"unexpected character {m.group()!r}", line, col)
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, col))
        nl = m.group().count("\n")
        if nl:
            line += nl
            line_start = m.start() + m.group().rfind("\n") + 1
    toks.append(_Tok("eof", "", line, len(text) - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None) -> GrammarSyntaxError:
        tok = tok or self.tok
        return GrammarSyntaxError(msg, tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("sym", "name") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> _Tok:
        tok = self.tok
        if not self.accept(text):
            shown = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}")
        return tok

    def expect_int(self) -> int:
        tok = self.tok
        if tok.kind != "int":
            raise self.error(f"expected integer, found {tok.text or 'end of input'!r}")
        self.i += 1
        return int(tok.text)

    def expect_name(self) -> _Tok:
        tok = self.tok
        if tok.kind != "name":
            raise self.error(f"expected name, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok

    # expressions

    def combination(self) -> list[Term]:
        terms = []
        sign = -1 if self.accept("-") else 1
        while True:
            coef = 1
            if self.tok.kind == "int" and self.tok.text != "1" and self.toks[self.i + 1].text == "*":
                coef = int(self.tok.text)
                self.i += 2
            terms.append((sign * coef, self.product()))
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                return terms

    def expr(self) -> Expr:
        terms = [self.product()]
        while self.accept("+"):
            terms.append(self.product())
        if self.tok.text == "-":
            raise self.error("subtraction is only allowed at the top level of a rule")
        return add(*terms)

    def product(self) -> Expr:
        factors = [self.factor()]
        while self.accept("*"):
            factors.append(self.factor())
        return mul(*factors)

    def factor(self) -> Expr:
        tok = self.tok
        if tok.kind == "int":
            if tok.text != "1":
                raise self.error("integer coefficients are only allowed in front of a term of a signed combination")
            self.i += 1
            return ONE
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.kind == "name":
            self.i += 1
            if tok.text == "Z":
                return Z
            if tok.text in OPERATORS and self.tok.text == "(":
                self.expect("(")
                card = at_least(0)
                if self.tok.text in ("=", ">=", "in"):
                    card = self.card()
                    self.expect(";")
                arg = self.expr()
                self.expect(")")
                return Op(tok.text, card, arg)
            return Ref(tok.text)
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")

    def card(self) -> CardSpec:
        if self.accept("="):
            return exactly(self.expect_int())
        if self.accept(">="):
            return at_least(self.expect_int())
        self.expect("in")
        if self.accept("{"):
            vals = [self.expect_int()]
            while self.accept(","):
                vals.append(self.expect_int())
            self.expect("}")
            return in_set(*vals)
        self.expect("Omega")
        if self.accept("-"):
            tok = self.tok
            if self.expect_int() != 1:
                raise self.error("only 'Omega-1' is supported", tok)
            return IN_OMEGA_MINUS_1
        return IN_OMEGA

    def omega(self) -> OmegaSpec:
        if self.accept(">="):
            return OmegaSpec(threshold=self.expect_int())
        self.expect("{")
        vals = [self.expect_int()]
        while self.accept(","):
            vals.append(self.expect_int())
        self.expect("}")
        return OmegaSpec(members=frozenset(vals))

    # top level

    def system(self) -> GrammarSystem:
        mode = "unlabeled"
        omega = None
        root_terms: list[Term] | None = None
        plain: dict[str, Expr] = {}
        signed: dict[str, tuple[Term, ...]] = {}
        refs: list[tuple[str, _Tok]] = []
        while self.tok.kind != "eof":
            start = self.i
            if self.accept("@"):
                d = self.expect_name()
                if d.text == "mode":
                    m = self.expect_name()
                    if m.text not in MODES:
                        raise self.error(f"mode must be labeled or unlabeled, got {m.text!r}", m)
                    mode = m.text
                elif d.text == "omega":
                    omega = self.omega()
                elif d.text == "root":
                    root_terms = self.combination()
                else:
                    raise self.error(f"unknown directive @{d.text}", d)
                self.expect(";")
            else:
                name = self.expect_name()
                if name.text == "Z" or name.text in OPERATORS:
                    raise self.error(f"{name.text!r} is reserved", name)
                if name.text in plain or name.text in signed:
                    raise self.error(f"duplicate rule name {name.text!r}", name)
                self.expect("=")
                terms = self.combination()
                self.expect(";")
                if len(terms) == 1 and terms[0][0] == 1:
                    plain[name.text] = terms[0][1]
                elif all(c == 1 for c, _ in terms):
                    plain[name.text] = add(*(e for _, e in terms))
                else:
                    signed[name.text] = tuple(terms)
            # collect references of whatever was just parsed
            for tok in self.toks[start : self.i]:
                if tok.kind == "name" and tok.text not in ("Z", "in", "Omega") and tok.text not in OPERATORS:
                    refs.append((tok.text, tok))
        directives = {"mode", "omega", "root"}
        rule_names = set(plain) | set(signed)
        lhs_seen: set[int] = set()
        for name, tok in refs:
            if name in directives or name in MODES:
                continue
            if name not in rule_names:
                raise GrammarSyntaxError(f"unresolved reference {name!r}", tok.line, tok.col)
            lhs_seen.add(id(tok))
        if not plain and not signed:
            raise GrammarSyntaxError("grammar defines no rules", 1, 1)
        root_name = None
        if root_terms is None:
            if len(signed) == 1:
                root_name = next(iter(signed))
            else:
                root_name = next(iter(plain)) if plain else next(iter(signed))
        elif len(root_terms) == 1 and root_terms[0][0] == 1 and isinstance(root_terms[0][1], Ref):
            root_name = root_terms[0][1].name
        if root_name is not None:
            root = signed[root_name] if root_name in signed else ((1, Ref(root_name)),)
        else:
            root = tuple(root_terms)
        return GrammarSystem(
            rules=tuple(plain.items()),
            root=tuple(root),
            mode=mode,
            omega=omega,
            root_name=root_name,
            signed=tuple(signed.items()),
        )


def parse_grammar(text: str) -> GrammarSystem:
    """Parse grammar source into a :class:`GrammarSystem` (references resolved)."""
    return _Parser(text).system()


# ---------------------------------------------------------------------------
# static analysis


def _card_set(card: CardSpec, omega: IntSet | None) -> IntSet | None:
    try:
        return card.resolve(omega)
    except ValueError:
        return None


def expr_valuation(expr: Expr, val: dict[str, float], omega: IntSet | None) -> float:
    """Valuation of ``expr`` given valuations of the rules it references."""
    if isinstance(expr, Atom):
        return 1
    if isinstance(expr, One):
        return 0
    if isinstance(expr, Ref):
        return val.get(expr.name, INF)
    if isinstance(expr, Sum):
        return min(expr_valuation(t, val, omega) for t in expr.terms)
    if isinstance(expr, Prod):
        return sum(expr_valuation(f, val, omega) for f in expr.factors)
    if isinstance(expr, Op):
        cards = _card_set(expr.card, omega)
        if cards is None:
            return INF
        if 0 in cards:
            return 0
        v = expr_valuation(expr.arg, val, omega)
        lo = cards.minimum()
        if lo is None:
            return INF
        return lo * v if v != INF else INF
    raise TypeError(f"not an expression: {expr!r}")


def valuation(system: GrammarSystem) -> dict[str, float]:
    """Least fixed point of the valuation equations (``math.inf`` for empty rules).

    Signed rules are included, valued as the minimum over their terms.
    """
    omega = system.omega
    val: dict[str, float] = {n: INF for n, _ in system.rules}
    changed = True
    while changed:
        changed = False
        for name, expr in system.rules:
            v = expr_valuation(expr, val, omega)
            if v < val[name]:
                val[name] = v
                changed = True
    for name, terms in system.signed:
        val[name] = min((expr_valuation(e, val, omega) for _, e in terms), default=INF)
    return val


def root_valuation(system: GrammarSystem) -> float:
    val = valuation(system)
    return min((expr_valuation(e, val, system.omega) for _, e in system.root), default=INF)


def same_order_refs(expr: Expr, val: dict[str, float], omega: IntSet | None) -> set[str]:
    """Rules whose size-n coefficient feeds the size-n coefficient of ``expr``."""
    if isinstance(expr, (Atom, One)):
        return set()
    if isinstance(expr, Ref):
        return {expr.name}
    if isinstance(expr, Sum):
        out: set[str] = set()
        for t in expr.terms:
            out |= same_order_refs(t, val, omega)
        return out
    if isinstance(expr, Prod):
        vals = [expr_valuation(f, val, omega) for f in expr.factors]
        if INF in vals:
            return set()
        out = set()
        for i, f in enumerate(expr.factors):
            if sum(vals) - vals[i] == 0:
                out |= same_order_refs(f, val, omega)
        return out
    if isinstance(expr, Op):
        cards = _card_set(expr.card, omega)
        if cards is not None and 1 in cards:
            return same_order_refs(expr.arg, val, omega)
        return set()
    raise TypeError(f"not an expression: {expr!r}")


def dependency_order(system: GrammarSystem, preferred: list[str] | None = None) -> list[str]:
    """Rules ordered so same-size dependencies come first.

    Ties keep the order of ``preferred`` (default: declaration order). Raises
    ``ValueError`` naming a cycle when the same-size dependency graph is cyclic.
    """
    val = valuation(system)
    names = preferred or system.names
    deps = {n: same_order_refs(system.rule_map[n], val, system.omega) & set(names) for n in names}
    order: list[str] = []
    state: dict[str, int] = {}

    def visit(n: str, path: list[str]) -> None:
        st = state.get(n, 0)
        if st == 2:
            return
        if st == 1:
            cyc = path[path.index(n):] + [n]
            raise ValueError(" -> ".join(cyc))
        state[n] = 1
        for d in sorted(deps[n], key=names.index):
            visit(d, path + [n])
        state[n] = 2
        order.append(n)

    for n in names:
        visit(n, [])
    return order


def validate(system: GrammarSystem) -> list[str]:
    """Static checks; returns human-readable diagnostics (empty list means valid)."""
    diags: list[str] = []
    omega = system.omega
    if system.mode not in MODES:
        diags.append(f"mode must be labeled or unlabeled, got {system.mode!r}")
    if omega is not None:
        diags.extend(OmegaSpec(omega.members, omega.threshold).problems())
    val = valuation(system)

    def exprs() -> Iterator[tuple[str, Expr]]:
        for name, expr in system.rules:
            yield name, expr
        for name, terms in system.signed:
            for _, e in terms:
                yield name, e
        if system.root_name is None:
            for _, e in system.root:
                yield "@root", e

    for owner, expr in exprs():
        for node in walk(expr):
            if isinstance(node, Ref) and node.name in system.signed_map:
                diags.append(f"{owner}: signed combination {node.name} is referenced inside a rule")
            if not isinstance(node, Op):
                continue
            cards = _card_set(node.card, omega)
            if cards is None:
                diags.append(f"{owner}: {node.op} uses '{node.card.text()}' but no omega is bound")
                continue
            if cards.is_finite and not cards.members:
                diags.append(f"{owner}: {node.op} has an empty cardinality set")
            if cards.minimum() is not None and cards.minimum() < 0:
                diags.append(f"{owner}: {node.op} admits a negative cardinality")
            if node.op in ("Cyc", "UCyc") and 0 in cards:
                diags.append(f"{owner}: {node.op} must not admit cardinality 0")
            v = expr_valuation(node.arg, val, omega)
            if v == 0:
                diags.append(
                    f"{owner}: argument of {node.op} has valuation 0 (operator arguments must not contain the empty object)"
                )
    for name, _ in system.rules:
        if val[name] == INF:
            diags.append(f"rule {name} generates no objects (valuation infinite)")
    for name, _ in system.signed:
        if name != system.root_name:
            diags.append(f"rule {name}: subtraction or integer coefficients are only allowed in the root combination")
    try:
        dependency_order(system)
    except ValueError as exc:
        diags.append(f"ill-founded recursion without size increase: {exc}")
    return diags

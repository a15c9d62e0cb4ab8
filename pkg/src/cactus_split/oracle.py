"""Brute-force ground truth, sharing no series or operator code with the engine.

* exhaustive censuses of labeled cacti on up to 7 vertices, deduplicated
  into unlabeled (and rooted) classes by explicit orbits under vertex
  permutations;
* exhaustive enumeration of the objects of an unlabeled grammar;
* explicit orbit counting of strings under small permutation groups;
* the Euler-transform recurrence for rooted unlabeled trees.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product

from . import kernels
from .errors import ResourceError
from .grammar import Atom, Expr, GrammarSystem, IntSet, One, Op, Prod, Ref, Sum
from .sampler import Term

CENSUS_MAX_N = 7
BURNSIDE_MAX = 10**7
STRUCTURE_CAP = 200_000
GROUPS = ("trivial", "cyclic", "reversal", "dihedral", "symmetric")


# ---------------------------------------------------------------------------
# graph census


@dataclass(frozen=True)
class CensusResult:
    omega: str
    rooted: bool
    labeled: tuple[int, ...]
    unlabeled: tuple[int, ...]
    seconds: float

    def to_csv(self) -> str:
        rows = ["n,labeled,unlabeled"]
        rows += [f"{n},{a},{b}" for n, (a, b) in enumerate(zip(self.labeled, self.unlabeled))]
        return "\n".join(rows) + "\n"


def _edge_index(n: int) -> dict[tuple[int, int], int]:
    return {(i, j): e for e, (i, j) in enumerate((i, j) for i in range(n) for j in range(i + 1, n))}


@lru_cache(maxsize=None)
def _perm_edge_maps(n: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    idx = _edge_index(n)
    pairs = sorted(idx, key=idx.get)
    out = []
    for p in permutations(range(n)):
        emap = tuple(idx[tuple(sorted((p[i], p[j])))] for i, j in pairs)
        out.append((p, emap))
    return tuple(out)


def _apply(mask: int, emap: tuple[int, ...]) -> int:
    out = 0
    e = 0
    while mask:
        if mask & 1:
            out |= 1 << emap[e]
        mask >>= 1
        e += 1
    return out


def _admissible(omega: IntSet, bridges: int, cycles: tuple[int, ...]) -> bool:
    if bridges and 2 not in omega:
        return False
    return all(c in omega for c in cycles)


def census_masks(n: int, omega: IntSet) -> list[int]:
    """Edge masks of all labeled cacti on ``0..n-1`` with cycle sizes in ``omega``."""
    if n > CENSUS_MAX_N:
        raise ResourceError(f"census limited to n <= {CENSUS_MAX_N}")
    return [mask for mask, br, cyc in kernels.cactus_census(n) if _admissible(omega, br, cyc)]


def _orbits(n: int, masks: list[int]) -> list[tuple[int, int]]:
    """Orbit representatives with the number of vertex orbits of each (rooted classes)."""
    remaining = set(masks)
    maps = _perm_edge_maps(n)
    out = []
    for mask in sorted(masks):
        if mask not in remaining:
            continue
        autos = []
        for p, emap in maps:
            img = _apply(mask, emap)
            remaining.discard(img)
            if img == mask:
                autos.append(p)
        # vertex orbits under the automorphism group
        seen = set()
        vorbits = 0
        for v in range(n):
            if v in seen:
                continue
            vorbits += 1
            seen.update(p[v] for p in autos)
        out.append((mask, vorbits))
    return out


def census(omega: IntSet, n_max: int, rooted: bool = False) -> CensusResult:
    """Labeled and unlabeled counts of cacti with cycle sizes in ``omega`` for ``n = 0..n_max``.

    Size 1 is the single vertex. Rooted labeled counts are ``n`` times the
    unrooted ones; rooted unlabeled counts add the vertex orbits of each class.
    """
    if n_max > CENSUS_MAX_N:
        raise ResourceError(f"census limited to n <= {CENSUS_MAX_N}, asked for {n_max}")
    start = time.perf_counter()
    lab = [0]
    unl = [0]
    for n in range(1, n_max + 1):
        masks = census_masks(n, omega)
        reps = _orbits(n, masks)
        if rooted:
            lab.append(n * len(masks))
            unl.append(sum(k for _, k in reps))
        else:
            lab.append(len(masks))
            unl.append(len(reps))
    text = omega.text() if hasattr(omega, "text") else str(omega)
    return CensusResult(text, rooted, tuple(lab), tuple(unl), time.perf_counter() - start)


def census_labeled_cacti(omega: IntSet, n_max: int, rooted: bool = False) -> CensusResult:
    return census(omega, n_max, rooted)


def census_unlabeled_cacti(omega: IntSet, n_max: int, rooted: bool = False) -> CensusResult:
    return census(omega, n_max, rooted)


# ---------------------------------------------------------------------------
# orbit counting


def _group(m: int, group: str) -> list[tuple[int, ...]]:
    ident = tuple(range(m))
    if group == "trivial":
        return [ident]
    rots = [tuple((i + r) % m for i in range(m)) for r in range(m)]
    if group == "cyclic":
        return rots
    if group == "reversal":
        return [ident, tuple(reversed(ident))]
    if group == "dihedral":
        return rots + [tuple(reversed(r)) for r in rots]
    if group == "symmetric":
        return list(permutations(range(m)))
    raise ValueError(f"group must be one of {GROUPS}")


def burnside_orbits(m: int, q: int, group: str) -> int:
    """Number of orbits of the ``q**m`` strings of length ``m`` under ``group``.

    Counted by explicit orbit partition, not by the orbit-counting lemma.
    """
    if q**m > BURNSIDE_MAX:
        raise ResourceError(f"{q}^{m} strings exceed the limit of {BURNSIDE_MAX}")
    if m == 0:
        return 1
    perms = _group(m, group)
    seen = set()
    orbits = 0
    for s in product(range(q), repeat=m):
        if s in seen:
            continue
        orbits += 1
        for p in perms:
            seen.add(tuple(s[i] for i in p))
    return orbits


def labeled_orbits(m: int, q: int, group: str) -> int:
    """Labeled structures on ``m`` atoms each coloured in ``q`` ways.

    Orbits of the ``m!`` label arrangements under ``group`` (explicit), times
    the ``q**m`` colourings of the labels.
    """
    if math.factorial(m) > BURNSIDE_MAX:
        raise ResourceError("too many label arrangements")
    if m == 0:
        return 1
    perms = _group(m, group)
    seen = set()
    orbits = 0
    for s in permutations(range(m)):
        if s in seen:
            continue
        orbits += 1
        for p in perms:
            seen.add(tuple(s[i] for i in p))
    return orbits * q**m


# ---------------------------------------------------------------------------
# rooted trees


def rooted_tree_counts(n_max: int) -> list[int]:
    """Rooted unlabeled trees with ``n`` vertices, ``n = 0..n_max``."""
    a = [0] * (n_max + 1)
    if n_max >= 1:
        a[1] = 1
    for n in range(1, n_max):
        total = 0
        for k in range(1, n + 1):
            s = sum(d * a[d] for d in range(1, k + 1) if k % d == 0)
            total += s * a[n - k + 1]
        a[n + 1] = total // n
    return a


# ---------------------------------------------------------------------------
# structure enumeration


def _compositions(n: int, parts: int, lo: int):
    """Ordered ``parts``-tuples of integers ``>= lo`` summing to ``n``."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    for first in range(lo, n - lo * (parts - 1) + 1):
        for rest in _compositions(n - first, parts - 1, lo):
            yield (first,) + rest


class StructureEnumerator:
    """All objects of a given size of an unlabeled grammar, as canonical terms.

    Cycles are listed up to rotation, undirected sequences up to reversal,
    undirected cycles up to the dihedral group, and sets as sorted multisets.
    """

    def __init__(self, system: GrammarSystem, cap: int = STRUCTURE_CAP):
        if system.has_subtraction:
            raise ValueError("enumeration needs a root without subtraction")
        self.system = system
        self.rules = system.rule_map
        self.cap = cap
        self._memo: dict[tuple[int, int], list] = {}
        self._valuations: dict[int, int] = {}
        self._exprs: dict[int, Expr] = {}

    def _guard(self, items: list) -> list:
        if len(items) > self.cap:
            raise ResourceError(f"more than {self.cap} structures; raise the cap or lower n")
        return items

    def _min_size(self, expr: Expr) -> int:
        from .grammar import expr_valuation, valuation

        if not self._valuations:
            self._vals = valuation(self.system)
        key = id(expr)
        if key not in self._valuations:
            v = expr_valuation(expr, self._vals, self.system.omega)
            self._valuations[key] = v
            self._exprs[key] = expr
        return self._valuations[key]

    def of(self, expr: Expr, n: int) -> list:
        if n < 0:
            return []
        key = (id(expr), n)
        if key in self._memo:
            return self._memo[key]
        self._exprs[id(expr)] = expr
        v = self._min_size(expr)
        if v == math.inf or n < v:
            self._memo[key] = []
            return []
        if isinstance(expr, Atom):
            out = [Term("Z", (), 0)] if n == 1 else []
        elif isinstance(expr, One):
            out = [Term("1", (), 0)] if n == 0 else []
        elif isinstance(expr, Ref):
            self._memo[key] = []  # guards against same-size recursion
            out = [Term("ref", (s,), expr.name) for s in self.of(self.rules[expr.name], n)]
        elif isinstance(expr, Sum):
            out = []
            for i, t in enumerate(expr.terms):
                out += [Term("sum", (s,), i) for s in self.of(t, n)]
        elif isinstance(expr, Prod):
            out = self._product(expr.factors, n)
        elif isinstance(expr, Op):
            out = self._operator(expr, n)
        else:
            raise TypeError(expr)
        self._memo[key] = self._guard(out)
        return out

    def _product(self, factors, n: int) -> list:
        mins = [self._min_size(f) for f in factors]
        out = []

        def rec(i: int, left: int, acc: tuple):
            if i == len(factors):
                if left == 0:
                    out.append(Term("prod", acc, 0))
                return
            rest_min = sum(mins[i + 1 :])
            for s in range(mins[i], left - rest_min + 1):
                for obj in self.of(factors[i], s):
                    rec(i + 1, left - s, acc + (obj,))
                    if len(out) > self.cap:
                        raise ResourceError(f"more than {self.cap} structures")

        rec(0, n, ())
        return out

    def _operator(self, expr: Op, n: int) -> list:
        cards = expr.card.resolve(self.system.omega)
        v = self._min_size(expr.arg)
        out = []
        if 0 in cards and n == 0:
            out.append(Term(expr.op, (), 0))
        if v == math.inf or v == 0:
            return out
        for m in cards.upto(n // v):
            if m == 0:
                continue
            for sizes in _compositions(n, m, v):
                pools = [self.of(expr.arg, s) for s in sizes]
                if expr.op == "Set":
                    if list(sizes) != sorted(sizes):
                        continue
                    for combo in self._multisets(sizes, pools):
                        out.append(Term("Set", combo, 0))
                    continue
                for seq in product(*pools):
                    if self._is_canonical(expr.op, seq):
                        out.append(Term(expr.op, seq, 0))
                if len(out) > self.cap:
                    raise ResourceError(f"more than {self.cap} structures")
        return out

    @staticmethod
    def _multisets(sizes, pools):
        # group equal sizes; within a group pick a sorted multiset
        groups = []
        i = 0
        while i < len(sizes):
            j = i
            while j < len(sizes) and sizes[j] == sizes[i]:
                j += 1
            groups.append((pools[i], j - i))
            i = j
        choices = [list(combinations_with_replacement(range(len(pool)), k)) for pool, k in groups]
        for pick in product(*choices):
            combo = []
            for (pool, _), idxs in zip(groups, pick):
                combo.extend(pool[x] for x in idxs)
            yield tuple(combo)

    @staticmethod
    def _is_canonical(op: str, seq: tuple) -> bool:
        if op == "Seq":
            return True
        keys = [repr(s) for s in seq]
        k = tuple(keys)
        m = len(keys)
        if op == "Cyc":
            return all(k <= k[r:] + k[:r] for r in range(1, m))
        if op == "USeq":
            return k <= k[::-1]
        if op == "UCyc":
            rots = [k[r:] + k[:r] for r in range(m)]
            return all(k <= r and k <= r[::-1] for r in rots)
        raise ValueError(op)

    def root(self, n: int) -> list:
        out = []
        for coef, expr in self.system.root:
            out += self.of(expr, n)
        return out


def enumerate_structures(system: GrammarSystem, n: int, cap: int = STRUCTURE_CAP) -> list:
    """Every object of size ``n`` generated by the root of an unlabeled grammar."""
    return StructureEnumerator(system, cap).root(n)


def plane_term_from_structure(s: Term) -> Term:
    """Convert an enumerated plane-rooted object (compact grammar) to sampler form."""

    def vertex(prod_term: Term) -> Term:
        # prod(Z, X) where X is Cyc or Seq of Seq_{Omega-1}(Q) objects
        seqs = prod_term.children[1].children
        polys = tuple(Term("polygon", tuple(vertex(_unref(q)) for q in b.children), 0) for b in seqs)
        return Term("vertex", polys, 0)

    return vertex(_unref(s))


def _unref(t: Term) -> Term:
    while t.kind in ("ref", "sum"):
        t = t.children[0]
    return t

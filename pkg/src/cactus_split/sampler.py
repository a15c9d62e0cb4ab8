"""Exact-size uniform sampling of rooted cacti by the recursive method.

Structures are trees of :class:`Term` values. A ``vertex`` term carries the
polygons hanging from it; a ``polygon`` term lists the polygon's other
vertices in order (one vertex means a bridge). For the root the polygon list
is a cyclic arrangement (plane) or a set (free); for any other vertex it is a
sequence (plane) or a set (free).
"""

from __future__ import annotations

import math
import random
from typing import NamedTuple

from . import kernels
from .engine import divisors, totient
from .errors import ResourceError, StructureError, ZeroCountError
from .grammar import IntSet, OmegaSpec
from .graphs import SimpleGraph

RNG_ALGORITHM = "MT19937 (Python random.Random)"


class Term(NamedTuple):
    kind: str
    children: tuple
    tag: object = 0


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def _choose(rng: random.Random, weights: list[int], total: int | None = None) -> int:
    """Index drawn with probability proportional to non-negative integer weights."""
    if total is None:
        total = sum(weights)
    if total <= 0:
        raise StructureError("no admissible choice (all weights are zero)")
    r = rng.randrange(total)
    for i, w in enumerate(weights):
        if r < w:
            return i
        r -= w
    raise AssertionError("weights changed during draw")


def _nearest(table: list[int], n: int, k: int = 3) -> tuple[int, ...]:
    sizes = [i for i, c in enumerate(table) if c]
    sizes.sort(key=lambda i: (abs(i - n), i))
    return tuple(sorted(sizes[:k]))


# ---------------------------------------------------------------------------
# plane, rooted, unlabeled


class PlaneRootedTables:
    """Counting tables for plane rooted unlabeled cacti with cycle sizes in ``omega``.

    With ``L = omega - 1`` (polygon sizes minus the entry vertex):
    ``Q = Z * Seq(B)``, ``B = sum_{l in L} Q^l``, ``G = Z * Cyc_{>=1}(B)``.
    """

    def __init__(self, omega: OmegaSpec, order: int):
        probs = omega.problems()
        if probs:
            raise ValueError("; ".join(probs))
        self.omega = omega
        self.order = order
        self.lengths: IntSet = omega.minus_one()
        N = order
        if self.lengths.is_finite:
            self.finite = sorted(m for m in self.lengths.members if 1 <= m <= N)
            self.threshold = None
            top = max(self.finite, default=0)
        else:
            self.finite = None
            self.threshold = max(self.lengths.threshold, 1)
            top = self.threshold
        Q = [0] * (N + 1)
        S = [1] + [0] * N  # Seq(B)
        B = [0] * (N + 1)
        SQ = [1] + [0] * N  # Seq(Q), only used with a threshold
        P = [[1] + [0] * N] + [[0] * (N + 1) for _ in range(top)]  # P[l] = Q^l
        dot = kernels.dot
        for n in range(1, N + 1):
            Q[n] = S[n - 1]
            for l in range(1, top + 1):
                # (Q^l)_n = sum_j Q_j (Q^{l-1})_{n-j}
                P[l][n] = dot(Q, P[l - 1], n, 1, n - (l - 1)) if n >= l else 0
            if self.finite is not None:
                B[n] = sum(P[l][n] for l in self.finite)
            else:
                SQ[n] = dot(Q, SQ, n, 1, n)
                t = self.threshold
                B[n] = dot(P[t], SQ, n, t, n)
            S[n] = dot(B, S, n, 1, n)
        W = [0] * (N + 1)
        IB = [i * b for i, b in enumerate(B)]
        for j in range(1, N + 1):
            W[j] = dot(IB, S, j, 1, j)
        C = [0] * (N + 1)  # Cyc_{>=1}(B)
        for k in range(1, N + 1):
            total = sum(totient(d) * W[k // d] for d in divisors(k))
            if total % k:
                raise AssertionError("necklace count is not an integer")
            C[k] = total // k
        G = [0] + C[:N]
        self.Q, self.S, self.B, self.SQ, self.P, self.W, self.C, self.G = Q, S, B, SQ, P, W, C, G

    def count(self, n: int) -> int:
        return self.G[n] if 0 <= n <= self.order else 0


def _table_check(table: list[int], n: int, order: int, what: str, wider=None) -> None:
    """``wider`` optionally rebuilds a longer table so nearby realizable sizes can be reported."""
    if n > order:
        raise ResourceError(f"tables cover sizes up to {order}, requested {n}")
    if n < 0 or table[n] == 0:
        if wider is not None:
            table = wider(2 * max(n, 0) + 12)
        raise ZeroCountError(f"no {what} of size {n}", _nearest(table, n))


def sample_plane_rooted(
    omega: OmegaSpec, n: int, rng: random.Random, tables: PlaneRootedTables | None = None
) -> Term:
    """Uniform plane rooted unlabeled cactus with ``n`` vertices and cycle sizes in ``omega``."""
    if tables is None:
        tables = PlaneRootedTables(omega, n)
    T = tables
    _table_check(
        T.G, n, T.order, f"plane rooted cactus with omega {omega.text()}", lambda k: PlaneRootedTables(omega, k).G
    )

    # Work items fill mutable holders; everything is iterative.
    # holder: [kind, children(list), tag]
    root = ["vertex", [], 0]
    stack: list[tuple] = [("cyc", n - 1, root[1])]
    while stack:
        task = stack.pop()
        kind = task[0]
        if kind == "cyc":
            _, k, out = task
            plan = _sample_necklace(T, k, rng)
            period = []
            for size in plan:
                poly = ["polygon", [], 0]
                period.append(poly)
                stack.append(("B", size, poly[1]))
            # the same holders repeat, so every copy is the same object
            full = period * plan.period
            out.extend(full[plan.shift :] + full[: plan.shift])
        elif kind == "seqB":
            _, k, out = task
            while k > 0:
                i = _choose(rng, [T.B[i] * T.S[k - i] for i in range(1, k + 1)], T.S[k]) + 1
                poly = ["polygon", [], 0]
                out.append(poly)
                stack.append(("B", i, poly[1]))
                k -= i
        elif kind == "B":
            _, k, out = task
            sizes = _sample_polygon_sizes(T, k, rng)
            for s in sizes:
                v = ["vertex", [], 0]
                out.append(v)
                stack.append(("seqB", s - 1, v[1]))
        else:  # pragma: no cover
            raise AssertionError(kind)
    return _freeze(root)


def _sample_power(T: PlaneRootedTables, l: int, k: int, rng: random.Random) -> list[int]:
    """Component sizes of a uniform element of ``Q^l`` of size ``k``."""
    sizes = []
    while l > 0:
        if l == 1:
            sizes.append(k)
            break
        prev = T.P[l - 1]
        i = _choose(rng, [T.Q[i] * prev[k - i] for i in range(1, k - l + 2)], T.P[l][k]) + 1
        sizes.append(i)
        k -= i
        l -= 1
    return sizes


def _sample_polygon_sizes(T: PlaneRootedTables, k: int, rng: random.Random) -> list[int]:
    """Sizes of the vertex subtrees along a uniform polygon (B-object) of size ``k``."""
    if T.finite is not None:
        ls = [l for l in T.finite if l <= k]
        l = ls[_choose(rng, [T.P[l][k] for l in ls], T.B[k])]
        return _sample_power(T, l, k, rng)
    t = T.threshold
    j = _choose(rng, [T.P[t][j] * T.SQ[k - j] for j in range(t, k + 1)], T.B[k]) + t
    sizes = _sample_power(T, t, j, rng)
    rest = k - j
    while rest > 0:
        i = _choose(rng, [T.Q[i] * T.SQ[rest - i] for i in range(1, rest + 1)], T.SQ[rest]) + 1
        sizes.append(i)
        rest -= i
    return sizes


def _sample_necklace(T: PlaneRootedTables, k: int, rng: random.Random) -> "_NecklacePlan":
    """Sizes of the polygons around the root, for a uniform cyclic arrangement.

    Picks a period ``d | k`` with weight ``phi(d) * W[k/d]``, draws a sequence
    of size ``k/d`` whose first component is chosen with weight
    ``i * B[i] * S[k/d - i]``, repeats it ``d`` times and rotates uniformly.
    Only the sizes of one period are returned, with the period count and shift.
    """
    ds = divisors(k)
    d = ds[_choose(rng, [totient(d) * T.W[k // d] for d in ds])]
    j = k // d
    i = _choose(rng, [i * T.B[i] * T.S[j - i] for i in range(1, j + 1)], T.W[j]) + 1
    sizes = [i]
    rest = j - i
    while rest > 0:
        s = _choose(rng, [T.B[s] * T.S[rest - s] for s in range(1, rest + 1)], T.S[rest]) + 1
        sizes.append(s)
        rest -= s
    return _NecklacePlan(sizes, d, rng.randrange(len(sizes)))


class _NecklacePlan(list):
    """Component sizes of one period plus replication count and rotation."""

    def __init__(self, sizes: list[int], period: int, shift: int):
        super().__init__(sizes)
        self.period = period
        self.shift = shift


def _freeze(holder: list) -> Term:
    """Convert nested mutable holders into Terms (iteratively)."""
    out: dict[int, Term] = {}
    stack = [(holder, False)]
    while stack:
        h, done = stack.pop()
        if done:
            out[id(h)] = Term(h[0], tuple(out[id(c)] if isinstance(c, list) else c for c in h[1]), h[2])
            continue
        stack.append((h, True))
        for c in h[1]:
            if isinstance(c, list) and id(c) not in out:
                stack.append((c, False))
    return out[id(holder)]


# ---------------------------------------------------------------------------
# free, rooted, labeled


class LabeledFreeRootedTables:
    """Labeled counts (``n! [x^n]``) for ``G = Z * Set_{>=1}(USeq_L(Z + G))``.

    A set of ``m`` components is drawn as a sequence of ``m`` components whose
    order is then forgotten, so ``R[m][n]`` holds labeled sequence counts of
    ``m`` chains.
    """

    def __init__(self, omega: OmegaSpec, order: int):
        probs = omega.problems()
        if probs:
            raise ValueError("; ".join(probs))
        self.omega = omega
        self.order = N = order
        L = omega.minus_one()
        self.lengths = [l for l in L.upto(N) if l >= 1]
        binom = [[math.comb(n, k) for k in range(n + 1)] for n in range(N + 1)]
        self.binom = binom
        G = [0] * (N + 1)
        H = [0] * (N + 1)  # Z + G
        HP = [[1] + [0] * N]  # HP[l] = H^l (labeled sequences)
        top = max(self.lengths, default=0)
        HP += [[0] * (N + 1) for _ in range(top)]
        U = [0] * (N + 1)  # USeq_L(H)
        R = [[1] + [0] * N] + [[0] * (N + 1) for _ in range(N)]  # R[m] = U^m
        E = [0] * (N + 1)  # Set_{>=1}(U) as sum_m R[m]/m!
        for n in range(1, N + 1):
            # G_n needs E_{n-1}, which only involves sizes < n
            G[n] = n * E[n - 1]
            H[n] = G[n] + (1 if n == 1 else 0)
            for l in range(1, top + 1):
                HP[l][n] = sum(binom[n][i] * H[i] * HP[l - 1][n - i] for i in range(1, n - l + 2)) if n >= l else 0
            U[n] = sum(HP[l][n] if l == 1 else HP[l][n] // 2 for l in self.lengths if l <= n)
            for m in range(1, n + 1):
                R[m][n] = sum(binom[n][i] * U[i] * R[m - 1][n - i] for i in range(1, n - m + 2))
            E[n] = sum(R[m][n] // math.factorial(m) for m in range(1, n + 1))
        self.G, self.H, self.HP, self.U, self.R, self.E = G, H, HP, U, R, E

    def count(self, n: int) -> int:
        return self.G[n] if 0 <= n <= self.order else 0


def sample_labeled_free_rooted(
    omega: OmegaSpec, n: int, rng: random.Random, tables: LabeledFreeRootedTables | None = None
) -> Term:
    """Uniform rooted labeled free cactus on labels ``1..n``.

    The shape is drawn with atoms in creation order; a uniform permutation of
    ``1..n`` then labels them, which is uniform because every product used is
    a plain labeled product.
    """
    if tables is None:
        tables = LabeledFreeRootedTables(omega, n)
    T = tables
    _table_check(
        T.G,
        n,
        T.order,
        f"rooted labeled free cactus with omega {omega.text()}",
        lambda k: LabeledFreeRootedTables(omega, k).G,
    )
    root = ["vertex", [], None]
    atoms = [root]
    stack = [("set", n - 1, root[1])]
    while stack:
        kind, k, out = stack.pop()
        if kind == "set":
            if k == 0:
                continue
            ms = list(range(1, k + 1))
            m = ms[_choose(rng, [T.R[m][k] // math.factorial(m) for m in ms], T.E[k])]
            rest = k
            for left in range(m, 0, -1):
                weights = [T.binom[rest][i] * T.U[i] * T.R[left - 1][rest - i] for i in range(1, rest - left + 2)]
                i = _choose(rng, weights, T.R[left][rest]) + 1
                chain = ["chain", [], 0]
                out.append(chain)
                stack.append(("chain", i, chain[1]))
                rest -= i
        elif kind == "chain":
            ls = [l for l in T.lengths if l <= k]
            l = ls[_choose(rng, [T.HP[l][k] if l == 1 else T.HP[l][k] // 2 for l in ls], T.U[k])]
            rest = k
            for left in range(l, 0, -1):
                prev = T.HP[left - 1]
                weights = [T.binom[rest][i] * T.H[i] * prev[rest - i] for i in range(1, rest - left + 2)]
                i = _choose(rng, weights, T.HP[left][rest]) + 1
                v = ["vertex", [], None]
                atoms.append(v)
                out.append(v)
                # H = Z + G: at size 1 the atom alone competes with G_1 = 0
                stack.append(("set", i - 1, v[1]))
                rest -= i
    labels = list(range(1, n + 1))
    rng.shuffle(labels)
    for holder, lab in zip(atoms, labels):
        holder[2] = lab
    return canonical_free(_freeze(root))


# ---------------------------------------------------------------------------
# canonical forms and realization


def _postorder(term: Term) -> list[Term]:
    order = []
    stack = [(term, False)]
    seen = set()
    while stack:
        t, done = stack.pop()
        if done:
            order.append(t)
            continue
        if id(t) in seen:
            continue
        seen.add(id(t))
        stack.append((t, True))
        for c in t.children:
            stack.append((c, False))
    return order


def _min_rotation(seq: tuple) -> tuple:
    if not seq:
        return seq
    return min(seq[i:] + seq[:i] for i in range(len(seq)))


def canonical_plane(term: Term) -> Term:
    """Normal form of a plane rooted structure: the root's polygon ring rotated to its minimum."""
    return Term(term.kind, _min_rotation(tuple(term.children)), term.tag)


def structure_key(term: Term) -> str:
    """Compact canonical string of a plane rooted structure (for counting and hashing)."""
    memo: dict[int, str] = {}
    for t in _postorder(term):
        inner = ",".join(memo[id(c)] for c in t.children)
        memo[id(t)] = ("v(" if t.kind == "vertex" else "p(") + inner + ")"
    root = term
    parts = [memo[id(c)] for c in root.children]
    best = min(",".join(parts[i:] + parts[:i]) for i in range(len(parts))) if parts else ""
    return "v(" + best + ")"


def canonical_free(term: Term) -> Term:
    """Normal form of a labeled free structure: sets sorted, chains oriented."""
    memo: dict[int, Term] = {}
    for t in _postorder(term):
        kids = tuple(memo[id(c)] for c in t.children)
        if t.kind == "vertex":
            kids = tuple(sorted(kids, key=_min_label_key))
        elif t.kind == "chain" and len(kids) > 1 and _label_key(kids[-1]) < _label_key(kids[0]):
            kids = kids[::-1]
        memo[id(t)] = Term(t.kind, kids, t.tag)
    return memo[id(term)]


def _label_key(t: Term):
    return t.tag if t.kind == "vertex" else min(_label_key(c) for c in t.children)


def _min_label_key(t: Term):
    stack = [t]
    best = None
    while stack:
        x = stack.pop()
        if x.kind == "vertex" and (best is None or x.tag < best):
            best = x.tag
        stack.extend(x.children)
    return best


def structure_size(term: Term) -> int:
    count = 0
    stack = [term]
    while stack:
        t = stack.pop()
        if t.kind == "vertex":
            count += 1
        stack.extend(t.children)
    return count


def structure_to_graph(term: Term) -> SimpleGraph:
    """Realize a structure as a graph with a rotation system.

    Unlabeled vertices are numbered in traversal order with the root as 0;
    labeled structures keep their labels. The rotation at a vertex lists its
    parent polygon neighbours, then each child polygon's first and last vertex
    in order. Shared subterms are realized once per occurrence.
    """
    if term.kind != "vertex":
        raise StructureError("a structure must start at a vertex")
    labeled = term.tag not in (0, None)
    counter = 1
    root_id = term.tag if labeled else 0
    edges: list[tuple] = []
    rotation: dict[object, list] = {root_id: []}
    stack = [(root_id, term)]
    while stack:
        vid, v = stack.pop()
        for poly in v.children:
            if poly.kind not in ("polygon", "chain") or not poly.children:
                raise StructureError("malformed polygon")
            members = []
            for w in poly.children:
                if w.kind != "vertex":
                    raise StructureError("polygon members must be vertices")
                if labeled:
                    wid = w.tag
                else:
                    wid = counter
                    counter += 1
                if wid in rotation:
                    raise StructureError(f"duplicate vertex label {wid!r}")
                rotation[wid] = []
                members.append((wid, w))
            ring = [vid] + [wid for wid, _ in members]
            if len(ring) == 2:
                edges.append((vid, ring[1]))
                rotation[vid].append(ring[1])
                rotation[ring[1]].append(vid)
            else:
                for i in range(len(ring)):
                    edges.append((ring[i], ring[(i + 1) % len(ring)]))
                rotation[vid].extend([ring[1], ring[-1]])
                for i in range(1, len(ring)):
                    rotation[ring[i]].extend([ring[(i + 1) % len(ring)], ring[i - 1]])
            for wid, w in reversed(members):
                stack.append((wid, w))
    return SimpleGraph(rotation.keys(), edges, rotation)

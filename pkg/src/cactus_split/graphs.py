"""Simple graphs, blocks, cactus recognition and brute-force split finding."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import NotACactusError, ResourceError, StructureError

Vertex = Hashable
SPLIT_GUARD = 20


class SimpleGraph:
    """Undirected simple graph with an optional rotation system.

    ``rotation[v]`` lists the neighbours of ``v`` in cyclic order (a plane
    embedding). Equality compares vertices and edges only.
    """

    __slots__ = ("_adj", "rotation")

    def __init__(
        self,
        vertices: Iterable[Vertex] = (),
        edges: Iterable[tuple[Vertex, Vertex]] = (),
        rotation: Mapping[Vertex, Sequence[Vertex]] | None = None,
    ):
        self._adj: dict[Vertex, set[Vertex]] = {v: set() for v in vertices}
        for u, v in edges:
            if u == v:
                raise StructureError(f"self-loop at {u!r}")
            self._adj.setdefault(u, set())
            self._adj.setdefault(v, set())
            if v in self._adj[u]:
                raise StructureError(f"duplicate edge {u!r}-{v!r}")
            self._adj[u].add(v)
            self._adj[v].add(u)
        self.rotation: dict[Vertex, list[Vertex]] | None = None
        if rotation is not None:
            rot = {v: list(rotation.get(v, ())) for v in self._adj}
            for v, order in rot.items():
                if len(order) != len(set(order)) or set(order) != self._adj[v]:
                    raise StructureError(f"rotation at {v!r} must list each incident edge exactly once")
            self.rotation = rot

    @property
    def vertices(self) -> list[Vertex]:
        return sorted(self._adj, key=_sort_key)

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return sum(len(s) for s in self._adj.values()) // 2

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        out = []
        for u, nb in self._adj.items():
            for v in nb:
                if _sort_key(u) < _sort_key(v):
                    out.append((u, v))
        out.sort(key=lambda e: (_sort_key(e[0]), _sort_key(e[1])))
        return out

    def neighbors(self, v: Vertex) -> set[Vertex]:
        return self._adj[v]

    def degree(self, v: Vertex) -> int:
        return len(self._adj[v])

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return u in self._adj and v in self._adj[u]

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        return hash((frozenset(self._adj), frozenset(map(frozenset, self.edges()))))

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.m})"

    def induced(self, vertices: Iterable[Vertex]) -> "SimpleGraph":
        keep = set(vertices)
        return SimpleGraph(keep, [(u, v) for u, v in self.edges() if u in keep and v in keep])

    def relabel(self, mapping: Mapping[Vertex, Vertex]) -> "SimpleGraph":
        rot = None
        if self.rotation is not None:
            rot = {mapping[v]: [mapping[w] for w in order] for v, order in self.rotation.items()}
        return SimpleGraph(
            (mapping[v] for v in self._adj), ((mapping[u], mapping[v]) for u, v in self.edges()), rot
        )


def _sort_key(v: Vertex):
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


# ---------------------------------------------------------------------------
# constructors


def path_graph(k: int) -> SimpleGraph:
    return SimpleGraph(range(k), [(i, i + 1) for i in range(k - 1)])


def cycle_graph(k: int, start: int = 0) -> SimpleGraph:
    vs = list(range(start, start + k))
    return SimpleGraph(vs, [(vs[i], vs[(i + 1) % k]) for i in range(k)])


def complete_graph(k: int) -> SimpleGraph:
    return SimpleGraph(range(k), combinations(range(k), 2))


def star_graph(k: int) -> SimpleGraph:
    """Star with ``k`` vertices: centre 0 joined to ``1..k-1``."""
    return SimpleGraph(range(k), [(0, i) for i in range(1, k)])


# ---------------------------------------------------------------------------
# connectivity and blocks


def is_connected(g: SimpleGraph) -> bool:
    if g.n == 0:
        return True
    start = next(iter(g.vertices))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.neighbors(u):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


def biconnected_blocks(g: SimpleGraph) -> list[list[tuple[Vertex, Vertex]]]:
    """Edge sets of the blocks (maximal biconnected subgraphs or bridges).

    Iterative Hopcroft-Tarjan; isolated vertices yield no block.
    """
    disc: dict[Vertex, int] = {}
    low: dict[Vertex, int] = {}
    blocks: list[list[tuple[Vertex, Vertex]]] = []
    clock = 0
    for root in g.vertices:
        if root in disc:
            continue
        disc[root] = low[root] = clock
        clock += 1
        estack: list[tuple[Vertex, Vertex]] = []
        stack = [(root, None, iter(sorted(g.neighbors(root), key=_sort_key)))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w not in disc:
                    estack.append((u, w))
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, u, iter(sorted(g.neighbors(w), key=_sort_key))))
                    advanced = True
                    break
                if disc[w] < disc[u]:
                    estack.append((u, w))
                    low[u] = min(low[u], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent is None:
                continue
            low[parent] = min(low[parent], low[u])
            if low[u] >= disc[parent]:
                block = []
                while True:
                    e = estack.pop()
                    block.append(e)
                    if e == (parent, u):
                        break
                blocks.append(block)
    return blocks


@dataclass(frozen=True)
class Block:
    """A block of a cactus: a bridge or a cycle, vertices in cyclic order."""

    vertices: tuple[Vertex, ...]
    kind: str  # "bridge" or "cycle"
    external: bool = False

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class Cluster:
    """Two or more blocks sharing the cut vertex ``vertex``."""

    vertex: Vertex
    blocks: tuple[int, ...]
    external: bool = False


@dataclass(frozen=True)
class CactusCheck:
    ok: bool
    certificate: tuple[tuple[Vertex, Vertex], ...] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_cactus(g: SimpleGraph) -> CactusCheck:
    """Whether ``g`` is a cactus; the certificate is an offending block's edges.

    Raises :class:`NotACactusError` for disconnected input.
    """
    if not is_connected(g):
        raise NotACactusError("graph is disconnected", None)
    for block in biconnected_blocks(g):
        if len(block) == 1:
            continue
        vs = {x for e in block for x in e}
        if len(vs) != len(block):
            cert = tuple(sorted((tuple(sorted(e, key=_sort_key)) for e in block), key=lambda e: tuple(map(_sort_key, e))))
            return CactusCheck(False, cert, f"block on {len(vs)} vertices has {len(block)} edges")
    return CactusCheck(True)


def _cycle_order(edges: list[tuple[Vertex, Vertex]]) -> tuple[Vertex, ...]:
    adj: dict[Vertex, list[Vertex]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    start = min(adj, key=_sort_key)
    prev, cur = start, min(adj[start], key=_sort_key)
    order = [start]
    while cur != start:
        order.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    return tuple(order)


def blocks_and_clusters(g: SimpleGraph) -> tuple[list[Block], list[Cluster]]:
    """Blocks (cycles in cyclic order, bridges) and clusters of a cactus.

    Blocks are sorted by their vertex tuples; clusters by cut vertex.
    """
    check = is_cactus(g)
    if not check:
        raise NotACactusError(f"not a cactus: {check.reason}", check.certificate)
    raw = []
    for block in biconnected_blocks(g):
        if len(block) == 1:
            u, v = sorted(block[0], key=_sort_key)
            raw.append(((u, v), "bridge"))
        else:
            raw.append((_cycle_order(block), "cycle"))
    raw.sort(key=lambda b: tuple(map(_sort_key, b[0])))
    member: dict[Vertex, list[int]] = {}
    for i, (vs, _) in enumerate(raw):
        for v in vs:
            member.setdefault(v, []).append(i)
    shared = [sum(1 for v in vs if len(member[v]) > 1) for vs, _ in raw]
    blocks = [Block(vs, kind, shared[i] == 1) for i, (vs, kind) in enumerate(raw)]
    clusters = []
    for v in sorted(member, key=_sort_key):
        if len(member[v]) > 1:
            ids = tuple(member[v])
            clusters.append(Cluster(v, ids, any(blocks[i].external for i in ids)))
    return blocks, clusters


def cycle_lengths(g: SimpleGraph) -> list[int]:
    """Sorted cycle lengths of a cactus (bridges excluded)."""
    blocks, _ = blocks_and_clusters(g)
    return sorted(b.size for b in blocks if b.kind == "cycle")


# ---------------------------------------------------------------------------
# splits


def _bitmask_adjacency(g: SimpleGraph) -> tuple[list[Vertex], list[int]]:
    vs = g.vertices
    index = {v: i for i, v in enumerate(vs)}
    adj = [0] * len(vs)
    for u, v in g.edges():
        adj[index[u]] |= 1 << index[v]
        adj[index[v]] |= 1 << index[u]
    return vs, adj


def _is_split_mask(adj: list[int], side: int, full: int) -> bool:
    other = full & ~side
    front_a = 0
    front_b = 0
    crossing = 0
    s = side
    while s:
        i = (s & -s).bit_length() - 1
        s &= s - 1
        nb = adj[i] & other
        if nb:
            front_a |= 1 << i
            front_b |= nb
            crossing += bin(nb).count("1")
    return crossing == bin(front_a).count("1") * bin(front_b).count("1")


def find_splits(g: SimpleGraph, guard: int = SPLIT_GUARD) -> list[tuple[frozenset, frozenset]]:
    """All splits ``(V1, V2)`` with both sides of size >= 2.

    ``V1`` is the side containing the smallest vertex. Exhaustive, so the
    graph size is limited by ``guard``.
    """
    if g.n > guard:
        raise ResourceError(f"find_splits is exhaustive; {g.n} vertices exceeds the guard of {guard}")
    if not is_connected(g):
        raise StructureError("find_splits expects a connected graph")
    vs, adj = _bitmask_adjacency(g)
    n = len(vs)
    if n < 4:
        return []
    full = (1 << n) - 1
    out = []
    # side always contains vertex 0; enumerate the rest
    for rest in range(1 << (n - 1)):
        side = 1 | (rest << 1)
        size = bin(side).count("1")
        if size < 2 or n - size < 2:
            continue
        if _is_split_mask(adj, side, full):
            a = frozenset(vs[i] for i in range(n) if side >> i & 1)
            out.append((a, frozenset(vs) - a))
    return out


def is_clique(g: SimpleGraph) -> bool:
    return g.m == g.n * (g.n - 1) // 2


def star_center(g: SimpleGraph) -> Vertex | None:
    """The centre if ``g`` is a star with at least three vertices, else ``None``."""
    if g.n < 3 or g.m != g.n - 1:
        return None
    for v in g.vertices:
        if g.degree(v) == g.n - 1:
            return v
    return None


def is_degenerate(g: SimpleGraph) -> bool:
    """Cliques and stars: every bipartition into parts of size >= 2 is a split."""
    return is_clique(g) or star_center(g) is not None


# ---------------------------------------------------------------------------
# edge-list text format


def parse_edge_list(text: str) -> SimpleGraph:
    """Parse ``n m`` header, ``u v`` edge lines, ``rot v: w1 w2 ...`` and ``vertex v`` lines.

    Vertices are integers. With ``n`` given and no ``vertex`` lines, the
    vertex set is ``0..n-1``.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise StructureError("empty edge list")
    head = lines[0].split()
    if len(head) != 2:
        raise StructureError("first line must be 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise StructureError(f"bad header: {lines[0]!r}") from exc
    edges = []
    rotation: dict[int, list[int]] = {}
    explicit: list[int] = []
    for ln in lines[1:]:
        try:
            if ln.startswith("rot"):
                left, right = ln[3:].split(":", 1)
                rotation[int(left)] = [int(x) for x in right.split()]
            elif ln.startswith("vertex"):
                explicit.append(int(ln.split()[1]))
            else:
                u, v = ln.split()
                edges.append((int(u), int(v)))
        except ValueError as exc:
            raise StructureError(f"cannot parse line {ln!r}") from exc
    if len(edges) != m:
        raise StructureError(f"header announces {m} edges, found {len(edges)}")
    touched = {x for e in edges for x in e}
    vertices = set(explicit) | touched if explicit else set(range(n)) | touched
    if len(vertices) != n:
        raise StructureError(f"header announces {n} vertices, found {len(vertices)}")
    return SimpleGraph(vertices, edges, rotation if rotation else None)


def format_edge_list(g: SimpleGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    contiguous = set(g.vertices) == set(range(g.n))
    if not contiguous:
        lines.extend(f"vertex {v}" for v in g.vertices)
    lines.extend(f"{u} {v}" for u, v in g.edges())
    if g.rotation is not None:
        for v in g.vertices:
            if g.rotation[v]:
                lines.append(f"rot {v}: " + " ".join(str(w) for w in g.rotation[v]))
    return "\n".join(lines) + "\n"

"""Graph-labeled trees and split decomposition trees of cacti.

A tree is stored as node labels plus a symmetric ``links`` map between
endpoints. An endpoint is ``("L", v)`` for the leaf of graph vertex ``v`` or
``("N", node, marker)`` for a marker vertex of an internal node. Every marker
is linked exactly once; so is every leaf, except in the one-vertex tree.

Marker conventions:

* star: marker 0 is the centre, markers ``1..k-1`` the extremities in cyclic order;
* cycle: markers ``0..k-1`` in cyclic order (``k = 2`` is a single edge);
* clique: every pair of markers adjacent;
* graph: explicit marker edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import InvalidTreeError, NotACactusError, StructureError
from .graphs import (
    SimpleGraph,
    Vertex,
    _sort_key,
    blocks_and_clusters,
    find_splits,
    is_cactus,
    is_clique,
    is_connected,
    star_center,
)

Endpoint = tuple
LABEL_KINDS = ("star", "cycle", "clique", "graph")


@dataclass(frozen=True)
class NodeLabel:
    kind: str
    size: int
    edges: frozenset = field(default=frozenset())

    def __post_init__(self):
        if self.kind not in LABEL_KINDS:
            raise StructureError(f"unknown label kind {self.kind!r}")
        if self.kind == "star" and self.size < 3:
            raise StructureError("a star label needs a centre and at least two extremities")
        if self.kind == "cycle" and self.size < 2:
            raise StructureError("a cycle label needs at least two markers")
        if self.kind == "graph":
            object.__setattr__(self, "edges", frozenset(frozenset(e) for e in self.edges))

    @classmethod
    def star(cls, k: int) -> "NodeLabel":
        return cls("star", k)

    @classmethod
    def cycle(cls, k: int) -> "NodeLabel":
        return cls("cycle", k)

    @classmethod
    def clique(cls, k: int) -> "NodeLabel":
        return cls("clique", k)

    @classmethod
    def graph(cls, k: int, edges: Iterable[tuple[int, int]]) -> "NodeLabel":
        return cls("graph", k, frozenset(frozenset(e) for e in edges))

    def adjacent(self, i: int, j: int) -> bool:
        if i == j:
            return False
        if self.kind == "star":
            return i == 0 or j == 0
        if self.kind == "cycle":
            return (i - j) % self.size in (1, self.size - 1)
        if self.kind == "clique":
            return True
        return frozenset((i, j)) in self.edges

    def neighbors(self, i: int) -> list[int]:
        if self.kind == "star":
            return list(range(1, self.size)) if i == 0 else [0]
        if self.kind == "cycle":
            if self.size == 2:
                return [1 - i]
            return sorted({(i - 1) % self.size, (i + 1) % self.size})
        return [j for j in range(self.size) if self.adjacent(i, j)]

    @property
    def is_polygon(self) -> bool:
        """Cycle labels, with a triangle also admitted as a 3-clique."""
        return self.kind == "cycle" or (self.kind == "clique" and self.size == 3)

    @property
    def is_cliquelike(self) -> bool:
        return self.kind == "clique" or (self.kind == "cycle" and self.size == 3)

    def text(self) -> str:
        if self.kind == "graph":
            es = sorted(tuple(sorted(e)) for e in self.edges)
            return f"graph {self.size} " + " ".join(f"{a}-{b}" for a, b in es)
        return f"{self.kind} {self.size}"


def leaf(v: Vertex) -> Endpoint:
    return ("L", v)


def marker(node: int, m: int) -> Endpoint:
    return ("N", node, m)


class GraphLabeledTree:
    """Mutable builder / immutable-by-convention graph-labeled tree."""

    def __init__(self, leaves: Iterable[Vertex] = (), labels: Mapping[int, NodeLabel] | None = None):
        self.leaves: set[Vertex] = set(leaves)
        self.labels: dict[int, NodeLabel] = dict(labels or {})
        self.links: dict[Endpoint, Endpoint] = {}

    # construction

    def add_node(self, label: NodeLabel) -> int:
        nid = max(self.labels, default=-1) + 1
        self.labels[nid] = label
        return nid

    def link(self, a: Endpoint, b: Endpoint) -> None:
        for e in (a, b):
            self._check_endpoint(e)
            if e in self.links:
                raise StructureError(f"endpoint {e} is already linked")
        if a == b:
            raise StructureError("cannot link an endpoint to itself")
        self.links[a] = b
        self.links[b] = a

    def unlink(self, a: Endpoint) -> Endpoint:
        b = self.links.pop(a)
        del self.links[b]
        return b

    def _check_endpoint(self, e: Endpoint) -> None:
        if e[0] == "L":
            if e[1] not in self.leaves:
                raise StructureError(f"unknown leaf {e[1]!r}")
        elif e[0] == "N":
            if e[1] not in self.labels or not 0 <= e[2] < self.labels[e[1]].size:
                raise StructureError(f"unknown marker {e}")
        else:
            raise StructureError(f"bad endpoint {e!r}")

    def copy(self) -> "GraphLabeledTree":
        t = GraphLabeledTree(self.leaves, self.labels)
        t.links = dict(self.links)
        return t

    # queries

    def neighbor(self, e: Endpoint) -> Endpoint:
        try:
            return self.links[e]
        except KeyError:
            raise StructureError(f"endpoint {e} is not linked") from None

    def markers(self, node: int) -> list[Endpoint]:
        return [marker(node, i) for i in range(self.labels[node].size)]

    def tree_edges(self) -> list[tuple[Endpoint, Endpoint]]:
        out = []
        for a, b in self.links.items():
            if repr(a) < repr(b):
                out.append((a, b))
        return sorted(out, key=repr)

    def node_neighbors(self, node: int) -> list[Endpoint]:
        return [self.links[marker(node, i)] for i in range(self.labels[node].size)]

    def degree(self, node: int) -> int:
        return self.labels[node].size

    def check_structure(self) -> None:
        """Raise :class:`StructureError` unless this is a well-formed tree."""
        for a, b in self.links.items():
            self._check_endpoint(a)
            if self.links.get(b) != a:
                raise StructureError(f"links are not symmetric at {a}")
        for node, lab in self.labels.items():
            for i in range(lab.size):
                if marker(node, i) not in self.links:
                    raise StructureError(f"marker {i} of node {node} is not linked (rho must be a bijection)")
        n_items = len(self.leaves) + len(self.labels)
        if n_items == 0:
            raise StructureError("empty tree")
        if n_items == 1:
            if self.labels:
                raise StructureError("a lone internal node is not a tree")
            return
        for v in self.leaves:
            if leaf(v) not in self.links:
                raise StructureError(f"leaf {v!r} is not attached")
        n_edges = len(self.links) // 2
        if n_edges != n_items - 1:
            raise StructureError("the underlying graph is not a tree (edge count)")
        # connectivity
        start = ("L", next(iter(self.leaves))) if self.leaves else ("N", next(iter(self.labels)))
        seen = {start}
        stack = [start]
        while stack:
            item = stack.pop()
            ends = [leaf(item[1])] if item[0] == "L" else self.markers(item[1])
            for e in ends:
                o = self.links[e]
                nxt = ("L", o[1]) if o[0] == "L" else ("N", o[1])
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if len(seen) != n_items:
            raise StructureError("the underlying graph is not connected")

    def __repr__(self) -> str:
        return f"GraphLabeledTree(leaves={len(self.leaves)}, nodes={len(self.labels)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphLabeledTree):
            return NotImplemented
        return canonical_key(self) == canonical_key(other)

    __hash__ = None  # mutable


# ---------------------------------------------------------------------------
# accessibility


def accessibility(t: GraphLabeledTree) -> SimpleGraph:
    """The graph on the leaves joined by alternated paths."""
    t.check_structure()
    edges = set()
    for x in t.leaves:
        if leaf(x) not in t.links:
            continue
        stack = [t.links[leaf(x)]]
        while stack:
            e = stack.pop()
            if e[0] == "L":
                y = e[1]
                edges.add(frozenset((x, y)))
                continue
            _, node, m = e
            lab = t.labels[node]
            for m2 in lab.neighbors(m):
                stack.append(t.links[marker(node, m2)])
    return SimpleGraph(t.leaves, [tuple(sorted(e, key=_sort_key)) for e in edges])


# ---------------------------------------------------------------------------
# canonical form


def _side_leaves(t: GraphLabeledTree) -> dict[Endpoint, frozenset]:
    """For every endpoint ``e``, the leaves reachable through its link (away from ``e``)."""
    memo: dict[Endpoint, frozenset] = {}

    def beyond(e: Endpoint) -> frozenset:
        # iterative post-order over directed tree edges
        stack = [(e, False)]
        while stack:
            cur, done = stack.pop()
            if cur in memo:
                continue
            other = t.links[cur]
            if other[0] == "L":
                memo[cur] = frozenset((other[1],))
                continue
            node, m = other[1], other[2]
            outs = [marker(node, i) for i in range(t.labels[node].size) if i != m]
            if done:
                acc = frozenset()
                for o in outs:
                    acc |= memo[o]
                memo[cur] = acc
            else:
                stack.append((cur, True))
                for o in outs:
                    if o not in memo:
                        stack.append((o, False))
        return memo[e]

    for e in list(t.links):
        beyond(e)
    return memo


def _min_rotation(seq: list) -> tuple:
    if not seq:
        return ()
    return min(tuple(seq[i:] + seq[:i]) for i in range(len(seq)))


def canonical_key(t: GraphLabeledTree, ordered: bool = True) -> frozenset:
    """Identity of a tree independent of node ids and marker numbering.

    Each marker is named by the set of leaves beyond it. Cyclic orders are
    normalised under rotation (and reflection too when ``ordered`` is false).
    """
    side = _side_leaves(t)

    def name(e: Endpoint) -> tuple:
        return tuple(sorted(side[e], key=_sort_key))

    items = set()
    for node, lab in t.labels.items():
        names = [name(marker(node, i)) for i in range(lab.size)]
        if lab.kind == "star":
            ext = names[1:]
            if ordered:
                key = ("star", names[0], _min_rotation(ext))
            else:
                key = ("star", names[0], tuple(sorted(ext)))
        elif lab.size == 3 and lab.kind in ("cycle", "clique") and not ordered:
            key = ("cycle", tuple(sorted(names)))
        elif lab.kind == "cycle":
            if ordered:
                key = ("cycle", _min_rotation(names))
            else:
                key = ("cycle", min(_min_rotation(names), _min_rotation(names[::-1])))
        elif lab.kind == "clique":
            key = ("clique", tuple(sorted(names)))
        else:
            es = sorted(tuple(sorted((names[a], names[b]))) for a, b in (tuple(e) for e in lab.edges))
            key = ("graph", tuple(sorted(names)), tuple(es))
        items.add(key)
    for v in t.leaves:
        o = t.links.get(leaf(v))
        if o is not None and o[0] == "L":
            items.add(("edge", tuple(sorted((v, o[1]), key=_sort_key))))
    if not t.links:
        items.add(("vertex", tuple(sorted(t.leaves, key=_sort_key))))
    return frozenset(items)


def trees_equal(a: GraphLabeledTree, b: GraphLabeledTree, ordered: bool = True) -> bool:
    return canonical_key(a, ordered) == canonical_key(b, ordered)


# ---------------------------------------------------------------------------
# cactus -> reduced tree


def _rotation_sorted_blocks(g: SimpleGraph, v: Vertex, block_ids: list[int], blocks) -> list[int]:
    """Order the blocks at ``v``: by the rotation at ``v`` when present, else by min vertex."""

    def min_other(b: int):
        return min((_sort_key(x) for x in blocks[b].vertices if x != v))

    base = sorted(block_ids, key=min_other)
    if g.rotation is None:
        return base
    rot = g.rotation[v]
    pos = {w: i for i, w in enumerate(rot)}

    def first_pos(b: int) -> int:
        vs = blocks[b].vertices
        return min(pos[w] for w in vs if w != v and w in pos)

    # cyclic order by first appearance, rotated to start at base[0]
    cyc = sorted(block_ids, key=first_pos)
    i = cyc.index(base[0])
    return cyc[i:] + cyc[:i]


def _oriented_cycle(g: SimpleGraph, vs: tuple) -> tuple:
    """Cycle vertex order; with a rotation, follow the face on the left of the first edge."""
    if g.rotation is None or len(vs) < 3:
        return vs
    # keep the orientation where, at the first vertex, the successor follows the predecessor in rotation
    a, nxt, prv = vs[0], vs[1], vs[-1]
    rot = g.rotation[a]
    k = len(rot)
    i, j = rot.index(prv), rot.index(nxt)
    # successor should be reached from predecessor by walking forward the least
    if (j - i) % k <= (i - j) % k:
        return vs
    return (vs[0],) + tuple(reversed(vs[1:]))


def cactus_to_split_tree(g: SimpleGraph, form: str = "reduced") -> GraphLabeledTree:
    """Split decomposition tree of a cactus (reduced, or simplified form).

    Cycles of length 3 or at least 5 become cycle nodes, a 4-cycle becomes a
    pair of 2-extremity stars joined by their centres, each cut vertex becomes a
    star whose centre holds the vertex's leaf (one extremity per block), and
    bridges become direct links.
    """
    if form not in ("reduced", "simplified"):
        raise ValueError("form must be 'reduced' or 'simplified'")
    if g.n == 0:
        raise NotACactusError("empty graph")
    check = is_cactus(g)
    if not check:
        raise NotACactusError(f"not a cactus: {check.reason}", check.certificate)
    t = GraphLabeledTree(g.vertices)
    if g.n == 1:
        return t
    blocks, clusters = blocks_and_clusters(g)
    port: dict[tuple[Vertex, int], Endpoint] = {}  # (vertex, block) -> endpoint standing for vertex in block
    for cl in clusters:
        order = _rotation_sorted_blocks(g, cl.vertex, list(cl.blocks), blocks)
        s = t.add_node(NodeLabel.star(len(order) + 1))
        t.link(marker(s, 0), leaf(cl.vertex))
        for i, b in enumerate(order, start=1):
            port[(cl.vertex, b)] = marker(s, i)

    def at(v: Vertex, b: int) -> Endpoint:
        return port.get((v, b), leaf(v))

    for b, blk in enumerate(blocks):
        if blk.kind == "bridge":
            u, v = blk.vertices
            t.link(at(u, b), at(v, b))
        elif blk.size == 4:
            a, bb, c, d = _oriented_cycle(g, blk.vertices)
            s1 = t.add_node(NodeLabel.star(3))
            s2 = t.add_node(NodeLabel.star(3))
            t.link(marker(s1, 0), marker(s2, 0))
            t.link(marker(s1, 1), at(a, b))
            t.link(marker(s1, 2), at(c, b))
            t.link(marker(s2, 1), at(bb, b))
            t.link(marker(s2, 2), at(d, b))
        else:
            vs = _oriented_cycle(g, blk.vertices)
            node = t.add_node(NodeLabel.cycle(len(vs)))
            for i, v in enumerate(vs):
                t.link(marker(node, i), at(v, b))
    if form == "simplified":
        t = convert_form(t, "simplified")
    return t


# ---------------------------------------------------------------------------
# form conversion


def _star_pairs(t: GraphLabeledTree) -> list[tuple[int, int]]:
    pairs = []
    for node, lab in sorted(t.labels.items()):
        if lab.kind != "star":
            continue
        o = t.links[marker(node, 0)]
        if o[0] == "N" and o[2] == 0 and t.labels[o[1]].kind == "star" and node < o[1]:
            pairs.append((node, o[1]))
    return pairs


def _relink_all(t: GraphLabeledTree, old_nodes: list[int]) -> dict:
    """Detach nodes, returning their marker -> outside endpoint map."""
    outside = {}
    for node in old_nodes:
        for i in range(t.labels[node].size):
            e = marker(node, i)
            if e in t.links:
                outside[e] = t.unlink(e)
    return outside


def _compact(t: GraphLabeledTree) -> GraphLabeledTree:
    """Renumber internal nodes 0..k-1 in increasing old-id order."""
    ids = sorted(t.labels)
    ren = {old: new for new, old in enumerate(ids)}
    out = GraphLabeledTree(t.leaves, {ren[o]: t.labels[o] for o in ids})

    def mp(e: Endpoint) -> Endpoint:
        return e if e[0] == "L" else marker(ren[e[1]], e[2])

    for a, b in t.links.items():
        out.links[mp(a)] = mp(b)
    return out


def to_simplified(t: GraphLabeledTree) -> GraphLabeledTree:
    """Merge centre-joined star pairs into 4-cycles; put a 2-cycle on extremity-extremity links."""
    t = t.copy()
    for s1, s2 in _star_pairs(t):
        if t.labels[s1].size != 3 or t.labels[s2].size != 3:
            raise InvalidTreeError([f"stars {s1} and {s2} are joined by centres but do not both have two extremities"])
        out = _relink_all(t, [s1, s2])
        del t.labels[s1], t.labels[s2]
        c = t.add_node(NodeLabel.cycle(4))
        for i, e in enumerate([marker(s1, 1), marker(s2, 1), marker(s1, 2), marker(s2, 2)]):
            t.link(marker(c, i), out[e])
    ext_links = []
    for a, b in t.tree_edges():
        if a[0] == "N" and b[0] == "N":
            la, lb = t.labels[a[1]], t.labels[b[1]]
            if la.kind == "star" and lb.kind == "star" and a[2] != 0 and b[2] != 0:
                ext_links.append((a, b))
    for a, b in ext_links:
        t.unlink(a)
        c = t.add_node(NodeLabel.cycle(2))
        t.link(marker(c, 0), a)
        t.link(marker(c, 1), b)
    return _compact(t)


def to_reduced(t: GraphLabeledTree) -> GraphLabeledTree:
    """Inverse of :func:`to_simplified`."""
    t = t.copy()
    for node, lab in sorted(t.labels.items()):
        if lab.kind == "cycle" and lab.size == 2:
            a = t.unlink(marker(node, 0))
            b = t.unlink(marker(node, 1))
            del t.labels[node]
            t.link(a, b)
    for node, lab in sorted(t.labels.items()):
        if lab.kind == "cycle" and lab.size == 4:
            out = _relink_all(t, [node])
            del t.labels[node]
            s1 = t.add_node(NodeLabel.star(3))
            s2 = t.add_node(NodeLabel.star(3))
            t.link(marker(s1, 0), marker(s2, 0))
            t.link(marker(s1, 1), out[marker(node, 0)])
            t.link(marker(s2, 1), out[marker(node, 1)])
            t.link(marker(s1, 2), out[marker(node, 2)])
            t.link(marker(s2, 2), out[marker(node, 3)])
    return _compact(t)


def detect_form(t: GraphLabeledTree) -> str:
    """``reduced`` when no 4-cycle or 2-cycle label is present, else ``simplified``."""
    for lab in t.labels.values():
        if lab.kind == "cycle" and lab.size in (2, 4):
            return "simplified"
    return "reduced"


def convert_form(t: GraphLabeledTree, target: str) -> GraphLabeledTree:
    if target == "simplified":
        diags = validate_reduced_cactus_tree(t) if detect_form(t) == "reduced" else []
        if diags:
            raise InvalidTreeError(diags)
        return t.copy() if detect_form(t) == "simplified" else to_simplified(t)
    if target == "reduced":
        if detect_form(t) == "reduced":
            return t.copy()
        diags = validate_simplified_cactus_tree(t)
        if diags:
            raise InvalidTreeError(diags)
        return to_reduced(t)
    raise ValueError("target must be 'reduced' or 'simplified'")


# ---------------------------------------------------------------------------
# validators


def _describe(t: GraphLabeledTree, e: Endpoint) -> str:
    if e[0] == "L":
        return f"leaf {e[1]}"
    lab = t.labels[e[1]]
    if lab.kind == "star":
        return f"{'centre' if e[2] == 0 else 'extremity'} of star {e[1]}"
    return f"{lab.kind}-{lab.size} node {e[1]}"


def _structure_diags(t: GraphLabeledTree) -> list[str]:
    try:
        t.check_structure()
    except StructureError as exc:
        return [f"structure: {exc}"]
    return []


def _centre_paired(t: GraphLabeledTree, node: int) -> bool:
    other = t.links.get(marker(node, 0))
    return other is not None and other[0] == "N" and t.labels[other[1]].kind == "star" and other[2] == 0


def validate_reduced_cactus_tree(t: GraphLabeledTree) -> list[str]:
    """Diagnostics (empty when valid) for the reduced cactus tree conditions.

    Codes: R1 labels are stars or polygons of size 3 or >= 5; R2 star centres
    attach to a leaf or to the centre of another 2-extremity star; R3 star
    extremities attach to a polygon, a leaf or another extremity; R4 no two
    polygons are adjacent; R5 an extremity of a centre-joined star pair (a
    4-cycle block) attaches only to a leaf or to an extremity of a star whose
    centre holds a leaf; C1 internal nodes have degree >= 3; C2 no
    clique-clique edge; C3 no centre-extremity edge.

    R5 is not implied by R1-R4: a 4-cycle pair whose extremity meets a
    polygon satisfies R1-R4 yet its accessibility graph is not a cactus.
    """
    diags = _structure_diags(t)
    if diags:
        return diags
    for node, lab in sorted(t.labels.items()):
        if lab.kind == "star":
            pass
        elif lab.kind == "cycle" and (lab.size == 3 or lab.size >= 5):
            pass
        elif lab.kind == "clique" and lab.size == 3:
            pass
        else:
            diags.append(f"R1: node {node} is labelled {lab.text()}; only stars and polygons of size 3 or >= 5 are allowed")
        if lab.size < 3:
            diags.append(f"C1: node {node} has degree {lab.size} < 3")
    for a, b in t.tree_edges():
        for x, y in ((a, b), (b, a)):
            if x[0] != "N":
                continue
            lx = t.labels[x[1]]
            ly = t.labels[y[1]] if y[0] == "N" else None
            if lx.kind == "star" and x[2] == 0:
                if y[0] == "N":
                    if not (ly.kind == "star" and y[2] == 0):
                        diags.append(f"R2: centre of star {x[1]} is attached to {_describe(t, y)}")
                    elif lx.size != 3 or ly.size != 3:
                        diags.append(
                            f"R2: stars {x[1]} and {y[1]} are joined by their centres but do not both have two extremities"
                        )
            elif lx.kind == "star":
                if y[0] == "N" and not (ly.is_polygon or ly.kind == "star"):
                    diags.append(f"R3: extremity of star {x[1]} is attached to {_describe(t, y)}")
                if y[0] == "N" and ly.kind == "star" and y[2] == 0:
                    diags.append(f"C3: extremity of star {x[1]} is attached to the centre of star {y[1]}")
                if _centre_paired(t, x[1]) and y[0] == "N":
                    if not (ly.kind == "star" and y[2] != 0 and t.links[marker(y[1], 0)][0] == "L"):
                        diags.append(
                            f"R5: extremity of the 4-cycle star {x[1]} is attached to {_describe(t, y)}"
                        )
        if a[0] == "N" and b[0] == "N":
            la, lb = t.labels[a[1]], t.labels[b[1]]
            if la.is_polygon and lb.is_polygon:
                diags.append(f"R4: polygons {a[1]} and {b[1]} are adjacent")
            if la.is_cliquelike and lb.is_cliquelike:
                diags.append(f"C2: clique-like nodes {a[1]} and {b[1]} are adjacent")
    return _dedupe(diags)


def validate_simplified_cactus_tree(t: GraphLabeledTree) -> list[str]:
    """Diagnostics (empty when valid) for the simplified cactus tree conditions.

    Codes: S-a internal nodes are stars or polygons (polygons of any size >= 3,
    plus 2-cycles standing for a bridge between two cut vertices); S-b star
    centres attach to leaves; S-c star extremities attach to leaves or
    polygons; S-d no two polygons are adjacent; S-e a 2-cycle joins two star
    extremities; S-f stars have at least two extremities.
    """
    diags = _structure_diags(t)
    if diags:
        return diags
    for node, lab in sorted(t.labels.items()):
        if lab.kind == "star":
            continue
        if lab.is_polygon:
            if lab.kind == "cycle" and lab.size == 2:
                for y in t.node_neighbors(node):
                    if not (y[0] == "N" and t.labels[y[1]].kind == "star" and y[2] != 0):
                        diags.append(f"S-e: 2-cycle {node} is attached to {_describe(t, y)}")
            continue
        diags.append(f"S-a: node {node} is labelled {lab.text()}; only stars and polygons are allowed")
    for a, b in t.tree_edges():
        for x, y in ((a, b), (b, a)):
            if x[0] != "N" or t.labels[x[1]].kind != "star":
                continue
            if x[2] == 0 and y[0] != "L":
                diags.append(f"S-b: centre of star {x[1]} is attached to {_describe(t, y)}")
            if x[2] != 0 and y[0] == "N" and not t.labels[y[1]].is_polygon:
                diags.append(f"S-c: extremity of star {x[1]} is attached to {_describe(t, y)}")
        if a[0] == "N" and b[0] == "N":
            la, lb = t.labels[a[1]], t.labels[b[1]]
            if la.is_polygon and lb.is_polygon:
                diags.append(f"S-d: polygons {a[1]} and {b[1]} are adjacent")
    return _dedupe(diags)


def _dedupe(items: list[str]) -> list[str]:
    seen = set()
    out = []
    for d in items:
        if d not in seen:
            seen.add(d)
            out.append(d)
    return out


def validate_cactus_tree(t: GraphLabeledTree, form: str | None = None) -> list[str]:
    form = form or detect_form(t)
    if form == "reduced":
        return validate_reduced_cactus_tree(t)
    return validate_simplified_cactus_tree(t)


def split_tree_to_cactus(t: GraphLabeledTree, form: str | None = None) -> SimpleGraph:
    """Rebuild the cactus of a valid tree (either form)."""
    diags = validate_cactus_tree(t, form)
    if diags:
        raise InvalidTreeError(diags)
    return accessibility(t)


# ---------------------------------------------------------------------------
# brute-force split decomposition (small graphs, independent of cactus structure)


def brute_force_reduced_tree(g: SimpleGraph, guard: int = 10) -> GraphLabeledTree:
    """Reduced split decomposition tree by exhaustive split search.

    Repeatedly splits any label that has a split and is not degenerate, then
    merges adjacent cliques and centre-to-extremity star pairs. Works for any
    connected graph; exponential, hence the size guard.
    """
    if g.n > guard:
        from .errors import ResourceError

        raise ResourceError(f"brute-force decomposition limited to {guard} vertices")
    if not is_connected(g):
        raise StructureError("graph must be connected")
    t = GraphLabeledTree(g.vertices)
    if g.n == 1:
        return t
    if g.n == 2:
        u, v = g.vertices
        t.link(leaf(u), leaf(v))
        return t
    # label graphs carried explicitly: node -> (graph on marker ids)
    graphs: dict[int, SimpleGraph] = {}
    order = g.vertices
    idx = {v: i for i, v in enumerate(order)}
    root_edges = [(idx[u], idx[v]) for u, v in g.edges()]
    root = t.add_node(NodeLabel.graph(g.n, root_edges))
    graphs[root] = SimpleGraph(range(g.n), root_edges)
    for v in order:
        t.link(marker(root, idx[v]), leaf(v))
    work = [root]
    while work:
        node = work.pop()
        h = graphs[node]
        if h.n < 4 or is_clique(h) or star_center(h) is not None:
            continue
        splits = find_splits(h)
        if not splits:
            continue
        a_side, b_side = splits[0]
        outside = _relink_all(t, [node])
        del t.labels[node], graphs[node]
        parts = []
        for side, other in ((a_side, b_side), (b_side, a_side)):
            front = [x for x in side if any(h.has_edge(x, y) for y in other)]
            ms = sorted(side)
            new_id = t.add_node(NodeLabel.graph(len(ms) + 1, []))
            local = {m: i for i, m in enumerate(ms)}
            ext = len(ms)
            es = [(local[u], local[v]) for u, v in h.edges() if u in side and v in side]
            es += [(local[x], ext) for x in front]
            graphs[new_id] = SimpleGraph(range(len(ms) + 1), es)
            t.labels[new_id] = NodeLabel.graph(len(ms) + 1, es)
            for m in ms:
                t.link(marker(new_id, local[m]), outside[marker(node, m)])
            parts.append((new_id, ext))
        t.link(marker(parts[0][0], parts[0][1]), marker(parts[1][0], parts[1][1]))
        work.extend(p for p, _ in parts)
    # classify degenerate labels
    for node in list(t.labels):
        h = graphs[node]
        if is_clique(h):
            t.labels[node] = NodeLabel.clique(h.n)
            continue
        c = star_center(h)
        if c is not None:
            _restar(t, graphs, node, c)
    _merge_degenerate(t, graphs)
    # triangles are cycles of length 3 in cactus trees
    for node, lab in list(t.labels.items()):
        h = graphs[node]
        if lab.kind == "graph" and h.m == h.n and all(h.degree(v) == 2 for v in h.vertices) and is_connected(h):
            _recycle(t, graphs, node)
    return _compact(t)


def _renumber_node(t: GraphLabeledTree, graphs: dict, node: int, perm: list[int], label: NodeLabel) -> None:
    """Give marker ``perm[i]`` of ``node`` the new index ``i``."""
    old = {i: t.unlink(marker(node, i)) for i in range(t.labels[node].size)}
    h = graphs[node]
    inv = {o: n for n, o in enumerate(perm)}
    graphs[node] = SimpleGraph(range(h.n), [(inv[u], inv[v]) for u, v in h.edges()])
    t.labels[node] = label
    for n_i, o_i in enumerate(perm):
        t.link(marker(node, n_i), old[o_i])


def _restar(t, graphs, node, centre) -> None:
    h = graphs[node]
    perm = [centre] + [v for v in range(h.n) if v != centre]
    _renumber_node(t, graphs, node, perm, NodeLabel.star(h.n))


def _recycle(t, graphs, node) -> None:
    h = graphs[node]
    cyc = [0]
    prev = None
    cur = 0
    while len(cyc) < h.n:
        nxt = min(w for w in h.neighbors(cur) if w != prev and w not in cyc)
        cyc.append(nxt)
        prev, cur = cur, nxt
    _renumber_node(t, graphs, node, cyc, NodeLabel.cycle(h.n))


def _merge_degenerate(t: GraphLabeledTree, graphs: dict) -> None:
    changed = True
    while changed:
        changed = False
        for a, b in t.tree_edges():
            if a[0] != "N" or b[0] != "N":
                continue
            la, lb = t.labels[a[1]], t.labels[b[1]]
            clique_pair = la.kind == "clique" and lb.kind == "clique"
            star_pair = False
            if la.kind == "star" and lb.kind == "star":
                star_pair = (a[2] == 0) != (b[2] == 0)
            if clique_pair or star_pair:
                _merge(t, graphs, a, b)
                changed = True
                break


def _merge(t: GraphLabeledTree, graphs: dict, a: Endpoint, b: Endpoint) -> None:
    """Contract the tree edge a-b, composing the two labels."""
    na, nb = a[1], b[1]
    la, lb = t.labels[na], t.labels[nb]
    t.unlink(a)
    out_a = {i: t.unlink(marker(na, i)) for i in range(la.size) if i != a[2]}
    out_b = {i: t.unlink(marker(nb, i)) for i in range(lb.size) if i != b[2]}
    ha, hb = graphs.pop(na), graphs.pop(nb)
    del t.labels[na], t.labels[nb]
    ia = {i: k for k, i in enumerate(sorted(out_a))}
    off = len(ia)
    ib = {i: off + k for k, i in enumerate(sorted(out_b))}
    es = [(ia[u], ia[v]) for u, v in ha.edges() if u in ia and v in ia]
    es += [(ib[u], ib[v]) for u, v in hb.edges() if u in ib and v in ib]
    na_front = [ia[u] for u in ia if ha.has_edge(u, a[2])]
    nb_front = [ib[v] for v in ib if hb.has_edge(v, b[2])]
    es += [(x, y) for x in na_front for y in nb_front]
    size = off + len(ib)
    h = SimpleGraph(range(size), es)
    new = t.add_node(NodeLabel.graph(size, es))
    graphs[new] = h
    for i, k in ia.items():
        t.link(marker(new, k), out_a[i])
    for i, k in ib.items():
        t.link(marker(new, k), out_b[i])
    if is_clique(h):
        t.labels[new] = NodeLabel.clique(size)
    else:
        c = star_center(h)
        if c is not None:
            _restar(t, graphs, new, c)


def blocks_summary(g: SimpleGraph) -> dict:
    blocks, clusters = blocks_and_clusters(g)
    return {
        "blocks": [{"vertices": list(b.vertices), "kind": b.kind, "external": b.external} for b in blocks],
        "clusters": [{"vertex": c.vertex, "blocks": list(c.blocks), "external": c.external} for c in clusters],
    }


# ---------------------------------------------------------------------------
# text format


def format_tree(t: GraphLabeledTree) -> str:
    """Line-based text: ``leaves``, ``node`` and ``link`` records."""
    lines = ["leaves " + " ".join(str(v) for v in sorted(t.leaves, key=_sort_key))]
    for node in sorted(t.labels):
        lines.append(f"node {node} {t.labels[node].text()}")
    for a, b in t.tree_edges():
        lines.append(f"link {_ep_text(a)} {_ep_text(b)}")
    return "\n".join(lines) + "\n"


def _ep_text(e: Endpoint) -> str:
    return f"L{e[1]}" if e[0] == "L" else f"N{e[1]}.{e[2]}"


def _ep_parse(s: str) -> Endpoint:
    try:
        if s.startswith("L"):
            return leaf(int(s[1:]))
        if s.startswith("N"):
            node, m = s[1:].split(".")
            return marker(int(node), int(m))
    except ValueError:
        pass
    raise StructureError(f"bad endpoint {s!r}")


def parse_tree(text: str) -> GraphLabeledTree:
    t = GraphLabeledTree()
    for raw in text.splitlines():
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        parts = ln.split()
        try:
            if parts[0] == "leaves":
                t.leaves.update(int(x) for x in parts[1:])
            elif parts[0] == "node":
                node, kind, size = int(parts[1]), parts[2], int(parts[3])
                if node in t.labels:
                    raise StructureError(f"duplicate node {node}")
                if kind == "graph":
                    es = [tuple(int(x) for x in p.split("-")) for p in parts[4:]]
                    t.labels[node] = NodeLabel.graph(size, es)
                else:
                    t.labels[node] = NodeLabel(kind, size)
            elif parts[0] == "link":
                t.link(_ep_parse(parts[1]), _ep_parse(parts[2]))
            else:
                raise StructureError(f"unknown record {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, StructureError):
                raise
            raise StructureError(f"cannot parse line {ln!r}") from exc
    t.check_structure()
    return t


def example_tree() -> GraphLabeledTree:
    """A small tree with a prime 5-cycle node and a triangle node.

    The triangle holds leaves 5 and 4 and hangs off one cycle marker; the
    other cycle markers hold leaves 3, 1, 2, 6.
    """
    t = GraphLabeledTree([1, 2, 3, 4, 5, 6])
    c = t.add_node(NodeLabel.cycle(5))
    k = t.add_node(NodeLabel.clique(3))
    for i, v in enumerate([3, 1, None, 2, 6]):
        if v is not None:
            t.link(marker(c, i), leaf(v))
    t.link(marker(c, 2), marker(k, 0))
    t.link(marker(k, 1), leaf(5))
    t.link(marker(k, 2), leaf(4))
    return t


simplify_tree = to_simplified
reduce_tree = to_reduced

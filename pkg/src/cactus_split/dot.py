"""Graphviz DOT export for graphs and graph-labeled trees."""

from __future__ import annotations

from .graphs import SimpleGraph
from .splittree import GraphLabeledTree


def _quote(v) -> str:
    return '"' + str(v).replace('"', r"\"") + '"'


def _comments(meta: dict | None) -> list[str]:
    return [f"// {k}: {v}" for k, v in (meta or {}).items()]


def graph_to_dot(g: SimpleGraph, meta: dict | None = None, root=None) -> str:
    """Undirected DOT graph. A plane rotation is kept as a per-vertex attribute."""
    lines = _comments(meta) + ["graph cactus {", "  node [shape=circle, width=0.2, label=\"\"];"]
    for v in g.vertices:
        attrs = [f"xlabel={_quote(v)}"]
        if g.rotation is not None:
            attrs.append("rotation=" + _quote(" ".join(str(w) for w in g.rotation[v])))
        if v == root:
            attrs.append("style=filled, fillcolor=black")
        lines.append(f"  {_quote(v)} [{', '.join(attrs)}];")
    for u, v in g.edges():
        lines.append(f"  {_quote(u)} -- {_quote(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_to_dot(t: GraphLabeledTree, meta: dict | None = None) -> str:
    """Each internal node is a cluster holding its marker vertices and label edges.

    Tree edges join markers (or leaves) across clusters; star centres are drawn filled.
    """

    def name(e) -> str:
        if e[0] == "L":
            return _quote(f"leaf {e[1]}")
        return _quote(f"n{e[1]}.{e[2]}")

    lines = _comments(meta) + ["graph glt {", "  compound=true;"]
    for v in sorted(t.leaves, key=str):
        lines.append(f"  {name(('L', v))} [shape=box, label={_quote(v)}];")
    for nid in sorted(t.labels):
        lab = t.labels[nid]
        lines.append(f"  subgraph cluster_{nid} {{")
        lines.append(f"    label={_quote(f'{nid}: {lab.kind} {lab.size}')};")
        for m in range(lab.size):
            fill = ", style=filled, fillcolor=black" if lab.kind == "star" and m == 0 else ""
            lines.append(f"    {name(('N', nid, m))} [shape=point, width=0.12{fill}];")
        for i in range(lab.size):
            for j in range(i + 1, lab.size):
                if lab.adjacent(i, j):
                    lines.append(f"    {name(('N', nid, i))} -- {name(('N', nid, j))};")
        lines.append("  }")
    for a, b in t.tree_edges():
        lines.append(f"  {name(a)} -- {name(b)} [style=bold, color=gray40];")
    lines.append("}")
    return "\n".join(lines) + "\n"

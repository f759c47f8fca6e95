"""Directed, optionally colored graphs and the structural utilities built on them.

Nodes are dense 0-based indices. Edges are ordered pairs (u, v) with u != v;
self-loops are not allowed. Colors, when present, are one small non-negative
integer per node. Graphs are immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "ParseError",
    "DirectedGraph",
    "NodeMapping",
    "from_edge_list",
    "complement",
    "induced_subgraph",
    "relabel",
    "erdos_renyi",
    "is_mapping_isomorphism",
    "exists_isomorphism",
    "parse_graph_text",
    "read_graph_file",
    "format_graph",
]


class ParseError(ValueError):
    """Malformed input file, with source name and 1-based line number."""

    def __init__(self, source: str, line: int, message: str):
        self.source = source
        self.line = line
        self.message = message
        super().__init__(f"{source}:{line}: {message}")


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    """A directed graph on nodes 0..n-1 with an optional node coloring.

    Parameters
    ----------
    n : int
        Number of nodes, at least 1.
    edges : iterable of (int, int)
        Directed edges (u, v), u != v, endpoints in [0, n).
    colors : sequence of int, optional
        One color id per node. None means uncolored.

    Derived attributes `in_adj` and `out_adj` hold the sorted neighbor
    tuples per node, so `id(i) == len(in_adj[i])` and
    `od(i) == len(out_adj[i])`.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)
    colors: Optional[tuple] = None
    in_adj: tuple = field(init=False, repr=False)
    out_adj: tuple = field(init=False, repr=False)
    # flat CSR copies of the adjacency for the numeric kernels
    _in_ptr: np.ndarray = field(init=False, repr=False)
    _in_idx: np.ndarray = field(init=False, repr=False)
    _out_ptr: np.ndarray = field(init=False, repr=False)
    _out_idx: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.n
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"node count must be a positive integer, got {n!r}")
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop ({u}, {v}) is not allowed")
        object.__setattr__(self, "edges", edges)
        if self.colors is not None:
            colors = tuple(int(c) for c in self.colors)
            if len(colors) != n:
                raise ValueError(
                    f"colors has length {len(colors)}, expected {n}"
                )
            if any(c < 0 for c in colors):
                raise ValueError("colors must be non-negative integers")
            object.__setattr__(self, "colors", colors)
        ins = [[] for _ in range(n)]
        outs = [[] for _ in range(n)]
        for u, v in edges:
            outs[u].append(v)
            ins[v].append(u)
        in_adj = tuple(tuple(sorted(a)) for a in ins)
        out_adj = tuple(tuple(sorted(a)) for a in outs)
        object.__setattr__(self, "in_adj", in_adj)
        object.__setattr__(self, "out_adj", out_adj)
        for name, adj in (("_in", in_adj), ("_out", out_adj)):
            ptr = np.zeros(n + 1, dtype=np.int64)
            for i, a in enumerate(adj):
                ptr[i + 1] = ptr[i] + len(a)
            idx = np.fromiter(
                (v for a in adj for v in a), dtype=np.int64, count=int(ptr[n])
            )
            object.__setattr__(self, name + "_ptr", ptr)
            object.__setattr__(self, name + "_idx", idx)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def in_degree(self, i: int) -> int:
        return len(self.in_adj[i])

    def out_degree(self, i: int) -> int:
        return len(self.out_adj[i])

    def density(self) -> float:
        """Edge density |E| / (n (n - 1)); 0.0 for a single node."""
        if self.n < 2:
            return 0.0
        return len(self.edges) / (self.n * (self.n - 1))

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.edges == other.edges
            and self.colors == other.colors
        )

    def __hash__(self):
        return hash((self.n, self.edges, self.colors))

    def __repr__(self):
        color = "" if self.colors is None else ", colored"
        return f"DirectedGraph(n={self.n}, edges={len(self.edges)}{color})"


@dataclass(frozen=True)
class NodeMapping:
    """An injective pairing, stored as (b_node, a_node) pairs."""

    pairs: tuple

    def __post_init__(self):
        pairs = tuple((int(b), int(a)) for b, a in self.pairs)
        bs = [b for b, _ in pairs]
        as_ = [a for _, a in pairs]
        if len(set(bs)) != len(bs) or len(set(as_)) != len(as_):
            raise ValueError("mapping is not injective")
        object.__setattr__(self, "pairs", pairs)


def from_edge_list(
    n: int,
    edges: Iterable[tuple],
    colors: Optional[Sequence[int]] = None,
) -> DirectedGraph:
    """Build a DirectedGraph, rejecting duplicate edges in the input.

    Raises ValueError on out-of-range endpoints, self-loops, duplicate
    edges, a color sequence of the wrong length, or n < 1.
    """
    edge_list = [(int(u), int(v)) for u, v in edges]
    if len(set(edge_list)) != len(edge_list):
        seen = set()
        for e in edge_list:
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
    return DirectedGraph(n, frozenset(edge_list), None if colors is None else tuple(colors))


def complement(g: DirectedGraph) -> DirectedGraph:
    """The graph on the same nodes with exactly the missing (u, v), u != v, as edges.

    Colors are preserved. Involutive on self-loop-free graphs.
    """
    edges = frozenset(
        (u, v)
        for u in range(g.n)
        for v in range(g.n)
        if u != v and (u, v) not in g.edges
    )
    return DirectedGraph(g.n, edges, g.colors)


def induced_subgraph(g: DirectedGraph, nodes: Sequence[int]) -> DirectedGraph:
    """Subgraph on `nodes`, relabeled 0..len(nodes)-1 in the given order.

    Keeps exactly the edges of g whose endpoints both lie in `nodes`;
    colors are restricted in the same order. Raises ValueError on
    duplicates, out-of-range indices, or an empty selection.
    """
    nodes = [int(v) for v in nodes]
    if not nodes:
        raise ValueError("node selection is empty")
    if len(set(nodes)) != len(nodes):
        raise ValueError("node selection contains duplicates")
    for v in nodes:
        if not 0 <= v < g.n:
            raise ValueError(f"node {v} out of range for n={g.n}")
    pos = {v: i for i, v in enumerate(nodes)}
    edges = frozenset(
        (pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos
    )
    colors = None if g.colors is None else tuple(g.colors[v] for v in nodes)
    return DirectedGraph(len(nodes), edges, colors)


def relabel(g: DirectedGraph, perm: Sequence[int]) -> DirectedGraph:
    """Rename node i to perm[i]; perm must be a permutation of 0..n-1."""
    perm = [int(x) for x in perm]
    if sorted(perm) != list(range(g.n)):
        raise ValueError("perm is not a permutation of the node set")
    edges = frozenset((perm[u], perm[v]) for u, v in g.edges)
    colors = None
    if g.colors is not None:
        out = [0] * g.n
        for i, c in enumerate(g.colors):
            out[perm[i]] = c
        colors = tuple(out)
    return DirectedGraph(g.n, edges, colors)


def erdos_renyi(n: int, p: float, rng: np.random.Generator) -> DirectedGraph:
    """Random directed graph: each ordered pair (u, v), u != v, is an edge
    independently with probability p.

    Deterministic given the generator state; consumes exactly n*n uniform
    draws. Raises ValueError for p outside [0, 1] or n < 1.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if n < 1:
        raise ValueError(f"node count must be positive, got {n}")
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    edges = frozenset((int(u), int(v)) for u, v in np.argwhere(mask))
    return DirectedGraph(n, edges)


def _effective_colors(g: DirectedGraph) -> tuple:
    return g.colors if g.colors is not None else (0,) * g.n


def is_mapping_isomorphism(gb: DirectedGraph, ga: DirectedGraph, m) -> bool:
    """Whether mapping m makes gb isomorphic to ga's induced subgraph on the image.

    m maps every node of gb to a distinct node of ga, given as a NodeMapping
    or an iterable of (b_node, a_node) pairs. True iff for every ordered node
    pair of gb, (i, j) is an edge of gb exactly when (m[i], m[j]) is an edge
    of ga, and colors agree at matched nodes (an uncolored graph counts as
    monochrome). Raises ValueError if the mapping is incomplete or invalid.
    """
    pairs = m.pairs if isinstance(m, NodeMapping) else NodeMapping(tuple(m)).pairs
    if len(pairs) != gb.n:
        raise ValueError(
            f"mapping covers {len(pairs)} nodes, expected {gb.n}"
        )
    image = {}
    for b, a in pairs:
        if not 0 <= b < gb.n:
            raise ValueError(f"node {b} out of range for the small graph")
        if not 0 <= a < ga.n:
            raise ValueError(f"node {a} out of range for the host graph")
        image[b] = a
    cb = _effective_colors(gb)
    ca = _effective_colors(ga)
    for b, a in pairs:
        if cb[b] != ca[a]:
            return False
    for i in range(gb.n):
        for j in range(gb.n):
            if i == j:
                continue
            if ((i, j) in gb.edges) != ((image[i], image[j]) in ga.edges):
                return False
    return True


def exists_isomorphism(
    gb: DirectedGraph, ga_sub: DirectedGraph, max_nodes: int = 20
) -> bool:
    """Whether some color- and edge-preserving bijection gb -> ga_sub exists.

    Backtracking search with degree-signature pruning, intended for the
    small graphs of the matching experiment. Raises ValueError when the node
    counts differ or exceed max_nodes.
    """
    if gb.n != ga_sub.n:
        raise ValueError(f"node counts differ: {gb.n} vs {ga_sub.n}")
    if gb.n > max_nodes:
        raise ValueError(f"graphs of size {gb.n} exceed the bound {max_nodes}")
    if len(gb.edges) != len(ga_sub.edges):
        return False
    cb = _effective_colors(gb)
    ca = _effective_colors(ga_sub)

    def signature(g, colors, v):
        return (len(g.in_adj[v]), len(g.out_adj[v]), colors[v])

    sig_b = [signature(gb, cb, v) for v in range(gb.n)]
    sig_a = [signature(ga_sub, ca, v) for v in range(ga_sub.n)]
    if sorted(sig_b) != sorted(sig_a):
        return False

    # assign high-degree nodes first; their constraints prune hardest
    order = sorted(range(gb.n), key=lambda v: (-(sig_b[v][0] + sig_b[v][1]), v))
    mapped = [-1] * gb.n
    used = [False] * ga_sub.n

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        b = order[k]
        for a in range(ga_sub.n):
            if used[a] or sig_a[a] != sig_b[b]:
                continue
            ok = True
            for bp in order[:k]:
                ap = mapped[bp]
                if ((b, bp) in gb.edges) != ((a, ap) in ga_sub.edges):
                    ok = False
                    break
                if ((bp, b) in gb.edges) != ((ap, a) in ga_sub.edges):
                    ok = False
                    break
            if not ok:
                continue
            mapped[b] = a
            used[a] = True
            if extend(k + 1):
                return True
            mapped[b] = -1
            used[a] = False
        return False

    return extend(0)


def parse_graph_text(text: str, source: str = "<string>") -> DirectedGraph:
    """Parse the line-oriented graph text format.

    First non-comment line is `graph <n>`; then any number of
    `color <node> <colorId>` and `edge <u> <v>` lines. `#` starts a comment.
    Nodes are 0-based. When at least one color line is present, unspecified
    nodes default to color 0; with no color lines the graph is uncolored.
    Raises ParseError with the offending line number.
    """
    n = None
    edges = []
    edge_seen = set()
    color_map = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "graph":
                raise ParseError(source, lineno, f"expected 'graph <n>', got {parts[0]!r}")
            if len(parts) != 2:
                raise ParseError(source, lineno, "expected 'graph <n>'")
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(source, lineno, f"invalid node count {parts[1]!r}") from None
            if n < 1:
                raise ParseError(source, lineno, f"node count must be positive, got {n}")
            continue
        if parts[0] == "graph":
            raise ParseError(source, lineno, "duplicate graph header")
        if parts[0] == "edge":
            if len(parts) != 3:
                raise ParseError(source, lineno, "expected 'edge <u> <v>'")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(source, lineno, "edge endpoints must be integers") from None
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(source, lineno, f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ParseError(source, lineno, f"self-loop ({u}, {v}) is not allowed")
            if (u, v) in edge_seen:
                raise ParseError(source, lineno, f"duplicate edge ({u}, {v})")
            edge_seen.add((u, v))
            edges.append((u, v))
        elif parts[0] == "color":
            if len(parts) != 3:
                raise ParseError(source, lineno, "expected 'color <node> <colorId>'")
            try:
                node, cid = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(source, lineno, "color fields must be integers") from None
            if not 0 <= node < n:
                raise ParseError(source, lineno, f"node {node} out of range for n={n}")
            if cid < 0:
                raise ParseError(source, lineno, f"color id must be non-negative, got {cid}")
            if node in color_map:
                raise ParseError(source, lineno, f"duplicate color line for node {node}")
            color_map[node] = cid
        else:
            raise ParseError(source, lineno, f"unknown directive {parts[0]!r}")
    if n is None:
        raise ParseError(source, max(1, text.count("\n") + 1), "missing 'graph <n>' header")
    colors = None
    if color_map:
        colors = tuple(color_map.get(i, 0) for i in range(n))
    return from_edge_list(n, edges, colors)


def read_graph_file(path) -> DirectedGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph_text(fh.read(), source=str(path))


def format_graph(g: DirectedGraph) -> str:
    """Serialize to the graph text format; parse_graph_text inverts this."""
    lines = [f"graph {g.n}"]
    if g.colors is not None:
        lines.extend(f"color {i} {c}" for i, c in enumerate(g.colors))
    lines.extend(f"edge {u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"

"""Two classical iterative node-similarity methods used for comparison.

Both methods propagate scores through the adjacency structure and rescale
the whole matrix to unit length (entrywise 2-norm) after every step, so
only the direction of the score matrix is meaningful:

* Blondel: node scores feed node scores through common in- and
  out-neighbors.
* Zager-Verghese: node scores refresh edge scores (an edge pair is as
  similar as its endpoints), then edge scores are folded back into node
  scores through incidence.

Termination mirrors the neighbor-matching loop: stop when no entry of the
node matrix moves by epsilon or more, or give up at max_iterations with
converged=False. These iterations are known to settle into period-2
oscillation on some inputs, which the cap is there to absorb.

Degenerate inputs: when either graph has no edges at all, every update
would be identically zero, so both methods return the normalized all-ones
matrix unchanged (iterations=0, converged=True).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph_core import DirectedGraph
from .neighbor_matching import NMResult

__all__ = [
    "EdgeSimilarityMatrix",
    "blondel_step",
    "blondel_similarity",
    "zager_edge_step",
    "zager_step",
    "zager_similarity",
]


@dataclass(frozen=True, eq=False)
class EdgeSimilarityMatrix:
    """|E_A| x |E_B| edge-pair scores, with the edge orderings they index."""

    y: np.ndarray
    edges_a: tuple
    edges_b: tuple


def _adjacency(g: DirectedGraph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for u, v in g.edges:
        a[u, v] = 1.0
    return a


def _incidence(g: DirectedGraph):
    """Source and target incidence (node x edge) over the sorted edge list."""
    edges = tuple(sorted(g.edges))
    s = np.zeros((g.n, len(edges)))
    t = np.zeros((g.n, len(edges)))
    for k, (u, v) in enumerate(edges):
        s[u, k] = 1.0
        t[v, k] = 1.0
    return edges, s, t


def _normalized(m: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(m))
    if norm == 0.0:
        raise ValueError("update produced an all-zero matrix")
    return m / norm


def _check_pair(ga: DirectedGraph, gb: DirectedGraph):
    if ga.n < 1 or gb.n < 1:
        raise ValueError("graphs must be non-empty")


def _degenerate_result(ga: DirectedGraph, gb: DirectedGraph) -> NMResult:
    x = np.full((ga.n, gb.n), 1.0 / np.sqrt(ga.n * gb.n))
    return NMResult(matrix=x, iterations=0, converged=True)


def blondel_step(ga: DirectedGraph, gb: DirectedGraph, x) -> np.ndarray:
    """One Blondel update of the node matrix, including the normalization."""
    aa = _adjacency(ga)
    ab = _adjacency(gb)
    x = np.asarray(x, dtype=np.float64)
    return _normalized(aa.T @ x @ ab + aa @ x @ ab.T)


def blondel_similarity(
    ga: DirectedGraph,
    gb: DirectedGraph,
    epsilon: float = 1e-4,
    max_iterations: int = 1000,
) -> NMResult:
    """Iterate the Blondel update from the all-ones matrix.

    Raises ValueError for a non-positive epsilon. A graph without edges on
    either side short-circuits to the normalized all-ones matrix.
    """
    _check_pair(ga, gb)
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if max_iterations < 1:
        raise ValueError(f"max_iterations must be at least 1, got {max_iterations}")
    if ga.edge_count == 0 or gb.edge_count == 0:
        return _degenerate_result(ga, gb)
    aa = _adjacency(ga)
    ab = _adjacency(gb)
    x = np.ones((ga.n, gb.n))
    iterations = 0
    converged = False
    for k in range(1, max_iterations + 1):
        xn = _normalized(aa.T @ x @ ab + aa @ x @ ab.T)
        diff = float(np.max(np.abs(xn - x)))
        x = xn
        iterations = k
        if diff < epsilon:
            converged = True
            break
    return NMResult(matrix=x, iterations=iterations, converged=converged)


def zager_edge_step(ga: DirectedGraph, gb: DirectedGraph, x) -> EdgeSimilarityMatrix:
    """Refresh the edge matrix from node scores, before any normalization.

    For edges u=(a,b) of A and v=(c,d) of B the new entry is exactly
    x[a,c] + x[b,d] (source pair plus target pair)."""
    edges_a, sa, ta = _incidence(ga)
    edges_b, sb, tb = _incidence(gb)
    x = np.asarray(x, dtype=np.float64)
    y = sa.T @ x @ sb + ta.T @ x @ tb
    return EdgeSimilarityMatrix(y=y, edges_a=edges_a, edges_b=edges_b)


def zager_step(ga: DirectedGraph, gb: DirectedGraph, x) -> np.ndarray:
    """One full Zager-Verghese update of the node matrix.

    Edge scores are refreshed from x and normalized, folded back into node
    scores through the incidence maps, and the node matrix is normalized."""
    edges_a, sa, ta = _incidence(ga)
    edges_b, sb, tb = _incidence(gb)
    x = np.asarray(x, dtype=np.float64)
    y = _normalized(sa.T @ x @ sb + ta.T @ x @ tb)
    return _normalized(ta @ y @ tb.T + sa @ y @ sb.T)


def zager_similarity(
    ga: DirectedGraph,
    gb: DirectedGraph,
    epsilon: float = 1e-4,
    max_iterations: int = 1000,
) -> NMResult:
    """Iterate the Zager-Verghese update from all-ones node and edge matrices.

    With no edges on either side the edge matrix is empty and node scores
    keep their normalized initial values."""
    _check_pair(ga, gb)
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if max_iterations < 1:
        raise ValueError(f"max_iterations must be at least 1, got {max_iterations}")
    if ga.edge_count == 0 or gb.edge_count == 0:
        return _degenerate_result(ga, gb)
    edges_a, sa, ta = _incidence(ga)
    edges_b, sb, tb = _incidence(gb)
    x = np.ones((ga.n, gb.n))
    iterations = 0
    converged = False
    for k in range(1, max_iterations + 1):
        y = _normalized(sa.T @ x @ sb + ta.T @ x @ tb)
        xn = _normalized(ta @ y @ tb.T + sa @ y @ sb.T)
        diff = float(np.max(np.abs(xn - x)))
        x = xn
        iterations = k
        if diff < epsilon:
            converged = True
            break
    return NMResult(matrix=x, iterations=iterations, converged=converged)

"""Whole-graph similarity scores derived from a node-similarity matrix."""

from __future__ import annotations

import numpy as np

from .assignment import Matching, max_assignment_weight, solve_max_assignment

__all__ = ["optimal_node_matching", "graph_similarity", "VARIANTS"]

VARIANTS = ("min_denominator", "max_denominator", "matrix_average")


def _checked(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.size == 0:
        raise ValueError("similarity matrix must be 2-D and non-empty")
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("similarity entries must lie in [0, 1]")
    return x


def optimal_node_matching(x) -> Matching:
    """Maximum-weight node matching under the similarity entries.

    Rows index the first graph's nodes, columns the second's. Ties resolve
    to the lexicographically smallest pair sequence, as in the assignment
    module. Raises ValueError on an empty matrix or out-of-range entries.
    """
    return solve_max_assignment(_checked(x))


def graph_similarity(x, variant: str = "min_denominator") -> float:
    """One number in [0, 1] for how alike two graphs are, given node scores.

    min_denominator (default): optimal matching weight / min(|V_A|, |V_B|).
    Equals 1.0 when an isomorphic alignment scores 1 everywhere, in
    particular for a graph against itself.

    max_denominator: the same weight / max(|V_A|, |V_B|); penalizes size
    mismatch, never exceeds the min variant.

    matrix_average: the mean of all entries; no matching involved. Rewards
    graphs whose nodes resemble many counterparts, not just their matched
    one.
    """
    x = _checked(x)
    # max_assignment_weight and the sorted reduction are both invariant
    # under transposition, so swapping the two graphs cannot change the
    # score even in the last bit.
    if variant == "min_denominator":
        return max_assignment_weight(x) / min(x.shape)
    if variant == "max_denominator":
        return max_assignment_weight(x) / max(x.shape)
    if variant == "matrix_average":
        return float(np.sum(np.sort(x, axis=None)) / x.size)
    raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")

"""Node similarity for two directed graphs by iterative neighbor matching.

Every node pair (i in A, j in B) gets a score in [0, 1]. Starting from the
all-ones matrix, each synchronous step rescores the pair as the average of
an in-part and an out-part: the in-part is the maximum-weight matching of
i's in-neighbors against j's in-neighbors, weighted by the previous scores,
divided by the larger in-degree (and likewise for the out-part). Two
conventions close the degenerate cases: when both degrees are zero the part
is 1 (empty neighborhoods are perfectly alike), and when exactly one degree
is zero it is 0 (nothing can be matched). Iteration stops when no entry
moves by epsilon or more.

For colored graphs, differently colored pairs are pinned to 0 throughout.
Dense inputs can be compared through their complements instead (the
"complement trick"): sparse complements both converge faster and
discriminate better, and a shared node matching is preserved either way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .assignment import _max_weight
from .graph_core import DirectedGraph, complement

__all__ = ["NMConfig", "NMResult", "nm_step", "nm_similarity"]


@dataclass(frozen=True)
class NMConfig:
    """Iteration parameters.

    complement_mode: "off" (default), "on", or "auto"; auto switches to the
    complement graphs when the mean edge density of the two inputs exceeds
    density_threshold.
    """

    epsilon: float = 1e-4
    max_iterations: int = 1000
    complement_mode: str = "off"
    density_threshold: float = 0.5

    def __post_init__(self):
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iterations < 1:
            raise ValueError(
                f"max_iterations must be at least 1, got {self.max_iterations}"
            )
        if self.complement_mode not in ("off", "on", "auto"):
            raise ValueError(
                f"complement_mode must be off, on or auto, got {self.complement_mode!r}"
            )
        if not 0.0 <= self.density_threshold <= 1.0:
            raise ValueError(
                f"density_threshold must be in [0, 1], got {self.density_threshold}"
            )


@dataclass(frozen=True, eq=False)
class NMResult:
    """Similarity matrix (|V_A| x |V_B|) plus run metadata."""

    matrix: np.ndarray
    iterations: int
    converged: bool
    complement_applied: bool = False


@njit(cache=True, nogil=True)
def _match_term(x, rows, cols):
    """One in- or out-part: matching weight of the two neighbor index sets
    under scores x, divided by the larger set size. Empty-set conventions:
    both empty -> 1, one empty -> 0. The size-1 shortcut is the exact
    optimum (a single row or column matches its maximum entry)."""
    ka = rows.shape[0]
    kb = cols.shape[0]
    m = ka if ka > kb else kb
    if m == 0:
        return 1.0
    if ka == 0 or kb == 0:
        return 0.0
    if ka == 1 or kb == 1:
        best = 0.0
        for a in range(ka):
            for b in range(kb):
                val = x[rows[a], cols[b]]
                if val > best:
                    best = val
        return best / m
    sub = np.empty((ka, kb))
    for a in range(ka):
        for b in range(kb):
            sub[a, b] = x[rows[a], cols[b]]
    return _max_weight(sub) / m


@njit(cache=True, nogil=True)
def _step_kernel(x, allowed, iap, iai, oap, oai, ibp, ibi, obp, obi, out):
    na, nb = x.shape
    for i in range(na):
        for j in range(nb):
            if allowed[i, j]:
                s_in = _match_term(
                    x, iai[iap[i]:iap[i + 1]], ibi[ibp[j]:ibp[j + 1]]
                )
                s_out = _match_term(
                    x, oai[oap[i]:oap[i + 1]], obi[obp[j]:obp[j + 1]]
                )
                out[i, j] = (s_in + s_out) / 2.0
            else:
                out[i, j] = 0.0


def _allowed_mask(ga: DirectedGraph, gb: DirectedGraph) -> np.ndarray:
    if (ga.colors is None) != (gb.colors is None):
        raise ValueError("either both graphs must be colored or neither")
    if ga.colors is None:
        return np.ones((ga.n, gb.n), dtype=np.bool_)
    ca = np.asarray(ga.colors, dtype=np.int64)
    cb = np.asarray(gb.colors, dtype=np.int64)
    return ca[:, None] == cb[None, :]


def _reference_step(ga, gb, x_prev, allowed, weight_fn):
    # plain-Python mirror of the kernel with the matching weight injected;
    # no shortcuts, so it exercises weight_fn on every non-degenerate pair
    na, nb = ga.n, gb.n
    out = np.zeros((na, nb))
    for i in range(na):
        for j in range(nb):
            if not allowed[i, j]:
                continue
            parts = []
            for ra, cb in (
                (ga.in_adj[i], gb.in_adj[j]),
                (ga.out_adj[i], gb.out_adj[j]),
            ):
                ka, kb = len(ra), len(cb)
                m = max(ka, kb)
                if m == 0:
                    parts.append(1.0)
                elif ka == 0 or kb == 0:
                    parts.append(0.0)
                else:
                    sub = x_prev[np.ix_(list(ra), list(cb))]
                    parts.append(weight_fn(sub) / m)
            out[i, j] = (parts[0] + parts[1]) / 2.0
    return out


def nm_step(ga: DirectedGraph, gb: DirectedGraph, x_prev, *, weight_fn=None) -> np.ndarray:
    """One synchronous update of the similarity matrix.

    x_prev must be |V_A| x |V_B|; every output entry is recomputed from
    x_prev only. Color-mismatched pairs are written as exactly 0.

    weight_fn is a diagnostic hook: when given, every matching weight is
    computed by weight_fn(submatrix) instead of the built-in solver (and
    without its shortcuts). Used to cross-check the solver against
    brute-force enumeration; slow.
    """
    x_prev = np.ascontiguousarray(x_prev, dtype=np.float64)
    if x_prev.shape != (ga.n, gb.n):
        raise ValueError(
            f"matrix shape {x_prev.shape} does not match graphs ({ga.n}, {gb.n})"
        )
    allowed = _allowed_mask(ga, gb)
    if weight_fn is not None:
        return _reference_step(ga, gb, x_prev, allowed, weight_fn)
    out = np.empty_like(x_prev)
    _step_kernel(
        x_prev,
        allowed,
        ga._in_ptr,
        ga._in_idx,
        ga._out_ptr,
        ga._out_idx,
        gb._in_ptr,
        gb._in_idx,
        gb._out_ptr,
        gb._out_idx,
        out,
    )
    return out


def nm_similarity(
    ga: DirectedGraph,
    gb: DirectedGraph,
    cfg: NMConfig | None = None,
    *,
    weight_fn=None,
) -> NMResult:
    """Iterate nm_step from the all-ones start until convergence.

    Stops when the largest entry change falls below cfg.epsilon, or after
    cfg.max_iterations steps (then converged=False; the last matrix is
    still returned). When the complement mode resolves to active, both
    graphs are replaced by their complements before iterating and
    complement_applied is set on the result.

    Raises ValueError when exactly one input is colored.
    """
    cfg = NMConfig() if cfg is None else cfg
    if (ga.colors is None) != (gb.colors is None):
        raise ValueError("either both graphs must be colored or neither")
    if cfg.complement_mode == "on":
        use_complement = True
    elif cfg.complement_mode == "auto":
        use_complement = (ga.density() + gb.density()) / 2.0 > cfg.density_threshold
    else:
        use_complement = False
    if use_complement:
        ga = complement(ga)
        gb = complement(gb)
    allowed = _allowed_mask(ga, gb)
    x = np.where(allowed, 1.0, 0.0)
    iterations = 0
    converged = False
    for k in range(1, cfg.max_iterations + 1):
        xn = nm_step(ga, gb, x, weight_fn=weight_fn)
        diff = float(np.max(np.abs(xn - x)))
        x = xn
        iterations = k
        if diff < cfg.epsilon:
            converged = True
            break
    return NMResult(
        matrix=x,
        iterations=iterations,
        converged=converged,
        complement_applied=use_complement,
    )

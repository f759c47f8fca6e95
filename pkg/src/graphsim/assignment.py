"""Maximum-weight assignment between two index sets (rectangular LAP).

The solver is the Hungarian method with row/column potentials on a
square-padded cost table (pad weight 0, maximize via maxw - w). Two entry
points are exposed:

* solve_max_assignment: full matching with a deterministic tie rule
  (lexicographically smallest pair sequence among maximum-weight matchings).
* max_assignment_weight: weight only, on a fixed canonical definition (see
  below), callable from compiled kernels.

Canonical weight definition. A matching's weight is the fold-left float sum
of its matched entries sorted ascending, and the value of a table is the
maximum of that quantity over all maximum-weight matchings. Sorting makes
the sum invariant under transposition, and taking the float maximum makes
it independent of which tied optimum a solver happens to find, so two exact
solvers always agree bitwise. Ties are recognized through the dual
variables: an entry is a candidate exactly when its reduced cost is within
1e-9 * max(1, maxw) of zero, which covers every matching within that margin
of optimal (slacks are non-negative and sum to the optimality gap).

The tie search is exhaustive only up to a node budget, so the computed
value is additionally pinned to a canonical orientation: tables are
processed with rows <= cols, and square tables are flipped onto whichever
of the table and its transpose is lexicographically smaller. A table and
its transpose therefore run the identical computation and return the
identical float even when the budget truncates the search.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

__all__ = ["WeightTable", "Matching", "solve_max_assignment", "max_assignment_weight"]

_TIE_TOL = 1e-9
_ENUM_CAP = 500_000


@dataclass(frozen=True)
class WeightTable:
    """A rows x cols table of finite non-negative weights."""

    w: np.ndarray
    rows: int = field(init=False)
    cols: int = field(init=False)

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        if w.ndim != 2 or w.size == 0:
            raise ValueError("weight table must be 2-D and non-empty")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.any(w < 0.0):
            raise ValueError("weights must be non-negative")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "rows", w.shape[0])
        object.__setattr__(self, "cols", w.shape[1])


@dataclass(frozen=True)
class Matching:
    """An injective row/col pairing of size min(rows, cols) and its weight."""

    pairs: tuple
    total_weight: float


@njit(cache=True, nogil=True)
def _hungarian(cost):
    """Potentials-form Hungarian method on a square cost matrix (minimize).

    Returns (p, u, v), 1-based: p[j] is the row matched to column j, and
    u, v are the dual potentials. Scans run in increasing index order, so
    the matching it lands on is reproducible.
    """
    n = cost.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=np.bool_)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = np.inf
            j1 = -1
            for j in range(1, n + 1):
                if not used[j]:
                    cur = cost[i0 - 1, j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    return p, u, v


@njit(cache=True, nogil=True)
def _sorted_fold(vals):
    s = np.sort(vals)
    total = 0.0
    for i in range(s.shape[0]):
        total += s[i]
    return total


@njit(cache=True, nogil=True)
def _enum_best(w, tight, fake_ok, best0):
    """Float-max sorted-fold weight over tie-candidate matchings.

    w is r x c with r <= c. Enumerates injective row -> column maps inside
    `tight`; a complete map is feasible only when every unused column could
    be absorbed by a padding row (fake_ok). Backtracking is capped; best0
    (the Hungarian matching's weight) is the floor, so a cap hit degrades
    to the solver's own matching instead of an error.
    """
    r, c = w.shape
    choice = np.full(r, -1, dtype=np.int64)
    used = np.zeros(c, dtype=np.bool_)
    nxt = np.zeros(r, dtype=np.int64)
    vals = np.empty(r)
    best = best0
    visited = 0
    i = 0
    while i >= 0:
        if i == r:
            ok = True
            for j in range(c):
                if not used[j] and not fake_ok[j]:
                    ok = False
                    break
            if ok:
                for t in range(r):
                    vals[t] = w[t, choice[t]]
                s = _sorted_fold(vals)
                if s > best:
                    best = s
            i -= 1
            if i < 0:
                break
            used[choice[i]] = False
            choice[i] = -1
            continue
        advanced = False
        j = nxt[i]
        while j < c:
            visited += 1
            if visited > _ENUM_CAP:
                return best
            if tight[i, j] and not used[j]:
                choice[i] = j
                used[j] = True
                nxt[i] = j + 1
                i += 1
                if i < r:
                    nxt[i] = 0
                advanced = True
                break
            j += 1
        if not advanced:
            nxt[i] = 0
            i -= 1
            if i >= 0:
                used[choice[i]] = False
                choice[i] = -1
    return best


@njit(cache=True, nogil=True)
def _max_weight(w_in):
    """Canonical maximum assignment weight of a non-empty table (see module docstring)."""
    r0, c0 = w_in.shape
    if r0 < c0:
        w = w_in
    elif r0 > c0:
        w = w_in.T.copy()
    else:
        # square: orient by content so a table and its transpose run the
        # exact same computation (the tie search may be truncated, so only
        # identical inputs guarantee identical outputs)
        w = w_in
        for i in range(r0):
            done = False
            for j in range(c0):
                if w_in[i, j] < w_in[j, i]:
                    done = True
                    break
                if w_in[i, j] > w_in[j, i]:
                    w = w_in.T.copy()
                    done = True
                    break
            if done:
                break
    r, c = w.shape
    n = c
    maxw = 0.0
    for i in range(r):
        for j in range(c):
            if w[i, j] > maxw:
                maxw = w[i, j]
    cost = np.full((n, n), maxw)
    for i in range(r):
        for j in range(c):
            cost[i, j] = maxw - w[i, j]
    p, u, v = _hungarian(cost)
    col_for_row = np.full(n, -1, dtype=np.int64)
    for j in range(1, n + 1):
        col_for_row[p[j] - 1] = j - 1
    vals = np.empty(r)
    for i in range(r):
        vals[i] = w[i, col_for_row[i]]
    w_h = _sorted_fold(vals)
    tol = _TIE_TOL * (maxw if maxw > 1.0 else 1.0)
    # a row whose tie candidates all carry one value cannot change the fold
    tight = np.zeros((r, c), dtype=np.bool_)
    forced = True
    for i in range(r):
        first = True
        val = 0.0
        for j in range(c):
            if cost[i, j] - u[i + 1] - v[j + 1] <= tol:
                tight[i, j] = True
                if first:
                    val = w[i, j]
                    first = False
                elif w[i, j] != val:
                    forced = False
    if forced:
        return w_h
    fake_ok = np.zeros(c, dtype=np.bool_)
    if r < c:
        # padding rows are interchangeable; they can only sit on maximal-dual columns
        vmax = -np.inf
        for j in range(c):
            if v[j + 1] > vmax:
                vmax = v[j + 1]
        for j in range(c):
            fake_ok[j] = v[j + 1] >= vmax - tol
    return _enum_best(w, tight, fake_ok, w_h)


def max_assignment_weight(table) -> float:
    """Canonical maximum assignment weight of a WeightTable or 2-D array."""
    t = table if isinstance(table, WeightTable) else WeightTable(np.asarray(table))
    return float(_max_weight(t.w))


def _padded_tight(w: np.ndarray):
    """Hungarian solve of the square-padded table; returns the matching,
    the tie-candidate mask over the padded square, and the pad size."""
    r, c = w.shape
    n = max(r, c)
    maxw = float(w.max(initial=0.0))
    cost = np.full((n, n), maxw)
    cost[:r, :c] = maxw - w
    p, u, v = _hungarian(cost)
    row_match = np.full(n, -1, dtype=np.int64)
    for j in range(1, n + 1):
        row_match[p[j] - 1] = j - 1
    tol = _TIE_TOL * max(1.0, maxw)
    slack = cost - u[1:, None] - v[None, 1:]
    tight = slack <= tol
    return row_match, tight, n


def solve_max_assignment(table) -> Matching:
    """Maximum-weight matching of size min(rows, cols), deterministic under ties.

    Among maximum-weight matchings the lexicographically smallest pair
    sequence is returned (pairs sorted by row; prefer matching a smaller row
    at all, then its smallest column). total_weight is the sum of the
    matched weights. Raises ValueError on an empty table or on negative or
    non-finite entries.
    """
    t = table if isinstance(table, WeightTable) else WeightTable(np.asarray(table))
    w = t.w
    rows, cols = t.rows, t.cols
    row_match, tight, n = _padded_tight(w)
    col_match = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        col_match[row_match[i]] = i
    frozen_row = [False] * n
    frozen_col = [False] * n

    def reassign(r: int, c: int) -> bool:
        # force row r onto column c, repairing the rest of the matching by a
        # single augmenting-path attempt through the tie-candidate graph
        if row_match[r] == c:
            return True
        saved_rm = row_match.copy()
        saved_cm = col_match.copy()
        displaced = col_match[c]
        freed = row_match[r]
        row_match[r] = c
        col_match[c] = r
        row_match[displaced] = -1
        col_match[freed] = -1

        seen = [False] * n
        seen[c] = True  # the path must not displace r from the forced column

        def augment(i: int) -> bool:
            for j in range(n):
                if seen[j] or frozen_col[j] or not tight[i, j]:
                    continue
                seen[j] = True
                holder = col_match[j]
                if holder == -1:
                    row_match[i] = j
                    col_match[j] = i
                    return True
                if frozen_row[holder]:
                    continue
                if augment(holder):
                    row_match[i] = j
                    col_match[j] = i
                    return True
            return False

        if augment(displaced):
            return True
        row_match[:] = saved_rm
        col_match[:] = saved_cm
        return False

    for r in range(rows):
        placed = False
        for c in range(cols):
            if not frozen_col[c] and tight[r, c] and reassign(r, c):
                placed = True
                break
        if not placed:
            # rows exceed cols: this row is left out, parked on a padding column
            for c in range(cols, n):
                if not frozen_col[c] and tight[r, c] and reassign(r, c):
                    placed = True
                    break
        if not placed:
            raise AssertionError("tie-candidate graph lost a perfect matching")
        frozen_row[r] = True
        frozen_col[row_match[r]] = True

    pairs = tuple(
        (i, int(row_match[i])) for i in range(rows) if row_match[i] < cols
    )
    total = 0.0
    for i, j in pairs:
        total += w[i, j]
    return Matching(pairs=pairs, total_weight=float(total))

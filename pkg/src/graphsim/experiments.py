"""Experiment harnesses: subgraph matching accuracy and CNF classification.

The subgraph experiment measures how often a similarity method recovers a
planted induced subgraph: draw a random host graph, induce a subgraph on a
random node subset, compute node similarities between host and subgraph,
extract the optimal node matching, and count success when the matched node
set induces a subgraph isomorphic to the planted one. Every trial draws its
randomness from an independent stream keyed by (seed, method, m, p-index,
trial), so reports are bit-identical no matter how trials are scheduled.

The classification pipeline turns CNF formulas into colored variable-clause
graphs and runs leave-one-out k-nearest-neighbor voting on pairwise graph
similarity.
"""

from __future__ import annotations

import json
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .baseline_methods import blondel_similarity, zager_similarity
from .graph_core import (
    DirectedGraph,
    ParseError,
    complement,
    erdos_renyi,
    exists_isomorphism,
    induced_subgraph,
    is_mapping_isomorphism,
)
from .graph_measures import VARIANTS, graph_similarity, optimal_node_matching
from .neighbor_matching import NMConfig, nm_similarity

__all__ = [
    "METHOD_ORDER",
    "SubgraphExperimentConfig",
    "CellResult",
    "MethodSummary",
    "ExperimentReport",
    "run_subgraph_experiment",
    "write_report_csv",
    "read_report_csv",
    "write_report_json",
    "read_report_json",
    "CnfInstance",
    "parse_dimacs",
    "format_dimacs",
    "variable_clause_graph",
    "chain_formula",
    "pigeonhole_formula",
    "read_manifest",
    "ClassificationResult",
    "knn_classify",
]

METHOD_ORDER = ("NM", "NM*", "ZV", "ZV*", "Blondel")


# ---------------------------------------------------------------------------
# subgraph matching experiment


@dataclass(frozen=True)
class SubgraphExperimentConfig:
    n: int = 15
    m_values: tuple = tuple(range(8, 16))
    p_values: tuple = (0.2, 0.4, 0.6, 0.8)
    trials: int = 50
    epsilon: float = 1e-4
    max_iterations: int = 1000
    methods: tuple = METHOD_ORDER
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "m_values", tuple(int(m) for m in self.m_values))
        object.__setattr__(self, "p_values", tuple(float(p) for p in self.p_values))
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not self.m_values:
            raise ValueError("m_values is empty")
        for m in self.m_values:
            if not 1 <= m <= self.n:
                raise ValueError(f"m={m} outside [1, n={self.n}]")
        if not self.p_values:
            raise ValueError("p_values is empty")
        for p in self.p_values:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"p={p} outside [0, 1]")
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iterations < 1:
            raise ValueError(
                f"max_iterations must be at least 1, got {self.max_iterations}"
            )
        unknown = [m for m in self.methods if m not in METHOD_ORDER]
        if unknown:
            raise ValueError(f"unknown methods {unknown}, expected from {METHOD_ORDER}")
        if not self.methods:
            raise ValueError("methods is empty")
        chosen = set(self.methods)
        object.__setattr__(
            self, "methods", tuple(m for m in METHOD_ORDER if m in chosen)
        )


@dataclass(frozen=True)
class CellResult:
    method: str
    m: int
    p: float
    trials: int
    successes: int
    accuracy: float


@dataclass(frozen=True)
class MethodSummary:
    method: str
    trials: int
    successes: int
    accuracy: float


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    """Per-cell and per-method accuracies.

    Wall times are measurement side products: they stay on the in-memory
    report and in the CLI summary but are never written to report files,
    which must be byte-identical across reruns of the same seed.
    """

    cells: tuple
    overall: tuple
    wall_times: dict = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, ExperimentReport):
            return NotImplemented
        return self.cells == other.cells and self.overall == other.overall


def _run_trial(
    method: str,
    n: int,
    m: int,
    p: float,
    p_index: int,
    epsilon: float,
    max_iterations: int,
    seed: int,
    trial: int,
) -> bool:
    method_id = METHOD_ORDER.index(method)
    stream = np.random.SeedSequence(
        entropy=seed, spawn_key=(method_id, m, p_index, trial)
    )
    rng = np.random.default_rng(stream)
    host = erdos_renyi(n, p, rng)
    nodes = sorted(int(v) for v in rng.choice(n, size=m, replace=False))
    planted = induced_subgraph(host, nodes)
    dense = p > 0.5
    if method == "NM":
        res = nm_similarity(host, planted, NMConfig(epsilon, max_iterations, "off"))
    elif method == "NM*":
        mode = "on" if dense else "off"
        res = nm_similarity(host, planted, NMConfig(epsilon, max_iterations, mode))
    elif method == "ZV":
        res = zager_similarity(host, planted, epsilon, max_iterations)
    elif method == "ZV*":
        if dense:
            res = zager_similarity(
                complement(host), complement(planted), epsilon, max_iterations
            )
        else:
            res = zager_similarity(host, planted, epsilon, max_iterations)
    elif method == "Blondel":
        res = blondel_similarity(host, planted, epsilon, max_iterations)
    else:
        raise ValueError(f"unknown method {method!r}")
    matching = optimal_node_matching(res.matrix)
    mapping = tuple((j, i) for i, j in matching.pairs)
    if is_mapping_isomorphism(planted, host, mapping):
        return True
    matched = sorted(i for i, _ in matching.pairs)
    return exists_isomorphism(planted, induced_subgraph(host, matched))


def run_subgraph_experiment(
    cfg: SubgraphExperimentConfig, jobs: int = 1
) -> ExperimentReport:
    """Run every (method, m, p) cell for cfg.trials trials.

    jobs > 1 schedules trials on a thread pool; the report is bit-identical
    either way because each trial owns an independent random stream and
    aggregation order is fixed.
    """
    tasks = [
        (method, m, p_index, p, trial)
        for method in cfg.methods
        for p_index, p in enumerate(cfg.p_values)
        for m in cfg.m_values
        for trial in range(cfg.trials)
    ]

    def run(task):
        method, m, p_index, p, trial = task
        t0 = time.perf_counter()
        ok = _run_trial(
            method, cfg.n, m, p, p_index, cfg.epsilon, cfg.max_iterations,
            cfg.seed, trial,
        )
        return task, ok, time.perf_counter() - t0

    outcomes = {}
    spent = {method: 0.0 for method in cfg.methods}
    if jobs <= 1:
        results = map(run, tasks)
    else:
        pool = ThreadPoolExecutor(max_workers=jobs)
        results = pool.map(run, tasks)
    for task, ok, dt in results:
        method, m, p_index, p, trial = task
        outcomes[(method, m, p_index)] = outcomes.get((method, m, p_index), 0) + ok
        spent[method] += dt
    if jobs > 1:
        pool.shutdown()

    cells = []
    for method in cfg.methods:
        for m in cfg.m_values:
            for p_index, p in enumerate(cfg.p_values):
                successes = outcomes.get((method, m, p_index), 0)
                cells.append(
                    CellResult(
                        method=method,
                        m=m,
                        p=p,
                        trials=cfg.trials,
                        successes=successes,
                        accuracy=successes / cfg.trials,
                    )
                )
    overall = []
    for method in cfg.methods:
        total = cfg.trials * len(cfg.m_values) * len(cfg.p_values)
        wins = sum(c.successes for c in cells if c.method == method)
        overall.append(
            MethodSummary(
                method=method,
                trials=total,
                successes=wins,
                accuracy=wins / total,
            )
        )
    return ExperimentReport(
        cells=tuple(cells), overall=tuple(overall), wall_times=spent
    )


_CELL_HEADER = "method,m,p,trials,successes,accuracy"
_OVERALL_HEADER = "method,trials,successes,accuracy"


def write_report_csv(report: ExperimentReport, path) -> None:
    """Cell rows, a blank line, then the per-method summary section.

    Floats are written with repr so the file parses back bit-exact."""
    lines = [_CELL_HEADER]
    for c in report.cells:
        lines.append(
            f"{c.method},{c.m},{c.p!r},{c.trials},{c.successes},{c.accuracy!r}"
        )
    lines.append("")
    lines.append("overall")
    lines.append(_OVERALL_HEADER)
    for s in report.overall:
        lines.append(f"{s.method},{s.trials},{s.successes},{s.accuracy!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_report_csv(path) -> ExperimentReport:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    cells = []
    overall = []
    section = "cells"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "overall":
            section = "overall"
            continue
        if line in (_CELL_HEADER, _OVERALL_HEADER):
            continue
        parts = line.split(",")
        if section == "cells":
            if len(parts) != 6:
                raise ParseError(str(path), lineno, "expected 6 cell fields")
            cells.append(
                CellResult(
                    method=parts[0],
                    m=int(parts[1]),
                    p=float(parts[2]),
                    trials=int(parts[3]),
                    successes=int(parts[4]),
                    accuracy=float(parts[5]),
                )
            )
        else:
            if len(parts) != 4:
                raise ParseError(str(path), lineno, "expected 4 summary fields")
            overall.append(
                MethodSummary(
                    method=parts[0],
                    trials=int(parts[1]),
                    successes=int(parts[2]),
                    accuracy=float(parts[3]),
                )
            )
    return ExperimentReport(cells=tuple(cells), overall=tuple(overall))


def write_report_json(report: ExperimentReport, path) -> None:
    payload = {
        "cells": [vars(c) for c in report.cells],
        "overall": [vars(s) for s in report.overall],
    }
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_report_json(path) -> ExperimentReport:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    cells = tuple(CellResult(**c) for c in payload["cells"])
    overall = tuple(MethodSummary(**s) for s in payload["overall"])
    return ExperimentReport(cells=cells, overall=overall)


# ---------------------------------------------------------------------------
# CNF formulas and classification


@dataclass(frozen=True)
class CnfInstance:
    """A CNF formula: clause tuples of non-zero signed literals."""

    num_vars: int
    clauses: tuple
    label: Optional[str] = None
    name: Optional[str] = None

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError(f"negative variable count {self.num_vars}")
        clauses = tuple(tuple(int(l) for l in cl) for cl in self.clauses)
        for cl in clauses:
            if not cl:
                raise ValueError("empty clause")
            for lit in cl:
                if lit == 0:
                    raise ValueError("literal 0 is reserved as the clause terminator")
                if abs(lit) > self.num_vars:
                    raise ValueError(
                        f"literal {lit} out of range for {self.num_vars} variables"
                    )
        object.__setattr__(self, "clauses", clauses)


def parse_dimacs(source) -> CnfInstance:
    """Parse DIMACS CNF from a path or a text stream.

    `c` lines are comments; the header is `p cnf <vars> <clauses>`; clauses
    are zero-terminated and may span lines; a line consisting of `%` ends
    the instance (a common benchmark-file terminator). A clause count that
    disagrees with the header warns instead of failing. Raises ParseError
    for a missing header, an out-of-range literal, or an empty clause.
    """
    if hasattr(source, "read"):
        text = source.read()
        src = getattr(source, "name", "<stream>")
    else:
        src = str(source)
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    num_vars = None
    declared = None
    clauses = []
    current = []
    last_line = 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line == "%":
            break
        if line.startswith("p"):
            if num_vars is not None:
                raise ParseError(src, lineno, "duplicate 'p cnf' header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(src, lineno, "expected 'p cnf <vars> <clauses>'")
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(src, lineno, "header counts must be integers") from None
            if num_vars < 0 or declared < 0:
                raise ParseError(src, lineno, "header counts must be non-negative")
            continue
        if num_vars is None:
            raise ParseError(src, lineno, "clause data before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(src, lineno, f"invalid literal {tok!r}") from None
            if lit == 0:
                if not current:
                    raise ParseError(src, lineno, "empty clause")
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > num_vars:
                    raise ParseError(
                        src, lineno,
                        f"literal {lit} out of range for {num_vars} variables",
                    )
                current.append(lit)
    if num_vars is None:
        raise ParseError(src, last_line, "missing 'p cnf' header")
    if current:
        clauses.append(tuple(current))
    if declared != len(clauses):
        warnings.warn(
            f"{src}: header declares {declared} clauses, found {len(clauses)}",
            stacklevel=2,
        )
    return CnfInstance(num_vars=num_vars, clauses=tuple(clauses), name=src)


def format_dimacs(f: CnfInstance) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    for cl in f.clauses:
        lines.append(" ".join(str(l) for l in cl) + " 0")
    return "\n".join(lines) + "\n"


def variable_clause_graph(f: CnfInstance, polarity_mode: bool = False) -> DirectedGraph:
    """Bipartite colored graph of a formula: variables (color 0) vs clauses (color 1).

    polarity_mode off: every occurrence links variable and clause in both
    directions. polarity_mode on: positive literals point variable -> clause,
    negative ones clause -> variable. Duplicate occurrences collapse.
    """
    nv = f.num_vars
    nc = len(f.clauses)
    if nv + nc == 0:
        raise ValueError("formula has no variables and no clauses")
    colors = (0,) * nv + (1,) * nc
    edges = set()
    for ci, clause in enumerate(f.clauses):
        cnode = nv + ci
        for lit in clause:
            vnode = abs(lit) - 1
            if not polarity_mode:
                edges.add((vnode, cnode))
                edges.add((cnode, vnode))
            elif lit > 0:
                edges.add((vnode, cnode))
            else:
                edges.add((cnode, vnode))
    return DirectedGraph(nv + nc, frozenset(edges), colors)


def chain_formula(n_vars: int) -> CnfInstance:
    """Implication chain: clauses (-i, i+1) for consecutive variables."""
    if n_vars < 2:
        raise ValueError(f"chain needs at least 2 variables, got {n_vars}")
    clauses = tuple((-i, i + 1) for i in range(1, n_vars))
    return CnfInstance(num_vars=n_vars, clauses=clauses)


def pigeonhole_formula(holes: int, pigeons: Optional[int] = None) -> CnfInstance:
    """Pigeonhole principle: each pigeon gets a hole, no hole gets two.

    Variable p*holes + h + 1 means pigeon p sits in hole h. Defaults to one
    more pigeon than holes."""
    if holes < 1:
        raise ValueError(f"need at least 1 hole, got {holes}")
    pigeons = holes + 1 if pigeons is None else pigeons
    if pigeons < 1:
        raise ValueError(f"need at least 1 pigeon, got {pigeons}")

    def var(p, h):
        return p * holes + h + 1

    clauses = [tuple(var(p, h) for h in range(holes)) for p in range(pigeons)]
    for h in range(holes):
        for p in range(pigeons):
            for q in range(p + 1, pigeons):
                clauses.append((-var(p, h), -var(q, h)))
    return CnfInstance(num_vars=pigeons * holes, clauses=tuple(clauses))


def read_manifest(path) -> list:
    """Read a corpus manifest: lines `<path> <classLabel>`, `#` comments.

    Relative formula paths resolve against the manifest's directory. Every
    referenced file is parsed; the label and the path as written are
    attached to the instance."""
    base = os.path.dirname(os.path.abspath(path))
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    instances = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(str(path), lineno, "expected '<path> <classLabel>'")
        rel, label = parts
        full = rel if os.path.isabs(rel) else os.path.join(base, rel)
        inst = parse_dimacs(full)
        instances.append(replace(inst, label=label, name=rel))
    return instances


@dataclass(frozen=True)
class ClassificationResult:
    predictions: tuple  # (name, true label, predicted label) per instance
    accuracy: float


def knn_classify(
    corpus: Sequence[CnfInstance],
    k: int,
    sim_cfg: Optional[NMConfig] = None,
    variant: str = "min_denominator",
    polarity_mode: bool = False,
) -> ClassificationResult:
    """Leave-one-out k-nearest-neighbor classification on graph similarity.

    Each instance is scored against every other on their variable-clause
    graphs, its k most similar neighbors vote, and the plurality label
    wins. Vote ties break toward the larger summed similarity, then the
    lexicographically smaller label. Raises ValueError when the corpus has
    fewer than 2 instances, an instance lacks a label, k < 1, or k is not
    smaller than the corpus.
    """
    corpus = list(corpus)
    if len(corpus) < 2:
        raise ValueError("corpus must contain at least 2 instances")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k >= len(corpus):
        raise ValueError(f"k={k} must be smaller than the corpus ({len(corpus)})")
    for idx, inst in enumerate(corpus):
        if inst.label is None:
            raise ValueError(f"instance {inst.name or idx} has no class label")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    sim_cfg = NMConfig() if sim_cfg is None else sim_cfg
    graphs = [variable_clause_graph(inst, polarity_mode) for inst in corpus]
    size = len(corpus)
    sims = np.zeros((size, size))
    for i in range(size):
        for j in range(i + 1, size):
            res = nm_similarity(graphs[i], graphs[j], sim_cfg)
            s = graph_similarity(res.matrix, variant)
            sims[i, j] = s
            sims[j, i] = s
    predictions = []
    correct = 0
    for i, inst in enumerate(corpus):
        order = sorted(
            (j for j in range(size) if j != i), key=lambda j: (-sims[i, j], j)
        )
        top = order[:k]
        votes = {}
        weight = {}
        for j in top:
            label = corpus[j].label
            votes[label] = votes.get(label, 0) + 1
            weight[label] = weight.get(label, 0.0) + sims[i, j]
        predicted = min(
            votes, key=lambda label: (-votes[label], -weight[label], label)
        )
        predictions.append((inst.name or f"instance{i}", inst.label, predicted))
        if predicted == inst.label:
            correct += 1
    return ClassificationResult(
        predictions=tuple(predictions), accuracy=correct / size
    )

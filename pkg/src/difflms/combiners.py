"""Row-stochastic combination matrices supported on a graph.

Entry ``(k, l)`` is the weight node ``k`` applies to node ``l``'s estimate.
Every rule produces nonnegative rows that sum to one and vanish outside the
node's neighborhood (which includes the node itself).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

ROW_SUM_TOL = 1e-12

RULE_NAMES = ("metropolis", "uniform", "relative_degree", "laplacian", "identity")


@dataclass(frozen=True)
class CombinationMatrix:
    weights: np.ndarray  # (N, N) float64
    rule_name: str

    @property
    def n_nodes(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class Violation:
    """First constraint violation found by :func:`validate`."""

    kind: str  # 'shape' | 'negative' | 'support' | 'row_sum'
    row: int
    col: int | None
    value: float

    def __str__(self) -> str:
        if self.kind == "support":
            return f"nonzero weight at ({self.row}, {self.col}) outside the neighborhood"
        if self.kind == "negative":
            return f"negative weight {self.value} at ({self.row}, {self.col})"
        if self.kind == "row_sum":
            return f"row {self.row} sums to {self.value}, expected 1"
        return f"matrix shape mismatch (expected {self.row}x{self.row})"


def metropolis(g: Graph) -> CombinationMatrix:
    """Metropolis rule: off-diagonal weight 1/max(|N_l|, |N_k|) between
    neighbors, self-weight absorbing the remainder. Symmetric and doubly
    stochastic."""
    n = g.n_nodes
    deg = [len(g.members[k]) for k in range(n)]
    w = np.zeros((n, n))
    for u, v in g.edges:
        w[u, v] = w[v, u] = 1.0 / max(deg[u], deg[v])
    for k in range(n):
        w[k, k] = 1.0 - w[k].sum()
    return CombinationMatrix(weights=w, rule_name="metropolis")


def uniform(g: Graph) -> CombinationMatrix:
    """Equal weight 1/|N_k| on every member of the neighborhood."""
    n = g.n_nodes
    w = np.zeros((n, n))
    for k in range(n):
        members = list(g.members[k])
        w[k, members] = 1.0 / len(members)
    return CombinationMatrix(weights=w, rule_name="uniform")


def relative_degree(g: Graph) -> CombinationMatrix:
    """Weight each neighbor by its neighborhood size, normalized per row."""
    n = g.n_nodes
    deg = np.array([len(g.members[k]) for k in range(n)], dtype=float)
    w = np.zeros((n, n))
    for k in range(n):
        members = list(g.members[k])
        w[k, members] = deg[members] / deg[members].sum()
    return CombinationMatrix(weights=w, rule_name="relative_degree")


def laplacian(g: Graph, kappa: float = 1.0) -> CombinationMatrix:
    """Laplacian rule C = I - (kappa/d_max) L, with L the graph Laplacian and
    d_max the maximum edge degree (self excluded). Nonnegative for kappa <= 1."""
    if not 0 < kappa <= 1:
        raise ValueError(f"kappa must be in (0, 1], got {kappa}")
    n = g.n_nodes
    adj = np.zeros((n, n))
    for u, v in g.edges:
        adj[u, v] = adj[v, u] = 1.0
    edge_deg = adj.sum(axis=1)
    d_max = edge_deg.max() if n > 0 else 0.0
    if d_max == 0.0:  # no edges: single node
        w = np.eye(n)
    else:
        lap = np.diag(edge_deg) - adj
        w = np.eye(n) - (kappa / d_max) * lap
    return CombinationMatrix(weights=w, rule_name="laplacian")


def identity(n: int) -> CombinationMatrix:
    """No-cooperation combiner: each node keeps only its own estimate."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return CombinationMatrix(weights=np.eye(n), rule_name="identity")


def build_rule(name: str, g: Graph, kappa: float = 1.0) -> CombinationMatrix:
    """Build a combiner by rule name. Raises ValueError on unknown names."""
    if name == "metropolis":
        return metropolis(g)
    if name == "uniform":
        return uniform(g)
    if name == "relative_degree":
        return relative_degree(g)
    if name == "laplacian":
        return laplacian(g, kappa)
    if name == "identity":
        return identity(g.n_nodes)
    raise ValueError(f"unknown combiner rule {name!r}; valid rules: {', '.join(RULE_NAMES)}")


def validate(m: CombinationMatrix, g: Graph, tol: float = ROW_SUM_TOL) -> Violation | None:
    """Check nonnegativity, graph support and row stochasticity.

    Returns ``None`` when the matrix is valid, otherwise the first
    :class:`Violation` encountered (never raises on bad weights).
    """
    n = g.n_nodes
    w = m.weights
    if w.shape != (n, n):
        return Violation(kind="shape", row=n, col=None, value=float(w.size))
    for k in range(n):
        allowed = set(g.members[k])
        for l in range(n):
            if w[k, l] < 0:
                return Violation(kind="negative", row=k, col=l, value=float(w[k, l]))
            if w[k, l] != 0.0 and l not in allowed:
                return Violation(kind="support", row=k, col=l, value=float(w[k, l]))
        row_sum = float(w[k].sum())
        if abs(row_sum - 1.0) > tol:
            return Violation(kind="row_sum", row=k, col=None, value=row_sum)
    return None


def to_csv_text(m: CombinationMatrix) -> str:
    """Full N x N matrix, row-major CSV, 17 significant digits."""
    lines = [",".join(f"{v:.17g}" for v in row) for row in m.weights]
    return "\n".join(lines) + "\n"


def write_csv(m: CombinationMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_csv_text(m))

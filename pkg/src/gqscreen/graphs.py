"""Small dense-graph utilities: adjacency matrices, diameter, strong regularity.

Graphs are square boolean numpy arrays with a zero diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .gq import SrgParams, srg_multiplicities


@dataclass(frozen=True)
class SrgViolation:
    """Why a graph is not strongly regular, with the offending vertices."""

    kind: str  # "irregular", "lambda", "mu", "trivial"
    witness: tuple[int, ...]
    values: tuple[int, ...]


def adjacency_from_edges(n: int, edges) -> np.ndarray:
    adj = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        if u == v:
            raise ValueError("loops are not allowed")
        adj[u, v] = adj[v, u] = True
    return adj


def check_simple(adj: np.ndarray) -> None:
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise ValueError("adjacency matrix must be square")
    if adj.diagonal().any():
        raise ValueError("graph has loops")
    if not (adj == adj.T).all():
        raise ValueError("graph is not undirected")


def diameter(adj: np.ndarray) -> float:
    """Largest distance between two vertices; ``inf`` for a disconnected graph."""
    if adj.shape[0] <= 1:
        return 0
    dist = shortest_path(csr_matrix(adj.astype(np.int8)), unweighted=True, directed=False)
    m = dist.max()
    return float(m) if np.isinf(m) else int(m)


def strong_regularity(adj: np.ndarray) -> SrgParams | SrgViolation:
    """Exhaustive pair count; parameters when strongly regular, else a witness."""
    check_simple(adj)
    n = adj.shape[0]
    if n < 2:
        raise ValueError("need at least two vertices")
    deg = adj.sum(axis=1)
    if (deg != deg[0]).any():
        u = int(np.flatnonzero(deg != deg[0])[0])
        return SrgViolation("irregular", (0, u), (int(deg[0]), int(deg[u])))
    k = int(deg[0])
    if k == 0 or k == n - 1:
        # empty and complete graphs are excluded by convention
        return SrgViolation("trivial", (), (k,))
    a = adj.astype(np.int64)
    common = a @ a
    off = ~np.eye(n, dtype=bool)
    lam_vals = common[adj]
    mu_mask = ~adj & off
    mu_vals = common[mu_mask]
    if (lam_vals != lam_vals[0]).any():
        pairs = np.argwhere(adj & (common != lam_vals[0]))
        u, v = (int(x) for x in pairs[0])
        return SrgViolation("lambda", (u, v), (int(lam_vals[0]), int(common[u, v])))
    if (mu_vals != mu_vals[0]).any():
        pairs = np.argwhere(mu_mask & (common != mu_vals[0]))
        u, v = (int(x) for x in pairs[0])
        return SrgViolation("mu", (u, v), (int(mu_vals[0]), int(common[u, v])))
    lam, mu = int(lam_vals[0]), int(mu_vals[0])
    m_plus, m_minus = srg_multiplicities(n, k, lam, mu)
    return SrgParams(n, k, lam, mu, m_plus, m_minus)


def is_strongly_regular(adj: np.ndarray) -> SrgParams | None:
    res = strong_regularity(adj)
    return res if isinstance(res, SrgParams) else None


def cycle_graph(n: int) -> np.ndarray:
    return adjacency_from_edges(n, [(i, (i + 1) % n) for i in range(n)])

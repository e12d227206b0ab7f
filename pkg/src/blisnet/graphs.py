"""Weighted undirected graphs: construction, validation, and BFS queries.

Adjacency is stored dense up to ``DENSE_NODE_LIMIT`` nodes and as CSR above
it.  Graphs are immutable after construction and validated for symmetry,
nonnegative weights, zero diagonal, and connectivity.
"""

from __future__ import annotations

import csv
import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import (
    DisconnectedGraph,
    DuplicateEdgeConflict,
    DuplicatePoints,
    KTooLarge,
    NegativeWeight,
    SelfLoop,
)

# adjacency storage cutover between dense ndarray and scipy CSR
DENSE_NODE_LIMIT = 2048


@dataclass(frozen=True, eq=False)
class DegreeData:
    """Weighted degrees d = A·1 with cached diagonal powers D^alpha."""

    degrees: np.ndarray

    def __post_init__(self):
        self.degrees.setflags(write=False)

    def power(self, alpha: float) -> np.ndarray:
        """Diagonal entries of D^alpha (cached per exponent)."""
        cache = self.__dict__.setdefault("_power_cache", {})
        if alpha not in cache:
            out = self.degrees**alpha
            out.setflags(write=False)
            cache[alpha] = out
        return cache[alpha]


@dataclass(frozen=True, eq=False)
class Graph:
    """Connected weighted undirected graph over nodes 0..n-1."""

    n: int
    adjacency: object  # dense ndarray or scipy.sparse.csr_matrix
    edge_count: int

    @property
    def is_dense(self) -> bool:
        return isinstance(self.adjacency, np.ndarray)

    def dense_adjacency(self) -> np.ndarray:
        if self.is_dense:
            return self.adjacency
        return self.adjacency.toarray()

    @cached_property
    def neighbors(self) -> tuple:
        """Neighbor index arrays, one per node."""
        if self.is_dense:
            return tuple(np.flatnonzero(self.adjacency[i]) for i in range(self.n))
        indptr, indices = self.adjacency.indptr, self.adjacency.indices
        return tuple(indices[indptr[i] : indptr[i + 1]] for i in range(self.n))

    @cached_property
    def degree_data(self) -> DegreeData:
        if self.is_dense:
            d = self.adjacency.sum(axis=1)
        else:
            d = np.asarray(self.adjacency.sum(axis=1)).ravel()
        return DegreeData(np.asarray(d, dtype=float))

    @property
    def degrees(self) -> np.ndarray:
        return self.degree_data.degrees


def _bfs_levels(graph: Graph, source: int) -> np.ndarray:
    """Unweighted BFS distances from ``source`` (-1 marks unreachable)."""
    dist = np.full(graph.n, -1, dtype=int)
    dist[source] = 0
    queue = deque([source])
    nbrs = graph.neighbors
    while queue:
        u = queue.popleft()
        for v in nbrs[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def _finish_graph(n: int, dense: np.ndarray, edge_count: int) -> Graph:
    if n > DENSE_NODE_LIMIT:
        from scipy import sparse

        adjacency = sparse.csr_matrix(dense)
    else:
        dense.setflags(write=False)
        adjacency = dense
    return _validate_connected(Graph(n=n, adjacency=adjacency, edge_count=edge_count))


def _validate_connected(g: Graph) -> Graph:
    if g.n > 0 and not (_bfs_levels(g, 0) >= 0).all():
        raise DisconnectedGraph(f"graph with {g.n} nodes is not connected")
    return g


def build_graph(edges, n: int) -> Graph:
    """Build a validated undirected graph from an (i, j, weight) edge list.

    Repeating an edge with the same weight is tolerated; conflicting weights
    raise ``DuplicateEdgeConflict``.  Connectivity is verified by BFS.
    """
    if n < 1:
        raise ValueError("node count must be at least 1")
    seen: dict[tuple[int, int], float] = {}
    for i, j, w in edges:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i},{j}) out of range for n={n}")
        if i == j:
            raise SelfLoop(f"self-loop at node {i}")
        w = float(w)
        if w <= 0:
            raise NegativeWeight(f"edge ({i},{j}) has non-positive weight {w}")
        key = (min(i, j), max(i, j))
        if key in seen:
            if seen[key] != w:
                raise DuplicateEdgeConflict(
                    f"edge {key} listed with weights {seen[key]} and {w}"
                )
            continue
        seen[key] = w
    if n > DENSE_NODE_LIMIT:
        from scipy import sparse

        ii = np.fromiter((k[0] for k in seen), dtype=int, count=len(seen))
        jj = np.fromiter((k[1] for k in seen), dtype=int, count=len(seen))
        ww = np.fromiter(seen.values(), dtype=float, count=len(seen))
        adjacency = sparse.csr_matrix(
            (np.concatenate([ww, ww]), (np.concatenate([ii, jj]), np.concatenate([jj, ii]))),
            shape=(n, n),
        )
        return _validate_connected(
            Graph(n=n, adjacency=adjacency, edge_count=len(seen))
        )
    dense = np.zeros((n, n), dtype=float)
    for (i, j), w in seen.items():
        dense[i, j] = w
        dense[j, i] = w
    return _finish_graph(n, dense, edge_count=len(seen))


def knn_graph(points, k: int) -> Graph:
    """Symmetrized k-nearest-neighbor graph of a point cloud.

    An edge {i, j} exists when j is among i's k nearest points (Euclidean)
    or i is among j's; all weights are 1.  Exact distance ties are broken
    toward the lower node index.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-D array of coordinates")
    n = len(pts)
    if len(np.unique(pts, axis=0)) != n:
        raise DuplicatePoints("point cloud contains duplicate coordinates")
    if k < 1:
        raise ValueError("k must be at least 1")
    if k >= n:
        raise KTooLarge(f"k={k} requires more than {n} points")
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1)
    np.fill_diagonal(d2, np.inf)
    dense = np.zeros((n, n), dtype=float)
    for i in range(n):
        # stable sort keeps the lower index first among exact ties
        nearest = np.argsort(d2[i], kind="stable")[:k]
        dense[i, nearest] = 1.0
    dense = np.maximum(dense, dense.T)
    return _finish_graph(n, dense, edge_count=int(dense.sum()) // 2)


def path_distance(graph: Graph, i: int, j: int) -> int:
    """Length of the shortest unweighted path between nodes i and j."""
    if not (0 <= i < graph.n and 0 <= j < graph.n):
        raise ValueError("node index out of range")
    if i == j:
        return 0
    dist = np.full(graph.n, -1, dtype=int)
    dist[i] = 0
    queue = deque([i])
    nbrs = graph.neighbors
    while queue:
        u = queue.popleft()
        for v in nbrs[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                if v == j:
                    return int(dist[v])
                queue.append(v)
    raise DisconnectedGraph("no path found; graph invariant violated")


def diameter(graph: Graph) -> int:
    """Maximum unweighted path distance over all node pairs (BFS per node)."""
    return max(int(_bfs_levels(graph, s).max()) for s in range(graph.n))


def is_bipartite(graph: Graph):
    """BFS 2-coloring test.

    Returns ``(True, colors)`` with a valid 0/1 coloring, or ``(False, None)``.
    """
    colors = np.full(graph.n, -1, dtype=int)
    colors[0] = 0
    queue = deque([0])
    nbrs = graph.neighbors
    while queue:
        u = queue.popleft()
        for v in nbrs[u]:
            if colors[v] < 0:
                colors[v] = 1 - colors[u]
                queue.append(v)
            elif colors[v] == colors[u]:
                return False, None
    return True, colors


def all_pairs_distances(graph: Graph) -> np.ndarray:
    """n x n matrix of unweighted path distances."""
    return np.stack([_bfs_levels(graph, s) for s in range(graph.n)])


def neighborhood(graph: Graph, seeds, radius: int) -> np.ndarray:
    """Sorted node indices within ``radius`` hops of any seed node."""
    seeds = np.atleast_1d(np.asarray(seeds, dtype=int))
    dist = np.min([_bfs_levels(graph, int(s)) for s in seeds], axis=0)
    return np.flatnonzero(dist <= radius)


def permute_graph(graph: Graph, perm) -> Graph:
    """Relabeled copy where new node i is old node perm[i].

    Signals follow the same convention: x_new = x_old[perm], so equivariant
    transforms satisfy T_new(x_old[perm]) = T_old(x_old)[perm].
    """
    perm = np.asarray(perm, dtype=int)
    if sorted(perm.tolist()) != list(range(graph.n)):
        raise ValueError("perm must be a permutation of 0..n-1")
    dense = graph.dense_adjacency()[np.ix_(perm, perm)].copy()
    return _finish_graph(graph.n, dense, edge_count=graph.edge_count)


def save_graph_csv(graph: Graph, path) -> None:
    """Write an edge list CSV (``src,dst,weight``) plus an ``n`` sidecar JSON."""
    path = Path(path)
    dense = graph.dense_adjacency()
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["src", "dst", "weight"])
        ii, jj = np.nonzero(np.triu(dense))
        for i, j in zip(ii, jj):
            writer.writerow([int(i), int(j), repr(float(dense[i, j]))])
    path.with_suffix(".json").write_text(json.dumps({"n": graph.n}))


def load_graph_csv(path, n: int | None = None) -> Graph:
    """Read an edge list CSV; node count from sidecar JSON or max index + 1."""
    path = Path(path)
    sidecar = path.with_suffix(".json")
    edges = []
    with path.open() as fh:
        for row in csv.DictReader(fh):
            edges.append((int(row["src"]), int(row["dst"]), float(row["weight"])))
    if n is None:
        if sidecar.exists():
            n = int(json.loads(sidecar.read_text())["n"])
        else:
            n = max(max(i, j) for i, j, _ in edges) + 1
    return build_graph(edges, n)


def save_points_csv(points, path) -> None:
    pts = np.asarray(points, dtype=float)
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y"])
        for p in pts:
            writer.writerow([repr(float(p[0])), repr(float(p[1]))])


def load_points_csv(path) -> np.ndarray:
    with Path(path).open() as fh:
        rows = [(float(r["x"]), float(r["y"])) for r in csv.DictReader(fh)]
    return np.asarray(rows, dtype=float)

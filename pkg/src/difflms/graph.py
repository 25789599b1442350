"""Undirected network topologies.

Nodes are indexed 0..N-1 and that index order doubles as the default serial
update schedule. Neighborhoods always contain the node itself, so a node's
degree here is 1 + (number of incident edges). Graphs are immutable after
construction and must be connected.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InvalidEdgeError(ValueError):
    """Edge list contains an out-of-range index, a self-loop or a duplicate."""


class NotConnectedError(ValueError):
    """The edge set does not connect all nodes."""


class ConnectivityRetriesExhausted(RuntimeError):
    """Random placement never produced a connected graph within the retry cap."""


@dataclass(frozen=True)
class Graph:
    """Connected undirected graph. Build via :func:`build_graph` or the generators.

    ``edges`` holds each undirected pair once as ``(u, v)`` with ``u < v``,
    sorted. ``members[k]`` is the sorted neighborhood of node ``k`` including
    ``k`` itself.
    """

    n_nodes: int
    edges: tuple[tuple[int, int], ...]
    members: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Neighborhood:
    node: int
    members: tuple[int, ...]


def build_graph(n_nodes: int, edges) -> Graph:
    """Validate an edge list and return a connected :class:`Graph`.

    Parameters
    ----------
    n_nodes : int
        Number of nodes, >= 1.
    edges : iterable of pairs
        Unordered node-index pairs; order within a pair is irrelevant.

    Raises
    ------
    InvalidEdgeError
        On out-of-range indices, self-loops or duplicate pairs.
    NotConnectedError
        If some node is unreachable from node 0.
    """
    if n_nodes < 1:
        raise ValueError(f"n_nodes must be >= 1, got {n_nodes}")
    canonical: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for pair in edges:
        u, v = (int(x) for x in pair)
        if not (0 <= u < n_nodes and 0 <= v < n_nodes):
            raise InvalidEdgeError(f"edge ({u}, {v}) out of range for {n_nodes} nodes")
        if u == v:
            raise InvalidEdgeError(f"self-loop edge ({u}, {v})")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InvalidEdgeError(f"duplicate edge {key}")
        seen.add(key)
        canonical.append(key)
    canonical.sort()

    adj: list[set[int]] = [{k} for k in range(n_nodes)]
    for u, v in canonical:
        adj[u].add(v)
        adj[v].add(u)

    _check_connected(n_nodes, adj)
    members = tuple(tuple(sorted(adj[k])) for k in range(n_nodes))
    return Graph(n_nodes=n_nodes, edges=tuple(canonical), members=members)


def _check_connected(n_nodes: int, adj: list[set[int]]) -> None:
    # BFS from node 0; single node is vacuously connected
    reached = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in reached:
                    reached.add(v)
                    nxt.append(v)
        frontier = nxt
    if len(reached) != n_nodes:
        missing = sorted(set(range(n_nodes)) - reached)
        raise NotConnectedError(f"nodes {missing} unreachable from node 0")


def random_geometric_graph(n_nodes: int, radius: float, rng_seed: int,
                           max_retries: int = 1000) -> Graph:
    """Connected random geometric graph on the unit square.

    Nodes are placed uniformly at random; two nodes are joined iff their
    Euclidean distance is at most ``radius``. Placement is redrawn (from the
    same seeded stream) until the graph is connected, up to ``max_retries``
    attempts. Identical (n_nodes, radius, rng_seed) always yields an
    identical edge set.
    """
    if n_nodes < 1:
        raise ValueError(f"n_nodes must be >= 1, got {n_nodes}")
    if not radius > 0:
        raise ValueError(f"radius must be > 0, got {radius}")
    gen = np.random.default_rng(np.random.SeedSequence(rng_seed))
    for _ in range(max_retries):
        pos = gen.uniform(size=(n_nodes, 2))
        diff = pos[:, None, :] - pos[None, :, :]
        dist2 = (diff ** 2).sum(axis=-1)
        close = dist2 <= radius * radius
        edges = [(u, v) for u in range(n_nodes) for v in range(u + 1, n_nodes)
                 if close[u, v]]
        try:
            return build_graph(n_nodes, edges)
        except NotConnectedError:
            continue
    raise ConnectivityRetriesExhausted(
        f"no connected placement for n={n_nodes}, radius={radius} "
        f"after {max_retries} attempts")


def neighborhood(g: Graph, k: int) -> Neighborhood:
    """Sorted neighborhood of node ``k``, including ``k`` itself."""
    if not (0 <= k < g.n_nodes):
        raise IndexError(f"node {k} out of range for {g.n_nodes} nodes")
    return Neighborhood(node=k, members=g.members[k])


def degree(g: Graph, k: int) -> int:
    """Neighborhood size of node ``k``, counting the node itself."""
    if not (0 <= k < g.n_nodes):
        raise IndexError(f"node {k} out of range for {g.n_nodes} nodes")
    return len(g.members[k])


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list text format.

    First non-comment line is the node count N; every following line is one
    ``u v`` pair, whitespace-separated, 0-based. ``#`` starts a comment.
    """
    rows: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise ValueError("edge list file is empty")
    if len(rows[0]) != 1:
        raise ValueError(f"first line must be the node count, got {rows[0]!r}")
    try:
        n_nodes = int(rows[0][0])
    except ValueError:
        raise ValueError(f"invalid node count {rows[0][0]!r}") from None
    edges = []
    for row in rows[1:]:
        if len(row) != 2:
            raise ValueError(f"expected 'u v' pair, got {' '.join(row)!r}")
        try:
            edges.append((int(row[0]), int(row[1])))
        except ValueError:
            raise ValueError(f"non-integer edge entry in {' '.join(row)!r}") from None
    return build_graph(n_nodes, edges)


def load_edge_list(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def format_edge_list(g: Graph) -> str:
    lines = [str(g.n_nodes)]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def save_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g))

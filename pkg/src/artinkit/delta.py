"""Gromov four-point hyperbolicity constant of finite graphs.

The constant is ``max (S1 - S2) / 2`` over vertex quadruples, where
S1 >= S2 >= S3 are the three pair-sums of distances. Disconnected graphs are
handled per component. Cost is O(n^4); the search splits over the first
quadruple index and reduces with ``max``, so the result does not depend on
the number of workers.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

import numpy as np

from .graph import LabelledGraph

Adjacency = Mapping[Hashable, Iterable[Hashable]]


def as_adjacency(graph) -> dict:
    """Normalize a LabelledGraph, networkx graph or adjacency mapping."""
    if isinstance(graph, LabelledGraph):
        return {v: tuple(graph.neighbours(v)) for v in graph.vertices}
    if hasattr(graph, "adj") and hasattr(graph, "nodes"):
        return {v: tuple(graph.adj[v]) for v in graph.nodes}
    adj = {v: set(nb) for v, nb in graph.items()}
    for v, nb in list(adj.items()):
        for w in nb:
            adj.setdefault(w, set()).add(v)
    return {v: tuple(nb) for v, nb in adj.items()}


def bfs_distances(adj: Adjacency, source) -> dict:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def components(adj: Adjacency) -> list[list]:
    seen, out = set(), []
    for v in adj:
        if v not in seen:
            comp = list(bfs_distances(adj, v))
            seen.update(comp)
            out.append(comp)
    return out


def distance_matrix(adj: Adjacency, nodes: list) -> np.ndarray:
    pos = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    d = np.full((n, n), -1, dtype=np.int64)
    for v in nodes:
        for w, k in bfs_distances(adj, v).items():
            if w in pos:
                d[pos[v], pos[w]] = k
    return d


def _max_gap(d: np.ndarray, rows: range) -> int:
    """Twice the largest four-point gap over quadruples whose first index is in ``rows``."""
    best = 0
    for i in rows:
        # pair sums for (i,j | k,l), (i,k | j,l), (i,l | j,k) over all j, k, l
        s1 = d[i][:, None, None] + d[None, :, :]
        s2 = d[i][None, :, None] + d[:, None, :]
        s3 = d[i][None, None, :] + d[:, :, None]
        s = np.sort(np.stack((s1, s2, s3)), axis=0)
        gap = int((s[2] - s[1]).max())
        best = max(best, gap)
    return best


def _chunks(n: int, parts: int) -> list[range]:
    parts = max(1, min(parts, n))
    step = -(-n // parts)
    return [range(a, min(a + step, n)) for a in range(0, n, step)]


def four_point_delta(graph, jobs: int = 1) -> Fraction:
    """Exact four-point constant; 0 for empty graphs and graphs with < 4 vertices."""
    adj = as_adjacency(graph)
    best = 0
    for comp in components(adj):
        if len(comp) < 4:
            continue
        d = distance_matrix(adj, comp)
        ranges = _chunks(len(comp), jobs)
        if jobs > 1 and len(ranges) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                gaps = list(pool.map(_max_gap, [d] * len(ranges), ranges))
        else:
            gaps = [_max_gap(d, r) for r in ranges]
        best = max(best, *gaps)
    return Fraction(best, 2)


hyperbolicity_delta = four_point_delta


def diameter(adj: Adjacency, nodes=None) -> float:
    """Diameter of the subgraph induced on ``nodes``; inf when disconnected, 0 when empty."""
    if nodes is not None:
        keep = set(nodes)
        adj = {v: tuple(w for w in adj[v] if w in keep) for v in keep}
    best = 0
    for v in adj:
        dist = bfs_distances(adj, v)
        if len(dist) < len(adj):
            return float("inf")
        best = max(best, max(dist.values()))
    return best

"""Classical per-node centrality metrics on simple undirected graphs.

All four metrics return a :class:`~ctrlfeat.control.MetricVector` so they
can be mixed freely with average controllability downstream.
"""

from __future__ import annotations

import logging
from collections import deque

import numpy as np

from .control import BETWEENNESS, CLOSENESS, DEGREE, EIGENVECTOR, MetricVector
from .errors import DegenerateGraphError
from .graphs import Graph, adjacency, shortest_path_lengths

log = logging.getLogger(__name__)

# Relative gap under which the leading adjacency eigenvalue is reported as
# degenerate (eigenvector centrality is then basis-dependent).
_EIG_GAP_TOL = 1e-10


def degree_vector(g: Graph) -> MetricVector:
    """Plain degree of every node."""
    return MetricVector(kind=DEGREE, values=g.degrees())


def closeness_centrality(g: Graph) -> MetricVector:
    """Component-scaled closeness.

    For node ``v`` with reachable set ``R(v)`` (excluding ``v``) and distance
    sum ``s``, closeness is ``(|R| / (n-1)) * (|R| / s)``. On a connected
    graph this is the familiar ``(n-1) / s``; the extra factor discounts
    nodes in small components instead of rewarding them, and a node with no
    reachable peers scores 0.
    """
    if g.n == 1:
        return MetricVector(kind=CLOSENESS, values=np.zeros(1))
    d = shortest_path_lengths(g)
    finite = np.isfinite(d)
    np.fill_diagonal(finite, False)
    r = finite.sum(axis=1).astype(float)
    s = np.where(finite, d, 0.0).sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(r > 0, (r / (g.n - 1)) * (r / np.where(s > 0, s, 1.0)), 0.0)
    return MetricVector(kind=CLOSENESS, values=vals)


def betweenness_centrality(g: Graph) -> MetricVector:
    """Shortest-path betweenness via Brandes' accumulation.

    Counts, for every unordered pair of distinct endpoints, the fraction of
    shortest paths passing through each interior node. Endpoints are
    excluded and no normalisation is applied.
    """
    n = g.n
    adj = g.neighbors()
    bc = np.zeros(n)
    for s in range(n):
        dist = [-1] * n
        sigma = [0.0] * n
        preds: list[list[int]] = [[] for _ in range(n)]
        dist[s] = 0
        sigma[s] = 1.0
        order = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    # The source loop visits each unordered pair from both endpoints.
    bc *= 0.5
    return MetricVector(kind=BETWEENNESS, values=bc)


def eigenvector_centrality(g: Graph) -> MetricVector:
    """Leading adjacency eigenvector, L2-normalised.

    The sign is fixed so the entry of largest magnitude is positive; by
    Perron-Frobenius the vector is then non-negative on the dominant
    component. Undefined on an edgeless graph (the spectrum is all zeros),
    which raises :class:`DegenerateGraphError`.
    """
    if g.num_edges == 0:
        raise DegenerateGraphError(
            f"graph {g.id}: eigenvector centrality is undefined without edges"
        )
    lam, Q = np.linalg.eigh(adjacency(g))
    if g.n >= 2:
        gap = lam[-1] - lam[-2]
        if gap <= _EIG_GAP_TOL * max(1.0, abs(lam[-1])):
            log.info(
                "graph %d: leading adjacency eigenvalue %.6g is degenerate "
                "(gap %.3g); eigenvector centrality depends on basis choice",
                g.id, lam[-1], gap,
            )
    v = Q[:, -1]
    if v[np.abs(v).argmax()] < 0:
        v = -v
    v = v / np.linalg.norm(v)
    return MetricVector(kind=EIGENVECTOR, values=v)

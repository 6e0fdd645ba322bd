"""Independent oracles and corpus generators for the test suite.

Everything here is deliberately naive: breadth-first search over adjacency
lists, betweenness by enumerating entire shortest-path sets, Gramians from
the eigendecomposition applied to an arbitrary input matrix. None of it
shares code with the package beyond the Graph container.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from ctrlfeat import Graph, GraphDataset


def bfs_distances(n: int, edges, source: int) -> list[float]:
    """Unweighted single-source distances, ``inf`` where unreachable."""
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    dist = [float("inf")] * n
    dist[source] = 0.0
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if dist[w] == float("inf"):
                    dist[w] = dist[u] + 1.0
                    nxt.append(w)
        frontier = nxt
    return dist


def closeness_oracle(n: int, edges) -> np.ndarray:
    """Component-scaled closeness from raw BFS distances."""
    vals = np.zeros(n)
    if n < 2:
        return vals
    for v in range(n):
        dist = bfs_distances(n, edges, v)
        reach = [d for u, d in enumerate(dist) if u != v and d != float("inf")]
        if not reach:
            continue
        r = len(reach)
        vals[v] = (r / (n - 1)) * (r / sum(reach))
    return vals


def _all_shortest_paths(adj, s: int, t: int) -> list[tuple[int, ...]]:
    """Every shortest s-t path, found by exhaustive DFS over simple paths."""
    best_len = [float("inf")]
    found: list[tuple[int, ...]] = []

    def walk(path, seen):
        v = path[-1]
        if len(path) - 1 > best_len[0]:
            return
        if v == t:
            plen = len(path) - 1
            if plen < best_len[0]:
                best_len[0] = plen
                found.clear()
            if plen == best_len[0]:
                found.append(tuple(path))
            return
        for w in adj[v]:
            if w not in seen:
                path.append(w)
                seen.add(w)
                walk(path, seen)
                seen.discard(w)
                path.pop()

    walk([s], {s})
    return found


def betweenness_oracle(n: int, edges) -> np.ndarray:
    """Betweenness by full shortest-path enumeration; only viable for tiny n."""
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    bc = np.zeros(n)
    for s in range(n):
        for t in range(s + 1, n):
            paths = _all_shortest_paths(adj, s, t)
            if not paths:
                continue
            sigma = len(paths)
            for path in paths:
                for v in path[1:-1]:
                    bc[v] += 1.0 / sigma
    return bc


def gramian_oracle(A: np.ndarray, T: float, B: np.ndarray | None = None) -> np.ndarray:
    """Exact finite-horizon Gramian for symmetric A and arbitrary B.

    In the eigenbasis the integrand decouples entry-wise:
    W~_{ij} = (B~ B~^T)_{ij} * (1 - e^{-(l_i + l_j) T}) / (l_i + l_j),
    with the limit T when l_i + l_j = 0.
    """
    lam, Q = np.linalg.eigh(A)
    if B is None:
        B = np.eye(A.shape[0])
    Bt = Q.T @ B
    S = lam[:, None] + lam[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        psi = np.where(S != 0.0, -np.expm1(-S * T) / np.where(S != 0.0, S, 1.0), T)
    core = (Bt @ Bt.T) * psi
    return Q @ core @ Q.T


def permuted_graph(g: Graph, perm) -> Graph:
    """Relabel nodes by ``perm`` (node i becomes perm[i])."""
    return Graph(
        id=g.id,
        n=g.n,
        edges=tuple((int(perm[u]), int(perm[v])) for u, v in g.edges),
    )


def random_graph(rng: np.random.Generator, n: int, p: float, gid: int = 0) -> Graph:
    """Erdos-Renyi draw; guarantees at least one edge when n >= 2."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    if not edges and n >= 2:
        u, v = sorted(rng.choice(n, size=2, replace=False).tolist())
        edges = [(u, v)]
    return Graph(id=gid, n=n, edges=tuple(edges))


def random_dataset(
    rng: np.random.Generator,
    count: int,
    n_range: tuple[int, int],
    p_range: tuple[float, float],
    name: str = "synthetic",
) -> GraphDataset:
    graphs = []
    labels = {}
    for gid in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        p = float(rng.uniform(*p_range))
        graphs.append(random_graph(rng, n, p, gid=gid))
        labels[gid] = int(rng.integers(0, 2))
    return GraphDataset(name=name, graphs=tuple(graphs), labels=labels)


def all_permutations(n: int):
    return list(permutations(range(n)))

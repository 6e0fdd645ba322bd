"""Graph data model, dataset ingestion and per-dataset statistics.

Graphs are simple and undirected with dense node ids ``0..n-1``. Datasets
pair each graph with a non-negative integer class label and round-trip
through a line-oriented JSON format whose first line carries versioned
metadata.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import IngestError, IntegrityError

log = logging.getLogger(__name__)

DATASET_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph.

    Edges are stored canonically: each pair ordered ``u < v``, the whole
    tuple sorted. Any iterable of pairs is accepted and normalised; self
    loops, duplicates and out-of-range endpoints are rejected.
    """

    id: int
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.id < 0:
            raise IntegrityError(f"graph id must be non-negative, got {self.id}")
        if self.n < 1:
            raise IntegrityError(f"graph {self.id}: node count must be >= 1, got {self.n}")
        seen = set()
        canon = []
        for pair in self.edges:
            try:
                u, v = pair
            except (TypeError, ValueError):
                raise IntegrityError(f"graph {self.id}: edge {pair!r} is not a pair") from None
            if not (isinstance(u, int) and isinstance(v, int)):
                raise IntegrityError(f"graph {self.id}: edge ({u!r}, {v!r}) has non-integer endpoint")
            if u == v:
                raise IntegrityError(f"graph {self.id}: self loop at node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise IntegrityError(
                    f"graph {self.id}: edge ({u}, {v}) outside node range 0..{self.n - 1}"
                )
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise IntegrityError(f"graph {self.id}: duplicate edge ({u}, {v})")
            seen.add((u, v))
            canon.append((u, v))
        canon.sort()
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        """Degree of every node as a float vector."""
        deg = np.zeros(self.n)
        for u, v in self.edges:
            deg[u] += 1.0
            deg[v] += 1.0
        return deg

    def neighbors(self) -> list[list[int]]:
        """Adjacency lists, each sorted ascending."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for lst in adj:
            lst.sort()
        return adj

    def density(self) -> float:
        """Edge density 2m / (n (n-1)); zero for a single node."""
        if self.n < 2:
            return 0.0
        return 2.0 * self.num_edges / (self.n * (self.n - 1))


def adjacency(g: Graph) -> np.ndarray:
    """Dense symmetric 0/1 adjacency matrix with zero diagonal."""
    a = np.zeros((g.n, g.n))
    for u, v in g.edges:
        a[u, v] = 1.0
        a[v, u] = 1.0
    return a


def shortest_path_lengths(g: Graph) -> np.ndarray:
    """All-pairs unweighted distances, ``inf`` where unreachable."""
    if g.num_edges == 0:
        d = np.full((g.n, g.n), np.inf)
        np.fill_diagonal(d, 0.0)
        return d
    rows = [u for u, v in g.edges] + [v for u, v in g.edges]
    cols = [v for u, v in g.edges] + [u for u, v in g.edges]
    m = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.n))
    return shortest_path(m, method="D", directed=False, unweighted=True)


def graph_diameter(g: Graph) -> int:
    """Longest finite shortest path.

    Disconnected graphs take the maximum over components, so isolated
    nodes and edgeless graphs give 0.
    """
    d = shortest_path_lengths(g)
    finite = d[np.isfinite(d)]
    return int(finite.max())


@dataclass(frozen=True)
class GraphDataset:
    """An ordered collection of graphs with one integer label each."""

    name: str
    graphs: tuple[Graph, ...]
    labels: dict[int, int]

    def __post_init__(self):
        object.__setattr__(self, "graphs", tuple(self.graphs))
        ids = [g.id for g in self.graphs]
        if any(b <= a for a, b in zip(ids, ids[1:])):
            raise IntegrityError(f"dataset {self.name}: graph ids must be strictly ascending")
        if set(self.labels) != set(ids):
            raise IntegrityError(f"dataset {self.name}: labels must cover exactly the graph ids")
        for gid, lab in self.labels.items():
            if not isinstance(lab, int) or lab < 0:
                raise IntegrityError(f"dataset {self.name}: graph {gid} has invalid label {lab!r}")

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self):
        return iter(self.graphs)


@dataclass
class IngestDiagnostics:
    """Counts of repairs applied while reading raw input files."""

    self_loops_stripped: int = 0
    duplicate_edges_stripped: int = 0
    graphs_remapped: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "self_loops_stripped": self.self_loops_stripped,
            "duplicate_edges_stripped": self.duplicate_edges_stripped,
            "graphs_remapped": self.graphs_remapped,
        }


def _clean_edges(gid: int, raw_edges, diag: IngestDiagnostics) -> list[tuple[int, int]]:
    if not isinstance(raw_edges, list):
        raise IngestError(f"graph {gid}: edge list must be a JSON array")
    pairs = []
    for item in raw_edges:
        if not (isinstance(item, list) and len(item) == 2):
            raise IngestError(f"graph {gid}: edge entry {item!r} is not a pair")
        u, v = item
        if not (isinstance(u, int) and isinstance(v, int)) or isinstance(u, bool) or isinstance(v, bool):
            raise IngestError(f"graph {gid}: edge entry {item!r} has non-integer endpoint")
        if u < 0 or v < 0:
            raise IngestError(f"graph {gid}: negative node id in edge {item!r}")
        if u == v:
            diag.self_loops_stripped += 1
            continue
        pairs.append((min(u, v), max(u, v)))
    unique = sorted(set(pairs))
    diag.duplicate_edges_stripped += len(pairs) - len(unique)
    return unique


def ingest_dataset(
    edges_path: str | Path,
    labels_path: str | Path,
    name: str,
    diagnostics: IngestDiagnostics | None = None,
) -> GraphDataset:
    """Read a raw edge-dictionary JSON file plus a label CSV into a dataset.

    The edge file maps graph ids (as strings) to edge lists. Self loops and
    duplicate edges are stripped with a counted diagnostic, never an error.
    Graphs whose node ids are not the dense range ``0..n-1`` are remapped by
    ascending original id. The label CSV needs ``id`` and ``target`` columns;
    missing or surplus labels are integrity errors.
    """
    diag = diagnostics if diagnostics is not None else IngestDiagnostics()
    edges_path = Path(edges_path)
    labels_path = Path(labels_path)

    try:
        raw = json.loads(edges_path.read_text(encoding="utf-8"))
    except OSError as e:
        raise IngestError(f"cannot read {edges_path}: {e}") from e
    except json.JSONDecodeError as e:
        raise IngestError(f"{edges_path}: malformed JSON at line {e.lineno}: {e.msg}") from e
    if not isinstance(raw, dict):
        raise IngestError(f"{edges_path}: top level must be an object keyed by graph id")

    graphs = []
    for key, raw_edges in raw.items():
        try:
            gid = int(key)
        except ValueError:
            raise IngestError(f"{edges_path}: graph key {key!r} is not an integer") from None
        if gid < 0:
            raise IngestError(f"{edges_path}: graph key {key!r} is negative")
        pairs = _clean_edges(gid, raw_edges, diag)
        node_ids = sorted({u for e in pairs for u in e})
        if not node_ids:
            raise IntegrityError(f"graph {gid}: no edges and no nodes after cleaning")
        if node_ids != list(range(len(node_ids))):
            remap = {old: new for new, old in enumerate(node_ids)}
            pairs = [(remap[u], remap[v]) for u, v in pairs]
            diag.graphs_remapped += 1
            log.debug("graph %d: remapped %d sparse node ids to 0..%d", gid, len(node_ids), len(node_ids) - 1)
        graphs.append(Graph(id=gid, n=len(node_ids), edges=tuple(pairs)))
    graphs.sort(key=lambda g: g.id)

    labels: dict[int, int] = {}
    try:
        with open(labels_path, encoding="utf-8", newline="") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames is None or "id" not in reader.fieldnames or "target" not in reader.fieldnames:
                raise IngestError(f"{labels_path}: header must contain 'id' and 'target' columns")
            for lineno, row in enumerate(reader, start=2):
                try:
                    gid = int(row["id"])
                    lab = int(row["target"])
                except (TypeError, ValueError):
                    raise IngestError(f"{labels_path}: line {lineno}: non-integer id or target") from None
                if gid in labels:
                    raise IntegrityError(f"{labels_path}: duplicate label for graph {gid}")
                labels[gid] = lab
    except OSError as e:
        raise IngestError(f"cannot read {labels_path}: {e}") from e

    ids = {g.id for g in graphs}
    missing = sorted(ids - set(labels))
    if missing:
        raise IntegrityError(f"dataset {name}: graphs without labels: {missing[:10]}")
    surplus = sorted(set(labels) - ids)
    if surplus:
        raise IntegrityError(f"dataset {name}: labels for unknown graphs: {surplus[:10]}")

    if diag.self_loops_stripped or diag.duplicate_edges_stripped or diag.graphs_remapped:
        log.info(
            "ingest %s: stripped %d self loops, %d duplicate edges; remapped %d graphs",
            name, diag.self_loops_stripped, diag.duplicate_edges_stripped, diag.graphs_remapped,
        )
    return GraphDataset(name=name, graphs=tuple(graphs), labels=labels)


def save_dataset(ds: GraphDataset, path: str | Path) -> None:
    """Write the canonical line-oriented JSON form (meta line, then one graph per line)."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        meta = {"meta": {"format_version": DATASET_FORMAT_VERSION, "name": ds.name}}
        f.write(json.dumps(meta, separators=(",", ":")) + "\n")
        for g in ds.graphs:
            rec = {
                "id": g.id,
                "n": g.n,
                "edges": [[u, v] for u, v in g.edges],
                "label": ds.labels[g.id],
            }
            f.write(json.dumps(rec, separators=(",", ":")) + "\n")


def load_dataset(path: str | Path) -> GraphDataset:
    """Read a dataset previously written by :func:`save_dataset`."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise IngestError(f"cannot read {path}: {e}") from e
    if not lines:
        raise IngestError(f"{path}: empty file, expected a meta line")

    def parse(lineno: int, text: str) -> dict:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise IngestError(f"{path}: line {lineno}: malformed JSON: {e.msg}") from e
        if not isinstance(obj, dict):
            raise IngestError(f"{path}: line {lineno}: expected a JSON object")
        return obj

    head = parse(1, lines[0])
    meta = head.get("meta")
    if not isinstance(meta, dict):
        raise IngestError(f"{path}: first line must carry a 'meta' object")
    if meta.get("format_version") != DATASET_FORMAT_VERSION:
        raise IngestError(
            f"{path}: unsupported format_version {meta.get('format_version')!r}, "
            f"expected {DATASET_FORMAT_VERSION}"
        )
    name = meta.get("name")
    if not isinstance(name, str) or not name:
        raise IngestError(f"{path}: meta line is missing a dataset name")

    graphs = []
    labels: dict[int, int] = {}
    for lineno, text in enumerate(lines[1:], start=2):
        if not text.strip():
            continue
        rec = parse(lineno, text)
        for key in ("id", "n", "edges", "label"):
            if key not in rec:
                raise IngestError(f"{path}: line {lineno}: record is missing '{key}'")
        if not isinstance(rec["id"], int) or not isinstance(rec["n"], int) or not isinstance(rec["label"], int):
            raise IngestError(f"{path}: line {lineno}: id, n and label must be integers")
        edges = rec["edges"]
        if not isinstance(edges, list):
            raise IngestError(f"{path}: line {lineno}: 'edges' must be an array")
        g = Graph(id=rec["id"], n=rec["n"], edges=tuple(tuple(e) for e in edges))
        graphs.append(g)
        labels[g.id] = rec["label"]
    return GraphDataset(name=name, graphs=tuple(graphs), labels=labels)


@dataclass(frozen=True)
class DatasetStats:
    """Summary statistics over the graphs of one dataset.

    The median is the lower middle element of the sorted node counts, so it
    is always a count that actually occurs.
    """

    name: str
    graph_count: int
    node_min: int
    node_max: int
    node_mean: float
    node_median: int
    density_min: float
    density_max: float
    diameter_min: int
    diameter_max: int
    class_count: int


def dataset_stats(ds: GraphDataset) -> DatasetStats:
    """Compute node-count, density, diameter and class statistics."""
    if len(ds) == 0:
        raise IntegrityError(f"dataset {ds.name}: cannot summarise an empty dataset")
    counts = sorted(g.n for g in ds.graphs)
    densities = [g.density() for g in ds.graphs]
    diameters = [graph_diameter(g) for g in ds.graphs]
    return DatasetStats(
        name=ds.name,
        graph_count=len(ds),
        node_min=counts[0],
        node_max=counts[-1],
        node_mean=float(np.mean(counts)),
        node_median=counts[(len(counts) - 1) // 2],
        density_min=min(densities),
        density_max=max(densities),
        diameter_min=min(diameters),
        diameter_max=max(diameters),
        class_count=len(set(ds.labels.values())),
    )

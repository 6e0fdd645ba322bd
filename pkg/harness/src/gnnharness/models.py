"""Model zoo: six message-passing layers behind one interface, plus the
sort-pooling readout and convolutional classifier head.

Graphs are batched block-diagonally: node features are concatenated and the
edge index carries both directions of every undirected edge with per-graph
offsets applied.  Every layer has the signature
``forward(x, edge_index, num_nodes) -> (num_nodes, out_dim)``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import torch
from torch import nn

from .errors import ContractError

ARCH_GRAPHCONV = "graphconv"
ARCH_GRAPHSAGE = "graphsage"
ARCH_GCN = "gcn"
ARCH_UNIMP = "unimp"
ARCH_RESGATEDGCN = "resgatedgcn"
ARCH_GAT = "gat"


class Batch(NamedTuple):
    """A block-diagonal batch of graphs."""

    x: torch.Tensor  # (N, dim) float32
    edge_index: torch.Tensor  # (2, 2E) long, row 0 source, row 1 target
    node_graph: torch.Tensor  # (N,) long, graph index per node
    y: torch.Tensor  # (B,) float32 labels
    num_graphs: int

    def to(self, device) -> "Batch":
        return Batch(
            self.x.to(device),
            self.edge_index.to(device),
            self.node_graph.to(device),
            self.y.to(device),
            self.num_graphs,
        )


def make_batch(records) -> Batch:
    """Stack graph records into one batch on the CPU."""
    xs = []
    srcs = []
    tgts = []
    node_graph = []
    labels = []
    offset = 0
    for gi, rec in enumerate(records):
        xs.append(torch.from_numpy(rec.x))
        for u, v in rec.edges:
            srcs.extend((u + offset, v + offset))
            tgts.extend((v + offset, u + offset))
        node_graph.extend([gi] * rec.n)
        labels.append(float(rec.label))
        offset += rec.n
    edge_index = torch.tensor([srcs, tgts], dtype=torch.long)
    if edge_index.numel() == 0:
        edge_index = edge_index.reshape(2, 0)
    return Batch(
        x=torch.cat(xs, dim=0),
        edge_index=edge_index,
        node_graph=torch.tensor(node_graph, dtype=torch.long),
        y=torch.tensor(labels, dtype=torch.float32),
        num_graphs=len(records),
    )


def _sum_neighbors(values: torch.Tensor, edge_index: torch.Tensor, num_nodes: int) -> torch.Tensor:
    """Sum ``values[source]`` into each target node."""
    out = values.new_zeros(num_nodes, values.size(1))
    return out.index_add_(0, edge_index[1], values[edge_index[0]])


def _degrees(edge_index: torch.Tensor, num_nodes: int, dtype, device) -> torch.Tensor:
    deg = torch.zeros(num_nodes, dtype=dtype, device=device)
    return deg.index_add_(0, edge_index[1], torch.ones(edge_index.size(1), dtype=dtype, device=device))


def _segment_softmax(scores: torch.Tensor, index: torch.Tensor, num_nodes: int) -> torch.Tensor:
    """Softmax of edge scores grouped by target node.

    Nodes that never appear as a target contribute no edges, so the -inf
    placeholder in the running maximum is never gathered back.
    """
    maxes = scores.new_full((num_nodes,), float("-inf"))
    maxes = maxes.scatter_reduce(0, index, scores, reduce="amax", include_self=True)
    ex = torch.exp(scores - maxes[index])
    denom = scores.new_zeros(num_nodes).index_add_(0, index, ex)
    return ex / denom[index]


class GraphConvLayer(nn.Module):
    """x'_i = W1 x_i + W2 sum_{j in N(i)} x_j  (sum aggregation)."""

    def __init__(self, in_dim: int, out_dim: int):
        super().__init__()
        self.lin_root = nn.Linear(in_dim, out_dim)
        self.lin_nbr = nn.Linear(in_dim, out_dim, bias=False)

    def forward(self, x, edge_index, num_nodes):
        agg = _sum_neighbors(x, edge_index, num_nodes)
        return self.lin_root(x) + self.lin_nbr(agg)


class SAGEConvLayer(nn.Module):
    """x'_i = W1 x_i + W2 mean_{j in N(i)} x_j; isolated nodes keep the root term only."""

    def __init__(self, in_dim: int, out_dim: int):
        super().__init__()
        self.lin_root = nn.Linear(in_dim, out_dim)
        self.lin_nbr = nn.Linear(in_dim, out_dim, bias=False)

    def forward(self, x, edge_index, num_nodes):
        agg = _sum_neighbors(x, edge_index, num_nodes)
        deg = _degrees(edge_index, num_nodes, x.dtype, x.device)
        mean = agg / deg.clamp(min=1.0).unsqueeze(1)
        return self.lin_root(x) + self.lin_nbr(mean)


class GCNConvLayer(nn.Module):
    """Symmetric-normalised propagation with self-loops.

    x' = D^{-1/2} (A + I) D^{-1/2} x W + b with D the self-looped degrees.
    """

    def __init__(self, in_dim: int, out_dim: int):
        super().__init__()
        self.lin = nn.Linear(in_dim, out_dim, bias=False)
        self.bias = nn.Parameter(torch.zeros(out_dim))

    def forward(self, x, edge_index, num_nodes):
        h = self.lin(x)
        deg_hat = _degrees(edge_index, num_nodes, x.dtype, x.device) + 1.0
        inv_sqrt = deg_hat.rsqrt()
        coeff = inv_sqrt[edge_index[0]] * inv_sqrt[edge_index[1]]
        out = h * (1.0 / deg_hat).unsqueeze(1)  # self-loop term
        out = out.index_add_(0, edge_index[1], h[edge_index[0]] * coeff.unsqueeze(1))
        return out + self.bias


class TransformerConvLayer(nn.Module):
    """Single-head dot-product attention over neighbors with a root skip."""

    def __init__(self, in_dim: int, out_dim: int):
        super().__init__()
        self.lin_query = nn.Linear(in_dim, out_dim, bias=False)
        self.lin_key = nn.Linear(in_dim, out_dim, bias=False)
        self.lin_value = nn.Linear(in_dim, out_dim, bias=False)
        self.lin_skip = nn.Linear(in_dim, out_dim)
        self.scale = 1.0 / math.sqrt(out_dim)

    def forward(self, x, edge_index, num_nodes):
        src, tgt = edge_index[0], edge_index[1]
        q = self.lin_query(x)
        k = self.lin_key(x)
        v = self.lin_value(x)
        scores = (q[tgt] * k[src]).sum(dim=1) * self.scale
        alpha = _segment_softmax(scores, tgt, num_nodes)
        out = x.new_zeros(num_nodes, v.size(1))
        out = out.index_add_(0, tgt, v[src] * alpha.unsqueeze(1))
        return self.lin_skip(x) + out


class ResGatedConvLayer(nn.Module):
    """Gated residual convolution: x'_i = W1 x_i + sum_j eta_ij * W2 x_j,
    eta_ij = sigmoid(W3 x_i + W4 x_j)."""

    def __init__(self, in_dim: int, out_dim: int):
        super().__init__()
        self.lin_root = nn.Linear(in_dim, out_dim)
        self.lin_value = nn.Linear(in_dim, out_dim, bias=False)
        self.lin_gate_tgt = nn.Linear(in_dim, out_dim, bias=False)
        self.lin_gate_src = nn.Linear(in_dim, out_dim, bias=False)

    def forward(self, x, edge_index, num_nodes):
        src, tgt = edge_index[0], edge_index[1]
        eta = torch.sigmoid(self.lin_gate_tgt(x)[tgt] + self.lin_gate_src(x)[src])
        out = x.new_zeros(num_nodes, eta.size(1))
        out = out.index_add_(0, tgt, eta * self.lin_value(x)[src])
        return self.lin_root(x) + out


class GATConvLayer(nn.Module):
    """Single-head additive attention over N(i) plus a self-loop."""

    def __init__(self, in_dim: int, out_dim: int):
        super().__init__()
        self.lin = nn.Linear(in_dim, out_dim, bias=False)
        self.att_src = nn.Parameter(torch.empty(out_dim))
        self.att_tgt = nn.Parameter(torch.empty(out_dim))
        self.bias = nn.Parameter(torch.zeros(out_dim))
        bound = 1.0 / math.sqrt(out_dim)
        nn.init.uniform_(self.att_src, -bound, bound)
        nn.init.uniform_(self.att_tgt, -bound, bound)

    def forward(self, x, edge_index, num_nodes):
        loops = torch.arange(num_nodes, device=x.device)
        src = torch.cat([edge_index[0], loops])
        tgt = torch.cat([edge_index[1], loops])
        h = self.lin(x)
        scores = torch.nn.functional.leaky_relu(
            (h * self.att_src).sum(dim=1)[src] + (h * self.att_tgt).sum(dim=1)[tgt],
            negative_slope=0.2,
        )
        alpha = _segment_softmax(scores, tgt, num_nodes)
        out = x.new_zeros(num_nodes, h.size(1))
        out = out.index_add_(0, tgt, h[src] * alpha.unsqueeze(1))
        return out + self.bias


ARCHITECTURES = {
    ARCH_GRAPHCONV: GraphConvLayer,
    ARCH_GRAPHSAGE: SAGEConvLayer,
    ARCH_GCN: GCNConvLayer,
    ARCH_UNIMP: TransformerConvLayer,
    ARCH_RESGATEDGCN: ResGatedConvLayer,
    ARCH_GAT: GATConvLayer,
}


class SortAggregation(nn.Module):
    """Sort node embeddings within each graph by their last channel
    (descending) and keep the first k rows, zero-padding short graphs."""

    def __init__(self, k: int):
        super().__init__()
        if k < 1:
            raise ContractError("sort aggregation length must be >= 1")
        self.k = k

    def forward(self, h, node_graph, num_graphs):
        order = torch.argsort(h[:, -1], descending=True, stable=True)
        order = order[torch.argsort(node_graph[order], stable=True)]
        h = h[order]
        graph = node_graph[order]
        counts = torch.bincount(node_graph, minlength=num_graphs)
        starts = torch.cumsum(counts, dim=0) - counts
        pos = torch.arange(h.size(0), device=h.device) - starts[graph]
        keep = pos < self.k
        out = h.new_zeros(num_graphs, self.k, h.size(1))
        out[graph[keep], pos[keep]] = h[keep]
        return out.reshape(num_graphs, self.k * h.size(1))


class GraphClassifier(nn.Module):
    """Stack of identical conv layers, sort-pooling readout, then two 1D
    convolutions with max pooling and an MLP producing one logit per graph.

    The readout length must satisfy k_sort // 2 - 4 >= 1 so the second
    convolution has a non-empty input.
    """

    def __init__(
        self,
        arch: str,
        in_dim: int,
        hidden: int = 64,
        layers: int = 3,
        k_sort: int = 30,
        mlp_hidden: int = 32,
        mlp_layers: int = 2,
    ):
        super().__init__()
        if arch not in ARCHITECTURES:
            raise ContractError(f"unknown architecture {arch!r}")
        if layers < 1:
            raise ContractError("need at least one conv layer")
        if k_sort // 2 - 4 < 1:
            raise ContractError(f"k_sort={k_sort} too small for the conv head (need >= 10)")
        layer_cls = ARCHITECTURES[arch]
        dims = [in_dim] + [hidden] * layers
        self.convs = nn.ModuleList(layer_cls(dims[i], dims[i + 1]) for i in range(layers))
        self.readout = SortAggregation(k_sort)
        self.conv1 = nn.Conv1d(1, 16, kernel_size=hidden, stride=hidden)
        self.pool = nn.MaxPool1d(2, 2)
        self.conv2 = nn.Conv1d(16, 32, kernel_size=5)
        flat = 32 * (k_sort // 2 - 4)
        mlp_dims = [flat] + [mlp_hidden] * mlp_layers
        self.mlp = nn.ModuleList(
            nn.Linear(mlp_dims[i], mlp_dims[i + 1]) for i in range(mlp_layers)
        )
        self.out = nn.Linear(mlp_dims[-1], 1)

    def forward(self, batch: Batch) -> torch.Tensor:
        x = batch.x
        n = x.size(0)
        for conv in self.convs:
            x = torch.tanh(conv(x, batch.edge_index, n))
        z = self.readout(x, batch.node_graph, batch.num_graphs)
        z = z.unsqueeze(1)
        z = torch.relu(self.conv1(z))
        z = self.pool(z)
        z = torch.relu(self.conv2(z))
        z = z.flatten(1)
        for lin in self.mlp:
            z = torch.relu(lin(z))
        return self.out(z).squeeze(-1)


def build_model(arch: str, in_dim: int, **kwargs) -> GraphClassifier:
    return GraphClassifier(arch, in_dim, **kwargs)

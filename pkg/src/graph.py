"""
Graph: finite simple connected graph with paired arcs.

Edge k = (u, v) of the input list yields arc 2k = (u, v) and its inverse
arc 2k + 1 = (v, u), so inv(e) = e ^ 1.
"""

import json
import logging
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np

from src.errors import GraphError, OverflowCountError

logger = logging.getLogger(__name__)

INT64_MAX = int(np.iinfo(np.int64).max)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple
    arcs: tuple
    degrees: tuple

    @property
    def m(self):
        return len(self.edges)

    @property
    def arc_count(self):
        return len(self.arcs)

    @staticmethod
    def inv(e):
        return e ^ 1

    def origin(self, e):
        return self.arcs[e][0]

    def terminal(self, e):
        return self.arcs[e][1]

    @property
    def is_md2(self):
        return min(self.degrees) >= 2

    @cached_property
    def origins(self):
        return np.array([a[0] for a in self.arcs], dtype=np.int64)

    @cached_property
    def terminals(self):
        return np.array([a[1] for a in self.arcs], dtype=np.int64)

    def to_networkx(self):
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.edges)
        return G

    def to_dict(self):
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        try:
            n = data["n"]
            edges = data["edges"]
        except (KeyError, TypeError):
            raise GraphError("Graph JSON needs keys 'n' and 'edges'", reason="schema")
        return build_graph(edges, n)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise GraphError(f"Invalid graph JSON: {e}", reason="parse")
        return cls.from_dict(data)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class CycleCountSeries:
    """counts[m - 1] is N_m, the number of reduced closed paths of length m"""

    counts: tuple

    def __getitem__(self, m):
        if m < 1 or m > len(self.counts):
            raise IndexError(f"cycle length {m} outside 1..{len(self.counts)}")
        return self.counts[m - 1]

    def __len__(self):
        return len(self.counts)

    def to_list(self):
        return list(self.counts)


def build_graph(edges, n):
    """Validate an edge list and return the arc-paired Graph"""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise GraphError(f"Vertex count must be a positive integer, got {n!r}",
                         reason="vertex-count", details={"n": n})
    n = int(n)
    if isinstance(edges, (str, bytes, dict)):
        raise GraphError(f"Edges must be a list of vertex pairs, got {type(edges).__name__}",
                         reason="schema")
    try:
        edges = list(edges)
    except TypeError:
        raise GraphError(f"Edges must be a list of vertex pairs, got {type(edges).__name__}",
                         reason="schema")

    seen = set()
    clean_edges = []
    for k, pair in enumerate(edges):
        try:
            u, v = (int(x) for x in pair)
        except (TypeError, ValueError):
            raise GraphError(f"Edge {k} is not a vertex pair: {pair!r}",
                             reason="schema", details={"edge": k})
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"Edge {k} = ({u}, {v}) has a vertex outside [0, {n})",
                             reason="vertex-id", details={"edge": [u, v]})
        if u == v:
            raise GraphError(f"Edge {k} = ({u}, {v}) is a loop",
                             reason="loop", details={"edge": [u, v]})
        key = frozenset((u, v))
        if key in seen:
            raise GraphError(f"Edge {k} = ({u}, {v}) duplicates an earlier edge",
                             reason="duplicate", details={"edge": [u, v]})
        seen.add(key)
        clean_edges.append((u, v))

    if not clean_edges:
        raise GraphError("Graph has no edges, so its arc space is empty",
                         reason="empty", details={"n": n})

    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from(clean_edges)
    if not nx.is_connected(G):
        components = nx.number_connected_components(G)
        raise GraphError(f"Graph is disconnected ({components} components)",
                         reason="disconnected", details={"components": components})

    arcs = []
    for u, v in clean_edges:
        arcs.append((u, v))
        arcs.append((v, u))

    degrees = [0] * n
    for u, _ in arcs:
        degrees[u] += 1

    graph = Graph(n=n, edges=tuple(clean_edges), arcs=tuple(arcs), degrees=tuple(degrees))
    if not graph.is_md2:
        logger.debug("%r has a vertex of degree 1 (not md2)", graph)
    return graph


def adjacency_matrix(g):
    A = np.zeros((g.n, g.n), dtype=np.float64)
    A[g.origins, g.terminals] = 1.0
    return A


def degree_matrix(g):
    return np.diag(np.asarray(g.degrees, dtype=np.float64))


def transition_matrix(g):
    """T_uv = 1/deg u on arcs (u, v): the simple random walk"""
    deg = np.asarray(g.degrees, dtype=np.float64)
    return adjacency_matrix(g) / deg[:, None]


def betti_number(g):
    return g.m - g.n + 1


def non_backtracking_matrix(g):
    """
    Integer arc-to-arc matrix W with W[e, f] = 1 iff t(e) = o(f) and f != e^{-1}.
    """
    follows = g.terminals[:, None] == g.origins[None, :]
    W = follows.astype(np.int64)
    idx = np.arange(g.arc_count)
    W[idx, idx ^ 1] = 0
    return W


def reduced_cycle_counts(g, L):
    """
    N_m = trace(W^m) for m = 1..L in exact int64 arithmetic.
    Raises OverflowCountError when a power would leave the int64 range.
    """
    if L < 1:
        raise GraphError(f"Series length must be >= 1, got {L}", reason="series-length")

    W = non_backtracking_matrix(g)
    column_bound = int(W.sum(axis=0).max()) if W.size else 0

    counts = []
    P = np.eye(g.arc_count, dtype=np.int64)
    for m in range(1, L + 1):
        if int(np.abs(P).max()) * max(column_bound, 1) > INT64_MAX:
            raise OverflowCountError(
                f"Non-backtracking counts overflow int64 at length {m}",
                details={"length": m})
        P = P @ W
        counts.append(sum(int(x) for x in np.diagonal(P)))
    return CycleCountSeries(counts=tuple(counts))

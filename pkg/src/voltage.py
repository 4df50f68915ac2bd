"""
VoltageGraph: a finite quotient multigraph with Z^d voltages on its arcs,
describing a periodic graph with a free Z^d action.

Edge k = (u, v, z) yields arc 2k = (u -> v, z) and arc 2k + 1 = (v -> u, -z).
Cover arc (e, k) runs from (o(e), k) to (t(e), k + z(e)).

Bloch convention: a cover vector is f(v, k) = f_v * exp(-i theta.k), which gives
    A(theta)[u, v]   = sum over arcs e: v -> u of exp(i theta.z(e))
    S(theta)[e, e^-1] = exp(-i theta.z(e))
    d(theta)[v, e]   = [v = t(e)] exp(i theta.z(e)) / sqrt(deg v)
and d(theta) S(theta) d(theta)* = D^-1/2 A(theta) D^-1/2.
"""

import itertools
import json
import logging
import math
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np
import sympy

from src.errors import VoltageError
from src.graph import build_graph
from src.operators import CoinParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VoltageGraph:
    dim: int
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

    @cached_property
    def origins(self):
        return np.array([a[0] for a in self.arcs], dtype=np.int64)

    @cached_property
    def terminals(self):
        return np.array([a[1] for a in self.arcs], dtype=np.int64)

    @cached_property
    def voltages(self):
        """(2m, dim) integer array"""
        return np.array([a[2] for a in self.arcs], dtype=np.int64).reshape(self.arc_count, self.dim)

    def to_dict(self):
        return {
            "dim": self.dim,
            "n": self.n,
            "edges": [{"u": u, "v": v, "z": list(z)} for u, v, z in self.edges],
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        try:
            dim = data["dim"]
            n = data["n"]
            edges = [(e["u"], e["v"], e["z"]) for e in data["edges"]]
        except (KeyError, TypeError):
            raise VoltageError("Voltage JSON needs 'dim', 'n' and edges with 'u', 'v', 'z'",
                               reason="schema")
        return build_voltage_graph(edges, n, dim)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise VoltageError(f"Invalid voltage graph JSON: {e}", reason="parse")
        return cls.from_dict(data)

    def __repr__(self):
        return f"VoltageGraph(dim={self.dim}, n={self.n}, m={self.m})"


@dataclass(frozen=True)
class FiberBundle:
    A: np.ndarray
    D: np.ndarray
    dSd: np.ndarray


@dataclass(frozen=True)
class ArcFiber:
    S: np.ndarray
    d: np.ndarray
    C: np.ndarray
    U: np.ndarray


def build_voltage_graph(edges, n, dim):
    """Validate a voltage edge list; the Z^d cover must be simple and connected"""
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise VoltageError(f"Lattice dimension must be a positive integer, got {dim!r}",
                           reason="dimension")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise VoltageError(f"Quotient vertex count must be a positive integer, got {n!r}",
                           reason="vertex-count")

    if isinstance(edges, (str, bytes, dict)):
        raise VoltageError("Voltage edges must be a list of (u, v, z) records", reason="schema")
    try:
        edges = list(edges)
    except TypeError:
        raise VoltageError("Voltage edges must be a list of (u, v, z) records", reason="schema")

    clean_edges = []
    for k, edge in enumerate(edges):
        try:
            u, v, z = edge
            u, v = int(u), int(v)
            z = tuple(int(x) for x in z)
        except (TypeError, ValueError):
            raise VoltageError(f"Edge {k} is not a (u, v, z) record with integer entries: {edge!r}",
                               reason="schema", details={"edge": k})
        if not (0 <= u < n and 0 <= v < n):
            raise VoltageError(f"Edge {k} = ({u}, {v}) has a vertex outside [0, {n})",
                               reason="vertex-id", details={"edge": k})
        if len(z) != dim:
            raise VoltageError(f"Edge {k} voltage {list(z)} does not have length {dim}",
                               reason="voltage-length", details={"edge": k})
        clean_edges.append((u, v, z))

    if not clean_edges:
        raise VoltageError("Voltage graph has no edges", reason="empty")

    arcs = []
    for u, v, z in clean_edges:
        arcs.append((u, v, z))
        arcs.append((v, u, tuple(-x for x in z)))

    _check_simple_cover(arcs)

    if not nx.is_connected(quotient_multigraph(n, clean_edges)):
        raise VoltageError("Quotient graph is disconnected", reason="disconnected")

    degrees = [0] * n
    for o, _, _ in arcs:
        degrees[o] += 1

    vg = VoltageGraph(dim=dim, n=n, edges=tuple(clean_edges), arcs=tuple(arcs),
                      degrees=tuple(degrees))
    _check_lattice_generation(vg)
    return vg


def _check_simple_cover(arcs):
    seen = {}
    for e, (o, t, z) in enumerate(arcs):
        if o == t and not any(z):
            raise VoltageError(f"Arc {e} is a loop with zero voltage; the cover has loops",
                               reason="non-simple-cover", details={"edge": e // 2})
        key = (o, t, z)
        if key in seen:
            raise VoltageError(
                f"Edges {seen[key] // 2} and {e // 2} lift to parallel edges in the cover",
                reason="non-simple-cover", details={"edge": e // 2, "colliding": seen[key] // 2})
        seen[key] = e


def quotient_multigraph(n, edges):
    """Quotient as a networkx MultiGraph; edge keys are the edge indices"""
    Q = nx.MultiGraph()
    Q.add_nodes_from(range(n))
    Q.add_edges_from((u, v, k) for k, (u, v, _) in enumerate(edges))
    return Q


def cycle_voltages(vg):
    """Net voltages of the fundamental cycles of a BFS spanning tree"""
    Q = quotient_multigraph(vg.n, vg.edges)
    potential = {0: np.zeros(vg.dim, dtype=np.int64)}
    tree_edges = set()
    for u, v in nx.bfs_edges(Q, 0):
        k = min(Q[u][v])
        # arc 2k runs along the stored edge, 2k + 1 against it
        _, _, z = vg.arcs[2 * k] if vg.arcs[2 * k][0] == u else vg.arcs[2 * k + 1]
        potential[v] = potential[u] + np.asarray(z)
        tree_edges.add(k)

    vectors = []
    for k, (o, t, z) in enumerate(vg.edges):
        if k in tree_edges:
            continue
        vectors.append(potential[o] + np.asarray(z) - potential[t])
    return vectors


def _check_lattice_generation(vg):
    vectors = [v for v in cycle_voltages(vg) if np.any(v)]
    M = sympy.Matrix([[int(x) for x in v] for v in vectors]) if vectors else sympy.zeros(0, vg.dim)
    if M.rows < vg.dim or M.rank() < vg.dim:
        raise VoltageError(f"Cycle voltages span less than Z^{vg.dim}; the cover is disconnected",
                           reason="lattice", details={"rank": M.rank() if M.rows else 0})

    # Full lattice iff the gcd of all maximal minors is 1
    g = 0
    for rows in itertools.combinations(range(M.rows), vg.dim):
        g = math.gcd(g, int(M.extract(list(rows), list(range(vg.dim))).det()))
        if g == 1:
            return
    raise VoltageError(f"Cycle voltages generate an index-{g} sublattice of Z^{vg.dim}; "
                       "the cover is disconnected", reason="lattice", details={"index": g})


def tr_gamma_constants(vg):
    """(Tr_Gamma(I_V), Tr_Gamma(I_R)) for a free action: orbit counts n0 and 2 m0"""
    return vg.n, vg.arc_count


def l2_euler_characteristic(vg):
    return vg.n - vg.m


def _as_thetas(vg, theta):
    thetas = np.asarray(theta, dtype=np.float64)
    if thetas.ndim == 1:
        thetas = thetas[None, :]
    if thetas.shape[-1] != vg.dim:
        raise VoltageError(f"theta needs {vg.dim} components, got {thetas.shape[-1]}",
                           reason="theta")
    return thetas


def arc_phases(vg, thetas):
    """exp(i theta.z(e)) for each theta row and arc: shape (K, 2m)"""
    return np.exp(1j * (thetas @ vg.voltages.T))


def bloch_adjacency(vg, thetas):
    """Batched A(theta): shape (K, n0, n0)"""
    thetas = _as_thetas(vg, thetas)
    A = np.zeros((len(thetas), vg.n, vg.n), dtype=np.complex128)
    phases = arc_phases(vg, thetas)
    for e in range(vg.arc_count):
        A[:, vg.terminals[e], vg.origins[e]] += phases[:, e]
    return A


def bloch_normalized_adjacency(vg, thetas):
    """Batched dSd*(theta) = D^-1/2 A(theta) D^-1/2"""
    scale = 1.0 / np.sqrt(np.asarray(vg.degrees, dtype=np.float64))
    return bloch_adjacency(vg, thetas) * scale[None, :, None] * scale[None, None, :]


def bloch_fiber(vg, theta):
    """A(theta), D and dSd(theta) at a single torus point"""
    theta = _as_thetas(vg, theta)
    if theta.shape[0] != 1:
        raise VoltageError("bloch_fiber takes a single theta; use bloch_adjacency for batches",
                           reason="theta")
    A = bloch_adjacency(vg, theta)[0]
    D = np.diag(np.asarray(vg.degrees, dtype=np.float64))
    scale = 1.0 / np.sqrt(np.asarray(vg.degrees, dtype=np.float64))
    dSd = A * scale[:, None] * scale[None, :]
    return FiberBundle(A=A, D=D, dSd=dSd)


def arc_fiber_batch(vg, thetas, p):
    """Batched S(theta), d(theta), C(theta), U(theta) on the 2 m0 arc space"""
    thetas = _as_thetas(vg, thetas)
    K, R = len(thetas), vg.arc_count
    phases = arc_phases(vg, thetas)
    idx = np.arange(R)

    S = np.zeros((K, R, R), dtype=np.complex128)
    S[:, idx, idx ^ 1] = np.conj(phases)

    scale = 1.0 / np.sqrt(np.asarray(vg.degrees, dtype=np.float64))
    d = np.zeros((K, vg.n, R), dtype=np.complex128)
    d[:, vg.terminals, idx] = phases * scale[vg.terminals][None, :]

    P = np.conj(np.swapaxes(d, 1, 2)) @ d
    eye = np.eye(R, dtype=np.complex128)[None, :, :]
    C = p.a * P + p.b * (eye - P)
    U = S @ C
    return ArcFiber(S=S, d=d, C=C, U=U)


def arc_fiber(vg, theta, p=None):
    """Arc-space fiber at a single theta (Grover coin by default)"""
    p = p if p is not None else CoinParams.grover()
    batch = arc_fiber_batch(vg, theta, p)
    if batch.S.shape[0] != 1:
        raise VoltageError("arc_fiber takes a single theta; use arc_fiber_batch", reason="theta")
    return ArcFiber(S=batch.S[0], d=batch.d[0], C=batch.C[0], U=batch.U[0])


def finite_quotient(vg, L):
    """
    The finite cover by Z^d / (L Z)^d as a simple Graph.
    Vertex (v, k) gets index v * L^d + ravel(k).
    """
    if not isinstance(L, int) or L < 1:
        raise VoltageError(f"Cover size must be a positive integer, got {L!r}", reason="cover-size")

    cells = list(itertools.product(range(L), repeat=vg.dim))
    cell_index = {k: i for i, k in enumerate(cells)}
    volume = len(cells)

    edges = []
    seen = {}
    for q, (u, v, z) in enumerate(vg.edges):
        for k in cells:
            target = tuple((ki + zi) % L for ki, zi in zip(k, z))
            a = u * volume + cell_index[k]
            b = v * volume + cell_index[target]
            if a == b:
                raise VoltageError(f"Quotient edge {q} wraps to a loop in the L={L} cover",
                                   reason="non-simple-cover", details={"edge": q, "L": L})
            key = frozenset((a, b))
            if key in seen:
                raise VoltageError(
                    f"Quotient edge {q} collides with edge {seen[key]} in the L={L} cover",
                    reason="non-simple-cover",
                    details={"edge": q, "colliding": seen[key], "L": L})
            seen[key] = q
            edges.append((a, b))

    logger.debug("Unrolled %r into %d vertices, %d edges (L=%d)", vg, vg.n * volume, len(edges), L)
    return build_graph(edges, vg.n * volume)

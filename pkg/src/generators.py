"""
Built-in graphs and voltage graphs used by the CLI `gen` command,
the cross-check corpus and the tests.
"""

import logging

import networkx as nx

from src.errors import GraphError
from src.graph import build_graph
from src.voltage import build_voltage_graph

logger = logging.getLogger(__name__)


def _from_networkx(G):
    G = nx.convert_node_labels_to_integers(G, ordering="sorted")
    return build_graph(list(G.edges()), G.number_of_nodes())


def cycle_graph(n):
    if n < 3:
        raise GraphError(f"Cycle needs at least 3 vertices, got {n}", reason="vertex-count")
    return _from_networkx(nx.cycle_graph(n))


def complete_graph(n):
    if n < 2:
        raise GraphError(f"Complete graph needs at least 2 vertices, got {n}",
                         reason="vertex-count")
    return _from_networkx(nx.complete_graph(n))


def path_graph(n):
    if n < 2:
        raise GraphError(f"Path needs at least 2 vertices, got {n}", reason="vertex-count")
    return _from_networkx(nx.path_graph(n))


def petersen_graph():
    return _from_networkx(nx.petersen_graph())


def random_connected_graph(n, p=0.4, seed=0):
    """G(n, p) sample, with its components chained together if needed"""
    if n < 2:
        raise GraphError(f"Random graph needs at least 2 vertices, got {n}",
                         reason="vertex-count")
    G = nx.gnp_random_graph(n, p, seed=seed)
    components = sorted(min(c) for c in nx.connected_components(G))
    for left, right in zip(components, components[1:]):
        G.add_edge(left, right)
    return _from_networkx(G)


def corpus(seed=2024, random_count=10, max_random_n=10):
    """Named finite graphs: C3..C10, K4, K5, Petersen and random connected graphs"""
    graphs = {f"cycle-{n}": cycle_graph(n) for n in range(3, 11)}
    graphs["complete-4"] = complete_graph(4)
    graphs["complete-5"] = complete_graph(5)
    graphs["petersen"] = petersen_graph()
    for k in range(random_count):
        n = 4 + (seed + k) % (max_random_n - 3)
        graphs[f"random-{n}-{seed + k}"] = random_connected_graph(n, 0.4, seed=seed + k)
    return graphs


def line_voltage():
    """Z as a single vertex with one loop of voltage 1"""
    return build_voltage_graph([(0, 0, (1,))], 1, 1)


def grid2d_voltage():
    """Z^2 square lattice: one vertex, loops of voltage e1 and e2"""
    return build_voltage_graph([(0, 0, (1, 0)), (0, 0, (0, 1))], 1, 2)


def honeycomb_voltage():
    """Hexagonal lattice: two vertices joined by three edges"""
    return build_voltage_graph([(0, 1, (0, 0)), (0, 1, (1, 0)), (0, 1, (0, 1))], 2, 2)


GRAPH_GENERATORS = {
    "cycle": cycle_graph,
    "complete": complete_graph,
    "path": path_graph,
    "petersen": petersen_graph,
    "random": random_connected_graph,
}

VOLTAGE_GENERATORS = {
    "line": line_voltage,
    "grid2d": grid2d_voltage,
    "honeycomb": honeycomb_voltage,
}

"""
Labeled graph helpers shared by the graph-backed subshift variants.

Graphs are :class:`networkx.MultiDiGraph` objects whose edges carry the
symbol they read in a ``label`` attribute.
"""

import logging
from collections import defaultdict
from typing import Hashable, Sequence

import networkx as nx

_logger = logging.getLogger(__name__)

Successors = dict[Hashable, dict[int, frozenset]]


def make_essential(graph: nx.MultiDiGraph) -> nx.MultiDiGraph:
    """Return the maximal essential subgraph of ``graph``.

    Vertices without outgoing edges are removed iteratively, then vertices
    without incoming edges. Every remaining vertex lies on a bi-infinite
    path. The input graph is left untouched.
    """
    graph = graph.copy()
    n_before = graph.number_of_nodes()
    dead = [q for q in graph if not graph.out_degree(q)]
    while dead:
        frontier = {q for q, _ in graph.in_edges(dead)}
        graph.remove_nodes_from(dead)
        dead = [q for q in frontier if q in graph and not graph.out_degree(q)]

    dead = [q for q in graph if not graph.in_degree(q)]
    while dead:
        frontier = {q for _, q in graph.out_edges(dead)}
        graph.remove_nodes_from(dead)
        dead = [q for q in frontier if q in graph and not graph.in_degree(q)]

    _logger.debug(
        f"Essential subgraph keeps {graph.number_of_nodes()} of {n_before} vertices"
    )
    return graph


def label_successors(graph: nx.MultiDiGraph) -> Successors:
    """Map each vertex to ``{label: frozenset(targets)}``."""
    table = defaultdict(lambda: defaultdict(set))
    for source, target, label in graph.edges(data="label"):
        table[source][label].add(target)
    return {
        node: {label: frozenset(targets) for label, targets in table[node].items()}
        for node in graph
    }


def step(successors: Successors, current: frozenset, symbol: int) -> frozenset:
    """Vertices reached from ``current`` along one edge labeled ``symbol``."""
    return frozenset(
        target for node in current for target in successors[node].get(symbol, ())
    )


def follow_word(
    successors: Successors, word: Sequence[int], start: frozenset | None = None
) -> tuple[frozenset, int | None]:
    """Subset simulation of ``word`` through a labeled graph.

    Returns the set of vertices reachable by reading ``word`` from any vertex
    of ``start`` (default: every vertex) together with the position at which
    the set became empty, or None if it never did.
    """
    current = frozenset(successors) if start is None else start
    for pos, symbol in enumerate(word):
        current = step(successors, current, symbol)
        if not current:
            return current, pos
    return current, None

"""Synthetic connected-graph fixtures used by tests and the benchmark."""

import numpy as np

from .graph import from_edges


def path_graph(n):
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    return from_edges(n, edges)


def grid_graph(rows, cols):
    def node(r, c):
        return r * cols + c

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((node(r, c), node(r, c + 1)))
            if r + 1 < rows:
                edges.append((node(r, c), node(r + 1, c)))
    return from_edges(rows * cols, edges)


def star_graph(leaves):
    """Center node 0 with the given number of leaves."""
    return from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def claw_graph():
    return star_graph(3)


def complete_graph(n):
    return from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_connected_graph(n, num_edges, seed):
    """Random spanning tree plus uniformly drawn extra edges.

    num_edges must be in [n-1, n(n-1)/2]. Deterministic given the seed.
    """
    if num_edges < n - 1:
        raise ValueError("need at least n-1 edges for connectivity")
    if num_edges > n * (n - 1) // 2:
        raise ValueError("too many edges for a simple graph")
    rng = np.random.default_rng(seed)
    edges = set()
    order = rng.permutation(n)
    for k in range(1, n):
        attach = order[int(rng.integers(k))]
        a, b = int(order[k]), int(attach)
        edges.add((a, b) if a < b else (b, a))
    while len(edges) < num_edges:
        a = int(rng.integers(n))
        b = int(rng.integers(n))
        if a == b:
            continue
        edges.add((a, b) if a < b else (b, a))
    return from_edges(n, sorted(edges))

"""Layout quality metrics over (graph, original distances, coordinates).

Higher is better for neighborhood preservation and aspect ratio; lower is
better for the rest. Stress is always evaluated against the original
distance matrix, never an adjusted one.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels

METRIC_FIELDS = (
    ("stress", "stress"),
    ("ideal_edge_lengths", "il"),
    ("neighborhood_preservation", "np"),
    ("crossing_number", "cn"),
    ("crossing_angle", "ca"),
    ("aspect_ratio", "ar"),
    ("angular_resolution", "anr"),
    ("node_resolution", "nr"),
    ("gabriel_property", "gb"),
)


@dataclass(frozen=True)
class QualityReport:
    stress: float
    ideal_edge_lengths: float
    neighborhood_preservation: float
    crossing_number: int
    crossing_angle: float
    aspect_ratio: float
    angular_resolution: float
    node_resolution: float
    gabriel_property: float

    def as_dict(self):
        """Flat record keyed by the documented short names."""
        return {short: getattr(self, name) for name, short in METRIC_FIELDS}


def stress(X, D):
    """Sum over i<j of d_ij^-2 (|X_i - X_j| - d_ij)^2."""
    X = np.asarray(X, np.float64)
    D = np.asarray(D, np.float64)
    if X.shape[0] != D.shape[0]:
        raise ValueError("layout and distance matrix sizes differ")
    return float(kernels.stress_sum(X, D))


def ideal_edge_lengths(X, graph, D):
    """Sum of squared relative edge-length errors."""
    X = np.asarray(X, np.float64)
    ei = graph.edges[:, 0]
    ej = graph.edges[:, 1]
    lengths = np.sqrt(((X[ei] - X[ej]) ** 2).sum(axis=1))
    d = np.asarray(D, np.float64)[ei, ej]
    return float((((lengths - d) / d) ** 2).sum())


def _knn_shape_edges(X, graph):
    """Unordered pair set of the per-node deg(i)-nearest-neighbor graph.

    Distance ties break toward the lower node id.
    """
    n = graph.n
    pairs = set()
    for i in range(n):
        k = graph.degree(i)
        if k == 0:
            continue
        diff = X - X[i]
        dist = (diff * diff).sum(axis=1)
        dist[i] = np.inf
        order = np.lexsort((np.arange(n), dist))
        for j in order[:k]:
            j = int(j)
            pairs.add((i, j) if i < j else (j, i))
    return pairs


def neighborhood_preservation(X, graph):
    """Jaccard similarity between the edge set and the kNN shape graph."""
    X = np.asarray(X, np.float64)
    shape_edges = _knn_shape_edges(X, graph)
    edge_set = {(int(i), int(j)) for i, j in graph.edges}
    union = edge_set | shape_edges
    if not union:
        return 1.0
    return len(edge_set & shape_edges) / len(union)


def crossing_number(X, graph):
    """Unordered pairs of non-adjacent edges whose closed segments intersect
    (endpoint touching and collinear overlap count)."""
    X = np.asarray(X, np.float64)
    count, _ = kernels.crossing_stats(X, graph.edges[:, 0], graph.edges[:, 1])
    return count


def crossing_angle(X, graph):
    """Sum of cos^2 of the angle between each crossing edge pair."""
    X = np.asarray(X, np.float64)
    _, angle = kernels.crossing_stats(X, graph.edges[:, 0], graph.edges[:, 1])
    return float(angle)


def aspect_ratio(X):
    """Ratio of the two leading singular values of the centered layout."""
    X = np.asarray(X, np.float64)
    centered = X - X.mean(axis=0, keepdims=True)
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv.size == 0 or sv[0] <= 0.0:
        warnings.warn("degenerate layout: all points coincide; aspect ratio 0")
        return 0.0
    if sv.size < 2:
        return 0.0
    return float(sv[1] / sv[0])


def angular_resolution(X, graph):
    """Sum of exp(-phi) over unordered pairs of edges sharing an endpoint,
    phi being the angle between the two edge vectors at that node."""
    X = np.asarray(X, np.float64)
    total = 0.0
    for j in range(graph.n):
        nbrs = graph.neighbors(j)
        k = nbrs.shape[0]
        if k < 2:
            continue
        vec = X[nbrs] - X[j]
        for a in range(k - 1):
            ux, uy = vec[a, 0], vec[a, 1]
            for b in range(a + 1, k):
                vx, vy = vec[b, 0], vec[b, 1]
                phi = abs(math.atan2(ux * vy - uy * vx, ux * vx + uy * vy))
                total += math.exp(-phi)
    return total


def node_resolution(X):
    """Uniformity penalty: sum over i<j of (1 - |X_i - X_j| / (r d_max))^2
    with r = 1/sqrt(n) and d_max the layout diameter."""
    X = np.asarray(X, np.float64)
    return float(kernels.node_resolution_sum(X))


def gabriel_property(X, graph):
    """Penalty for nodes inside the disk whose diameter is a drawn edge."""
    X = np.asarray(X, np.float64)
    return float(kernels.gabriel_sum(X, graph.edges[:, 0], graph.edges[:, 1]))


def full_report(X, graph, D_original):
    """All nine metrics; stress against the original distance matrix."""
    X = np.asarray(X, np.float64)
    count, angle = kernels.crossing_stats(X, graph.edges[:, 0], graph.edges[:, 1])
    return QualityReport(
        stress=stress(X, D_original),
        ideal_edge_lengths=ideal_edge_lengths(X, graph, D_original),
        neighborhood_preservation=neighborhood_preservation(X, graph),
        crossing_number=int(count),
        crossing_angle=float(angle),
        aspect_ratio=aspect_ratio(X),
        angular_resolution=angular_resolution(X, graph),
        node_resolution=node_resolution(X),
        gabriel_property=gabriel_property(X, graph),
    )

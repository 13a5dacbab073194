"""Graph ingestion, BFS shortest paths, and pivot/region machinery."""

import logging
from dataclasses import dataclass, field

import numpy as np

from . import kernels

logger = logging.getLogger(__name__)


class MatrixMarketError(ValueError):
    """Raised for malformed or unsupported Matrix Market input."""


@dataclass
class Graph:
    """Simple undirected connected graph with dense 0..n-1 node ids.

    edges is an (m, 2) int32 array with i < j per row, lexicographically
    sorted; indptr/indices form the CSR adjacency with sorted neighbor lists.
    dropped_nodes counts nodes discarded when a disconnected input was
    reduced to its largest component.
    """

    n: int
    edges: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    dropped_nodes: int = 0

    @property
    def num_edges(self):
        return self.edges.shape[0]

    def neighbors(self, i):
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def degree(self, i):
        return int(self.indptr[i + 1] - self.indptr[i])

    @property
    def degrees(self):
        return np.diff(self.indptr)


def _build_csr(n, edges):
    deg = np.zeros(n, np.int64)
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    indptr = np.zeros(n + 1, np.int32)
    np.cumsum(deg, out=indptr[1:])
    indices = np.empty(indptr[-1], np.int32)
    fill = indptr[:-1].copy()
    for i, j in edges:
        indices[fill[i]] = j
        fill[i] += 1
        indices[fill[j]] = i
        fill[j] += 1
    for v in range(n):
        indices[indptr[v] : indptr[v + 1]].sort()
    return indptr, indices


def from_edges(n, edges, dropped_nodes=0):
    """Build a validated Graph from an edge iterable.

    Self-loops and duplicates are rejected here (ingestion normalizes them
    before calling); a disconnected edge set raises ValueError.
    """
    if n < 1:
        raise ValueError("graph must have at least one node")
    canon = set()
    for i, j in edges:
        i = int(i)
        j = int(j)
        if i == j:
            raise ValueError(f"self-loop at node {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
        pair = (i, j) if i < j else (j, i)
        if pair in canon:
            raise ValueError(f"duplicate edge {pair}")
        canon.add(pair)
    edge_arr = np.array(sorted(canon), np.int32).reshape(-1, 2)
    indptr, indices = _build_csr(n, edge_arr)
    g = Graph(n=n, edges=edge_arr, indptr=indptr, indices=indices, dropped_nodes=dropped_nodes)
    if n > 1:
        dist = kernels.bfs_distances(indptr, indices, 0, n)
        if (dist < 0).any():
            raise ValueError("graph is not connected")
    return g


def _normalize_entries(n_nodes, raw_pairs):
    """Symmetrize, drop self-loops/duplicates, keep the largest component."""
    pairs = set()
    for i, j in raw_pairs:
        if i == j:
            continue
        pairs.add((i, j) if i < j else (j, i))
    # union-find over all declared nodes (isolated ones form their own
    # singleton components and get dropped unless the graph is a single node)
    parent = list(range(n_nodes))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    comps = {}
    for v in range(n_nodes):
        comps.setdefault(find(v), []).append(v)
    if not comps:
        raise MatrixMarketError("empty graph after normalization")
    largest = max(comps.values(), key=lambda c: (len(c), -c[0]))
    keep = sorted(largest)
    remap = {old: new for new, old in enumerate(keep)}
    kept_set = set(keep)
    edges = [(remap[i], remap[j]) for i, j in pairs if i in kept_set and j in kept_set]
    dropped = n_nodes - len(keep)
    return len(keep), edges, dropped


def parse_matrix_market(text):
    """Parse Matrix Market coordinate data into a Graph.

    Accepts pattern/integer/real entries (values are discarded) with general
    or symmetric storage; entries are 1-indexed and '%' lines are comments.
    The result is symmetrized with self-loops and duplicates removed, reduced
    to its largest connected component, and densely re-indexed. Dropped node
    count is logged and recorded on the Graph.
    """
    if hasattr(text, "read"):
        text = text.read()
    lines = text.splitlines()
    pos = 0
    header_seen = False
    while pos < len(lines):
        line = lines[pos].strip()
        pos += 1
        if not line:
            continue
        if line.startswith("%%MatrixMarket"):
            parts = line.split()
            if len(parts) < 5:
                raise MatrixMarketError(f"malformed header: {line!r}")
            obj, fmt, fieldname, symmetry = (p.lower() for p in parts[1:5])
            if obj != "matrix":
                raise MatrixMarketError(f"unsupported object {obj!r}")
            if fmt != "coordinate":
                raise MatrixMarketError(f"only coordinate format is supported, got {fmt!r}")
            if fieldname not in ("pattern", "integer", "real"):
                raise MatrixMarketError(f"unsupported field {fieldname!r}")
            if symmetry not in ("general", "symmetric", "skew-symmetric"):
                raise MatrixMarketError(f"unsupported symmetry {symmetry!r}")
            header_seen = True
            continue
        if line.startswith("%"):
            continue
        break
    else:
        raise MatrixMarketError("no size line found")
    size_parts = line.split()
    if len(size_parts) != 3:
        raise MatrixMarketError(f"malformed size line: {line!r}")
    try:
        rows, cols, nnz = (int(p) for p in size_parts)
    except ValueError as exc:
        raise MatrixMarketError(f"malformed size line: {line!r}") from exc
    if not header_seen:
        logger.debug("no MatrixMarket banner; assuming coordinate pattern data")
    n_nodes = max(rows, cols)
    if n_nodes < 1:
        raise MatrixMarketError("empty matrix")
    raw_pairs = []
    count = 0
    for line in lines[pos:]:
        line = line.strip()
        if not line or line.startswith("%"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise MatrixMarketError(f"malformed entry: {line!r}")
        try:
            i = int(parts[0]) - 1
            j = int(parts[1]) - 1
        except ValueError as exc:
            raise MatrixMarketError(f"malformed entry: {line!r}") from exc
        if not (0 <= i < n_nodes and 0 <= j < n_nodes):
            raise MatrixMarketError(f"entry out of declared bounds: {line!r}")
        raw_pairs.append((i, j))
        count += 1
    if count != nnz:
        logger.warning("declared %d entries, found %d", nnz, count)
    n, edges, dropped = _normalize_entries(n_nodes, raw_pairs)
    if dropped:
        logger.warning("dropped %d nodes outside the largest connected component", dropped)
    return from_edges(n, edges, dropped_nodes=dropped)


def load_graph(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix_market(fh)


def bfs_all_pairs(graph):
    """Dense matrix of graph-hop distances (one BFS per source)."""
    return kernels.apsp_matrix(graph.indptr, graph.indices, graph.n)


@dataclass
class PivotSet:
    """Pivots in selection order plus the nearest-pivot region assignment.

    region[v] is the owning pivot's node id; ties go to the pivot chosen
    earliest (lowest pivot index).
    """

    pivots: np.ndarray
    region: np.ndarray


def choose_pivots(graph, h, rng):
    """Max-min (k-center) pivot sampling over BFS distances.

    The first pivot is uniform random from rng; each next pivot maximizes
    the hop distance to its nearest already-chosen pivot (ties to the lowest
    node id). Returns min(h, n) pivots.
    """
    if h < 1:
        raise ValueError("h must be >= 1")
    n = graph.n
    h = min(h, n)
    first = int(rng.integers(n))
    pivots = np.empty(h, np.int32)
    pivots[0] = first
    best = kernels.bfs_distances(graph.indptr, graph.indices, first, n).astype(np.int64)
    owner = np.zeros(n, np.int32)
    for k in range(1, h):
        nxt = int(np.argmax(best))
        pivots[k] = nxt
        dist = kernels.bfs_distances(graph.indptr, graph.indices, nxt, n).astype(np.int64)
        closer = dist < best
        best[closer] = dist[closer]
        owner[closer] = k
    return PivotSet(pivots=pivots, region=pivots[owner])


@dataclass
class SparseDistanceSet:
    """Pivot-restricted distance terms: edges plus (node, pivot) pairs.

    pair_i/pair_j give the endpoints, dist the hop distance, and
    weight_i/weight_j the directed step-size weights capping the movement of
    the pair_i / pair_j endpoint respectively.
    """

    pair_i: np.ndarray
    pair_j: np.ndarray
    dist: np.ndarray
    weight_i: np.ndarray
    weight_j: np.ndarray
    _index: dict = field(default=None, repr=False)

    def __len__(self):
        return self.pair_i.shape[0]

    def _lookup(self, a, b):
        if self._index is None:
            self._index = {
                (int(i), int(j)): k
                for k, (i, j) in enumerate(zip(self.pair_i, self.pair_j))
            }
        key = (a, b) if a < b else (b, a)
        return self._index[key]

    def distance(self, a, b):
        return float(self.dist[self._lookup(a, b)])

    def weight_directed(self, a, b):
        """Step-size weight capping the movement of endpoint a in pair (a, b)."""
        k = self._lookup(a, b)
        if int(self.pair_i[k]) == a:
            return float(self.weight_i[k])
        return float(self.weight_j[k])


def sparse_shortest_paths(graph, pivots):
    """BFS from each pivot; builds the sparse pair set E ∪ (V×P).

    Edges carry symmetric weight 1 (unit length). A non-neighbor (node i,
    pivot p) pair weights the node side by s * d_ip^-2, where s counts the
    members of p's region at most half as far from p as i; the pivot side of
    such a pair is 0 and does not move. Self pairs (p, p) are excluded.
    """
    n = graph.n
    piv = pivots.pivots
    h = piv.shape[0]
    pivot_dist = np.empty((h, n), np.int64)
    for k in range(h):
        pivot_dist[k] = kernels.bfs_distances(graph.indptr, graph.indices, int(piv[k]), n)

    # sorted region-member distances per pivot, for the s counts
    pivot_pos = {int(p): k for k, p in enumerate(piv)}
    region_idx = np.array([pivot_pos[int(p)] for p in pivots.region], np.int64)
    region_sorted = []
    for k in range(h):
        members = np.nonzero(region_idx == k)[0]
        region_sorted.append(np.sort(pivot_dist[k, members]))

    pair_index = {}
    pair_i = []
    pair_j = []
    dist = []
    w_i = []
    w_j = []

    def add_pair(a, b, d):
        key = (a, b) if a < b else (b, a)
        idx = pair_index.get(key)
        if idx is None:
            idx = len(pair_i)
            pair_index[key] = idx
            pair_i.append(key[0])
            pair_j.append(key[1])
            dist.append(float(d))
            w_i.append(0.0)
            w_j.append(0.0)
        return idx, key

    for i, j in graph.edges:
        idx, _ = add_pair(int(i), int(j), 1.0)
        w_i[idx] = 1.0
        w_j[idx] = 1.0

    adjacency = [set(graph.neighbors(v).tolist()) for v in piv]
    for k in range(h):
        p = int(piv[k])
        nbrs = adjacency[k]
        dists_k = pivot_dist[k]
        sorted_k = region_sorted[k]
        for i in range(n):
            if i == p or i in nbrs:
                continue
            d_ip = float(dists_k[i])
            s = int(np.searchsorted(sorted_k, d_ip / 2.0, side="right"))
            idx, key = add_pair(i, p, d_ip)
            w_dir = s * d_ip**-2.0
            if key[0] == i:
                w_i[idx] = w_dir
            else:
                w_j[idx] = w_dir

    return SparseDistanceSet(
        pair_i=np.array(pair_i, np.int32),
        pair_j=np.array(pair_j, np.int32),
        dist=np.array(dist, np.float64),
        weight_i=np.array(w_i, np.float64),
        weight_j=np.array(w_j, np.float64),
    )

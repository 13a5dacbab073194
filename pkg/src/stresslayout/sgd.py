"""Stress-minimizing SGD layout: full and pivot-sparse solvers, their
distance-adjusted variants, and the low-rank pipeline.

RNG discipline (all solvers): one numpy Generator seeded from params.seed.
Consumption order is (1) initial placement, n*dims uniforms; (2) one
permutation of the pair list per iteration. Coincident-point jitter comes
from an independent splitmix64 stream derived from the same seed, so the
alpha = 0 path consumes exactly the same random numbers as the plain solver.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import bfs_all_pairs
from .spectral import lr_adjusted_matrix


@dataclass(frozen=True)
class SgdParams:
    iterations: int = 15
    eps: float = 0.1
    d_min: float = 0.1
    seed: int = 0
    dims: int = 2

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.d_min <= 0:
            raise ValueError("d_min must be positive")


@dataclass(frozen=True)
class AdjustParams:
    """Distance-adjustment weight alpha in [0, 1); alpha = 0 is the plain
    stress model. k records the grid exponent when built via from_k."""

    alpha: float = 0.0
    k: int = None

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError("alpha must satisfy 0 <= alpha < 1")

    @classmethod
    def from_k(cls, k):
        if k < 0:
            raise ValueError("k must be >= 0")
        return cls(alpha=1.0 - 0.5**k, k=int(k))


def initial_placement(n, dims, rng):
    """Uniform i.i.d. coordinates in [0, sqrt(n)]^dims."""
    return rng.random((n, dims)) * math.sqrt(n)


def make_schedule(w_min, w_max, eps, iterations):
    """Exponentially decaying step sizes from 1/w_min down to eps/w_max."""
    if not 0 < w_min <= w_max:
        raise ValueError("need 0 < w_min <= w_max")
    eta_max = 1.0 / w_min
    eta_final = eps / w_max
    if iterations == 1:
        return np.array([eta_max])
    lam = math.log(eta_max / eta_final) / (iterations - 1)
    t = np.arange(iterations, dtype=np.float64)
    return eta_max * np.exp(-lam * t)


def pair_step(X, i, j, d_target, w_i, w_j, eta, jitter_state=0):
    """Move rows i and j of X one SGD step toward distance d_target.

    Caps are mu_i = min(1, w_i * eta) and mu_j = min(1, w_j * eta); with both
    caps at 1 the pair lands exactly at d_target. Coincident endpoints are
    first displaced 1e-6 along a direction from the jitter stream. Returns
    the updated jitter state.
    """
    if d_target <= 0:
        raise ValueError("d_target must be positive")
    ai = np.array([i], np.int32)
    aj = np.array([j], np.int32)
    return kernels.placement_sweep(
        X,
        ai,
        aj,
        np.array([d_target], np.float64),
        np.array([w_i], np.float64),
        np.array([w_j], np.float64),
        float(eta),
        jitter_state,
    )


def adjust_distance(d_ij, w_ij, current, alpha, d_min):
    """Closed-form optimum of the adjusted objective for one pair, clamped
    to [d_min, d_ij]: larger alpha pulls the working distance toward the
    current drawn distance, never above the original."""
    aw = alpha * w_ij
    two_beta = 2.0 * (1.0 - alpha)
    v = (aw * current + two_beta * d_ij) / (aw + two_beta)
    if v < d_min:
        v = d_min
    if v > d_ij:
        v = d_ij
    return v


def _run_sgd(n, pair_i, pair_j, dist0, w_i, w_j, w_for_adjust, adjust, params):
    """Shared solver core over a fixed pair list.

    dist0 is copied into the working distances; each iteration permutes the
    pair list, runs the placement sweep against the working distances, then
    (when alpha > 0) recomputes every working distance in canonical pair
    order.
    """
    rng = np.random.default_rng(params.seed)
    X = initial_placement(n, params.dims, rng)
    pos = np.concatenate((w_i[w_i > 0], w_j[w_j > 0]))
    if pos.size == 0:
        raise ValueError("all pair weights are zero")
    etas = make_schedule(float(pos.min()), float(pos.max()), params.eps, params.iterations)
    dprime = dist0.copy()
    state = kernels.mix_seed(params.seed)
    alpha = adjust.alpha
    for t in range(params.iterations):
        order = rng.permutation(pair_i.shape[0])
        state = kernels.placement_sweep(
            X,
            pair_i[order],
            pair_j[order],
            dprime[order],
            w_i[order],
            w_j[order],
            float(etas[t]),
            state,
        )
        if alpha > 0.0:
            kernels.adjust_sweep(
                X, pair_i, pair_j, dprime, dist0, w_for_adjust, alpha, params.d_min
            )
    return X


def full_sgd(graph, D, adjust=AdjustParams(), params=SgdParams()):
    """SGD over all i<j pairs of a dense distance matrix, with optional
    distance adjustment; weights are d_ij^-2 from the given matrix."""
    D = np.asarray(D, np.float64)
    n = D.shape[0]
    if graph is not None and graph.n != n:
        raise ValueError("distance matrix size does not match graph")
    iu, ju = np.triu_indices(n, 1)
    pair_i = iu.astype(np.int32)
    pair_j = ju.astype(np.int32)
    dist0 = D[iu, ju].copy()
    if (dist0 <= 0).any():
        raise ValueError("off-diagonal distances must be positive")
    w = dist0**-2.0
    return _run_sgd(n, pair_i, pair_j, dist0, w, w, w, adjust, params)


def sparse_sgd(graph, sparse, adjust=AdjustParams(), params=SgdParams()):
    """SGD over the sparse pair set with per-endpoint step caps from the
    directed weights; the adjustment phase uses the original d^-2 weights."""
    dist0 = sparse.dist.copy()
    w_adjust = dist0**-2.0
    return _run_sgd(
        graph.n,
        sparse.pair_i,
        sparse.pair_j,
        dist0,
        sparse.weight_i.copy(),
        sparse.weight_j.copy(),
        w_adjust,
        adjust,
        params,
    )


def lr_sgd(graph, p, params=SgdParams(), mode="signed"):
    """Low-rank pipeline: BFS distances, spectral truncation at percentile
    p, then plain full SGD against the adjusted matrix (weights d'^-2)."""
    D = bfs_all_pairs(graph)
    D_adj = lr_adjusted_matrix(D, p, params.d_min, mode=mode)
    return full_sgd(graph, D_adj, AdjustParams(), params)


def write_layout(path, X):
    """One line per node: id followed by the coordinates, full precision."""
    X = np.asarray(X)
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(X.shape[0]):
            coords = " ".join(repr(float(v)) for v in X[i])
            fh.write(f"{i} {coords}\n")


def read_layout(path):
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            rows.append((int(parts[0]), [float(v) for v in parts[1:]]))
    rows.sort()
    return np.array([r[1] for r in rows], np.float64)

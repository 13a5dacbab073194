"""Classical-MDS machinery: double centering, eigendecomposition, and
reconstruction of a low-rank-adjusted distance matrix.

The adjustment zeroes eigenvalues of small absolute value (below the
nearest-rank percentile threshold) in the inner-product matrix and rebuilds
distances from the truncated matrix, flooring off-diagonal entries at d_min.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class Spectrum:
    """Eigenvalues in descending order; eigenvectors[:, k] pairs with
    eigenvalues[k]. Sign convention: the first component of each eigenvector
    with magnitude above 1e-12 is positive."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass
class TruncationMask:
    p: float
    mu: float
    keep: np.ndarray


class EigenSolverError(RuntimeError):
    """Eigendecomposition failed to converge."""


def double_center(D):
    """Inner-product (Gram) matrix K = -1/2 H (D∘D) H with H = I - J/n.

    Every row of K sums to zero, and K_ii - 2 K_ij + K_jj recovers d_ij^2.
    """
    D = np.asarray(D, np.float64)
    n = D.shape[0]
    sq = D * D
    row_mean = sq.mean(axis=1, keepdims=True)
    col_mean = sq.mean(axis=0, keepdims=True)
    grand = sq.mean()
    K = -0.5 * (sq - row_mean - col_mean + grand)
    return 0.5 * (K + K.T)


def eigendecompose(K):
    """Full symmetric eigendecomposition, descending, deterministic signs."""
    K = np.asarray(K, np.float64)
    n = K.shape[0]
    if n and np.abs(K - K.T).max() > 1e-9 * max(1.0, np.abs(K).max()):
        raise ValueError("matrix is not symmetric")
    try:
        vals, vecs = np.linalg.eigh(K)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigendecomposition failed for n={n}: {exc}") from exc
    vals = vals[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    for k in range(n):
        col = vecs[:, k]
        nz = np.nonzero(np.abs(col) > 1e-12)[0]
        if nz.size and col[nz[0]] < 0:
            vecs[:, k] = -col
    return Spectrum(eigenvalues=vals, eigenvectors=vecs)


def percentile_mask(eigenvalues, p):
    """Keep eigenvalues whose |λ| is at least the nearest-rank p-percentile.

    mu is the ceil(p/100 * n)-th smallest of |λ| (rank clamped to [1, n]);
    p = 0 keeps everything.
    """
    if not 0 <= p < 100:
        raise ValueError("p must satisfy 0 <= p < 100")
    absvals = np.abs(np.asarray(eigenvalues, np.float64))
    n = absvals.shape[0]
    rank = min(max(math.ceil(p / 100.0 * n), 1), n)
    mu = float(np.sort(absvals)[rank - 1])
    return TruncationMask(p=float(p), mu=mu, keep=absvals >= mu)


def reconstruct_distance_matrix(spectrum, mask, d_min, mode="signed"):
    """Distances from the truncated inner-product matrix.

    K' = sum over kept k of c_k u_k u_k^T with c_k = λ_k ("signed", default)
    or |λ_k| ("hermitian", the conjugate-algebra variant). D'_ij =
    sqrt(max(0, K'_ii - 2 K'_ij + K'_jj)); off-diagonal entries below d_min
    are raised to d_min and the diagonal stays zero.
    """
    if mode not in ("signed", "hermitian"):
        raise ValueError(f"unknown mode {mode!r}")
    if d_min <= 0:
        raise ValueError("d_min must be positive")
    keep = np.asarray(mask.keep, bool)
    coeff = spectrum.eigenvalues[keep]
    if mode == "hermitian":
        coeff = np.abs(coeff)
    U = spectrum.eigenvectors[:, keep]
    K = (U * coeff) @ U.T
    K = 0.5 * (K + K.T)
    diag = np.diag(K)
    sq = diag[:, None] - 2.0 * K + diag[None, :]
    np.maximum(sq, 0.0, out=sq)
    D = np.sqrt(sq)
    n = D.shape[0]
    off = ~np.eye(n, dtype=bool)
    np.maximum(D, d_min, out=D, where=off)
    np.fill_diagonal(D, 0.0)
    return D


def lr_adjusted_matrix(D, p, d_min, mode="signed"):
    """double_center -> eigendecompose -> percentile_mask -> reconstruct."""
    K = double_center(D)
    spectrum = eigendecompose(K)
    mask = percentile_mask(spectrum.eigenvalues, p)
    return reconstruct_distance_matrix(spectrum, mask, d_min, mode=mode)


def dump_spectrum_csv(spectrum, mask, fh):
    """Diagnostic CSV of the spectrum: index, eigenvalue, kept flag."""
    close = False
    if isinstance(fh, (str, bytes)):
        fh = open(fh, "w", encoding="utf-8", newline="")
        close = True
    try:
        fh.write("index,eigenvalue,kept\n")
        for k, (lam, kept) in enumerate(zip(spectrum.eigenvalues, mask.keep)):
            fh.write(f"{k},{lam!r},{int(kept)}\n")
    finally:
        if close:
            fh.close()

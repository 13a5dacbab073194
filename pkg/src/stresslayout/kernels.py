"""Hot numeric kernels: numba-compiled by default, pure numpy/Python fallback.

The backend is chosen at import time from the STRESSLAYOUT_NUMBA environment
variable ("0" forces the fallback, "1" requires numba, unset = auto) and can
be switched at runtime with use_numba(). Order-dependent loops (the SGD
placement sweep, BFS) share one source between both backends, so results are
bit-identical regardless of backend. Order-independent reductions (stress,
crossing statistics, penalties) have a vectorized fallback whose summation
order may differ from the compiled loop at the last few ulps.
"""

import math
import os
import warnings

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None
    NUMBA_AVAILABLE = False


_MASK64 = 0xFFFFFFFFFFFFFFFF
_INV_2_53 = 1.0 / 9007199254740992.0


def mix_seed(seed):
    """Derive the jitter-stream state (splitmix64) from an integer seed."""
    state = (int(seed) ^ 0x5DEECE66D) & _MASK64
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    return state


# ---------------------------------------------------------------------------
# Shared-source kernels (run as-is in Python, or compiled with numba).
# These must stay restricted to scalar arithmetic numba supports.
# ---------------------------------------------------------------------------


def _placement_sweep(X, ai, aj, target, wa, wb, eta, state):
    # One SGD node-placement pass over an already-shuffled pair list.
    # Per pair: mu_i = min(1, wa*eta), mu_j = min(1, wb*eta); both endpoints
    # move along the connecting line by mu*r with r = (|Xi-Xj|-d)/2 * unit.
    # Coincident endpoints get X_i displaced 1e-6 along a direction drawn
    # from the splitmix64 stream (state is threaded through and returned).
    m = X.shape[1]
    scratch = np.empty(m, np.float64)
    for k in range(ai.shape[0]):
        i = ai[k]
        j = aj[k]
        s = 0.0
        for c in range(m):
            diff = X[i, c] - X[j, c]
            s += diff * diff
        norm = math.sqrt(s)
        if norm < 1e-12:
            nrm2 = 0.0
            while nrm2 < 1e-12:
                nrm2 = 0.0
                for c in range(m):
                    state = (state + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
                    z = state
                    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
                    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
                    z = z ^ (z >> 31)
                    u = 2.0 * ((z >> 11) * (1.0 / 9007199254740992.0)) - 1.0
                    scratch[c] = u
                    nrm2 += u * u
            inv = 1e-6 / math.sqrt(nrm2)
            for c in range(m):
                X[i, c] += scratch[c] * inv
            s = 0.0
            for c in range(m):
                diff = X[i, c] - X[j, c]
                s += diff * diff
            norm = math.sqrt(s)
        mu_i = wa[k] * eta
        if mu_i > 1.0:
            mu_i = 1.0
        mu_j = wb[k] * eta
        if mu_j > 1.0:
            mu_j = 1.0
        rcoef = (norm - target[k]) / (2.0 * norm)
        for c in range(m):
            r = rcoef * (X[i, c] - X[j, c])
            X[i, c] = X[i, c] - mu_i * r
            X[j, c] = X[j, c] + mu_j * r
    return state


def _bfs_fill(indptr, indices, source, dist):
    # Single-source BFS over a CSR adjacency; dist must be prefilled with -1.
    n = dist.shape[0]
    queue = np.empty(n, np.int32)
    queue[0] = source
    dist[source] = 0
    head = 0
    tail = 1
    while head < tail:
        v = queue[head]
        head += 1
        dv = dist[v]
        for idx in range(indptr[v], indptr[v + 1]):
            u = indices[idx]
            if dist[u] < 0:
                dist[u] = dv + 1
                queue[tail] = u
                tail += 1
    return tail


def _apsp_fill(indptr, indices, out):
    # BFS from every source; out is the (n, n) float64 hop-distance matrix.
    n = out.shape[0]
    dist = np.empty(n, np.int32)
    queue = np.empty(n, np.int32)
    for s in range(n):
        for i in range(n):
            dist[i] = -1
        queue[0] = s
        dist[s] = 0
        head = 0
        tail = 1
        while head < tail:
            v = queue[head]
            head += 1
            dv = dist[v]
            for idx in range(indptr[v], indptr[v + 1]):
                u = indices[idx]
                if dist[u] < 0:
                    dist[u] = dv + 1
                    queue[tail] = u
                    tail += 1
        for i in range(n):
            out[s, i] = dist[i]


def _adjust_sweep(X, ai, aj, dprime, dist0, w, alpha, dmin):
    # Distance-adjustment pass: for each pair, move the working distance to
    # the closed-form optimum of the adjusted objective, clamped to
    # [dmin, original distance].
    m = X.shape[1]
    two_beta = 2.0 * (1.0 - alpha)
    for k in range(ai.shape[0]):
        i = ai[k]
        j = aj[k]
        s = 0.0
        for c in range(m):
            diff = X[i, c] - X[j, c]
            s += diff * diff
        cur = math.sqrt(s)
        aw = alpha * w[k]
        v = (aw * cur + two_beta * dist0[k]) / (aw + two_beta)
        if v < dmin:
            v = dmin
        if v > dist0[k]:
            v = dist0[k]
        dprime[k] = v


def _stress_sum(X, D):
    # Sum over i<j of d^-2 (|Xi-Xj| - d)^2.
    n = X.shape[0]
    m = X.shape[1]
    total = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            s = 0.0
            for c in range(m):
                diff = X[i, c] - X[j, c]
                s += diff * diff
            d = D[i, j]
            e = (math.sqrt(s) - d) / d
            total += e * e
    return total


def _node_resolution_sum(X):
    n = X.shape[0]
    m = X.shape[1]
    if n < 2:
        return 0.0
    dmax = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            s = 0.0
            for c in range(m):
                diff = X[i, c] - X[j, c]
                s += diff * diff
            if s > dmax:
                dmax = s
    dmax = math.sqrt(dmax)
    if dmax <= 0.0:
        return 0.5 * n * (n - 1)
    denom = dmax / math.sqrt(n)
    total = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            s = 0.0
            for c in range(m):
                diff = X[i, c] - X[j, c]
                s += diff * diff
            e = 1.0 - math.sqrt(s) / denom
            total += e * e
    return total


def _gabriel_sum(X, ei, ej):
    # Penalty for nodes inside the disk whose diameter is a drawn edge.
    n = X.shape[0]
    total = 0.0
    for e in range(ei.shape[0]):
        i = ei[e]
        j = ej[e]
        cx = 0.5 * (X[i, 0] + X[j, 0])
        cy = 0.5 * (X[i, 1] + X[j, 1])
        dx = X[i, 0] - X[j, 0]
        dy = X[i, 1] - X[j, 1]
        r = 0.5 * math.sqrt(dx * dx + dy * dy)
        for k in range(n):
            if k == i or k == j:
                continue
            ddx = X[k, 0] - cx
            ddy = X[k, 1] - cy
            pen = r - math.sqrt(ddx * ddx + ddy * ddy)
            if pen > 0.0:
                total += pen * pen
    return total


def _crossing_stats(X, ei, ej):
    # Count unordered pairs of non-adjacent edges whose closed segments
    # intersect (collinear overlap included) and accumulate cos^2 of the
    # angle between the crossing edges' direction vectors.
    m = ei.shape[0]
    count = 0
    angle_sum = 0.0
    for a in range(m - 1):
        i1 = ei[a]
        j1 = ej[a]
        ax = X[i1, 0]
        ay = X[i1, 1]
        bx = X[j1, 0]
        by = X[j1, 1]
        for b in range(a + 1, m):
            i2 = ei[b]
            j2 = ej[b]
            if i1 == i2 or i1 == j2 or j1 == i2 or j1 == j2:
                continue
            cx = X[i2, 0]
            cy = X[i2, 1]
            dx = X[j2, 0]
            dy = X[j2, 1]
            d1 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx)
            d2 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx)
            d3 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
            d4 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax)
            crossing = False
            if ((d1 > 0.0 and d2 < 0.0) or (d1 < 0.0 and d2 > 0.0)) and (
                (d3 > 0.0 and d4 < 0.0) or (d3 < 0.0 and d4 > 0.0)
            ):
                crossing = True
            elif (
                d1 == 0.0
                and min(cx, dx) <= ax <= max(cx, dx)
                and min(cy, dy) <= ay <= max(cy, dy)
            ):
                crossing = True
            elif (
                d2 == 0.0
                and min(cx, dx) <= bx <= max(cx, dx)
                and min(cy, dy) <= by <= max(cy, dy)
            ):
                crossing = True
            elif (
                d3 == 0.0
                and min(ax, bx) <= cx <= max(ax, bx)
                and min(ay, by) <= cy <= max(ay, by)
            ):
                crossing = True
            elif (
                d4 == 0.0
                and min(ax, bx) <= dx <= max(ax, bx)
                and min(ay, by) <= dy <= max(ay, by)
            ):
                crossing = True
            if crossing:
                count += 1
                ux = bx - ax
                uy = by - ay
                vx = dx - cx
                vy = dy - cy
                dot = ux * vx + uy * vy
                denom = (ux * ux + uy * uy) * (vx * vx + vy * vy)
                if denom > 0.0:
                    angle_sum += dot * dot / denom
    return count, angle_sum


# ---------------------------------------------------------------------------
# Vectorized numpy fallbacks for the order-independent reductions.
# ---------------------------------------------------------------------------


def _adjust_sweep_np(X, ai, aj, dprime, dist0, w, alpha, dmin):
    diff = X[ai] - X[aj]
    cur = np.sqrt((diff * diff).sum(axis=1))
    aw = alpha * w
    two_beta = 2.0 * (1.0 - alpha)
    v = (aw * cur + two_beta * dist0) / (aw + two_beta)
    np.maximum(v, dmin, out=v)
    np.minimum(v, dist0, out=v)
    dprime[:] = v


def _stress_sum_np(X, D):
    n = X.shape[0]
    total = 0.0
    for i in range(n - 1):
        diff = X[i + 1 :] - X[i]
        dist = np.sqrt((diff * diff).sum(axis=1))
        d = D[i, i + 1 :]
        e = (dist - d) / d
        total += float((e * e).sum())
    return total


def _node_resolution_sum_np(X):
    n = X.shape[0]
    if n < 2:
        return 0.0
    chunks = []
    for i in range(n - 1):
        diff = X[i + 1 :] - X[i]
        chunks.append(np.sqrt((diff * diff).sum(axis=1)))
    dist = np.concatenate(chunks)
    dmax = float(dist.max())
    if dmax <= 0.0:
        return 0.5 * n * (n - 1)
    e = 1.0 - dist / (dmax / math.sqrt(n))
    return float((e * e).sum())


def _gabriel_sum_np(X, ei, ej):
    total = 0.0
    for e in range(ei.shape[0]):
        i = int(ei[e])
        j = int(ej[e])
        c = 0.5 * (X[i] + X[j])
        r = 0.5 * float(np.hypot(X[i, 0] - X[j, 0], X[i, 1] - X[j, 1]))
        diff = X - c
        pen = r - np.sqrt((diff * diff).sum(axis=1))
        pen[i] = 0.0
        pen[j] = 0.0
        pen = np.maximum(pen, 0.0)
        total += float((pen * pen).sum())
    return total


def _crossing_stats_np(X, ei, ej):
    m = ei.shape[0]
    count = 0
    angle_sum = 0.0
    px = X[:, 0]
    py = X[:, 1]
    for a in range(m - 1):
        i1 = ei[a]
        j1 = ej[a]
        ax, ay = px[i1], py[i1]
        bx, by = px[j1], py[j1]
        i2 = ei[a + 1 :]
        j2 = ej[a + 1 :]
        shared = (i2 == i1) | (i2 == j1) | (j2 == i1) | (j2 == j1)
        cx, cy = px[i2], py[i2]
        dx, dy = px[j2], py[j2]
        d1 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx)
        d2 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx)
        d3 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        d4 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax)
        proper = (((d1 > 0) & (d2 < 0)) | ((d1 < 0) & (d2 > 0))) & (
            ((d3 > 0) & (d4 < 0)) | ((d3 < 0) & (d4 > 0))
        )
        lox = np.minimum(cx, dx)
        hix = np.maximum(cx, dx)
        loy = np.minimum(cy, dy)
        hiy = np.maximum(cy, dy)
        col1 = (d1 == 0) & (lox <= ax) & (ax <= hix) & (loy <= ay) & (ay <= hiy)
        col2 = (d2 == 0) & (lox <= bx) & (bx <= hix) & (loy <= by) & (by <= hiy)
        col3 = (
            (d3 == 0)
            & (min(ax, bx) <= cx)
            & (cx <= max(ax, bx))
            & (min(ay, by) <= cy)
            & (cy <= max(ay, by))
        )
        col4 = (
            (d4 == 0)
            & (min(ax, bx) <= dx)
            & (dx <= max(ax, bx))
            & (min(ay, by) <= dy)
            & (dy <= max(ay, by))
        )
        cross = ~shared & (proper | col1 | col2 | col3 | col4)
        k = int(np.count_nonzero(cross))
        if k:
            count += k
            ux = bx - ax
            uy = by - ay
            vx = dx[cross] - cx[cross]
            vy = dy[cross] - cy[cross]
            dot = ux * vx + uy * vy
            denom = (ux * ux + uy * uy) * (vx * vx + vy * vy)
            ok = denom > 0
            angle_sum += float((dot[ok] * dot[ok] / denom[ok]).sum())
    return count, angle_sum


# ---------------------------------------------------------------------------
# Backend selection and dispatch.
# ---------------------------------------------------------------------------

if NUMBA_AVAILABLE:
    _placement_sweep_nb = njit(cache=True, nogil=True)(_placement_sweep)
    _bfs_fill_nb = njit(cache=True, nogil=True)(_bfs_fill)
    _apsp_fill_nb = njit(cache=True, nogil=True)(_apsp_fill)
    _adjust_sweep_nb = njit(cache=True, nogil=True)(_adjust_sweep)
    _stress_sum_nb = njit(cache=True, nogil=True)(_stress_sum)
    _node_resolution_sum_nb = njit(cache=True, nogil=True)(_node_resolution_sum)
    _gabriel_sum_nb = njit(cache=True, nogil=True)(_gabriel_sum)
    _crossing_stats_nb = njit(cache=True, nogil=True)(_crossing_stats)


def _initial_backend():
    env = os.environ.get("STRESSLAYOUT_NUMBA", "").strip().lower()
    if env in ("0", "false", "off", "no"):
        return False
    if env in ("1", "true", "on", "yes"):
        if not NUMBA_AVAILABLE:
            raise RuntimeError("STRESSLAYOUT_NUMBA=1 but numba is not importable")
        return True
    if env:
        warnings.warn(f"ignoring unrecognized STRESSLAYOUT_NUMBA={env!r}")
    return NUMBA_AVAILABLE


_USE_NUMBA = _initial_backend()


def use_numba(flag):
    """Switch the kernel backend at runtime (True requires numba)."""
    global _USE_NUMBA
    if flag and not NUMBA_AVAILABLE:
        raise RuntimeError("numba backend requested but numba is not importable")
    _USE_NUMBA = bool(flag)


def numba_enabled():
    return _USE_NUMBA


def backend_name():
    return "numba" if _USE_NUMBA else "numpy"


def placement_sweep(X, ai, aj, target, wa, wb, eta, state):
    """Run one placement pass in pair-list order; returns the jitter state."""
    if _USE_NUMBA:
        return int(_placement_sweep_nb(X, ai, aj, target, wa, wb, eta, np.uint64(state)))
    return _placement_sweep(X, ai, aj, target, wa, wb, eta, int(state))


def bfs_distances(indptr, indices, source, n):
    """Hop distances from one source; unreachable nodes get -1."""
    dist = np.full(n, -1, np.int32)
    if _USE_NUMBA:
        _bfs_fill_nb(indptr, indices, np.int32(source), dist)
    else:
        _bfs_fill(indptr, indices, int(source), dist)
    return dist


def apsp_matrix(indptr, indices, n):
    """All-pairs hop distances as a dense float64 matrix."""
    out = np.empty((n, n), np.float64)
    if _USE_NUMBA:
        _apsp_fill_nb(indptr, indices, out)
    else:
        _apsp_fill(indptr, indices, out)
    return out


def adjust_sweep(X, ai, aj, dprime, dist0, w, alpha, dmin):
    """Update working pair distances in place (closed-form optimum, clamped)."""
    if _USE_NUMBA:
        _adjust_sweep_nb(X, ai, aj, dprime, dist0, w, alpha, dmin)
    else:
        _adjust_sweep_np(X, ai, aj, dprime, dist0, w, alpha, dmin)


def stress_sum(X, D):
    if _USE_NUMBA:
        return _stress_sum_nb(X, D)
    return _stress_sum_np(X, D)


def node_resolution_sum(X):
    if _USE_NUMBA:
        return _node_resolution_sum_nb(X)
    return _node_resolution_sum_np(X)


def gabriel_sum(X, ei, ej):
    if _USE_NUMBA:
        return _gabriel_sum_nb(X, ei, ej)
    return _gabriel_sum_np(X, ei, ej)


def crossing_stats(X, ei, ej):
    """(number of crossings, sum of cos^2 of crossing angles)."""
    if _USE_NUMBA:
        count, angle = _crossing_stats_nb(X, ei, ej)
        return int(count), float(angle)
    return _crossing_stats_np(X, ei, ej)

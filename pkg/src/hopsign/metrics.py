"""Distances between spectral point clouds."""

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial import cKDTree


def _as_xy(points):
    z = np.asarray(points, dtype=complex).ravel()
    return np.column_stack([z.real, z.imag])


def nn_distances(points, refs):
    """Distance from each point to the nearest member of refs."""
    tree = cKDTree(_as_xy(refs))
    d, _ = tree.query(_as_xy(points), k=1)
    return d


def directed_hausdorff(a, b):
    """sup over a of the distance to b."""
    return float(nn_distances(a, b).max())


def hausdorff(a, b):
    """Symmetric Hausdorff distance between two finite clouds."""
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


def matching_distance(w1, w2):
    """Pair up two equal-size multisets of complex numbers by the
    total-distance-minimizing assignment and report the largest matched-pair
    distance."""
    w1 = np.asarray(w1, dtype=complex).ravel()
    w2 = np.asarray(w2, dtype=complex).ravel()
    if w1.shape != w2.shape:
        raise ValueError(f"size mismatch: {w1.shape} vs {w2.shape}")
    cost = np.abs(w1[:, None] - w2[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def segment_distances(points, a, b):
    """Distance from each complex point to the nearest of the segments
    [a_k, b_k] (exact point-segment projection, not vertex sampling)."""
    z = np.asarray(points, dtype=complex).ravel()
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    seg = b - a
    lensq = (seg.conj() * seg).real
    lensq = np.where(lensq > 0, lensq, 1.0)
    out = np.full(z.shape, np.inf)
    step = max(1, 10 ** 6 // max(1, len(a)))
    for k in range(0, len(z), step):
        blk = z[k:k + step, None] - a[None, :]
        t = (blk * seg.conj()[None, :]).real / lensq[None, :]
        t = np.clip(t, 0.0, 1.0)
        d = np.abs(blk - t * seg[None, :])
        out[k:k + step] = d.min(axis=1)
    return out

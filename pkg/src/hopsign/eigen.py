"""Dense complex nonsymmetric eigensolver.

Main path: one balancing pass, Householder reduction to upper Hessenberg,
then explicit single-shift QR iteration with complex Givens rotations,
Wilkinson shifts, and relative-tolerance deflation.  Everything is written
over a stack of matrices of equal size so that unions over many Bloch
parameters run as a handful of vectorized sweeps.

Validation path: oracle_eigvals reduces by stabilized elementary similarity,
evaluates the characteristic polynomial through the Hessenberg leading-minor
determinant recurrence at interpolation nodes, recovers coefficients by an
inverse FFT, and polishes all roots at once by Durand-Kerner iteration.  The
two paths share no linear algebra.
"""

import numpy as np

DEFLATION_TOL = 1e-12
STALL_LIMIT = 30
SWEEP_FACTOR = 30


class SolverFailure(Exception):
    """QR iteration did not converge; carries the index of the offending
    matrix within the submitted batch."""

    def __init__(self, index, sweeps):
        self.index = index
        self.sweeps = sweeps
        super().__init__(f"matrix {index} not converged after {sweeps} QR sweeps")


class DenseMatrix:
    """Square complex matrix; entries stored row-major."""

    def __init__(self, entries):
        a = np.array(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"need a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a.view(float))):
            raise ValueError("entries must be finite")
        self.n = a.shape[0]
        self.entries = a

    def __repr__(self):
        return f"DenseMatrix(n={self.n})"


def _as_array(m):
    if isinstance(m, DenseMatrix):
        return m.entries
    return DenseMatrix(m).entries


def _balance_stack(a):
    """One Osborne pass: for each index equalize row and column off-diagonal
    1-norms by a diagonal similarity with power-of-two factors (exact in
    floating point)."""
    B, n, _ = a.shape
    absa = np.abs(a)
    for i in range(n):
        col = absa[:, :, i].sum(axis=1) - absa[:, i, i]
        row = absa[:, i, :].sum(axis=1) - absa[:, i, i]
        ok = (col > 0) & (row > 0)
        f = np.ones(B)
        f[ok] = 2.0 ** np.clip(np.round(0.5 * np.log2(row[ok] / col[ok])), -64, 64)
        a[:, i, :] /= f[:, None]
        a[:, :, i] *= f[:, None]
        absa[:, i, :] = np.abs(a[:, i, :])
        absa[:, :, i] = np.abs(a[:, :, i])


def _hessenberg_stack(a):
    """Householder reduction to upper Hessenberg, in place, whole stack."""
    B, n, _ = a.shape
    for k in range(n - 2):
        x = a[:, k + 1:, k]
        normx = np.linalg.norm(x, axis=1)
        x0 = x[:, 0]
        absx0 = np.abs(x0)
        phase = np.where(absx0 > 0, x0 / np.where(absx0 > 0, absx0, 1.0), 1.0)
        v = x.copy()
        v[:, 0] += phase * normx
        vsq = np.einsum("bi,bi->b", v.conj(), v).real
        beta = np.where(vsq > 0, 2.0 / np.where(vsq > 0, vsq, 1.0), 0.0)
        sub = a[:, k + 1:, k + 1:]
        tmp = np.einsum("bi,bij->bj", v.conj(), sub)
        sub -= beta[:, None, None] * v[:, :, None] * tmp[:, None, :]
        cols = a[:, :, k + 1:]
        tmp = np.einsum("bij,bj->bi", cols, v)
        cols -= beta[:, None, None] * tmp[:, :, None] * v.conj()[:, None, :]
        a[:, k + 1, k] = -phase * normx
        a[:, k + 2:, k] = 0.0


def _wilkinson_shift(p, q, r, s):
    """Eigenvalue of [[p, q], [r, s]] closer to s, cancellation-safe."""
    d = 0.5 * (p - s)
    rad = np.sqrt(d * d + q * r)
    flip = (d.conj() * rad).real < 0
    rad = np.where(flip, -rad, rad)
    den = d + rad
    qr_ = q * r
    safe = den != 0
    return s - np.where(safe, qr_ / np.where(safe, den, 1.0), 0.0)


def _qr_stack(h):
    """Shifted QR on a stack of upper Hessenberg matrices, in place; returns
    nothing, leaves eigenvalues on the diagonals.  Deflation sets subdiagonal
    entries to exact zero once |h[i+1,i]| <= tol * (|h[i,i]| + |h[i+1,i+1]|);
    exactly zero subdiagonals then stay zero through later sweeps, so the
    sweeps may always run over the full matrix."""
    B, n, _ = h.shape
    if n == 1:
        return
    sub_i = np.arange(n - 1)
    stall = np.zeros(B, dtype=int)
    sweeps = np.zeros(B, dtype=int)
    prev_bottom = np.full(B, -2)
    max_sweeps = SWEEP_FACTOR * n
    while True:
        subdiag = h[:, sub_i + 1, sub_i]
        dmag = np.abs(h[:, sub_i, sub_i]) + np.abs(h[:, sub_i + 1, sub_i + 1])
        small = np.abs(subdiag) <= DEFLATION_TOL * dmag
        h[:, sub_i + 1, sub_i] = np.where(small, 0.0, subdiag)
        nz = h[:, sub_i + 1, sub_i] != 0
        live = nz.any(axis=1)
        if not live.any():
            return
        # last nonzero subdiagonal sits at n - 2 - argmax(reversed); the
        # bottom row of the live block is one below it
        bottom = np.where(live, n - 1 - np.argmax(nz[:, ::-1], axis=1), 0)
        moved = bottom != prev_bottom
        stall = np.where(moved, 0, stall + 1)
        prev_bottom = bottom
        sweeps[live] += 1
        if np.any(sweeps[live] > max_sweeps):
            bad = int(np.nonzero(live & (sweeps > max_sweeps))[0][0])
            raise SolverFailure(bad, max_sweeps)

        idx = np.nonzero(live)[0]
        g = h[idx]
        nb = g.shape[0]
        b = bottom[idx]
        brow = np.arange(nb)
        p = g[brow, b - 1, b - 1]
        q = g[brow, b - 1, b]
        r = g[brow, b, b - 1]
        s = g[brow, b, b]
        mu = _wilkinson_shift(p, q, r, s)
        st = stall[idx]
        exceptional = (st > 0) & (st % STALL_LIMIT == 0)
        if exceptional.any():
            mu = np.where(exceptional, s + 0.75 * np.abs(r), mu)

        diag = g[:, np.arange(n), np.arange(n)]
        g[:, np.arange(n), np.arange(n)] = diag - mu[:, None]
        imax = int(b.max())
        us = np.empty((nb, n - 1), dtype=complex)
        vs = np.empty((nb, n - 1), dtype=complex)
        us[:, imax:] = 1.0
        vs[:, imax:] = 0.0
        for i in range(imax):
            ga = g[:, i, i]
            gb = g[:, i + 1, i]
            need = gb != 0
            rr = np.sqrt((ga.conj() * ga + gb.conj() * gb).real)
            rs = np.where(rr > 0, rr, 1.0)
            u = np.where(need, ga / rs, 1.0)
            v = np.where(need, gb / rs, 0.0)
            us[:, i] = u
            vs[:, i] = v
            top = u.conj()[:, None] * g[:, i, :] + v.conj()[:, None] * g[:, i + 1, :]
            bot = -v[:, None] * g[:, i, :] + u[:, None] * g[:, i + 1, :]
            g[:, i, :] = top
            g[:, i + 1, :] = bot
        for i in range(imax):
            u = us[:, i, None]
            v = vs[:, i, None]
            left = u * g[:, :, i] + v * g[:, :, i + 1]
            right = -v.conj() * g[:, :, i] + u.conj() * g[:, :, i + 1]
            g[:, :, i] = left
            g[:, :, i + 1] = right
        diag = g[:, np.arange(n), np.arange(n)]
        g[:, np.arange(n), np.arange(n)] = diag + mu[:, None]
        h[idx] = g


def eigvals_stack(mats):
    """Eigenvalues of a stack (B, n, n); returns (B, n) sorted by
    (real, imag) per matrix."""
    a = np.array(mats, dtype=complex)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError(f"need shape (B, n, n), got {a.shape}")
    n = a.shape[1]
    if n > 1:
        _balance_stack(a)
        if n > 2:
            _hessenberg_stack(a)
        _qr_stack(a)
    w = a[:, np.arange(n), np.arange(n)]
    order = np.lexsort((w.imag, w.real), axis=1)
    return np.take_along_axis(w, order, axis=1)


def eigvals(m):
    """Sorted eigenvalues (with multiplicity) of one matrix, as a list."""
    a = _as_array(m)
    return list(eigvals_stack(a[None, :, :])[0])


def eigvals_batch(mats):
    """Map eigvals over a list of matrices (sizes may differ); matrices of
    equal size are solved in one vectorized stack.  Output order follows the
    input order; SolverFailure indices refer to the input list."""
    arrays = [_as_array(m) for m in mats]
    out = [None] * len(arrays)
    by_size = {}
    for i, a in enumerate(arrays):
        by_size.setdefault(a.shape[0], []).append(i)
    for size, idxs in by_size.items():
        stack = np.stack([arrays[i] for i in idxs])
        try:
            w = eigvals_stack(stack)
        except SolverFailure as e:
            raise SolverFailure(idxs[e.index], e.sweeps) from None
        for j, i in enumerate(idxs):
            out[i] = list(w[j])
    return out


# ---------------------------------------------------------------- oracle ---

def _elementary_hessenberg(a):
    """Reduce in place to upper Hessenberg by stabilized elementary
    similarity transforms with pivoting (no orthogonal machinery)."""
    n = a.shape[0]
    for k in range(n - 2):
        piv = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if a[piv, k] == 0:
            continue
        if piv != k + 1:
            a[[k + 1, piv], :] = a[[piv, k + 1], :]
            a[:, [k + 1, piv]] = a[:, [piv, k + 1]]
        for i in range(k + 2, n):
            m = a[i, k] / a[k + 1, k]
            if m != 0:
                a[i, k:] -= m * a[k + 1, k:]
                a[:, k + 1] += m * a[:, i]
        a[k + 2:, k] = 0.0


def _hessenberg_det(h, z):
    """det(z I - h) for upper Hessenberg h, by the leading-minor recurrence:
    expanding the k-th leading minor along its last column gives

        D_k = sum_j (-1)^(k-j) b[j,k] (prod_{i=j..k-1} b[i+1,i]) D_{j-1}

    with b = z I - h, which needs no nonzero-subdiagonal assumption."""
    n = h.shape[0]
    b = -h.copy()
    b[np.arange(n), np.arange(n)] += z
    d = [1.0 + 0j]
    for k in range(n):
        acc = b[k, k] * d[k]
        prod = 1.0 + 0j
        for j in range(k - 1, -1, -1):
            prod *= b[j + 1, j]
            if prod == 0:
                break
            sign = -1.0 if (k - j) % 2 else 1.0
            acc += sign * b[j, k] * prod * d[j]
        d.append(acc)
    return d[n]


def _char_coeffs(h):
    """Coefficients a_0..a_n of det(z I - h) by evaluation at n+1 nodes on a
    circle of radius R and an inverse FFT.

    R should sit near the spectral radius: too large and the low-order
    coefficients drown in the leading term (cancellation ~ (R/rho)^n), too
    small and the high-order ones do.  max(row sums) alone overshoots by a
    factor ~n on dense matrices; the Frobenius norm over sqrt(n) undershoots
    by at most sqrt(n), which the recovery tolerates for n <= 16."""
    n = h.shape[0]
    absh = np.abs(h)
    bound = min(float(absh.sum(axis=1).max()), float(absh.sum(axis=0).max()),
                float(np.sqrt((absh * absh).sum() / n)))
    radius = 1.0 + bound
    nodes = radius * np.exp(2j * np.pi * np.arange(n + 1) / (n + 1))
    vals = np.array([_hessenberg_det(h, z) for z in nodes])
    # vals_j = sum_k a_k R^k e^{2 pi i jk/(n+1)}, so the forward DFT
    # (numpy sign convention) recovers a_k R^k
    coeffs = np.fft.fft(vals) / (n + 1) / radius ** np.arange(n + 1)
    return coeffs


def _durand_kerner(coeffs, tol=1e-13, maxit=1000):
    """All roots of the monic polynomial with coefficient vector a_0..a_n
    (a_n ~ 1) by simultaneous iteration; stops when every residual is below
    tol relative to the evaluation magnitude.  tol sets the split radius of
    a double root at ~sqrt(tol * scale), which must land inside the cluster
    merge distance used by the caller; 1e-13 keeps ~30x headroom over the
    evaluation noise floor eps * scale."""
    n = len(coeffs) - 1
    coeffs = coeffs / coeffs[-1]
    radius = 1.0 + np.max(np.abs(coeffs[:-1]))
    w = radius * (0.4 + 0.9j) ** np.arange(n)
    powers = np.arange(n + 1)
    for it in range(maxit):
        pv = np.polyval(coeffs[::-1], w)
        scale = np.abs(w)[:, None] ** powers[None, :] @ np.abs(coeffs)
        if np.all(np.abs(pv) <= tol * (scale + 1.0)):
            return w, it
        diff = w[:, None] - w[None, :]
        np.fill_diagonal(diff, 1.0)
        denom = diff.prod(axis=1)
        denom = np.where(denom == 0, 1e-300, denom)
        step = pv / denom
        w = w - step
        if np.max(np.abs(step)) <= 1e-14 * (1.0 + np.max(np.abs(w))):
            return w, it
    raise RuntimeError(f"root iteration did not converge in {maxit} iterations")


def _merge_root_clusters(w, tol):
    """Replace each cluster of roots (single linkage at distance tol) by its
    mean, repeated with the cluster's multiplicity.  For a true k-fold root
    the computed roots spread symmetrically, so the mean restores nearly full
    accuracy."""
    n = len(w)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(w[i] - w[j]) <= tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = np.empty(n, dtype=complex)
    for members in groups.values():
        mean = np.mean([w[i] for i in members])
        for i in members:
            out[i] = mean
    return out


def oracle_eigvals(m):
    """Independent small-matrix eigenvalues (n <= 16): characteristic
    polynomial from the Hessenberg determinant recurrence, all roots by
    simultaneous iteration, sorted by (real, imag)."""
    a = _as_array(m).copy()
    n = a.shape[0]
    if n > 16:
        raise ValueError("oracle_eigvals is limited to n <= 16")
    if n == 1:
        return [complex(a[0, 0])]
    _elementary_hessenberg(a)
    coeffs = _char_coeffs(a)
    w, _ = _durand_kerner(coeffs)
    w = _merge_root_clusters(w, 1e-6 * max(1.0, float(np.abs(w).max())))
    order = np.lexsort((w.imag, w.real))
    return list(w[order])

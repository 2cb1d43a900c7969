"""Finite sections, Bloch-union spectra, enumeration, and sampling.

The N-periodic operator decomposes over the unit-circle twist alpha into the
N x N matrices A^(N,per)_{c,alpha}: tridiagonal with subdiagonal c_1..c_{N-1},
superdiagonal 1, and periodising corners (1,N) = alpha c_N, (N,1) = 1/alpha.
The spectrum of the bi-infinite operator is the union over |alpha| = 1; on a
finite alpha grid that union becomes a point cloud.  The open (truncated)
section A^(N)_c simply drops the corners.
"""

import numpy as np

from . import __version__
from .eigen import DenseMatrix, eigvals, eigvals_stack
from .metrics import hausdorff, matching_distance, nn_distances
from .seqcore import SignWord, c_tilde_array, gamma_plus_word, m_word

# eigensolver chunking: bounded workspace regardless of batch size
_CHUNK_ELEMS = 2_000_000


class SpectrumCloud:
    """A tagged point cloud: each eigenvalue keeps the word id, the twist
    alpha, and the matrix size N it came from; the cloud keeps sigma, the
    generation parameters, and the seed."""

    def __init__(self, sigma, params=None, seed=None):
        self.sigma = float(sigma)
        self.params = dict(params or {})
        self.seed = seed
        self.words = {}
        self._points = []
        self._word_id = []
        self._alpha = []
        self._N = []

    def register_word(self, word_id, pattern):
        self.words[int(word_id)] = pattern

    def add(self, points, word_id, alpha, N):
        """Append points sharing one (word, alpha, N) tag."""
        pts = np.asarray(points, dtype=complex).ravel()
        if not np.all(np.isfinite(pts.view(float))):
            raise ValueError("non-finite spectrum points")
        self._points.append(pts)
        n = len(pts)
        self._word_id.append(np.full(n, int(word_id)))
        self._alpha.append(np.full(n, complex(alpha)))
        self._N.append(np.full(n, int(N)))

    @property
    def points(self):
        if not self._points:
            return np.zeros(0, dtype=complex)
        return np.concatenate(self._points)

    @property
    def word_id(self):
        return np.concatenate(self._word_id) if self._word_id else np.zeros(0, int)

    @property
    def alpha(self):
        return np.concatenate(self._alpha) if self._alpha else np.zeros(0, complex)

    @property
    def N(self):
        return np.concatenate(self._N) if self._N else np.zeros(0, int)

    def __len__(self):
        return sum(len(p) for p in self._points)

    def sort(self):
        """Reorder all columns by (re, im, N, word_id, alpha); makes output
        independent of generation order."""
        pts, wid, al, nn = self.points, self.word_id, self.alpha, self.N
        order = np.lexsort((al.imag, al.real, wid, nn, pts.imag, pts.real))
        self._points = [pts[order]]
        self._word_id = [wid[order]]
        self._alpha = [al[order]]
        self._N = [nn[order]]
        return self

    def write_csv(self, path, command=None):
        with open(path, "w") as f:
            f.write(f"# hopsign {__version__}\n")
            if command:
                f.write(f"# command: {command}\n")
            f.write(f"# sigma = {self.sigma:.17g}\n")
            if self.seed is not None:
                f.write(f"# seed = {self.seed}\n")
            for k in sorted(self.params):
                f.write(f"# {k} = {self.params[k]}\n")
            for wid in sorted(self.words):
                f.write(f"# word {wid} {self.words[wid]}\n")
            f.write("# columns: re, im, N, word_id, alpha_re, alpha_im\n")
            pts, wid, al, nn = self.points, self.word_id, self.alpha, self.N
            for i in range(len(pts)):
                f.write("%.17g, %.17g, %d, %d, %.17g, %.17g\n" % (
                    pts[i].real, pts[i].imag, nn[i], wid[i],
                    al[i].real, al[i].imag))


def _word_pattern(word):
    return "".join("+" if s > 0 else "-" for s in word.signs)


def build_finite(c):
    """Open N x N section from the N-1 subdiagonal values c_1..c_{N-1}:
    zero diagonal, unit superdiagonal."""
    c = [float(v) for v in np.asarray(c, dtype=float).ravel()]
    if len(c) < 1:
        raise ValueError("need at least one subdiagonal value")
    n = len(c) + 1
    a = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    a[idx, idx + 1] = 1.0
    a[idx + 1, idx] = c
    return DenseMatrix(a)


def build_periodic(c, alpha):
    """Periodised N x N section from the N values c_1..c_N: the open section
    on c_1..c_{N-1} plus corners (1,N) = alpha c_N and (N,1) = 1/alpha."""
    c = [float(v) for v in np.asarray(c, dtype=float).ravel()]
    n = len(c)
    if n < 3:
        raise ValueError("periodised section needs N >= 3 (corners must not "
                         "collide with the band)")
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > 1e-12:
        raise ValueError(f"|alpha| = {abs(alpha)} is not 1")
    a = build_finite(c[:-1]).entries
    a[0, n - 1] = alpha * c[-1]
    a[n - 1, 0] = 1.0 / alpha
    return DenseMatrix(a)


def _periodic_stack(c, alphas):
    """(B, N, N) stack of periodised sections over many twists."""
    c = np.asarray(c, dtype=float).ravel()
    n = len(c)
    alphas = np.asarray(alphas, dtype=complex).ravel()
    base = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    base[idx, idx + 1] = 1.0
    base[idx + 1, idx] = c[:-1]
    stack = np.broadcast_to(base, (len(alphas), n, n)).copy()
    stack[:, 0, n - 1] = alphas * c[-1]
    stack[:, n - 1, 0] = 1.0 / alphas
    return stack


def _eigvals_chunked(stack):
    """eigvals_stack in memory-bounded chunks."""
    B, n, _ = stack.shape
    step = max(64, _CHUNK_ELEMS // (n * n))
    if B <= step:
        return eigvals_stack(stack)
    out = np.empty((B, n), dtype=complex)
    for k in range(0, B, step):
        out[k:k + step] = eigvals_stack(stack[k:k + step])
    return out


def unit_grid(count):
    """count uniformly spaced twists on the unit circle, starting at 1."""
    if count < 1:
        raise ValueError("need at least one grid point")
    return np.exp(2j * np.pi * np.arange(count) / count)


def _assert_inclusion(points, sigma):
    """Every periodised-section eigenvalue must lie in the closed annulus
    <1-sigma, 1+sigma> and the diamond |x|+|y| <= sqrt(2(1+sigma^2)); a
    violation beyond 1e-9 means the solver (or the builder) is broken, so
    every generated cloud pays this cheap check."""
    pts = np.asarray(points, dtype=complex)
    mod = np.abs(pts)
    l1 = np.abs(pts.real) + np.abs(pts.imag)
    bad = ((mod < 1.0 - sigma - 1e-9) | (mod > 1.0 + sigma + 1e-9)
           | (l1 > np.sqrt(2.0 * (1.0 + sigma * sigma)) + 1e-9))
    if bad.any():
        z = pts[bad][0]
        raise RuntimeError(
            f"eigenvalue {z} violates the periodic inclusion bounds at "
            f"sigma={sigma}; solver output is not trustworthy")


def closed_form_star(m, branch, sigma=1.0):
    """Exact spectrum of the m-th iterate word at sigma = 1: the union of
    2^(m+1) segments from the origin, length 2^(1/2^m), along the angles
    pi j / 2^m ('+' branch) or rotated by pi / 2^(m+1) ('-' branch).

    Returns (starts, ends) arrays describing the segments."""
    if branch not in ("+", "-"):
        raise ValueError("branch must be '+' or '-'")
    if sigma != 1.0:
        raise ValueError("closed-form star spectra exist only at sigma = 1")
    if m < 0:
        raise ValueError("m must be >= 0")
    radius = 2.0 ** (1.0 / 2 ** m)
    off = 0.0 if branch == "+" else np.pi / 2 ** (m + 1)
    ang = np.pi * np.arange(2 ** (m + 1)) / 2 ** m + off
    ends = radius * np.exp(1j * ang)
    return np.zeros_like(ends), ends


def _bloch_word(word):
    """Matrix form of a word: periods 1 and 2 are doubled to 4 (the operator
    is unchanged; the section just needs N >= 3)."""
    if word.period < 3:
        return word.repeated(4 // word.period)
    return word


def bloch_spectrum(word, alpha_count):
    """Union of periodised-section spectra over the uniform alpha grid."""
    w = _bloch_word(word)
    alphas = unit_grid(alpha_count)
    cloud = SpectrumCloud(word.sigma, params={"alpha_count": alpha_count})
    cloud.register_word(0, _word_pattern(word))
    eig = _eigvals_chunked(_periodic_stack(w.cvals(), alphas))
    _assert_inclusion(eig, word.sigma)
    for k, al in enumerate(alphas):
        cloud.add(eig[k], 0, al, w.period)
    return cloud


def enumerate_words(n_max, sigma=1.0):
    """One representative per rotation class of each primitive word of
    period <= n_max, in (period, lexicographic) order.  Primitive means the
    minimal period equals the length, so every periodic sequence of period
    <= n_max appears exactly once."""
    out = []
    for n in range(1, n_max + 1):
        for bits in range(2 ** n):
            signs = tuple(1 if (bits >> i) & 1 else -1 for i in range(n))
            rots = [signs[k:] + signs[:k] for k in range(n)]
            if min(rots) != signs:
                continue
            if any(all(signs[j] == signs[j % d] for j in range(n))
                   for d in range(1, n) if n % d == 0):
                continue
            out.append(SignWord(signs, sigma))
    return out


def pi_union(n_max, sigma, alpha_count, ceiling=14):
    """Union of bloch_spectrum over every periodic word of period <= n_max
    (one representative per rotation class), sorted for determinism."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max > ceiling:
        raise ValueError(f"n_max = {n_max} exceeds the ceiling {ceiling} "
                         f"(2^N words per period N)")
    words = enumerate_words(n_max, sigma)
    cloud = SpectrumCloud(sigma, params={"n_max": n_max,
                                         "alpha_count": alpha_count})
    alphas = unit_grid(alpha_count)
    by_size = {}
    for wid, word in enumerate(words):
        cloud.register_word(wid, _word_pattern(word))
        mat_word = _bloch_word(word)
        by_size.setdefault(mat_word.period, []).append((wid, mat_word))
    for size in sorted(by_size):
        group = by_size[size]
        stacks = [_periodic_stack(w.cvals(), alphas) for _, w in group]
        eig = _eigvals_chunked(np.concatenate(stacks))
        _assert_inclusion(eig, sigma)
        for g, (wid, w) in enumerate(group):
            block = eig[g * alpha_count:(g + 1) * alpha_count]
            for k, al in enumerate(alphas):
                cloud.add(block[k], wid, al, size)
    return cloud.sort()


def _generator(*key_words):
    """Counter-based RNG stream for a tuple of integer key words; distinct
    keys give independent reproducible streams."""
    mix = 0
    for w in key_words[1:]:
        mix = (mix * 1_000_003 + int(w)) % (1 << 64)
    return np.random.Generator(np.random.Philox(key=[int(key_words[0]) % (1 << 64), mix]))


def random_periodic_sample(count, n_range=(3, 100), p_sigma=0.5, sigma=0.5,
                           seed=0):
    """count independent draws: N in n_range with weight 1/N (small sizes
    favored), signs +sigma with probability p_sigma, twist alpha uniform on
    the circle; eigenvalues of the periodised sections."""
    lo, hi = int(n_range[0]), int(n_range[1])
    if lo < 3 or hi < lo:
        raise ValueError("n_range must satisfy 3 <= lo <= hi")
    if not 0.0 < p_sigma < 1.0:
        raise ValueError("p_sigma must be in (0, 1)")
    sizes = np.arange(lo, hi + 1)
    cdf = np.cumsum(1.0 / sizes)
    cdf /= cdf[-1]
    draws = []
    for k in range(count):
        g = _generator(seed, 11, k)
        n = int(sizes[np.searchsorted(cdf, g.random())])
        signs = np.where(g.random(n) < p_sigma, 1.0, -1.0)
        alpha = complex(np.exp(2j * np.pi * g.random()))
        draws.append((k, sigma * signs, alpha))
    cloud = SpectrumCloud(sigma, seed=seed,
                          params={"count": count, "n_lo": lo, "n_hi": hi,
                                  "p_sigma": p_sigma})
    by_size = {}
    for k, c, alpha in draws:
        by_size.setdefault(len(c), []).append((k, c, alpha))
    for size in sorted(by_size):
        group = by_size[size]
        stack = np.concatenate([_periodic_stack(c, [alpha])
                                for _, c, alpha in group])
        eig = _eigvals_chunked(stack)
        _assert_inclusion(eig, sigma)
        for row, (k, c, alpha) in enumerate(group):
            cloud.register_word(k, "".join("+" if v > 0 else "-" for v in c))
            cloud.add(eig[row], k, alpha, size)
    return cloud


def random_finite_sample(n, p_sigma=0.5, sigma=0.5, seed=0, periodic=False,
                         alpha=None):
    """One realization of an i.i.d. sign vector of length n; the open and
    the periodised sections of the same draw share the c vector (the stream
    key depends only on (seed, n, p_sigma))."""
    if n < 3:
        raise ValueError("need n >= 3")
    if not 0.0 < p_sigma < 1.0:
        raise ValueError("p_sigma must be in (0, 1)")
    g = _generator(seed, 13, n, int(round(p_sigma * 10 ** 9)))
    c = sigma * np.where(g.random(n) < p_sigma, 1.0, -1.0)
    if periodic:
        if alpha is None:
            alpha = complex(np.exp(2j * np.pi * g.random()))
        m = build_periodic(c, alpha)
    else:
        alpha = 1.0
        m = build_finite(c[:-1])
    cloud = SpectrumCloud(sigma, seed=seed,
                          params={"n": n, "p_sigma": p_sigma,
                                  "periodic": periodic})
    cloud.register_word(0, "".join("+" if v > 0 else "-" for v in c))
    vals = eigvals(m)
    if periodic:
        _assert_inclusion(vals, sigma)
    cloud.add(vals, 0, alpha, m.n)
    return cloud


def _m_ring_stack(mw, alphas):
    """(B, P, P) stack of periodised sections of the companion operator:
    diagonal mw.diag, subdiagonal mw.sub, superdiagonal 1, corners
    (1,P) = alpha * mw.sub and (P,1) = 1/alpha."""
    p = mw.period
    alphas = np.asarray(alphas, dtype=complex).ravel()
    base = np.zeros((p, p), dtype=complex)
    idx = np.arange(p - 1)
    base[idx, idx + 1] = 1.0
    base[idx + 1, idx] = mw.sub
    base[np.arange(p), np.arange(p)] = mw.diag
    stack = np.broadcast_to(base, (len(alphas), p, p)).copy()
    stack[:, 0, p - 1] = alphas * mw.sub
    stack[:, p - 1, 0] = 1.0 / alphas
    return stack


def square_spectrum_check(b, alpha_count):
    """Cross-check of the square identity on one word b (amplitude sigma^2).

    For c the square-root image of b, squaring the period-4N section of c at
    twist alpha splits over the odd and even sublattices into the period-2N
    section of b and the period-2N companion section M_b at the same twist.
    So per alpha the squared spectrum must equal the union of the two ring
    spectra, and all three alpha-grid clouds trace the same set.

    Returns the symmetric Hausdorff distances (squared cloud vs b cloud, and
    companion cloud vs b cloud) plus the worst per-alpha multiset mismatch.
    """
    if b.period > 8:
        raise ValueError("desk-scale check: word period must be <= 8")
    bw = b.repeated(2) if b.period == 1 else b
    nb = bw.period
    c_red = gamma_plus_word(bw)
    c_cover = c_red.repeated(4 * nb // c_red.period)
    b_cover = bw.repeated(2)
    mw = m_word(bw)
    alphas = unit_grid(alpha_count)

    ec = _eigvals_chunked(_periodic_stack(c_cover.cvals(), alphas))
    _assert_inclusion(ec, c_red.sigma)
    sq = ec ** 2
    eb = _eigvals_chunked(_periodic_stack(b_cover.cvals(), alphas))
    _assert_inclusion(eb, bw.sigma)
    em = _eigvals_chunked(_m_ring_stack(mw, alphas))

    per_alpha = 0.0
    for k in range(alpha_count):
        both = np.concatenate([eb[k], em[k]])
        per_alpha = max(per_alpha, matching_distance(sq[k], both))
    return {
        "hausdorff_sq_vs_b": hausdorff(sq.ravel(), eb.ravel()),
        "hausdorff_m_vs_b": hausdorff(em.ravel(), eb.ravel()),
        "per_alpha_mismatch": per_alpha,
        "period": c_cover.period,
        "alpha_count": alpha_count,
    }


def ue_bound_check(lam, i_max):
    """Iterate u_{n+1} = lam u_n - c~_n u_{n-1} from (u_0, u_1) = (0, 1) and
    report max |u_i| over i <= i_max against the bound 1/(1 - |lam|).

    lam may be a scalar or an array (all entries iterated in lockstep)."""
    lam = np.asarray(lam, dtype=complex)
    scalar = lam.ndim == 0
    lam = np.atleast_1d(lam)
    if np.any(np.abs(lam) > 0.99):
        raise ValueError("|lam| must be <= 0.99")
    if not 1 <= i_max <= 10 ** 6:
        raise ValueError("i_max must be in [1, 10^6]")
    ct = c_tilde_array(max(1, i_max - 1))
    prev = np.zeros_like(lam)
    cur = np.ones_like(lam)
    top = np.ones(lam.shape)
    for n in range(1, i_max):
        prev, cur = cur, lam * cur - float(ct[n]) * prev
        np.maximum(top, np.abs(cur), out=top)
    bound = 1.0 / (1.0 - np.abs(lam))
    ok = top <= bound + 1e-9
    if scalar:
        return {"max_abs": float(top[0]), "bound": float(bound[0]),
                "ok": bool(ok[0])}
    return {"max_abs": top, "bound": bound, "ok": ok}


def symmetry_check(cloud, tol=1e-8):
    """Closure of a full-enumeration cloud under conjugation and under
    multiplication by i, as max nearest-neighbor distance of the transformed
    points to the original set."""
    pts = cloud.points
    if len(pts) == 0:
        raise ValueError("empty cloud")
    conj_max = float(nn_distances(np.conj(pts), pts).max())
    rot_max = float(nn_distances(1j * pts, pts).max())
    return {"conj_max": conj_max, "rot_max": rot_max, "tol": tol,
            "ok": conj_max <= tol and rot_max <= tol}

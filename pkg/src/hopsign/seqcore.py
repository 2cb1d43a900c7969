"""Sign-sequence types and the square-root maps acting on them.

A coefficient sequence is a bi-infinite sequence c with c_n = +sigma or
-sigma.  Periodic sequences are stored as SignWord (a list of signs plus the
amplitude), finite non-periodic pieces as SeqWindow (an indexed window of
values).

The central transform is Gamma_plus: given b with amplitude sigma^2, the
image c = Gamma_plus(b) is the unique sequence with amplitude sigma such that

    c_0 = sigma,   c_{2n} + c_{2n+1} = 0,   c_{2n} c_{2n-1} = b_n.

Writing c_{2n} = sigma * s_n these relations reduce to pure sign arithmetic:
s_0 = 1 and s_n = -sign(b_n) * s_{n-1}, which is what everything below
iterates.  Gamma_minus is Gamma_plus conjugated by the space inversion
b -> b^ with (b^)_n = b_{1-n}.

The sequence c-tilde (c_tilde below) is defined for n >= 1 by c~_1 = 1,
c~_{2n} = c~_{2n-1} c~_n, c~_{2n} + c~_{2n+1} = 0.  It agrees with the
fixed point of Gamma_plus at every index n >= 2; the fixed point itself has
entry -1 at index 1 (forced by the pair relation c_0 + c_1 = 0), which the
c-tilde convention flips to +1.
"""

import math
import threading

import numpy as np


class SignWord:
    """An N-periodic sign sequence c_n = sigma * signs[n mod N].

    Index origin: position 0 of `signs` is the sign of c_0.  Rotating the
    sign list changes the represented sequence but not its spectrum;
    canonicalization is applied only explicitly (never on construction).
    """

    def __init__(self, signs, sigma=1.0):
        signs = tuple(int(s) for s in signs)
        if len(signs) < 1:
            raise ValueError("need at least one sign")
        if any(s not in (-1, 1) for s in signs):
            raise ValueError("signs must be +1 or -1")
        sigma = float(sigma)
        if not 0.0 < sigma <= 1.0:
            raise ValueError("sigma must be in (0, 1]")
        self.signs = signs
        self.sigma = sigma

    @property
    def period(self):
        return len(self.signs)

    def c(self, n):
        """Value c_n of the represented sequence."""
        return self.sigma * self.signs[n % len(self.signs)]

    def cvals(self, count=None):
        """The values c_1, ..., c_count (default count = period).

        This is the order in which subdiagonal entries and transfer-matrix
        factors consume the word.
        """
        if count is None:
            count = len(self.signs)
        return [self.c(n) for n in range(1, count + 1)]

    def rotated(self, k):
        """Word representing the shifted sequence n -> c_{n+k}."""
        n = len(self.signs)
        k %= n
        return SignWord(self.signs[k:] + self.signs[:k], self.sigma)

    def canonical(self):
        """Lexicographically least rotation; use only when deduplicating."""
        n = len(self.signs)
        best = min(self.signs[k:] + self.signs[:k] for k in range(n))
        return SignWord(best, self.sigma)

    def repeated(self, times):
        return SignWord(self.signs * int(times), self.sigma)

    def reduced(self):
        """Minimal-period form, plus the reduction factor.

        Returns (word, factor) where factor = period // minimal period.
        """
        n = len(self.signs)
        for d in range(1, n + 1):
            if n % d:
                continue
            if all(self.signs[j] == self.signs[j % d] for j in range(n)):
                return SignWord(self.signs[:d], self.sigma), n // d
        return self, 1  # unreachable, d = n always matches

    def __eq__(self, other):
        return (isinstance(other, SignWord) and self.signs == other.signs
                and self.sigma == other.sigma)

    def __hash__(self):
        return hash((self.signs, self.sigma))

    def __repr__(self):
        pat = "".join("+" if s > 0 else "-" for s in self.signs)
        return f"SignWord({pat}, sigma={self.sigma})"


class SeqWindow:
    """Values c_lo .. c_hi of a sequence, all of modulus sigma."""

    def __init__(self, lo, values):
        self.lo = int(lo)
        self.values = tuple(float(v) for v in values)
        if not self.values:
            raise ValueError("empty window")
        self.hi = self.lo + len(self.values) - 1
        sigma = abs(self.values[0])
        if any(abs(abs(v) - sigma) > 1e-12 for v in self.values):
            raise ValueError("window values must all have the same modulus")
        self.sigma = sigma

    def value(self, n):
        if not self.lo <= n <= self.hi:
            raise IndexError(f"index {n} outside window [{self.lo}, {self.hi}]")
        return self.values[n - self.lo]

    def sliced(self, lo, hi):
        if lo < self.lo or hi > self.hi or lo > hi:
            raise IndexError("slice outside window")
        return SeqWindow(lo, self.values[lo - self.lo:hi - self.lo + 1])

    def __eq__(self, other):
        return (isinstance(other, SeqWindow) and self.lo == other.lo
                and self.values == other.values)

    def __repr__(self):
        return f"SeqWindow([{self.lo},{self.hi}], sigma={self.sigma})"


class DiagWord:
    """Periodic data of the companion operator M_b sitting on the odd sites
    of the squared operator: subdiagonal constant -sigma^2, diagonal entries
    d_k = c_{2k+1} + c_{2k+2} in {-2 sigma, 0, +2 sigma}, superdiagonal 1.
    """

    def __init__(self, diag, sub, sigma):
        self.diag = tuple(float(v) for v in diag)
        self.sub = float(sub)
        self.sup = 1.0
        self.sigma = float(sigma)
        self.period = len(self.diag)
        for v in self.diag:
            if min(abs(v), abs(abs(v) - 2 * self.sigma)) > 1e-12:
                raise ValueError("diagonal entries must lie in {0, +-2 sigma}")

    def __repr__(self):
        return f"DiagWord(diag={self.diag}, sub={self.sub})"


def _resolve_sigma(b, sigma):
    """Output amplitude for a square-root map applied to b.

    The caller may supply sigma directly (exact, preferred); otherwise we
    take math.sqrt of b's amplitude.  Either way sigma^2 must reproduce the
    input amplitude to rounding accuracy.
    """
    if sigma is None:
        sigma = math.sqrt(b.sigma)
    sigma = float(sigma)
    if not 0.0 < sigma <= 1.0 or abs(sigma * sigma - b.sigma) > 1e-12:
        raise ValueError(
            f"amplitude {b.sigma} is not the square of admissible sigma {sigma}")
    return sigma


def _gamma_signs(bsigns):
    """One 4N-period of signs of Gamma_plus(b), for b given by signs only.

    Entry j of the result is the sign of c_j, j = 0 .. 4N-1.
    """
    N = len(bsigns)
    s = [1]
    for n in range(1, 2 * N):
        s.append(-bsigns[n % N] * s[-1])
    w = []
    for n in range(2 * N):
        w.append(s[n])
        w.append(-s[n])
    return w


def gamma_plus_word(b, sigma=None):
    """Square-root map on periodic words: b (amplitude sigma^2, period N)
    maps to the word of period 4N satisfying the defining relations, reduced
    to its minimal period.  The reduction factor is recorded on the result
    as attribute `period_reduction`.
    """
    sigma = _resolve_sigma(b, sigma)
    w = _gamma_signs(b.signs)
    word, factor = SignWord(w, sigma).reduced()
    word.period_reduction = factor
    return word


def gamma_plus_window(b, sigma=None):
    """Square-root map on a finite window.

    b must cover index 0.  The output covers [2*lo, 2*hi+1], the index set
    the relations determine from b's window with c_0 pinned to +sigma.
    """
    if not b.lo <= 0 <= b.hi:
        raise ValueError("window must contain index 0")
    sigma = _resolve_sigma(b, sigma)
    bsign = {n: (1 if b.value(n) > 0 else -1) for n in range(b.lo, b.hi + 1)}
    s = {0: 1}
    for n in range(1, b.hi + 1):
        s[n] = -bsign[n] * s[n - 1]
    for n in range(0, b.lo, -1):
        s[n - 1] = -bsign[n] * s[n]
    vals = []
    for j in range(2 * b.lo, 2 * b.hi + 2):
        sj = s[j // 2] if j % 2 == 0 else -s[(j - 1) // 2]
        vals.append(sigma * sj)
    return SeqWindow(2 * b.lo, vals)


def hat_inversion(b):
    """Space inversion (b^)_n = b_{1-n}; window [lo, hi] -> [1-hi, 1-lo]."""
    return SeqWindow(1 - b.hi, b.values[::-1])


def gamma_minus_window(b, sigma=None):
    """Gamma_minus = hat o Gamma_plus o hat."""
    return hat_inversion(gamma_plus_window(hat_inversion(b), sigma))


def fixed_point_window(n, sigma=1.0):
    """sigma times the fixed point of Gamma_plus on the window
    [2 - 2^n, 2^n - 1], obtained by n-fold iteration.

    The n-fold image of any start agrees with the fixed point there; we
    iterate from the two constant starts and assert agreement.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    outs = []
    for start in (1.0, -1.0):
        w = SeqWindow(-1, [start, start, start])
        for _ in range(n):
            w = gamma_plus_window(w, 1.0)
        outs.append(w.sliced(2 - 2 ** n, 2 ** n - 1))
    if outs[0].values != outs[1].values:
        raise AssertionError("iterates from distinct starts disagree")
    return SeqWindow(outs[0].lo, [sigma * v for v in outs[0].values])


def c_iterate_word(m, branch, sigma=1.0):
    """The m-th iterate word: m-fold Gamma_plus image of the constant word
    of the given branch ('+' or '-'), scaled to amplitude sigma.
    Period divides 4^m (minimal-period reduction applied).
    """
    if branch not in ("+", "-"):
        raise ValueError("branch must be '+' or '-'")
    if m < 0:
        raise ValueError("m must be >= 0")
    signs = (1,) if branch == "+" else (-1,)
    word = SignWord(signs, 1.0)
    for _ in range(m):
        w = _gamma_signs(word.signs)
        word, _ = SignWord(w, 1.0).reduced()
    return SignWord(word.signs, sigma)


def m_word(b, sigma=None):
    """Companion word of the operator M_b living on the odd sites of the
    squared operator, for c = Gamma_plus(b): diagonal d_k = c_{2k+1} + c_{2k+2}
    over one 2N covering period, subdiagonal constant -sigma^2.

    The subdiagonal value equals -b.sigma exactly (no square root involved).
    """
    sigma = _resolve_sigma(b, sigma)
    w = _gamma_signs(b.signs)  # covering period 4N, unreduced
    P = len(w)
    diag = []
    for k in range(P // 2):
        diag.append(sigma * (w[(2 * k + 1) % P] + w[(2 * k + 2) % P]))
    return DiagWord(diag, -b.sigma, sigma)


# c-tilde values, grown on demand under a lock.  The defining recursion is
# sequential through the odd entries, so a naive top-down memo would recurse
# to depth O(n); instead the cache doubles via the closed form
# c~_{2n} = (-1)**(n-1) * prod(c~_1..c~_n), c~_{2n+1} = -c~_{2n},
# which follows from c~_{2n} = c~_{2n-1} c~_n = -c~_{2n-2} c~_n.
_ct_lock = threading.Lock()
_ct_cache = np.array([0, 1, 1, -1], dtype=np.int8)  # index 0 unused


def c_tilde_array(nmax):
    """Read-only array a with a[n] = c~_n for 1 <= n <= nmax."""
    global _ct_cache
    if nmax < 1:
        raise ValueError("nmax must be >= 1")
    if len(_ct_cache) - 1 < nmax:
        with _ct_lock:
            arr = _ct_cache
            while len(arr) - 1 < nmax:
                M = len(arr) - 1
                prod = np.cumprod(arr[1:M + 1], dtype=np.int8)
                n = np.arange(1, M + 1)
                even = np.where(n % 2 == 1, prod, -prod).astype(np.int8)
                new = np.empty(2 * M + 2, dtype=np.int8)
                new[:M + 1] = arr
                new[2 * n] = even
                new[2 * n + 1] = -even
                arr = new
            _ct_cache = arr
    return _ct_cache[:nmax + 1]


def c_tilde(n):
    """c~_n for n >= 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return int(c_tilde_array(n)[n])

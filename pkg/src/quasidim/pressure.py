"""Partition sums over the preimage tree of alpha and pressure estimators.

For ``psi = -s*log|f'|`` the weighted sum over the ``2**n`` points of
``f^{-n}(alpha)`` is

    Delta_n(c, s) = sum_words exp(-s * sum_{prefixes p} log(2|xi(p)|)).

All sums are carried in log space. The tree is cut at a depth that
depends on ``n`` only; each chunk is grown independently (optionally on
a thread pool) and every reduction is a fixed-shape pairwise sum over the
concatenated chunks, so the result does not depend on the worker count.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import kernels
from .coding import MAX_DEPTH, DyadicRational, DyadicWord, _coded_step, as_word
from .dynamics import Parameter, fixed_point_alpha
from .errors import CriticalCollision, NoConvergence

LOG2 = math.log(2.0)

# Chunk layout: at least 2**SPLIT_DEPTH chunks, each at most 2**CHUNK_DEPTH nodes.
SPLIT_DEPTH = 4
CHUNK_DEPTH = 20
# Trees whose level n-1 fits in 2**CACHE_DEPTH nodes keep their arrays.
CACHE_DEPTH = 22
# Forward check applied to every converged periodic point.
PERIODIC_RESIDUAL = 1e-9


@dataclass(frozen=True)
class PressureSample:
    n: int
    s: float
    log_delta: float
    p_raw: float
    p_ratio: Optional[float] = None


def _split_depth(n):
    return min(n - 1, max(SPLIT_DEPTH, n - 1 - CHUNK_DEPTH))


def _check_n(n, upper=MAX_DEPTH):
    if not 1 <= n <= upper:
        raise ValueError(f"n must lie in 1..{upper}, got {n}")


class PreimageTree:
    """Accumulated log-derivative sums for the depth-``n`` preimage tree.

    Holds, per chunk, the sums over the level ``n-1`` nodes (``prev``) and
    over their children (``leaf``). Siblings share a modulus, so each
    ``leaf`` entry stands for two leaves.

    Parameters
    ----------
    c : Parameter or complex
    n : int
        Tree depth, ``1 <= n <= 30``.
    threads : int
        Workers used to grow chunks. Never changes the result.
    """

    def __init__(self, c, n, threads=1):
        self.param = Parameter.of(c)
        _check_n(n)
        self.n = n
        self.threads = max(1, int(threads))
        self.split = _split_depth(n)
        c = self.param.c
        self._root_xi, self._root_ls = kernels.grow_tree(fixed_point_alpha(self.param), 0.0,
                                                         c, self.split)
        self._cached = n - 1 <= CACHE_DEPTH
        chunks = self._grow_all()
        self._prev_min = np.array([ch[0].min() for ch in chunks])
        self._prev_max = np.array([ch[0].max() for ch in chunks])
        self._leaf_min = np.array([ch[1].min() for ch in chunks])
        self._leaf_max = np.array([ch[1].max() for ch in chunks])
        self._chunks = chunks if self._cached else None

    def _grow_chunk(self, j):
        c = self.param.c
        xi, prev = kernels.grow_tree(self._root_xi[j], self._root_ls[j], c,
                                     self.n - 1 - self.split)
        leaf = kernels.leaf_step(xi, prev, c)
        if not (np.all(np.isfinite(prev)) and np.all(np.isfinite(leaf))):
            bad = int(np.argmin(np.where(np.isfinite(leaf), 0, -1)))
            index = (j << (self.n - 1 - self.split)) | bad
            word = DyadicWord.from_index(index, self.n - 1) if self.n > 1 else None
            raise CriticalCollision(f"tree passes through the critical point below {word}",
                                    word)
        return prev, leaf

    def _grow_all(self):
        count = len(self._root_xi)
        if self.threads == 1 or count == 1:
            return [self._grow_chunk(j) for j in range(count)]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(self._grow_chunk, range(count)))

    def _chunks_iter(self):
        return self._chunks if self._cached else self._grow_all()

    def log_deltas(self, s):
        """``(log Delta_{n-1}, log Delta_n)`` at exponent ``s``, from one traversal."""
        s = float(s)
        if s >= 0:
            shift_prev = -s * float(self._prev_min.min())
            shift_leaf = -s * float(self._leaf_min.min())
        else:
            shift_prev = -s * float(self._prev_max.max())
            shift_leaf = -s * float(self._leaf_max.max())
        prev_sums = []
        leaf_sums = []
        for prev, leaf in self._chunks_iter():
            prev_sums.append(kernels.shifted_exp_sum(prev, s, shift_prev))
            leaf_sums.append(kernels.shifted_exp_sum(leaf, s, shift_leaf))
        prev_total = kernels.pairwise_sum(np.array(prev_sums))
        leaf_total = kernels.pairwise_sum(np.array(leaf_sums))
        return (shift_prev + math.log(prev_total),
                LOG2 + shift_leaf + math.log(leaf_total))

    def log_delta(self, s):
        return self.log_deltas(s)[1]

    def leaf_logsums(self):
        """Level-``n`` Birkhoff sums, one entry per sibling pair, chunk order."""
        return np.concatenate([leaf for _, leaf in self._chunks_iter()])


@lru_cache(maxsize=4)
def _cached_tree(c, regime, n):
    return PreimageTree(Parameter(c, regime), n)


def preimage_tree(c, n, threads=1):
    """Tree for ``(c, n)``; small trees are memoised."""
    p = Parameter.of(c)
    if n - 1 <= CACHE_DEPTH and threads == 1:
        return _cached_tree(p.c, p.regime, n)
    return PreimageTree(p, n, threads=threads)


def birkhoff_logsum(c, word):
    """``sum_k log(2|xi(word|k)|)`` over every prefix of ``word``."""
    p = Parameter.of(c)
    word = as_word(word)
    z = fixed_point_alpha(p)
    q = DyadicRational(0)
    total = 0.0
    for b in word:
        z, q = _coded_step(p.c, z, q, b)
        total += math.log(2.0 * abs(z))
    return total


def delta_n(c, s, n, threads=1):
    """Natural log of ``Delta_n(c, s)``."""
    return preimage_tree(c, n, threads).log_delta(s)


def pressure_raw(c, s, n, threads=1):
    """``log Delta_n / n``."""
    return delta_n(c, s, n, threads) / n


def pressure_ratio(c, s, n, threads=1):
    """``log Delta_n - log Delta_{n-1}``, converging geometrically in ``n``."""
    if n < 2:
        raise ValueError("pressure_ratio needs n >= 2")
    prev, cur = preimage_tree(c, n, threads).log_deltas(s)
    return cur - prev


def pressure_sample(c, s, n, threads=1):
    prev, cur = preimage_tree(c, n, threads).log_deltas(s)
    return PressureSample(n=n, s=float(s), log_delta=cur, p_raw=cur / n,
                          p_ratio=cur - prev if n >= 2 else None)


def _word_bits(n):
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.int64)


def periodic_orbits(c, n, tol=1e-13, max_iter=10_000):
    """Coded period-``n`` points and their Birkhoff sums.

    Word ``e`` is mapped to the limit of repeatedly applying its ``n``
    phase-labelled inverse branches (``e1`` first) starting from alpha.
    The reference phase of the labelling is the fixed point of
    ``Q -> e_k + Q/2`` around the word, so the map is a contraction
    near the Julia set. The all-zero and all-one words share the limit
    alpha; that single duplicate is kept.

    Returns
    -------
    z : ndarray, shape (2**n,)
    logsum : ndarray
        ``sum_{k<n} log(2|f^k z|)`` for each point.
    """
    p = Parameter.of(c)
    _check_n(n, 16)
    cc = p.c
    bits = _word_bits(n)
    q_word = np.zeros(1 << n)
    for k in range(n):
        q_word = bits[:, k] + q_word / 2.0
    q_start = q_word / (1.0 - 2.0 ** -n)
    refs = np.empty((n, 1 << n), np.complex128)
    q = q_start
    for k in range(n):
        q = bits[:, k] + q / 2.0
        refs[k] = np.exp(1j * np.pi * q)

    z = np.full(1 << n, fixed_point_alpha(p), np.complex128)
    active = np.ones(1 << n, dtype=bool)
    logsum = np.zeros(1 << n)
    for _ in range(max_iter):
        w = z[active]
        acc = np.zeros(w.size)
        for k in range(n):
            root = np.sqrt(w - cc + 0j)
            ref = refs[k, active]
            w = np.where((root * ref.conj()).real < 0, -root, root)
            acc += np.log(2.0 * np.abs(w))
        step = np.abs(w - z[active])
        z[active] = w
        logsum[active] = acc
        done = step < tol
        if done.all():
            break
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    else:
        bad = int(np.flatnonzero(active)[0])
        raise NoConvergence(f"periodic iteration did not settle for word "
                            f"{DyadicWord.from_index(bad, n)}", DyadicWord.from_index(bad, n))
    w = z.copy()
    for _ in range(n):
        w = w * w + cc
    resid = np.abs(w - z)
    if resid.max() > PERIODIC_RESIDUAL:
        bad = int(np.argmax(resid))
        word = DyadicWord.from_index(bad, n)
        raise NoConvergence(f"|f^n(z) - z| = {resid[bad]:.3g} for word {word}", word)
    return z, logsum


def periodic_points(c, n, tol=1e-13, max_iter=10_000):
    """Period-``n`` points coded by all ``2**n`` words (see :func:`periodic_orbits`)."""
    return periodic_orbits(c, n, tol, max_iter)[0]


def _log_sum_exp(values):
    m = float(values.max())
    size = values.size
    padded = np.zeros(1 << max(0, (size - 1).bit_length()))
    padded[:size] = np.exp(values - m)
    return m + math.log(kernels.pairwise_sum(padded))


def pressure_periodic(c, s, n):
    """``(1/n) log sum_z exp(-s * sum_k log 2|f^k z|)`` over the coded period-``n`` points."""
    _, logsum = periodic_orbits(c, n)
    return _log_sum_exp(-float(s) * logsum) / n

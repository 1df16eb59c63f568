"""Hot loops: preimage-tree growth, pairwise reductions and inverse-iteration chains.

Every kernel has a compiled (numba) version and a pure-numpy version with
the same signature and the same arithmetic order. The module-level names
point at whichever backend :mod:`quasidim._accel` selected.

Trees are laid out in lexicographic order of their branch words, first
branch choice most significant. Bit 0 is the principal square root and
bit 1 its negation.
"""

import cmath
import math

import numpy as np

from ._accel import BACKEND, HAVE_NUMBA, njit

__all__ = [
    "BACKEND",
    "grow_tree",
    "leaf_step",
    "shifted_exp_sum",
    "pairwise_sum",
    "inverse_chain",
]


# -- numba ---------------------------------------------------------------


@njit(cache=True, nogil=True)
def _grow_tree_jit(xi0, logsum0, c, depth):
    size = 1 << depth
    xi_out = np.empty(size, np.complex128)
    ls_out = np.empty(size, np.float64)
    xs = np.empty(depth + 1, np.complex128)
    ls = np.empty(depth + 1, np.float64)
    roots = np.empty(depth + 1, np.complex128)
    xs[0] = xi0
    ls[0] = logsum0
    for j in range(size):
        start = 1
        if j > 0:
            t = 0
            while (j >> t) & 1 == 0:
                t += 1
            start = depth - t
        for lev in range(start, depth + 1):
            if (j >> (depth - lev)) & 1 == 0:
                r = cmath.sqrt(xs[lev - 1] - c + 0j)
                roots[lev] = r
                xs[lev] = r
                ls[lev] = ls[lev - 1] + math.log(2.0 * abs(r))
            else:
                # sibling: same parent, same modulus
                xs[lev] = -roots[lev]
        xi_out[j] = xs[depth]
        ls_out[j] = ls[depth]
    return xi_out, ls_out


@njit(cache=True, nogil=True)
def _leaf_step_jit(xi, logsum, c):
    out = np.empty(xi.size, np.float64)
    for i in range(xi.size):
        r = cmath.sqrt(xi[i] - c + 0j)
        out[i] = logsum[i] + math.log(2.0 * abs(r))
    return out


@njit(cache=True, nogil=True)
def _pairwise_inplace_jit(buf):
    m = buf.size
    while m > 1:
        m //= 2
        for i in range(m):
            buf[i] = buf[2 * i] + buf[2 * i + 1]
    return buf[0]


@njit(cache=True, nogil=True)
def _pairwise_sum_jit(x):
    return _pairwise_inplace_jit(x.copy())


@njit(cache=True, nogil=True)
def _shifted_exp_sum_jit(logsum, s, shift):
    buf = np.empty(logsum.size, np.float64)
    for i in range(logsum.size):
        buf[i] = math.exp(-s * logsum[i] - shift)
    return _pairwise_inplace_jit(buf)


@njit(cache=True, nogil=True)
def _inverse_chain_jit(z0, c, bits, burn_in):
    out = np.empty(bits.size - burn_in, np.complex128)
    z = z0
    for i in range(bits.size):
        w = z - c + 0j
        if abs(w) < 1e-300:
            return out, i
        r = cmath.sqrt(w)
        z = -r if bits[i] else r
        if i >= burn_in:
            out[i - burn_in] = z
    return out, -1


# -- numpy ---------------------------------------------------------------


def _grow_tree_numpy(xi0, logsum0, c, depth):
    xi = np.array([xi0], dtype=np.complex128)
    ls = np.array([logsum0], dtype=np.float64)
    for _ in range(depth):
        r = np.sqrt(xi - c + 0j)
        ls = np.repeat(ls + np.log(2.0 * np.abs(r)), 2)
        xi = np.stack([r, -r], axis=1).ravel()
    return xi, ls


def _leaf_step_numpy(xi, logsum, c):
    return logsum + np.log(2.0 * np.abs(np.sqrt(xi - c + 0j)))


def _pairwise_sum_numpy(x):
    buf = np.asarray(x, dtype=np.float64)
    while buf.size > 1:
        buf = buf[0::2] + buf[1::2]
    return float(buf[0])


def _shifted_exp_sum_numpy(logsum, s, shift):
    return _pairwise_sum_numpy(np.exp(-s * logsum - shift))


def _inverse_chain_numpy(z0, c, bits, burn_in):
    out = np.empty(bits.size - burn_in, np.complex128)
    z = complex(z0)
    c = complex(c)
    sqrt = cmath.sqrt
    for i, b in enumerate(bits.tolist()):
        w = z - c + 0j
        if abs(w) < 1e-300:
            return out, i
        r = sqrt(w)
        z = -r if b else r
        if i >= burn_in:
            out[i - burn_in] = z
    return out, -1


# -- dispatch ------------------------------------------------------------

if HAVE_NUMBA:
    _grow_tree = _grow_tree_jit
    _leaf_step = _leaf_step_jit
    _pairwise = _pairwise_sum_jit
    _shifted = _shifted_exp_sum_jit
    _chain = _inverse_chain_jit
else:
    _grow_tree = _grow_tree_numpy
    _leaf_step = _leaf_step_numpy
    _pairwise = _pairwise_sum_numpy
    _shifted = _shifted_exp_sum_numpy
    _chain = _inverse_chain_numpy


def grow_tree(xi0, logsum0, c, depth):
    """Expand one node ``depth`` levels down the preimage tree.

    Parameters
    ----------
    xi0 : complex
        Value at the subtree root.
    logsum0 : float
        Accumulated ``sum log(2|xi|)`` along the path to the root.
    c : complex
    depth : int

    Returns
    -------
    xi, logsum : ndarray
        ``2**depth`` node values and their accumulated log-derivative sums.
    """
    return _grow_tree(complex(xi0), float(logsum0), complex(c), int(depth))


def leaf_step(xi, logsum, c):
    """Accumulated log-sums one level below ``xi``; siblings share the value."""
    return _leaf_step(xi, logsum, complex(c))


def pairwise_sum(x):
    """Fixed-shape pairwise sum of an array whose length is a power of two."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.size & (x.size - 1) or x.size == 0:
        raise ValueError("pairwise_sum needs a power-of-two length")
    return float(_pairwise(x))


def shifted_exp_sum(logsum, s, shift):
    """``pairwise_sum(exp(-s * logsum - shift))`` without a temporary in the numba path."""
    return float(_shifted(logsum, float(s), float(shift)))


def inverse_chain(z0, c, bits, burn_in):
    """Run the random inverse-branch chain; returns ``(points, failed_index)``."""
    bits = np.ascontiguousarray(bits, dtype=np.bool_)
    return _chain(complex(z0), complex(c), bits, int(burn_in))

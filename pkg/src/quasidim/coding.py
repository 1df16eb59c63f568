"""Dyadic coding of the preimage tree of the fixed point alpha.

A word ``(e1, ..., en)`` of bits names the point reached from alpha by
``n`` inverse steps, ``e1`` chosen first. Branches are labelled by phase:
at each step bit ``b`` picks the square root lying on the same side as
``exp(i*pi*Q)``, where ``Q = b + Q_parent/2`` is kept as an exact dyadic
rational. With this labelling ``xi = exp(i*pi*Q + r)`` holds for every word,
with ``r`` built from principal logarithms.
"""

import cmath
import math
from dataclasses import dataclass
from functools import total_ordering

import numpy as np

from .dynamics import Parameter, fixed_point_alpha, inverse_branch
from .errors import CriticalCollision, LogBranchViolation

MAX_DEPTH = 30


@total_ordering
@dataclass(frozen=True)
class DyadicRational:
    """``numerator / 2**log2_denominator`` in lowest terms."""

    numerator: int
    log2_denominator: int = 0

    def __post_init__(self):
        num, k = int(self.numerator), int(self.log2_denominator)
        if k < 0:
            raise ValueError("log2_denominator must be non-negative")
        while k > 0 and num % 2 == 0:
            num //= 2
            k -= 1
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "log2_denominator", k)

    def __add__(self, other):
        if isinstance(other, int):
            other = DyadicRational(other)
        k = max(self.log2_denominator, other.log2_denominator)
        num = (self.numerator << (k - self.log2_denominator)) + (
            other.numerator << (k - other.log2_denominator))
        return DyadicRational(num, k)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = DyadicRational(other)
        return self + DyadicRational(-other.numerator, other.log2_denominator)

    def __eq__(self, other):
        if isinstance(other, int):
            other = DyadicRational(other)
        if not isinstance(other, DyadicRational):
            return NotImplemented
        return (self.numerator, self.log2_denominator) == (
            other.numerator, other.log2_denominator)

    def __hash__(self):
        return hash((self.numerator, self.log2_denominator))

    def __lt__(self, other):
        if isinstance(other, int):
            other = DyadicRational(other)
        return (self - other).numerator < 0

    def half(self):
        return DyadicRational(self.numerator, self.log2_denominator + 1)

    def double(self):
        if self.log2_denominator:
            return DyadicRational(self.numerator, self.log2_denominator - 1)
        return DyadicRational(2 * self.numerator)

    def mod2(self):
        """Representative in [0, 2)."""
        period = 2 << self.log2_denominator
        return DyadicRational(self.numerator % period, self.log2_denominator)

    def __float__(self):
        return math.ldexp(float(self.numerator), -self.log2_denominator)

    def __repr__(self):
        return f"DyadicRational({self.numerator}/2^{self.log2_denominator})"


def dyadic_phase(q, sign=1):
    """``exp(sign * i*pi*q)``, exact when ``q`` is a multiple of 1/2."""
    q = q.mod2()
    if q.log2_denominator <= 1:
        quarter = (q.numerator << (1 - q.log2_denominator)) % 4
        if sign < 0:
            quarter = (-quarter) % 4
        return (1 + 0j, 1j, -1 + 0j, -1j)[quarter]
    return cmath.exp(sign * 1j * math.pi * float(q))


@dataclass(frozen=True, order=True)
class DyadicWord:
    """Bit string ``(e1, ..., en)``; ``e1`` is the innermost branch choice."""

    bits: tuple

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise ValueError("a word has at least one letter")
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"letters must be 0 or 1, got {bits}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, text):
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def from_index(cls, index, n):
        """Word number ``index`` in lexicographic order of length ``n``."""
        return cls(tuple((index >> (n - 1 - k)) & 1 for k in range(n)))

    def __len__(self):
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __getitem__(self, k):
        return self.bits[k]

    def prefix(self, k):
        if not 1 <= k <= len(self.bits):
            raise ValueError(f"prefix length {k} outside 1..{len(self.bits)}")
        return DyadicWord(self.bits[:k])

    def index(self):
        out = 0
        for b in self.bits:
            out = (out << 1) | b
        return out

    def __str__(self):
        return "".join(map(str, self.bits))


def as_word(word):
    if isinstance(word, DyadicWord):
        return word
    if isinstance(word, str):
        return DyadicWord.from_string(word)
    return DyadicWord(tuple(word))


@dataclass(frozen=True)
class PreimagePoint:
    word: DyadicWord
    xi: complex
    q: DyadicRational
    r: complex


def _regime_checked(c):
    # Bare numbers go through the quasi-circle guard.
    return Parameter.of(c)


def q_exponent(word):
    """Exact ``Q = e_n + e_{n-1}/2 + ... + e_1/2**(n-1)``."""
    q = DyadicRational(0)
    for b in as_word(word):
        q = q.half() + b
    return q


def u_phase(word):
    """``exp(-i*pi*Q(word))``."""
    return dyadic_phase(q_exponent(word), sign=-1)


def _coded_step(c, parent, q_parent, bit):
    q = q_parent.half() + bit
    w = inverse_branch(c, parent, 0)
    ref = dyadic_phase(q)
    if (w * ref.conjugate()).real < 0:
        w = -w
    return w, q


def _check_log_arg(c, parent, word):
    arg = 1.0 - c / parent
    if not arg.real > 0:
        raise LogBranchViolation(
            f"1 - c/xi = {arg!r} has non-positive real part at prefix {word}", word)
    return arg


def xi(c, word):
    """Point of ``f^{-n}(alpha)`` named by ``word``."""
    p = _regime_checked(c)
    word = as_word(word)
    z = fixed_point_alpha(p)
    q = DyadicRational(0)
    for k, b in enumerate(word):
        try:
            z, q = _coded_step(p.c, z, q, b)
        except CriticalCollision as exc:
            raise CriticalCollision(str(exc), word.prefix(k + 1)) from None
    return z


def r_log(c, word):
    """Logarithmic deviation ``r`` with ``xi = exp(i*pi*Q + r)``.

    ``r(e1) = log(alpha - c)/2`` and
    ``r(e) = r(e|n-1)/2 + log(1 - c/xi(e|n-1))/2``, principal logs throughout.
    """
    p = _regime_checked(c)
    word = as_word(word)
    c = p.c
    alpha = fixed_point_alpha(p)
    r = 0.5 * cmath.log(alpha - c)
    z, q = _coded_step(c, alpha, DyadicRational(0), word[0])
    for k in range(1, len(word)):
        arg = _check_log_arg(c, z, word.prefix(k))
        r = 0.5 * r + 0.5 * cmath.log(arg)
        z, q = _coded_step(c, z, q, word[k])
    return r


def preimage_point(c, word):
    word = as_word(word)
    return PreimagePoint(word, xi(c, word), q_exponent(word), r_log(c, word))


def phi_series(u, n):
    """Partial sum ``sum_{k=1..n} (1 - 2**-k) * u**(2**k)``."""
    u = complex(u)
    if abs(abs(u) - 1.0) > 1e-12:
        raise ValueError(f"|u| must be 1, got {abs(u)!r}")
    if n < 1:
        raise ValueError("n must be at least 1")
    total = 0j
    power = u
    for k in range(1, n + 1):
        power = power * power
        total += (1.0 - 2.0 ** -k) * power
    return total


@dataclass(frozen=True)
class Leaf:
    """A leaf of the preimage tree with its whole prefix history.

    ``prefix_xi[k]`` is ``xi`` of the first ``k+1`` letters, so the last
    entry is the leaf itself. ``logsum`` accumulates ``log(2|xi|)`` over
    all prefixes.
    """

    word: DyadicWord
    xi: complex
    q: DyadicRational
    prefix_xi: tuple
    logsum: float


def iter_leaves(c, n):
    """Depth-first generator over all ``2**n`` leaves in lexicographic order."""
    p = _regime_checked(c)
    if not 1 <= n <= MAX_DEPTH:
        raise ValueError(f"n must lie in 1..{MAX_DEPTH}, got {n}")
    cc = p.c
    alpha = fixed_point_alpha(p)
    bits = [0] * n
    xs = [alpha] + [0j] * n
    qs = [DyadicRational(0)] + [None] * n
    ls = [0.0] * (n + 1)
    level = 0
    choice = [0] * (n + 1)  # next bit to try at each level
    log = math.log
    while level >= 0:
        if level == n:
            yield Leaf(DyadicWord(tuple(bits)), xs[n], qs[n], tuple(xs[1:]), ls[n])
            level -= 1
            continue
        b = choice[level]
        if b > 1:
            choice[level] = 0
            level -= 1
            continue
        choice[level] = b + 1
        bits[level] = b
        if level > 0:
            _check_log_arg(cc, xs[level], DyadicWord(tuple(bits[:level])))
        try:
            z, q = _coded_step(cc, xs[level], qs[level], b)
        except CriticalCollision as exc:
            raise CriticalCollision(str(exc), DyadicWord(tuple(bits[:level + 1]))) from None
        xs[level + 1] = z
        qs[level + 1] = q
        ls[level + 1] = ls[level] + log(2.0 * abs(z))
        level += 1


def enumerate_leaves(c, n, visitor):
    """Call ``visitor(leaf)`` on every leaf of depth ``n``; returns the leaf count."""
    count = 0
    for leaf in iter_leaves(c, n):
        visitor(leaf)
        count += 1
    return count


@dataclass(frozen=True)
class WordTable:
    """All words of one length with their coding data, as arrays.

    Row ``i`` is the word ``DyadicWord.from_index(i, n)``. ``q_num`` holds
    ``Q * 2**(n-1)`` exactly.
    """

    n: int
    bits: np.ndarray
    q_num: np.ndarray
    xi: np.ndarray
    r: np.ndarray

    def q_float(self):
        return np.ldexp(self.q_num.astype(np.float64), -(self.n - 1))

    def u(self):
        return _phase_array(self.q_num, self.n - 1, -1)

    def u_power(self, power_of_two):
        """``u**(2**power_of_two)`` from exact reduction of ``Q * 2**power_of_two`` mod 2."""
        k = self.n - 1 - power_of_two
        if k >= 0:
            return _phase_array(self.q_num, k, -1)
        return np.ones(self.q_num.shape, np.complex128)


def _phase_array(num, log2_den, sign):
    """``exp(sign * i*pi * num / 2**log2_den)``, exact on quarter turns."""
    num = np.asarray(num, dtype=np.int64) % (2 << log2_den)
    out = np.exp(sign * 1j * np.pi * np.ldexp(num.astype(np.float64), -log2_den))
    if log2_den == 0:
        exact = np.ones(num.shape, dtype=bool)
        quarter = 2 * num
    else:
        step = 1 << (log2_den - 1)
        exact = num % step == 0
        quarter = num // step
    lut = np.array([1, 1j, -1, -1j], dtype=np.complex128)
    out[exact] = lut[(sign * quarter[exact]) % 4]
    return out


def word_table(c, n):
    """Vectorised coding data for every word of length ``n`` (memory ``O(n * 2**n)``)."""
    p = _regime_checked(c)
    if not 1 <= n <= 24:
        raise ValueError(f"n must lie in 1..24, got {n}")
    cc = p.c
    alpha = fixed_point_alpha(p)
    xi_lvl = np.array([alpha], dtype=np.complex128)
    q_lvl = np.zeros(1, dtype=np.int64)
    r_lvl = np.array([0.5 * cmath.log(alpha - cc)], dtype=np.complex128)
    bits = np.zeros((1, 0), dtype=np.uint8)
    for k in range(1, n + 1):
        if k > 1:
            arg = 1.0 - cc / xi_lvl
            if np.any(arg.real <= 0):
                bad = int(np.argmax(arg.real <= 0))
                word = DyadicWord.from_index(bad, k - 1)
                raise LogBranchViolation(f"coding left the right half-plane at {word}", word)
            r_lvl = 0.5 * r_lvl + 0.5 * np.log(arg)
        w = xi_lvl - cc
        if np.any(np.abs(w) < 1e-300):
            bad = int(np.argmin(np.abs(w)))
            raise CriticalCollision("inverse branches merge", DyadicWord.from_index(bad, k - 1)
                                    if k > 1 else None)
        root = np.sqrt(w + 0j)
        q0 = q_lvl  # child with bit 0: numerator unchanged over 2**(k-1)
        q1 = q_lvl + (1 << (k - 1))
        ref0 = _phase_array(q0, k - 1, 1)
        ref1 = _phase_array(q1, k - 1, 1)
        c0 = np.where((root * ref0.conj()).real < 0, -root, root)
        c1 = np.where((root * ref1.conj()).real < 0, -root, root)
        xi_lvl = np.stack([c0, c1], axis=1).ravel()
        q_lvl = np.stack([q0, q1], axis=1).ravel()
        r_lvl = np.repeat(r_lvl, 2)
        bits = np.concatenate(
            [np.repeat(bits, 2, axis=0),
             np.tile(np.array([[0], [1]], dtype=np.uint8), (bits.shape[0], 1))], axis=1)
    return WordTable(n, bits, q_lvl, xi_lvl, r_lvl)


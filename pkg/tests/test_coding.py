import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quasidim.coding import (DyadicRational, DyadicWord, enumerate_leaves, iter_leaves,
                             phi_series, preimage_point, q_exponent, r_log, u_phase,
                             word_table, xi)
from quasidim.dynamics import Parameter, Regime, fixed_point_alpha, iterate
from quasidim.errors import LogBranchViolation, RegimeError
from quasidim.identities import phi_residual

from conftest import RING_01, SMALL_C_GRID

words = st.lists(st.sampled_from([0, 1]), min_size=1, max_size=14).map(tuple)


class TestDyadicRational:
    def test_lowest_terms(self):
        assert DyadicRational(4, 3) == DyadicRational(1, 1)
        assert DyadicRational(6, 2).numerator == 3

    def test_arithmetic(self):
        a = DyadicRational(3, 2)  # 3/4
        b = DyadicRational(1, 1)  # 1/2
        assert a + b == DyadicRational(5, 2)
        assert a.half() == DyadicRational(3, 3)
        assert a.double() == DyadicRational(3, 1)
        assert (a + 2).mod2() == a
        assert float(DyadicRational(5, 2)) == 1.25
        assert DyadicRational(1, 1) < 1


class TestWord:
    def test_prefix_and_index(self):
        w = DyadicWord((1, 0, 1))
        assert w.prefix(2) == DyadicWord((1, 0))
        assert w.index() == 5
        assert DyadicWord.from_index(5, 3) == w
        assert str(w) == "101"

    def test_rejects_bad_letters(self):
        with pytest.raises(ValueError):
            DyadicWord((0, 2))
        with pytest.raises(ValueError):
            DyadicWord(())

    def test_lexicographic_order(self):
        ws = [DyadicWord.from_index(i, 4) for i in range(16)]
        assert ws == sorted(ws)


def test_xi_examples():
    assert xi(0, (0,)) == 1
    assert xi(0, (1, 0)) == 1j
    c = Parameter(0.25j, Regime.FORCED)  # above the 0.2 guard
    w = xi(c, (0, 1))
    assert abs(iterate(c, w, 2) - fixed_point_alpha(c)) < 1e-12


def test_xi_respects_guard():
    with pytest.raises(RegimeError):
        xi(0.5, (0,))
    assert abs(xi(Parameter(0.5, Regime.FORCED), (0, 1))) > 0


@pytest.mark.parametrize("word, expected", [
    ((0, 0, 0), DyadicRational(0)),
    ((1, 0, 1), DyadicRational(5, 2)),
    ((1, 1), DyadicRational(3, 1)),
])
def test_q_exponent(word, expected):
    assert q_exponent(word) == expected


def test_q_range():
    for n in range(1, 9):
        for i in range(1 << n):
            q = q_exponent(DyadicWord.from_index(i, n))
            assert 0 <= float(q) < 2


def test_u_phase_examples():
    assert u_phase((0, 0)) == 1
    assert u_phase((1,)) == -1
    assert u_phase((1, 0)) == -1j
    for i in range(32):
        assert abs(abs(u_phase(DyadicWord.from_index(i, 5))) - 1) < 1e-15


def test_r_log_examples():
    assert r_log(0, (0, 1, 1, 0)) == 0
    c = 0.1
    a = fixed_point_alpha(c)
    r = r_log(c, (0,))
    assert r == pytest.approx(0.5 * math.log((a - c).real))
    assert r.imag == 0
    w = (0, 1)
    assert abs(cmath.exp(1j * math.pi * float(q_exponent(w)) + r_log(c, w)) - xi(c, w)) < 1e-12


def test_log_branch_violation():
    # far outside the regime the coding argument 1 - c/xi leaves the half-plane
    p = Parameter(-1.9, Regime.FORCED)
    with pytest.raises(LogBranchViolation):
        for i in range(1 << 8):
            r_log(p, DyadicWord.from_index(i, 8))


@pytest.mark.parametrize("u, n, expected", [(1, 2, 1.25), (-1, 3, 2.125), (1j, 2, 0.25)])
def test_phi_series(u, n, expected):
    assert phi_series(u, n) == pytest.approx(expected, abs=1e-15)


def test_phi_series_rejects_off_circle():
    with pytest.raises(ValueError):
        phi_series(1.1, 3)


@given(words)
def test_phase_halving(word):
    if len(word) < 2:
        return
    q = q_exponent(word)
    assert q.double().mod2() == q_exponent(word[:-1]).mod2()


@pytest.mark.parametrize("c", SMALL_C_GRID)
def test_coding_consistency_up_to_16(c):
    t = word_table(c, 16)
    rebuilt = np.exp(1j * np.pi * t.q_float() + t.r)
    assert np.abs(t.xi - rebuilt).max() <= 1e-9


@pytest.mark.parametrize("c", [0.1, -0.2j, 0.13 + 0.09j])
def test_forward_iteration_returns_to_alpha(c):
    for n in (1, 5, 12, 20 if c == 0.1 else 14):
        t = word_table(c, n)
        assert np.abs(iterate(c, t.xi, n) - fixed_point_alpha(c)).max() <= 1e-9


def test_prefix_convention():
    # f^k(xi(e)) = xi(e|n-k)
    c = 0.15 - 0.05j
    w = DyadicWord((1, 0, 0, 1, 1, 0, 1))
    for k in range(1, len(w)):
        assert abs(iterate(c, xi(c, w), k) - xi(c, w.prefix(len(w) - k))) < 1e-12


def test_word_table_matches_scalar():
    c = 0.07 + 0.11j
    t = word_table(c, 7)
    for i in (0, 3, 77, 127):
        w = DyadicWord.from_index(i, 7)
        p = preimage_point(c, w)
        assert t.xi[i] == p.xi
        assert abs(t.r[i] - p.r) < 1e-15
        assert t.q_num[i] == p.q.numerator << (6 - p.q.log2_denominator)
        assert tuple(t.bits[i]) == w.bits


def test_enumerate_leaves_circle():
    leaves = []
    assert enumerate_leaves(0, 3, leaves.append) == 8
    assert all(abs(abs(leaf.xi) - 1) < 1e-15 for leaf in leaves)
    roots = sorted(cmath.phase(leaf.xi) % (2 * math.pi) for leaf in leaves)
    expected = [2 * math.pi * k / 8 for k in range(8)]
    assert roots == pytest.approx(expected, abs=1e-12)
    assert [leaf.word.index() for leaf in leaves] == list(range(8))


def test_enumerate_leaves_forward_oracle():
    c = 0.1
    a = fixed_point_alpha(c)
    count = 0
    for leaf in iter_leaves(c, 10):
        assert abs(iterate(c, leaf.xi, 10) - a) <= 1e-9
        assert leaf.prefix_xi[-1] == leaf.xi
        count += 1
    assert count == 1024


def test_enumerate_leaves_carries_logsum():
    c = -0.1 + 0.05j
    for leaf in iter_leaves(c, 6):
        expected = sum(math.log(2 * abs(z)) for z in leaf.prefix_xi)
        assert leaf.logsum == pytest.approx(expected, rel=1e-14)
        for k, z in enumerate(leaf.prefix_xi, start=1):
            assert abs(z - xi(c, leaf.word.prefix(k))) < 1e-15


def test_conjugate_leaf_multiset():
    c = 0.09 + 0.13j
    a = np.sort_complex(word_table(c, 9).xi)
    b = np.sort_complex(np.conj(word_table(c.conjugate(), 9).xi))
    assert np.array_equal(a, b)


def test_depth_guard():
    with pytest.raises(ValueError):
        next(iter_leaves(0.1, 31))
    with pytest.raises(ValueError):
        next(iter_leaves(0.1, 0))


@pytest.mark.parametrize("c", RING_01[:4])
def test_phi_relation_corrected(c):
    # sum_k r(e|n-k) = -c Phi_n(u) - (1 - 2^-n) c + O(n^2 |c|^2)
    small = c * 1e-2
    for n in (4, 8, 12):
        assert phi_residual(small, n) <= 10


def test_phi_relation_literal_form_is_off_by_order_c():
    c = 1e-3
    n = 8
    t = word_table(c, n)
    idx = np.arange(1 << n)
    total = sum(word_table(c, k).r[idx >> (n - k)] for k in range(1, n + 1))
    phi = np.array([phi_series(u, n) for u in t.u()])
    literal = np.abs(total.real - (c * phi).real).max()
    assert literal > 100 * n * n * c * c

"""Executable checks of the algebraic identities behind the dimension expansion.

Each check returns an :class:`IdentityResult` holding the worst residual
over all words of the given length and the bound it must respect.
"""

from dataclasses import dataclass

import numpy as np

from .coding import DyadicWord, q_exponent, word_table
from .dynamics import Parameter

MAX_IDENTITY_DEPTH = 12


@dataclass(frozen=True)
class IdentityResult:
    name: str
    residual: float
    bound: float

    @property
    def passed(self):
        return self.residual <= self.bound


def phase_halving(n):
    """``2*Q(e) == Q(e|n-1) (mod 2)`` in exact arithmetic, for every word of length 2..n.

    The residual is the number of words violating it.
    """
    failures = 0
    for length in range(2, n + 1):
        for index in range(1 << length):
            word = DyadicWord.from_index(index, length)
            lhs = q_exponent(word).double().mod2()
            rhs = q_exponent(word.prefix(length - 1)).mod2()
            if lhs != rhs:
                failures += 1
    return IdentityResult("phase_halving", float(failures), 0.0)


def cancellation(table):
    """``max_r |sum_e u(e)**(2**r)|`` for ``1 <= r <= n-1``; bound ``1e-12 * 2**n``."""
    n = table.n
    worst = 0.0
    for r in range(1, n):
        worst = max(worst, float(abs(table.u_power(r).sum())))
    return IdentityResult("cancellation", worst, 1e-12 * 2.0 ** n)


def orthogonality(table, c):
    """``sum_e Re(c u**(2**r)) Re(c u**(2**l))`` vanishes for ``1 <= r < l <= n-1``."""
    n = table.n
    c = complex(c)
    re = {r: (c * table.u_power(r)).real for r in range(1, n)}
    worst = 0.0
    for r in range(1, n):
        for l in range(r + 1, n):
            worst = max(worst, abs(float(np.sum(re[r] * re[l]))))
    return IdentityResult("orthogonality", worst, 1e-12 * 2.0 ** n * max(abs(c) ** 2, 1e-300))


def re_squared(table, c):
    """``sum_e (Re c u**(2**r))**2`` against its two-case closed form, ``1 <= r <= n``."""
    n = table.n
    c = complex(c)
    mod2 = abs(c) ** 2
    worst = 0.0
    for r in range(1, n + 1):
        lhs = float(np.sum((c * table.u_power(r)).real ** 2))
        if r < n - 1:
            rhs = 0.5 * 2.0 ** n * mod2
        else:
            rhs = 0.5 * 2.0 ** n * (mod2 + (c * c).real)
        worst = max(worst, abs(lhs - rhs))
    return IdentityResult("re_squared", worst, 1e-12 * 2.0 ** n * max(mod2, 1e-300))


def coding_consistency(table):
    """``|xi - exp(i*pi*Q + r)|`` over all words; bound ``1e-9``."""
    rebuilt = np.exp(1j * np.pi * table.q_float() + table.r)
    return IdentityResult("coding_consistency", float(np.abs(table.xi - rebuilt).max()), 1e-9)


def phi_residual(c, n):
    """Worst ``|Re sum_k r(e|n-k) + Re(c*Phi_n(u(e))) + (1 - 2**-n) Re c| / (n**2 |c|**2)``.

    Unrolling the ``r`` recursion gives ``sum_k r(e|n-k) = -c*Phi_n(u) -
    (1 - 2**-n)*c + O(n**2 |c|**2)``; the constant comes from the base
    case ``r(e1) = -c + O(|c|**2)``. Returns the measured constant ``K``.
    """
    p = Parameter.of(c)
    c = p.c
    if c == 0:
        return 0.0
    tables = [word_table(p, k) for k in range(1, n + 1)]
    top = tables[-1]
    total = np.zeros(1 << n, np.complex128)
    idx = np.arange(1 << n)
    for k, t in enumerate(tables, start=1):
        total += t.r[idx >> (n - k)]
    u = top.u()
    phi = np.zeros_like(u)
    power = u.copy()
    for k in range(1, n + 1):
        power = power * power
        phi += (1.0 - 2.0 ** -k) * power
    resid = total.real + (c * phi).real + (1.0 - 2.0 ** -n) * c.real
    return float(np.abs(resid).max() / (n * n * abs(c) ** 2))


def run_identity_suite(c, n):
    """All identity checks at ``(c, n)``; ``n`` at most 12."""
    if not 1 <= n <= MAX_IDENTITY_DEPTH:
        raise ValueError(f"n must lie in 1..{MAX_IDENTITY_DEPTH}, got {n}")
    p = Parameter.of(c)
    table = word_table(p, n)
    return [
        phase_halving(n),
        cancellation(table),
        orthogonality(table, p.c),
        re_squared(table, p.c),
        coding_consistency(table),
    ]


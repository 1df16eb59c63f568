"""Bowen's equation P(s*phi) = 0 and the closed-form comparisons around it."""

import math
from dataclasses import dataclass

from .dynamics import LARGE_C_MIN, Parameter, cvalue
from .errors import BracketFailure, NonMonotone, NoRealRoot, OutOfRange
from .pressure import preimage_tree

LOG2 = math.log(2.0)

INITIAL_BRACKET = (0.5, 2.0)
WIDEST_BRACKET = (0.25, 4.0)


@dataclass
class DimensionReport:
    """Outcome of :func:`solve_dimension`.

    ``roots_by_n`` lists ``(n, s_n)`` where ``s_n`` is the zero of the ratio
    pressure at depth ``n``. ``s_star`` extrapolates them; ``method`` says
    whether Aitken's step was used or the last root was kept.
    """

    c: complex
    roots_by_n: list
    s_star: float
    beta: float
    ruelle_value: float
    residual: float
    bracket: tuple
    tolerance: float
    method: str = "aitken"


def ruelle_asymptotic(c):
    """``1 + |c|**2 / (4 log 2)``."""
    return 1.0 + abs(cvalue(c)) ** 2 / (4.0 * LOG2)


def beta_quadratic(c):
    """Smaller positive root of ``(|c|**2/4)(1 + b)**2 - b*log 2 = 0``.

    The roots multiply to 1, so the small one is taken as the reciprocal of
    the large one; this avoids cancellation as ``|c| -> 0``.
    """
    q = abs(cvalue(c)) ** 2 / 4.0
    if q == 0.0:
        return 0.0
    b = LOG2 - 2.0 * q
    disc = LOG2 * (LOG2 - 4.0 * q)
    if disc < 0:
        raise NoRealRoot(f"|c|**2 = {4 * q:.6g} exceeds log 2; the quadratic has no real root")
    return 2.0 * q / (b + math.sqrt(disc))


def large_c_bounds(c):
    """Lower and upper dimension bounds valid for ``|c| > (5 + 2*sqrt(6))/4``."""
    m = abs(cvalue(c))
    if not m > LARGE_C_MIN:
        raise OutOfRange(f"|c| = {m:.6g} <= {LARGE_C_MIN:.6f}; use solve_dimension instead")
    spread = math.sqrt(2.0 * m)
    lower = 2.0 * LOG2 / math.log(4.0 * (m + spread))
    upper = 2.0 * LOG2 / math.log(4.0 * (m - spread))
    return lower, upper


def bisect_decreasing(func, lo, hi, tol, f_lo=None, f_hi=None, slack=1e-12):
    """Zero of a decreasing function with ``func(lo) > 0 > func(hi)``.

    Stops once the bracket is narrower than ``tol`` and returns its midpoint.
    Raises :class:`NonMonotone` if an interior value falls outside the
    values at the ends by more than ``slack``.
    """
    f_lo = func(lo) if f_lo is None else f_lo
    f_hi = func(hi) if f_hi is None else f_hi
    if not (f_lo > 0 > f_hi):
        raise BracketFailure(f"no sign change on [{lo}, {hi}]: {f_lo!r}, {f_hi!r}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = func(mid)
        if f_mid > f_lo + slack or f_mid < f_hi - slack:
            raise NonMonotone(f"pressure at s={mid!r} is {f_mid!r}, outside "
                              f"[{f_hi!r}, {f_lo!r}]")
        if f_mid > 0:
            lo, f_lo = mid, f_mid
        elif f_mid < 0:
            hi, f_hi = mid, f_mid
        else:
            return mid
    return 0.5 * (lo + hi)


def _bracket(func):
    lo, hi = INITIAL_BRACKET
    f_lo, f_hi = func(lo), func(hi)
    while not (f_lo > 0 > f_hi):
        if lo <= WIDEST_BRACKET[0] and hi >= WIDEST_BRACKET[1]:
            raise BracketFailure(
                f"pressure keeps one sign on {WIDEST_BRACKET}: {f_lo!r}, {f_hi!r}")
        if not f_lo > 0:
            lo = max(WIDEST_BRACKET[0], lo / 2.0)
            f_lo = func(lo)
        if not f_hi < 0:
            hi = min(WIDEST_BRACKET[1], hi * 2.0)
            f_hi = func(hi)
    return lo, hi, f_lo, f_hi


def aitken(s1, s2, s3, tol):
    """Aitken's delta-squared step, or ``None`` when it is not trustworthy."""
    d1 = s2 - s1
    d2 = s3 - s2
    denom = d2 - d1
    if denom == 0 or abs(denom) <= 8.0 * tol:
        return None
    ratio = d2 / d1 if d1 else math.inf
    if not abs(ratio) < 1.0:
        return None
    return s3 - d2 * d2 / denom


def root_at_depth(c, n, tol=1e-12, threads=1):
    """Zero in ``s`` of the ratio pressure at depth ``n``; returns ``(s_n, (lo, hi))``."""
    tree = preimage_tree(c, n, threads)

    def ratio(s):
        prev, cur = tree.log_deltas(s)
        return cur - prev

    lo, hi, f_lo, f_hi = _bracket(ratio)
    return bisect_decreasing(ratio, lo, hi, tol, f_lo, f_hi), (lo, hi)


def solve_dimension(c, n_max=18, tol=1e-12, n_min=4, threads=1, force=False):
    """Hausdorff dimension of the quasi-circle ``J(z**2 + c)`` from Bowen's equation.

    For each depth ``n_min..n_max`` the ratio pressure
    ``log Delta_n - log Delta_{n-1}`` is bisected in ``s``; the roots are
    then accelerated with Aitken's step on the last three.

    Parameters
    ----------
    c : Parameter or complex
    n_max : int
        Deepest tree, at least 4.
    tol : float
        Bisection bracket width.
    threads : int
        Workers for tree growth; results are identical for any value.
    force : bool
        Skip the ``|c| <= 0.2`` guard when ``c`` is a bare number.
    """
    p = Parameter.of(c, force=force)
    if n_max < 4:
        raise ValueError("n_max must be at least 4")
    if not tol > 0:
        raise ValueError("tol must be positive")
    n_min = min(max(2, n_min), n_max)
    roots = []
    lo_all, hi_all = math.inf, -math.inf
    for n in range(n_min, n_max + 1):
        s_n, (lo, hi) = root_at_depth(p, n, tol, threads)
        roots.append((n, s_n))
        lo_all, hi_all = min(lo_all, lo), max(hi_all, hi)

    method = "last"
    s_star = roots[-1][1]
    if len(roots) >= 3:
        accelerated = aitken(roots[-3][1], roots[-2][1], roots[-1][1], tol)
        if accelerated is not None:
            s_star, method = accelerated, "aitken"
    ruelle = ruelle_asymptotic(p)
    try:
        beta = beta_quadratic(p)
    except NoRealRoot:
        beta = math.nan
    return DimensionReport(
        c=p.c,
        roots_by_n=roots,
        s_star=s_star,
        beta=beta,
        ruelle_value=ruelle,
        residual=abs(s_star - ruelle),
        bracket=(lo_all, hi_all),
        tolerance=tol,
        method=method,
    )

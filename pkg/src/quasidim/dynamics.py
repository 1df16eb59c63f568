"""Primitives of the quadratic family f(z) = z**2 + c."""

import cmath
import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import CriticalCollision, RegimeError

QUASI_CIRCLE_MAX = 0.20
LARGE_C_MIN = (5.0 + 2.0 * math.sqrt(6.0)) / 4.0


class Regime(str, enum.Enum):
    QUASI_CIRCLE = "quasi_circle"
    LARGE_C = "large_c"
    FORCED = "forced"


@dataclass(frozen=True)
class Parameter:
    """The constant ``c`` together with the regime it was admitted under.

    A quasi-circle parameter must satisfy ``|c| <= 0.20`` and a large-c
    parameter ``|c| > (5 + 2*sqrt(6))/4``. ``Regime.FORCED`` skips both checks.
    """

    c: complex
    regime: Regime = Regime.QUASI_CIRCLE

    def __post_init__(self):
        c = complex(self.c)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise RegimeError(f"c must be finite, got {c!r}")
        object.__setattr__(self, "c", c)
        regime = Regime(self.regime)
        object.__setattr__(self, "regime", regime)
        if regime is Regime.QUASI_CIRCLE and abs(c) > QUASI_CIRCLE_MAX:
            raise RegimeError(
                f"|c| = {abs(c):.6g} exceeds the quasi-circle guard {QUASI_CIRCLE_MAX}; "
                "pass force=True to override"
            )
        if regime is Regime.LARGE_C and not abs(c) > LARGE_C_MIN:
            raise RegimeError(f"|c| = {abs(c):.6g} is not above {LARGE_C_MIN:.6f}")

    @classmethod
    def of(cls, c, force=False):
        """Coerce a number or an existing Parameter."""
        if isinstance(c, Parameter):
            return c
        return cls(complex(c), Regime.FORCED if force else Regime.QUASI_CIRCLE)

    def conjugate(self):
        return Parameter(self.c.conjugate(), self.regime)

    def __complex__(self):
        return self.c


def cvalue(c):
    """Plain complex value of a Parameter or number."""
    return c.c if isinstance(c, Parameter) else complex(c)


def principal_sqrt(w):
    """Square root with argument in (-pi/2, pi/2].

    A negative-zero imaginary part is folded to +0 first so that the
    negative real axis always maps to the positive imaginary axis.
    """
    return cmath.sqrt(complex(w) + 0j)


def apply(c, z):
    """One step of the map, ``z**2 + c``."""
    z = complex(z)
    return z * z + cvalue(c)


def derivative_modulus(z):
    """``|f'(z)| = 2|z|``."""
    return 2.0 * abs(complex(z))


def fixed_point_alpha(c):
    """Fixed point ``(1 + sqrt(1 - 4c))/2``, the one tending to 1 as c -> 0."""
    c = cvalue(c)
    disc = 1.0 - 4.0 * c
    if disc == 0:
        warnings.warn("c = 1/4 is parabolic; alpha is the double fixed point 1/2",
                      RuntimeWarning, stacklevel=2)
        return 0.5 + 0j
    return (1.0 + principal_sqrt(disc)) / 2.0


def inverse_branch(c, eta, bit):
    """Preimage of ``eta`` on branch ``bit``: principal root for 0, its negation for 1."""
    w = complex(eta) - cvalue(c)
    if abs(w) < 1e-300:
        raise CriticalCollision(f"eta - c = {w!r}: inverse branches merge at the critical point")
    r = principal_sqrt(w)
    return -r if bit else r


def iterate(c, z, n):
    """``f^n(z)``; ``z`` may be an array."""
    c = cvalue(c)
    if not isinstance(z, np.ndarray):
        z = complex(z)
    for _ in range(n):
        z = z * z + c
    return z

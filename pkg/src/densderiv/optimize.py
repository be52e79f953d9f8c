"""Bounded derivative-free scalar minimization."""

from dataclasses import dataclass
import math
from typing import NamedTuple
import warnings

from .errors import BoundaryMinimumWarning

__all__ = ["SearchInterval", "Minimum", "golden_section"]

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SearchInterval:
    """Bandwidth search range ``[lower, upper]`` with convergence tolerance ``tol``."""

    lower: float
    upper: float
    tol: float

    def __post_init__(self):
        if not 0 < self.lower < self.upper:
            raise ValueError(
                f"need 0 < lower < upper, got lower={self.lower}, upper={self.upper}"
            )
        if not 0 < self.tol < self.upper - self.lower:
            raise ValueError(f"tol must lie in (0, upper - lower), got {self.tol}")

    def scaled(self, c):
        return SearchInterval(c * self.lower, c * self.upper, c * self.tol)


class Minimum(NamedTuple):
    x: float
    fun: float
    at_boundary: bool
    nit: int


def golden_section(func, lower, upper, tol, warn=True):
    """Minimize ``func`` on ``[lower, upper]`` by golden-section search.

    The bracket is shrunk until its width drops below ``tol``; the midpoint of
    the final bracket is returned. When that midpoint lies within ``tol`` of an
    end of the original interval the end itself is returned, ``at_boundary``
    is set and a ``BoundaryMinimumWarning`` is issued.

    ``func`` may return ``+inf``; such points simply lose every comparison.
    """
    if not lower < upper:
        raise ValueError("lower must be smaller than upper")
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b = float(lower), float(upper)
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = func(c), func(d)
    nit = 0
    while b - a >= tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = func(d)
        nit += 1

    x = 0.5 * (a + b)
    at_boundary = True
    if x - lower < tol:
        x = float(lower)
    elif upper - x < tol:
        x = float(upper)
    else:
        at_boundary = False
    if at_boundary and warn:
        warnings.warn(
            f"minimum found at the edge of the search interval [{lower}, {upper}]",
            BoundaryMinimumWarning,
            stacklevel=2,
        )
    return Minimum(x, func(x), at_boundary, nit)

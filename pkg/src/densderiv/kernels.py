"""Kernel functions, their derivatives, self-convolutions and moment constants.

Eight symmetric kernels are available. The Gaussian and cosine kernels can be
differentiated any number of times; the compactly supported polynomial kernels
only up to the degree of their polynomial (``Kernel.max_order``).

Compact kernels follow two boundary conventions: at ``|x| == 1`` the kernel
itself uses the indicator ``1(|x| <= 1)``, while derivatives take the one-sided
limit from inside the support. Kernels written in ``|x|`` (triangular, tricube)
have odd-order derivatives that jump at the origin; there the value is the
average of both one-sided limits, which is 0.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
import math

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import OrderTooHighError

__all__ = [
    "Kernel",
    "KernelMoments",
    "hermite_polynomial",
    "kernel_derivative",
    "kernel_convolution",
    "kernel_roughness",
    "kernel_moment",
    "kernel_moments",
    "check_order",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)
SQRT2 = math.sqrt(2.0)
PI = math.pi

# Gauss-Legendre rule for the compact-support convolutions.
GL_ORDER = 96
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)


class Kernel(str, Enum):
    GAUSSIAN = "gaussian"
    EPANECHNIKOV = "epanechnikov"
    UNIFORM = "uniform"
    TRIANGULAR = "triangular"
    TRIWEIGHT = "triweight"
    TRICUBE = "tricube"
    BIWEIGHT = "biweight"
    COSINE = "cosine"

    def __str__(self):
        return self.value

    @property
    def max_order(self):
        """Highest derivative order available, ``None`` when unbounded."""
        return _MAX_ORDER[self]

    @property
    def support(self):
        if self is Kernel.GAUSSIAN:
            return (-math.inf, math.inf)
        return (-1.0, 1.0)

    @property
    def compact(self):
        return self is not Kernel.GAUSSIAN


_MAX_ORDER = {
    Kernel.GAUSSIAN: None,
    Kernel.EPANECHNIKOV: 2,
    Kernel.UNIFORM: 0,
    Kernel.TRIANGULAR: 1,
    Kernel.TRIWEIGHT: 6,
    Kernel.TRICUBE: 9,
    Kernel.BIWEIGHT: 4,
    Kernel.COSINE: None,
}


def _poly_pow(base, k):
    out = np.array([1.0])
    for _ in range(k):
        out = P.polymul(out, base)
    return out


# Polynomial kernels as power-series coefficients in t = |x| on [0, 1].
_POLY = {
    Kernel.EPANECHNIKOV: 0.75 * np.array([1.0, 0.0, -1.0]),
    Kernel.UNIFORM: np.array([0.5]),
    Kernel.TRIANGULAR: np.array([1.0, -1.0]),
    Kernel.TRIWEIGHT: 35.0 / 32.0 * _poly_pow([1.0, 0.0, -1.0], 3),
    Kernel.TRICUBE: 70.0 / 81.0 * _poly_pow([1.0, 0.0, 0.0, -1.0], 3),
    Kernel.BIWEIGHT: 15.0 / 16.0 * _poly_pow([1.0, 0.0, -1.0], 2),
}

# Derivative coefficient tables, one tuple per order 0..max_order.
_POLY_DERIVS = {
    k: tuple(P.polyder(c, m) if m else c for m in range(_MAX_ORDER[k] + 1))
    for k, c in _POLY.items()
}

for _table in _POLY_DERIVS.values():
    for _c in _table:
        _c.setflags(write=False)


@dataclass(frozen=True)
class KernelMoments:
    roughness: float
    mu2: float
    delta: float


# R(K), mu_2(K) and the fourth moment delta(K) in closed form.
_MOMENTS = {
    Kernel.GAUSSIAN: KernelMoments(1.0 / (2.0 * math.sqrt(PI)), 1.0, 3.0),
    Kernel.EPANECHNIKOV: KernelMoments(3 / 5, 1 / 5, 3 / 35),
    Kernel.UNIFORM: KernelMoments(1 / 2, 1 / 3, 1 / 5),
    Kernel.TRIANGULAR: KernelMoments(2 / 3, 1 / 6, 1 / 15),
    Kernel.TRIWEIGHT: KernelMoments(350 / 429, 1 / 9, 1 / 33),
    Kernel.TRICUBE: KernelMoments(175 / 247, 35 / 243, 1 / 22),
    Kernel.BIWEIGHT: KernelMoments(5 / 7, 1 / 7, 1 / 21),
    Kernel.COSINE: KernelMoments(
        PI**2 / 16, (PI**2 - 8) / PI**2, 1 - 48 / PI**2 + 384 / PI**4
    ),
}


def _as_result(values, like):
    if np.ndim(like) == 0:
        return float(values)
    return values


def check_order(kernel, r):
    """Raise ``OrderTooHighError`` unless ``kernel`` has an ``r``-th derivative."""
    kernel = Kernel(kernel)
    if r < 0 or int(r) != r:
        raise ValueError(f"derivative order must be a non-negative integer, got {r}")
    max_order = kernel.max_order
    if max_order is not None and r > max_order:
        raise OrderTooHighError(kernel, r, max_order)
    return kernel


def hermite_polynomial(r, x):
    """Probabilists' Hermite polynomial He_r evaluated at ``x``.

    Uses the three-term recurrence ``He_{k+1} = x He_k - k He_{k-1}`` in plain
    double precision; results are free of overflow for ``r <= 30`` and
    ``|x|`` of moderate size.

    Parameters
    ----------
    r : int
        Polynomial order, ``r >= 0``.
    x : float or array_like
        Evaluation point(s).

    Returns
    -------
    float or numpy.ndarray
    """
    if r < 0:
        raise ValueError("Hermite order must be non-negative")
    x_arr = np.asarray(x, dtype=float)
    prev = np.ones_like(x_arr)
    if r == 0:
        return _as_result(prev, x)
    cur = x_arr.copy()
    for k in range(1, r):
        prev, cur = cur, x_arr * cur - k * prev
    return _as_result(cur, x)


def _gaussian_density(x):
    return np.exp(-0.5 * x * x) / SQRT_2PI


def _derivative(kernel, r, x):
    # x is a float ndarray; kernel and r are already validated.
    if kernel is Kernel.GAUSSIAN:
        sign = -1.0 if r % 2 else 1.0
        return sign * hermite_polynomial(r, x) * _gaussian_density(x)

    ax = np.abs(x)
    inside = ax <= 1.0
    if kernel is Kernel.COSINE:
        a = 0.5 * PI
        scale = 0.25 * PI * a**r
        arg = a * x
        phase = r % 4
        if phase == 0:
            vals = np.cos(arg)
        elif phase == 1:
            vals = -np.sin(arg)
        elif phase == 2:
            vals = -np.cos(arg)
        else:
            vals = np.sin(arg)
        return np.where(inside, scale * vals, 0.0)

    vals = P.polyval(np.minimum(ax, 1.0), _POLY_DERIVS[kernel][r])
    if r % 2:
        vals = vals * np.sign(x)
    return np.where(inside, vals, 0.0)


def kernel_derivative(kernel, r, x):
    """Evaluate the ``r``-th derivative of ``kernel`` at ``x``.

    ``r = 0`` gives the kernel itself. Accepts scalars or arrays and returns
    the same shape.

    Raises
    ------
    OrderTooHighError
        If the kernel is not differentiable ``r`` times.
    """
    kernel = check_order(kernel, r)
    out = _derivative(kernel, r, np.asarray(x, dtype=float))
    return _as_result(out, x)


def _gaussian_convolution(r, x):
    # K^(r) * K^(r) = (K * K)^(2r) and K * K is the N(0, 2) density.
    z = x / SQRT2
    return hermite_polynomial(2 * r, z) * _gaussian_density(z) / (SQRT2 * 2.0**r)


def _compact_convolution(kernel, r, x, chunk=2048):
    x = np.abs(x)
    out = np.zeros_like(x)
    flat_x = x.ravel()
    flat_out = out.ravel()
    for start in range(0, flat_x.size, chunk):
        xs = flat_x[start:start + chunk]
        live = xs < 2.0
        if not np.any(live):
            continue
        xl = xs[live]
        lo = xl - 1.0
        hi = np.ones_like(xl)
        # split where |y| or |x - y| changes branch
        cuts = np.stack(
            [lo, np.clip(np.zeros_like(xl), lo, hi), np.clip(xl, lo, hi), hi], axis=1
        )
        cuts.sort(axis=1)
        a = cuts[:, :-1, None]
        b = cuts[:, 1:, None]
        half = 0.5 * (b - a)
        y = half * _GL_NODES + 0.5 * (a + b)
        f = _derivative(kernel, r, y) * _derivative(kernel, r, xl[:, None, None] - y)
        flat_out[start:start + chunk][live] = np.sum(
            np.sum(f * _GL_WEIGHTS, axis=2) * half[:, :, 0], axis=1
        )
    return out


def kernel_convolution(kernel, r, x):
    """Self-convolution ``(K^(r) * K^(r))(x)`` of the ``r``-th kernel derivative.

    The Gaussian case is closed form. For compact kernels the overlap integral
    over ``[|x| - 1, 1]`` is split at the branch points of the integrand and
    integrated with a fixed 96-node Gauss-Legendre rule on each piece; the
    result is exactly 0 for ``|x| >= 2``.
    """
    kernel = check_order(kernel, r)
    xa = np.asarray(x, dtype=float)
    if kernel is Kernel.GAUSSIAN:
        out = _gaussian_convolution(r, xa)
    else:
        out = _compact_convolution(kernel, r, np.atleast_1d(xa)).reshape(xa.shape)
    return _as_result(out, x)


@lru_cache(maxsize=None)
def _roughness(kernel, r):
    sign = -1.0 if r % 2 else 1.0
    return sign * kernel_convolution(kernel, r, 0.0)


def kernel_roughness(kernel, r=0):
    """Roughness ``R(K^(r))``, the integral of the squared ``r``-th derivative."""
    kernel = check_order(kernel, r)
    return _roughness(kernel, int(r))


def kernel_moment(kernel, order):
    """Second (``order=2``) or fourth (``order=4``) moment of the kernel."""
    m = _MOMENTS[Kernel(kernel)]
    if order == 2:
        return m.mu2
    if order == 4:
        return m.delta
    raise ValueError(f"moment order must be 2 or 4, got {order}")


def kernel_moments(kernel):
    return _MOMENTS[Kernel(kernel)]

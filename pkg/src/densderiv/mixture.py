"""Bimodal Gaussian mixture used as a reference density.

``f(x) = 0.5 N(x; -1.5, 0.5^2) + 0.5 N(x; 1.5, 0.5^2)``, with exact
derivatives up to order 3 and a reproducible sampler.

Sampling uses the Philox-4x64 counter-based generator from NumPy. Only its raw
64-bit output stream is consumed, which NumPy keeps stable across versions and
platforms. Observation ``i`` takes two consecutive words: the top bit of the
first picks the component, the top 53 bits of the second give a uniform
``u = (k + 0.5) / 2**53`` in the open unit interval, mapped to a standard
normal by the inverse CDF (``scipy.special.ndtri``).
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import ndtri

from .estimator import Sample

__all__ = ["MixtureSpec", "BIMODAL", "sample_bimodal", "true_derivative", "integrated_squared_error"]


@dataclass(frozen=True)
class MixtureSpec:
    weights: tuple = (0.5, 0.5)
    means: tuple = (-1.5, 1.5)
    sds: tuple = (0.5, 0.5)

    def __post_init__(self):
        if not math.isclose(sum(self.weights), 1.0, rel_tol=0, abs_tol=1e-12):
            raise ValueError("mixture weights must sum to 1")
        if min(self.sds) <= 0:
            raise ValueError("component sds must be positive")


BIMODAL = MixtureSpec()


def bimodal_draws(n, seed):
    """Raw array of ``n`` mixture draws; see the module docstring for the scheme."""
    if n < 1:
        raise ValueError("n must be positive")
    words = np.random.Philox(seed).random_raw(2 * n).reshape(n, 2)
    upper = words[:, 0] >> np.uint64(63)
    k = (words[:, 1] >> np.uint64(11)).astype(np.float64)
    u = (k + 0.5) * 2.0**-53
    z = ndtri(u)
    means = np.where(upper == 1, BIMODAL.means[1], BIMODAL.means[0])
    sds = np.where(upper == 1, BIMODAL.sds[1], BIMODAL.sds[0])
    return means + sds * z


def sample_bimodal(n, seed):
    """``Sample`` of ``n`` seeded draws from the bimodal mixture (``n >= 2``)."""
    if n < 2:
        raise ValueError("a sample needs at least 2 observations")
    return Sample(bimodal_draws(n, seed))


def _normal_pdf(x, mean, sd):
    z = (x - mean) / sd
    return np.exp(-0.5 * z * z) / (sd * math.sqrt(2.0 * math.pi))


def true_derivative(x, r=0):
    """Exact ``r``-th derivative (``r`` in 0..3) of the bimodal mixture density."""
    xa = np.asarray(x, dtype=float)
    p1 = _normal_pdf(xa, -1.5, 0.5)
    p2 = _normal_pdf(xa, 1.5, 0.5)
    a1 = -4.0 * xa - 6.0
    a2 = -4.0 * xa + 6.0
    if r == 0:
        out = 0.5 * p1 + 0.5 * p2
    elif r == 1:
        out = 0.5 * a1 * p1 + 0.5 * a2 * p2
    elif r == 2:
        out = 0.5 * (a1**2 - 4.0) * p1 + 0.5 * (a2**2 - 4.0) * p2
    elif r == 3:
        out = 0.5 * a1 * (a1**2 - 12.0) * p1 + 0.5 * a2 * (a2**2 - 12.0) * p2
    else:
        raise ValueError(f"derivative order must be 0..3, got {r}")
    return float(out) if np.ndim(x) == 0 else out


def integrated_squared_error(estimate, r=None):
    """Trapezoidal ISE of an estimate against the exact mixture derivative."""
    if r is None:
        r = estimate.r
    elif r != estimate.r:
        raise ValueError(f"estimate has derivative order {estimate.r}, not {r}")
    x = np.asarray(estimate.eval_points)
    err = np.asarray(estimate.est_fx) - true_derivative(x, r)
    return float(trapezoid(err * err, x))

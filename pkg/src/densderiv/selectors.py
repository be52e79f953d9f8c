"""Bandwidth selection for kernel density derivative estimators.

Every cross-validation criterion is a scalar function of the bandwidth built
from a double sum over pairs of observations. The ``*_score`` functions
evaluate a criterion at one bandwidth, the ``h_*`` functions optimize it over
a search interval, and ``score_profile`` tabulates it on a bandwidth sequence.

Unless an interval is given, the search runs over ``[h_os / 50, h_os]`` with
tolerance ``1e-4 * h_os``, where ``h_os`` is the normal-reference bandwidth
from ``oversmoothing_bandwidth``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .estimator import as_sample
from .kernels import (
    Kernel,
    check_order,
    kernel_convolution,
    kernel_derivative,
    kernel_moment,
    kernel_roughness,
)
from .optimize import SearchInterval, golden_section

__all__ = [
    "METHODS",
    "SelectorResult",
    "ScoreProfile",
    "pairwise_sum",
    "normal_reference_roughness",
    "amise_bandwidth",
    "amise_minimum",
    "oversmoothing_bandwidth",
    "default_interval",
    "resolve_interval",
    "amise_score",
    "mlcv_score",
    "ucv_score",
    "bcv_score",
    "ccv_score",
    "mcv_score",
    "tcv_score",
    "h_amise",
    "h_mlcv",
    "h_ucv",
    "h_bcv",
    "h_ccv",
    "h_mcv",
    "h_tcv",
    "score_function",
    "select_bandwidth",
    "score_profile",
]

METHODS = ("amise", "mlcv", "ucv", "bcv1", "bcv2", "ccv", "mcv", "tcv")


@dataclass(frozen=True)
class SelectorResult:
    method: str
    h: float
    objective: float
    r: int
    kernel: Kernel
    interval: SearchInterval
    at_boundary: bool = False


@dataclass(frozen=True)
class ScoreProfile:
    method: str
    r: int
    kernel: Kernel
    bandwidths: np.ndarray
    scores: np.ndarray
    failures: int = 0

    def argmin(self):
        """Bandwidth with the best finite score (largest for MLCV)."""
        scores = np.where(np.isfinite(self.scores), self.scores, np.nan)
        idx = np.nanargmax(scores) if self.method == "mlcv" else np.nanargmin(scores)
        return float(self.bandwidths[idx])


def _sign(k):
    return -1.0 if k % 2 else 1.0


def pairwise_sum(sample, h, g, even=True):
    """``sum_i sum_{j != i} g((X_j - X_i) / h)`` over all ordered pairs.

    ``g`` must be vectorized. When ``even`` is true the sum is taken once over
    unordered pairs, at ``|X_j - X_i| / h`` in ascending order, and doubled;
    the result is then bitwise independent of the order of the data.
    """
    sample = as_sample(sample)
    if even:
        c = sample.abs_pair_differences / h
        if __debug__ and c.size:
            probe = c[-4:]
            assert np.allclose(g(probe), g(-probe), rtol=1e-9, atol=1e-300), (
                "pairwise_sum called with even=True on a non-even function"
            )
        return 2.0 * float(np.sum(g(c)))
    d = sample.pair_differences / h
    return float(np.sum(g(d))) + float(np.sum(g(-d)))


def normal_reference_roughness(sd, m):
    """``R(phi_sd^(m))`` for the ``N(0, sd^2)`` density.

    Equals ``(2m)! / (2^(2m+1) m! sqrt(pi)) * sd^-(2m+1)``.
    """
    if not sd > 0:
        raise ValueError("sd must be positive")
    unit = math.factorial(2 * m) / (2.0 ** (2 * m + 1) * math.factorial(m) * math.sqrt(math.pi))
    return unit / sd ** (2 * m + 1)


def amise_bandwidth(n, r, kernel, roughness_f):
    """AMISE-optimal bandwidth given ``R(f^(r+2)) = roughness_f``."""
    kernel = check_order(kernel, r)
    p = 2 * r + 5
    mu2 = kernel_moment(kernel, 2)
    const = (2 * r + 1) * kernel_roughness(kernel, r) / (mu2**2 * roughness_f)
    return const ** (1.0 / p) * n ** (-1.0 / p)


def amise_minimum(n, r, kernel, roughness_f):
    """Smallest attainable AMISE, reached at ``amise_bandwidth``."""
    kernel = check_order(kernel, r)
    p = 2 * r + 5
    mu2 = kernel_moment(kernel, 2)
    rk = kernel_roughness(kernel, r)
    return (
        p / 4.0
        * rk ** (4.0 / p)
        * (mu2**2 * roughness_f / (2 * r + 1)) ** ((2 * r + 1) / p)
        * n ** (-4.0 / p)
    )


def _amise(h, n, r, kernel, roughness_f):
    mu2 = kernel_moment(kernel, 2)
    return kernel_roughness(kernel, r) / (n * h ** (2 * r + 1)) + 0.25 * h**4 * mu2**2 * roughness_f


def oversmoothing_bandwidth(sample, r=0, kernel=Kernel.GAUSSIAN):
    """Upper bandwidth bound: the AMISE rule with a normal reference at the sample sd."""
    sample = as_sample(sample)
    rf = normal_reference_roughness(sample.sd, r + 2)
    return amise_bandwidth(sample.n, r, kernel, rf)


def default_interval(sample, r=0, kernel=Kernel.GAUSSIAN):
    hos = oversmoothing_bandwidth(sample, r, kernel)
    return SearchInterval(hos / 50.0, hos, 1e-4 * hos)


def resolve_interval(sample, r, kernel, interval=None, lower=None, upper=None, tol=None):
    """Build the search interval from an explicit one and/or partial overrides.

    Missing bounds come from ``default_interval``. Without an explicit
    ``tol``, overriding a bound sets the tolerance to ``1e-4 * upper``.
    """
    if interval is not None:
        if not isinstance(interval, SearchInterval):
            if len(interval) == 3:
                interval = SearchInterval(*map(float, interval))
            else:
                lo, hi = map(float, interval)
                interval = SearchInterval(lo, hi, 1e-4 * hi)
        if lower is None and upper is None and tol is None:
            return interval
        base = interval
    else:
        if lower is None and upper is None and tol is None:
            return default_interval(sample, r, kernel)
        base = default_interval(sample, r, kernel)
    lo = base.lower if lower is None else float(lower)
    hi = base.upper if upper is None else float(upper)
    if tol is None:
        tol = base.tol if (lower is None and upper is None) else 1e-4 * hi
    return SearchInterval(lo, hi, float(tol))


def _require(kernel, *orders):
    for order in orders:
        check_order(kernel, order)


def _variance_term(n, h, r, kernel):
    return kernel_roughness(kernel, r) / (n * h ** (2 * r + 1))


def amise_score(sample, h, r=0, kernel=Kernel.GAUSSIAN):
    """``AMISE(h, r)`` with ``R(f^(r+2))`` from a normal reference at the sample sd."""
    sample = as_sample(sample)
    kernel = check_order(kernel, r)
    rf = normal_reference_roughness(sample.sd, r + 2)
    return _amise(h, sample.n, r, kernel, rf)


def mlcv_score(sample, h, kernel=Kernel.GAUSSIAN):
    """Leave-one-out log-likelihood ``n^-1 sum_i log[sum_{j!=i} K] - log[(n-1)h]``.

    Returns ``-inf`` when some observation has no neighbour inside the kernel
    support.
    """
    sample = as_sample(sample)
    kernel = Kernel(kernel)
    n = sample.n
    inner = np.sum(kernel_derivative(kernel, 0, sample.neighbour_distances / h), axis=1)
    if np.any(inner <= 0.0):
        return -math.inf
    return math.fsum(np.log(inner)) / n - math.log((n - 1) * h)


def ucv_score(sample, h, r=0, kernel=Kernel.GAUSSIAN):
    """Unbiased (least-squares) cross-validation criterion."""
    sample = as_sample(sample)
    kernel = check_order(kernel, r)
    _require(kernel, 2 * r)
    n = sample.n

    def g(c):
        return kernel_convolution(kernel, r, c) - 2.0 * kernel_derivative(kernel, 2 * r, c)

    cross = _sign(r) / (n * (n - 1) * h ** (2 * r + 1)) * pairwise_sum(sample, h, g)
    return _variance_term(n, h, r, kernel) + cross


def bcv_score(sample, h, r=0, kernel=Kernel.GAUSSIAN, which=1):
    """Biased cross-validation; ``which=1`` uses ``K^(r+2) * K^(r+2)``, ``which=2`` uses ``K^(2r+4)``."""
    sample = as_sample(sample)
    kernel = check_order(kernel, r)
    if which == 1:
        _require(kernel, r + 2)

        def g(c):
            return kernel_convolution(kernel, r + 2, c)
    elif which == 2:
        _require(kernel, 2 * r + 4)

        def g(c):
            return kernel_derivative(kernel, 2 * r + 4, c)
    else:
        raise ValueError(f"which must be 1 or 2, got {which}")
    n = sample.n
    mu2 = kernel_moment(kernel, 2)
    cross = mu2**2 / 4.0 * _sign(r + 2) / (n * (n - 1) * h ** (2 * r + 1)) * pairwise_sum(sample, h, g)
    return _variance_term(n, h, r, kernel) + cross


def _theta(sample, h, s, kernel):
    n = sample.n

    def g(c):
        return kernel_derivative(kernel, 2 * s, c)

    return _sign(s) / (n * (n - 1) * h ** (2 * s + 1)) * pairwise_sum(sample, h, g)


def ccv_score(sample, h, r=0, kernel=Kernel.GAUSSIAN):
    """Complete cross-validation criterion."""
    sample = as_sample(sample)
    kernel = check_order(kernel, r)
    _require(kernel, 2 * r + 4)
    n = sample.n
    mu2 = kernel_moment(kernel, 2)
    delta = kernel_moment(kernel, 4)

    def conv(c):
        return kernel_convolution(kernel, r, c)

    rough = _variance_term(n, h, r, kernel) + _sign(r) / (n * (n - 1) * h ** (2 * r + 1)) * pairwise_sum(
        sample, h, conv
    )
    return (
        rough
        - _theta(sample, h, r, kernel)
        + 0.5 * mu2 * h**2 * _theta(sample, h, r + 1, kernel)
        + (6.0 * mu2**2 - delta) / 24.0 * h**4 * _theta(sample, h, r + 2, kernel)
    )


def mcv_score(sample, h, r=0, kernel=Kernel.GAUSSIAN):
    """Modified cross-validation criterion."""
    sample = as_sample(sample)
    kernel = check_order(kernel, r)
    _require(kernel, 2 * r + 2)
    n = sample.n
    mu2 = kernel_moment(kernel, 2)

    def g(c):
        return (
            kernel_convolution(kernel, r, c)
            - kernel_derivative(kernel, 2 * r, c)
            - 0.5 * mu2 * kernel_derivative(kernel, 2 * r + 2, c)
        )

    cross = _sign(r) / (n * (n - 1) * h ** (2 * r + 1)) * pairwise_sum(sample, h, g)
    return _variance_term(n, h, r, kernel) + cross


def tcv_score(sample, h, r=0, kernel=Kernel.GAUSSIAN):
    """Trimmed cross-validation criterion.

    Pairs with ``|c| <= c_n / h^(2r+1)``, ``c_n = 1/n``, lose their
    ``-2 K^(2r)`` term; the threshold is applied to the scaled difference
    ``c = (X_j - X_i) / h`` as is.
    """
    sample = as_sample(sample)
    kernel = check_order(kernel, r)
    _require(kernel, 2 * r)
    n = sample.n
    threshold = (1.0 / n) / h ** (2 * r + 1)

    def g(c):
        keep = np.abs(c) > threshold
        return kernel_convolution(kernel, r, c) - np.where(
            keep, 2.0 * kernel_derivative(kernel, 2 * r, c), 0.0
        )

    cross = _sign(r) / (n * (n - 1) * h ** (2 * r + 1)) * pairwise_sum(sample, h, g)
    return _variance_term(n, h, r, kernel) + cross


def score_function(method):
    """Return ``f(sample, h, r, kernel)`` for the named criterion."""
    if method == "mlcv":
        return lambda sample, h, r=0, kernel=Kernel.GAUSSIAN: mlcv_score(sample, h, kernel)
    if method in ("bcv1", "bcv2"):
        which = int(method[-1])
        return lambda sample, h, r=0, kernel=Kernel.GAUSSIAN: bcv_score(sample, h, r, kernel, which)
    try:
        return {
            "amise": amise_score,
            "ucv": ucv_score,
            "ccv": ccv_score,
            "mcv": mcv_score,
            "tcv": tcv_score,
        }[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}") from None


def _check_method_orders(method, kernel, r):
    needed = {
        "amise": r,
        "mlcv": 0,
        "ucv": 2 * r,
        "bcv1": r + 2,
        "bcv2": 2 * r + 4,
        "ccv": 2 * r + 4,
        "mcv": 2 * r + 2,
        "tcv": 2 * r,
    }[method]
    check_order(kernel, r)
    check_order(kernel, needed)


def _optimize(method, sample, r, kernel, interval, lower, upper, tol):
    sample = as_sample(sample)
    kernel = check_order(kernel, r)
    _check_method_orders(method, kernel, r)
    interval = resolve_interval(sample, r, kernel, interval, lower, upper, tol)
    score = score_function(method)
    if method == "mlcv":
        res = golden_section(lambda h: -score(sample, h, r, kernel), interval.lower, interval.upper, interval.tol)
    else:
        res = golden_section(lambda h: score(sample, h, r, kernel), interval.lower, interval.upper, interval.tol)
    objective = score(sample, res.x, r, kernel)
    return SelectorResult(method, res.x, objective, int(r), kernel, interval, res.at_boundary)


def h_amise(sample, r=0, kernel=Kernel.GAUSSIAN, interval=None, *, lower=None, upper=None, tol=None):
    """AMISE-optimal bandwidth with a normal-reference ``R(f^(r+2))``.

    Closed form; the interval only clamps the result.
    """
    sample = as_sample(sample)
    kernel = check_order(kernel, r)
    interval = resolve_interval(sample, r, kernel, interval, lower, upper, tol)
    h = oversmoothing_bandwidth(sample, r, kernel)
    clamped = min(max(h, interval.lower), interval.upper)
    objective = amise_score(sample, clamped, r, kernel)
    return SelectorResult("amise", clamped, objective, int(r), kernel, interval, clamped != h)


def h_mlcv(sample, kernel=Kernel.GAUSSIAN, interval=None, *, lower=None, upper=None, tol=None):
    """Bandwidth maximizing the leave-one-out likelihood; ``objective`` is the MLCV value."""
    return _optimize("mlcv", sample, 0, kernel, interval, lower, upper, tol)


def h_ucv(sample, r=0, kernel=Kernel.GAUSSIAN, interval=None, *, lower=None, upper=None, tol=None):
    return _optimize("ucv", sample, r, kernel, interval, lower, upper, tol)


def h_bcv(sample, r=0, kernel=Kernel.GAUSSIAN, which=1, interval=None, *, lower=None, upper=None, tol=None):
    if which not in (1, 2):
        raise ValueError(f"which must be 1 or 2, got {which}")
    return _optimize(f"bcv{which}", sample, r, kernel, interval, lower, upper, tol)


def h_ccv(sample, r=0, kernel=Kernel.GAUSSIAN, interval=None, *, lower=None, upper=None, tol=None):
    return _optimize("ccv", sample, r, kernel, interval, lower, upper, tol)


def h_mcv(sample, r=0, kernel=Kernel.GAUSSIAN, interval=None, *, lower=None, upper=None, tol=None):
    return _optimize("mcv", sample, r, kernel, interval, lower, upper, tol)


def h_tcv(sample, r=0, kernel=Kernel.GAUSSIAN, interval=None, *, lower=None, upper=None, tol=None):
    return _optimize("tcv", sample, r, kernel, interval, lower, upper, tol)


def select_bandwidth(method, sample, r=0, kernel=Kernel.GAUSSIAN, interval=None, *, lower=None, upper=None, tol=None):
    """Dispatch to the selector named by ``method`` (one of ``METHODS``)."""
    if method == "amise":
        return h_amise(sample, r, kernel, interval, lower=lower, upper=upper, tol=tol)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if method == "mlcv":
        r = 0
    return _optimize(method, sample, r, kernel, interval, lower, upper, tol)


def score_profile(method, sample, r=0, kernel=Kernel.GAUSSIAN, bandwidths=None):
    """Evaluate a criterion on an increasing bandwidth sequence.

    Points where the score cannot be evaluated become NaN; those and any
    non-finite scores (the MLCV ``-inf`` sentinel) are counted in
    ``failures``.
    """
    sample = as_sample(sample)
    kernel = check_order(kernel, r)
    if method == "mlcv":
        r = 0
    _check_method_orders(method, kernel, r)
    bws = np.array(bandwidths, dtype=float).ravel()
    if bws.size == 0 or not np.all(bws > 0):
        raise ValueError("bandwidths must be positive")
    if not np.all(np.diff(bws) > 0):
        raise ValueError("bandwidths must be strictly increasing")
    score = score_function(method)
    scores = np.empty_like(bws)
    failures = 0
    for i, h in enumerate(bws):
        try:
            value = score(sample, float(h), r, kernel)
        except (ArithmeticError, ValueError):
            value = math.nan
        if not math.isfinite(value):
            failures += 1
        scores[i] = value
    return ScoreProfile(method, int(r), kernel, bws, scores, failures)

import math
import warnings

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import norm

from densderiv import (
    BoundaryMinimumWarning,
    METHODS,
    OrderTooHighError,
    Sample,
    SearchInterval,
    bcv_score,
    ccv_score,
    h_amise,
    h_bcv,
    h_mlcv,
    h_tcv,
    h_ucv,
    kernel_convolution,
    kernel_derivative,
    kernel_roughness,
    mcv_score,
    mlcv_score,
    oversmoothing_bandwidth,
    sample_bimodal,
    score_profile,
    select_bandwidth,
    tcv_score,
    ucv_score,
)
from densderiv.selectors import (
    amise_bandwidth,
    amise_minimum,
    amise_score,
    default_interval,
    normal_reference_roughness,
    pairwise_sum,
    resolve_interval,
    score_function,
)

import oracles

SELECTOR_METHODS = [m for m in METHODS if m != "amise"]


def _score(method, sample, h, r=0, kernel="gaussian"):
    return score_function(method)(sample, h, r, kernel)


def test_pairwise_sum_examples():
    s = Sample([0.0, 1.0])
    assert pairwise_sum(s, 1.0, lambda c: c, even=False) == 0.0
    assert pairwise_sum(s, 1.0, lambda c: c * c) == 2.0


def test_pairwise_sum_matches_nested_loop(rng):
    x = rng.uniform(size=10)
    s = Sample(x)
    loop = math.fsum(norm.pdf((x[j] - x[i]) / 0.3) for i in range(10) for j in range(10) if i != j)
    assert pairwise_sum(s, 0.3, norm.pdf) == pytest.approx(loop, rel=1e-14)


def test_pairwise_sum_debug_check_rejects_odd_function():
    if not __debug__:
        pytest.skip("assertions disabled")
    with pytest.raises(AssertionError):
        pairwise_sum(Sample([0.0, 1.0, 3.0]), 1.0, lambda c: c)


def test_normal_reference_roughness():
    assert normal_reference_roughness(1.0, 0) == pytest.approx(1 / (2 * math.sqrt(math.pi)), rel=1e-15)
    assert normal_reference_roughness(1.0, 2) == pytest.approx(3 / (8 * math.sqrt(math.pi)), rel=1e-15)
    assert normal_reference_roughness(2.0, 0) == pytest.approx(0.1410474, abs=1e-7)
    quad2 = quad(lambda t: (norm.pdf(t) * (t * t - 1)) ** 2, -np.inf, np.inf)[0]
    assert normal_reference_roughness(1.0, 2) == pytest.approx(quad2, rel=1e-10)


def test_amise_bandwidth_formula():
    h = amise_bandwidth(1, 0, "gaussian", normal_reference_roughness(1.0, 2))
    assert h == pytest.approx((0.2820948 / 0.2115711) ** 0.2, rel=1e-6)
    assert h == pytest.approx(1.0592, abs=1e-4)


@pytest.mark.parametrize("r", [0, 1, 2])
def test_amise_n_scaling(r):
    rf = normal_reference_roughness(1.3, r + 2)
    p = 2 * r + 5
    base = amise_bandwidth(100, r, "gaussian", rf) * 100 ** (1 / p)
    for n in (200, 1600, 3200):
        assert amise_bandwidth(n, r, "gaussian", rf) * n ** (1 / p) == pytest.approx(base, rel=1e-12)
    if r == 0:
        ratio = amise_bandwidth(100, 0, "gaussian", rf) / amise_bandwidth(3200, 0, "gaussian", rf)
        assert ratio == pytest.approx(2.0, rel=1e-12)


def test_amise_minimum_is_attained_and_decreasing():
    rf = normal_reference_roughness(1.0, 2)
    for n in (50, 200):
        h = amise_bandwidth(n, 0, "gaussian", rf)
        m = amise_minimum(n, 0, "gaussian", rf)
        assert m > 0
        direct = kernel_roughness("gaussian") / (n * h) + 0.25 * h**4 * rf
        assert m == pytest.approx(direct, rel=1e-12)
    assert amise_minimum(200, 0, "gaussian", rf) < amise_minimum(50, 0, "gaussian", rf)


def test_oversmoothing_bandwidth(bimodal200):
    s = bimodal200
    rf = 3 / (8 * math.sqrt(math.pi)) / s.sd**5
    expected = (0.5 / math.sqrt(math.pi) / rf) ** 0.2 * s.n ** -0.2
    assert oversmoothing_bandwidth(s) == pytest.approx(expected, rel=1e-13)
    assert oversmoothing_bandwidth(Sample(2 * s.values)) == pytest.approx(2 * oversmoothing_bandwidth(s), rel=1e-13)


def test_h_amise(bimodal200):
    res = h_amise(bimodal200, r=1)
    assert res.h == oversmoothing_bandwidth(bimodal200, 1)
    assert res.objective == amise_score(bimodal200, res.h, 1)
    assert not res.at_boundary
    clamped = h_amise(bimodal200, upper=0.3)
    assert clamped.h == 0.3 and clamped.at_boundary


def test_default_interval(bimodal200):
    hos = oversmoothing_bandwidth(bimodal200, 1)
    iv = default_interval(bimodal200, 1)
    assert iv == SearchInterval(hos / 50, hos, 1e-4 * hos)


def test_resolve_interval(bimodal200):
    base = default_interval(bimodal200, 0, "gaussian")
    assert resolve_interval(bimodal200, 0, "gaussian") == base
    assert resolve_interval(bimodal200, 0, "gaussian", upper=0.5) == SearchInterval(base.lower, 0.5, 5e-5)
    assert resolve_interval(bimodal200, 0, "gaussian", (0.1, 0.8)) == SearchInterval(0.1, 0.8, 8e-5)
    assert resolve_interval(bimodal200, 0, "gaussian", (0.1, 0.8, 1e-3)) == SearchInterval(0.1, 0.8, 1e-3)
    assert resolve_interval(bimodal200, 0, "gaussian", (0.1, 0.8), tol=1e-2).tol == 1e-2
    with pytest.raises(ValueError):
        resolve_interval(bimodal200, 0, "gaussian", lower=2.0, upper=1.0)


def test_mlcv_examples():
    assert mlcv_score(Sample([0.0, 1.0]), 1.0) == pytest.approx(math.log(norm.pdf(1.0)), abs=1e-12)
    assert mlcv_score(Sample([0.0, 1.0]), 1.0) == pytest.approx(-1.41894, abs=1e-5)
    assert mlcv_score(Sample([0.0, 10.0]), 1.0, "epanechnikov") == -math.inf
    x = np.array([0.3, 1.1, 2.0, 2.2])
    assert mlcv_score(Sample(x + 7.0), 0.5) == pytest.approx(mlcv_score(Sample(x), 0.5), rel=1e-13)


def test_two_point_mlcv_maximum():
    # log phi(d/h) - log h peaks at h = d
    res = h_mlcv(Sample([0.0, 1.0]), interval=(0.2, 3.0, 1e-8))
    grid = np.linspace(0.2, 3.0, 2001)
    best = grid[np.argmax([mlcv_score(Sample([0.0, 1.0]), h) for h in grid])]
    assert abs(res.h - best) <= grid[1] - grid[0]
    assert res.h == pytest.approx(1.0, abs=1e-7)


@pytest.mark.parametrize("method", ["ucv", "bcv1", "bcv2", "ccv", "mcv", "tcv"])
def test_separated_pair_leaves_variance_term(method):
    assert _score(method, Sample([0.0, 100.0]), 1.0) == pytest.approx(0.1410474, abs=1e-7)
    assert _score(method, Sample([0.0, 100.0]), 1.0) == pytest.approx(kernel_roughness("gaussian") / 2, abs=1e-12)


def test_mcv_pair_function_at_zero():
    value = (
        kernel_convolution("gaussian", 0, 0.0)
        - kernel_derivative("gaussian", 0, 0.0)
        - 0.5 * kernel_derivative("gaussian", 2, 0.0)
    )
    assert value == pytest.approx(0.0826236, abs=1e-7)


def test_tcv_trims_coincident_pair():
    s = Sample([0.0, 1e-9])
    h = 0.7
    assert tcv_score(s, h) - ucv_score(s, h) == pytest.approx(2 * norm.pdf(0) / h, rel=1e-12)


def test_tcv_equals_ucv_on_spread_data():
    s = Sample(np.arange(12.0) * 0.9)
    for h in (0.3, 0.6, 1.2):
        assert tcv_score(s, h) == ucv_score(s, h)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundaryMinimumWarning)
        assert h_tcv(s, interval=(0.3, 1.5)).h == h_ucv(s, interval=(0.3, 1.5)).h


def test_ucv_at_order_zero_is_least_squares_cv(bimodal50):
    x = list(bimodal50.values)
    pdf = lambda c: norm.pdf(c)  # noqa: E731
    conv = lambda c: norm.pdf(c, scale=math.sqrt(2))  # noqa: E731
    for h in (0.2, 0.5):
        assert ucv_score(bimodal50, h) == pytest.approx(oracles.lscv_r0(x, h, pdf, conv), rel=1e-12)


@pytest.mark.parametrize("kernel, r", [("gaussian", 0), ("gaussian", 2), ("triweight", 1)])
def test_scores_match_nested_loop_oracles(kernel, r):
    rng = np.random.default_rng(5)
    x = rng.normal(size=10)
    s = Sample(x)
    h = 0.8 if kernel == "gaussian" else 2.0
    xs = list(x)
    pairs = [
        (ucv_score(s, h, r, kernel), oracles.ucv(xs, h, r, kernel)),
        (bcv_score(s, h, r, kernel, 1), oracles.bcv(xs, h, r, kernel, 1)),
        (bcv_score(s, h, r, kernel, 2), oracles.bcv(xs, h, r, kernel, 2)),
        (ccv_score(s, h, r, kernel), oracles.ccv(xs, h, r, kernel)),
        (mcv_score(s, h, r, kernel), oracles.mcv(xs, h, r, kernel)),
        (tcv_score(s, h, r, kernel), oracles.tcv(xs, h, r, kernel)),
        (mlcv_score(s, h, kernel), oracles.mlcv(xs, h, kernel)),
    ]
    for got, want in pairs:
        assert got == pytest.approx(want, rel=1e-12)


def test_order_requirements():
    s = Sample([0.0, 1.0, 2.5])
    with pytest.raises(OrderTooHighError):
        ucv_score(s, 1.0, 2, "epanechnikov")
    with pytest.raises(OrderTooHighError):
        bcv_score(s, 1.0, 0, "epanechnikov", which=2)
    with pytest.raises(OrderTooHighError):
        ccv_score(s, 1.0, 3, "triweight")
    with pytest.raises(OrderTooHighError):
        h_bcv(s, 1, "biweight", which=2)
    with pytest.raises(ValueError):
        bcv_score(s, 1.0, which=3)
    with pytest.raises(ValueError):
        select_bandwidth("lscv", s)


@pytest.mark.parametrize("c", [0.5, 2.0, 10.0])
@pytest.mark.parametrize("method", ["ucv", "bcv1", "bcv2", "ccv", "mcv"])
def test_score_scale_equivariance(bimodal50, method, c):
    for r in (0, 1):
        a = _score(method, bimodal50, 0.4, r)
        b = _score(method, Sample(c * bimodal50.values), c * 0.4, r)
        assert b == pytest.approx(c ** -(2 * r + 1) * a, rel=1e-12)


def test_tcv_trimming_threshold_is_not_scale_free():
    # at r = 0 a pair is trimmed when |X_j - X_i| <= 1/n in data units
    s = Sample([0.0, 0.05, 1.0, 2.0])
    scaled = Sample(10 * s.values)
    assert tcv_score(s, 0.5) != ucv_score(s, 0.5)
    assert tcv_score(scaled, 5.0) == ucv_score(scaled, 5.0)
    assert tcv_score(scaled, 5.0) != pytest.approx(tcv_score(s, 0.5) / 10, rel=1e-3)


@pytest.mark.parametrize("method", SELECTOR_METHODS)
def test_selectors_are_permutation_invariant(bimodal50, rng, method):
    shuffled = Sample(rng.permutation(bimodal50.values))
    assert select_bandwidth(method, shuffled).h == select_bandwidth(method, bimodal50).h


@pytest.mark.parametrize("method", METHODS)
def test_selectors_are_translation_invariant_on_dyadic_data(method):
    # rounding to multiples of 2**-10 keeps shifted differences exact
    values = np.round(sample_bimodal(60, seed=3).values * 1024) / 1024
    a = select_bandwidth(method, Sample(values))
    b = select_bandwidth(method, Sample(values + 256.0))
    assert a.h == b.h


@pytest.mark.parametrize("method", METHODS)
def test_objective_matches_score(bimodal50, method):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundaryMinimumWarning)
        res = select_bandwidth(method, bimodal50, r=1 if method != "mlcv" else 0)
    assert res.interval.lower <= res.h <= res.interval.upper
    assert res.objective == pytest.approx(_score(method, bimodal50, res.h, res.r), rel=1e-12)


def test_ucv_matches_dense_grid(bimodal50):
    res = h_ucv(bimodal50)
    grid = np.linspace(res.interval.lower, res.interval.upper, 2000)
    best = grid[np.argmin([ucv_score(bimodal50, h) for h in grid])]
    assert abs(res.h - best) <= grid[1] - grid[0]


def test_user_interval_is_honoured(bimodal200):
    res = h_bcv(bimodal200, r=1, which=1, lower=0.1, upper=0.8)
    assert (res.interval.lower, res.interval.upper) == (0.1, 0.8)
    assert 0.1 <= res.h <= 0.8
    res2 = h_bcv(bimodal200, r=1, which=2, lower=0.1, upper=0.8)
    assert 0.1 <= res2.h <= 0.8


def test_boundary_minimum_is_flagged(bimodal200):
    # UCV keeps decreasing up to h = 0.05 on this sample
    with pytest.warns(BoundaryMinimumWarning):
        res = h_ucv(bimodal200, lower=0.01, upper=0.05)
    assert res.at_boundary and res.h == 0.05


def test_profile_matches_independent_calls(bimodal50):
    bws = np.linspace(0.1, 1.0, 50)
    prof = score_profile("ucv", bimodal50, 0, "gaussian", bws)
    assert prof.failures == 0
    np.testing.assert_array_equal(prof.scores, [ucv_score(bimodal50, h) for h in bws])
    assert prof.argmin() == bws[np.argmin(prof.scores)]


def test_profile_minimum_near_selected_bandwidth(bimodal50):
    res = h_ucv(bimodal50)
    bws = np.sort(np.append(np.linspace(res.interval.lower, res.interval.upper, 40), res.h))
    prof = score_profile("ucv", bimodal50, 0, "gaussian", bws)
    assert prof.argmin() == res.h


def test_mlcv_profile_counts_sentinels():
    s = Sample([0.0, 0.1, 5.0, 5.1, 20.0])
    prof = score_profile("mlcv", s, 0, "epanechnikov", [0.05, 0.2, 1.0, 30.0])
    assert prof.failures == 3
    assert np.isneginf(prof.scores[:3]).all()
    assert prof.argmin() == 30.0


def test_profile_validation(bimodal50):
    with pytest.raises(ValueError):
        score_profile("ucv", bimodal50, 0, "gaussian", [0.5, 0.2])
    with pytest.raises(ValueError):
        score_profile("ucv", bimodal50, 0, "gaussian", [0.0, 0.2])
    with pytest.raises(OrderTooHighError):
        score_profile("ccv", bimodal50, 1, "epanechnikov", [0.2, 0.5])

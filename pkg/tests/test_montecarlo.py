import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from betatw.ensembles import EnsembleSpec
from betatw.formats import batch_csv
from betatw.montecarlo import (
    batch_moments,
    clopper_pearson,
    empirical_tail,
    fit_tail_exponent,
    fit_tail_log,
    goe2_spacings,
    ks_statistic,
    ks_two_sample,
    ks_two_sample_critical,
    map_substreams,
    resolve_threads,
    run_batch,
)
from betatw.tails import wigner_surmise_cdf


@given(st.integers(1, 400), st.data())
def test_clopper_pearson_matches_scipy(n, data):
    k = data.draw(st.integers(0, n))
    ci = stats.binomtest(k, n).proportion_ci(0.95, method="exact")
    lo, hi = clopper_pearson(k, n)
    assert lo == pytest.approx(ci.low, abs=1e-12)
    assert hi == pytest.approx(ci.high, abs=1e-12)
    assert lo <= k / n <= hi


def test_empirical_tail_interval():
    p, (lo, hi) = empirical_tail(np.arange(100.0), 89.5)
    assert p == pytest.approx(0.1)
    assert lo < 0.1 < hi


@given(st.floats(0.5, 3.0), st.floats(0.05, 5.0))
def test_fit_recovers_exact_law(c, k):
    xs = np.linspace(1.5, 4.0, 12)
    fit = fit_tail_log(xs, -k * xs**c)
    assert fit.exponent == pytest.approx(c, rel=1e-9)
    assert fit.coefficient == pytest.approx(k, rel=1e-9)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.count == 12 and fit.window == (1.5, 4.0)


def test_fit_from_points_and_errors():
    xs = np.array([2.0, 3.0, 4.0])
    fit = fit_tail_exponent(list(zip(xs, np.exp(-0.5 * xs**2))))
    assert fit.exponent == pytest.approx(2.0)
    assert fit.to_dict()["coefficient"] == pytest.approx(0.5)
    with pytest.raises(ValueError):
        fit_tail_exponent([(2.0, 0.5), (3.0, 0.0), (4.0, 0.1)])
    with pytest.raises(ValueError):
        fit_tail_log([0.5, 2.0, 3.0], [-1.0, -2.0, -3.0])
    with pytest.raises(ValueError):
        fit_tail_log([2.0, 3.0], [-1.0, -2.0])
    with pytest.raises(ValueError):
        fit_tail_log([2.0, 3.0, 4.0], [-1.0, -0.5, -3.0])


def test_ks_matches_scipy():
    x = np.random.default_rng(0).standard_normal(500)
    assert ks_statistic(x, stats.norm.cdf) == pytest.approx(stats.kstest(x, "norm").statistic, abs=1e-15)
    y = np.random.default_rng(1).standard_normal(300) + 0.1
    assert ks_two_sample(x, y) == pytest.approx(stats.ks_2samp(x, y).statistic, abs=1e-15)


def test_ks_two_sample_critical_value():
    # c(0.05) = 1.358 in the asymptotic table
    assert ks_two_sample_critical(100, 100, 0.05) == pytest.approx(1.3581 * math.sqrt(0.02), rel=1e-3)


def test_batch_moments():
    m = batch_moments(np.array([1.0, 2.0, 3.0, 4.0]))
    assert m["mean"] == 2.5 and m["var"] == pytest.approx(5 / 3)
    assert m["mean_se"] == pytest.approx(math.sqrt(5 / 12))


def test_resolve_threads():
    assert resolve_threads(3) == 3
    assert resolve_threads(0) >= 1
    assert resolve_threads(None) >= 1


def test_map_substreams_independent_of_threads():
    fn = lambda rng: rng.standard_normal()
    one = map_substreams(fn, 37, 4, threads=1)
    many = map_substreams(fn, 37, 4, threads=8)
    assert np.array_equal(one, many)
    with pytest.raises(ValueError):
        map_substreams(fn, 0, 4)


@pytest.mark.parametrize("kind, beta", [("beta_hermite", 2.0), ("goe_dense", 1.0), ("stochastic_airy", 4.0)])
def test_run_batch_byte_identical_across_threads(kind, beta):
    spec = EnsembleSpec(kind, beta, 40, 6.0, 0.05)
    a = run_batch(spec, 200, 12, threads=1)
    b = run_batch(spec, 200, 12, threads=8)
    assert batch_csv(a) == batch_csv(b)
    assert a == b
    assert run_batch(spec, 200, 13, threads=2) != a


def test_goe2_spacings_follow_surmise():
    s = goe2_spacings(20_000, 5)
    s = s / s.mean()
    assert ks_statistic(s, wigner_surmise_cdf) < 0.02

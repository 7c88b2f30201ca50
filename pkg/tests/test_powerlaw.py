import numpy as np
import pytest
from scipy import stats
from scipy.special import zeta

from hardcopy.powerlaw import FitError, fit_power_law


def discrete_power_law_sample(gamma, k_min, n, seed):
    """Inverse-CDF sampler for P(k) ~ k^-gamma, k >= k_min, via scipy's Hurwitz zeta."""
    rng = np.random.default_rng(seed)
    grid = np.arange(k_min, 10**6)
    ccdf = zeta(gamma, grid) / zeta(gamma, k_min)       # P(K >= k)
    u = rng.random(n)
    idx = np.searchsorted(-ccdf, -u, side="left") - 1
    return grid[np.clip(idx, 0, None)]


def test_zipf_sample_k_min_1():
    x = stats.zipf.rvs(2.8, size=10**6, random_state=np.random.default_rng(1))
    fit = fit_power_law(x, k_min=1)
    assert 2.79 <= fit.gamma_hat <= 2.81
    assert fit.n_tail == 10**6
    assert fit.ks_distance < 0.005


def test_inverse_cdf_sample_k_min_10():
    x = discrete_power_law_sample(2.5, 10, 200_000, seed=3)
    fit = fit_power_law(x, k_min=10)
    assert fit.gamma_hat == pytest.approx(2.5, abs=0.02)
    assert fit.k_min == 10


def test_accepts_mapping_and_histogram():
    x = stats.zipf.rvs(2.2, size=50_000, random_state=np.random.default_rng(4))
    k, c = np.unique(x, return_counts=True)
    f1 = fit_power_law(x, k_min=2)
    f2 = fit_power_law(dict(zip(k.tolist(), c.tolist())), k_min=2)
    assert f1.gamma_hat == pytest.approx(f2.gamma_hat, abs=1e-9)
    assert f1.log_likelihood == pytest.approx(f2.log_likelihood)


def test_error_shrinks_with_sample_size():
    errs = []
    for n in (10_000, 40_000):
        e = [fit_power_law(stats.zipf.rvs(2.8, size=n, random_state=np.random.default_rng(s)),
                           k_min=1).gamma_hat - 2.8 for s in range(32)]
        errs.append(np.sqrt(np.mean(np.square(e))))
    # 4x data: error should roughly halve
    assert errs[0] / 2.8 < errs[1] < errs[0] / 1.4


def test_degenerate_tail():
    with pytest.raises(FitError):
        fit_power_law({5: 100}, k_min=1)


def test_too_few_tail_points():
    with pytest.raises(FitError):
        fit_power_law({1: 1000, 12: 3, 15: 2}, k_min=10)


def test_unbracketed_optimum():
    # tail so steep the likelihood keeps rising past the upper bound
    with pytest.raises(FitError):
        fit_power_law({1: 10**6, 2: 1}, k_min=1)

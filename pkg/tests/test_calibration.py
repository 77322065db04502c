import numpy as np
import pytest

from seismic.calibration import (ReactionSample, alpha_grid, calibrate, calibrate_alpha,
                                 estimate_n_star, fit_alpha_at, fit_memory_kernel)
from seismic.errors import DomainError, FitError
from seismic.estimator import Cascade, cascade_stats, infectiousness_weighted
from seismic.kernel import TWITTER_KERNEL, sample_reaction_times
from seismic.simulator import DegreeDistribution, SimConfig, simulate_cascade


def test_kernel_fit_recovers_theta(rng):
    delays = sample_reaction_times(100_000, TWITTER_KERNEL, rng)
    fit = fit_memory_kernel(delays, s0=300.0)
    assert 0.22 <= fit.theta <= 0.27
    assert fit.s0 == 300.0


def test_kernel_fit_needs_tail():
    with pytest.raises(FitError):
        fit_memory_kernel(np.linspace(1, 300, 5000), s0=300.0)
    with pytest.raises(DomainError):
        ReactionSample([1.0, -2.0])


def test_n_star_examples():
    constant = [Cascade([0, 1, 2], [100, 100, 100])]
    assert estimate_n_star(constant) == 100
    mixed = [(Cascade([0, 5], [0, 200]), 1.0)]
    assert estimate_n_star(mixed) == 100
    with pytest.raises(FitError):
        estimate_n_star([])


def test_n_star_from_simulator():
    cascades = [simulate_cascade(SimConfig(0.01, DegreeDistribution.poisson(50), 50,
                                           86400.0, seed=s)).cascade for s in range(40)]
    # the root degree is fixed at 50 as well, so every event has mean 50
    deg = np.concatenate([c.degrees for c in cascades]).astype(float)
    se = np.sqrt(50.0 / deg.size)
    assert abs(estimate_n_star(cascades) - 50.0) < 3 * se


def test_alpha_grid():
    g = alpha_grid(0.01)
    assert g[0] == pytest.approx(0.01) and g[-1] == 1.0 and g.size == 100
    with pytest.raises(DomainError):
        alpha_grid(0.3)


def _cascade(rng, r=120):
    times = np.concatenate([[0.0], np.sort(rng.uniform(0, 3000, r))])
    return Cascade(times, rng.integers(1, 80, r + 1))


def _future(cascade, t):
    p = infectiousness_weighted(cascade, t, TWITTER_KERNEL).p_hat
    stats = cascade_stats(cascade, t, TWITTER_KERNEL)
    return stats.reshare_count, p * stats.exposure_gap / (1 - 20.0 * p)


def test_single_cascade_recovers_alpha(rng):
    c = _cascade(rng)
    t = 3600.0
    r_t, future = _future(c, t)
    fit = fit_alpha_at([(c, r_t + 0.5 * future)], t)
    assert fit.alpha == pytest.approx(0.5)
    assert fit.objective == pytest.approx(0.0, abs=1e-12)


def test_grid_never_worse_than_one(rng):
    training = []
    for _ in range(30):
        c = _cascade(rng, int(rng.integers(60, 200)))
        r_t, future = _future(c, 3600.0)
        training.append((c, r_t + rng.uniform(0, 1.5) * future))
    fit = fit_alpha_at(training, 3600.0)
    assert fit.objective <= fit.trace[-1]
    assert fit.n_used == 30


def test_calibrate_drops_empty_times(rng):
    training = [(_cascade(rng), 500.0) for _ in range(5)]
    with pytest.warns(RuntimeWarning):
        schedule, fits = calibrate_alpha(training, [1.0, 3600.0])
    assert [t for t, _ in schedule] == [3600.0]
    report = calibrate(training, [3600.0], reaction_sample=sample_reaction_times(5000, rng=rng))
    assert report.alpha_schedule == schedule
    assert 0 < report.kernel.theta
    with pytest.raises(FitError), pytest.warns(RuntimeWarning):
        calibrate(training, [1.0])

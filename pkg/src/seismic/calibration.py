"""Network-wide parameter fitting: memory kernel tail, mean degree, alpha schedule."""
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, FitError, UndefinedEstimateError
from .estimator import Cascade, cascade_stats, infectiousness_weighted
from .evaluation import median_ape
from .kernel import TWITTER_KERNEL, MemoryKernelParams

MIN_TAIL_SAMPLES = 100


@dataclass(frozen=True, eq=False)
class ReactionSample:
    """Delays (seconds) between exposure to a post and resharing it."""

    delays: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.delays, dtype=float).reshape(-1)
        if d.size == 0:
            raise DomainError("reaction sample is empty")
        if np.any(~(d > 0)) or not np.all(np.isfinite(d)):
            raise DomainError("reaction times must be positive and finite")
        object.__setattr__(self, "delays", d)


def fit_memory_kernel(sample, s0=300.0):
    """Fit the power-law tail exponent from the empirical ccdf beyond ``s0``.

    ``theta`` is minus the least-squares slope of ``log P(D >= d | D > s0)``
    against ``log(d / s0)``; ``c`` then follows from normalization.
    """
    if not isinstance(sample, ReactionSample):
        sample = ReactionSample(sample)
    tail = np.sort(sample.delays[sample.delays > s0])
    m = tail.size
    if m < MIN_TAIL_SAMPLES:
        raise FitError(f"need at least {MIN_TAIL_SAMPLES} delays above s0={s0}, got {m}")
    ccdf = (m - np.arange(m)) / m
    slope, _ = np.polyfit(np.log(tail / s0), np.log(ccdf), 1)
    theta = -float(slope)
    if not theta > 0:
        raise FitError(f"fitted tail exponent {theta:.4g} is not positive")
    return MemoryKernelParams(s0=s0, theta=theta)


def _cascades(training):
    for item in training:
        yield item if isinstance(item, Cascade) else item[0]


def estimate_n_star(training):
    """Mean follower count over every event of every training cascade."""
    total, count = 0, 0
    for c in _cascades(training):
        total += int(c.degrees.sum())
        count += c.degrees.size
    if count == 0:
        raise FitError("cannot estimate n_star from an empty corpus")
    return total / count


def alpha_grid(step=0.01):
    n = int(round(1.0 / step))
    if n < 1 or abs(n * step - 1.0) > 1e-9:
        raise DomainError("grid step must divide 1")
    return np.arange(1, n + 1) / n


@dataclass
class AlphaFit:
    time: float
    alpha: float
    objective: float
    n_used: int
    grid: np.ndarray = field(repr=False)
    trace: np.ndarray = field(repr=False)


def fit_alpha_at(training, t, kernel=TWITTER_KERNEL, gamma_n_star=20.0, grid=None,
                 min_reshares=50):
    """Grid search of ``alpha`` minimizing training median APE at time ``t``.

    Returns ``None`` when no cascade passes the reshare gate. Ties go to
    the smaller ``alpha``.
    """
    grid = alpha_grid() if grid is None else np.asarray(grid, dtype=float)
    r_t, future, truth = [], [], []
    for cascade, r_inf in training:
        if cascade.reshare_count(t) < max(min_reshares, 1):
            continue
        try:
            p = infectiousness_weighted(cascade, t, kernel).p_hat
        except UndefinedEstimateError:
            continue
        denom = 1.0 - gamma_n_star * p
        if denom <= 0:
            continue
        stats = cascade_stats(cascade, t, kernel)
        r_t.append(stats.reshare_count)
        future.append(p * stats.exposure_gap / denom)
        truth.append(r_inf)
    if not truth:
        return None
    r_t, future, truth = map(np.asarray, (r_t, future, truth))
    trace = np.array([median_ape(r_t + a * future, truth) for a in grid])
    best = int(np.argmin(trace))
    return AlphaFit(float(t), float(grid[best]), float(trace[best]), truth.size, grid, trace)


def calibrate_alpha(training, times, gamma_n_star=20.0, grid_step=0.01,
                    kernel=TWITTER_KERNEL, min_reshares=50):
    """Alpha schedule as ``[(t, alpha), ...]`` plus the per-time fits.

    Times with no eligible cascade are dropped with a warning.
    """
    training = list(training)
    grid = alpha_grid(grid_step)
    schedule, fits = [], {}
    for t in times:
        fit = fit_alpha_at(training, t, kernel, gamma_n_star, grid, min_reshares)
        if fit is None:
            warnings.warn(f"no eligible training cascades at t={t:g}s; omitted from schedule",
                          RuntimeWarning, stacklevel=2)
            continue
        schedule.append((float(t), fit.alpha))
        fits[float(t)] = fit
    return schedule, fits


@dataclass
class CalibrationReport:
    kernel: MemoryKernelParams
    n_star: float
    alpha_schedule: list
    fits: dict = field(repr=False)


def calibrate(training, times, kernel=None, reaction_sample=None, s0=300.0,
              gamma_n_star=20.0, grid_step=0.01, min_reshares=50):
    """Fit the kernel (if a reaction sample is given), ``n_star`` and the alpha schedule."""
    training = list(training)
    if reaction_sample is not None:
        kernel = fit_memory_kernel(reaction_sample, s0)
    elif kernel is None:
        kernel = TWITTER_KERNEL
    n_star = estimate_n_star(training)
    schedule, fits = calibrate_alpha(training, times, gamma_n_star, grid_step, kernel,
                                     min_reshares)
    if not schedule:
        raise FitError("no prediction time had eligible training cascades")
    return CalibrationReport(kernel, n_star, schedule, fits)


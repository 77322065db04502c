"""Final-size prediction from an infectiousness estimate.

Two formulas are provided. :func:`predict_uncorrected` is the expected
final size of the branching process that continues the cascade after
``t`` under constant infectiousness::

    R_t + p (N_t - N_t^e) / (1 - p n_star)       if p n_star < 1

:func:`predict` is the production rule, which scales the future term by a
time-dependent ``alpha_t`` and replaces ``n_star`` in the denominator by a
damped product ``gamma_n_star``. Either returns a :class:`Prediction`
whose state is ``"supercritical"`` when the denominator is not positive.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError, NoPredictionError, UndefinedEstimateError
from .estimator import cascade_stats, infectiousness_weighted
from .kernel import TWITTER_KERNEL

SUBCRITICAL = "subcritical"
SUPERCRITICAL = "supercritical"

MINUTE = 60.0

#: (minutes, alpha) pairs fitted on Twitter data.
TWITTER_ALPHA_SCHEDULE = (
    (5, 0.389), (10, 0.803), (15, 0.772), (20, 0.709), (30, 0.680),
    (60, 0.562), (120, 0.454), (180, 0.378), (240, 0.352), (360, 0.326),
)


@dataclass(frozen=True)
class PredictionParams:
    """Correction state for :func:`predict`.

    Parameters
    ----------
    n_star : float
        Mean out-degree of the network.
    gamma_n_star : float
        Product of the damping factor and ``n_star``; only the product is
        identifiable, so it is stored as one number.
    alpha_schedule : sequence of (seconds, alpha)
        Strictly increasing times with ``alpha`` in ``(0, 1]``.
    """

    n_star: float = 100.0
    gamma_n_star: float = 20.0
    alpha_schedule: tuple = field(
        default=tuple((m * MINUTE, a) for m, a in TWITTER_ALPHA_SCHEDULE))

    def __post_init__(self):
        if not (np.isfinite(self.n_star) and self.n_star > 0):
            raise ConfigError(f"n_star must be positive, got {self.n_star}")
        if not (np.isfinite(self.gamma_n_star) and self.gamma_n_star >= 0):
            raise ConfigError(f"gamma_n_star must be nonnegative, got {self.gamma_n_star}")
        schedule = tuple((float(t), float(a)) for t, a in self.alpha_schedule)
        for t, a in schedule:
            if not (np.isfinite(t) and t > 0):
                raise ConfigError(f"alpha schedule time must be positive, got {t}")
            if not 0 < a <= 1:
                raise ConfigError(f"alpha must lie in (0, 1], got {a}")
        if any(t1 >= t2 for (t1, _), (t2, _) in zip(schedule, schedule[1:])):
            raise ConfigError("alpha schedule times must be strictly increasing")
        object.__setattr__(self, "alpha_schedule", schedule)
        object.__setattr__(self, "n_star", float(self.n_star))
        object.__setattr__(self, "gamma_n_star", float(self.gamma_n_star))


@dataclass(frozen=True)
class Prediction:
    observe_time: float
    state: str
    r_inf_hat: float
    p_hat: float
    r_t: int
    exposure_gap: float

    @property
    def is_supercritical(self):
        return self.state == SUPERCRITICAL


def alpha_at(t, params):
    """Piecewise-linear interpolation of the alpha schedule, clamped at both ends."""
    if not t > 0:
        raise DomainError("prediction time must be positive")
    if not params.alpha_schedule:
        raise ConfigError("alpha schedule is empty")
    times, alphas = zip(*params.alpha_schedule)
    return float(np.interp(t, times, alphas))


def _finish(t, stats, p, scale, denom):
    gap = stats.exposure_gap
    if denom <= 0:
        return Prediction(float(t), SUPERCRITICAL, None, p, stats.reshare_count, gap)
    r_inf = stats.reshare_count + scale * p * gap / denom
    return Prediction(float(t), SUBCRITICAL, float(r_inf), p, stats.reshare_count, gap)


def predict_uncorrected(stats, p, n_star):
    """Expected final size given constant infectiousness ``p`` after ``t``."""
    if not p >= 0:
        raise DomainError(f"infectiousness must be nonnegative, got {p}")
    if not n_star > 0:
        raise DomainError(f"n_star must be positive, got {n_star}")
    return _finish(stats.observe_time, stats, float(p), 1.0, 1.0 - p * n_star)


def predict(cascade, t, kernel=TWITTER_KERNEL, params=None, p_hat=None):
    """Corrected final-size prediction at time ``t``.

    Parameters
    ----------
    cascade : Cascade
    t : float
        Observation time in seconds.
    kernel : MemoryKernelParams
    params : PredictionParams, optional
        Defaults to the Twitter schedule with ``gamma_n_star = 20``.
    p_hat : float, optional
        Use this infectiousness instead of the weighted estimate.

    Raises
    ------
    NoPredictionError
        If the weighted exposure is zero, so no infectiousness is defined.
    """
    if not t > 0:
        raise DomainError("prediction time must be positive")
    if params is None:
        params = PredictionParams()
    if p_hat is None:
        try:
            p_hat = infectiousness_weighted(cascade, t, kernel).p_hat
        except UndefinedEstimateError as err:
            raise NoPredictionError(str(err)) from err
    elif not p_hat >= 0:
        raise DomainError(f"infectiousness must be nonnegative, got {p_hat}")
    stats = cascade_stats(cascade, t, kernel)
    alpha = alpha_at(t, params)
    return _finish(t, stats, float(p_hat), alpha, 1.0 - params.gamma_n_star * p_hat)

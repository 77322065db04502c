"""Cascade summaries and infectiousness estimates.

A cascade is the originating post (index 0, time 0) followed by its
reshares, each carrying the follower count of the account that posted it.
All estimates are single vectorized passes over the events observed by
time ``t`` (inclusive).
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UndefinedEstimateError
from .kernel import TWITTER_KERNEL, phi_integral, triangular_weight, weighted_phi_integral


@dataclass(frozen=True, eq=False)
class Cascade:
    """Reshare history of one post.

    Parameters
    ----------
    times : array_like of float
        Seconds since the original post; ``times[0]`` must be 0 and the
        sequence nondecreasing.
    degrees : array_like of int
        Follower count of each posting account, nonnegative.
    id : str, optional
    """

    times: np.ndarray
    degrees: np.ndarray
    id: str = None

    def __post_init__(self):
        times = np.array(self.times, dtype=float).reshape(-1)
        degrees = np.array(self.degrees).reshape(-1)
        if times.size == 0:
            raise DomainError("a cascade needs at least the original post")
        if times.size != degrees.size:
            raise DomainError("times and degrees differ in length")
        if times[0] != 0:
            raise DomainError("the original post must be at time 0")
        if not np.all(np.isfinite(times)):
            raise DomainError("event times must be finite")
        if np.any(np.diff(times) < 0):
            raise DomainError("event times must be nondecreasing")
        if degrees.dtype.kind == "f":
            if not np.all(np.isfinite(degrees)) or np.any(degrees != np.round(degrees)):
                raise DomainError("degrees must be integers")
        elif degrees.dtype.kind not in "iub":
            raise DomainError("degrees must be integers")
        degrees = degrees.astype(np.int64)
        if np.any(degrees < 0):
            raise DomainError("degrees must be nonnegative")
        times.setflags(write=False)
        degrees.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "degrees", degrees)

    @classmethod
    def from_events(cls, events, id=None):
        """Build from an iterable of ``(time, degree)`` pairs."""
        events = list(events)
        if not events:
            raise DomainError("a cascade needs at least the original post")
        times, degrees = zip(*events)
        return cls(times, degrees, id=id)

    def __len__(self):
        return self.times.size

    def __eq__(self, other):
        if not isinstance(other, Cascade):
            return NotImplemented
        return (self.id == other.id
                and np.array_equal(self.times, other.times)
                and np.array_equal(self.degrees, other.degrees))

    __hash__ = None

    @property
    def root_degree(self):
        return int(self.degrees[0])

    @property
    def final_size(self):
        """Number of reshares in the whole record (originator excluded)."""
        return self.times.size - 1

    def n_observed(self, t):
        """Number of events (originator included) with ``t_i <= t``."""
        return int(np.searchsorted(self.times, t, side="right"))

    def reshare_count(self, t):
        return max(self.n_observed(t) - 1, 0)

    def truncate(self, t):
        """The cascade as seen at time ``t``."""
        k = max(self.n_observed(t), 1)
        return Cascade(self.times[:k], self.degrees[:k], id=self.id)


@dataclass(frozen=True)
class CascadeStats:
    observe_time: float
    reshare_count: int
    cum_degree: int
    effective_degree: float

    @property
    def exposure_gap(self):
        """Followers reached but not yet through their reaction time, ``N_t - N_t^e``."""
        return self.cum_degree - self.effective_degree


@dataclass(frozen=True)
class InfectiousnessEstimate:
    p_hat: float
    observe_time: float
    weighted_count: float
    weighted_exposure: float


def _observed(cascade, t):
    if not t >= 0:
        raise DomainError("observation time must be nonnegative")
    k = cascade.n_observed(t)
    return cascade.times[:k], cascade.degrees[:k]


def cascade_stats(cascade, t, params=TWITTER_KERNEL):
    """Reshare count, cumulative degree and effective degree at time ``t``."""
    times, degrees = _observed(cascade, t)
    cum = int(degrees.sum())
    eff = float(np.dot(degrees, phi_integral(t - times, params)))
    return CascadeStats(float(t), times.size - 1, cum, min(eff, float(cum)))


def infectiousness_mle(cascade, t, params=TWITTER_KERNEL):
    """Constant-infectiousness maximum likelihood estimate ``R_t / N_t^e``."""
    if not t > 0:
        raise DomainError("observation time must be positive")
    stats = cascade_stats(cascade, t, params)
    if not stats.effective_degree > 0:
        raise UndefinedEstimateError(
            f"effective degree is zero at t={t}; infectiousness undefined")
    return InfectiousnessEstimate(
        stats.reshare_count / stats.effective_degree, float(t),
        float(stats.reshare_count), stats.effective_degree)


def infectiousness_weighted(cascade, t, params=TWITTER_KERNEL, flat=False):
    """Kernel-weighted infectiousness estimate at time ``t``.

    Reshares are weighted by a triangular kernel over the most recent
    ``t/2`` seconds; exposures are discounted by the same kernel convolved
    with the memory kernel. The originator contributes exposure only.
    ``flat=True`` sets the weight to one, which recovers
    :func:`infectiousness_mle`.
    """
    if not t > 0:
        raise DomainError("observation time must be positive")
    times, degrees = _observed(cascade, t)
    lags = t - times[1:]
    if flat:
        count = float(lags.size)
    else:
        count = float(np.sum(triangular_weight(lags, t)))
    exposure = float(np.dot(degrees, weighted_phi_integral(t, times, params, flat=flat)))
    if not exposure > 0:
        raise UndefinedEstimateError(
            f"weighted exposure is zero at t={t}; infectiousness undefined")
    return InfectiousnessEstimate(count / exposure, float(t), count, exposure)

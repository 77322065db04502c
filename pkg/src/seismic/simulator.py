"""Synthetic cascades and branching-process Monte Carlo.

Cascades follow the self-exciting intensity::

    lambda(t) = p(t) * sum_{t_i <= t} n_i * phi(t - t_i)

Two samplers are provided and agree in distribution:

``"cluster"`` (default)
    Every event spawns its own inhomogeneous Poisson stream of children
    with rate ``p(t) n_i phi(t - t_i)``. Candidates are drawn from the
    dominating rate ``p_max n_i phi`` by inverse-CDF sampling of the memory
    kernel and kept with probability ``p(t) / p_max``. Cost is proportional
    to the number of events, so long horizons are cheap. Parent links are
    exact.

``"thinning"``
    Ogata's global thinning with the piecewise-constant bound
    ``p_max * c * sum(n_i)``, valid because ``phi <= c``. Cost grows with
    the horizon; intended for short horizons and as a cross-check.
"""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .estimator import Cascade
from .kernel import TWITTER_KERNEL, phi, phi_integral, sample_reaction_times

DAY = 86400.0


# -- infectiousness trajectories -------------------------------------------

@dataclass(frozen=True)
class ConstantInfectiousness:
    p: float

    def __call__(self, t):
        return np.full(np.shape(t), self.p, dtype=float)

    def upper_bound(self, horizon):
        return self.p


@dataclass(frozen=True)
class DecayingInfectiousness:
    """``p0 * exp(-t / tau)``."""

    p0: float
    tau: float

    def __call__(self, t):
        return self.p0 * np.exp(-np.asarray(t, dtype=float) / self.tau)

    def upper_bound(self, horizon):
        return self.p0


@dataclass(frozen=True)
class PiecewiseInfectiousness:
    """Value ``values[k]`` on ``[breaks[k-1], breaks[k])``; ``len(values) == len(breaks) + 1``."""

    breaks: tuple
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.breaks) + 1:
            raise ConfigError("piecewise infectiousness needs one more value than breaks")
        if any(b2 <= b1 for b1, b2 in zip(self.breaks, self.breaks[1:])):
            raise ConfigError("breaks must be strictly increasing")

    def __call__(self, t):
        idx = np.searchsorted(np.asarray(self.breaks, dtype=float), t, side="right")
        return np.asarray(self.values, dtype=float)[idx]

    def upper_bound(self, horizon):
        reachable = np.searchsorted(np.asarray(self.breaks, dtype=float), horizon, side="right")
        return float(max(self.values[: reachable + 1]))


def _as_trajectory(p):
    if callable(p):
        return p
    return ConstantInfectiousness(float(p))


# -- degree distributions --------------------------------------------------

@dataclass(frozen=True)
class DegreeDistribution:
    """I.i.d. out-degree law.

    Use the constructors :meth:`constant`, :meth:`poisson` and :meth:`zipf`.
    """

    kind: str
    args: tuple
    _support: np.ndarray = field(default=None, repr=False, compare=False)
    _cdf: np.ndarray = field(default=None, repr=False, compare=False)

    @classmethod
    def constant(cls, n):
        if n < 0 or int(n) != n:
            raise ConfigError("constant degree must be a nonnegative integer")
        return cls("constant", (int(n),))

    @classmethod
    def poisson(cls, mean):
        if not mean > 0:
            raise ConfigError("Poisson degree mean must be positive")
        return cls("poisson", (float(mean),))

    @classmethod
    def zipf(cls, exponent, cap):
        """``P(k) proportional to k**-exponent`` for ``k = 1 .. cap``."""
        if int(cap) != cap or cap < 1:
            raise ConfigError("Zipf cap must be a positive integer")
        support = np.arange(1, int(cap) + 1)
        w = support ** -float(exponent)
        cdf = np.cumsum(w)
        cdf /= cdf[-1]
        return cls("zipf", (float(exponent), int(cap)), support, cdf)

    @property
    def mean(self):
        if self.kind == "constant":
            return float(self.args[0])
        if self.kind == "poisson":
            return self.args[0]
        pmf = np.diff(self._cdf, prepend=0.0)
        return float(np.dot(self._support, pmf))

    def sample(self, rng, size):
        if self.kind == "constant":
            return np.full(size, self.args[0], dtype=np.int64)
        if self.kind == "poisson":
            return rng.poisson(self.args[0], size).astype(np.int64)
        idx = np.searchsorted(self._cdf, rng.random(size), side="right")
        return self._support[np.minimum(idx, self._support.size - 1)].astype(np.int64)

    def sum_of(self, rng, counts):
        """Sum of ``counts[j]`` independent draws, for each ``j``."""
        counts = np.asarray(counts, dtype=np.int64)
        if self.kind == "constant":
            return counts * self.args[0]
        if self.kind == "poisson":
            return rng.poisson(self.args[0] * counts)
        draws = self.sample(rng, int(counts.sum()))
        owner = np.repeat(np.arange(counts.size), counts)
        return np.bincount(owner, weights=draws, minlength=counts.size).astype(np.int64)


# -- cascade simulation ----------------------------------------------------

@dataclass(frozen=True)
class SimConfig:
    """Settings for :func:`simulate_cascade`.

    ``p_trajectory`` is a number (constant infectiousness) or a callable
    ``t -> p`` with an ``upper_bound(horizon)`` method. ``horizon`` may be
    ``inf`` for the cluster sampler when the process is subcritical.
    """

    p_trajectory: object = 0.01
    degree_dist: DegreeDistribution = field(default_factory=lambda: DegreeDistribution.poisson(50))
    root_degree: int = 1000
    horizon: float = 14 * DAY
    seed: int = 0
    max_events: int = 100_000
    kernel: object = TWITTER_KERNEL
    method: str = "cluster"

    def __post_init__(self):
        if not self.horizon > 0:
            raise ConfigError("horizon must be positive")
        if not self.max_events > 0:
            raise ConfigError("max_events must be positive")
        if self.root_degree < 0:
            raise ConfigError("root degree must be nonnegative")
        mean = self.degree_dist.mean
        if not (np.isfinite(mean) and mean > 0):
            raise ConfigError("degree distribution mean must be finite and positive")
        if self.method not in ("cluster", "thinning"):
            raise ConfigError(f"unknown simulation method {self.method!r}")
        if self.method == "thinning" and not np.isfinite(self.horizon):
            raise ConfigError("global thinning needs a finite horizon")


@dataclass(frozen=True, eq=False)
class SimulatedCascade:
    """A simulated cascade plus the genealogy the sampler knows about.

    ``parents[i]`` is the index of the event that triggered event ``i``
    (``-1`` for the originator) and ``generations[i]`` its depth.
    ``truncated`` is set when ``max_events`` stopped the run early.
    """

    cascade: Cascade
    parents: np.ndarray
    generations: np.ndarray
    truncated: bool

    @property
    def final_size(self):
        return self.cascade.final_size


def simulate_cascade(cfg):
    """Draw one cascade; identical ``cfg`` (seed included) gives identical output."""
    rng = np.random.default_rng(cfg.seed)
    p = _as_trajectory(cfg.p_trajectory)
    if cfg.method == "thinning":
        times, degrees, parents, truncated = _simulate_thinning(cfg, p, rng)
    else:
        times, degrees, parents, truncated = _simulate_cluster(cfg, p, rng)

    order = np.argsort(times, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    times = times[order]
    degrees = degrees[order]
    parents = parents[order]
    parents = np.where(parents >= 0, rank[np.maximum(parents, 0)], -1)
    if times.size - 1 > cfg.max_events:
        truncated = True
        keep = cfg.max_events + 1
        times, degrees, parents = times[:keep], degrees[:keep], parents[:keep]
    generations = np.zeros(times.size, dtype=np.int64)
    for i in range(1, times.size):
        generations[i] = generations[parents[i]] + 1
    cascade = Cascade(times, degrees, id=f"sim-{cfg.seed}")
    return SimulatedCascade(cascade, parents, generations, bool(truncated))


def _simulate_cluster(cfg, p, rng):
    kernel = cfg.kernel
    p_max = float(p.upper_bound(cfg.horizon))
    constant = isinstance(p, ConstantInfectiousness)
    times = [np.zeros(1)]
    degrees = [np.array([cfg.root_degree], dtype=np.int64)]
    parents = [np.array([-1], dtype=np.int64)]
    n_total = 1
    frontier_idx = np.zeros(1, dtype=np.int64)
    frontier_t = np.zeros(1)
    frontier_n = degrees[0]
    truncated = False
    while frontier_idx.size and p_max > 0:
        remaining = cfg.horizon - frontier_t
        mass = np.ones_like(remaining) if np.isinf(cfg.horizon) else phi_integral(remaining, kernel)
        counts = rng.poisson(p_max * frontier_n * mass)
        total = int(counts.sum())
        if total == 0:
            break
        owner = np.repeat(np.arange(frontier_idx.size), counts)
        delays = sample_reaction_times(total, kernel, rng, upper=remaining[owner])
        child_t = frontier_t[owner] + delays
        if not constant:
            keep = rng.random(total) * p_max < p(child_t)
            owner, child_t = owner[keep], child_t[keep]
        child_n = cfg.degree_dist.sample(rng, child_t.size)
        times.append(child_t)
        degrees.append(child_n)
        parents.append(frontier_idx[owner])
        frontier_idx = np.arange(n_total, n_total + child_t.size)
        frontier_t, frontier_n = child_t, child_n
        n_total += child_t.size
        if n_total - 1 > cfg.max_events:
            truncated = True
            break
    return (np.concatenate(times), np.concatenate(degrees),
            np.concatenate(parents), truncated)


def _simulate_thinning(cfg, p, rng):
    kernel = cfg.kernel
    p_max = float(p.upper_bound(cfg.horizon))
    times = np.zeros(cfg.max_events + 2)
    degrees = np.zeros(cfg.max_events + 2, dtype=np.int64)
    parents = np.full(cfg.max_events + 2, -1, dtype=np.int64)
    degrees[0] = cfg.root_degree
    k = 1
    exposure = float(cfg.root_degree)
    t = 0.0
    truncated = False
    while True:
        bound = p_max * kernel.c * exposure
        if bound <= 0:
            break
        t += rng.exponential(1.0 / bound)
        if t > cfg.horizon:
            break
        contrib = degrees[:k] * phi(np.maximum(t - times[:k], 1e-300), kernel)
        total = contrib.sum()
        lam = float(p(t)) * total
        if rng.random() * bound <= lam:
            times[k] = t
            parents[k] = np.searchsorted(np.cumsum(contrib), rng.random() * total, side="right")
            degrees[k] = cfg.degree_dist.sample(rng, 1)[0]
            exposure += degrees[k]
            k += 1
            if k - 1 > cfg.max_events:
                truncated = True
                break
    return times[:k], degrees[:k], parents[:k], truncated


def first_generation_delays(sim):
    """Reaction times of the originator's direct reshares."""
    mask = sim.parents == 0
    return sim.cascade.times[mask]


# -- Galton-Watson Monte Carlo ---------------------------------------------

@dataclass(frozen=True)
class GwConfig:
    """Settings for :func:`simulate_galton_watson`.

    The first generation has ``Poisson(z1_mean)`` members. Each member then
    has ``Poisson(offspring_mean)`` children, or, when ``degree_dist`` is
    given, draws a degree ``n`` and has ``Poisson(p n)`` children with
    ``p = offspring_mean / degree_dist.mean``.
    """

    z1_mean: float
    offspring_mean: float
    degree_dist: DegreeDistribution = None
    trials: int = 100_000
    seed: int = 0
    cap: int = 10**7

    def __post_init__(self):
        if not self.trials > 0:
            raise ConfigError("trials must be positive")
        if not self.z1_mean >= 0 or not self.offspring_mean >= 0:
            raise ConfigError("means must be nonnegative")


@dataclass(frozen=True)
class GwResult:
    mean_total: float
    se: float
    extinction_rate: float
    capped_fraction: float
    supercritical: bool


def simulate_galton_watson(cfg):
    """Monte Carlo of the total progeny ``Z_1 + Z_2 + ...``.

    Returns the sample mean and its standard error, the fraction of trials
    that died out, and the fraction stopped at ``cfg.cap`` nodes. A
    supercritical offspring mean triggers a :class:`RuntimeWarning`; the
    mean of such runs is dominated by the cap.
    """
    mu = cfg.offspring_mean
    supercritical = mu >= 1
    if supercritical:
        warnings.warn(f"offspring mean {mu} >= 1: totals are truncated at {cfg.cap}",
                      RuntimeWarning, stacklevel=2)
    rng = np.random.default_rng(cfg.seed)
    z = rng.poisson(cfg.z1_mean, cfg.trials).astype(np.int64)
    total = z.copy()
    capped = total >= cfg.cap
    active = (z > 0) & ~capped
    p = mu / cfg.degree_dist.mean if cfg.degree_dist is not None else None
    while active.any():
        za = z[active]
        if p is None:
            za = rng.poisson(mu * za)
        else:
            za = rng.poisson(p * cfg.degree_dist.sum_of(rng, za))
        z[:] = 0
        z[active] = za
        total += z
        capped |= total >= cfg.cap
        active = (z > 0) & ~capped
    mean = float(total.mean())
    se = float(total.std(ddof=1) / math.sqrt(cfg.trials)) if cfg.trials > 1 else float("nan")
    return GwResult(mean, se, float(np.mean(~capped)), float(np.mean(capped)), supercritical)

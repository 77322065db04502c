"""Human reaction-time memory kernel and the triangular weighting kernel.

The memory kernel is flat on ``(0, s0]`` and decays as a power law after::

    phi(s) = c                          0 < s <= s0
    phi(s) = c * (s / s0) ** -(1 + theta)    s > s0

with ``c = theta / (s0 * (1 + theta))`` so that it integrates to one.  All
integrals used by the estimator are assembled from two closed-form
segment primitives (mass and first moment), so nothing here calls a
numerical integrator.

Every function accepts scalars or numpy arrays and broadcasts.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

NORMALIZATION_RTOL = 1e-6


def normalizing_constant(s0, theta):
    """Plateau height that makes the kernel a probability density."""
    return theta / (s0 * (1.0 + theta))


@dataclass(frozen=True)
class MemoryKernelParams:
    """Parameters of the memory kernel.

    Parameters
    ----------
    s0 : float
        Length of the constant plateau, seconds.
    theta : float
        Power-law tail exponent.
    c : float, optional
        Plateau height. Derived from ``(s0, theta)`` when omitted; a value
        that breaks normalization by more than 1e-6 relative is rejected.
    """

    s0: float = 300.0
    theta: float = 0.242
    c: float = field(default=None)

    def __post_init__(self):
        s0 = float(self.s0)
        theta = float(self.theta)
        if not (np.isfinite(s0) and s0 > 0):
            raise DomainError(f"s0 must be positive and finite, got {self.s0}")
        if not (np.isfinite(theta) and theta > 0):
            raise DomainError(f"theta must be positive and finite, got {self.theta}")
        c = normalizing_constant(s0, theta)
        if self.c is not None:
            given = float(self.c)
            if not abs(given - c) <= NORMALIZATION_RTOL * c:
                raise DomainError(
                    f"c={given!r} violates normalization; expected {c!r} for "
                    f"s0={s0!r}, theta={theta!r}")
        object.__setattr__(self, "s0", s0)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "c", c)

    @property
    def plateau_mass(self):
        """Probability mass of the plateau, ``c * s0 = theta / (1 + theta)``."""
        return self.c * self.s0


TWITTER_KERNEL = MemoryKernelParams(s0=300.0, theta=0.242)


def _asarray(x):
    return np.asarray(x, dtype=float)


def _ret(x):
    return x.item() if np.ndim(x) == 0 else x


def phi(s, params=TWITTER_KERNEL):
    """Memory kernel density at reaction time ``s`` (seconds, strictly positive)."""
    s = _asarray(s)
    if np.any(~(s > 0)):
        raise DomainError("reaction times must be strictly positive")
    with np.errstate(over="ignore"):
        tail = params.c * (s / params.s0) ** -(1.0 + params.theta)
    return _ret(np.where(s <= params.s0, params.c, tail))


def _mass(a, b, params):
    """Kernel mass on ``[a, b]`` for ``0 <= a <= b`` (``b`` may be inf)."""
    s0, theta, c = params.s0, params.theta, params.c
    top = np.minimum(b, s0)
    plateau = c * np.maximum(top - a, 0.0)
    lo = np.maximum(a, s0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        # (c s0 / theta) * (lo/s0)^-theta * (1 - (lo/b)^theta)
        head = (c * s0 / theta) * (lo / s0) ** -theta
        frac = -np.expm1(theta * np.log(lo / b))
        power = np.where(b > lo, head * frac, 0.0)
    return plateau + power


def _moment(a, b, params):
    """First moment ``int_a^b u phi(u) du`` for finite ``0 <= a <= b``."""
    s0, theta, c = params.s0, params.theta, params.c
    top = np.minimum(b, s0)
    plateau = np.where(top > a, 0.5 * c * (top - a) * (top + a), 0.0)
    lo = np.maximum(a, s0)
    k = 1.0 - theta
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x = np.log(lo / b)
        if abs(k) < 1e-12:
            seg = -x
        else:
            seg = -np.expm1(k * x) / k
        power = np.where(b > lo, c * s0 * s0 * (b / s0) ** k * seg, 0.0)
    return plateau + power


def phi_integral(t, params=TWITTER_KERNEL):
    """Kernel mass on ``(0, t]``, i.e. the reaction-time CDF."""
    t = _asarray(t)
    if np.any(~(t >= 0)):
        raise DomainError("integration limit must be nonnegative")
    return _ret(_mass(np.zeros_like(t), t, params))


def phi_survival(t, params=TWITTER_KERNEL):
    """``1 - phi_integral(t)``, computed without cancellation in the tail."""
    t = _asarray(t)
    if np.any(~(t >= 0)):
        raise DomainError("integration limit must be nonnegative")
    return _ret(_mass(t, np.full_like(t, np.inf), params))


def triangular_weight(s, t):
    """One-sided triangular weight ``max(1 - 2 s / t, 0)``."""
    s = _asarray(s)
    t = _asarray(t)
    if np.any(~(t > 0)):
        raise DomainError("window time t must be positive")
    if np.any(~(s >= 0)):
        raise DomainError("lag s must be nonnegative")
    return _ret(np.maximum(1.0 - 2.0 * s / t, 0.0))


def weighted_phi_integral(t, t_i, params=TWITTER_KERNEL, flat=False):
    """Closed form of ``int_{t_i}^t K_t(t - s) phi(s - t_i) ds``.

    ``K_t`` is the triangular weight of :func:`triangular_weight`; it is
    nonzero only for ``s > t/2``. With ``flat=True`` the weight is taken as
    identically one and the result is ``phi_integral(t - t_i)``.
    """
    t = _asarray(t)
    t_i = _asarray(t_i)
    if np.any(~(t > 0)):
        raise DomainError("observation time t must be positive")
    if np.any(~(t_i >= 0)) or np.any(t_i > t):
        raise DomainError("event times must satisfy 0 <= t_i <= t")
    if flat:
        return _ret(_mass(np.zeros(np.broadcast(t, t_i).shape), t - t_i, params))
    # substitute u = s - t_i; the weight becomes (2 (u + t_i) - t) / t on [a, b]
    b = t - t_i
    a = np.maximum(0.5 * t - t_i, 0.0)
    mass = _mass(a, b, params)
    moment = _moment(a, b, params)
    # a > 0: weight = 2 (u - a) / t;  a == 0: weight = (2 u + (2 t_i - t)) / t
    shifted = np.where(a > 0, moment - a * mass, moment)
    offset = np.where(a > 0, 0.0, 2.0 * t_i - t)
    value = (2.0 * shifted + offset * mass) / t
    return _ret(np.maximum(value, 0.0))


def reaction_time_quantile(q, params=TWITTER_KERNEL):
    """Inverse of :func:`phi_integral` for ``q`` in ``[0, 1)``."""
    q = _asarray(q)
    if np.any((q < 0) | (q >= 1)):
        raise DomainError("quantile level must lie in [0, 1)")
    return _ret(_quantile_from_survival(1.0 - q, params))


def _quantile_from_survival(surv, params):
    s0, theta = params.s0, params.theta
    plateau = (1.0 - surv) / params.c
    with np.errstate(divide="ignore"):
        tail = s0 * (surv * (1.0 + theta)) ** (-1.0 / theta)
    return np.where(surv >= 1.0 - params.plateau_mass, plateau, tail)


def sample_reaction_times(size, params=TWITTER_KERNEL, rng=None, upper=np.inf):
    """Draw reaction times from the kernel, optionally truncated to ``(0, upper]``.

    ``upper`` may be an array broadcastable to ``size``.
    """
    rng = np.random.default_rng(rng)
    upper = _asarray(upper)
    s_upper = _mass(upper, np.full_like(upper, np.inf), params)
    # survival uniform on [S(upper), 1)
    u = rng.random(size)
    surv = 1.0 - u * (1.0 - s_upper)
    return _quantile_from_survival(surv, params)

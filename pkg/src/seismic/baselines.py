"""Comparison predictors.

* ``LR``: ``log R_inf = alpha_t + log R_t``, one growth factor per time.
* ``LR-D``: ordinary least squares of ``log R_inf`` on
  ``(1, log R_t, log N_t, log n_0)`` per time.
* ``DPM``: per-cascade power-law decay of the binned reshare rate after
  its peak, extrapolated to infinity.
* ``observed``: the count seen so far.

Fitted regression models round-trip through a small versioned text table
(:func:`dump_lr_models` / :func:`load_lr_models`).
"""
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import FitError, NoPredictionError, ParseError
from .predictor import SUBCRITICAL, Prediction

LR_TABLE_VERSION = 1
LR_FEATURES = ("log_R_t", "log_N_t", "log_n0")


@dataclass(frozen=True)
class LrModel:
    """Regression model at one prediction time.

    ``kind`` is ``"lr"`` (only ``alpha`` is used, slope fixed at one) or
    ``"lr_d"``.
    """

    kind: str
    time: float
    alpha: float
    beta: tuple = (1.0, 0.0, 0.0)
    n_train: int = 0

    def predict(self, cascade, t=None):
        t = self.time if t is None else t
        r_t = cascade.reshare_count(t)
        if self.kind == "lr":
            return math.exp(self.alpha) * r_t
        x = _features(cascade, t)
        if x is None:
            raise NoPredictionError("LR-D needs positive R_t, N_t and n_0")
        return math.exp(self.alpha + float(np.dot(self.beta, x)))


def _features(cascade, t):
    k = cascade.n_observed(t)
    r_t = k - 1
    n_t = int(cascade.degrees[:k].sum())
    n0 = cascade.root_degree
    if r_t < 1 or n_t < 1 or n0 < 1:
        return None
    return np.log([r_t, n_t, n0])


def fit_lr(training, t):
    """Mean log growth ratio over cascades with at least one reshare by ``t``.

    Parameters
    ----------
    training : iterable of (Cascade, float)
        Cascades paired with their final reshare count.
    """
    logs = []
    for cascade, r_inf in training:
        r_t = cascade.reshare_count(t)
        if r_t >= 1 and r_inf > 0:
            logs.append(math.log(r_inf) - math.log(r_t))
    if not logs:
        raise FitError(f"no training cascade has a reshare by t={t}")
    return LrModel("lr", float(t), float(np.mean(logs)), n_train=len(logs))


def fit_lr_d(training, t):
    """Least-squares fit of the degree-augmented log regression at time ``t``."""
    rows, target = [], []
    for cascade, r_inf in training:
        x = _features(cascade, t)
        if x is not None and r_inf > 0:
            rows.append(x)
            target.append(math.log(r_inf))
    if not rows:
        raise FitError(f"no usable training cascades at t={t}")
    design = np.column_stack([np.ones(len(rows)), np.array(rows)])
    names = ("intercept",) + LR_FEATURES
    for j in range(1, design.shape[1] + 1):
        if np.linalg.matrix_rank(design[:, :j]) < j:
            raise FitError(f"rank-deficient LR-D design at t={t}: column {names[j - 1]!r} "
                           "is collinear with earlier columns")
    coef, *_ = np.linalg.lstsq(design, np.array(target), rcond=None)
    if not np.all(np.isfinite(coef)):
        raise FitError(f"non-finite LR-D coefficients at t={t}")
    return LrModel("lr_d", float(t), float(coef[0]), tuple(float(b) for b in coef[1:]),
                   n_train=len(rows))


def predict_lr_d(model, cascade, t=None):
    return model.predict(cascade, t)


def dump_lr_models(models, stream=None):
    """Write models as ``kind,time_seconds,alpha,beta1,beta2,beta3,n_train`` rows."""
    out = stream if stream is not None else io.StringIO()
    out.write(f"# seismic-lr-table v{LR_TABLE_VERSION}\n")
    out.write("kind,time_seconds,alpha,beta1,beta2,beta3,n_train\n")
    for m in sorted(models, key=lambda m: (m.kind, m.time)):
        out.write(",".join([m.kind, repr(m.time), repr(m.alpha)]
                           + [repr(b) for b in m.beta] + [str(m.n_train)]) + "\n")
    if stream is None:
        return out.getvalue()


def load_lr_models(stream):
    lines = stream.read().splitlines() if hasattr(stream, "read") else str(stream).splitlines()
    if not lines or lines[0].strip() != f"# seismic-lr-table v{LR_TABLE_VERSION}":
        raise ParseError("missing or unsupported LR table version header", line=1)
    models = []
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 7 or parts[0] not in ("lr", "lr_d"):
            raise ParseError(f"malformed LR table row {line!r}", line=lineno)
        try:
            vals = [float(v) for v in parts[1:6]]
            n_train = int(parts[6])
        except ValueError as err:
            raise ParseError(str(err), line=lineno) from None
        models.append(LrModel(parts[0], vals[0], vals[1], tuple(vals[2:5]), n_train))
    return models


# -- dynamic Poisson model -------------------------------------------------

@dataclass(frozen=True)
class DpmFit:
    bin_width: float
    t_peak: float
    lambda_peak: float
    gamma: float
    tail: float


def _fit_dpm_from(counts, peak, bin_width):
    j = np.arange(peak + 1, counts.size)
    y = counts[peak + 1:]
    nonzero = y > 0
    if np.count_nonzero(nonzero) < 2:
        return None
    x = np.log(j[nonzero] - peak)
    slope, intercept = np.polyfit(x, np.log(y[nonzero]), 1)
    return float(slope), float(intercept)


def fit_dpm(cascade, t, bin_width=300.0):
    """Fit the binned power-law decay; raise :class:`NoPredictionError` if infeasible.

    Bin ``k`` covers ``[k b, (k+1) b)``; its count is modelled as
    ``A * (k - k_peak) ** gamma``, the rate at the bin centre. The expected
    number of future reshares is then ``A * x**(gamma+1) / -(gamma+1)``
    where ``x = (t - centre of peak bin) / b``.
    """
    if not t > 0:
        raise NoPredictionError("DPM needs a positive observation time")
    k = cascade.n_observed(t)
    reshare_t = cascade.times[1:k]
    n_bins = max(int(math.ceil(t / bin_width)), 1)
    counts = np.bincount(np.minimum((reshare_t // bin_width).astype(np.int64), n_bins - 1),
                         minlength=n_bins).astype(float)
    # ties go to the earlier bin
    order = np.argsort(-counts, kind="stable")
    for peak in order[:2]:
        res = _fit_dpm_from(counts, int(peak), bin_width)
        if res is None:
            raise NoPredictionError("DPM needs at least 2 nonempty bins after the peak")
        gamma, log_a = res
        if gamma < -1:
            x = (t - (peak + 0.5) * bin_width) / bin_width
            a = math.exp(log_a)
            tail = a * x ** (gamma + 1) / -(gamma + 1)
            return DpmFit(bin_width, float(peak * bin_width), a / bin_width, gamma, tail)
    raise NoPredictionError(f"DPM fit infeasible: gamma={gamma:.3g} >= -1 at both peaks")


def predict_dpm(cascade, t, bin_width=300.0):
    fit = fit_dpm(cascade, t, bin_width)
    r_t = cascade.reshare_count(t)
    return Prediction(float(t), SUBCRITICAL, r_t + fit.tail, float("nan"), r_t, float("nan"))


def predict_observed(cascade, t):
    return cascade.reshare_count(t)


def predict_rpm(*args, **kwargs):
    """Reinforced Poisson model; not provided.

    Its reinforcement function comes from the reinforced Poisson process
    model of Gao et al. (2015) and is not implemented here.
    """
    raise NotImplementedError(
        "RPM is not implemented; see the reinforced Poisson process model of "
        "Gao et al. (2015)")

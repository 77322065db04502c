"""Accuracy metrics and the benchmark harness.

Quantiles use linear interpolation between order statistics (numpy's
default). Kendall's tau is the tie-adjusted tau-b. Top lists break ties by
score descending, then id ascending.
"""
import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .baselines import fit_dpm, fit_lr, fit_lr_d
from .config import RunConfig
from .errors import (ConfigError, DomainError, FitError, NoPredictionError,
                     UndefinedCorrelationError)
from .predictor import predict

REPORT_VERSION = 1
METHODS = ("seismic", "lr", "lr_d", "dpm", "observed")


def ape(prediction, truth):
    """Absolute percentage error ``|prediction - truth| / truth``."""
    if not truth > 0:
        raise DomainError(f"true final size must be positive, got {truth}")
    return abs(prediction - truth) / truth


def ape_array(predictions, truths):
    predictions = np.asarray(predictions, dtype=float)
    truths = np.asarray(truths, dtype=float)
    if np.any(~(truths > 0)):
        raise DomainError("true final sizes must be positive")
    return np.abs(predictions - truths) / truths


def quantiles(values, qs=(50, 75, 90, 95)):
    """Percentiles with linear interpolation; ``None`` for an empty input."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return None
    return [float(v) for v in np.percentile(values, qs)]


def median_ape(predictions, truths):
    """Median APE; the objective shared by calibration and the harness."""
    errors = ape_array(predictions, truths)
    if errors.size == 0:
        return float("nan")
    return float(np.median(errors))


def kendall_tau(xs, ys):
    """Kendall's tau-b between two equally long sequences."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise DomainError("kendall_tau needs two 1-d sequences of equal length")
    if xs.size < 2:
        raise DomainError("kendall_tau needs at least two observations")
    if np.all(xs == xs[0]) or np.all(ys == ys[0]):
        raise UndefinedCorrelationError("kendall_tau is undefined for a constant input")
    return float(stats.kendalltau(xs, ys, variant="b").statistic)


def _top(pairs, k):
    ranked = sorted(pairs, key=lambda p: (-p[1], p[0]))
    return {p[0] for p in ranked[:k]}


def breakout_coverage(predicted, truth, m, M):
    """Fraction of the true top-``M`` found in the predicted top-``m``.

    Parameters
    ----------
    predicted : iterable of (id, score)
    truth : iterable of (id, final_count)
    m, M : int
        Sizes of the predicted and true lists.
    """
    predicted = list(predicted)
    truth = list(truth)
    for name, pairs in (("predicted", predicted), ("truth", truth)):
        ids = [p[0] for p in pairs]
        if len(set(ids)) != len(ids):
            raise DomainError(f"{name} ids must be unique")
    if M < 1 or m < 1:
        raise DomainError("list sizes must be positive")
    if len(truth) < M:
        raise DomainError(f"need at least M={M} truth entries, got {len(truth)}")
    return len(_top(predicted, m) & _top(truth, M)) / M


# -- harness ---------------------------------------------------------------

@dataclass
class MethodTimeResult:
    method: str
    time: float
    n_total: int
    n_eligible: int
    n_predicted: int
    n_no_prediction: int
    ape_quantiles: list = None
    median_ape: float = None
    kendall: float = None
    coverage: float = None
    predictions: dict = field(default_factory=dict, repr=False)

    @property
    def no_prediction_rate(self):
        if self.n_eligible == 0:
            return None
        return self.n_no_prediction / self.n_eligible


@dataclass
class EvaluationReport:
    times: list
    methods: list
    quantile_levels: list
    results: dict

    def get(self, method, t):
        return self.results[(method, float(t))]

    def rows(self):
        """``(method, time_seconds, metric, value)`` tuples; absent metrics are ``None``."""
        for t in self.times:
            for method in self.methods:
                r = self.results[(method, t)]
                yield method, t, "n_eligible", r.n_eligible
                yield method, t, "n_predicted", r.n_predicted
                yield method, t, "no_prediction_rate", r.no_prediction_rate
                for q, v in zip(self.quantile_levels, r.ape_quantiles or [None] * len(self.quantile_levels)):
                    yield method, t, f"ape_p{q:g}", v
                yield method, t, "median_ape", r.median_ape
                yield method, t, "kendall_tau", r.kendall
                yield method, t, "coverage", r.coverage

    def to_csv(self, stream=None):
        out = stream if stream is not None else io.StringIO()
        out.write(f"# seismic-evaluation v{REPORT_VERSION}\n")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["method", "time_seconds", "metric", "value"])
        for method, t, metric, value in self.rows():
            w.writerow([method, _g(t), metric, "" if value is None else _g(value)])
        if stream is None:
            return out.getvalue()

    def to_json(self):
        summary = {"version": REPORT_VERSION, "times_seconds": self.times,
                   "methods": self.methods, "quantile_levels": self.quantile_levels,
                   "results": []}
        for t in self.times:
            for method in self.methods:
                r = self.results[(method, t)]
                summary["results"].append({
                    "method": method, "time_seconds": t, "n_total": r.n_total,
                    "n_eligible": r.n_eligible, "n_predicted": r.n_predicted,
                    "n_no_prediction": r.n_no_prediction,
                    "no_prediction_rate": r.no_prediction_rate,
                    "ape_quantiles": r.ape_quantiles, "median_ape": r.median_ape,
                    "kendall_tau": r.kendall, "coverage": r.coverage})
        return json.dumps(summary, indent=2, sort_keys=True) + "\n"


def _g(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.6g}"


def _cascade_id(cascade, k):
    return cascade.id if cascade.id is not None else f"#{k}"


def _fitted_models(method, training, t, min_reshares):
    if training is None:
        raise ConfigError(f"method {method!r} needs a training corpus")
    eligible = [(c, r) for c, r in training if c.reshare_count(t) >= max(min_reshares, 1)]
    fit = fit_lr if method == "lr" else fit_lr_d
    try:
        return fit(eligible, t)
    except FitError:
        return None


def run_benchmark(corpus, methods=("seismic", "lr", "observed"), times=None,
                  config=None, training=None, models=None):
    """Evaluate predictors over a labelled corpus.

    Parameters
    ----------
    corpus : sequence of (Cascade, float)
        Test cascades with their true final size.
    methods : sequence of str
        Any of ``seismic``, ``lr``, ``lr_d``, ``dpm``, ``observed``.
    times : sequence of float, optional
        Prediction times in seconds; defaults to ``config.eval_times``.
    config : RunConfig, optional
    training : sequence of (Cascade, float), optional
        Needed by ``lr`` and ``lr_d`` unless ``models`` supplies them.
    models : dict, optional
        Prefitted ``{(kind, time): LrModel}``.

    A cascade is eligible at ``t`` once it has ``config.min_reshares``
    reshares. Supercritical states and failed fits count as no-prediction
    and are left out of the APE quantiles and rank metrics.
    """
    config = config or RunConfig()
    methods = list(methods)
    for m in methods:
        if m == "rpm":
            raise ConfigError("method 'rpm' is not implemented")
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
    times = [float(t) for t in (config.eval_times if times is None else times)]
    corpus = list(corpus)
    models = dict(models or {})
    ids = [_cascade_id(c, k) for k, (c, _) in enumerate(corpus)]
    truth_pairs = [(i, float(r)) for i, (_, r) in zip(ids, corpus)]
    results = {}
    for t in times:
        eligible = [k for k, (c, _) in enumerate(corpus) if c.reshare_count(t) >= config.min_reshares]
        for method in methods:
            preds = {}
            model = None
            if method in ("lr", "lr_d"):
                model = models.get((method, t))
                if model is None:
                    model = _fitted_models(method, training, t, config.min_reshares)
            for k in eligible:
                cascade = corpus[k][0]
                value = _predict_one(method, cascade, t, config, model)
                if value is not None:
                    preds[k] = value
            res = MethodTimeResult(method, t, len(corpus), len(eligible), len(preds),
                                   len(eligible) - len(preds), predictions=preds)
            if preds:
                keys = sorted(preds)
                p = np.array([preds[k] for k in keys])
                y = np.array([corpus[k][1] for k in keys], dtype=float)
                errs = ape_array(p, y)
                res.ape_quantiles = quantiles(errs, config.quantiles)
                res.median_ape = float(np.median(errs))
                try:
                    res.kendall = kendall_tau(p, y)
                except DomainError:
                    res.kendall = None
                if len(truth_pairs) >= config.coverage_top:
                    res.coverage = breakout_coverage(
                        [(ids[k], preds[k]) for k in keys], truth_pairs,
                        config.coverage_m, config.coverage_top)
            results[(method, t)] = res
    return EvaluationReport(times, methods, list(config.quantiles), results)


def _predict_one(method, cascade, t, config, model):
    try:
        if method == "observed":
            return float(cascade.reshare_count(t))
        if method == "seismic":
            pred = predict(cascade, t, config.kernel, config.prediction)
            return None if pred.is_supercritical else pred.r_inf_hat
        if method == "dpm":
            fit = fit_dpm(cascade, t, config.dpm_bin_seconds)
            return cascade.reshare_count(t) + fit.tail
        if model is None:
            return None
        value = model.predict(cascade, t)
        return value if math.isfinite(value) else None
    except NoPredictionError:
        return None

"""Run configuration shared by every command.

The file is TOML with four tables; every key is optional and unknown
tables or keys are rejected::

    [kernel]
    s0_seconds = 300.0
    theta = 0.242

    [prediction]
    n_star = 100.0
    gamma_n_star = 20.0
    min_reshares = 50
    alpha_schedule = [[5, 0.389], [10, 0.803]]   # (minutes, alpha)

    [evaluation]
    times_minutes = [10, 30, 60]
    quantiles = [50, 75, 90, 95]
    coverage_m = 500
    coverage_top = 100
    dpm_bin_seconds = 300.0

    [data]
    horizon_days = 14.0

The whole file is validated before anything is returned, so a bad value
anywhere fails the load.
"""
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, SeismicError
from .kernel import MemoryKernelParams
from .predictor import MINUTE, PredictionParams

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULT_EVAL_TIMES = tuple(float(m * MINUTE) for m in range(5, 361, 5))
DEFAULT_QUANTILES = (50.0, 75.0, 90.0, 95.0)

_SCHEMA = {
    "kernel": {"s0_seconds", "theta"},
    "prediction": {"n_star", "gamma_n_star", "min_reshares", "alpha_schedule"},
    "evaluation": {"times_minutes", "quantiles", "coverage_m", "coverage_top",
                   "dpm_bin_seconds"},
    "data": {"horizon_days"},
}


@dataclass(frozen=True)
class RunConfig:
    kernel: MemoryKernelParams = field(default_factory=MemoryKernelParams)
    prediction: PredictionParams = field(default_factory=PredictionParams)
    min_reshares: int = 50
    eval_times: tuple = DEFAULT_EVAL_TIMES
    quantiles: tuple = DEFAULT_QUANTILES
    coverage_m: int = 500
    coverage_top: int = 100
    dpm_bin_seconds: float = 300.0
    horizon_days: float = 14.0

    def __post_init__(self):
        if int(self.min_reshares) != self.min_reshares or self.min_reshares < 0:
            raise ConfigError("min_reshares must be a nonnegative integer")
        times = tuple(float(t) for t in self.eval_times)
        if not times or any(not (np.isfinite(t) and t > 0) for t in times):
            raise ConfigError("evaluation times must be positive and finite")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigError("evaluation times must be strictly increasing")
        qs = tuple(float(q) for q in self.quantiles)
        if not qs or any(not 0 <= q <= 100 for q in qs) or any(b <= a for a, b in zip(qs, qs[1:])):
            raise ConfigError("quantiles must be strictly increasing percentages in [0, 100]")
        for name in ("coverage_m", "coverage_top"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if not self.dpm_bin_seconds > 0:
            raise ConfigError("dpm_bin_seconds must be positive")
        if not self.horizon_days > 0:
            raise ConfigError("horizon_days must be positive")
        object.__setattr__(self, "eval_times", times)
        object.__setattr__(self, "quantiles", qs)
        object.__setattr__(self, "min_reshares", int(self.min_reshares))

    @property
    def horizon_seconds(self):
        return self.horizon_days * 86400.0

    def with_(self, **changes):
        return replace(self, **changes)


def _number(section, key, value, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{section}] {key} must be a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(f"[{section}] {key} must be an integer, got {value!r}")
    return int(value) if integer else float(value)


def _number_list(section, key, value):
    if not isinstance(value, list):
        raise ConfigError(f"[{section}] {key} must be an array")
    return [_number(section, key, v) for v in value]


def config_from_dict(doc):
    """Validate a parsed TOML document and build a :class:`RunConfig`."""
    for section, body in doc.items():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config table [{section}]")
        if not isinstance(body, dict):
            raise ConfigError(f"[{section}] must be a table")
        unknown = set(body) - _SCHEMA[section]
        if unknown:
            raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")

    kern = doc.get("kernel", {})
    pred = doc.get("prediction", {})
    ev = doc.get("evaluation", {})
    data = doc.get("data", {})
    try:
        kernel = MemoryKernelParams(
            s0=_number("kernel", "s0_seconds", kern.get("s0_seconds", 300.0)),
            theta=_number("kernel", "theta", kern.get("theta", 0.242)))
        kw = {}
        if "alpha_schedule" in pred:
            sched = pred["alpha_schedule"]
            if not isinstance(sched, list) or not sched:
                raise ConfigError("[prediction] alpha_schedule must be a nonempty array of pairs")
            pairs = []
            for item in sched:
                if not isinstance(item, list) or len(item) != 2:
                    raise ConfigError("[prediction] alpha_schedule entries must be [minutes, alpha]")
                m, a = (_number("prediction", "alpha_schedule", v) for v in item)
                pairs.append((m * MINUTE, a))
            kw["alpha_schedule"] = tuple(pairs)
        for key in ("n_star", "gamma_n_star"):
            if key in pred:
                kw[key] = _number("prediction", key, pred[key])
        prediction = PredictionParams(**kw)

        kw = {}
        if "min_reshares" in pred:
            kw["min_reshares"] = _number("prediction", "min_reshares", pred["min_reshares"], True)
        if "times_minutes" in ev:
            kw["eval_times"] = tuple(m * MINUTE for m in
                                     _number_list("evaluation", "times_minutes", ev["times_minutes"]))
        if "quantiles" in ev:
            kw["quantiles"] = tuple(_number_list("evaluation", "quantiles", ev["quantiles"]))
        for key in ("coverage_m", "coverage_top"):
            if key in ev:
                kw[key] = _number("evaluation", key, ev[key], True)
        if "dpm_bin_seconds" in ev:
            kw["dpm_bin_seconds"] = _number("evaluation", "dpm_bin_seconds", ev["dpm_bin_seconds"])
        if "horizon_days" in data:
            kw["horizon_days"] = _number("data", "horizon_days", data["horizon_days"])
        return RunConfig(kernel=kernel, prediction=prediction, **kw)
    except ConfigError:
        raise
    except SeismicError as err:
        raise ConfigError(str(err)) from err


def loads_config(text):
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise ConfigError(f"invalid TOML: {err}") from None
    return config_from_dict(doc)


def load_config(path):
    with open(path, "rb") as fh:
        try:
            doc = tomllib.load(fh)
        except tomllib.TOMLDecodeError as err:
            raise ConfigError(f"{path}: invalid TOML: {err}") from None
    return config_from_dict(doc)


def _fmt(x):
    x = float(x)
    return repr(int(x)) + ".0" if x.is_integer() and abs(x) < 1e15 else repr(x)


def dumps_config(cfg):
    """Serialize to the TOML layout read by :func:`load_config`."""
    sched = ", ".join(f"[{_fmt(t / MINUTE)}, {_fmt(a)}]"
                      for t, a in cfg.prediction.alpha_schedule)
    times = ", ".join(_fmt(t / MINUTE) for t in cfg.eval_times)
    qs = ", ".join(_fmt(q) for q in cfg.quantiles)
    return (
        "[kernel]\n"
        f"s0_seconds = {_fmt(cfg.kernel.s0)}\n"
        f"theta = {_fmt(cfg.kernel.theta)}\n"
        "\n[prediction]\n"
        f"n_star = {_fmt(cfg.prediction.n_star)}\n"
        f"gamma_n_star = {_fmt(cfg.prediction.gamma_n_star)}\n"
        f"min_reshares = {cfg.min_reshares}\n"
        f"alpha_schedule = [{sched}]\n"
        "\n[evaluation]\n"
        f"times_minutes = [{times}]\n"
        f"quantiles = [{qs}]\n"
        f"coverage_m = {cfg.coverage_m}\n"
        f"coverage_top = {cfg.coverage_top}\n"
        f"dpm_bin_seconds = {_fmt(cfg.dpm_bin_seconds)}\n"
        "\n[data]\n"
        f"horizon_days = {_fmt(cfg.horizon_days)}\n"
    )

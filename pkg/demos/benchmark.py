"""
SEISMIC against the baselines on a synthetic corpus
===================================================

Half of 600 simulated cascades calibrate the alpha schedule and the
log-linear baselines; the other half is scored.
"""
import warnings

import numpy as np

from seismic.calibration import calibrate
from seismic.config import RunConfig
from seismic.evaluation import run_benchmark
from seismic.predictor import PredictionParams
from seismic.simulator import DAY, DecayingInfectiousness, DegreeDistribution, SimConfig, simulate_cascade

rng = np.random.default_rng(3)
corpus = []
for i in range(600):
    p = DecayingInfectiousness(rng.uniform(0.5, 0.95) / 50, np.exp(rng.uniform(np.log(1800), np.log(21600))))
    root = int(np.exp(rng.uniform(np.log(2e4), np.log(5e5))))
    c = simulate_cascade(SimConfig(p, DegreeDistribution.poisson(50), root, 14 * DAY, seed=i)).cascade
    corpus.append((c, float(c.final_size)))
train, test = corpus[:300], corpus[300:]

times = [600.0, 1800.0, 3600.0]
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    cal = calibrate(train, times)
print("alpha schedule:", [(t / 60, a) for t, a in cal.alpha_schedule])

cfg = RunConfig(prediction=PredictionParams(n_star=cal.n_star, alpha_schedule=tuple(cal.alpha_schedule)),
                coverage_top=20, coverage_m=40)
report = run_benchmark(test, ["seismic", "lr", "lr_d", "dpm", "observed"], times, cfg, training=train)
print(f"{'method':>9} {'min':>4} {'median APE':>11} {'tau':>6} {'no-pred':>8}")
for t in times:
    for m in report.methods:
        r = report.get(m, t)
        tau = "" if r.kendall is None else f"{r.kendall:.3f}"
        med = "" if r.median_ape is None else f"{r.median_ape:.3f}"
        print(f"{m:>9} {t / 60:4.0f} {med:>11} {tau:>6} {r.no_prediction_rate:8.1%}")

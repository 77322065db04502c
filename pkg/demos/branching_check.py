"""
Expected cascade size as a branching process
============================================

Future reshares are Poisson with mean p times the unexposed followers;
every later reshare spawns Poisson(p n*) more. The closed form sums that
geometric series, and a Galton-Watson Monte Carlo agrees with it.
Above p n* = 1 the totals run away.
"""
import warnings

from seismic.estimator import CascadeStats
from seismic.predictor import predict_uncorrected
from seismic.simulator import GwConfig, simulate_galton_watson

n_star, gap = 100.0, 1000.0
stats = CascadeStats(3600.0, 0, int(gap), 0.0)
for mu in (0.2, 0.5, 0.8, 0.95):
    p = mu / n_star
    closed = predict_uncorrected(stats, p, n_star).r_inf_hat
    mc = simulate_galton_watson(GwConfig(p * gap, mu, trials=50_000, seed=1))
    print(f"mu={mu:4}: closed form {closed:8.2f}   Monte Carlo {mc.mean_total:8.2f} +- {mc.se:.2f}")

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    sup = simulate_galton_watson(GwConfig(p * gap, 1.1, trials=2000, seed=1, cap=1e5))
print(f"mu=1.1: {sup.capped_fraction:.1%} of trees hit the cap")

"""
Predicting the size of one cascade as it unfolds
================================================

Simulate a cascade with decaying infectiousness, then watch the estimate
of its final size settle over the first six hours.
"""
import numpy as np

from seismic.estimator import infectiousness_weighted
from seismic.predictor import predict
from seismic.simulator import DecayingInfectiousness, DegreeDistribution, SimConfig, simulate_cascade

cfg = SimConfig(p_trajectory=DecayingInfectiousness(0.018, 3 * 3600.0),
                degree_dist=DegreeDistribution.poisson(50),
                root_degree=100_000, horizon=np.inf, seed=11)
cascade = simulate_cascade(cfg).cascade
print(f"true final size: {cascade.final_size}")

for minutes in (10, 30, 60, 120, 240, 360):
    t = minutes * 60.0
    est = infectiousness_weighted(cascade, t)
    pred = predict(cascade, t)
    size = "supercritical" if pred.is_supercritical else f"{pred.r_inf_hat:9.0f}"
    print(f"{minutes:4d} min  R_t={cascade.reshare_count(t):6d}  p_hat={est.p_hat:.5f}  R_inf={size}")

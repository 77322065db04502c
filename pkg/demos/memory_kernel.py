"""
The reaction-time kernel
========================

Plateau for the first five minutes, then a power-law tail. A large share
of the mass sits far out in the tail, which is why exposure keeps
accumulating for days.
"""
import numpy as np
from scipy.integrate import quad

from seismic.kernel import TWITTER_KERNEL, phi, phi_integral, reaction_time_quantile

k = TWITTER_KERNEL
print(f"s0 = {k.s0:g} s, theta = {k.theta}, c = {k.c:.5e}")

# closed form against plain quadrature
for t in (60, 300, 3600, 86400):
    num = quad(phi, 0, t, args=(k,), points=[k.s0] if t > k.s0 else None, limit=200)[0]
    print(f"Phi({t:>6}) = {phi_integral(t, k):.6f}   quadrature {num:.6f}")

for q in (0.5, 0.9, 0.99):
    print(f"{q:.0%} of reactions arrive within {reaction_time_quantile(q, k) / 3600:.3g} h")

# a fixed grid of the density, for plotting elsewhere
s = np.logspace(0, 7, 8)
print(np.column_stack([s, phi(s, k)]))

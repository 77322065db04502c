import numpy as np
import pytest
from scipy.integrate import quad

from seismic.estimator import Cascade
from seismic.kernel import TWITTER_KERNEL


def phi_ref(s, params):
    """Memory kernel written out independently of the library."""
    if s <= params.s0:
        return params.c
    return params.c * (s / params.s0) ** (-1.0 - params.theta)


def _pieces(a, b, marks):
    """Split [a, b] at ``marks`` and then into pieces at most 10x long."""
    pts = sorted({a, b, *[m for m in marks if a < m < b]})
    out = []
    for lo, hi in zip(pts, pts[1:]):
        edge = lo
        while hi > 10 * max(edge, 1e-300) and edge > 0 and np.isfinite(hi):
            out.append((edge, 10 * edge))
            edge *= 10
        out.append((edge, hi))
    return out


def _quad(f, a, b, marks):
    total = 0.0
    for lo, hi in _pieces(a, b, marks):
        if hi > lo:
            total += quad(f, lo, hi, epsabs=0.0, epsrel=1e-13, limit=500)[0]
    return total


def quad_phi(a, b, params, weight=None):
    """Adaptive quadrature of ``weight(u) * phi(u)`` on ``[a, b]``."""
    if weight is None:
        def f(u):
            return phi_ref(u, params)
    else:
        def f(u):
            return weight(u) * phi_ref(u, params)
    if b <= a:
        return 0.0
    return _quad(f, a, b, [params.s0])


def quad_weighted(t, t_i, params):
    """Oracle for the triangular-weighted kernel integral, in the lag variable u = s - t_i."""
    def integrand(u):
        return max(1.0 - 2.0 * (t - t_i - u) / t, 0.0) * phi_ref(u, params)
    lo = max(0.0, t / 2.0 - t_i)
    hi = t - t_i
    if lo >= hi:
        return 0.0
    return _quad(integrand, lo, hi, [params.s0])


def quad_effective_degree(cascade, t, params):
    return sum(n * quad_phi(0.0, t - ti, params)
               for ti, n in zip(cascade.times, cascade.degrees) if ti <= t)


def random_cascade(rng, size=None, span=7200.0, max_degree=5000):
    size = size if size is not None else int(rng.integers(2, 60))
    times = np.concatenate([[0.0], np.sort(rng.uniform(0, span, size - 1))])
    degrees = rng.integers(0, max_degree, size)
    degrees[0] = max(degrees[0], 1)
    return Cascade(times, degrees)


@pytest.fixture
def kernel():
    return TWITTER_KERNEL


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)

"""Independent dense-grid oracle for the accumulator shape objective.

Transcribes the five-term entropy objective and its feasibility box
directly, evaluates it on a dense (mu, nu) grid with numpy, and returns the
grid maximum.  Shares no code with the optimizer under test.
"""

import numpy as np

_TOL = 1e-12


def _entropy(x):
    inside = (x > 0.0) & (x < 1.0)
    safe = np.where(inside, x, 0.5)
    return np.where(inside, -safe * np.log(safe) - (1 - safe) * np.log(1 - safe), 0.0)


def _term(t, s):
    bad = (t < -_TOL) | (s < -_TOL) | (s > t + _TOL)
    pos = t > _TOL
    ratio = np.clip(np.where(pos, s, 0.0) / np.where(pos, t, 1.0), 0.0, 1.0)
    return np.where(bad, -np.inf, np.where(pos, t * _entropy(ratio), 0.0))


def facc_grid_max(ai: float, ao: float, b: float, n: int = 2000) -> float:
    """Grid supremum of the shape objective; -inf if the box is empty."""
    mu_lo = max(abs(ai - b) / 2.0, 0.0)
    nu_lo = max(0.0, (ai + b) / 2.0 - ao)
    mu_hi = min(ao, 1.0 - ao, min(1.0 - ao, (ai + b) / 2.0) - nu_lo)
    if mu_lo > mu_hi:
        return -np.inf
    nu_hi = min(1.0 - ao - mu_lo, (ai + b) / 2.0 - mu_lo)
    mus = np.linspace(mu_lo, mu_hi, n)[:, None]
    nus = np.linspace(nu_lo, max(nu_hi, nu_lo), n)[None, :]
    half = (ai + b) / 2.0
    zeros = np.zeros((n, n))
    obj = (
        _term(1.0 - ao + zeros, mus + zeros)
        + _term(ao + zeros, mus + zeros)
        + _term(ao - mus + zeros, half - nus - mus)
        + _term(1.0 - ao - mus + zeros, nus + zeros)
        + _term(2.0 * mus + zeros, (ai - b) / 2.0 + mus + zeros)
    )
    return float(np.max(obj))


def sample_shape_args(rng: np.random.Generator):
    """One well-conditioned random argument triple (interior optimum)."""
    ao = rng.uniform(0.25, 0.6)
    b = rng.uniform(0.05, 0.3)
    ai = rng.uniform(0.1, 0.5)
    return ai, ao, b

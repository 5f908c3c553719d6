import numpy as np
import pytest

from fado.detector import Detector


def run_with_norm_audit(detector: Detector, samples):
    """Step through samples, tracking the worst recomputed-norm residual.

    Returns (outcomes, max_relative_residual, min_inner_margin) where the
    residual compares the true squared center norm against the trace sums
    at every step and the margin is the inner-product lower-bound slack
    normalized by the gain energy.
    """
    outcomes = []
    worst = 0.0
    inner_min = np.inf
    for row in samples:
        outcomes.append(detector.step(row))
        wn = float(detector.w @ detector.w)
        gg = detector.trace.sum_d_gamma_sq
        gvw = detector.trace.sum_d_gamma_vw
        residual = abs(wn - (gg + 2.0 * gvw)) / max(1.0, wn)
        worst = max(worst, residual)
        inner_min = min(inner_min, (gvw + 0.5 * gg) / max(1.0, gg))
    return outcomes, worst, float(inner_min)


@pytest.fixture
def rng_seeded():
    return np.random.default_rng(20240814)

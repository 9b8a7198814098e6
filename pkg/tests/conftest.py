import numpy as np
import pytest

from bellcorr.models import (
    HemisphereStrategy,
    LhvMixture,
    Singlet,
    tabulated_from_samples,
)
from bellcorr.montecarlo import ExperimentConfig, run_experiment

HALF_PI = np.pi / 2


def _antisymmetric_basis(theta, k):
    # cos((2j+1) theta) and sin(2j theta) all satisfy f(pi - theta) = -f(theta)
    return np.cos((2 * k + 1) * theta) if k % 2 == 0 else np.sin((k + 1) * theta)


def sup_deviation_from_singlets(model, n=4001):
    t = np.linspace(0, HALF_PI, n)[1:-1]
    c = model(t)
    return min(np.max(np.abs(c + np.cos(t))), np.max(np.abs(c - np.cos(t))))


def random_antisymmetric_model(rng, min_deviation=1e-4, nodes=257):
    """Continuous antisymmetric tabulated model with |C| <= 1.

    Either a bounded random perturbation of +-cos (amplitudes spread over
    several decades) or a PR-like profile: plateau at 1 followed by a random
    monotone piecewise-linear ramp to 0 at pi/2.
    """
    while True:
        sign = rng.choice([-1.0, 1.0])
        if rng.random() < 0.7:
            theta = np.linspace(0.0, np.pi, nodes)
            terms = rng.integers(1, 6)
            pert = sum(rng.normal() * _antisymmetric_basis(theta, int(k)) for k in rng.choice(8, terms, replace=False))
            pert *= 10 ** rng.uniform(-3.5, -0.3) / max(np.max(np.abs(pert)), 1e-300)
            values = np.clip(sign * np.cos(theta) + pert, -1.0, 1.0)
        else:
            theta = np.linspace(0.0, HALF_PI, nodes // 2 + 1)
            start = rng.uniform(0.05, 1.2)
            knots = np.sort(rng.uniform(start, HALF_PI, rng.integers(1, 5)))
            levels = np.sort(rng.uniform(0, 1, len(knots)))[::-1]
            values = sign * np.interp(theta, [0, start, *knots, HALF_PI], [1, 1, *levels, 0])
        model = tabulated_from_samples(np.column_stack([theta, values]))
        if sup_deviation_from_singlets(model) >= min_deviation:
            return model


def random_lhv_mixture(rng, max_strategies=6):
    k = int(rng.integers(1, max_strategies + 1))
    strategies = tuple(
        HemisphereStrategy(int(rng.choice([-1, 1])), int(rng.choice([-1, 1])), float(rng.uniform(-np.pi, np.pi)))
        for _ in range(k)
    )
    return LhvMixture(strategies, rng.dirichlet(np.ones(k)))


@pytest.fixture(scope="session")
def singlet_million_run():
    """Singlet, 10**6 trials in each of 50 bins (shared: it takes several seconds)."""
    import time

    config = ExperimentConfig(Singlet(), trials_per_bin=10**6, bin_count=50, seed=20131)
    start = time.perf_counter()
    estimate = run_experiment(config)
    return config, estimate, time.perf_counter() - start

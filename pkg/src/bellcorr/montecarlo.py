"""Monte Carlo Bell experiments for angle-only correlation models.

Random numbers come from numpy's Philox-4x64-10 bit generator, a
counter-based generator.  Bin ``i`` of a run seeded with ``seed`` uses the
128-bit key ``(seed, i)`` with a zero counter, so bins can be computed in any
order or in parallel and still reproduce the serial result bit for bit.
Results are reproducible for a fixed numpy version; the distribution
transform used here (``Generator.random``) is covered by numpy's
stream-compatibility policy.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .chsh import pair_angle
from .errors import ConfigurationError, InputError
from .models import CorrelationModel, Tabulated, check_angle, checked_values, tabulated_from_samples

RNG_ALGORITHM = "Philox-4x64-10 (numpy.random.Philox), key = (seed, bin index), counter = 0"
CHUNK = 1 << 18
MAX_TRIALS = 2 ** 63 - 1


class AxisMode(str, enum.Enum):
    UNIFORM_SPHERE = "sphere"
    COPLANAR_UNIFORM = "coplanar"


def bin_generator(seed: int, bin_index: int) -> np.random.Generator:
    """Independent stream for one bin of an experiment."""
    if not 0 <= seed < 2 ** 64:
        raise ConfigurationError("seed must be an unsigned 64-bit integer")
    key = np.array([seed, bin_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_axis_pairs(mode, target_theta: float, rng: np.random.Generator, size: int):
    """``size`` uniformly rotated axis pairs separated by exactly ``target_theta``.

    ``sphere`` rotates the pair uniformly over SO(3); ``coplanar`` rotates it
    uniformly within the x-y plane.  Returns two ``(size, 3)`` arrays.
    """
    theta = float(check_angle(target_theta))
    mode = AxisMode(mode)
    if mode is AxisMode.UNIFORM_SPHERE:
        r = rng.random((3, size))
        z = 2.0 * r[0] - 1.0
        rho = np.sqrt(1.0 - z * z)
        phi = 2.0 * np.pi * r[1]
        psi = 2.0 * np.pi * r[2]
        cp, sp = np.cos(phi), np.sin(phi)
        u = np.column_stack([rho * cp, rho * sp, z])
        # (e1, e2) is an orthonormal frame of the plane orthogonal to u
        e1 = np.column_stack([-sp, cp, np.zeros(size)])
        e2 = np.column_stack([-z * cp, -z * sp, rho])
        w = np.cos(psi)[:, None] * e1 + np.sin(psi)[:, None] * e2
    else:
        phi = rng.random(size) * (2.0 * np.pi)
        u = np.column_stack([np.cos(phi), np.sin(phi), np.zeros(size)])
        w = np.column_stack([-np.sin(phi), np.cos(phi), np.zeros(size)])
    v = np.cos(theta) * u + np.sin(theta) * w
    return u, v


def sample_axis_pair(mode, target_theta: float, rng: np.random.Generator):
    u, v = sample_axis_pairs(mode, target_theta, rng, 1)
    return u[0], v[0]


def outcomes_from_uniform(correlation, uniform):
    """Inverse transform of ``p(a, b) = (1 + a b C) / 4``.

    Outcome pairs are ordered (+,+), (+,-), (-,+), (-,-) along the unit
    interval.
    """
    c = np.asarray(correlation, dtype=float)
    p_same = (1.0 + c) / 4.0
    p_diff = (1.0 - c) / 4.0
    u = np.asarray(uniform, dtype=float)
    a = np.where(u < 0.5, 1, -1)
    # (-,+) occupies [1/2, 1/2 + p_diff), (-,-) the remainder
    b = np.where(a == 1, np.where(u < p_same, 1, -1), np.where(u < 0.5 + p_diff, 1, -1))
    return a.astype(np.int8), b.astype(np.int8)


def sample_outcomes(model: CorrelationModel, theta: float, rng: np.random.Generator):
    """One outcome pair ``(a, b)`` drawn from the model's joint distribution."""
    c = float(checked_values(model, theta))
    a, b = outcomes_from_uniform(c, rng.random())
    return int(a), int(b)


@dataclass(frozen=True)
class ExperimentConfig:
    model: CorrelationModel
    trials_per_bin: int = 10_000
    bin_count: int = 50
    axis_mode: AxisMode = AxisMode.UNIFORM_SPHERE
    seed: int = 0

    def __post_init__(self):
        if int(self.trials_per_bin) < 1:
            raise ConfigurationError("trials_per_bin must be >= 1")
        if int(self.bin_count) < 2:
            raise ConfigurationError("bin_count must be >= 2")
        if int(self.trials_per_bin) * int(self.bin_count) > MAX_TRIALS:
            raise ConfigurationError("total trial count overflows a 64-bit counter")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "axis_mode", AxisMode(self.axis_mode))

    def bin_centres(self) -> np.ndarray:
        return (np.arange(self.bin_count) + 0.5) * (np.pi / self.bin_count)


@dataclass(frozen=True, eq=False)
class ExperimentEstimate:
    """Per-bin empirical correlations.

    ``std_error`` is ``sqrt((1 - C_hat**2) / n)``; it is NaN (undefined) for bins
    with fewer than two trials.  ``mean_a`` and ``mean_b`` are the empirical
    outcome marginals.
    """

    theta: np.ndarray
    n: np.ndarray
    correlation: np.ndarray
    std_error: np.ndarray
    mean_a: np.ndarray
    mean_b: np.ndarray

    @property
    def max_std_error(self) -> float:
        return float(np.nanmax(self.std_error))


def _run_bin(model, theta, trials, mode, rng):
    sum_ab = sum_a = sum_b = 0
    done = 0
    while done < trials:
        size = min(CHUNK, trials - done)
        u, v = sample_axis_pairs(mode, theta, rng, size)
        c = checked_values(model, pair_angle(u, v))
        a, b = outcomes_from_uniform(c, rng.random(size))
        sum_ab += int(np.sum(a.astype(np.int64) * b))
        sum_a += int(np.sum(a, dtype=np.int64))
        sum_b += int(np.sum(b, dtype=np.int64))
        done += size
    return sum_ab / trials, sum_a / trials, sum_b / trials


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ExperimentEstimate:
    """Simulate every bin; ``workers > 1`` runs bins on a thread pool with identical results."""
    thetas = config.bin_centres()
    n = np.full(config.bin_count, int(config.trials_per_bin), dtype=np.int64)

    def one_bin(i):
        rng = bin_generator(int(config.seed), i)
        return _run_bin(config.model, float(thetas[i]), int(config.trials_per_bin), config.axis_mode, rng)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one_bin, range(config.bin_count)))
    else:
        results = [one_bin(i) for i in range(config.bin_count)]
    corr, mean_a, mean_b = (np.array(col, dtype=float) for col in zip(*results))
    with np.errstate(invalid="ignore", divide="ignore"):
        err = np.sqrt(np.maximum(1.0 - corr ** 2, 0.0) / n)
    err = np.where(n >= 2, err, np.nan)
    return ExperimentEstimate(thetas, n, corr, err, mean_a, mean_b)


def estimate_to_model(estimate: ExperimentEstimate, tolerance: float = 1e-9) -> Tabulated:
    """Tabulated model through the bin estimates.

    The largest bin standard error is stored as ``tolerance_floor``: domination
    checks at a tolerance below it would mistake sampling noise for structure.
    """
    if np.any(np.asarray(estimate.n) < 2):
        raise InputError("every bin needs at least two trials")
    grid = np.column_stack([estimate.theta, estimate.correlation])
    model = tabulated_from_samples(grid, tolerance=tolerance)
    return Tabulated(
        model.nodes, model.values, tolerance=model.tolerance,
        antisymmetry_residual=model.antisymmetry_residual,
        tolerance_floor=estimate.max_std_error,
    )

"""Correlation functions C(theta) for spin measurements on particle pairs.

Every model depends only on the relative angle ``theta`` in ``[0, pi]``
between the two measurement axes, satisfies ``|C| <= 1`` and is antisymmetric,
``C(pi - theta) = -C(theta)``.  Models are immutable and accept scalars or
numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InputError, ConfigurationError, ModelIntegrityError

HALF_PI = 0.5 * np.pi
QUARTER_PI = 0.25 * np.pi

# Slack for angles produced by floating-point arithmetic (pi - theta etc.).
ANGLE_SLACK = 1e-12
# Nodes of a table closer than this are merged.
NODE_MERGE = 1e-12


def check_angle(theta) -> np.ndarray:
    """Validate relative angles and clip tiny rounding excursions into [0, pi]."""
    arr = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("angle must be finite")
    if np.any(arr < -ANGLE_SLACK) or np.any(arr > np.pi + ANGLE_SLACK):
        raise DomainError(f"angle outside [0, pi]: {theta!r}")
    return np.clip(arr, 0.0, np.pi)


class CorrelationModel:
    """Base class: callable ``C(theta)`` on ``[0, pi]``."""

    kind = "abstract"

    def __call__(self, theta):
        t = check_angle(theta)
        out = self._evaluate(t)
        if out.ndim == 0:
            return float(out)
        return out

    def _evaluate(self, theta: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Singlet(CorrelationModel):
    """Quantum singlet correlation ``-cos(theta)``."""

    kind = "singlet"

    def _evaluate(self, theta):
        return -np.cos(theta)


@dataclass(frozen=True)
class FlippedSinglet(CorrelationModel):
    """Singlet with one party's outcomes reversed: ``+cos(theta)``."""

    kind = "flipped"

    def _evaluate(self, theta):
        return np.cos(theta)


def singlet_correlation(theta: float) -> float:
    return Singlet()(theta)


# -- Popescu-Rohrlich correlations -------------------------------------------


def _linear_ramp(t):
    return 1.0 - t


def _cosine_ramp(t):
    return np.cos(HALF_PI * t) ** 2


def _cubic_ramp(t):
    return 1.0 - t * t * (3.0 - 2.0 * t)


@dataclass(frozen=True)
class PRProfile:
    """Shape of the PR correlation's decrease from 1 to 0 on ``[pi/4, pi/2]``.

    ``ramp`` receives the normalised position ``t = (theta - pi/4) / (pi/4)``
    in ``[0, 1]`` and must map 0 to 1, 1 to 0 and be nonincreasing.
    """

    name: str
    ramp: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)
    smooth: bool = True

    def __post_init__(self):
        t = np.linspace(0.0, 1.0, 2001)
        r = np.asarray(self.ramp(t), dtype=float)
        if r.shape != t.shape or not np.all(np.isfinite(r)):
            raise ConfigurationError(f"ramp {self.name!r} must be finite and vectorised")
        if abs(r[0] - 1.0) > 1e-12 or abs(r[-1]) > 1e-12:
            raise ConfigurationError(f"ramp {self.name!r} must map 0 -> 1 and 1 -> 0")
        if np.any(np.diff(r) > 1e-12):
            raise ConfigurationError(f"ramp {self.name!r} is not monotone nonincreasing")

    @classmethod
    def from_name(cls, name: str) -> "PRProfile":
        try:
            return PR_PROFILES[name.lower()]
        except KeyError:
            raise ConfigurationError(
                f"unknown PR profile {name!r}; expected one of {sorted(PR_PROFILES)}"
            ) from None


LINEAR = PRProfile("linear", _linear_ramp, smooth=False)
COSINE = PRProfile("cosine", _cosine_ramp)
CUBIC = PRProfile("cubic", _cubic_ramp)
PR_PROFILES = {p.name: p for p in (LINEAR, COSINE, CUBIC)}


@dataclass(frozen=True)
class PRBox(CorrelationModel):
    """Popescu-Rohrlich correlation: 1 up to pi/4, a monotone ramp to 0 at pi/2,
    extended antisymmetrically to ``(pi/2, pi]``."""

    profile: PRProfile = COSINE
    kind = "pr"

    def _evaluate(self, theta):
        folded = np.minimum(theta, np.pi - theta)
        sign = np.where(theta <= HALF_PI, 1.0, -1.0)
        t = np.clip((folded - QUARTER_PI) / QUARTER_PI, 0.0, 1.0)
        core = np.where(folded <= QUARTER_PI, 1.0, self.profile.ramp(t))
        return sign * core


def pr_correlation(theta: float, profile: PRProfile = COSINE) -> float:
    return PRBox(profile)(theta)


# -- local hidden variable mixtures ------------------------------------------


def _triangle(x):
    # 1 - 2|x|/pi with x wrapped to [-pi, pi]: the rotation-averaged product of
    # sign(cos psi) * sign(cos(psi + x)).
    wrapped = np.abs(np.remainder(x + np.pi, 2.0 * np.pi) - np.pi)
    return 1.0 - 2.0 * wrapped / np.pi


@dataclass(frozen=True)
class HemisphereStrategy:
    """Deterministic coplanar strategy.

    A hidden direction ``lam`` is shared.  Alice outputs
    ``alice_sign * sign(a . lam)``; Bob outputs ``bob_sign * sign(b . lam')``
    where ``lam'`` is ``lam`` rotated in the plane by ``bob_offset``.
    """

    alice_sign: int = 1
    bob_sign: int = 1
    bob_offset: float = 0.0

    def __post_init__(self):
        if self.alice_sign not in (1, -1) or self.bob_sign not in (1, -1):
            raise InputError("strategy signs must be +1 or -1")
        if not np.isfinite(self.bob_offset):
            raise InputError("strategy offset must be finite")

    def correlation(self, theta):
        """C(theta) averaged over rotations and reflections of the axis pair."""
        s = self.alice_sign * self.bob_sign
        return s * 0.5 * (_triangle(theta - self.bob_offset) + _triangle(theta + self.bob_offset))


@dataclass(frozen=True, eq=False)
class LhvMixture(CorrelationModel):
    """Convex mixture of :class:`HemisphereStrategy` correlations."""

    strategies: tuple
    weights: np.ndarray
    kind = "lhv"

    def __post_init__(self):
        strategies = tuple(self.strategies)
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1 or len(w) != len(strategies) or len(w) == 0:
            raise InputError("need one weight per strategy")
        if not np.all(np.isfinite(w)) or np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
            raise InputError("weights must be nonnegative and sum to 1")
        for s in strategies:
            if not isinstance(s, HemisphereStrategy):
                raise InputError(f"not a HemisphereStrategy: {s!r}")
        w.setflags(write=False)
        object.__setattr__(self, "strategies", strategies)
        object.__setattr__(self, "weights", w)

    def _evaluate(self, theta):
        out = np.zeros_like(theta, dtype=float)
        for weight, strategy in zip(self.weights, self.strategies):
            out = out + weight * strategy.correlation(theta)
        return out


def lhv_mixture_correlation(strategies: Sequence[HemisphereStrategy], weights, theta):
    return LhvMixture(tuple(strategies), weights)(theta)


# -- tabulated models --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Tabulated(CorrelationModel):
    """Piecewise-linear interpolant through antisymmetric nodes on ``[0, pi]``.

    Build these with :func:`tabulated_from_samples`; the constructor only
    stores arrays so that corrupt tables can be represented and detected.
    Outside the outermost nodes the interpolant is held constant.
    """

    nodes: np.ndarray
    values: np.ndarray
    tolerance: float = 1e-9
    antisymmetry_residual: float = 0.0
    tolerance_floor: float | None = None
    kind = "table"

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        values = np.array(self.values, dtype=float)
        if nodes.shape != values.shape or nodes.ndim != 1 or len(nodes) < 2:
            raise InputError("nodes and values must be 1-d arrays of equal length >= 2")
        nodes.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    @property
    def finest_angle(self) -> float:
        """Smallest positive node; angles below it are supported only by the interpolant."""
        positive = self.nodes[self.nodes > NODE_MERGE]
        return float(positive[0]) if len(positive) else float("inf")

    def _evaluate(self, theta):
        return np.interp(theta, self.nodes, self.values)


def tabulated_from_samples(grid, tolerance: float = 1e-9, lipschitz: float | None = None) -> Tabulated:
    """Build an antisymmetric :class:`Tabulated` model from ``(theta, C)`` samples.

    Where both ``theta`` and ``pi - theta`` fall inside the sampled range the
    value is replaced by ``(C(theta) - C(pi - theta)) / 2``; samples without a
    mirror partner are reflected.  The largest change made to an input sample
    is stored as ``antisymmetry_residual``.

    If ``lipschitz`` is given, adjacent input samples must satisfy
    ``|dC| <= lipschitz * dtheta``.
    """
    arr = np.asarray(grid, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError("grid must be a sequence of (theta, value) pairs")
    if len(arr) < 3:
        raise InputError("need at least 3 grid points")
    theta, value = arr[:, 0], arr[:, 1]
    if not np.all(np.isfinite(arr)):
        raise InputError("grid contains non-finite entries")
    if np.any(np.abs(value) > 1.0):
        raise InputError("correlation values must lie in [-1, 1]")
    if np.any(np.diff(theta) <= 0):
        raise InputError("grid angles must be strictly increasing")
    if theta[0] < -ANGLE_SLACK or theta[-1] > np.pi + ANGLE_SLACK:
        raise InputError("grid angles must lie in [0, pi]")
    theta = np.clip(theta, 0.0, np.pi)
    if lipschitz is not None:
        steps = np.abs(np.diff(value)) - lipschitz * np.diff(theta)
        if np.any(steps > 1e-12):
            i = int(np.argmax(steps))
            raise InputError(
                f"samples at {theta[i]:.6g} and {theta[i + 1]:.6g} exceed Lipschitz bound {lipschitz}"
            )

    lo, hi = theta[0], theta[-1]

    def raw(x):
        return np.interp(x, theta, value)

    def inside(x):
        return (x >= lo - NODE_MERGE) & (x <= hi + NODE_MERGE)

    nodes = np.sort(np.concatenate([theta, np.pi - theta]))
    keep = np.concatenate([[True], np.diff(nodes) > NODE_MERGE])
    nodes = np.clip(nodes[keep], 0.0, np.pi)
    mirror = np.pi - nodes
    both = inside(nodes) & inside(mirror)
    values = np.where(
        both,
        0.5 * (raw(nodes) - raw(mirror)),
        np.where(inside(nodes), raw(nodes), -raw(mirror)),
    )
    residual = float(np.max(np.abs(np.interp(theta, nodes, values) - value)))
    return Tabulated(nodes, values, tolerance=tolerance, antisymmetry_residual=residual)


# -- joint outcome distributions ---------------------------------------------

OUTCOMES = ((1, 1), (1, -1), (-1, 1), (-1, -1))


@dataclass(frozen=True)
class JointDistribution:
    """Outcome probabilities with uniform marginals and correlation ``C``.

    ``probabilities`` follows the order of :data:`OUTCOMES`.
    """

    probabilities: tuple
    correlation: float

    def p(self, a: int, b: int) -> float:
        return self.probabilities[OUTCOMES.index((a, b))]

    @property
    def marginal_a(self) -> float:
        return self.p(1, 1) + self.p(1, -1)

    @property
    def marginal_b(self) -> float:
        return self.p(1, 1) + self.p(-1, 1)


def checked_values(model: CorrelationModel, theta) -> np.ndarray:
    """Evaluate ``model`` and raise :class:`ModelIntegrityError` on bad output."""
    c = np.asarray(model(theta), dtype=float)
    if not np.all(np.isfinite(c)) or np.any(np.abs(c) > 1.0 + 1e-12):
        raise ModelIntegrityError(f"{model.kind} model produced |C| > 1 or a non-finite value")
    return np.clip(c, -1.0, 1.0)


def joint_distribution(model: CorrelationModel, theta: float) -> JointDistribution:
    c = float(checked_values(model, theta))
    probs = tuple((1.0 + a * b * c) / 4.0 for a, b in OUTCOMES)
    return JointDistribution(probs, c)

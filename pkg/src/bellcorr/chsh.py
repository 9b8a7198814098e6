"""CHSH expressions for angle-only correlation models.

Coplanar layouts put the axes ``a', b, a, b'`` at successive separations
``(s1, s2, s3)`` in the x-y plane, so ``theta(a', b) = s1``,
``theta(b, a) = s2``, ``theta(a, b') = s3`` and ``theta(a', b')`` is the folded
total.  The two one-parameter families are specialisations:

* ``chsh1``: separations ``(theta, pi/2 - theta, theta)``
* ``chsh2``: separations ``(theta/3, theta/3, theta/3)``
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConfigurationError, DomainError, InputError
from .models import HALF_PI, CorrelationModel, Singlet, checked_values

SINGLET = Singlet()
TSIRELSON = 2.0 * np.sqrt(2.0)
UNIT_TOL = 1e-10


class Family(str, enum.Enum):
    GENERAL = "general"
    CHSH1 = "chsh1"
    CHSH2 = "chsh2"


def pair_angle(u, v) -> np.ndarray:
    """Angle between unit vectors along the last axis.

    Uses ``atan2(|u x v|, u . v)``, which stays accurate near 0 and pi where
    ``arccos`` of the dot product loses half the significant digits.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    cross = np.linalg.norm(np.cross(u, v), axis=-1)
    dot = np.sum(u * v, axis=-1)
    return np.arctan2(cross, dot)


def planar_axis(phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    return np.stack([np.cos(phi), np.sin(phi), np.zeros_like(phi)], axis=-1)


@dataclass(frozen=True, eq=False)
class AxisQuadruple:
    """Measurement axes for one CHSH experiment: Alice ``a, a'``, Bob ``b, b'``."""

    a: np.ndarray
    a_prime: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray

    def __post_init__(self):
        for name in ("a", "a_prime", "b", "b_prime"):
            vec = np.array(getattr(self, name), dtype=float)
            if vec.shape != (3,) or not np.all(np.isfinite(vec)):
                raise InputError(f"axis {name} must be a finite 3-vector")
            if abs(np.linalg.norm(vec) - 1.0) > UNIT_TOL:
                raise InputError(f"axis {name} is not a unit vector (norm {np.linalg.norm(vec)!r})")
            vec.setflags(write=False)
            object.__setattr__(self, name, vec)

    @classmethod
    def coplanar(cls, s1: float, s2: float, s3: float) -> "AxisQuadruple":
        """Axes ``a', b, a, b'`` at successive planar separations ``s1, s2, s3``."""
        ap, b, a, bp = planar_axis([0.0, s1, s1 + s2, s1 + s2 + s3])
        return cls(a=a, a_prime=ap, b=b, b_prime=bp)

    @classmethod
    def from_spherical(cls, angles) -> "AxisQuadruple":
        """Axes from ``(polar, azimuth)`` pairs ordered ``a', b, a, b'``."""
        ang = np.asarray(angles, dtype=float).reshape(4, 2)
        vecs = _spherical(ang[:, 0], ang[:, 1])
        return cls(a=vecs[2], a_prime=vecs[0], b=vecs[1], b_prime=vecs[3])

    def angles(self) -> dict:
        return {
            "ab": float(pair_angle(self.a, self.b)),
            "ab_prime": float(pair_angle(self.a, self.b_prime)),
            "a_prime_b": float(pair_angle(self.a_prime, self.b)),
            "a_prime_b_prime": float(pair_angle(self.a_prime, self.b_prime)),
        }

    def separations(self) -> tuple:
        """Successive separations ``(theta(a', b), theta(b, a), theta(a, b'))``."""
        ang = self.angles()
        return ang["a_prime_b"], ang["ab"], ang["ab_prime"]


@dataclass(frozen=True)
class ChshRecord:
    family: Family
    parameter: Union[float, AxisQuadruple]
    value: float
    quantum_reference: float

    @property
    def gap(self) -> float:
        """How far the value falls short of the quantum reference."""
        return self.quantum_reference - self.value


def _spherical(polar, azimuth):
    sp = np.sin(polar)
    return np.stack([sp * np.cos(azimuth), sp * np.sin(azimuth), np.cos(polar)], axis=-1)


def _chsh_from_angles(model, ab, abp, apb, apbp):
    c = checked_values(model, np.stack([ab, abp, apb, apbp]))
    return np.abs(c[0] + c[1] + c[2] - c[3])


def chsh_general(model: CorrelationModel, axes: AxisQuadruple) -> ChshRecord:
    ang = axes.angles()
    args = (ang["ab"], ang["ab_prime"], ang["a_prime_b"], ang["a_prime_b_prime"])
    value = float(_chsh_from_angles(model, *args))
    reference = float(_chsh_from_angles(SINGLET, *args))
    return ChshRecord(Family.GENERAL, axes, value, reference)


def _open_interval(theta):
    t = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t <= 0.0) or np.any(t >= HALF_PI):
        raise DomainError(f"CHSH family parameter must lie in (0, pi/2): {theta!r}")
    return t


def chsh1_curve(model: CorrelationModel, theta):
    """Vectorised ``(value, quantum_reference)`` of the first family."""
    t = _open_interval(theta)
    c = checked_values(model, np.stack([t, HALF_PI - t]))
    value = np.abs(2.0 * c[0] + 2.0 * c[1])
    reference = 2.0 * np.cos(t) + 2.0 * np.cos(HALF_PI - t)
    return value, reference


def chsh2_curve(model: CorrelationModel, theta):
    """Vectorised ``(value, quantum_reference)`` of the second family."""
    t = _open_interval(theta)
    c = checked_values(model, np.stack([t / 3.0, t]))
    value = np.abs(3.0 * c[0] - c[1])
    reference = np.abs(3.0 * np.cos(t / 3.0) - np.cos(t))
    return value, reference


def chsh1(model: CorrelationModel, theta: float) -> ChshRecord:
    value, reference = chsh1_curve(model, float(theta))
    return ChshRecord(Family.CHSH1, float(theta), float(value), float(reference))


def chsh2(model: CorrelationModel, theta: float) -> ChshRecord:
    value, reference = chsh2_curve(model, float(theta))
    return ChshRecord(Family.CHSH2, float(theta), float(value), float(reference))


_CURVES = {Family.CHSH1: chsh1_curve, Family.CHSH2: chsh2_curve}


def family_curve(model, family, theta):
    return _CURVES[Family(family)](model, theta)


def scan(model: CorrelationModel, family, thetas) -> list:
    """Records for ``family`` ("chsh1", "chsh2" or "both") over ``thetas``."""
    families = [Family.CHSH1, Family.CHSH2] if family == "both" else [Family(family)]
    if Family.GENERAL in families:
        raise InputError("scan covers the chsh1 and chsh2 families only")
    t = np.asarray(thetas, dtype=float)
    records = []
    for fam in families:
        values, refs = family_curve(model, fam, t)
        records.extend(
            ChshRecord(fam, float(x), float(v), float(r)) for x, v, r in zip(t, values, refs)
        )
    return records


def interior_grid(n: int) -> np.ndarray:
    """``n`` equally spaced points strictly inside ``(0, pi/2)``."""
    return np.arange(1, n + 1) * (HALF_PI / (n + 1))


# -- maximisation ------------------------------------------------------------

MIN_GRID_PER_AXIS = 6


def _fold(x):
    return np.abs(np.remainder(x + np.pi, 2.0 * np.pi) - np.pi)


def _coplanar_values(model, seps):
    seps = np.atleast_2d(seps)
    s1, s2, s3 = seps[:, 0], seps[:, 1], seps[:, 2]
    total = _fold(s1 + s2 + s3)
    return _chsh_from_angles(model, s2, s3, s1, total)


def _spherical_values(model, params):
    params = np.atleast_2d(params).reshape(-1, 4, 2)
    v = _spherical(params[..., 0], params[..., 1])
    ap, b, a, bp = v[:, 0], v[:, 1], v[:, 2], v[:, 3]
    return _chsh_from_angles(
        model, pair_angle(a, b), pair_angle(a, bp), pair_angle(ap, b), pair_angle(ap, bp)
    )


def _search_directions(n):
    dirs = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        dirs.extend([e, -e])
    # exchange moves e_i - e_j walk along ridges where single coordinates trade off exactly
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros(n)
            e[i], e[j] = 1.0, -1.0
            dirs.extend([e, -e])
    return dirs


def _coordinate_descent(objective, x0, f0, step, lower, upper, budget):
    """Maximise by coordinate (and pairwise exchange) moves, halving step on failure."""
    x, best, evals = np.array(x0, dtype=float), float(f0), 0
    directions = _search_directions(len(x))
    while step > 1e-13 and evals < budget:
        improved = False
        for d in directions:
            if evals >= budget:
                break
            cand = np.clip(x + step * d, lower, upper)
            if np.array_equal(cand, x):
                continue
            val = float(objective(cand)[0])
            evals += 1
            if val > best:
                x, best, improved = cand, val, True
                break
        if not improved:
            step *= 0.5
    return x, best, evals


def maximize_chsh(model: CorrelationModel, restrict_coplanar: bool = True, budget: int = 100_000):
    """Search for axes maximising the CHSH value of ``model``.

    A deterministic grid over coplanar separations seeds coordinate descent,
    either on the three separations or, with ``restrict_coplanar=False``, on
    the eight spherical angles of the four axes.  The result is a lower bound
    on the true maximum.  Returns ``(axes, record)``.
    """
    budget = int(budget)
    k = int(np.floor((budget / 2.0) ** (1.0 / 3.0)))
    while (k + 1) ** 3 <= budget // 2:
        k += 1
    if k < MIN_GRID_PER_AXIS:
        raise ConfigurationError(
            f"budget {budget} cannot cover the coarse grid ({MIN_GRID_PER_AXIS ** 3} evaluations per half)"
        )
    centres = (np.arange(k) + 0.5) * (np.pi / k)
    grid = np.stack(np.meshgrid(centres, centres, centres, indexing="ij"), axis=-1).reshape(-1, 3)
    values = _coplanar_values(model, grid)
    # first cell within rounding of the maximum: breaks the exact theta -> pi - theta tie
    best_index = int(np.flatnonzero(values >= values.max() - 1e-12)[0])
    seed = grid[best_index]
    remaining = budget - len(grid)
    step = 0.5 * np.pi / k

    if restrict_coplanar:
        x, _, _ = _coordinate_descent(
            lambda s: _coplanar_values(model, s), seed, values[best_index], step,
            np.zeros(3), np.full(3, np.pi), remaining,
        )
        axes = AxisQuadruple.coplanar(*x)
    else:
        phis = np.cumsum([0.0, *seed])
        x0 = np.column_stack([np.full(4, HALF_PI), phis]).ravel()
        lower = np.tile([0.0, -np.inf], 4)
        upper = np.tile([np.pi, np.inf], 4)
        x, _, _ = _coordinate_descent(
            lambda p: _spherical_values(model, p), x0, float(_spherical_values(model, x0)[0]),
            step, lower, upper, remaining,
        )
        axes = AxisQuadruple.from_spherical(x)
    return axes, chsh_general(model, axes)

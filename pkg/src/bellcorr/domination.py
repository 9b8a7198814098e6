"""Executable form of the non-domination argument.

Given a continuous antisymmetric ``C(theta)``, either it coincides with
``-cos`` or ``+cos`` on (0, pi/2), or some CHSH test from the two families
gives a strictly smaller value than the corresponding singlet reference while
that reference exceeds 2.  :func:`find_domination_witness` searches for such a
test and returns a re-checkable :class:`DominationVerdict`.

Throughout, ``sign`` is -1 when comparing against ``-cos`` and +1 against
``+cos``, and the *excess* of a model at ``theta`` is
``sign * C(theta) - cos(theta)``: positive where the model is more strongly
correlated than the matching singlet, negative where it is weaker.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .chsh import Family, chsh1, chsh2, family_curve
from .errors import InconclusiveError, InputError
from .models import HALF_PI, CorrelationModel, Tabulated, checked_values

DEFAULT_TOLERANCE = 1e-6
DEFAULT_GRID = 1000
DEFAULT_MARGIN = 1e-9
ZERO_TOL = 1e-12

WITNESS = "WitnessFound"
COINCIDES = "CoincidesWithSinglet"
COINCIDES_FLIPPED = "CoincidesWithFlippedSinglet"


def scan_angles(grid_size: int) -> np.ndarray:
    """Interior points ``i * (pi/2) / grid_size`` for ``i = 1 .. grid_size - 1``.

    Doubling ``grid_size`` yields a superset of the previous grid.
    """
    return np.arange(1, grid_size) * (HALF_PI / grid_size)


# -- sign consistency --------------------------------------------------------


def sign_consistency_check(model: CorrelationModel, grid_size: int = DEFAULT_GRID,
                           xtol: float = 1e-10) -> Optional[float]:
    """Locate a zero of ``C`` in (0, pi/2), or return None if ``C`` is single-signed.

    A zero at ``theta0`` means ``chsh1(theta0) = 2 |C(pi/2 - theta0)| <= 2``, so
    the first family cannot exceed the classical bound there.
    """
    if grid_size < 16:
        raise InputError("grid_size must be at least 16")
    thetas = scan_angles(grid_size)
    values = checked_values(model, thetas)
    zero = np.flatnonzero(np.abs(values) <= ZERO_TOL)
    change = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
    first_zero = zero[0] if len(zero) else len(thetas)
    first_change = change[0] if len(change) else len(thetas)
    if first_zero == len(thetas) and first_change == len(thetas):
        return None
    if first_zero <= first_change:
        return float(thetas[first_zero])
    lo, hi = float(thetas[first_change]), float(thetas[first_change + 1])
    f_lo = float(model(lo))
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        f_mid = float(model(mid))
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# -- contraction certificates ------------------------------------------------


def theorem_iteration_bound(theta1: float, delta: float) -> int:
    """Smallest ``n >= 0`` with ``3**-n < 2 * delta / theta1**2``.

    At that depth the cosine ceiling ``theta1**2 * 3**(-2n) / 2`` drops below the
    forced excess ``delta * 3**-n``, so the second family must already have
    failed at some shallower depth.
    """
    if not delta > 0:
        raise InputError(f"delta must be positive, got {delta!r}")
    if not 0 < theta1 < HALF_PI:
        raise InputError(f"theta1 must lie in (0, pi/2), got {theta1!r}")
    ratio = 2.0 * delta / (theta1 * theta1)
    n = max(0, math.ceil(-math.log(ratio, 3)))
    # log rounding can land one off either way; settle against the exact test
    while n > 0 and 3.0 ** -(n - 1) < ratio:
        n -= 1
    while not 3.0 ** -n < ratio:
        n += 1
    return n


@dataclass(frozen=True)
class ContractionCertificate:
    """Depth at which the ``theta -> theta/3`` iteration exposes a failure.

    ``witness_angle = theta1 * 3**-n_star`` is the parameter at which the
    second family's value (``candidate_value``) falls below the singlet's
    (``quantum_value``).  ``below_grid_resolution`` is set when the test
    relies on a tabulated model's interpolant below its finest node.
    """

    theta1: float
    delta: float
    n_star: int
    witness_angle: float
    candidate_value: float
    quantum_value: float
    iteration_bound: int
    sign: int = -1
    below_grid_resolution: bool = False


class ContractionRefuted(InputError):
    """The excess chain broke because ``C`` changes sign in ``bracket``."""

    def __init__(self, message, bracket):
        super().__init__(message)
        self.bracket = bracket


def _excess(model, theta, sign):
    return sign * float(model(theta)) - math.cos(theta)


def _infer_sign(model, theta1):
    c = float(model(theta1))
    if c < -math.cos(theta1):
        return -1
    if c > math.cos(theta1):
        return 1
    raise InputError(
        f"contraction needs |C(theta1)| > cos(theta1); got C = {c!r} at theta1 = {theta1!r}"
    )


def contraction_certificate(model: CorrelationModel, theta1: float,
                            sign: Optional[int] = None) -> ContractionCertificate:
    """Follow ``theta1, theta1/3, theta1/9, ...`` until the second family fails.

    Requires the model to be strictly more correlated than the singlet at
    ``theta1`` (``C(theta1) < -cos(theta1)``, or the mirrored ``C > cos``).
    While the family holds at ``x``, the excess at ``x/3`` is at least a third
    of the excess at ``x``; the cosine ceiling makes that impossible by
    :func:`theorem_iteration_bound`, so a failure appears at
    ``n_star < theorem_iteration_bound(theta1, delta)``.
    """
    if not 0 < theta1 < HALF_PI:
        raise InputError(f"theta1 must lie in (0, pi/2), got {theta1!r}")
    if sign is None:
        sign = _infer_sign(model, theta1)
    delta = _excess(model, theta1, sign)
    if not delta > 0:
        raise InputError(f"model is not more correlated than the singlet at theta1 (delta = {delta!r})")
    bound = theorem_iteration_bound(theta1, delta)
    finest = model.finest_angle if isinstance(model, Tabulated) else 0.0
    for n in range(bound + 1):
        x = theta1 / 3.0 ** n
        rec = chsh2(model, x)
        if rec.value < rec.quantum_reference:
            return ContractionCertificate(
                theta1=theta1, delta=delta, n_star=n, witness_angle=x,
                candidate_value=rec.value, quantum_value=rec.quantum_reference,
                iteration_bound=bound, sign=sign, below_grid_resolution=x / 3.0 < finest,
            )
        forced = delta / 3.0 ** (n + 1)
        if _excess(model, x / 3.0, sign) < forced * (1.0 - 1e-9):
            raise ContractionRefuted(
                f"C changes sign between {x / 3.0!r} and {x!r}", (x / 3.0, x)
            )
    raise InconclusiveError(
        f"no failure of the second family down to depth {bound}; rounding dominates at "
        f"theta1 = {theta1!r}, delta = {delta!r}"
    )


# -- verdicts ----------------------------------------------------------------


@dataclass(frozen=True)
class DominationVerdict:
    outcome: str
    family: Optional[str] = None
    theta: Optional[float] = None
    candidate_value: Optional[float] = None
    quantum_value: Optional[float] = None
    max_deviation: Optional[float] = None
    certificate: Optional[ContractionCertificate] = field(default=None, compare=False)

    @property
    def witness_found(self) -> bool:
        return self.outcome == WITNESS

    def to_dict(self) -> dict:
        keys = ("outcome", "family", "theta", "candidate_value", "quantum_value", "max_deviation")
        return {k: getattr(self, k) for k in keys if getattr(self, k) is not None}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _witness(rec, certificate=None):
    return DominationVerdict(
        WITNESS, family=rec.family.value, theta=rec.parameter,
        candidate_value=rec.value, quantum_value=rec.quantum_reference,
        certificate=certificate,
    )


def _usable(rec, margin):
    return rec.quantum_reference > 2.0 and rec.value < rec.quantum_reference - margin


def _deep_chain(model, theta1, sign, margin, extra_depth=40):
    """Second-family tests along ``theta1 / 3**n`` past the certificate depth."""
    delta = _excess(model, theta1, sign)
    depth = theorem_iteration_bound(theta1, delta) + extra_depth if delta > 0 else extra_depth
    for n in range(depth + 1):
        x = theta1 / 3.0 ** n
        if x <= 0.0:
            break
        rec = chsh2(model, x)
        if _usable(rec, margin):
            return rec
    return None


def find_domination_witness(model: CorrelationModel, tolerance: float = DEFAULT_TOLERANCE,
                            grid_size: int = DEFAULT_GRID,
                            margin: float = DEFAULT_MARGIN) -> DominationVerdict:
    """Decide whether ``model`` coincides with ``-cos``/``+cos`` or find a CHSH
    test on which it is less nonlocal than the singlet.

    Stages, each reporting the smallest-angle witness it finds:

    1. a zero of ``C`` gives a first-family witness at the zero;
    2. scanning upwards, the first angle whose excess leaves ``[-tolerance,
       tolerance]`` is examined: a weaker model is tested against the first
       family there, a stronger one is followed with a contraction
       certificate into the second family;
    3. if no dispatch clears ``margin``, every grid test of both families and
       every deep contraction chain is tried.

    Without any grid deviation above ``tolerance`` the verdict is
    ``CoincidesWithSinglet`` (or the flipped variant) with the largest
    deviation seen.  A witness always satisfies
    ``candidate_value < quantum_value - margin`` and ``quantum_value > 2``.
    """
    if not tolerance > 0:
        raise InputError("tolerance must be positive")
    if grid_size < DEFAULT_GRID:
        raise InputError(f"grid_size must be at least {DEFAULT_GRID}")
    thetas = scan_angles(grid_size)
    values = checked_values(model, thetas)

    root = sign_consistency_check(model, grid_size)
    if root is not None:
        rec = chsh1(model, root)
        if _usable(rec, margin):
            return _witness(rec)

    sign = -1 if np.sum(values) < 0 else 1
    excess = sign * values - np.cos(thetas)
    deviating = np.flatnonzero(np.abs(excess) > tolerance)
    if root is None and len(deviating) == 0:
        outcome = COINCIDES if sign < 0 else COINCIDES_FLIPPED
        return DominationVerdict(outcome, max_deviation=float(np.max(np.abs(excess))))

    for i in deviating:
        theta = float(thetas[i])
        if excess[i] < 0:
            rec = chsh1(model, theta)
            if _usable(rec, margin):
                return _witness(rec)
            continue
        try:
            cert = contraction_certificate(model, theta, sign=sign)
        except (ContractionRefuted, InconclusiveError):
            continue
        rec = chsh2(model, cert.witness_angle)
        if _usable(rec, margin):
            return _witness(rec, cert)

    v1, q1 = family_curve(model, Family.CHSH1, thetas)
    v2, q2 = family_curve(model, Family.CHSH2, thetas)
    for i, theta in enumerate(thetas):
        for fn, v, q in ((chsh2, v2, q2), (chsh1, v1, q1)):
            if q[i] > 2.0 and v[i] < q[i] - margin:
                return _witness(fn(model, float(theta)))

    for i in deviating[np.argsort(-np.abs(excess[deviating]), kind="stable")]:
        if excess[i] > 0:
            rec = _deep_chain(model, float(thetas[i]), sign, margin)
            if rec is not None:
                return _witness(rec)

    raise InconclusiveError(
        f"model deviates from {'-' if sign < 0 else '+'}cos by up to "
        f"{float(np.max(np.abs(excess))):.3g} but no CHSH test falls short by more than {margin:g}"
    )


def verify_witness(model: CorrelationModel, verdict: DominationVerdict, margin: float = DEFAULT_MARGIN) -> bool:
    """Independently re-evaluate a witness verdict."""
    if not verdict.witness_found:
        return False
    rec = (chsh1 if verdict.family == Family.CHSH1.value else chsh2)(model, verdict.theta)
    return (
        abs(rec.value - verdict.candidate_value) <= 1e-9
        and abs(rec.quantum_reference - verdict.quantum_value) <= 1e-9
        and _usable(rec, margin)
    )

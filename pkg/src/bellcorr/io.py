"""Text formats: model specs, CSV tables and serialised results.

All CSV is UTF-8 with LF line endings.  Floats are written with 12
significant digits.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .errors import InputError
from .models import (
    FlippedSinglet,
    HemisphereStrategy,
    LhvMixture,
    PRBox,
    PRProfile,
    Singlet,
    tabulated_from_samples,
)

TABLE_HEADER = ["theta_radians", "correlation"]
LHV_HEADER = ["weight", "alice_sign", "bob_sign", "bob_offset_radians"]
SCAN_HEADER = ["family", "theta_radians", "value", "quantum_reference"]
ESTIMATE_HEADER = ["theta_radians", "n", "correlation", "std_error"]


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def _rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _read_csv(path, header):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    if not rows or [h.strip() for h in rows[0]] != header:
        raise InputError(f"{path}: expected header {','.join(header)}")
    body = [r for r in rows[1:] if r and any(cell.strip() for cell in r)]
    out = []
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise InputError(f"{path}:{lineno}: expected {len(header)} columns")
        try:
            out.append([float(cell) for cell in row])
        except ValueError:
            raise InputError(f"{path}:{lineno}: non-numeric entry") from None
    return np.array(out, dtype=float).reshape(-1, len(header))


def read_table(path, tolerance: float = 1e-9, lipschitz=None):
    """Tabulated model from a ``theta_radians,correlation`` CSV file."""
    data = _read_csv(path, TABLE_HEADER)
    try:
        return tabulated_from_samples(data, tolerance=tolerance, lipschitz=lipschitz)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def write_table(path, thetas, values) -> None:
    rows = [(fmt(t), fmt(v)) for t, v in zip(thetas, values)]
    Path(path).write_text(_rows_to_csv(TABLE_HEADER, rows), encoding="utf-8")


def read_lhv(path) -> LhvMixture:
    """LHV mixture from a ``weight,alice_sign,bob_sign,bob_offset_radians`` CSV file."""
    data = _read_csv(path, LHV_HEADER)
    if len(data) == 0:
        raise InputError(f"{path}: no strategies")
    strategies = []
    for w, sa, sb, offset in data:
        if sa not in (1.0, -1.0) or sb not in (1.0, -1.0):
            raise InputError(f"{path}: signs must be 1 or -1")
        strategies.append(HemisphereStrategy(int(sa), int(sb), float(offset)))
    return LhvMixture(tuple(strategies), data[:, 0])


def write_lhv(path, mixture: LhvMixture) -> None:
    rows = [
        (fmt(w), s.alice_sign, s.bob_sign, fmt(s.bob_offset))
        for w, s in zip(mixture.weights, mixture.strategies)
    ]
    Path(path).write_text(_rows_to_csv(LHV_HEADER, rows), encoding="utf-8")


def parse_model_spec(spec: str, tolerance: float = 1e-9):
    """Model from ``singlet | flipped | pr:<profile> | lhv:<path> | table:<path>``."""
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name == "singlet" and not arg:
        return Singlet()
    if name in ("flipped", "flipped-singlet") and not arg:
        return FlippedSinglet()
    if name == "pr":
        return PRBox(PRProfile.from_name(arg or "cosine"))
    if name == "lhv" and arg:
        return read_lhv(arg)
    if name == "table" and arg:
        return read_table(arg, tolerance=tolerance)
    raise InputError(f"unknown model spec {spec!r}")


# -- result serialisation ----------------------------------------------------


def evaluation_csv(thetas, values) -> str:
    return _rows_to_csv(TABLE_HEADER, [(fmt(t), fmt(v)) for t, v in zip(thetas, values)])


def scan_csv(records) -> str:
    rows = [(r.family.value, fmt(r.parameter), fmt(r.value), fmt(r.quantum_reference)) for r in records]
    return _rows_to_csv(SCAN_HEADER, rows)


def estimate_csv(estimate) -> str:
    rows = zip(estimate.theta, estimate.n, estimate.correlation, estimate.std_error)
    return _rows_to_csv(ESTIMATE_HEADER, [tuple(fmt(x) for x in row) for row in rows])


def maximum_json(axes, record) -> str:
    payload = {
        "value": record.value,
        "quantum_reference": record.quantum_reference,
        "separations": list(axes.separations()),
        "axes": {
            name: getattr(axes, name).tolist() for name in ("a", "a_prime", "b", "b_prime")
        },
    }
    return json.dumps(payload)


def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    config = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InputError(f"{path}:{lineno}: expected key = value")
        config[key.strip().replace("-", "_")] = value.strip()
    return config

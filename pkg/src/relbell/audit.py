"""False-alarm audit for entanglement-monitored key distribution.

A key-distribution link that monitors the CHSH combination will alarm
when |c| drops below a chosen margin. For particle pairs with
relativistic source velocities the correlation is suppressed even though
nothing was tampered with, so an operator who calibrated the alarm at
rest can be tripped by kinematics alone. Given a discrete distribution
of pair velocities, this module computes the velocity-averaged CHSH
value and reports whether the chosen alarm margin would misfire.

Velocity distributions arrive as CSV text with the exact header
``beta_x,beta_y,beta_z,weight``; weights are positive and are normalized
on load, and samples must stay strictly below light speed.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .bell import ChshSettings, chsh_value
from .errors import DegenerateObservable, EmptyDistribution, ParseError, SuperluminalSample

NO_ALARM = "NoAlarm"
FALSE_ALARM_RISK = "FalseAlarmRisk"

_HEADER = ("beta_x", "beta_y", "beta_z", "weight")
_MAX_CHSH = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class VelocityDistribution:
    """Discrete pair-velocity distribution with normalized weights."""

    betas: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return self.betas.shape[0]

    @classmethod
    def from_samples(cls, betas, weights) -> "VelocityDistribution":
        betas = np.asarray(betas, dtype=float).reshape(-1, 3)
        weights = np.asarray(weights, dtype=float).reshape(-1)
        if betas.shape[0] == 0:
            raise EmptyDistribution("no velocity samples")
        if betas.shape[0] != weights.shape[0]:
            raise ValueError("one weight per velocity sample required")
        if np.any(weights <= 0.0) or not np.all(np.isfinite(weights)):
            raise ValueError("weights must be positive and finite")
        mags = np.linalg.norm(betas, axis=1)
        bad = np.flatnonzero(mags >= 1.0)
        if bad.size:
            k = int(bad[0])
            raise SuperluminalSample(
                f"sample {k} has |beta| = {float(mags[k])!r} >= 1: {tuple(betas[k])}"
            )
        return cls(betas=betas, weights=weights / float(np.sum(weights)))


def load_distribution(text: str) -> VelocityDistribution:
    """Parse CSV text into a velocity distribution.

    Errors carry 1-based line numbers: ParseError for a bad header, a
    malformed number, a wrong column count, or a non-positive weight;
    SuperluminalSample for |beta| >= 1; EmptyDistribution when no data
    rows remain.
    """
    rows = list(csv.reader(io.StringIO(text)))
    rows = [(k + 1, row) for k, row in enumerate(rows) if row]
    if not rows:
        raise EmptyDistribution("distribution text is empty")
    line, header = rows[0]
    if tuple(cell.strip() for cell in header) != _HEADER:
        raise ParseError(f"line {line}: header must be {','.join(_HEADER)!r}")
    betas, weights = [], []
    for line, row in rows[1:]:
        if len(row) != 4:
            raise ParseError(f"line {line}: expected 4 fields, got {len(row)}")
        try:
            vals = [float(cell) for cell in row]
        except ValueError as exc:
            raise ParseError(f"line {line}: {exc}") from exc
        if not all(math.isfinite(v) for v in vals):
            raise ParseError(f"line {line}: non-finite value")
        if vals[3] <= 0.0:
            raise ParseError(f"line {line}: weight must be positive, got {vals[3]!r}")
        if math.hypot(vals[0], vals[1], vals[2]) >= 1.0:
            raise SuperluminalSample(f"line {line}: |beta| >= 1 in sample {tuple(vals[:3])}")
        betas.append(vals[:3])
        weights.append(vals[3])
    if not betas:
        raise EmptyDistribution("distribution has a header but no samples")
    return VelocityDistribution.from_samples(betas, weights)


def _neumaier_sum(values) -> float:
    """Compensated summation; the result is independent of sample order
    to well below the audit tolerances."""
    total = 0.0
    compensation = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            compensation += (total - t) + v
        else:
            compensation += (v - t) + total
        total = t
    return total + compensation


def per_sample_chsh(dist: VelocityDistribution, settings: ChshSettings) -> np.ndarray:
    """CHSH value at each velocity sample.

    A degenerate sample (only possible at |beta| = 1, which the loader
    already rejects) is reported with its index.
    """
    out = np.empty(len(dist))
    for k in range(len(dist)):
        try:
            out[k] = chsh_value(settings, dist.betas[k])
        except DegenerateObservable as exc:
            raise DegenerateObservable(f"sample {k}: {exc}") from exc
    return out


def expected_chsh(dist: VelocityDistribution, settings: ChshSettings) -> float:
    """Velocity-averaged CHSH value, compensated summation."""
    values = per_sample_chsh(dist, settings)
    return _neumaier_sum(w * v for w, v in zip(dist.weights, values))


@dataclass(frozen=True, eq=False)
class AuditReport:
    """Outcome of one false-alarm audit.

    ``degradation`` is |ideal| - |expected|, how much of the rest-frame
    correlation the velocity spread eats. For settings that are optimal
    at rest it cannot be negative beyond rounding; for deliberately
    suboptimal settings motion can improve the correlation, which shows
    up as a negative value.
    """

    expected_chsh: float
    ideal_chsh: float
    degradation: float
    alarm_threshold: float
    verdict: str
    samples: tuple

    def to_json_dict(self) -> dict:
        return {
            "expected_chsh": self.expected_chsh,
            "ideal_chsh": self.ideal_chsh,
            "degradation": self.degradation,
            "alarm_threshold": self.alarm_threshold,
            "verdict": self.verdict,
            "samples": [
                {
                    "beta_x": beta[0], "beta_y": beta[1], "beta_z": beta[2],
                    "weight": weight, "chsh": value,
                }
                for beta, weight, value in self.samples
            ],
            "metadata": {
                "threshold_semantics":
                    "alarm_threshold is an operator-chosen margin on |expected_chsh|,"
                    " not a physical constant",
            },
        }

    def to_json(self) -> str:
        return render_json(self.to_json_dict()) + "\n"


def render_json(obj, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits (full double
    precision), so reports round-trip bit-exactly."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (f'{inner}{json.dumps(key)}: {render_json(val, indent + 1)}'
                 for key, val in obj.items())
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = (f"{inner}{render_json(val, indent + 1)}" for val in obj)
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return format(obj, ".17g")
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(obj)


def audit(dist: VelocityDistribution, settings: ChshSettings,
          threshold: float = 2.7) -> AuditReport:
    """Audit a velocity distribution against an alarm margin.

    The verdict is FalseAlarmRisk exactly when |expected_chsh| falls
    below ``threshold``, which must lie in (0, 2 sqrt(2)]. The ideal
    value is the CHSH combination of the same settings at rest.
    """
    threshold = float(threshold)
    if not (0.0 < threshold <= _MAX_CHSH + 1e-12):
        raise ValueError(f"threshold must lie in (0, 2*sqrt(2)], got {threshold!r}")
    values = per_sample_chsh(dist, settings)
    expected = _neumaier_sum(w * v for w, v in zip(dist.weights, values))
    ideal = chsh_value(settings, np.zeros(3))
    return AuditReport(
        expected_chsh=expected,
        ideal_chsh=ideal,
        degradation=abs(ideal) - abs(expected),
        alarm_threshold=threshold,
        verdict=FALSE_ALARM_RISK if abs(expected) < threshold else NO_ALARM,
        samples=tuple(
            (tuple(float(x) for x in dist.betas[k]), float(dist.weights[k]), float(values[k]))
            for k in range(len(dist))
        ),
    )

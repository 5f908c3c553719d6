"""Mistake-driven online fault detectors with normalized (unit-step) updates.

A detector keeps a center ``w`` and flags a transaction ``y`` whenever the
Euclidean distance to the center reaches the current radius.  Every alarm
doubles as a learning step: the center moves by ``gain * v`` where ``v`` is
the unit vector pointing from the old center to the flagged point.  Two
radius policies are supported:

* fixed radius: the threshold ``epsilon`` is known and constant; the gain
  decays with the mistake count (or stays constant for tracking).
* adaptive radius: ``epsilon`` is unknown; the effective radius is the
  reciprocal of the current gain and therefore grows slowly as mistakes
  accumulate.

The per-step bookkeeping needed by the invariant auditors (gain energy,
gain mass, and the gain-weighted inner products with the pre-update center)
is accumulated in a :class:`DiagnosticsTrace` with compensated summation;
the center update itself runs in plain binary64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Union

import numpy as np

__all__ = [
    "PowerDecay",
    "Constant",
    "GainSchedule",
    "FixedRadius",
    "AdaptiveRadius",
    "DetectorMode",
    "StepOutcome",
    "DiagnosticsTrace",
    "Detector",
    "new_detector",
    "gain_value",
    "as_vector",
]


def as_vector(values, dim: int | None = None, name: str = "vector") -> np.ndarray:
    """Validate and convert input to a finite 1-D float64 array.

    Rejects NaN/Inf eagerly: a non-finite distance would silently disable
    the alarm comparison downstream.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} must be a 1-D sequence with at least one entry")
    if dim is not None and arr.size != dim:
        raise ValueError(f"{name} has dimension {arr.size}, expected {dim}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class PowerDecay:
    """Gain rule gamma0 * m**-(1/2 + tau) over the mistake count m >= 1."""

    gamma0: float = 1.0
    tau: float = 0.25

    def __post_init__(self):
        if not (self.gamma0 > 0 and math.isfinite(self.gamma0)):
            raise ValueError("gamma0 must be a positive finite number")
        if not (0.0 < self.tau < 0.5):
            raise ValueError("tau must lie strictly between 0 and 1/2")


@dataclass(frozen=True)
class Constant:
    """Constant gain, the tracking variant used for scene detection."""

    gamma: float = 1.0

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError("gamma must be a positive finite number")


GainSchedule = Union[PowerDecay, Constant]


@dataclass(frozen=True)
class FixedRadius:
    """Known detection radius; epsilon = 0 is allowed but flags everything."""

    epsilon: float

    def __post_init__(self):
        if not (self.epsilon >= 0 and math.isfinite(self.epsilon)):
            raise ValueError("epsilon must be a nonnegative finite number")


@dataclass(frozen=True)
class AdaptiveRadius:
    """Unknown radius; the effective radius is the reciprocal gain."""


DetectorMode = Union[FixedRadius, AdaptiveRadius]


def gain_value(schedule: GainSchedule, m: int) -> float:
    """Gain for mistake count ``m`` under the fixed-radius indexing.

    For :class:`PowerDecay` this is gamma0 * m**-(1/2+tau) and requires
    m >= 1 (the count after the alarm being paid for).  The adaptive
    detector evaluates its pre-decision gain as ``gain_value(schedule, m+1)``
    so that the first alarm uses gamma0 and the radius 1/gamma is defined
    from the very first step.  :class:`Constant` ignores ``m``.
    """
    if m < 0:
        raise ValueError("mistake count must be nonnegative")
    if isinstance(schedule, Constant):
        return schedule.gamma
    if isinstance(schedule, PowerDecay):
        if m < 1:
            raise ValueError(
                "power-decay gain is defined for mistake counts >= 1 "
                "(the adaptive variant passes m+1)"
            )
        return schedule.gamma0 * float(m) ** -(0.5 + schedule.tau)
    raise TypeError(f"unknown gain schedule: {schedule!r}")


@dataclass(frozen=True)
class StepOutcome:
    """Decision record for one transaction."""

    alarm: bool
    distance: float
    threshold: float
    gain_applied: float


class _NeumaierSum:
    """Kahan-Babuska (Neumaier) compensated accumulator."""

    __slots__ = ("_s", "_c")

    def __init__(self, value: float = 0.0):
        self._s = float(value)
        self._c = 0.0

    def add(self, x: float) -> None:
        t = self._s + x
        if abs(self._s) >= abs(x):
            self._c += (self._s - t) + x
        else:
            self._c += (x - t) + self._s
        self._s = t

    @property
    def value(self) -> float:
        return self._s + self._c


class DiagnosticsTrace:
    """Running sums that back the detector's audit inequalities.

    ``sum_d_gamma_sq`` doubles for the squared-decision sum since the
    decisions are binary (d**2 == d).  ``w_norm_sq`` is the incrementally
    telescoped squared center norm; auditors compare it against both the
    accumulated sums and the recomputed ``w . w``.
    """

    __slots__ = ("_gg", "_g", "_gvw", "_wn")

    def __init__(self, sum_d_gamma_sq=0.0, sum_d_gamma=0.0, sum_d_gamma_vw=0.0,
                 w_norm_sq=0.0):
        self._gg = _NeumaierSum(sum_d_gamma_sq)
        self._g = _NeumaierSum(sum_d_gamma)
        self._gvw = _NeumaierSum(sum_d_gamma_vw)
        self._wn = _NeumaierSum(w_norm_sq)

    @property
    def sum_d_gamma_sq(self) -> float:
        return self._gg.value

    @property
    def sum_d_gamma(self) -> float:
        return self._g.value

    @property
    def sum_d_gamma_vw(self) -> float:
        return self._gvw.value

    @property
    def w_norm_sq(self) -> float:
        return self._wn.value

    def record_alarm(self, gain: float, vw: float) -> None:
        """Fold one alarm with gain ``gain`` and inner product v . w_prev."""
        self._gg.add(gain * gain)
        self._g.add(gain)
        self._gvw.add(gain * vw)
        self._wn.add(gain * gain + 2.0 * gain * vw)

    def as_tuple(self):
        return (self.sum_d_gamma_sq, self.sum_d_gamma,
                self.sum_d_gamma_vw, self.w_norm_sq)

    def __eq__(self, other):
        if not isinstance(other, DiagnosticsTrace):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()

    def __repr__(self):
        gg, g, gvw, wn = self.as_tuple()
        return (f"DiagnosticsTrace(sum_d_gamma_sq={gg!r}, sum_d_gamma={g!r}, "
                f"sum_d_gamma_vw={gvw!r}, w_norm_sq={wn!r})")


class Detector:
    """Online fault detector state machine.

    Single-writer: :meth:`step` must not run concurrently on one instance.
    Instances are self-contained and can be moved between threads or run
    in parallel on independent streams.
    """

    def __init__(self, dim: int, mode: DetectorMode, schedule: GainSchedule):
        if not isinstance(dim, (int, np.integer)) or dim < 1:
            raise ValueError("dim must be a positive integer")
        if not isinstance(mode, (FixedRadius, AdaptiveRadius)):
            raise ValueError(f"unknown detector mode: {mode!r}")
        if not isinstance(schedule, (PowerDecay, Constant)):
            raise ValueError(f"unknown gain schedule: {schedule!r}")
        self.dim = int(dim)
        self.mode = mode
        self.schedule = schedule
        self.w = np.zeros(self.dim, dtype=np.float64)
        self.m = 0
        self.t = 0
        self.trace = DiagnosticsTrace()

    def current_radius(self) -> float:
        """Active alarm threshold: epsilon, or the reciprocal pre-decision gain."""
        if isinstance(self.mode, FixedRadius):
            return self.mode.epsilon
        return 1.0 / gain_value(self.schedule, self.m + 1)

    def step(self, y) -> StepOutcome:
        """Judge one transaction and learn from it if it is flagged."""
        y = as_vector(y, dim=self.dim, name="transaction")
        diff = y - self.w
        distance = math.sqrt(float(diff @ diff))
        threshold = self.current_radius()
        alarm = distance >= threshold
        gain = 0.0
        if alarm:
            if isinstance(self.mode, AdaptiveRadius):
                gain = gain_value(self.schedule, self.m + 1)
                self.m += 1
            else:
                self.m += 1
                gain = gain_value(self.schedule, self.m)
            if distance > 0.0:
                v = diff / distance
                vw = float(v @ self.w)
                self.w += gain * v
                self.trace.record_alarm(gain, vw)
            else:
                # epsilon = 0 with a dead-center point: the alarm is counted
                # but the update direction is undefined, so none is applied.
                gain = 0.0
        self.t += 1
        return StepOutcome(alarm=alarm, distance=distance,
                           threshold=threshold, gain_applied=gain)

    def run_stream(self, stream: Iterable) -> List[StepOutcome]:
        """Apply :meth:`step` over a stream, annotating failures with the index."""
        outcomes: List[StepOutcome] = []
        for i, y in enumerate(stream):
            try:
                outcomes.append(self.step(y))
            except ValueError as exc:
                raise ValueError(f"stream item {i}: {exc}") from exc
        return outcomes

    def copy(self) -> "Detector":
        dup = Detector(self.dim, self.mode, self.schedule)
        dup.w = self.w.copy()
        dup.m = self.m
        dup.t = self.t
        dup.trace = DiagnosticsTrace(*self.trace.as_tuple())
        return dup

    def __repr__(self):
        return (f"Detector(dim={self.dim}, mode={self.mode!r}, "
                f"schedule={self.schedule!r}, m={self.m}, t={self.t})")


def new_detector(dim: int, mode: DetectorMode, schedule: GainSchedule) -> Detector:
    """Fresh detector with zero center, zero counts, and a zeroed trace."""
    return Detector(dim, mode, schedule)

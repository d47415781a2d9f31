"""Geometric period detection from the accumulated rotation |omega_v|."""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .config import DEFAULT_NOMINAL_HZ, HORIZON_FACTOR, MAX_INVALID_FRACTION
from .errors import InputError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


class PeriodStatus(str, Enum):
    FOUND = "found"
    NOT_FOUND = "not_found_within_horizon"
    INVALID_SAMPLES = "invalid_samples"


@dataclass(frozen=True)
class PeriodEstimate:
    t_start: float
    T: Optional[float]
    accumulated: float
    status: PeriodStatus

    @property
    def found(self):
        return self.status == PeriodStatus.FOUND

    @property
    def t_end(self):
        return self.t_start + self.T if self.found else None


class PeriodTracker:
    """Answers period queries on one omega trace.

    The cumulative rotation over valid samples is built once. Invalid samples
    are bridged by the trapezoid between their valid neighbours, so each query
    is a binary search.
    """

    def __init__(self, trace, nominal_hz=DEFAULT_NOMINAL_HZ, horizon_factor=HORIZON_FACTOR,
                 max_invalid_fraction=MAX_INVALID_FRACTION):
        self.trace = trace
        self.nominal_hz = nominal_hz
        self.horizon_factor = horizon_factor
        self.max_invalid_fraction = max_invalid_fraction
        self.last_period = None

        self.valid_index = np.flatnonzero(trace.valid)
        self.valid_time = trace.t0 + trace.dt * self.valid_index
        self.valid_magnitude = trace.magnitude()[self.valid_index]
        self.valid_omega = trace.omega[self.valid_index]
        self.cumulative = self._cumulate(self.valid_magnitude[:, None])[:, 0]
        self._vector_cumulative = None
        self._unit_cumulative = None
        self.invalid_count = np.concatenate([[0], np.cumsum(~trace.valid)])

    def _cumulate(self, values):
        if len(values) == 0:
            return np.zeros((0, values.shape[1]))
        steps = 0.5 * (values[1:] + values[:-1]) * np.diff(self.valid_time)[:, None]
        return np.vstack([np.zeros((1, values.shape[1])), np.cumsum(steps, axis=0)])

    @property
    def vector_cumulative(self):
        if self._vector_cumulative is None:
            self._vector_cumulative = self._cumulate(self.valid_omega)
        return self._vector_cumulative

    @property
    def unit_cumulative(self):
        if self._unit_cumulative is None:
            norms = self.valid_magnitude[:, None]
            units = np.divide(self.valid_omega, norms, out=np.zeros_like(self.valid_omega),
                              where=norms > 0)
            self._units = units
            self._unit_cumulative = self._cumulate(units)
        return self._unit_cumulative

    @property
    def nominal_period(self):
        return 1.0 / self.nominal_hz

    def default_horizon(self):
        base = self.last_period if self.last_period is not None else self.nominal_period
        return self.horizon_factor * base

    def _invalid_fraction(self, i0, i1):
        count = i1 - i0 + 1
        if count <= 0:
            return 0.0
        return (self.invalid_count[i1 + 1] - self.invalid_count[i0]) / count

    def detect(self, index, horizon=None):
        trace = self.trace
        n = len(trace)
        if not 0 <= index < n:
            raise InputError(f"anchor index {index} outside the trace (0..{n - 1})")
        if horizon is None:
            horizon = self.default_horizon()
        if not horizon > 0:
            raise InputError(f"horizon must be > 0, got {horizon}")
        t_start = trace.t0 + index * trace.dt
        i_last = min(n - 1, index + int(math.ceil(horizon / trace.dt - 1e-9)))
        t_limit = t_start + horizon

        first = int(np.searchsorted(self.valid_index, index, side="left"))
        last = int(np.searchsorted(self.valid_index, i_last, side="right")) - 1
        if first > last:
            return PeriodEstimate(t_start, None, 0.0, PeriodStatus.INVALID_SAMPLES)

        base = self.cumulative[first]
        target = base + TWO_PI
        k = int(np.searchsorted(self.cumulative[first:last + 1], target, side="left")) + first
        if k > last:
            accumulated = float(self.cumulative[last] - base)
            status = PeriodStatus.NOT_FOUND
            if self._invalid_fraction(index, i_last) > self.max_invalid_fraction:
                status = PeriodStatus.INVALID_SAMPLES
            return PeriodEstimate(t_start, None, accumulated, status)

        # linear in the cumulative integral, exact for the trapezoid
        c0, c1 = self.cumulative[k - 1], self.cumulative[k]
        t0, t1 = self.valid_time[k - 1], self.valid_time[k]
        fraction = (target - c0) / (c1 - c0) if c1 > c0 else 1.0
        t_cross = t0 + fraction * (t1 - t0)
        period = t_cross - t_start
        if t_cross > t_limit + 1e-12:
            return PeriodEstimate(t_start, None, float(c0 - base), PeriodStatus.NOT_FOUND)

        i_cross = self.valid_index[k]
        if self._invalid_fraction(index, i_cross) > self.max_invalid_fraction or period < 2 * trace.dt:
            return PeriodEstimate(t_start, None, TWO_PI, PeriodStatus.INVALID_SAMPLES)
        self.last_period = period
        return PeriodEstimate(t_start, float(period), TWO_PI, PeriodStatus.FOUND)

    def _integrate(self, cumulative, values, estimate):
        """Trapezoidal integral over [t_start, t_start + T] on valid samples.

        The integrand at the fractional endpoint is linearly interpolated.
        """
        if not estimate.found:
            raise InputError(f"period {estimate.status.value}, nothing to integrate")
        index = self.trace.index_of(estimate.t_start)
        first = int(np.searchsorted(self.valid_index, index, side="left"))
        t_end = estimate.t_start + estimate.T
        k = int(np.searchsorted(self.valid_time, t_end - 1e-12, side="left"))
        if k >= len(self.valid_time):
            raise InputError("trace does not cover the period window")
        if k <= first:
            return np.zeros(values.shape[1])
        t0, t1 = self.valid_time[k - 1], self.valid_time[k]
        fraction = min(max((t_end - t0) / (t1 - t0), 0.0), 1.0)
        y0 = values[k - 1]
        y_end = y0 + fraction * (values[k] - y0)
        partial = 0.5 * (y0 + y_end) * (fraction * (t1 - t0))
        return cumulative[k - 1] - cumulative[first] + partial

    def integrate_magnitude(self, estimate):
        return float(self._integrate(self.cumulative[:, None], self.valid_magnitude[:, None], estimate)[0])

    def integrate_vector(self, estimate):
        return self._integrate(self.vector_cumulative, self.valid_omega, estimate)

    def integrate_unit(self, estimate):
        cumulative = self.unit_cumulative
        return self._integrate(cumulative, self._units, estimate)

    def track(self, stride=1):
        if stride < 1:
            raise InputError(f"stride must be >= 1, got {stride}")
        estimates = [self.detect(i) for i in range(0, len(self.trace), stride)]
        found = sum(1 for e in estimates if e.found)
        logger.info("period track: %d anchors, %d periods found", len(estimates), found)
        return estimates


def detect_period(omega_trace, t_start, horizon):
    """First time the accumulated |omega_v| from ``t_start`` reaches 2 pi."""
    if len(omega_trace) == 0 or not (
            omega_trace.t0 - omega_trace.dt / 2 <= t_start <= omega_trace.t_end + omega_trace.dt / 2):
        raise InputError(f"t_start={t_start} outside the trace")
    tracker = PeriodTracker(omega_trace)
    return tracker.detect(omega_trace.index_of(t_start), horizon)


def period_track(omega_trace, stride=1, nominal_hz=DEFAULT_NOMINAL_HZ):
    """Detect a period at every ``stride``-th sample.

    The horizon is four times the last period found (four nominal periods
    until the first one).
    """
    return PeriodTracker(omega_trace, nominal_hz=nominal_hz).track(stride)


def integrate_magnitude(omega_trace, estimate):
    """Re-integrate |omega_v| over a found period (trapezoid, interpolated end)."""
    return PeriodTracker(omega_trace).integrate_magnitude(estimate)

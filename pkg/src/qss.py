"""Quasi-steady-state frequency: the geometric frequency averaged over one detected period."""
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np

from .circulation import CirculationGate, CirculationVerdict
from .config import QssConfig
from .diffgeo import omega_v
from .period import PeriodEstimate, PeriodTracker

logger = logging.getLogger(__name__)

GAMMA_AXIS = np.array([0.0, 0.0, 1.0])


class QssMethod(str, Enum):
    VECTOR = "vector_average"
    STATIC = "static_frame"


@dataclass(frozen=True)
class QssEstimate:
    t: float
    omega_qss: np.ndarray
    f_qss: float
    T: float
    method: QssMethod


def _estimate(t, omega, period, method):
    omega = np.asarray(omega, dtype=float)
    return QssEstimate(t, omega, float(np.linalg.norm(omega) / (2.0 * math.pi)), period, method)


def qss_vector(omega_trace, period_estimate, tracker=None):
    """Trapezoidal mean of omega_v over [t_start, t_start + T].

    Returns None where the period was not found: the frequency is undefined there.
    """
    if not period_estimate.found:
        return None
    tracker = tracker or PeriodTracker(omega_trace)
    mean = tracker.integrate_vector(period_estimate) / period_estimate.T
    return _estimate(period_estimate.t_start, mean, period_estimate.T, QssMethod.VECTOR)


def qss_static(period_estimate, omega_trace=None, tracker=None):
    """2 pi / T along the mean rotation axis of the window (+gamma without a trace)."""
    if not period_estimate.found:
        return None
    direction = GAMMA_AXIS
    if tracker is None and omega_trace is not None:
        tracker = PeriodTracker(omega_trace)
    if tracker is not None:
        axis = tracker.integrate_unit(period_estimate)
        norm = np.linalg.norm(axis)
        if norm > 0:
            direction = axis / norm
    magnitude = 2.0 * math.pi / period_estimate.T
    return _estimate(period_estimate.t_start, magnitude * direction, period_estimate.T, QssMethod.STATIC)


@dataclass(frozen=True)
class StreamPoint:
    t: float
    period: PeriodEstimate
    qss: Optional[QssEstimate]
    static: Optional[QssEstimate]
    verdict: CirculationVerdict

    @property
    def found(self):
        return self.period.found


class QssStream:
    """Mobile-window QSS estimation over one series.

    Anchors advance by ``config.stride`` samples; every anchor yields a
    StreamPoint, with empty estimates where no period closes in the horizon.
    """

    def __init__(self, series, config=None, omega_trace=None):
        self.config = config or QssConfig()
        self.trace = omega_trace if omega_trace is not None else omega_v(
            series, self.config.v_floor, self.config.jump_factor)
        self.tracker = PeriodTracker(
            self.trace,
            nominal_hz=self.config.nominal_hz,
            horizon_factor=self.config.horizon_factor,
            max_invalid_fraction=self.config.max_invalid_fraction,
        )
        self.gate = CirculationGate(series, self.config.epsilon, self.trace)

    def anchors(self):
        return range(0, len(self.trace), self.config.stride)

    def point(self, index):
        period = self.tracker.detect(index)
        qss = qss_vector(self.trace, period, self.tracker)
        static = qss_static(period, tracker=self.tracker)
        return StreamPoint(period.t_start, period, qss, static, self.gate.verdict(period))

    def __iter__(self):
        found = 0
        total = 0
        for index in self.anchors():
            point = self.point(index)
            total += 1
            found += point.found
            yield point
        logger.info("qss stream: %d anchors, %d with a period", total, found)


def qss_stream(series, stride=None, config=None):
    """(QssEstimate, CirculationVerdict) for every anchor whose period was found."""
    config = config or QssConfig()
    if stride is not None and stride != config.stride:
        config = replace(config, stride=stride)
    return [(p.qss, p.verdict) for p in QssStream(series, config) if p.found]

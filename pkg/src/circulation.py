"""Rate of change of circulation over a detected period and the validity gate built on it."""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .config import EPSILON_CLEAN
from .diffgeo import derivative
from .errors import InputError
from .frames import to_alphabeta
from .period import PeriodEstimate, PeriodStatus

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CirculationVerdict:
    t: float
    gamma_prime: Optional[float]
    epsilon: float
    valid: bool
    period_status: PeriodStatus
    bridged: bool = False   # the window spans samples where omega_v is undefined

    @property
    def exceeded(self):
        """1 when the QSS estimate has no physical meaning at this anchor."""
        return 0 if self.valid else 1


class CirculationGate:
    """Evaluates Gamma' for any number of periods of one series.

    |v|^2 is computed once; each verdict interpolates it at the period end.
    With an omega trace, windows that bridge invalid samples (discontinuities,
    voltage below the floor) are rejected even when Gamma' is small: a phase
    jump keeps |v| but corrupts the detected period.
    """

    def __init__(self, series, epsilon=EPSILON_CLEAN, omega_trace=None):
        if not epsilon > 0:
            raise InputError(f"epsilon must be > 0, got {epsilon}")
        self.series = to_alphabeta(series)
        self.epsilon = epsilon
        self.squared = self.series.magnitude() ** 2
        self.invalid_count = None
        if omega_trace is not None:
            self.invalid_count = np.concatenate([[0], np.cumsum(~omega_trace.valid)])

    def squared_at(self, t):
        """|v(t)|^2, linear between the two neighbouring samples."""
        series = self.series
        position = (t - series.t0) / series.dt
        n = len(self.squared)
        if position < -1e-9 or position > n - 1 + 1e-9:
            raise InputError(f"t={t} outside the series [{series.t0}, {series.t_end}]")
        position = min(max(position, 0.0), n - 1.0)
        i0 = int(np.floor(position))
        i1 = min(i0 + 1, n - 1)
        fraction = position - i0
        return float(self.squared[i0] + fraction * (self.squared[i1] - self.squared[i0]))

    def bridges_invalid(self, estimate):
        if self.invalid_count is None:
            return False
        series = self.series
        i0 = series.index_of(estimate.t_start)
        i1 = min(int(np.ceil((estimate.t_end - series.t0) / series.dt - 1e-9)), len(self.invalid_count) - 2)
        return bool(self.invalid_count[i1 + 1] - self.invalid_count[i0] > 0)

    def verdict(self, estimate, epsilon=None):
        epsilon = self.epsilon if epsilon is None else epsilon
        if not estimate.found:
            return CirculationVerdict(estimate.t_start, None, epsilon, False, estimate.status)
        start = self.squared[self.series.index_of(estimate.t_start)]
        value = self.squared_at(estimate.t_end) - float(start)
        bridged = self.bridges_invalid(estimate)
        valid = abs(value) <= epsilon and not bridged
        return CirculationVerdict(estimate.t_start, value, epsilon, valid, estimate.status, bridged)


def gamma_prime(series, period_estimate, epsilon=EPSILON_CLEAN):
    """|v(t+T)|^2 - |v(t)|^2 over the detected period, gated at ``epsilon``."""
    return CirculationGate(series, epsilon).verdict(period_estimate)


def gamma_prime_integral(series, period_estimate):
    """Gamma' as the trapezoidal integral of d|v|^2/dt = 2 v.v' over the period.

    Kept as a quadrature cross-check of the endpoint difference.
    """
    if not period_estimate.found:
        raise InputError(f"period {period_estimate.status.value}, nothing to integrate")
    series = to_alphabeta(series)
    rate = 2.0 * np.sum(series.data * derivative(series).data, axis=1)
    cumulative = cumulative_trapezoid(rate, dx=series.dt, initial=0.0)
    start = series.index_of(period_estimate.t_start)
    end = (period_estimate.t_end - series.t0) / series.dt
    if end > len(series) - 1 + 1e-9:
        raise InputError("series does not cover the period window")
    return float(np.interp(end, np.arange(len(series)), cumulative) - cumulative[start])


def _as_period(item):
    if isinstance(item, PeriodEstimate):
        return item
    period = getattr(item, "period", None)
    if period is not None:
        return period
    # (QssEstimate, CirculationVerdict) pairs from qss_stream
    estimate = item[0]
    return PeriodEstimate(estimate.t, estimate.T, 2.0 * np.pi, PeriodStatus.FOUND)


def validity_trace(series, stream, epsilon=EPSILON_CLEAN, omega_trace=None):
    """Re-gate every anchor of a QSS stream at a new ``epsilon``."""
    gate = CirculationGate(series, epsilon, omega_trace)
    verdicts = [gate.verdict(_as_period(item)) for item in stream]
    logger.info("validity trace: %d anchors, %d invalid at epsilon=%g",
                len(verdicts), sum(1 for v in verdicts if not v.valid), epsilon)
    return verdicts


def exceedance_flags(verdicts):
    """Integer channel with 1 where the anchor is invalid for any reason."""
    return np.array([v.exceeded for v in verdicts], dtype=int)


@dataclass
class ValiditySummary:
    total: int = 0
    valid: int = 0
    exceeded: int = 0
    bridged: int = 0
    not_found: int = 0
    max_abs_gamma_prime: Optional[float] = None
    invalid_intervals: list = field(default_factory=list)

    @property
    def invalid(self):
        return self.exceeded + self.bridged + self.not_found


def summarize(verdicts):
    """Counts plus the [first, last] anchor times of every invalid run."""
    summary = ValiditySummary(total=len(verdicts))
    run_start = run_end = None
    for verdict in verdicts:
        if verdict.gamma_prime is not None:
            magnitude = abs(verdict.gamma_prime)
            if summary.max_abs_gamma_prime is None or magnitude > summary.max_abs_gamma_prime:
                summary.max_abs_gamma_prime = magnitude
        if verdict.valid:
            summary.valid += 1
            if run_start is not None:
                summary.invalid_intervals.append((run_start, run_end))
                run_start = None
            continue
        if verdict.period_status != PeriodStatus.FOUND:
            summary.not_found += 1
        elif abs(verdict.gamma_prime) > verdict.epsilon:
            summary.exceeded += 1
        else:
            summary.bridged += 1
        if run_start is None:
            run_start = verdict.t
        run_end = verdict.t
    if run_start is not None:
        summary.invalid_intervals.append((run_start, run_end))
    return summary

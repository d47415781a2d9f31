"""Epitrochoid taxonomy of fundamental-plus-one-harmonic trajectories.

V e^{j theta} + V_h e^{j h theta} is an epitrochoid with rolling radius V/h,
fixed radius V(1 - 1/h) and pen distance V_h. Inner loops, and with them
crunodes, appear once the pen sits outside the rolling circle.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InputError
from .frames import to_alphabeta

logger = logging.getLogger(__name__)

MIN_POINTS = 4


class TrajectoryKind(str, Enum):
    CURTATE = "curtate"
    EPICYCLOID = "epicycloid"
    PROLATE = "prolate"


@dataclass(frozen=True)
class EpitrochoidParams:
    d: float
    r: float
    R: float
    h: int
    n_critical: int


@dataclass(frozen=True)
class TrajectoryClass:
    kind: TrajectoryKind
    crunodes_expected: bool
    critical_angles: tuple


def _integer_order(order):
    if float(order) != int(order) or order < 2:
        raise InputError(f"trajectory taxonomy needs an integer harmonic order >= 2, got {order}")
    return int(order)


def epitrochoid_params(v, order, v_h):
    h = _integer_order(order)
    if not v > 0:
        raise InputError(f"fundamental amplitude must be > 0, got {v}")
    if v_h < 0:
        raise InputError(f"harmonic amplitude must be >= 0, got {v_h}")
    return EpitrochoidParams(d=v_h, r=v / h, R=v * (1.0 - 1.0 / h), h=h, n_critical=h - 1)


def classify(v, spec):
    """Curtate, epicycloid or prolate from V_h / V against 1 / h (ties are epicycloids)."""
    params = epitrochoid_params(v, spec.order, spec.amplitude)
    ratio = params.d / v
    bound = 1.0 / params.h
    if math.isclose(ratio, bound, rel_tol=1e-12, abs_tol=1e-15):
        kind = TrajectoryKind.EPICYCLOID
    elif ratio > bound:
        kind = TrajectoryKind.PROLATE
    else:
        kind = TrajectoryKind.CURTATE
    angles = tuple(2.0 * n * math.pi / (params.h - 1) for n in range(params.h - 1))
    verdict = TrajectoryClass(kind, kind == TrajectoryKind.PROLATE, angles)
    logger.debug("h=%d V_h/V=%g -> %s", params.h, ratio, kind.value)
    return params, verdict


def crunode_threshold_order(ratio):
    """Smallest integer order h whose loop threshold 1/h the ratio reaches.

    At ratio == 1/h the trajectory is the epicycloid cusp limit and has no
    crunodes; every higher order has ratio > 1/h and forms loops.
    """
    if not 0 < ratio:
        raise InputError(f"amplitude ratio must be > 0, got {ratio}")
    return max(2, math.ceil(1.0 / ratio - 1e-9))


def one_period_points(series, t_start, period):
    """(v_alpha, v_beta) samples of one period, without the closing duplicate."""
    series = to_alphabeta(series)
    i0 = series.index_of(t_start)
    count = int(round(period / series.dt))
    if i0 < 0 or i0 + count > len(series):
        raise InputError(f"period [{t_start}, {t_start + period}] not covered by the series")
    return series.window(i0, i0 + count).data[:, :2]


def _orientation(a, b, c):
    return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])


def count_self_intersections(points):
    """Proper crossings between non-adjacent edges of the closed polyline through ``points``.

    Edges are swept in order of their left end, so each edge is only tested
    against edges that overlap it in x.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise InputError(f"expected an (M, 2) array of points, got shape {points.shape}")
    m = len(points)
    if m < MIN_POINTS:
        raise InputError(f"self-intersection test needs at least {MIN_POINTS} points, got {m}")
    start = points
    end = np.roll(points, -1, axis=0)
    x_min = np.minimum(start[:, 0], end[:, 0])
    x_max = np.maximum(start[:, 0], end[:, 0])
    order = np.argsort(x_min, kind="stable")
    x_sorted = x_min[order]

    crossings = 0
    for position, i in enumerate(order):
        stop = int(np.searchsorted(x_sorted, x_max[i], side="right"))
        if stop <= position + 1:
            continue
        j = order[position + 1:stop]
        gap = np.abs(j - i)
        j = j[(gap > 1) & (gap < m - 1)]
        if len(j) == 0:
            continue
        a, b = start[i], end[i]
        c, d = start[j], end[j]
        d1 = _orientation(a, b, c)
        d2 = _orientation(a, b, d)
        d3 = _orientation(c, d, a)
        d4 = _orientation(c, d, b)
        crossings += int(np.count_nonzero((d1 * d2 < 0) & (d3 * d4 < 0)))
    return crossings


def detect_self_intersection(series_2d, one_period=None):
    """True iff one period of the trajectory crosses itself.

    ``series_2d`` is either a series with ``one_period`` a found PeriodEstimate,
    or an (M, 2) array already holding one period.
    """
    if one_period is None:
        points = series_2d
    else:
        if not one_period.found:
            raise InputError(f"period {one_period.status.value}, no trajectory to test")
        points = one_period_points(series_2d, one_period.t_start, one_period.T)
    return count_self_intersections(points) > 0

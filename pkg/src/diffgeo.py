"""Differential geometry of sampled voltage trajectories.

The voltage vector is read as the velocity of the flux curve, so the
geometric frequency is (v x v') / |v|^2, the arc length integrates |v|
and the curvature is |v x v'| / |v|^3.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .config import DEFAULT_JUMP_FACTOR, DEFAULT_V_FLOOR
from .errors import SeriesError
from .frames import to_alphabeta

logger = logging.getLogger(__name__)

MIN_DERIVATIVE_SAMPLES = 5


@dataclass(frozen=True)
class OmegaSample:
    t: float
    omega: np.ndarray
    v_mag: float
    valid: bool

    @property
    def magnitude(self):
        return float(np.linalg.norm(self.omega)) if self.valid else float("nan")


@dataclass(frozen=True, eq=False)
class OmegaTrace:
    """Geometric frequency of every sample, stored column-wise.

    Invalid samples carry NaN in ``omega``.
    """
    t0: float
    dt: float
    omega: np.ndarray
    v_mag: np.ndarray
    valid: np.ndarray

    def __len__(self):
        return len(self.v_mag)

    def __getitem__(self, i):
        return OmegaSample(self.t0 + i * self.dt, self.omega[i], float(self.v_mag[i]), bool(self.valid[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def t(self):
        return self.t0 + self.dt * np.arange(len(self))

    @property
    def t_end(self):
        return self.t0 + (len(self) - 1) * self.dt

    def magnitude(self):
        return np.linalg.norm(self.omega, axis=1)

    def frequency_hz(self):
        return self.magnitude() / (2.0 * np.pi)

    def index_of(self, t):
        return int(round((t - self.t0) / self.dt))


@dataclass(frozen=True, eq=False)
class GeometryTrace:
    omega: OmegaTrace
    arc_length: np.ndarray
    curvature: np.ndarray


def derivative(series):
    """Five-point central differences inside, second-order one-sided at the edges."""
    n = len(series)
    if n < MIN_DERIVATIVE_SAMPLES:
        raise SeriesError(f"derivative needs at least {MIN_DERIVATIVE_SAMPLES} samples, got {n}")
    f = series.data
    h = series.dt
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
    d[1] = (-3.0 * f[1] + 4.0 * f[2] - f[3]) / (2.0 * h)
    d[-2] = (3.0 * f[-2] - 4.0 * f[-3] + f[-4]) / (2.0 * h)
    d[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * h)
    return series.with_data(d)


def jump_mask(series, factor=DEFAULT_JUMP_FACTOR):
    """Samples whose stencil straddles a discontinuity.

    A step between samples k and k+1 counts as a discontinuity when it is
    larger than ``factor`` times the median step.
    """
    n = len(series)
    mask = np.zeros(n, dtype=bool)
    if factor is None or n < 2:
        return mask
    steps = np.linalg.norm(np.diff(series.data, axis=0), axis=1)
    median = float(np.median(steps))
    # a piecewise-constant series has a zero median step, so any step is a jump
    jumps = np.flatnonzero(steps > factor * median) if median > 0 else np.flatnonzero(steps > 0)
    for offset in (-1, 0, 1, 2):
        mask[np.clip(jumps + offset, 0, n - 1)] = True
    if len(jumps):
        logger.debug("%d discontinuities flagged", len(jumps))
    return mask


def _cross_terms(series, v_floor, jump_factor):
    series = to_alphabeta(series)
    v = series.data
    dv = derivative(series).data
    cross = np.cross(v, dv)
    v_mag = np.linalg.norm(v, axis=1)
    valid = (v_mag >= v_floor) & (v_mag > 0) & ~jump_mask(series, jump_factor)
    return series, cross, v_mag, valid


def omega_v(series, v_floor=DEFAULT_V_FLOOR, jump_factor=DEFAULT_JUMP_FACTOR):
    """Instantaneous geometric frequency (rad/s) of every sample."""
    series, cross, v_mag, valid = _cross_terms(series, v_floor, jump_factor)
    omega = np.full_like(cross, np.nan)
    omega[valid] = cross[valid] / (v_mag[valid] ** 2)[:, None]
    invalid = int(np.count_nonzero(~valid))
    if invalid:
        logger.debug("omega_v: %d of %d samples invalid", invalid, len(series))
    return OmegaTrace(series.t0, series.dt, omega, v_mag, valid)


def arc_length(series):
    """Cumulative trapezoidal integral of |v|, starting at 0."""
    magnitude = series.magnitude()
    if len(magnitude) == 0:
        return magnitude
    return cumulative_trapezoid(magnitude, dx=series.dt, initial=0.0)


def curvature(series, v_floor=DEFAULT_V_FLOOR, jump_factor=DEFAULT_JUMP_FACTOR):
    """|v x v'| / |v|^3 per sample; NaN where the sample is invalid."""
    _, cross, v_mag, valid = _cross_terms(series, v_floor, jump_factor)
    kappa = np.full(len(v_mag), np.nan)
    kappa[valid] = np.linalg.norm(cross[valid], axis=1) / v_mag[valid] ** 3
    return kappa


def geometry(series, v_floor=DEFAULT_V_FLOOR, jump_factor=DEFAULT_JUMP_FACTOR):
    return GeometryTrace(
        omega=omega_v(series, v_floor, jump_factor),
        arc_length=arc_length(series),
        curvature=curvature(series, v_floor, jump_factor),
    )

"""abc <-> alpha-beta-gamma conversion (amplitude-invariant Clarke transform)."""
import math
from dataclasses import dataclass

import numpy as np

from .errors import SeriesError
from .series import ABC_CHANNELS, ALPHABETA_CHANNELS, UniformSeries

_SQRT3 = math.sqrt(3.0)

# Rows produce (alpha, beta, gamma) from (a, b, c).
_CLARKE = np.array([
    [2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0],
    [0.0, 1.0 / _SQRT3, -1.0 / _SQRT3],
    [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
])
_INVERSE_CLARKE = np.linalg.inv(_CLARKE)


@dataclass(frozen=True)
class ThreePhaseFrame:
    t: float
    va: float
    vb: float
    vc: float

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.t, self.va, self.vb, self.vc)):
            raise ValueError(f"non-finite three-phase sample {self}")


@dataclass(frozen=True)
class AlphaBetaVector:
    v_alpha: float
    v_beta: float
    v_gamma: float

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.v_alpha, self.v_beta, self.v_gamma)):
            raise ValueError(f"non-finite alpha-beta-gamma vector {self}")

    @property
    def magnitude(self):
        return math.sqrt(self.v_alpha ** 2 + self.v_beta ** 2 + self.v_gamma ** 2)

    def as_array(self):
        return np.array([self.v_alpha, self.v_beta, self.v_gamma])


def clarke_matrix():
    return _CLARKE.copy()


def clarke(frame):
    va, vb, vc = frame.va, frame.vb, frame.vc
    return AlphaBetaVector(
        v_alpha=(2.0 / 3.0) * (va - vb / 2.0 - vc / 2.0),
        v_beta=(vb - vc) / _SQRT3,
        v_gamma=(va + vb + vc) / 3.0,
    )


def inverse_clarke(vector, t=0.0):
    va, vb, vc = _INVERSE_CLARKE @ vector.as_array()
    return ThreePhaseFrame(t, float(va), float(vb), float(vc))


def clarke_series(series):
    """Apply :func:`clarke` to every sample; time base and length are kept."""
    if len(series.names) != 3:
        raise SeriesError(f"Clarke transform needs 3 phase channels, got {len(series.names)}")
    return UniformSeries(series.t0, series.dt, ALPHABETA_CHANNELS, series.data @ _CLARKE.T)


def inverse_clarke_series(series):
    if len(series.names) != 3:
        raise SeriesError(f"inverse Clarke transform needs 3 channels, got {len(series.names)}")
    return UniformSeries(series.t0, series.dt, ABC_CHANNELS, series.data @ _INVERSE_CLARKE.T)


def to_alphabeta(series):
    """Route a series into the stationary frame according to its channel names."""
    if series.is_frame(ALPHABETA_CHANNELS):
        return series
    if series.is_frame(ABC_CHANNELS):
        return clarke_series(series)
    if series.names == ALPHABETA_CHANNELS[:2]:
        padded = np.column_stack([series.data, np.zeros(len(series))])
        return UniformSeries(series.t0, series.dt, ALPHABETA_CHANNELS, padded)
    raise SeriesError(f"cannot interpret channels {series.names} as abc or alpha-beta")

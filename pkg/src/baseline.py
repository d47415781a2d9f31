"""Synchronous-reference-frame PLL and the first-order low-pass used on frequency traces."""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import butter, lfilter, lfilter_zi

from .config import DEFAULT_NOMINAL_HZ, DEFAULT_PLL_CUTOFF_HZ, DEFAULT_PLL_KI, DEFAULT_PLL_KP
from .errors import InputError
from .frames import to_alphabeta
from .series import UniformSeries

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PllConfig:
    kp: float = DEFAULT_PLL_KP
    ki: float = DEFAULT_PLL_KI
    omega_nominal: float = 2.0 * math.pi * DEFAULT_NOMINAL_HZ
    lp_cutoff: float = DEFAULT_PLL_CUTOFF_HZ

    def __post_init__(self):
        if not (self.kp > 0 and self.ki > 0):
            raise InputError(f"PLL gains must be > 0, got kp={self.kp}, ki={self.ki}")
        if not self.omega_nominal > 0:
            raise InputError(f"nominal angular frequency must be > 0, got {self.omega_nominal}")
        if not self.lp_cutoff > 0:
            raise InputError(f"low-pass cutoff must be > 0, got {self.lp_cutoff}")


class SrfPll:
    """PI loop driving the q-axis voltage of the rotating frame to zero."""

    def __init__(self, config=None):
        self.config = config or PllConfig()
        self.theta = None
        self.integrator = 0.0
        self.omega = self.config.omega_nominal

    def reset(self, v_alpha, v_beta):
        self.theta = math.atan2(v_beta, v_alpha)
        self.integrator = 0.0
        self.omega = self.config.omega_nominal

    def step(self, v_alpha, v_beta, dt):
        """Advance one sample and return the angular frequency estimate (rad/s)."""
        if self.theta is None:
            self.reset(v_alpha, v_beta)
        v_q = -v_alpha * math.sin(self.theta) + v_beta * math.cos(self.theta)
        self.integrator += self.config.ki * v_q * dt
        self.omega = self.config.omega_nominal + self.config.kp * v_q + self.integrator
        self.theta += self.omega * dt
        return self.omega


def lowpass(series, cutoff):
    """Causal first-order Butterworth low-pass, started at rest on the first sample."""
    nyquist = 0.5 / series.dt
    if not 0 < cutoff < nyquist:
        raise InputError(f"cutoff must be within (0, {nyquist:g}) Hz, got {cutoff}")
    if len(series) == 0:
        return series
    b, a = butter(1, cutoff, btype="low", fs=1.0 / series.dt)
    zi = lfilter_zi(b, a)[:, None] * series.data[0][None, :]
    filtered, _ = lfilter(b, a, series.data, axis=0, zi=zi)
    return series.with_data(filtered)


def pll_track(series, config=None, filtered=True):
    """PLL frequency (Hz) of every sample, low-passed at ``config.lp_cutoff`` unless ``filtered`` is off."""
    config = config or PllConfig()
    series = to_alphabeta(series)
    pll = SrfPll(config)
    omega = np.empty(len(series))
    for k, (v_alpha, v_beta) in enumerate(series.data[:, :2]):
        omega[k] = pll.step(float(v_alpha), float(v_beta), series.dt)
    frequency = UniformSeries(series.t0, series.dt, ("f_pll",), omega / (2.0 * math.pi))
    logger.info("pll: %d samples tracked", len(series))
    if filtered and len(series):
        frequency = lowpass(frequency, config.lp_cutoff)
    return frequency

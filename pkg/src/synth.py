"""Analytical and case-study waveform generators (alpha-beta-gamma frame, per unit)."""
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from .config import COARSE_DT, DEFAULT_DT, DEFAULT_NOMINAL_HZ, FAULT_TAU
from .errors import InputError, SeriesError
from .series import ALPHABETA_CHANNELS, UniformSeries

logger = logging.getLogger(__name__)

NOMINAL_OMEGA = 2.0 * math.pi * DEFAULT_NOMINAL_HZ
_TIME_TOL = 1e-9


class EventKind(str, Enum):
    DIP = "dip"                 # value: removed fraction of the amplitude
    PHASE_JUMP = "phase_jump"   # value: radians
    RAMP = "ramp"               # value: Hz/s
    STEP = "freq_step"          # value: Hz


@dataclass(frozen=True)
class Event:
    kind: EventKind
    start: float
    end: Optional[float]   # None: until the end of the series
    value: float
    tau: Optional[float] = None   # dip only: fault transient time constant (s)

    def __post_init__(self):
        if self.end is not None and not self.end > self.start:
            raise InputError(f"{self.kind.value} event must end after it starts "
                             f"({self.start} >= {self.end})")
        if self.kind == EventKind.DIP and not 0.0 <= self.value <= 1.0:
            raise InputError(f"dip depth must be within [0, 1], got {self.value}")
        if self.tau is not None:
            if self.kind != EventKind.DIP:
                raise InputError(f"only dips take a transient time constant, not {self.kind.value}")
            if not self.tau > 0:
                raise InputError(f"dip time constant must be > 0, got {self.tau}")


@dataclass(frozen=True)
class HarmonicSpec:
    order: float
    amplitude: float
    phase: float = 0.0
    sequence: int = 1

    def __post_init__(self):
        if not self.order > 0:
            raise InputError(f"harmonic order must be > 0, got {self.order}")
        if self.amplitude < 0:
            raise InputError(f"harmonic amplitude must be >= 0, got {self.amplitude}")
        if self.sequence not in (1, -1):
            raise InputError(f"harmonic sequence must be +1 or -1, got {self.sequence}")


@dataclass(frozen=True)
class SignalSpec:
    amplitude: float = 1.0
    omega: float = NOMINAL_OMEGA
    phase: float = 0.0
    unbalance: float = 1.0
    harmonics: tuple = ()
    noise_std: float = 0.0
    events: tuple = ()
    dc: Optional[tuple] = None

    def __post_init__(self):
        if not self.amplitude > 0:
            raise InputError(f"fundamental amplitude must be > 0, got {self.amplitude}")
        if not self.omega > 0:
            raise InputError(f"fundamental angular frequency must be > 0, got {self.omega}")
        if not self.unbalance > 0:
            raise InputError(f"unbalance ratio must be > 0, got {self.unbalance}")
        if self.noise_std < 0:
            raise InputError(f"noise standard deviation must be >= 0, got {self.noise_std}")
        object.__setattr__(self, "harmonics", tuple(self.harmonics))
        object.__setattr__(self, "events", tuple(self.events))

    @property
    def frequency(self):
        return self.omega / (2.0 * math.pi)

    @property
    def peak(self):
        """Upper bound of |v| for the noise-free, event-free waveform."""
        if self.dc is not None:
            return math.sqrt(sum(x * x for x in self.dc))
        fundamental = self.amplitude * max(self.unbalance, 1.0)
        return fundamental + sum(h.amplitude for h in self.harmonics)


@dataclass
class GeneratorDocument:
    """A signal spec plus the sampling choices needed to realise it."""
    spec: SignalSpec = field(default_factory=SignalSpec)
    span: float = 0.2
    dt: float = DEFAULT_DT
    seed: Optional[int] = None
    preset: Optional[str] = None
    frame: str = "alphabeta"


def _time_axis(span, dt, t0=0.0):
    if not (dt > 0 and math.isfinite(dt)):
        raise SeriesError(f"time step must be > 0, got {dt}")
    if not (span > 0 and math.isfinite(span)):
        raise SeriesError(f"span must be > 0, got {span}")
    n = int(math.floor(span / dt + 1e-9)) + 1
    return t0 + dt * np.arange(n)


def _build(t, dt, alpha, beta, gamma=None):
    if gamma is None:
        gamma = np.zeros_like(t)
    return UniformSeries(float(t[0]), dt, ALPHABETA_CHANNELS, np.column_stack([alpha, beta, gamma]))


def synth_balanced(spec, span, dt=DEFAULT_DT):
    if spec.unbalance != 1.0 or spec.harmonics:
        raise InputError("balanced generator needs unbalance = 1 and no harmonics")
    t = _time_axis(span, dt)
    theta = spec.omega * t + spec.phase
    return _build(t, dt, spec.amplitude * np.cos(theta), spec.amplitude * np.sin(theta))


def synth_unbalanced(spec, span, dt=DEFAULT_DT):
    if spec.harmonics:
        raise InputError("unbalanced generator does not take harmonics, use synth_harmonic")
    t = _time_axis(span, dt)
    theta = spec.omega * t + spec.phase
    v_alpha = spec.unbalance * spec.amplitude
    return _build(t, dt, v_alpha * np.cos(theta), spec.amplitude * np.sin(theta))


def synth_harmonic(spec, span, dt=DEFAULT_DT):
    """Fundamental plus each harmonic superposed on alpha and beta.

    A negative-sequence harmonic rotates against the fundamental.
    """
    if not spec.harmonics:
        raise InputError("harmonic generator needs at least one harmonic")
    t = _time_axis(span, dt)
    theta = spec.omega * t + spec.phase
    alpha = spec.unbalance * spec.amplitude * np.cos(theta)
    beta = spec.amplitude * np.sin(theta)
    for harmonic in spec.harmonics:
        theta_h = harmonic.order * spec.omega * t + harmonic.phase
        alpha = alpha + harmonic.amplitude * np.cos(theta_h)
        beta = beta + harmonic.sequence * harmonic.amplitude * np.sin(theta_h)
    return _build(t, dt, alpha, beta)


def synth_dc(level, span, dt=DEFAULT_DT):
    t = _time_axis(span, dt)
    level = np.asarray(level, dtype=float)
    if level.shape != (3,):
        raise InputError(f"DC level needs 3 components, got {level.shape}")
    return UniformSeries(0.0, dt, ALPHABETA_CHANNELS, np.tile(level, (len(t), 1)))


def _check_events(events, t0, t_end):
    by_kind = {}
    for event in events:
        end = t_end if event.end is None else event.end
        if event.start < t0 - _TIME_TOL or end > t_end + _TIME_TOL:
            raise InputError(f"{event.kind.value} event [{event.start}, {end}] outside the series "
                             f"span [{t0}, {t_end}]")
        by_kind.setdefault(event.kind, []).append((event.start, end))
    for kind, windows in by_kind.items():
        windows.sort()
        for (_, prev_end), (start, _) in zip(windows, windows[1:]):
            if start < prev_end:
                raise InputError(f"overlapping {kind.value} events at t={start}")


def _window_end(event, t, open_end):
    if event.end is None or event.end >= t[-1] - _TIME_TOL:
        return open_end
    return event.end


def _extra_phase(event, t, t_end):
    start = event.start
    end = _window_end(event, t, t_end)
    if event.kind == EventKind.PHASE_JUMP:
        return np.where((t >= start) & (t < end), event.value, 0.0)
    if event.kind == EventKind.STEP:
        return np.where(t >= start, 2.0 * np.pi * event.value * (t - start), 0.0)
    # ramp: frequency grows inside the window; the waveform is restored after it
    cycles = np.where((t >= start) & (t < end), 0.5 * (t - start) ** 2, 0.0)
    return 2.0 * np.pi * event.value * cycles


def _dip_scale(event, t):
    """Retained amplitude inside a dip.

    With a time constant the voltage collapses halfway at inception and
    settles towards (1 - depth), so |v| keeps changing during the fault.
    """
    retained = 1.0 - event.value
    if event.tau is None:
        return np.full(len(t), retained)
    return retained + 0.5 * event.value * np.exp(-(t - event.start) / event.tau)


def apply_events(series, spec):
    """Apply dips, phase jumps, ramps and frequency steps to an alpha-beta-gamma series.

    Phase-type events rotate the alpha-beta plane, dips scale the whole vector.
    Samples outside every event window are returned untouched. A window that
    reaches the last sample stays open.
    """
    events = spec.events if isinstance(spec, SignalSpec) else tuple(spec)
    if not events or len(series) == 0:
        return series
    _check_events(events, series.t0, series.t_end)
    t = series.time()
    scale = np.ones(len(series))
    angle = np.zeros(len(series))
    for event in events:
        if event.kind == EventKind.DIP:
            end = _window_end(event, t, series.t_end + series.dt)
            inside = (t >= event.start) & (t < end)
            scale[inside] *= _dip_scale(event, t[inside])
        else:
            angle += _extra_phase(event, t, series.t_end + series.dt)
    alpha, beta, gamma = series.data[:, 0], series.data[:, 1], series.data[:, 2]
    cos_a, sin_a = np.cos(angle), np.sin(angle)
    rotated = np.column_stack([
        alpha * cos_a - beta * sin_a,
        alpha * sin_a + beta * cos_a,
        gamma,
    ])
    logger.debug("applied %d event(s) to %d samples", len(events), len(series))
    return series.with_data(rotated * scale[:, None])


def add_noise(series, noise_std, seed=None):
    """Independent zero-mean Gaussian noise on every sample of every channel."""
    if noise_std < 0:
        raise InputError(f"noise standard deviation must be >= 0, got {noise_std}")
    if noise_std == 0:
        return series
    rng = np.random.default_rng(seed)
    return series.with_data(series.data + rng.normal(0.0, noise_std, size=series.data.shape))


def synthesize(spec, span, dt=DEFAULT_DT, seed=None):
    if spec.dc is not None:
        series = synth_dc(spec.dc, span, dt)
    elif spec.harmonics:
        series = synth_harmonic(spec, span, dt)
    elif spec.unbalance != 1.0:
        series = synth_unbalanced(spec, span, dt)
    else:
        series = synth_balanced(spec, span, dt)
    series = apply_events(series, spec)
    series = add_noise(series, spec.noise_std, seed)
    logger.info("synthesised %d samples (dt=%g s, span=%g s)", len(series), dt, span)
    return series


def synthesize_document(document):
    return synthesize(document.spec, document.span, document.dt, document.seed)


def _deg(x):
    return math.radians(x)


def _fault_dip(depth, noise_std=0.0, dt=DEFAULT_DT, span=0.6, seed=None, tau=None):
    spec = SignalSpec(events=(Event(EventKind.DIP, 0.2, 0.3, depth, tau),), noise_std=noise_std)
    return GeneratorDocument(spec=spec, span=span, dt=dt, seed=seed)


PRESETS = {
    "balanced": lambda: GeneratorDocument(SignalSpec()),
    "unbalanced-1.5": lambda: GeneratorDocument(SignalSpec(unbalance=1.5)),
    "harmonic-7-11": lambda: GeneratorDocument(SignalSpec(harmonics=(
        HarmonicSpec(7, 0.0583, _deg(210)),
        HarmonicSpec(11, 0.0371, _deg(330)),
    ))),
    "crunode-7": lambda: GeneratorDocument(SignalSpec(harmonics=(
        HarmonicSpec(7, 0.5583, _deg(210)),
    ))),
    "dc": lambda: GeneratorDocument(SignalSpec(dc=(1.0, 0.0, 0.0)), span=1.0),
    "fault-dip": lambda: _fault_dip(0.8, tau=FAULT_TAU),
    # measured-style: 10.5 kHz sampling with noise
    "noisy-dip": lambda: _fault_dip(0.5, noise_std=0.01, dt=1.0 / 10500, span=1.0, seed=0),
    "phase-jump-30": lambda: GeneratorDocument(
        SignalSpec(events=(Event(EventKind.PHASE_JUMP, 0.3, None, _deg(30)),)), span=0.6),
    "ramp-1hz": lambda: GeneratorDocument(
        SignalSpec(events=(Event(EventKind.RAMP, 0.0, None, 1.0),)), span=1.0),
    "freq-step-51": lambda: GeneratorDocument(
        SignalSpec(events=(Event(EventKind.STEP, 0.2, None, 1.0),)), span=0.5),
    # harmonic amplitudes and angles are free parameters, override them in a document
    "bus26-harmonics": lambda: GeneratorDocument(SignalSpec(unbalance=1.05, harmonics=(
        HarmonicSpec(5, 0.03, 0.0, sequence=-1),
        HarmonicSpec(7, 0.02, 0.0, sequence=1),
    ))),
    "coarse-unbalanced": lambda: GeneratorDocument(SignalSpec(unbalance=1.5), dt=COARSE_DT),
}


def preset(name):
    try:
        document = PRESETS[name]()
    except KeyError:
        raise InputError(f"unknown preset '{name}', expected one of: {', '.join(PRESETS)}") from None
    return replace(document, preset=name)

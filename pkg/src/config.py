from dataclasses import dataclass
from typing import Optional

from .errors import InputError

# Sampling
DEFAULT_DT = 1e-5            # EMT-style sampling
COARSE_DT = 1e-3             # robustness study sampling
FAULT_TAU = 0.1              # s, decay of the fault-dip transient
DEFAULT_NOMINAL_HZ = 50.0

# Geometry
DEFAULT_V_FLOOR = 1e-6       # pu, below it omega_v is undefined
DEFAULT_JUMP_FACTOR = 50.0   # step / median step ratio that marks a discontinuity

# Period detection
HORIZON_FACTOR = 4.0
MAX_INVALID_FRACTION = 0.10

# Circulation thresholds (pu^2)
EPSILON_CLEAN = 1e-2
EPSILON_MEASURED = 0.3

# Streaming
DEFAULT_STRIDE = 10

# Baseline PLL
DEFAULT_PLL_KP = 92.0
DEFAULT_PLL_KI = 4240.0
DEFAULT_PLL_CUTOFF_HZ = 20.0

# CSV ingestion
JITTER_TOLERANCE = 1e-3

ESTIMATORS = ("qss_vector", "qss_static", "pll")


@dataclass(frozen=True)
class QssConfig:
    stride: int = DEFAULT_STRIDE
    epsilon: float = EPSILON_CLEAN
    v_floor: float = DEFAULT_V_FLOOR
    nominal_hz: float = DEFAULT_NOMINAL_HZ
    horizon_factor: float = HORIZON_FACTOR
    max_invalid_fraction: float = MAX_INVALID_FRACTION
    jump_factor: Optional[float] = DEFAULT_JUMP_FACTOR

    def __post_init__(self):
        if self.stride < 1:
            raise InputError(f"stride must be >= 1, got {self.stride}")
        if not self.epsilon > 0:
            raise InputError(f"epsilon must be > 0, got {self.epsilon}")
        if self.v_floor < 0:
            raise InputError(f"v_floor must be >= 0, got {self.v_floor}")
        if not self.nominal_hz > 0:
            raise InputError(f"nominal frequency must be > 0, got {self.nominal_hz}")


@dataclass
class RunConfig:
    """Everything one CLI/HTTP estimation run needs."""
    input_path: Optional[str] = None
    generator: Optional[object] = None   # GeneratorDocument
    frame: Optional[str] = None          # 'abc' | 'alphabeta' | None (from header)
    dt: Optional[float] = None
    stride: int = DEFAULT_STRIDE
    epsilon: float = EPSILON_CLEAN
    v_floor: float = DEFAULT_V_FLOOR
    vbase: Optional[float] = None
    nominal_hz: float = DEFAULT_NOMINAL_HZ
    estimators: tuple = ("qss_vector", "pll")
    output_path: Optional[str] = None
    inst_cutoff: Optional[float] = None
    prefilter: Optional[float] = None     # Hz, low-pass on the voltages before estimation
    pll_cutoff: float = DEFAULT_PLL_CUTOFF_HZ
    jump_factor: Optional[float] = DEFAULT_JUMP_FACTOR

    def validate(self, require_source=True):
        if require_source and (self.input_path is None) == (self.generator is None):
            raise InputError("exactly one of an input path or a generator spec is required")
        if not self.epsilon > 0:
            raise InputError(f"epsilon must be > 0, got {self.epsilon}")
        if self.frame not in (None, "abc", "alphabeta"):
            raise InputError(f"unknown frame '{self.frame}', expected 'abc' or 'alphabeta'")
        unknown = [e for e in self.estimators if e not in ESTIMATORS]
        if unknown:
            raise InputError(f"unknown estimator(s): {', '.join(unknown)}")
        if self.vbase is not None and not self.vbase > 0:
            raise InputError(f"vbase must be > 0, got {self.vbase}")
        for name in ("inst_cutoff", "prefilter", "pll_cutoff"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise InputError(f"{name} must be > 0, got {value}")
        if self.stride < 1:
            raise InputError(f"stride must be >= 1, got {self.stride}")
        return self

    def qss_config(self):
        return QssConfig(
            stride=self.stride,
            epsilon=self.epsilon,
            v_floor=self.v_floor,
            nominal_hz=self.nominal_hz,
            jump_factor=self.jump_factor,
        )

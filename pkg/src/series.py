from dataclasses import dataclass

import numpy as np

from .errors import SeriesError

ABC_CHANNELS = ("va", "vb", "vc")
ALPHABETA_CHANNELS = ("valpha", "vbeta", "vgamma")


@dataclass(frozen=True, eq=False)
class UniformSeries:
    """Uniformly sampled multichannel time series.

    ``data`` has one row per sample and one column per entry of ``names``.
    Sample k sits at ``t0 + k * dt``.
    """
    t0: float
    dt: float
    names: tuple
    data: np.ndarray

    def __post_init__(self):
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise SeriesError(f"time step must be a positive finite number, got {self.dt}")
        if not np.isfinite(self.t0):
            raise SeriesError(f"start time must be finite, got {self.t0}")
        names = tuple(self.names)
        if len(set(names)) != len(names):
            raise SeriesError(f"duplicate channel names in {names}")
        data = np.array(self.data, dtype=float)
        if data.ndim == 1 and len(names) == 1:
            data = data.reshape(-1, 1)
        if data.size == 0:
            data = data.reshape(0, len(names))
        if data.ndim != 2 or data.shape[1] != len(names):
            raise SeriesError(
                f"data shape {data.shape} does not match {len(names)} channel(s) {names}")
        if not np.all(np.isfinite(data)):
            bad = int(np.argwhere(~np.isfinite(data))[0][0])
            raise SeriesError(f"non-finite sample at index {bad}")
        data.setflags(write=False)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_channels(cls, t0, dt, channels):
        names = tuple(channels.keys())
        columns = [np.asarray(v, dtype=float) for v in channels.values()]
        lengths = {len(c) for c in columns}
        if len(lengths) > 1:
            raise SeriesError(f"channels have unequal lengths {sorted(lengths)}")
        n = lengths.pop() if lengths else 0
        data = np.column_stack(columns) if n else np.empty((0, len(names)))
        return cls(t0, dt, names, data)

    def __len__(self):
        return self.data.shape[0]

    @property
    def span(self):
        return max(len(self) - 1, 0) * self.dt

    @property
    def t_end(self):
        return self.t0 + self.span

    def time(self):
        return self.t0 + self.dt * np.arange(len(self))

    def channel(self, name):
        try:
            return self.data[:, self.names.index(name)]
        except ValueError:
            raise SeriesError(f"no channel '{name}' in {self.names}") from None

    def index_of(self, t):
        """Nearest sample index to time ``t``."""
        return int(round((t - self.t0) / self.dt))

    def window(self, i0, i1):
        i0 = max(i0, 0)
        return UniformSeries(self.t0 + i0 * self.dt, self.dt, self.names, self.data[i0:i1])

    def scaled(self, factor):
        return UniformSeries(self.t0, self.dt, self.names, self.data * factor)

    def with_data(self, data, names=None):
        return UniformSeries(self.t0, self.dt, self.names if names is None else names, data)

    def magnitude(self):
        return np.sqrt(np.sum(self.data ** 2, axis=1))

    def is_frame(self, names):
        return self.names == tuple(names)

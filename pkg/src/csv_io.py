"""CSV ingestion of voltage records and export of series and estimate records."""
import logging
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np
import pandas as pd

from .config import JITTER_TOLERANCE
from .errors import CsvFormatError
from .frames import clarke_series, inverse_clarke_series, to_alphabeta
from .series import ABC_CHANNELS, ALPHABETA_CHANNELS, UniformSeries

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17e"
ESTIMATE_COLUMNS = ("t", "f_inst_hz", "f_pll_hz", "f_qss_hz", "period_s", "gamma_prime", "valid")

_HEADERS = {
    ("t",) + ABC_CHANNELS: "abc",
    ("t",) + ALPHABETA_CHANNELS: "alphabeta",
    ("t",) + ALPHABETA_CHANNELS[:2]: "alphabeta",
}


@dataclass(frozen=True)
class EstimateRecord:
    t: float
    f_inst: Optional[float]
    f_pll: Optional[float] = None
    f_qss: Optional[float] = None
    T: Optional[float] = None
    gamma_prime: Optional[float] = None
    valid: int = 0

    def __post_init__(self):
        if self.valid and self.f_qss is None:
            raise ValueError(f"record at t={self.t} is marked valid without a QSS frequency")


def _header_frame(columns, frame):
    detected = _HEADERS.get(tuple(columns))
    if detected is None:
        raise CsvFormatError(
            f"unrecognised header '{','.join(columns)}', expected t,va,vb,vc or t,valpha,vbeta[,vgamma]", 1)
    if frame is not None and frame != detected:
        raise CsvFormatError(f"header is {detected} but frame '{frame}' was requested", 1)
    return detected


def read_csv(path, frame=None, dt=None):
    """Read a uniformly sampled voltage CSV into an alpha-beta-gamma series.

    The step is the mean time difference unless ``dt`` is given; any step
    deviating from it by more than the jitter tolerance is rejected.
    """
    try:
        table = pd.read_csv(path, dtype=str, skip_blank_lines=False, keep_default_na=False,
                            skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise CsvFormatError("empty file, a header row is required", 1) from None
    except pd.errors.ParserError as e:
        raise CsvFormatError(str(e).strip()) from None
    columns = [str(c).strip() for c in table.columns]
    detected = _header_frame(columns, frame)

    values = table.apply(lambda column: pd.to_numeric(column.str.strip(), errors="coerce")).to_numpy(dtype=float)
    bad = np.flatnonzero(~np.all(np.isfinite(values), axis=1))
    if len(bad):
        row = int(bad[0])
        raise CsvFormatError(f"malformed row {','.join(table.iloc[row].astype(str))!r}", row + 2)

    n = len(values)
    t = values[:, 0]
    steps = np.diff(t)
    backwards = np.flatnonzero(steps <= 0)
    if len(backwards):
        row = int(backwards[0]) + 1
        raise CsvFormatError(f"time {t[row]!r} does not increase after {t[row - 1]!r}", row + 2)
    if dt is None:
        if n < 2:
            raise CsvFormatError(f"need at least 2 samples to infer the time step, got {n}")
        dt = (t[-1] - t[0]) / (n - 1)
    jitter = np.abs(steps - dt) / dt
    if len(jitter) and jitter.max() > JITTER_TOLERANCE:
        row = int(np.argmax(jitter)) + 1
        raise CsvFormatError(
            f"non-uniform sampling: step {steps[row - 1]:.6g} s deviates {jitter[row - 1]:.2%} from {dt:.6g} s",
            row + 2)

    series = UniformSeries(float(t[0]) if n else 0.0, dt, tuple(columns[1:]), values[:, 1:])
    logger.info("read %d samples (%s, dt=%.6g s) from %s", n, detected, dt, path)
    if detected == "abc":
        return clarke_series(series)
    return to_alphabeta(series)


def write_series(series, path, frame="alphabeta"):
    """Write a generated waveform with a leading time column."""
    if frame == "abc":
        series = inverse_clarke_series(to_alphabeta(series))
    elif frame == "alphabeta":
        series = to_alphabeta(series)
    else:
        raise CsvFormatError(f"unknown frame '{frame}', expected 'abc' or 'alphabeta'")
    table = pd.DataFrame(series.data, columns=list(series.names))
    table.insert(0, "t", series.time())
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info("wrote %d samples to %s", len(series), path)


def _records_frame(records):
    rows = [[getattr(r, f.name) for f in fields(EstimateRecord)] for r in records]
    table = pd.DataFrame(rows, columns=list(ESTIMATE_COLUMNS), dtype=object)
    for column in ESTIMATE_COLUMNS[:-1]:
        table[column] = pd.to_numeric(table[column], errors="coerce").astype(float)
    table["valid"] = table["valid"].astype(int)
    return table


def write_estimates(records, path):
    """Estimate records as CSV; missing values are empty fields."""
    table = _records_frame(records)
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")
    logger.info("wrote %d estimate records to %s", len(table), path)


def _optional(text):
    text = text.strip()
    return float(text) if text else None


def read_estimates(path):
    table = pd.read_csv(path, dtype=str, keep_default_na=False)
    if tuple(table.columns) != ESTIMATE_COLUMNS:
        raise CsvFormatError(f"unexpected header '{','.join(table.columns)}'", 1)
    records = []
    for row in table.itertuples(index=False):
        t, f_inst, f_pll, f_qss, period, gamma, valid = row
        records.append(EstimateRecord(float(t), _optional(f_inst), _optional(f_pll), _optional(f_qss),
                                      _optional(period), _optional(gamma), int(valid)))
    return records

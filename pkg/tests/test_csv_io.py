import math

import numpy as np
import pytest

from src.csv_io import ESTIMATE_COLUMNS, EstimateRecord, read_csv, read_estimates, write_estimates, write_series
from src.errors import CsvFormatError
from src.series import ALPHABETA_CHANNELS
from src.synth import SignalSpec, synthesize


def _write(tmp_path, text, name="v.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_read_abc_applies_clarke(tmp_path):
    rows = ["t,va,vb,vc"]
    for k in range(5):
        t = k * 1e-3
        theta = 2 * math.pi * 50 * t
        rows.append(f"{t},{math.cos(theta)},{math.cos(theta - 2 * math.pi / 3)},{math.cos(theta + 2 * math.pi / 3)}")
    series = read_csv(_write(tmp_path, "\n".join(rows) + "\n"))
    assert series.names == ALPHABETA_CHANNELS
    assert series.dt == pytest.approx(1e-3)
    assert np.allclose(series.magnitude(), 1.0)


def test_read_two_channel_alphabeta(tmp_path):
    series = read_csv(_write(tmp_path, "t,valpha,vbeta\n0.5,1,0\n0.501,0,1\n0.502,-1,0\n"))
    assert series.t0 == 0.5
    assert np.all(series.channel("vgamma") == 0.0), "missing gamma is zero"


def test_series_written_and_read_back(tmp_path):
    series = synthesize(SignalSpec(unbalance=1.2), 0.01, 1e-4)
    path = tmp_path / "series.csv"
    write_series(series, path, frame="abc")
    assert path.read_text().splitlines()[0] == "t,va,vb,vc"
    assert "\r" not in path.read_text()
    back = read_csv(path)
    assert len(back) == len(series)
    assert np.allclose(back.data, series.data, atol=1e-12)


def test_frame_mismatch(tmp_path):
    with pytest.raises(CsvFormatError, match="line 1: header is alphabeta"):
        read_csv(_write(tmp_path, "t,valpha,vbeta,vgamma\n0,1,0,0\n0.001,0,1,0\n"), frame="abc")


def test_bad_header(tmp_path):
    with pytest.raises(CsvFormatError, match="line 1: unrecognised header 'time,a,b,c'"):
        read_csv(_write(tmp_path, "time,a,b,c\n0,1,2,3\n"))


def test_empty_file(tmp_path):
    with pytest.raises(CsvFormatError, match="line 1: empty file"):
        read_csv(_write(tmp_path, ""))


def test_malformed_row_reports_line(tmp_path):
    text = "t,va,vb,vc\n0,1,0,0\n0.001,1,x,0\n0.002,1,0,0\n"
    with pytest.raises(CsvFormatError, match="line 3: malformed row"):
        read_csv(_write(tmp_path, text))


def test_time_must_increase(tmp_path):
    text = "t,valpha,vbeta\n0,1,0\n0.001,0,1\n0.001,-1,0\n"
    with pytest.raises(CsvFormatError, match="line 4: time"):
        read_csv(_write(tmp_path, text))


def test_jitter_is_rejected(tmp_path):
    text = "t,valpha,vbeta\n0,1,0\n0.001,0,1\n0.0025,-1,0\n0.003,0,-1\n"
    with pytest.raises(CsvFormatError, match="non-uniform sampling"):
        read_csv(_write(tmp_path, text))


def test_explicit_dt(tmp_path):
    series = read_csv(_write(tmp_path, "t,valpha,vbeta\n0,1,0\n"), dt=1e-4)
    assert series.dt == 1e-4 and len(series) == 1
    with pytest.raises(CsvFormatError, match="at least 2 samples"):
        read_csv(_write(tmp_path, "t,valpha,vbeta\n0,1,0\n", name="one.csv"))


def test_estimates_written_with_empty_fields(tmp_path):
    records = [
        EstimateRecord(0.0, 50.0, 50.0, 50.0, 0.02, 1e-9, 1),
        EstimateRecord(0.1, 49.9, 50.1),
    ]
    path = tmp_path / "est.csv"
    write_estimates(records, path)
    lines = path.read_text().split("\n")
    assert lines[0] == ",".join(ESTIMATE_COLUMNS)
    assert lines[2].endswith(",,,,0"), "missing estimates are empty fields"
    assert "5.00000000000000000e+01" in lines[1], "full precision floats"
    assert read_estimates(path) == records


def test_valid_record_needs_qss():
    with pytest.raises(ValueError, match="without a QSS frequency"):
        EstimateRecord(0.0, 50.0, valid=1)


def test_read_estimates_checks_header(tmp_path):
    with pytest.raises(CsvFormatError, match="line 1: unexpected header"):
        read_estimates(_write(tmp_path, "t,f\n0,1\n"))


def test_step_inferred_at_measurement_rate(tmp_path):
    """A one-second 10.5 kHz record gives back its step to well under a nanosecond."""
    path = tmp_path / "pmu.csv"
    write_series(synthesize(SignalSpec(), 1.0, 1.0 / 10500), path, "abc")
    series = read_csv(path)
    assert len(series) == 10501
    assert abs(series.dt - 1.0 / 10500) < 1e-9


def test_no_records_gives_header_only(tmp_path):
    path = tmp_path / "est.csv"
    write_estimates([], path)
    assert path.read_text() == ",".join(ESTIMATE_COLUMNS) + "\n"
    assert read_estimates(path) == []

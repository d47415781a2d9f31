import pytest

import src.main as cli
from src.csv_io import read_csv, read_estimates
from src.main import build_parser, generator_document, main, read_source_file


def test_read_source_file(tmp_path):
    """Test reading a generator document from a file."""
    source_file = tmp_path / "dip.gen"
    source_content = "preset = fault-dip\nspan = 0.4\n"
    source_file.write_text(source_content)
    content = read_source_file(str(source_file))
    assert content == source_content, "Source file content should match"


def test_generator_document_overrides(tmp_path):
    spec_file = tmp_path / "doc.gen"
    spec_file.write_text("preset = unbalanced-1.5\nspan = 0.3\n")
    args = build_parser().parse_args(["synth", "--spec", str(spec_file), "--span", "0.1", "--seed", "4"])
    document = generator_document(args)
    assert document.preset == "unbalanced-1.5"
    assert document.span == 0.1, "command-line span wins over the document"
    assert document.seed == 4


def test_synth_then_estimate(tmp_path):
    """Full flow: generate a CSV, estimate from it, read the records back."""
    waveform = tmp_path / "v.csv"
    estimates = tmp_path / "est.csv"
    assert main(["synth", "--preset", "balanced", "--span", "0.1", "--frame", "abc",
                 "--output", str(waveform)]) == 0
    assert waveform.read_text().startswith("t,va,vb,vc\n")
    assert len(read_csv(waveform)) == 10001

    code = main(["estimate", "--input", str(waveform), "--stride", "1000", "--output", str(estimates)])
    assert code == 0
    records = read_estimates(estimates)
    assert len(records) == 11
    assert records[0].valid == 1
    assert records[0].f_qss == pytest.approx(50.0, abs=1e-4)
    assert records[-1].f_qss is None and records[-1].valid == 0


def test_estimate_from_preset_to_stdout(capsys):
    code = main(["estimate", "--preset", "unbalanced-1.5", "--span", "0.06", "--stride", "2000",
                 "--estimators", "qss_static"])
    assert code == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert lines[0] == "t,f_inst_hz,f_pll_hz,f_qss_hz,period_s,gamma_prime,valid"
    assert len(lines) == 1 + 4


def test_estimate_measured_epsilon(tmp_path, capsys):
    """--measured relaxes the threshold so a small noisy mismatch stays valid."""
    out_path = tmp_path / "est.csv"
    assert main(["estimate", "--preset", "noisy-dip", "--stride", "250", "--measured",
                 "--prefilter", "500", "--estimators", "qss_vector", "--output", str(out_path)]) == 0
    records = read_estimates(out_path)
    found = [r for r in records if r.f_qss is not None]
    assert found
    assert sum(r.valid for r in found) >= 0.85 * len(found)
    assert "t (s)" in capsys.readouterr().out, "a summary table is printed when writing to a file"


def test_classify_prints_verdict(capsys):
    assert main(["classify", "--v", "1", "--h", "7", "--vh", "0.5583", "--phase", "210", "--check"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("prolate, crunodes expected")
    assert "crossings    | 6" in out

    assert main(["classify", "--v", "1", "--h", "7", "--vh", "0.0583"]) == 0
    assert capsys.readouterr().out.startswith("curtate, no crunodes expected")


def test_classify_rejects_fractional_order(capsys):
    assert main(["classify", "--v", "1", "--h", "7.5", "--vh", "0.1"]) == 1
    assert "integer harmonic order" in capsys.readouterr().err


def test_validate_reports_intervals(capsys):
    assert main(["validate", "--preset", "fault-dip", "--stride", "1000"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("epsilon = 0.01 pu^2")
    assert "Invalid intervals (s):" in out


def test_validate_needs_one_source(capsys):
    assert main(["validate"]) == 1
    assert "exactly one" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    [],
    ["estimate", "--stride", "many"],
    ["frobnicate"],
    ["estimate", "--input", "a.csv", "--preset", "balanced"],
    ["synth", "--preset", "balanced", "--spec", "x.gen"],
    ["estimate", "--preset", "nope"],
    ["estimate", "--input", "/nonexistent/v.csv"],
])
def test_usage_and_input_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "error" in capsys.readouterr().err


def test_bad_document_reports_line(tmp_path, capsys):
    spec_file = tmp_path / "bad.gen"
    spec_file.write_text("span = 0.1\nharmonic = 7\n")
    assert main(["synth", "--spec", str(spec_file)]) == 1
    assert "line 2" in capsys.readouterr().err


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0
    assert "estimate" in capsys.readouterr().out


def test_presets_listing(capsys):
    assert main(["presets"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("Pos") and lines[0].endswith("Preset")
    assert lines[2].endswith("| balanced")
    assert any(line.endswith("| phase-jump-30") for line in lines)


def _no_period_count(out):
    row = out.splitlines()[3]
    return int(row.split("|")[4])


def test_validate_honours_vfloor(capsys):
    assert main(["validate", "--preset", "fault-dip", "--stride", "1000"]) == 0
    default = _no_period_count(capsys.readouterr().out)
    assert main(["validate", "--preset", "fault-dip", "--stride", "1000", "--vfloor", "0.7"]) == 0
    floored = _no_period_count(capsys.readouterr().out)
    assert floored > default, "the whole fault lies below a 0.7 pu floor"


def test_internal_failure_exits_2(monkeypatch, capsys):
    def broken(args):
        raise RuntimeError("stage exploded")

    monkeypatch.setitem(cli.COMMANDS, "presets", broken)
    assert main(["presets"]) == 2
    assert "internal error: stage exploded" in capsys.readouterr().err

"""End-to-end checks of the estimator against closed-form and simulated references."""
import math

import numpy as np
import pytest
from scipy.integrate import quad

from src.analytic import ellipse_arc_length, harmonic_perimeter
from src.baseline import pll_track
from src.circulation import gamma_prime, gamma_prime_integral
from src.config import QssConfig, RunConfig
from src.diffgeo import arc_length, omega_v
from src.epitrochoid import TrajectoryKind, classify, count_self_intersections, crunode_threshold_order, one_period_points
from src.period import PeriodStatus, PeriodTracker, detect_period
from src.pipeline import process
from src.qss import QssStream, qss_stream, qss_vector
from src.synth import HarmonicSpec, SignalSpec, preset, synthesize, synthesize_document

DT = 1e-5
F0 = 50.0
OMEGA = 2 * math.pi * F0


def _anchor_checks(series, t_anchor=0.02):
    """Period, QSS frequency and Gamma' at one interior anchor."""
    trace = omega_v(series)
    tracker = PeriodTracker(trace)
    period = tracker.detect(trace.index_of(t_anchor))
    return period, qss_vector(trace, period, tracker), gamma_prime(series, period)


def test_balanced_stationary():
    series = synthesize_document(preset("balanced"))
    trace = omega_v(series)
    interior = trace.magnitude()[2:-2]
    assert np.allclose(interior, OMEGA, rtol=1e-6), "|omega_v| = omega_o away from the edge stencils"
    period, estimate, verdict = _anchor_checks(series)
    assert period.T == pytest.approx(0.02, abs=2 * DT)
    assert estimate.f_qss == pytest.approx(F0, abs=1e-4)
    assert abs(verdict.gamma_prime) < 1e-8


def test_unbalanced_stationary():
    series = synthesize_document(preset("unbalanced-1.5"))
    magnitude = omega_v(series).magnitude()
    assert magnitude.min() == pytest.approx(OMEGA / 1.5, rel=5e-3)
    assert magnitude.max() == pytest.approx(OMEGA * 1.5, rel=5e-3)
    _, estimate, verdict = _anchor_checks(series)
    assert estimate.f_qss == pytest.approx(F0, abs=1e-3)
    assert abs(verdict.gamma_prime) < 1e-6


def test_harmonic_stationary():
    series = synthesize_document(preset("harmonic-7-11"))
    period, estimate, verdict = _anchor_checks(series)
    assert period.T == pytest.approx(0.02, abs=2 * DT)
    assert estimate.f_qss == pytest.approx(F0, abs=1e-3)
    assert abs(verdict.gamma_prime) < 1e-6


def test_dc_has_no_period():
    series = synthesize_document(preset("dc"))
    estimate = detect_period(omega_v(series), 0.0, 1.0)
    assert estimate.status == PeriodStatus.NOT_FOUND
    assert qss_stream(series, stride=1000) == []


def _grid_ratios(h):
    ratios = [0.01, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0 / h - 0.011, 1.0 / h + 0.011]
    return [r for r in ratios if 0.0 < r <= 0.9 and abs(r - 1.0 / h) > 0.01]


@pytest.mark.parametrize("h", range(2, 26))
def test_classification_matches_geometry(h):
    """Predicted crunodes appear in the sampled trajectory and nowhere else."""
    for ratio in _grid_ratios(h):
        spec = HarmonicSpec(h, ratio)
        _, trajectory = classify(1.0, spec)
        series = synthesize(SignalSpec(harmonics=(spec,)), 0.02, DT)
        crossings = count_self_intersections(one_period_points(series, 0.0, 0.02))
        assert (crossings > 0) == trajectory.crunodes_expected, f"h={h}, V_h/V={ratio:.3f}"


def test_five_percent_needs_twentieth_harmonic():
    assert crunode_threshold_order(0.05) == 20
    assert classify(1.0, HarmonicSpec(19, 0.05))[1].kind == TrajectoryKind.CURTATE


def test_crunode_count():
    series = synthesize_document(preset("crunode-7"))
    assert count_self_intersections(one_period_points(series, 0.0, 0.02)) == 6


def test_fault_validity_gating():
    series = synthesize_document(preset("fault-dip"))
    points = [p for p in QssStream(series, QssConfig(stride=100)) if p.found]

    outside = [p for p in points if not 0.19 <= p.t <= 0.32]
    assert sum(p.verdict.valid for p in outside) >= 0.95 * len(outside)

    def overlaps_edge(t):
        return any(edge - 0.019 <= t <= edge - 0.001 for edge in (0.2, 0.3))

    edges = [p for p in points if overlaps_edge(p.t)]
    assert edges
    assert sum(not p.verdict.valid for p in edges) >= 0.95 * len(edges)

    steady = np.median([abs(p.verdict.gamma_prime) for p in points if p.t < 0.15])
    assert all(abs(p.verdict.gamma_prime) > 10 * steady for p in edges)

    during = [p for p in points if 0.2 < p.t and p.period.t_end < 0.3]
    assert during
    assert not any(p.verdict.valid for p in during), "the fault trajectory is an open curve"


def test_coarse_sampling_keeps_circulation_small():
    series = synthesize_document(preset("coarse-unbalanced"))
    dt = series.dt
    checked = 0
    for point in QssStream(series, QssConfig(stride=1)):
        if not point.found or point.t < 2 * dt or point.period.t_end > series.t_end - 2 * dt:
            continue
        assert abs(point.verdict.gamma_prime) < 1e-2, f"t={point.t}"
        checked += 1
    assert checked > 100


def _quad_arc(speed, period):
    value, _ = quad(speed, 0.0, period, limit=400, epsabs=1e-13, epsrel=1e-12)
    return value


def test_arc_length_against_elliptic_integrals():
    period = 0.02
    unbalanced = synthesize(SignalSpec(unbalance=1.5), period, DT)
    expected = ellipse_arc_length(1.5, 1.0, OMEGA, period)
    oracle = _quad_arc(lambda t: math.hypot(1.5 * math.cos(OMEGA * t), math.sin(OMEGA * t)), period)
    assert expected == pytest.approx(oracle, rel=1e-9)
    assert arc_length(unbalanced)[-1] == pytest.approx(oracle, rel=1e-4)

    v_h, order = 0.2, 7
    harmonic = synthesize(SignalSpec(harmonics=(HarmonicSpec(order, v_h),)), period, DT)
    oracle = _quad_arc(lambda t: abs(np.exp(1j * OMEGA * t) + v_h * np.exp(1j * order * OMEGA * t)), period)
    assert harmonic_perimeter(1.0, v_h, order, OMEGA) == pytest.approx(oracle, rel=1e-9)
    assert arc_length(harmonic)[-1] == pytest.approx(oracle, rel=1e-4)


def test_pll_ripples_where_qss_is_flat():
    series = synthesize(SignalSpec(unbalance=1.5), 0.5, DT)
    f_pll = pll_track(series).channel("f_pll")[series.index_of(0.2):]
    assert f_pll.std() > 0.05
    estimates = [e.f_qss for e, _ in qss_stream(series, stride=500)]
    assert np.std(estimates) < 1e-3


def test_phase_jump_spikes_pll_not_qss():
    series = synthesize_document(preset("phase-jump-30"))
    f_pll = pll_track(series).channel("f_pll")
    assert np.max(np.abs(f_pll[series.index_of(0.3):] - F0)) >= 2.0
    pairs = qss_stream(series, stride=100)
    valid = [e.f_qss for e, verdict in pairs if verdict.valid]
    assert len(valid) > 0.9 * len(pairs)
    assert np.max(np.abs(np.array(valid) - F0)) < 0.1


def test_geometric_properties():
    series = synthesize(SignalSpec(unbalance=1.3, harmonics=(HarmonicSpec(5, 0.05, 0.4, -1),)), 0.1, DT)
    trace = omega_v(series)
    scaled = omega_v(series.scaled(17.0))
    assert np.allclose(trace.omega, scaled.omega, rtol=1e-9, atol=1e-9)
    assert np.allclose(np.sum(trace.omega * series.data, axis=1), 0.0, atol=1e-9)

    tracker = PeriodTracker(trace)
    for t_anchor in (0.0113, 0.037, 0.05):
        period = tracker.detect(trace.index_of(t_anchor))
        assert tracker.integrate_magnitude(period) == pytest.approx(2 * math.pi, abs=1e-3)
        endpoint = gamma_prime(series, period).gamma_prime
        assert gamma_prime_integral(series, period) == pytest.approx(endpoint, abs=1e-6)


def test_pipeline_is_deterministic_under_seed():
    config = RunConfig(stride=500, epsilon=0.3)
    first = process(synthesize_document(preset("noisy-dip")), config)
    second = process(synthesize_document(preset("noisy-dip")), config)
    assert first == second

import math

import numpy as np
import pytest

from src.analytic import harmonic_perimeter
from src.diffgeo import arc_length
from src.epitrochoid import (TrajectoryKind, classify, count_self_intersections, crunode_threshold_order,
                             detect_self_intersection, epitrochoid_params, one_period_points)
from src.errors import InputError
from src.period import PeriodEstimate, PeriodStatus
from src.synth import HarmonicSpec, SignalSpec, preset, synthesize, synthesize_document

OMEGA = 2 * math.pi * 50


def _found(t_start, period):
    return PeriodEstimate(t_start, period, 2 * math.pi, PeriodStatus.FOUND)


def test_params_of_seventh_harmonic():
    params = epitrochoid_params(1.0, 7, 0.5583)
    assert params.d == 0.5583
    assert params.r == pytest.approx(1 / 7)
    assert params.R == pytest.approx(6 / 7)
    assert params.n_critical == 6
    assert params.R + params.r == pytest.approx(1.0), "fixed plus rolling radius is the fundamental"


@pytest.mark.parametrize("v_h, kind", [
    (0.0583, TrajectoryKind.CURTATE),
    (1 / 7, TrajectoryKind.EPICYCLOID),
    (0.5583, TrajectoryKind.PROLATE),
])
def test_classify_seventh_harmonic(v_h, kind):
    _, trajectory = classify(1.0, HarmonicSpec(7, v_h))
    assert trajectory.kind == kind
    assert trajectory.crunodes_expected == (kind == TrajectoryKind.PROLATE)


def test_classify_scales_with_fundamental():
    """Only the ratio V_h / V matters."""
    _, small = classify(1.0, HarmonicSpec(5, 0.3))
    _, large = classify(230.0, HarmonicSpec(5, 69.0))
    assert small.kind == large.kind == TrajectoryKind.PROLATE


def test_critical_angles():
    _, trajectory = classify(1.0, HarmonicSpec(7, 0.5))
    assert len(trajectory.critical_angles) == 6
    assert trajectory.critical_angles[0] == 0.0
    assert trajectory.critical_angles[1] == pytest.approx(math.pi / 3)


def test_taxonomy_needs_integer_order():
    with pytest.raises(InputError, match="integer harmonic order >= 2"):
        classify(1.0, HarmonicSpec(7.5, 0.1))
    with pytest.raises(InputError, match="integer harmonic order >= 2"):
        epitrochoid_params(1.0, 1, 0.1)
    with pytest.raises(InputError, match="fundamental amplitude"):
        epitrochoid_params(0.0, 5, 0.1)


def test_crunode_threshold_order():
    assert crunode_threshold_order(0.05) == 20
    assert crunode_threshold_order(0.5583) == 2
    assert crunode_threshold_order(0.3) == 4
    assert crunode_threshold_order(0.9) == 2
    _, at_limit = classify(1.0, HarmonicSpec(20, 0.05))
    assert at_limit.kind == TrajectoryKind.EPICYCLOID, "h = 1/ratio is the cusp case"
    _, beyond = classify(1.0, HarmonicSpec(21, 0.05))
    assert beyond.kind == TrajectoryKind.PROLATE
    with pytest.raises(InputError, match="ratio must be > 0"):
        crunode_threshold_order(0.0)


def test_circle_has_no_crossings():
    theta = np.linspace(0, 2 * math.pi, 200, endpoint=False)
    assert count_self_intersections(np.column_stack([np.cos(theta), np.sin(theta)])) == 0


def test_figure_eight_crosses_once():
    """Sampled off the node so no vertex sits on the crossing."""
    theta = 2 * math.pi * (np.arange(100) + 0.5) / 100
    points = np.column_stack([np.sin(theta), np.sin(theta) * np.cos(theta)])
    assert count_self_intersections(points) == 1


def test_adjacent_edges_are_not_crossings():
    square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    assert count_self_intersections(square) == 0
    bowtie = np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
    assert count_self_intersections(bowtie) == 1


def test_crunode_preset_has_six_crossings():
    series = synthesize_document(preset("crunode-7"))
    points = one_period_points(series, 0.0, 0.02)
    assert len(points) == 2000, "one period without the closing sample"
    assert count_self_intersections(points) == 6, "one crunode per inner loop"
    assert detect_self_intersection(series, _found(0.0, 0.02))


def test_curtate_trajectory_is_simple():
    series = synthesize_document(preset("harmonic-7-11"))
    assert not detect_self_intersection(series, _found(0.01, 0.02))


def test_detect_accepts_bare_points():
    theta = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    assert not detect_self_intersection(np.column_stack([np.cos(theta), np.sin(theta)]))


def test_intersection_input_validation():
    with pytest.raises(InputError, match="at least 4 points"):
        count_self_intersections(np.zeros((3, 2)))
    with pytest.raises(InputError, match=r"\(M, 2\)"):
        count_self_intersections(np.zeros((5, 3)))
    series = synthesize(SignalSpec(), 0.02, 1e-5)
    with pytest.raises(InputError, match="not covered"):
        one_period_points(series, 0.01, 0.02)
    with pytest.raises(InputError, match="no trajectory to test"):
        detect_self_intersection(series, PeriodEstimate(0.0, None, 1.0, PeriodStatus.NOT_FOUND))


@pytest.mark.parametrize("v_h, order", [(0.0583, 7), (0.5583, 7), (0.2, 5)])
def test_perimeter_matches_closed_form(v_h, order):
    spec = SignalSpec(harmonics=(HarmonicSpec(order, v_h),))
    series = synthesize(spec, 0.02, 1e-5)
    assert arc_length(series)[-1] == pytest.approx(harmonic_perimeter(1.0, v_h, order, OMEGA), rel=1e-4)

import logging
import math

import numpy as np

from .baseline import PllConfig, lowpass, pll_track
from .config import (DEFAULT_JUMP_FACTOR, DEFAULT_NOMINAL_HZ, DEFAULT_STRIDE, DEFAULT_V_FLOOR, EPSILON_CLEAN,
                     QssConfig)
from .csv_io import EstimateRecord, read_csv
from .frames import to_alphabeta
from .qss import QssStream
from .series import UniformSeries
from .synth import synthesize_document

logger = logging.getLogger(__name__)


def per_unit(series, vbase=None):
    """Divide by ``vbase``, or by the largest |v| of the series when it is not given."""
    series = to_alphabeta(series)
    if vbase is None:
        vbase = float(series.magnitude().max()) if len(series) else 0.0
        if not vbase > 0:
            logger.warning("series has no non-zero sample, per-unit base left at 1")
            vbase = 1.0
    return series.scaled(1.0 / vbase), vbase


def load_series(config):
    """The voltage series a RunConfig points at, read or synthesised."""
    if config.input_path is not None:
        return read_csv(config.input_path, config.frame, config.dt)
    return synthesize_document(config.generator)


def _fill_invalid(values, valid):
    if valid.all():
        return values
    index = np.arange(len(values))
    return np.interp(index, index[valid], values[valid])


class EstimationPipeline:
    def __init__(self, config):
        # Stages share the run configuration
        self.config = config.validate(require_source=False)
        self.qss_config = config.qss_config()
        self.pll_config = PllConfig(omega_nominal=2.0 * math.pi * config.nominal_hz,
                                    lp_cutoff=config.pll_cutoff)
        self.vbase = None

    def prepare(self, series):
        """Per-unit normalisation followed by the optional voltage prefilter."""
        series, self.vbase = per_unit(series, self.config.vbase)
        if self.config.prefilter is not None:
            series = lowpass(series, self.config.prefilter)
        return series

    def instantaneous_frequency(self, trace):
        frequency = trace.frequency_hz()
        if self.config.inst_cutoff is None or not trace.valid.any():
            return frequency
        filled = _fill_invalid(frequency, trace.valid)
        filtered = lowpass(UniformSeries(trace.t0, trace.dt, ("f_inst",), filled), self.config.inst_cutoff)
        return np.where(trace.valid, filtered.data[:, 0], np.nan)

    def run(self, series):
        """
        Process a voltage series through the estimation pipeline.
        Returns one EstimateRecord per anchor.
        """
        # Step 1: per-unit, so the circulation threshold is comparable across inputs
        series = self.prepare(series)
        # Step 2: geometric frequency, period detection and circulation per anchor
        stream = QssStream(series, self.qss_config)
        f_inst = self.instantaneous_frequency(stream.trace)
        # Step 3: baseline PLL on the same samples
        f_pll = None
        if "pll" in self.config.estimators:
            f_pll = pll_track(series, self.pll_config).data[:, 0]

        records = []
        for index, point in zip(stream.anchors(), stream):
            f_qss = None
            if "qss_vector" in self.config.estimators and point.qss is not None:
                f_qss = point.qss.f_qss
            elif "qss_static" in self.config.estimators and point.static is not None:
                f_qss = point.static.f_qss
            inst = float(f_inst[index])
            records.append(EstimateRecord(
                t=point.t,
                f_inst=None if math.isnan(inst) else inst,
                f_pll=None if f_pll is None else float(f_pll[index]),
                f_qss=f_qss,
                T=point.period.T,
                gamma_prime=point.verdict.gamma_prime,
                valid=int(point.verdict.valid and f_qss is not None),
            ))
        valid = sum(r.valid for r in records)
        logger.info("pipeline: %d records, %d valid, vbase=%g", len(records), valid, self.vbase)
        return records


def process(series, config):
    return EstimationPipeline(config).run(series)


def validate(series, epsilon=EPSILON_CLEAN, stride=DEFAULT_STRIDE, vbase=None,
             nominal_hz=DEFAULT_NOMINAL_HZ, v_floor=DEFAULT_V_FLOOR, jump_factor=DEFAULT_JUMP_FACTOR):
    """Circulation verdict at every anchor of a per-unit series."""
    series, _ = per_unit(series, vbase)
    config = QssConfig(stride=stride, epsilon=epsilon, nominal_hz=nominal_hz, v_floor=v_floor,
                       jump_factor=jump_factor)
    return [point.verdict for point in QssStream(series, config)]

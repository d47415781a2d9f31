import logging
import math
from dataclasses import asdict, replace

from flask import Flask, jsonify, request
from flask_cors import CORS

from .config import EPSILON_CLEAN, EPSILON_MEASURED, RunConfig
from .epitrochoid import classify as classify_trajectory
from .errors import InputError
from .pipeline import EstimationPipeline
from .series import ABC_CHANNELS, ALPHABETA_CHANNELS, UniformSeries
from .synth import PRESETS, HarmonicSpec, preset, synthesize_document

logger = logging.getLogger(__name__)

app = Flask(__name__)
CORS(app, resources={r"/estimate": {"origins": "*"},
                     r"/classify": {"origins": "*"},
                     r"/presets": {"origins": "*"}}, supports_credentials=True)

CONFIG_KEYS = ("stride", "epsilon", "v_floor", "vbase", "nominal_hz", "estimators",
               "inst_cutoff", "prefilter", "pll_cutoff")


def _number(data, key, default=None):
    value = data.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"'{key}' must be a number, got {value!r}")
    return float(value)


def series_from_payload(data):
    """Voltage series from inline channels or from a preset request."""
    if "preset" in data:
        document = preset(data["preset"])
        changes = {k: _number(data, k) for k in ("span", "dt") if k in data}
        if "seed" in data:
            changes["seed"] = int(data["seed"])
        return synthesize_document(replace(document, **changes))
    for names in (ABC_CHANNELS, ALPHABETA_CHANNELS, ALPHABETA_CHANNELS[:2]):
        if all(name in data for name in names):
            dt = _number(data, "dt")
            if dt is None:
                raise InputError("inline samples need 'dt'")
            channels = {name: data[name] for name in names}
            try:
                return UniformSeries.from_channels(_number(data, "t0", 0.0), dt, channels)
            except (TypeError, ValueError) as e:
                raise InputError(f"bad sample arrays: {e}") from None
    raise InputError("provide 'preset' or sample arrays va/vb/vc or valpha/vbeta[/vgamma]")


def config_from_payload(data):
    options = {k: data[k] for k in CONFIG_KEYS if k in data}
    if "estimators" in options:
        options["estimators"] = tuple(options["estimators"])
    if "epsilon" not in options:
        options["epsilon"] = EPSILON_MEASURED if data.get("measured") else EPSILON_CLEAN
    try:
        return RunConfig(**options)
    except TypeError as e:
        raise InputError(str(e)) from None


def _record(record):
    return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in asdict(record).items()}


@app.route('/estimate', methods=['POST'])
def estimate():
    data = request.get_json(silent=True)
    if not data:
        return jsonify({'error': 'No JSON body provided. Send samples or a preset name.'}), 400
    logger.info("estimate request with keys %s", sorted(data))
    try:
        series = series_from_payload(data)
        records = EstimationPipeline(config_from_payload(data)).run(series)
        return jsonify({'records': [_record(r) for r in records]})
    except InputError as e:
        return jsonify({'error': str(e)}), 400
    except Exception as e:  # pylint: disable=broad-except
        logger.exception("estimate failed")
        return jsonify({'error': str(e)}), 500


@app.route('/classify', methods=['POST'])
def classify():
    data = request.get_json(silent=True)
    if not data:
        return jsonify({'error': 'No JSON body provided. Send v, h and vh.'}), 400
    logger.info("classify request %s", data)
    try:
        for key in ("v", "h", "vh"):
            if key not in data:
                raise InputError(f"missing '{key}'")
        spec = HarmonicSpec(_number(data, "h"), _number(data, "vh"), math.radians(_number(data, "phase", 0.0)))
        params, trajectory = classify_trajectory(_number(data, "v"), spec)
        return jsonify({
            'kind': trajectory.kind.value,
            'crunodesExpected': trajectory.crunodes_expected,
            'criticalAngles': list(trajectory.critical_angles),
            'params': asdict(params),
        })
    except InputError as e:
        return jsonify({'error': str(e)}), 400
    except Exception as e:  # pylint: disable=broad-except
        logger.exception("classify failed")
        return jsonify({'error': str(e)}), 500


@app.route('/presets', methods=['GET'])
def presets():
    return jsonify({'presets': list(PRESETS)})


if __name__ == '__main__':
    app.run(host='0.0.0.0', port=5000, debug=True)

import argparse
import logging
import math
import sys
from dataclasses import replace

from .circulation import summarize
from .config import (DEFAULT_DT, DEFAULT_NOMINAL_HZ, DEFAULT_PLL_CUTOFF_HZ, DEFAULT_STRIDE,
                     DEFAULT_V_FLOOR, EPSILON_CLEAN, EPSILON_MEASURED, RunConfig)
from .csv_io import read_csv, write_estimates, write_series
from .epitrochoid import classify, count_self_intersections, one_period_points
from .errors import InputError, UsageError
from .output_formatter import format_classification, format_estimates, format_presets, format_validity_summary
from .pipeline import EstimationPipeline, load_series, validate
from .spec_parser import load_generator_document
from .synth import PRESETS, GeneratorDocument, HarmonicSpec, SignalSpec, preset, synthesize, synthesize_document

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


class CliParser(argparse.ArgumentParser):
    """argparse parser whose usage errors raise instead of exiting."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def read_source_file(file_path):
    """Read a generator document from a file."""
    with open(file_path, 'r') as file:
        return file.read()


def _add_generator_flags(parser):
    parser.add_argument("--preset", help="named generator preset")
    parser.add_argument("--spec", help="generator document file")
    parser.add_argument("--span", type=float, help="generated duration (s)")
    parser.add_argument("--seed", type=int, help="noise seed")


def _add_threshold_flags(parser):
    parser.add_argument("--epsilon", type=float, help="circulation threshold (pu^2)")
    parser.add_argument("--measured", action="store_true",
                        help=f"measured-data mode, epsilon defaults to {EPSILON_MEASURED}")
    parser.add_argument("--stride", type=int, default=DEFAULT_STRIDE, help="anchor stride (samples)")
    parser.add_argument("--vbase", type=float, help="per-unit base amplitude (default: max |v|)")
    parser.add_argument("--fnominal", type=float, default=DEFAULT_NOMINAL_HZ, help="nominal frequency (Hz)")


def build_parser():
    parser = CliParser(prog="qss", description="Quasi-steady-state frequency estimation of three-phase voltages.")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="logging verbosity")
    commands = parser.add_subparsers(dest="command", parser_class=CliParser)
    commands.required = True

    synth = commands.add_parser("synth", help="write a generated waveform CSV")
    _add_generator_flags(synth)
    synth.add_argument("--dt", type=float, help="sampling step (s)")
    synth.add_argument("--frame", choices=["abc", "alphabeta"], help="output channels")
    synth.add_argument("--output", default="-", help="output CSV path ('-' for stdout)")

    estimate = commands.add_parser("estimate", help="run the estimation pipeline")
    estimate.add_argument("--input", help="voltage CSV")
    _add_generator_flags(estimate)
    estimate.add_argument("--dt", type=float, help="sampling step override (s)")
    estimate.add_argument("--frame", choices=["abc", "alphabeta"], help="expected input frame")
    estimate.add_argument("--output", default="-", help="estimate CSV path ('-' for stdout)")
    _add_threshold_flags(estimate)
    estimate.add_argument("--vfloor", type=float, default=DEFAULT_V_FLOOR, help="|v| below which omega is undefined")
    estimate.add_argument("--estimators", default="qss_vector,pll",
                          help="comma list of qss_vector, qss_static, pll")
    estimate.add_argument("--inst-cutoff", type=float, help="low-pass cutoff for the instantaneous frequency (Hz)")
    estimate.add_argument("--prefilter", type=float, help="low-pass cutoff applied to the voltages (Hz)")
    estimate.add_argument("--pll-cutoff", type=float, default=DEFAULT_PLL_CUTOFF_HZ, help="PLL output low-pass (Hz)")

    classify_cmd = commands.add_parser("classify", help="epitrochoid class of a fundamental plus one harmonic")
    classify_cmd.add_argument("--v", type=float, required=True, help="fundamental amplitude")
    classify_cmd.add_argument("--h", type=float, required=True, help="harmonic order")
    classify_cmd.add_argument("--vh", type=float, required=True, help="harmonic amplitude")
    classify_cmd.add_argument("--phase", type=float, default=0.0, help="harmonic phase (deg)")
    classify_cmd.add_argument("--check", action="store_true", help="synthesise one period and count crossings")
    classify_cmd.add_argument("--dt", type=float, default=DEFAULT_DT, help="sampling step for --check (s)")
    classify_cmd.add_argument("--fnominal", type=float, default=DEFAULT_NOMINAL_HZ, help="nominal frequency (Hz)")

    validate_cmd = commands.add_parser("validate", help="circulation validity trace of a CSV")
    validate_cmd.add_argument("--input", help="voltage CSV")
    _add_generator_flags(validate_cmd)
    validate_cmd.add_argument("--dt", type=float, help="sampling step override (s)")
    validate_cmd.add_argument("--frame", choices=["abc", "alphabeta"], help="expected input frame")
    _add_threshold_flags(validate_cmd)
    validate_cmd.add_argument("--vfloor", type=float, default=DEFAULT_V_FLOOR, help="|v| below which omega is undefined")

    commands.add_parser("presets", help="list the generator presets")
    return parser


def generator_document(args):
    """Generator document from --spec or --preset plus the --span/--dt/--seed overrides."""
    if args.spec and args.preset:
        raise UsageError("--spec and --preset are mutually exclusive")
    if args.spec:
        document = load_generator_document(read_source_file(args.spec))
    elif args.preset:
        document = preset(args.preset)
    else:
        document = GeneratorDocument()
    changes = {k: v for k, v in (("span", args.span), ("dt", args.dt), ("seed", args.seed)) if v is not None}
    return replace(document, **changes)


def _epsilon(args):
    if args.epsilon is not None:
        return args.epsilon
    return EPSILON_MEASURED if args.measured else EPSILON_CLEAN


def _has_generator(args):
    return bool(args.preset or args.spec)


def _output(path):
    return sys.stdout if path == "-" else path


def run_synth(args):
    document = generator_document(args)
    frame = args.frame or document.frame
    series = synthesize_document(document)
    write_series(series, _output(args.output), frame)
    return 0


def run_estimate(args):
    if args.input and _has_generator(args):
        raise UsageError("--input cannot be combined with --preset or --spec")
    config = RunConfig(
        input_path=args.input,
        generator=None if args.input else generator_document(args),
        frame=args.frame,
        dt=args.dt if args.input else None,
        stride=args.stride,
        epsilon=_epsilon(args),
        v_floor=args.vfloor,
        vbase=args.vbase,
        nominal_hz=args.fnominal,
        estimators=tuple(e.strip() for e in args.estimators.split(",") if e.strip()),
        output_path=args.output,
        inst_cutoff=args.inst_cutoff,
        prefilter=args.prefilter,
        pll_cutoff=args.pll_cutoff,
    ).validate()
    records = EstimationPipeline(config).run(load_series(config))
    write_estimates(records, _output(args.output))
    if args.output != "-":
        print(format_estimates(records, limit=10))
    return 0


def run_classify(args):
    spec = HarmonicSpec(args.h, args.vh, math.radians(args.phase))
    params, trajectory = classify(args.v, spec)
    detected = None
    if args.check:
        period = 1.0 / args.fnominal
        signal = SignalSpec(amplitude=args.v, omega=2.0 * math.pi * args.fnominal, harmonics=(spec,))
        series = synthesize(signal, period, args.dt)
        detected = count_self_intersections(one_period_points(series, 0.0, period))
    print(format_classification(params, trajectory, detected))
    return 0


def run_validate(args):
    if bool(args.input) == _has_generator(args):
        raise UsageError("validate needs exactly one of --input or --preset/--spec")
    if args.input:
        series = read_csv(args.input, args.frame, args.dt)
    else:
        series = synthesize_document(generator_document(args))
    epsilon = _epsilon(args)
    verdicts = validate(series, epsilon, args.stride, args.vbase, args.fnominal, args.vfloor)
    print(f"epsilon = {epsilon:g} pu^2")
    print(format_validity_summary(summarize(verdicts)))
    return 0


def run_presets(args):
    print(format_presets(list(PRESETS)))
    return 0


COMMANDS = {
    "synth": run_synth,
    "estimate": run_estimate,
    "classify": run_classify,
    "validate": run_validate,
    "presets": run_presets,
}


def main(argv=None):
    """Run one subcommand; 0 on success, 1 on input errors, 2 on anything else."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:
        return e.code or 0

    logging.basicConfig(level=args.log_level, format=LOG_FORMAT, stream=sys.stderr, force=True)
    try:
        return COMMANDS[args.command](args)
    except (InputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # pylint: disable=broad-except
        logger.debug("internal failure", exc_info=True)
        print(f"internal error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

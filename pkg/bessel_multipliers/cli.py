"""Command-line front end.

Commands:
    classify FILE            classify a sequence, report its bounds and duals
    multiplier FILE          build a multiplier bundle and run --action(s) on it
    check SUITE              run a randomized check suite
    perturb FILE             run a perturbation experiment

Exit codes: 0 when every certificate passed, 1 when a violation was certified,
2 for bad input or usage.
"""

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from . import cli_messages
from . import invertibility
from . import io_formats
from . import multiplier
from . import numerics
from . import perturbation
from . import symbols
from .command_errors import ConfigError, InputError, MultiplierError
from .run_utils import configure_logging, write_output, write_report
from .sequences import bessel_certificates, dual_reconstruction_residuals, riesz_bounds
from .suite_runner import SuiteRunner, load_check_suites
from .tolerance_config import DEFAULT_TOLERANCES, OutputFormat, RunConfig, load_tolerances


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

ACTIONS = ("build", "apply", "norms", "adjoint", "invert", "profile")


# --- Argument parsing ---


def _int_range(text):
    """Parse "LO:HI" or a single "N" into an inclusive (lo, hi) range."""
    try:
        parts = [int(p) for p in text.split(":")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO:HI, got {text!r}")
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected N or LO:HI, got {text!r}")
    return tuple(parts)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    tolerances = common.add_argument_group("tolerances")
    tolerances.add_argument("--config", type=Path, help="TOML file with a [tolerances] table")
    tolerances.add_argument("--tol-eq-abs", type=float, dest="eq_abs")
    tolerances.add_argument("--tol-bound-slack", type=float, dest="bound_slack")
    tolerances.add_argument("--tol-rank", type=float, dest="rank_tol")
    tolerances.add_argument("--tol-invert-floor", type=float, dest="invert_floor")

    output = common.add_argument_group("output")
    output.add_argument("--out", type=Path, help="write the report here instead of stdout")
    output.add_argument("--csv", action="store_true", help="CSV rows instead of JSON")
    output.add_argument("--verbose", action="store_true")
    output.add_argument("--log-file", type=Path)

    parser = argparse.ArgumentParser(
        prog="bessel-multipliers",
        description="Generalized Bessel multipliers: build, classify, certify.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    classify = subparsers.add_parser("classify", parents=[common], help="classify a sequence")
    classify.add_argument("input", type=Path)

    mult = subparsers.add_parser("multiplier", parents=[common], help="work with a multiplier")
    mult.add_argument("input", type=Path)
    mult.add_argument("--action", action="append", choices=ACTIONS, dest="actions")
    mult.add_argument("--vector", help='comma-separated complex entries, e.g. "1,2-1j"')

    check = subparsers.add_parser("check", parents=[common], help="run a check suite")
    check.add_argument("suite")
    check.add_argument("--dims", type=_int_range, default=(2, 8))
    check.add_argument("--counts", type=_int_range, default=(2, 16))
    check.add_argument("--draws", type=int, default=100)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--replay", type=int)

    perturb = subparsers.add_parser("perturb", parents=[common], help="run a perturbation experiment")
    perturb.add_argument("input", type=Path)

    return parser


def _parse_vector(text):
    try:
        return tuple(complex(part.strip().replace(" ", "")) for part in text.split(","))
    except ValueError:
        raise InputError(f"--vector must be comma-separated complex numbers, got {text!r}.")


def run_config_from_args(args):
    tolerances = DEFAULT_TOLERANCES
    if args.config is not None:
        tolerances = load_tolerances(args.config, tolerances)
    tolerances = tolerances.with_overrides(
        eq_abs=args.eq_abs,
        bound_slack=args.bound_slack,
        rank_tol=args.rank_tol,
        invert_floor=args.invert_floor,
    )

    return RunConfig(
        command=args.command,
        inputs=(args.input,) if hasattr(args, "input") else (),
        tolerances=tolerances,
        suite=getattr(args, "suite", None),
        dims=getattr(args, "dims", (2, 8)),
        counts=getattr(args, "counts", (2, 16)),
        draws=getattr(args, "draws", 100),
        seed=getattr(args, "seed", 0),
        replay=getattr(args, "replay", None),
        actions=tuple(getattr(args, "actions", None) or ("build",)),
        vector=_parse_vector(args.vector) if getattr(args, "vector", None) else None,
        out_path=args.out,
        output_format=OutputFormat.CSV if args.csv else OutputFormat.JSON,
    )


# --- Commands ---


def cmd_classify(config):
    """Classification, bounds and dual residuals of one sequence."""
    _require_json(config)
    tolerances = config.tolerances
    seq = io_formats.decode_sequence(io_formats.load_json(config.inputs[0]), "sequence")
    seq_class = seq.classify(tolerances)
    bounds = seq.frame_bounds()
    certificates = bessel_certificates(seq, tolerances)

    report = {
        "class": seq_class.as_dict(),
        "frame_bounds": {
            "lower": bounds.lower,
            "upper": bounds.upper,
            "is_tight": bool(bounds.is_tight),
        },
        "dim": seq.dim,
        "count": seq.count,
        "rank": numerics.singular_values(seq.synthesis_matrix).rank(tolerances),
        "certificates": [c.as_dict() for c in certificates],
    }
    if seq_class.is_riesz_basis:
        riesz = riesz_bounds(seq, tolerances)
        report["riesz_bounds"] = {"lower": riesz.lower, "upper": riesz.upper}
    if seq_class.is_frame:
        forward, backward = dual_reconstruction_residuals(seq, tolerances)
        report["canonical_dual"] = {
            "reconstruction_residuals": [forward, backward],
            "vectors": io_formats.encode_sequence(seq.canonical_dual(tolerances)),
        }

    write_output(cli_messages.classify_summary(seq_class, bounds))
    return io_formats.dumps(report), _exit_code(c.passed for c in certificates)


def cmd_multiplier(config):
    """Build a bundle and run the requested actions in order."""
    _require_json(config)
    data = io_formats.load_json(config.inputs[0])
    mult = io_formats.decode_bundle(data, "bundle")

    report = {"input_dim": mult.input_dim, "output_dim": mult.output_dim}
    certificates = []
    for action in config.actions:
        section, found = _ACTION_HANDLERS[action](mult, config, data)
        report[action] = section
        certificates.extend(found)
    report["all_passed"] = all(c.passed for c in certificates)
    return io_formats.dumps(report), _exit_code(c.passed for c in certificates)


def _action_build(mult, config, data):
    certificate = multiplier.assembly_certificate(mult, config.tolerances)
    section = {
        "assembled": io_formats.encode_matrix(mult.assembled),
        "certificate": certificate.as_dict(),
    }
    return section, [certificate]


def _action_apply(mult, config, data):
    vector = config.vector
    if vector is None and isinstance(data, dict) and "vector" in data:
        vector = io_formats.decode_vector(data["vector"], "bundle.vector")
    if vector is None:
        raise InputError(cli_messages.vector_required.strip())
    image = mult.apply(vector)
    return {"input": io_formats.encode_vector(vector), "image": io_formats.encode_vector(image)}, []


def _action_norms(mult, config, data):
    certificates = multiplier.norm_certificates(mult, config.tolerances)
    section = {
        "symbol": symbols.symbol_norms(mult.symbol).as_dict(),
        "bessel_bounds": {
            "analysis": mult.analysis_seq.bessel_bound(),
            "synthesis": mult.synthesis_seq.bessel_bound(),
        },
        "certificates": [c.as_dict() for c in certificates],
    }
    return section, certificates


def _action_adjoint(mult, config, data):
    certificate = multiplier.adjoint_check(mult, config.tolerances)
    adjoint = mult.adjoint()
    section = {
        "assembled": io_formats.encode_matrix(adjoint.assembled),
        "bundle": io_formats.encode_bundle(adjoint),
        "certificate": certificate.as_dict(),
    }
    return section, [certificate]


def _action_invert(mult, config, data):
    tolerances = config.tolerances
    riesz = all(
        seq.classify(tolerances).is_riesz_basis for seq in (mult.analysis_seq, mult.synthesis_seq)
    )
    if riesz:
        inverse, report = invertibility.riesz_inverse(mult, tolerances)
        matrix = None if inverse is None else inverse.assembled
    else:
        matrix, report = invertibility.direct_inverse_report(mult, tolerances)

    if matrix is None:
        write_output(cli_messages.not_invertible)
    section = report.as_dict()
    if matrix is not None:
        section["inverse"] = io_formats.encode_matrix(matrix)
    return section, list(report.certificates)


def _action_profile(mult, config, data):
    spectrum = multiplier.singular_profile(mult)
    section = {
        "singular_values": list(spectrum.values),
        "rank": spectrum.rank(config.tolerances),
        "symbol_singular_values": list(symbols.singular_decay(mult.symbol).values),
    }
    return section, []


_ACTION_HANDLERS = {
    "build": _action_build,
    "apply": _action_apply,
    "norms": _action_norms,
    "adjoint": _action_adjoint,
    "invert": _action_invert,
    "profile": _action_profile,
}


def cmd_check(config):
    suites = load_check_suites()
    if config.suite not in suites:
        raise ConfigError(cli_messages.unknown_suite(config.suite, suites).strip())

    report = SuiteRunner(suites[config.suite], config).run()
    write_output(cli_messages.check_summary(report))
    if not report.passed:
        write_output(cli_messages.violations_found)

    text = report.to_csv() if config.output_format is OutputFormat.CSV else report.to_json()
    return text, EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_perturb(config):
    data = io_formats.load_json(config.inputs[0])
    experiment = io_formats.decode_experiment(data, "experiment")
    report = perturbation.run_experiment(experiment, config.tolerances)
    write_output(cli_messages.perturb_summary(report))

    text = report.to_csv() if config.output_format is OutputFormat.CSV else report.to_json()
    return text, EXIT_OK if report.passed else EXIT_VIOLATION


COMMANDS = {
    "classify": cmd_classify,
    "multiplier": cmd_multiplier,
    "check": cmd_check,
    "perturb": cmd_perturb,
}


def _require_json(config):
    if config.output_format is not OutputFormat.JSON:
        raise ConfigError(f"--csv is available for check and perturb, not {config.command}.")


def _exit_code(passed):
    return EXIT_OK if all(passed) else EXIT_VIOLATION


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging(args.verbose, args.log_file)
    try:
        config = run_config_from_args(args)
        text, code = COMMANDS[config.command](config)
    except MultiplierError as e:
        logger.error(e.message)
        return EXIT_USAGE

    write_report(text, config.out_path)
    return code


if __name__ == "__main__":
    sys.exit(main())

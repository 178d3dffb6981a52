"""
Command-line entry point.

    python -m src.cli suite --background desitter --suites identities,greens
    python -m src.cli greens --operator tensor_p --kind retarded --out field.csv --format csv
"""

import argparse
import sys
from typing import Any, Dict, List, Optional, Sequence

from src.cli.export import FORMATS, dumps, export, export_report
from src.cli.inputs import bianchi_pair, greens_source, plane_wave_pair, random_vector, slice_index
from src.cli.suites import run_suite, suite_background
from src.fields import lie_derivative_metric
from src.greens import GreensKind, GreensRequest, WaveOperator, greens_apply, support_extent
from src.symplectic import (
    make_observable, observable_eval, poisson_bracket, presymplectic, presymplectic_magnitude,
)
from src.utils.config import BACKGROUND_KINDS, SUITE_NAMES, Config, config_manager
from src.utils.errors import UsageError, WorkbenchError
from src.utils.logging_config import get_logger, log_function_entry, setup_logging_from_config

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, default=None, help="YAML configuration file")
    common.add_argument('--background', choices=BACKGROUND_KINDS, default=None)
    common.add_argument('--nx', type=int, default=None, help="spatial samples")
    common.add_argument('--nt', type=int, default=None, help="time samples")
    common.add_argument('--seed', type=int, default=None)
    common.add_argument('--out', type=str, default=None, help="output path (stdout when omitted)")
    common.add_argument('--format', choices=FORMATS, default=None)
    common.add_argument('--log-level', type=str, default=None)

    parser = argparse.ArgumentParser(prog="lingrav",
                                     description="Linearized gravity verification workbench")
    commands = parser.add_subparsers(dest='command')

    suite = commands.add_parser('suite', parents=[common], help="run verification suites")
    suite.add_argument('--suites', type=str, default=None,
                       help=f"comma-separated subset of {','.join(SUITE_NAMES)}")

    greens = commands.add_parser('greens', parents=[common], help="apply a Green's operator")
    greens.add_argument('--operator', choices=[op.value for op in WaveOperator],
                        default=WaveOperator.TENSOR_P.value)
    greens.add_argument('--kind', choices=[kind.value for kind in GreensKind],
                        default=GreensKind.RETARDED.value)

    commands.add_parser('symplectic', parents=[common], help="symplectic product across slices")
    commands.add_parser('observable', parents=[common], help="evaluate a gauge-invariant observable")
    commands.add_parser('bracket', parents=[common], help="Poisson bracket of two observables")
    return parser


def _split_suites(text: Optional[str]) -> Optional[List[str]]:
    if text is None:
        return None
    return [name.strip() for name in text.split(',') if name.strip()]


def resolve_config(args: argparse.Namespace) -> Config:
    """Configuration file (or defaults) overridden by command-line flags."""
    config = Config.load_from_file(args.config) if args.config else config_manager.get_config()
    config = Config.from_dict(config.to_dict())
    if args.background is not None:
        config.background.kind = args.background
    if args.nx is not None:
        config.grid.nx = args.nx
    if args.nt is not None:
        config.grid.nt = args.nt
    if args.seed is not None:
        config.suite.seed = args.seed
    if args.format is not None:
        config.suite.output_format = args.format
    if args.out is not None:
        config.suite.output_path = args.out
    suites = _split_suites(getattr(args, 'suites', None))
    if suites is not None:
        if not suites:
            raise UsageError("empty suite list", known=list(SUITE_NAMES))
        config.suite.suites = suites
    if args.log_level is not None:
        config.logging.level = args.log_level
    try:
        config.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return config


def _emit(payload: Any, config: Config) -> None:
    if config.suite.output_path:
        export(payload, config.suite.output_path, config.suite.output_format)
        logger.info(f"💾 Wrote {config.suite.output_path}")
    else:
        body = payload.to_dict() if hasattr(payload, 'to_dict') else payload
        sys.stdout.write(dumps(body))


# ============================================================================
# Subcommands
# ============================================================================

@log_function_entry
def cmd_suite(config: Config) -> int:
    report = run_suite(config)
    if config.suite.output_path:
        export_report(report, config.suite.output_path, config.suite.output_format)
        logger.info(f"💾 Wrote {config.suite.output_path}")
    else:
        sys.stdout.write(dumps(report.to_dict()))
    return EXIT_OK if report.passed else EXIT_FAILED


@log_function_entry
def cmd_greens(config: Config, operator: str, kind: str) -> int:
    bg = suite_background(config)
    wave_operator = WaveOperator(operator)
    source = greens_source(bg, wave_operator, config.suite.seed)
    solution = greens_apply(bg, GreensRequest(wave_operator, GreensKind(kind), source))
    extent = support_extent(solution, bg=bg, source=source)
    logger.info(f"🌊 {kind} {operator}: max {solution.norm():.3e}, "
                f"leak outside stencil cones {extent.leaks['outside_stencil_cones']:.3e}")
    if config.suite.output_path:
        _emit(solution, config)
    else:
        _emit({'operator': operator, 'kind': kind, 'max': solution.norm(),
               'support': extent.to_dict()}, config)
    return EXIT_OK


@log_function_entry
def cmd_symplectic(config: Config) -> int:
    bg = suite_background(config)
    gamma1, gamma2 = plane_wave_pair(bg, config.suite.seed)
    slices = [slice_index(bg, fraction) for fraction in (0.2, 0.4, 0.6, 0.8)]
    values = [presymplectic(bg, gamma1, gamma2, sigma) for sigma in slices]
    scale = presymplectic_magnitude(bg, gamma1, gamma2, slices[0])
    spread = max(abs(v - values[0]) for v in values) / max(scale, 1e-300)
    logger.info(f"🔁 omega across {len(slices)} slices: relative spread {spread:.3e}")
    _emit({'slices': slices, 'values': values, 'relative_spread': spread}, config)
    return EXIT_OK


@log_function_entry
def cmd_observable(config: Config) -> int:
    bg = suite_background(config)
    seed = config.suite.seed
    f, _ = bianchi_pair(bg, seed)
    observable = make_observable(bg, f, label="bianchi")
    wave, _ = plane_wave_pair(bg, seed + 1)
    pure_gauge = lie_derivative_metric(bg, random_vector(bg, seed + 2))
    result: Dict[str, Any] = observable.to_dict()
    result['on_solution'] = observable_eval(bg, observable, wave)
    result['on_pure_gauge'] = observable_eval(bg, observable, pure_gauge)
    _emit(result, config)
    return EXIT_OK


@log_function_entry
def cmd_bracket(config: Config) -> int:
    bg = suite_background(config)
    f1, f2 = bianchi_pair(bg, config.suite.seed)
    result = poisson_bracket(bg, make_observable(bg, f1, label="f1"), make_observable(bg, f2, label="f2"))
    logger.info(f"🔗 Bracket {result.value:.6e}, discrepancy {result.discrepancy:.3e}")
    _emit(result, config)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0].startswith('-'):
        argv = ['suite'] + argv
    args = parser.parse_args(argv)

    try:
        config = resolve_config(args)
        setup_logging_from_config(dict(config.logging.__dict__))
        if args.command == 'suite':
            return cmd_suite(config)
        if args.command == 'greens':
            return cmd_greens(config, args.operator, args.kind)
        if args.command == 'symplectic':
            return cmd_symplectic(config)
        if args.command == 'observable':
            return cmd_observable(config)
        return cmd_bracket(config)
    except UsageError as exc:
        logger.error(f"🚫 {exc.message}")
        return EXIT_USAGE
    except WorkbenchError as exc:
        logger.error(f"🔴 {exc.error_code}: {exc.message}")
        return EXIT_FAILED
    except OSError as exc:
        logger.error(f"🔴 I/O failure: {exc}")
        return EXIT_FAILED

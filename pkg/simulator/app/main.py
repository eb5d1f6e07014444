"""
Command-line entry point for the DCC beaconing simulator.

    python -m app.main run [config.yaml] [--variant reactive3 --density dense --alpha 0.5 --seed 7 --out DIR]
    python -m app.main sweep sweep.yaml [--parallelism 4 --out DIR]
    python -m app.main plot DIR [--family pdr --family bins]
    python -m app.main validate-config config.yaml
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from . import __version__
from .config import settings
from .models import ConfigError, DensityName, Variant, dump_yaml, load_run_config, load_sweep_spec
from .orchestrator import SweepOrchestrator, run
from .plotting import PlotFamily, plot_directory
from .utils import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG_ERROR = 2


def _run_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {}
    if args.variant is not None:
        overrides["variant"] = args.variant
    if args.alpha is not None:
        overrides["alpha"] = args.alpha
    if args.seed is not None:
        overrides["seed"] = args.seed
    scenario: Dict[str, Any] = {}
    if args.density is not None:
        scenario["density"] = args.density
    if args.heterogeneity is not None:
        scenario["heterogeneity"] = args.heterogeneity
    if scenario:
        overrides["scenario"] = scenario
    return overrides


def cmd_run(args: argparse.Namespace) -> int:
    config = load_run_config(args.config, _run_overrides(args))
    out_dir = args.out or settings.output_dir / config.run_id()
    result = run(config, out_dir)
    print(f"{config.run_id()}: {result.frames_generated} CAMs, {result.wall_ms} ms -> {out_dir}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    overrides = {"seeds": [args.seed]} if args.seed is not None else None
    spec = load_sweep_spec(args.spec, overrides)
    out_dir = args.out or spec.output_dir or settings.output_dir / Path(args.spec).stem
    parallelism = args.parallelism or settings.parallelism
    results = SweepOrchestrator(spec, out_dir, parallelism).sweep()
    failed = [r for r in results if not r["success"]]
    print(f"{len(results) - len(failed)}/{len(results)} runs succeeded -> {out_dir}")
    for result in failed:
        print(f"  FAILED {result['run_id']}: {result['error_type']}: {result['error']}", file=sys.stderr)
    return EXIT_FAILURE if failed else EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    families = [PlotFamily(f) for f in args.family] if args.family else None
    paths = plot_directory(args.directory, families, fmt=args.format or settings.plot_format, out_dir=args.out)
    for path in paths:
        print(path)
    return EXIT_OK


def cmd_validate_config(args: argparse.Namespace) -> int:
    config = load_run_config(args.config)
    print(dump_yaml(config.model_dump(mode="json")), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dccsim",
        description="Discrete-event simulator for reactive DCC CAM beaconing on a highway.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_run = subparsers.add_parser("run", help="simulate one configuration")
    p_run.add_argument("config", nargs="?", type=Path, help="run config YAML or a run_meta.yaml")
    p_run.add_argument("--variant", choices=[v.value for v in Variant])
    p_run.add_argument("--density", choices=[d.value for d in DensityName])
    p_run.add_argument("--alpha", type=float, help="EWMA weight of the newest CBR, in [0, 1]")
    p_run.add_argument(
        "--heterogeneity",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="non-identical sensing (random per-node sensitivity offsets)",
    )
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--out", type=Path, help="output directory (default: $DCCSIM_OUTPUT_DIR/<run id>)")
    p_run.set_defaults(handler=cmd_run)

    p_sweep = subparsers.add_parser("sweep", help="run the cross product of a sweep spec")
    p_sweep.add_argument("spec", type=Path)
    p_sweep.add_argument("--parallelism", type=int, help="worker processes (default: $DCCSIM_PARALLELISM)")
    p_sweep.add_argument("--seed", type=int, help="replace the spec's seed list with one seed")
    p_sweep.add_argument("--out", type=Path)
    p_sweep.set_defaults(handler=cmd_sweep)

    p_plot = subparsers.add_parser("plot", help="render figures from a run or sweep directory")
    p_plot.add_argument("directory", type=Path)
    p_plot.add_argument(
        "--family",
        action="append",
        choices=[f.value for f in PlotFamily],
        help="figure family; repeat for several (default: all applicable)",
    )
    p_plot.add_argument("--format", choices=["svg", "pdf"])
    p_plot.add_argument("--out", type=Path, help="image directory (default: the input directory)")
    p_plot.set_defaults(handler=cmd_plot)

    p_validate = subparsers.add_parser("validate-config", help="check a run config and print it resolved")
    p_validate.add_argument("config", type=Path)
    p_validate.set_defaults(handler=cmd_validate_config)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging()
    logger.debug(f"Settings: {settings.describe()}")
    try:
        return args.handler(args)
    except ConfigError as e:
        logger.error(f"{e}")
        for path, message in e.problems:
            print(f"config error: {path}: {message}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (FileNotFoundError, ValueError, RuntimeError, OSError) as e:
        logger.error(f"{args.command} failed: {e}", exc_info=settings.log_level.value == "DEBUG")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

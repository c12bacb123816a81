"""
命令行入口

退出码: 0 成功，1 其他数值失败，2 配置错误，3 数值发散（仍写出 JSON 报告），4 IO 错误
"""
import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from ..config_manager import ConfigManager, CACHE_DIR_ENV
from ..core.exceptions import LabError, ParameterError
from .cache import ResultCache
from .commands import describe_tables
from .exceptions import ConfigError, OutputError
from .runner import load_experiment_config, report_summary, run
from .types import COMMAND_NAMES, ExperimentConfig

logger = logging.getLogger("experiments.cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divlab",
        description="Numerical experiments for Schrödinger operators with divergence-form potentials.",
        epilog=f"output tables per command:\n{describe_tables()}\n\n"
               f"the cache directory can be overridden with {CACHE_DIR_ENV}",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("command", choices=COMMAND_NAMES)
    parser.add_argument("--config", help="YAML experiment config")
    parser.add_argument("--seed", type=int, help="override the experiment seed")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--no-cache", action="store_true", help="neither read nor write the result cache")
    parser.add_argument("--lab-config", help="lab config (default config/lab_config.yaml)")
    parser.add_argument("--verbose", "-v", action="store_true", help="log at DEBUG level")
    return parser


def _configure_logging(level: str, verbose: bool) -> None:
    logging.basicConfig(format="%(asctime)s %(name)s %(levelname)s %(message)s")
    logging.getLogger().setLevel(logging.DEBUG if verbose else getattr(logging, level))


def _experiment(args: argparse.Namespace, lab) -> ExperimentConfig:
    base: Dict[str, Any] = {
        'output_dir': lab.output_directory,
        'plots': lab.plots,
        'seed': lab.defaults.seed,
    }
    if args.config:
        config = load_experiment_config(args.config, overrides={'command': args.command}, base=base)
    else:
        config = ExperimentConfig.from_dict({**base, 'command': args.command})
    return config.with_overrides(seed=args.seed, output_dir=args.out,
                                 cache=False if args.no_cache else None)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        lab = ConfigManager(args.lab_config).config
    except (FileNotFoundError, ParameterError) as e:
        print(f"lab config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    _configure_logging(lab.logging_level, args.verbose)

    try:
        config = _experiment(args, lab)
        cache = ResultCache(lab.cache_directory) if lab.cache.enabled else None
        defaults = {'quadrature': lab.defaults.quadrature, **lab.defaults.monte_carlo}
        report = run(args.command, config, cache, defaults)
    except ConfigError as e:
        print("config error:", file=sys.stderr)
        for problem in e.problems:
            print(f"  {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except ParameterError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (OutputError, OSError) as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO
    except LabError as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        return EXIT_FAILURE

    print(json.dumps(report_summary(report), indent=2, sort_keys=True))
    return EXIT_DIVERGED if report.diverged else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""
实验运行：校验 → 缓存查找 → 执行命令 → 写出结果 → 入缓存
"""
import time
from pathlib import Path
from typing import Any, Dict, Optional

import logging

import yaml

from ..config_manager import resolve_env_vars
from ..core.exceptions import DivergenceError
from ..core.serialization import to_serializable
from .cache import ResultCache
from .commands import get_command
from .exceptions import ConfigError
from .output import write_outputs
from .types import CommandOutcome, ExperimentConfig, RunReport

logger = logging.getLogger("experiments.runner")


def load_experiment_config(path: str, overrides: Optional[Dict[str, Any]] = None,
                           base: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    读取 YAML 实验配置，解析 ${VAR:default}

    base 提供文件中缺省的键，overrides 覆盖文件中的键
    """
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigError([f"config file not found: {path}"], str(path))
    except yaml.YAMLError as e:
        raise ConfigError([f"YAML parse error: {e}"], str(path))
    data = resolve_env_vars(data if data is not None else {})
    if isinstance(data, dict):
        data = {**(base or {}), **data, **(overrides or {})}
    return ExperimentConfig.from_dict(data, str(path))


def _provenance(config: ExperimentConfig) -> Dict[str, Any]:
    return {
        'seed': config.seed,
        'quadrature': config.quadrature,
        'fields': config.fields,
        'wavenumbers': config.wavenumbers,
        'params': config.params,
    }


def _execute(config: ExperimentConfig, defaults: Dict[str, Any]) -> CommandOutcome:
    fn = get_command(config.command)
    if fn is None:
        raise ConfigError([f"command: unknown command {config.command!r}"])
    try:
        return fn(config, defaults)
    except DivergenceError as e:
        # 发散是可报告的结果
        logger.warning(f"{config.command}: {e}")
        return CommandOutcome(tables={}, status="diverged", diagnostics={
            'error': str(e),
            'orders': e.orders,
        })


def run(command: str, config: ExperimentConfig, cache: Optional[ResultCache] = None,
        defaults: Optional[Dict[str, Any]] = None, write: bool = True) -> RunReport:
    """
    执行 command 对应的流水线

    cache 为 None 或 config.cache 为 false 时不读写缓存；
    命中时结果表取自缓存，输出文件照常写出
    """
    if command != config.command:
        config = ExperimentConfig.from_dict({**config.to_dict(), 'command': command})
    digest = config.digest()
    use_cache = cache is not None and config.cache

    report = cache.lookup(digest) if use_cache else None
    if report is None:
        start = time.perf_counter()
        outcome = _execute(config, defaults or {})
        elapsed = time.perf_counter() - start
        report = RunReport(
            command=command, config_digest=digest, status=outcome.status,
            tables=outcome.tables, diagnostics=outcome.diagnostics,
            provenance=_provenance(config), timings={'compute_seconds': elapsed},
            plots=outcome.plots,
            message=outcome.diagnostics.get('error', '') if outcome.status == "diverged" else "",
        )
        logger.info(f"{command} finished in {elapsed:.2f}s (status {report.status})")
        if use_cache and not report.diverged:
            cache.store(report)

    if write:
        stem = config.name or command
        write_outputs(report, Path(config.output_dir), stem, config.plots)
    return report


def report_summary(report: RunReport) -> Dict[str, Any]:
    """命令行打印的摘要"""
    return to_serializable({
        'command': report.command,
        'status': report.status,
        'config_digest': report.config_digest,
        'table_digest': report.table_digest(),
        'cache_hit': report.cache_hit,
        'tables': {name: len(rows) for name, rows in report.tables.items()},
    })

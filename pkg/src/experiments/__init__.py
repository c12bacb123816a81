"""
实验模块

实验配置、命令注册表、结果缓存、输出与命令行入口
"""

from .exceptions import ConfigError, CacheError, OutputError
from .types import (
    ExperimentConfig, RunReport, CommandOutcome, DecayPlot,
    COMMAND_NAMES, FIELD_KINDS, parse_wavenumber
)
from .builders import build_field, field_role, anderson_spec_from
from .commands import COMMANDS, TABLES, get_command, describe_tables
from .cache import ResultCache, cache_lookup, default_cache_dir
from .output import write_csv, write_json, write_decay_plot, write_outputs, table_csv
from .runner import run, load_experiment_config, report_summary
from .cli import main, build_parser

__all__ = [
    # 异常
    'ConfigError',
    'CacheError',
    'OutputError',

    # 类型
    'ExperimentConfig',
    'RunReport',
    'CommandOutcome',
    'DecayPlot',
    'COMMAND_NAMES',
    'FIELD_KINDS',
    'parse_wavenumber',

    # 场构造
    'build_field',
    'field_role',
    'anderson_spec_from',

    # 命令
    'COMMANDS',
    'TABLES',
    'get_command',
    'describe_tables',

    # 缓存
    'ResultCache',
    'cache_lookup',
    'default_cache_dir',

    # 输出
    'write_csv',
    'write_json',
    'write_decay_plot',
    'write_outputs',
    'table_csv',

    # 运行
    'run',
    'load_experiment_config',
    'report_summary',
    'main',
    'build_parser',
]

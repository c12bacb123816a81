"""
实验层数据类型
"""
import hashlib
from copy import deepcopy
from dataclasses import dataclass, field, fields as dataclass_fields, replace
from typing import Any, Dict, List, Optional

from ..core.exceptions import ParameterError
from ..core.serialization import canonical_json, to_serializable
from ..core.types import ComplexWavenumber
from ..quadrature.types import QuadratureSpec
from .exceptions import ConfigError


# 可运行的命令
COMMAND_NAMES = (
    'green', 'resolvent', 'amplitude', 'density', 'entropy',
    'eikonal', 'helmholtz', 'anderson', 'verify-lemmas', 'dirac-check',
)

# fields 段中可构造的场
FIELD_KINDS = (
    'zero', 'bump_field', 'bump_potential', 'gaussian_potential', 'gaussian_gradient',
    'example1', 'example1_potential', 'example2', 'ball_indicator', 'proposition',
    'anderson_sample',
)

CONFIG_KEYS = (
    'name', 'command', 'fields', 'wavenumbers', 'quadrature', 'seed',
    'output_dir', 'cache', 'plots', 'params',
)

# 不影响计算结果的键，不参与摘要
_PLUMBING_KEYS = ('output_dir', 'cache', 'plots')

_QUADRATURE_KEYS = tuple(f.name for f in dataclass_fields(QuadratureSpec))


def parse_wavenumber(value: Any) -> ComplexWavenumber:
    """实数、[tau, delta] 或 "1+0.5j" 形式的复数"""
    if isinstance(value, bool):
        raise ParameterError(f"not a wavenumber: {value!r}")
    if isinstance(value, (int, float)):
        return ComplexWavenumber(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return ComplexWavenumber(float(value[0]), float(value[1]))
    if isinstance(value, str):
        try:
            return ComplexWavenumber.from_complex(complex(value.replace(' ', '')))
        except ValueError:
            pass
    raise ParameterError(f"not a wavenumber: {value!r}")


def _wavenumber_problems(key: str, value: Any) -> List[str]:
    # 单个值或值列表
    items = value if isinstance(value, list) and value and not _is_pair(value) else [value]
    problems = []
    for item in items:
        try:
            parse_wavenumber(item)
        except (ParameterError, TypeError, ValueError):
            problems.append(f"wavenumbers.{key}: not a wavenumber: {item!r}")
    return problems


def _is_pair(value: list) -> bool:
    return len(value) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)


def config_problems(data: Dict[str, Any]) -> List[str]:
    """逐键检查，返回全部问题"""
    problems = [f"{key}: unknown key" for key in sorted(set(data) - set(CONFIG_KEYS))]

    command = data.get('command')
    if command is None:
        problems.append("command: required")
    elif command not in COMMAND_NAMES:
        problems.append(f"command: unknown command {command!r}, expected one of {', '.join(COMMAND_NAMES)}")

    roles = data.get('fields', {})
    if not isinstance(roles, dict):
        problems.append("fields: must be a mapping of role -> field description")
    else:
        for role, desc in roles.items():
            if not isinstance(desc, dict):
                problems.append(f"fields.{role}: must be a mapping")
            elif desc.get('kind') not in FIELD_KINDS:
                problems.append(f"fields.{role}.kind: unknown field kind {desc.get('kind')!r}")

    wavenumbers = data.get('wavenumbers', {})
    if not isinstance(wavenumbers, dict):
        problems.append("wavenumbers: must be a mapping")
    else:
        for key, value in wavenumbers.items():
            problems.extend(_wavenumber_problems(key, value))

    quadrature = data.get('quadrature', {})
    if not isinstance(quadrature, dict):
        problems.append("quadrature: must be a mapping")
    else:
        unknown = sorted(set(quadrature) - set(_QUADRATURE_KEYS))
        problems.extend(f"quadrature.{key}: unknown key" for key in unknown)
        if not unknown:
            try:
                QuadratureSpec(**quadrature)
            except (ParameterError, TypeError) as e:
                problems.append(f"quadrature: {e}")

    seed = data.get('seed', 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        problems.append(f"seed: must be a non-negative integer, got {seed!r}")
    for key in ('cache', 'plots'):
        if not isinstance(data.get(key, True), bool):
            problems.append(f"{key}: must be true or false")
    output_dir = data.get('output_dir', 'results')
    if not isinstance(output_dir, str) or not output_dir:
        problems.append("output_dir: must be a non-empty path")
    if not isinstance(data.get('params', {}), dict):
        problems.append("params: must be a mapping")
    if not isinstance(data.get('name', ''), str):
        problems.append("name: must be a string")
    return problems


@dataclass
class ExperimentConfig:
    """
    一次实验的完整配置

    fields 按角色（Q、f、V、v）给出场的描述 {'kind': ..., 参数...}，
    params 为命令专属参数，每个命令的默认值见 commands 模块
    """
    command: str
    name: str = ""
    fields: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    wavenumbers: Dict[str, Any] = field(default_factory=dict)
    quadrature: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    output_dir: str = "results"
    cache: bool = True
    plots: bool = True
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        problems = config_problems(self.to_dict())
        if problems:
            raise ConfigError(problems)

    @classmethod
    def from_dict(cls, data: Any, source: Optional[str] = None) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError(["config must be a mapping"], source)
        problems = config_problems(data)
        if problems:
            raise ConfigError(problems, source)
        return cls(**data)

    def to_dict(self) -> Dict[str, Any]:
        return deepcopy({key: getattr(self, key) for key in CONFIG_KEYS})

    def identity(self) -> Dict[str, Any]:
        """决定结果的部分"""
        return {k: v for k, v in self.to_dict().items() if k not in _PLUMBING_KEYS}

    def digest(self) -> str:
        """规范化配置的 SHA-256"""
        return hashlib.sha256(canonical_json(self.identity()).encode('utf-8')).hexdigest()

    def with_overrides(self, seed: Optional[int] = None, output_dir: Optional[str] = None,
                       cache: Optional[bool] = None) -> "ExperimentConfig":
        """命令行 --seed / --out / --no-cache"""
        changes: Dict[str, Any] = {}
        if seed is not None:
            changes['seed'] = seed
        if output_dir is not None:
            changes['output_dir'] = output_dir
        if cache is not None:
            changes['cache'] = cache
        return replace(self, **changes)

    def quadrature_spec(self, defaults: Optional[Dict[str, Any]] = None) -> QuadratureSpec:
        return QuadratureSpec(**{**(defaults or {}), **self.quadrature})

    def wavenumber(self, key: str = 'k', default: Any = None) -> ComplexWavenumber:
        value = self.wavenumbers.get(key, default)
        if value is None:
            raise ConfigError([f"wavenumbers.{key}: required for command {self.command!r}"])
        return parse_wavenumber(value)

    def wavenumber_list(self, key: str = 'ks', default: Any = None) -> List[ComplexWavenumber]:
        value = self.wavenumbers.get(key, default)
        if value is None:
            raise ConfigError([f"wavenumbers.{key}: required for command {self.command!r}"])
        if isinstance(value, list) and not _is_pair(value):
            return [parse_wavenumber(v) for v in value]
        return [parse_wavenumber(value)]


@dataclass
class DecayPlot:
    """log-log 衰减图：半径对幅值，附拟合斜率"""
    name: str
    radii: List[float]
    values: List[float]
    exponent: Optional[float] = None
    ylabel: str = "magnitude"


@dataclass
class CommandOutcome:
    """命令的计算结果"""
    tables: Dict[str, List[Dict[str, Any]]]
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    plots: List[DecayPlot] = field(default_factory=list)
    status: str = "ok"


@dataclass
class RunReport:
    """
    运行报告

    tables 只依赖 (配置, 种子)，timings 与 cache_hit 不进入结果表
    """
    command: str
    config_digest: str
    status: str = "ok"
    tables: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    provenance: Dict[str, Any] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)
    plots: List[DecayPlot] = field(default_factory=list)
    cache_hit: bool = False
    message: str = ""

    def __post_init__(self):
        if self.status not in ("ok", "diverged"):
            raise ParameterError(f"unknown run status: {self.status}")
        self.tables = to_serializable(self.tables)
        self.diagnostics = to_serializable(self.diagnostics)
        self.provenance = to_serializable(self.provenance)

    @property
    def diverged(self) -> bool:
        return self.status == "diverged"

    def table_digest(self) -> str:
        return hashlib.sha256(canonical_json(self.tables).encode('utf-8')).hexdigest()

    def to_dict(self) -> Dict[str, Any]:
        data = to_serializable(self)
        data['table_digest'] = self.table_digest()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunReport":
        payload = {k: v for k, v in data.items() if k != 'table_digest'}
        payload['plots'] = [DecayPlot(**p) for p in payload.get('plots', [])]
        report = cls(**payload)
        if 'table_digest' in data and data['table_digest'] != report.table_digest():
            raise ParameterError("stored report does not match its table digest")
        return report

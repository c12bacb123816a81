"""
系统配置管理模块
"""
import os
import re
import yaml
from pathlib import Path
from typing import Dict, Any, Optional
from dataclasses import dataclass, field

from .core.exceptions import ParameterError


# 缓存目录覆盖
CACHE_DIR_ENV = "DIVLAB_CACHE_DIR"

_ENV_PATTERN = re.compile(r'\$\{([^}:]+)(?::([^}]*))?\}')


def resolve_env_vars(config: Any) -> Any:
    """
    递归解析配置中的环境变量

    支持格式:
    - ${VAR_NAME} - 环境变量，不存在时为空字符串
    - ${VAR_NAME:default} - 带默认值的环境变量
    """
    if isinstance(config, dict):
        return {k: resolve_env_vars(v) for k, v in config.items()}
    elif isinstance(config, list):
        return [resolve_env_vars(item) for item in config]
    elif isinstance(config, str):
        def replace_env_var(match):
            env_value = os.getenv(match.group(1))
            if env_value is not None:
                return env_value
            return match.group(2) if match.group(2) is not None else ""

        return _ENV_PATTERN.sub(replace_env_var, config)
    else:
        return config


@dataclass
class SystemConfig:
    """系统配置"""
    name: str
    version: str


@dataclass
class CacheConfig:
    """缓存配置"""
    enabled: bool
    directory: str


@dataclass
class DefaultsConfig:
    """实验默认参数"""
    seed: int = 0
    quadrature: Dict[str, Any] = field(default_factory=dict)
    monte_carlo: Dict[str, Any] = field(default_factory=dict)


@dataclass
class Config:
    """完整配置"""
    system: SystemConfig
    logging_level: str
    cache: CacheConfig
    output_directory: str
    plots: bool
    defaults: DefaultsConfig

    @property
    def cache_directory(self) -> Path:
        """环境变量 DIVLAB_CACHE_DIR 优先于配置文件"""
        return Path(os.getenv(CACHE_DIR_ENV) or self.cache.directory)


class ConfigManager:
    """配置管理器"""

    def __init__(self, config_path: Optional[str] = None):
        """
        初始化配置管理器

        Args:
            config_path: 配置文件路径，默认为 config/lab_config.yaml
        """
        if config_path is None:
            # __file__ 在 src/config_manager.py，parent.parent 是项目根目录
            project_root = Path(__file__).parent.parent
            config_path = project_root / "config" / "lab_config.yaml"

        self.config_path = Path(config_path)
        self.config = self.load_config()

    def load_config(self) -> Config:
        """加载配置文件"""
        if not self.config_path.exists():
            raise FileNotFoundError(f"Config file not found: {self.config_path}")

        with open(self.config_path, 'r', encoding='utf-8') as f:
            data = resolve_env_vars(yaml.safe_load(f) or {})

        system = SystemConfig(
            name=data.get('system', {}).get('name', 'divlab'),
            version=str(data.get('system', {}).get('version', '0.0.0'))
        )

        level = str(data.get('logging', {}).get('level', 'INFO')).upper()
        if level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            raise ParameterError(f"Unknown logging level: {level}")

        cache_data = data.get('cache', {})
        cache = CacheConfig(
            enabled=bool(cache_data.get('enabled', True)),
            directory=cache_data.get('directory') or '.divlab_cache'
        )

        output_data = data.get('output', {})
        defaults_data = data.get('defaults', {})
        defaults = DefaultsConfig(
            seed=int(defaults_data.get('seed', 0)),
            quadrature=dict(defaults_data.get('quadrature', {})),
            monte_carlo=dict(defaults_data.get('monte_carlo', {}))
        )

        return Config(
            system=system,
            logging_level=level,
            cache=cache,
            output_directory=output_data.get('directory', 'results'),
            plots=bool(output_data.get('plots', True)),
            defaults=defaults
        )

    def print_config(self):
        """打印当前配置"""
        print(f"=== {self.config.system.name} v{self.config.system.version} ===")
        print(f"\n日志级别: {self.config.logging_level}")
        print(f"缓存: {'✅ 启用' if self.config.cache.enabled else '❌ 禁用'} ({self.config.cache_directory})")
        print(f"输出目录: {self.config.output_directory}")
        print(f"默认种子: {self.config.defaults.seed}")
        print(f"默认求积: {self.config.defaults.quadrature}")


# 全局配置实例
_config_manager: Optional[ConfigManager] = None


def get_config_manager(config_path: Optional[str] = None) -> ConfigManager:
    """获取全局配置管理器实例"""
    global _config_manager
    if _config_manager is None:
        _config_manager = ConfigManager(config_path)
    return _config_manager


def get_config() -> Config:
    """获取配置对象"""
    return get_config_manager().config

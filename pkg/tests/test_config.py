"""
配置管理器测试
"""
from pathlib import Path

import pytest
import yaml

from src.config_manager import ConfigManager, get_config, get_config_manager, resolve_env_vars
from src.core import ParameterError


def write_lab_config(path: Path, **sections) -> Path:
    data = {
        'system': {'name': 'divlab-test', 'version': '0.1'},
        'logging': {'level': 'info'},
        'cache': {'enabled': True, 'directory': '${DIVLAB_CACHE_DIR:.divlab_cache}'},
        'output': {'directory': 'out', 'plots': False},
        'defaults': {'seed': 5, 'quadrature': {'n_theta': 8}, 'monte_carlo': {'n_walkers': 1000}},
    }
    data.update(sections)
    path.write_text(yaml.safe_dump(data), encoding='utf-8')
    return path


def test_load_default_config():
    """测试加载随附配置"""
    manager = ConfigManager()
    config = manager.config
    assert config.logging_level in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')
    assert config.defaults.quadrature['tol'] == 1e-8
    assert config.defaults.monte_carlo['n_realizations'] == 200


def test_load_config(tmp_path, monkeypatch):
    """测试加载配置"""
    monkeypatch.delenv("DIVLAB_CACHE_DIR", raising=False)
    config = ConfigManager(str(write_lab_config(tmp_path / "lab.yaml"))).config
    assert config.system.name == 'divlab-test'
    assert config.logging_level == 'INFO'
    assert config.output_directory == 'out'
    assert config.plots is False
    assert config.defaults.seed == 5
    assert config.cache_directory == Path('.divlab_cache')


def test_cache_dir_env_override(tmp_path, monkeypatch):
    """环境变量覆盖缓存目录"""
    monkeypatch.setenv("DIVLAB_CACHE_DIR", str(tmp_path / "cache"))
    config = ConfigManager(str(write_lab_config(tmp_path / "lab.yaml"))).config
    assert config.cache_directory == tmp_path / "cache"


def test_bad_logging_level(tmp_path):
    """未知日志级别"""
    path = write_lab_config(tmp_path / "lab.yaml", logging={'level': 'LOUD'})
    with pytest.raises(ParameterError):
        ConfigManager(str(path))


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        ConfigManager(str(tmp_path / "absent.yaml"))


def test_resolve_env_vars(monkeypatch):
    """${VAR} 与 ${VAR:default}"""
    monkeypatch.setenv("DIVLAB_X", "1")
    monkeypatch.delenv("DIVLAB_Y", raising=False)
    data = {'a': '${DIVLAB_X}', 'b': ['${DIVLAB_Y:two}', 3], 'c': '${DIVLAB_Y}'}
    assert resolve_env_vars(data) == {'a': '1', 'b': ['two', 3], 'c': ''}


def test_print_config(capsys):
    """测试打印配置"""
    get_config_manager().print_config()
    out = capsys.readouterr().out
    assert get_config().system.name in out

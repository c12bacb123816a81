"""
实验层测试：配置校验、摘要、缓存、输出与命令行
"""
import json
from dataclasses import replace
from pathlib import Path

import pytest
import yaml

from src.core import DivergenceError, ParameterError
from src.experiments import (
    COMMAND_NAMES, ConfigError, ExperimentConfig, ResultCache, RunReport, load_experiment_config,
    main, parse_wavenumber, run
)
from src.experiments import commands


LAB_CONFIG = {
    'system': {'name': 'divlab-test', 'version': '0.0.1'},
    'logging': {'level': 'WARNING'},
    'cache': {'enabled': True, 'directory': '${DIVLAB_CACHE_DIR:.divlab_cache}'},
    'output': {'directory': 'results', 'plots': True},
    'defaults': {'seed': 0, 'quadrature': {}, 'monte_carlo': {'n_walkers': 1000, 'n_realizations': 50}},
}


def free_green_config(**overrides):
    data = {
        'command': 'green',
        'name': 'free',
        'wavenumbers': {'k': [1.0, 0.5]},
        'params': {'radii': [2.0, 4.0, 8.0], 'n_random': 20},
        'seed': 7,
    }
    data.update(overrides)
    return ExperimentConfig.from_dict(data)


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    path = tmp_path / "cache"
    monkeypatch.setenv("DIVLAB_CACHE_DIR", str(path))
    return path


@pytest.fixture
def lab_config(tmp_path):
    path = tmp_path / "lab_config.yaml"
    path.write_text(yaml.safe_dump(LAB_CONFIG), encoding="utf-8")
    return path


def write_yaml(path, data):
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path


class TestExperimentConfig:
    """实验配置校验与摘要"""

    def test_lists_every_problem(self):
        with pytest.raises(ConfigError) as excinfo:
            ExperimentConfig.from_dict({
                'command': 'nope',
                'seed': -1,
                'bogus': 1,
                'quadrature': {'n_thetaa': 3},
                'fields': {'Q': {'kind': 'mystery'}},
                'wavenumbers': {'k': 'not-a-number'},
            })
        problems = excinfo.value.problems
        assert len(problems) == 6
        for key in ('bogus', 'command', 'seed', 'quadrature.n_thetaa', 'fields.Q.kind', 'wavenumbers.k'):
            assert any(p.startswith(key) for p in problems), key

    def test_non_mapping_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(["green"])

    def test_wavenumber_forms(self):
        assert parse_wavenumber(2).k == 2.0
        assert parse_wavenumber([1.0, 0.5]).k == complex(1.0, 0.5)
        assert parse_wavenumber("1+0.5j").k == complex(1.0, 0.5)

    def test_k0_forms(self):
        assert commands._config_k0([1.0, 0.3]) == complex(1.0, 0.3)
        assert commands._config_k0("1 + 0.3j") == complex(1.0, 0.3)
        with pytest.raises(ConfigError):
            commands._config_k0("apex")

    def test_digest_ignores_plumbing(self):
        config = free_green_config()
        moved = config.with_overrides(output_dir="elsewhere", cache=False)
        assert moved.digest() == config.digest()
        assert config.with_overrides(seed=8).digest() != config.digest()

    def test_digest_sees_one_tolerance_digit(self):
        a = free_green_config(quadrature={'tol': 1e-8})
        b = free_green_config(quadrature={'tol': 2e-8})
        assert a.digest() != b.digest()

    def test_yaml_round_trip(self, tmp_path):
        config = free_green_config()
        path = write_yaml(tmp_path / "exp.yaml", config.to_dict())
        loaded = load_experiment_config(path)
        assert loaded == config
        assert loaded.digest() == config.digest()

    def test_env_vars_resolved(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DIVLAB_TEST_OUT", str(tmp_path / "out"))
        path = write_yaml(tmp_path / "exp.yaml", {'command': 'green', 'output_dir': '${DIVLAB_TEST_OUT:fallback}'})
        assert load_experiment_config(path).output_dir == str(tmp_path / "out")
        monkeypatch.delenv("DIVLAB_TEST_OUT")
        assert load_experiment_config(path).output_dir == "fallback"

    def test_base_and_overrides(self, tmp_path):
        path = write_yaml(tmp_path / "exp.yaml", {'command': 'green', 'seed': 4})
        config = load_experiment_config(path, overrides={'command': 'dirac-check'}, base={'seed': 1, 'plots': False})
        assert config.command == 'dirac-check'
        assert config.seed == 4
        assert config.plots is False

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_experiment_config(tmp_path / "absent.yaml")


class TestResultCache:
    """结果缓存"""

    def _report(self, config):
        return RunReport(command='green', config_digest=config.digest(),
                         tables={'green': [{'radius': 2.0, 're': 0.1}]})

    def test_miss_store_hit(self, tmp_path):
        cache = ResultCache(tmp_path)
        config = free_green_config()
        assert cache.lookup(config.digest()) is None
        path = cache.store(self._report(config))
        assert path == tmp_path / config.digest()[:2] / f"{config.digest()}.json"
        hit = cache.lookup(config.digest())
        assert hit.cache_hit
        assert hit.table_digest() == self._report(config).table_digest()

    def test_corrupted_entry_evicted(self, tmp_path):
        cache = ResultCache(tmp_path)
        digest = free_green_config().digest()
        path = cache.path_for(digest)
        path.parent.mkdir(parents=True)
        path.write_text("{not json", encoding="utf-8")
        assert cache.lookup(digest) is None
        assert not path.exists()

    def test_tampered_tables_evicted(self, tmp_path):
        cache = ResultCache(tmp_path)
        config = free_green_config()
        path = cache.store(self._report(config))
        data = json.loads(path.read_text(encoding="utf-8"))
        data['tables']['green'][0]['re'] = 0.2
        path.write_text(json.dumps(data), encoding="utf-8")
        assert cache.lookup(config.digest()) is None
        assert not path.exists()

    def test_unwritable_cache_bypassed(self, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("", encoding="utf-8")
        cache = ResultCache(blocker)
        config = free_green_config()
        assert cache.store(self._report(config)) is None
        assert cache.lookup(config.digest()) is None


class TestRun:
    """运行流水线"""

    def test_free_green_closed_form(self, tmp_path):
        report = run('green', free_green_config(output_dir=str(tmp_path)))
        assert report.status == "ok"
        assert len(report.tables['free_check']) == 20
        assert report.diagnostics['free_max_rel_error'] < 1e-10
        assert all(row['deviation'] == 0.0 for row in report.tables['green'])

    def test_repeat_hits_cache_with_identical_tables(self, tmp_path, cache_dir):
        cache = ResultCache()
        first = run('green', free_green_config(output_dir=str(tmp_path / "a")), cache)
        second = run('green', free_green_config(output_dir=str(tmp_path / "b")), cache)
        assert not first.cache_hit
        assert second.cache_hit
        assert first.table_digest() == second.table_digest()
        for table in ('green', 'free_check'):
            a = (tmp_path / "a" / f"free_{table}.csv").read_bytes()
            b = (tmp_path / "b" / f"free_{table}.csv").read_bytes()
            assert a == b

    def test_no_cache_recomputes(self, tmp_path, cache_dir):
        cache = ResultCache()
        config = free_green_config(output_dir=str(tmp_path), cache=False)
        run('green', config, cache)
        assert not run('green', config, cache).cache_hit
        assert not cache.path_for(config.digest()).exists()

    def test_outputs_written_atomically(self, tmp_path):
        run('green', free_green_config(output_dir=str(tmp_path)))
        names = {p.name for p in tmp_path.iterdir()}
        assert names == {'free_free_check.csv', 'free_green.svg', 'free_green.csv', 'free_report.json'}
        assert not list(tmp_path.glob("*.tmp"))
        report = json.loads((tmp_path / "free_report.json").read_text(encoding="utf-8"))
        assert report['provenance']['seed'] == 7
        assert 'compute_seconds' in report['timings']

    def test_plots_disabled(self, tmp_path):
        run('green', free_green_config(output_dir=str(tmp_path), plots=False))
        assert not list(tmp_path.glob("*.svg"))

    def test_amplitude_truncation_params(self, tmp_path):
        config = ExperimentConfig.from_dict({
            'command': 'amplitude',
            'name': 'cut',
            'fields': {'Q': {'kind': 'bump_field', 'amplitude': 0.05}},
            'wavenumbers': {'ks': [1.0]},
            'params': {'rho': 4.0, 'split_radius': 1.0, 'n_theta': 4, 'n_phi': 4},
            'output_dir': str(tmp_path),
            'plots': False,
        })
        report = run('amplitude', config)
        assert report.diagnostics['amplitudes'][0]['rho'] == 4.0
        assert report.tables['amplitude'][0]['delta_proxy'] == 0.0

        too_close = replace(config, params={**config.params, 'rho': 1.5})
        with pytest.raises(ParameterError):
            run('amplitude', too_close)

    def test_divergence_is_reported(self, tmp_path, monkeypatch):
        def diverging(config, defaults):
            raise DivergenceError("series diverged", orders=[1.0, 2.0, 4.0])

        monkeypatch.setitem(commands.COMMANDS, 'green', diverging)
        cache = ResultCache(tmp_path / "cache")
        config = free_green_config(output_dir=str(tmp_path))
        report = run('green', config, cache)
        assert report.diverged
        assert report.diagnostics['orders'] == [1.0, 2.0, 4.0]
        assert (tmp_path / "free_report.json").exists()
        assert not cache.path_for(config.digest()).exists()


class TestCli:
    """命令行退出码"""

    def test_every_command_registered(self):
        assert tuple(commands.COMMANDS) == COMMAND_NAMES

    def test_green_ok(self, tmp_path, lab_config, cache_dir, capsys):
        exp = write_yaml(tmp_path / "exp.yaml", free_green_config().to_dict())
        code = main(['green', '--config', str(exp), '--lab-config', str(lab_config),
                     '--out', str(tmp_path / "out")])
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary['status'] == "ok"
        assert summary['tables']['free_check'] == 20
        assert (tmp_path / "out" / "free_green.csv").exists()

    def test_second_run_hits_cache(self, tmp_path, lab_config, cache_dir, capsys):
        exp = write_yaml(tmp_path / "exp.yaml", free_green_config().to_dict())
        args = ['green', '--config', str(exp), '--lab-config', str(lab_config), '--out', str(tmp_path / "out")]
        main(args)
        capsys.readouterr()
        assert main(args) == 0
        assert json.loads(capsys.readouterr().out)['cache_hit'] is True
        assert main(args + ['--no-cache']) == 0
        assert json.loads(capsys.readouterr().out)['cache_hit'] is False

    def test_bad_config_exit_code(self, tmp_path, lab_config, cache_dir, capsys):
        exp = write_yaml(tmp_path / "exp.yaml", {'seed': -3, 'unknown': True})
        assert main(['green', '--config', str(exp), '--lab-config', str(lab_config)]) == 2
        err = capsys.readouterr().err
        assert "seed" in err and "unknown" in err

    def test_missing_lab_config(self, tmp_path):
        assert main(['green', '--lab-config', str(tmp_path / "absent.yaml")]) == 2

    def test_diverged_exit_code(self, tmp_path, lab_config, cache_dir, monkeypatch):
        def diverging(config, defaults):
            raise DivergenceError("series diverged", orders=[1.0, 3.0])

        monkeypatch.setitem(commands.COMMANDS, 'green', diverging)
        assert main(['green', '--lab-config', str(lab_config), '--out', str(tmp_path / "out")]) == 3
        assert (tmp_path / "out" / "green_report.json").exists()

    def test_output_error_exit_code(self, tmp_path, lab_config, cache_dir):
        blocker = tmp_path / "blocker"
        blocker.write_text("", encoding="utf-8")
        exp = write_yaml(tmp_path / "exp.yaml", free_green_config().to_dict())
        assert main(['green', '--config', str(exp), '--lab-config', str(lab_config),
                     '--out', str(blocker / "out"), '--no-cache']) == 4


@pytest.mark.parametrize("path", sorted((Path(__file__).parent.parent / "config" / "experiments").glob("*.yaml")),
                         ids=lambda p: p.stem)
def test_shipped_configs_validate(path):
    """随附的实验配置均可通过校验"""
    config = load_experiment_config(path)
    assert config.command in COMMAND_NAMES
    assert config.name

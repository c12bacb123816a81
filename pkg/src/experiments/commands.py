"""
命令注册表

每个命令把 ExperimentConfig 映射到一条模块流水线，返回结果表、诊断与衰减图。
结果表只依赖 (配置, 种子)；各命令的参数默认值与输出表列见 TABLES 与各函数文档。
"""
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import logging

import numpy as np

from ..core.exceptions import ParameterError
from ..core.fitting import fit_power_law
from ..core.geometry import as_points, cube_directions
from ..core.random import stream
from ..core.types import ComplexWavenumber, Point3
from ..eikonal import EikonalSettings, eikonal_residual, picard_iterate_mu
from ..fields.anderson import export_anderson_csv
from ..fields.helmholtz import helmholtz_field, helmholtz_parts
from ..fields.types import FieldKind, FieldSpec
from ..green import (
    BornSettings, born_series_green, evaluate_green, fit_class_cl, free_indicator_amplitude,
    green_series, solve_resolvent
)
from ..scattering import (
    TriangleDomain, build_entropy_certificate, endpoint_exponent, far_field_amplitude, spectral_density
)
from ..verify import (
    anderson_decay_stats, dirac_convergence, bump_trial_function, gaussian_trial_function,
    lemma1_sweep, lemma2_sweep, moment_bound_check, proposition_form_check, unitary_error,
    DEFAULT_ANDERSON_RADII, DEFAULT_DELTAS, DEFAULT_RHOS, DEFAULT_XS
)
from .builders import anderson_spec_from, field_role
from .exceptions import ConfigError
from .types import COMMAND_NAMES, CommandOutcome, DecayPlot, ExperimentConfig

logger = logging.getLogger("experiments.commands")

Defaults = Dict[str, Any]
CommandFn = Callable[[ExperimentConfig, Defaults], CommandOutcome]

# 每个命令输出的表及其列
TABLES: Dict[str, Dict[str, str]] = {
    'green': {
        'green': "x1,x2,x3,radius,re,im,free_re,free_im,deviation,n_orders,converged",
        'free_check': "x1,x2,x3,y1,y2,y3,tau,delta,re,im,closed_re,closed_im,rel_error (Q = 0, n_random > 0)",
    },
    'resolvent': {'resolvent': "direction,radius,re,im,tail,n_orders"},
    'amplitude': {
        'amplitude': "tau,delta,l2_norm,residual,delta_proxy,closed_form,abs_error",
        'amplitude_values': "k_index,direction,d1,d2,d3,weight,re,im",
    },
    'density': {'density': "k,E,density,l2_norm_sq,closed_density,rel_error,delta_proxy"},
    'entropy': {
        'harmonic_measure': "edge,s,mass,error",
        'boundary': "edge,s,re,im,nu",
        'base_density': "k,density",
    },
    'eikonal': {
        'mu': "direction,radius,value,iteration",
        'iterations': "iteration,diff_norm,contraction_ratio,residual",
    },
    'helmholtz': {
        'helmholtz': "x1,x2,x3,radius,q1,q2,q3,near_norm,far_norm,error",
        'divergence': "x1,x2,x3,div_q,v,abs_error",
    },
    'anderson': {
        'decay': "radius,second_moment,second_moment_error,dispersion,differential_ratio",
        'moments_p<p>': "k_norm,moment,moment_error",
    },
    'verify-lemmas': {
        'lemma1': "delta,x_norm,rho,lhs_<bound>,ratio_<bound>",
        'lemma2': "delta,x_norm,lhs_upsilon,ratio_upsilon",
        'positivity': "index,value,gradient_energy",
    },
    'dirac-check': {'dirac': "grid_step,n_points,deviation,off_diagonal"},
}

_FACES = np.concatenate([np.eye(3), -np.eye(3)])


def _param(config: ExperimentConfig, key: str, default: Any = None) -> Any:
    return config.params.get(key, default)


def _directions(config: ExperimentConfig, key: str, default: Any = 'faces') -> np.ndarray:
    """'faces'（±e_i）、'cube'（26 个方向）或显式向量列表"""
    value = _param(config, key, default)
    if value == 'faces':
        return _FACES.copy()
    if value == 'cube':
        return cube_directions()
    try:
        dirs = as_points(value)
    except (ParameterError, TypeError, ValueError) as e:
        raise ConfigError([f"params.{key}: {e}"])
    norms = np.linalg.norm(dirs, axis=1)
    if np.any(norms == 0):
        raise ConfigError([f"params.{key}: zero direction"])
    return dirs / norms[:, None]


def _floats(config: ExperimentConfig, key: str, default: Sequence[float]) -> np.ndarray:
    try:
        return np.asarray(_param(config, key, list(default)), dtype=float).reshape(-1)
    except (TypeError, ValueError) as e:
        raise ConfigError([f"params.{key}: {e}"])


def _settings(config: ExperimentConfig, key: str, cls):
    """params 中的设置段 -> BornSettings / EikonalSettings"""
    try:
        return cls(**_param(config, key, {}))
    except (ParameterError, TypeError) as e:
        raise ConfigError([f"params.{key}: {e}"])


def _decay_plot(name: str, radii: np.ndarray, values: np.ndarray, ylabel: str) -> DecayPlot:
    fit = fit_power_law(radii, values)
    exponent = fit.exponent if np.isfinite(fit.exponent) else None
    return DecayPlot(name=name, radii=[float(r) for r in radii], values=[float(v) for v in values],
                     exponent=exponent, ylabel=ylabel)


def run_green(config: ExperimentConfig, defaults: Defaults) -> CommandOutcome:
    """
    G_z(x, y) 的 Born 级数

    fields.Q（默认 0）；wavenumbers.k（默认 1+0.5i）；params: y, radii, directions,
    tol, n_max, born（BornSettings 参数），n_random（Q = 0 时与闭式比较的随机点数）
    """
    Q = field_role(config, 'Q', {'kind': 'zero'}, FieldKind.VECTOR)
    k = config.wavenumber('k', [1.0, 0.5])
    y = Point3.from_array(_param(config, 'y', [0.0, 0.0, 0.0]))
    radii = _floats(config, 'radii', (2.0, 4.0, 8.0))
    dirs = _directions(config, 'directions', [[1.0, 0.0, 0.0]])
    tol = float(_param(config, 'tol', 1e-8))
    n_max = int(_param(config, 'n_max', 30))
    settings = _settings(config, 'born', BornSettings)

    series = None if Q.is_zero else green_series(k, Q, y, settings, tol, n_max).run()
    rows: List[Dict[str, Any]] = []
    sup_dev = np.zeros(len(radii))
    sup_val = np.zeros(len(radii))
    for i, r in enumerate(radii):
        for d in dirs:
            x = Point3.from_array(y.as_array() + r * d)
            g = born_series_green(k, Q, x, y) if series is None else evaluate_green(series, x, y)
            dev = abs(g.deviation)
            sup_dev[i] = max(sup_dev[i], dev)
            sup_val[i] = max(sup_val[i], abs(g.value))
            rows.append({
                'x1': x.x1, 'x2': x.x2, 'x3': x.x3, 'radius': r,
                're': g.value.real, 'im': g.value.imag,
                'free_re': g.free_value.real, 'free_im': g.free_value.imag,
                'deviation': dev, 'n_orders': g.n_orders, 'converged': g.converged,
            })
    tables = {'green': rows}

    diagnostics: Dict[str, Any] = {
        'k': k.k,
        'potential': Q.name,
        'converged': all(row['converged'] for row in rows),
        'max_orders': max(row['n_orders'] for row in rows),
    }
    if series is not None:
        diagnostics['smallness_ratio'] = series.smallness_ratio
        diagnostics['grid_orders'] = series.grid_orders
        # sup |G - G⁰|·|x - y|·e^{δ|x - y|}
        diagnostics['weighted_deviation'] = max(
            row['deviation'] * row['radius'] * np.exp(k.delta * row['radius']) for row in rows)

    n_random = int(_param(config, 'n_random', 0))
    if n_random > 0:
        if not Q.is_zero:
            raise ConfigError(["params.n_random: the closed-form check needs Q = 0"])
        tables['free_check'] = _free_check(n_random, config.seed)
        diagnostics['free_max_rel_error'] = max(row['rel_error'] for row in tables['free_check'])

    if Q.is_zero:
        plot = _decay_plot('green', radii, sup_val, '|G|')
    else:
        plot = _decay_plot('green_deviation', radii, sup_dev, '|G - G0|')
    return CommandOutcome(tables=tables, diagnostics=diagnostics, plots=[plot])


def _free_check(n: int, seed: int) -> List[Dict[str, Any]]:
    """随机 (x, y, k) 上 G⁰ 与 e^{ik|x-y|}/(4π|x-y|) 的相对误差"""
    rng = stream(seed, 0)
    xs = rng.uniform(-5.0, 5.0, size=(n, 3))
    ys = rng.uniform(-5.0, 5.0, size=(n, 3))
    taus = rng.uniform(0.1, 3.0, size=n)
    deltas = rng.uniform(0.05, 1.0, size=n)
    rows = []
    for x, y, tau, delta in zip(xs, ys, taus, deltas):
        k = ComplexWavenumber(float(tau), float(delta))
        g = born_series_green(k, FieldSpec.zero(), Point3.from_array(x), Point3.from_array(y)).value
        r = float(np.linalg.norm(x - y))
        closed = np.exp(1j * k.k * r) / (4.0 * np.pi * r)
        rows.append({
            'x1': x[0], 'x2': x[1], 'x3': x[2], 'y1': y[0], 'y2': y[1], 'y3': y[2],
            'tau': tau, 'delta': delta, 're': g.real, 'im': g.imag,
            'closed_re': closed.real, 'closed_im': closed.imag,
            'rel_error': abs(g - closed) / abs(closed),
        })
    return rows


def run_resolvent(config: ExperimentConfig, defaults: Defaults) -> CommandOutcome:
    """
    u = (H - z)^{-1} f 在 方向 × 半径 上的采样与 Cl(k) 拟合

    fields.Q（默认 0）、fields.f（默认单位球示性函数）；wavenumbers.k（默认 1+0.5i）；
    params: rays, radii, tol, n_max, born, class_cl（是否拟合，默认 true）
    """
    Q = field_role(config, 'Q', {'kind': 'zero'}, FieldKind.VECTOR)
    f = field_role(config, 'f', {'kind': 'ball_indicator'}, FieldKind.SCALAR)
    k = config.wavenumber('k', [1.0, 0.5])
    rays = _directions(config, 'rays')
    radii = _floats(config, 'radii', np.geomspace(2.0, 16.0, 8))
    table = solve_resolvent(k, Q, f, rays, radii, tol=float(_param(config, 'tol', 1e-8)),
                            n_max=int(_param(config, 'n_max', 30)),
                            settings=_settings(config, 'born', BornSettings))
    tail = table.tail if table.tail is not None else np.zeros(table.values.size)
    rows = [
        {'direction': i, 'radius': r, 're': re, 'im': im, 'tail': float(t), 'n_orders': n}
        for (i, r, re, im, n), t in zip(table.rows(), tail)
    ]
    diagnostics: Dict[str, Any] = {
        'k': k.k, 'converged': table.converged, 'n_orders': table.n_orders,
        'orders': table.orders, 'l2_norm': table.l2_norm(),
    }
    if _param(config, 'class_cl', True):
        diagnostics['class_cl'] = fit_class_cl(table, k).to_dict()
    plot = _decay_plot('resolvent', table.radii, np.max(np.abs(table.values), axis=0), '|u|')
    return CommandOutcome(tables={'resolvent': rows}, diagnostics=diagnostics, plots=[plot])


def _amplitudes(config: ExperimentConfig):
    f = field_role(config, 'f', {'kind': 'ball_indicator'}, FieldKind.SCALAR)
    Q = field_role(config, 'Q', {'kind': 'zero'}, FieldKind.VECTOR)
    ks = config.wavenumber_list('ks', [0.7, 1.0, 1.3])
    radii = _param(config, 'radii')
    kwargs = {
        'n_theta': int(_param(config, 'n_theta', 8)),
        'n_phi': int(_param(config, 'n_phi', 16)),
        'delta_proxy': float(_param(config, 'delta_proxy', 1e-2)),
        'rho': _param(config, 'rho'),
        'split_radius': float(_param(config, 'split_radius', 1.0)),
        'radii': None if radii is None else [float(r) for r in radii],
        'settings': _settings(config, 'born', BornSettings),
        'tol': float(_param(config, 'tol', 1e-8)),
    }
    desc = config.fields.get('f', {'kind': 'ball_indicator'})
    closed = None
    if Q.is_zero and desc.get('kind') == 'ball_indicator' and float(desc.get('radius', 1.0)) == 1.0:
        a = float(desc.get('amplitude', 1.0)) * float(desc.get('scale', 1.0))
        closed = lambda kk: a * free_indicator_amplitude(kk)
    return [(k, far_field_amplitude(f, k.k, Q, **kwargs)) for k in ks], closed


def run_amplitude(config: ExperimentConfig, defaults: Defaults) -> CommandOutcome:
    """
    远场振幅 A(k, ·)

    fields.f、fields.Q；wavenumbers.ks（默认 0.7, 1.0, 1.3）；
    params: n_theta, n_phi, delta_proxy, rho, split_radius（默认 1，须 rho > split_radius + 1）, radii, born, tol
    """
    results, closed = _amplitudes(config)
    summary, values = [], []
    for i, (k, A) in enumerate(results):
        row = {'tau': k.tau, 'delta': k.delta, 'l2_norm': A.l2_norm, 'residual': A.residual,
               'delta_proxy': A.delta_proxy, 'closed_form': float('nan'), 'abs_error': float('nan')}
        if closed is not None:
            expected = closed(A.k.k)
            row['closed_form'] = abs(expected)
            row['abs_error'] = float(np.max(np.abs(A.values - expected)))
        summary.append(row)
        for j, (d, w, v) in enumerate(zip(A.directions, A.weights, A.values)):
            values.append({'k_index': i, 'direction': j, 'd1': d[0], 'd2': d[1], 'd3': d[2],
                           'weight': w, 're': v.real, 'im': v.imag})
    diagnostics = {
        'amplitudes': [A.to_dict() for _, A in results],
        'max_abs_error': max((row['abs_error'] for row in summary), default=float('nan'))
        if closed is not None else None,
    }
    return CommandOutcome(tables={'amplitude': summary, 'amplitude_values': values}, diagnostics=diagnostics)


def run_density(config: ExperimentConfig, defaults: Defaults) -> CommandOutcome:
    """
    谱密度 σ'_f(k²) = k π⁻¹ ‖A(k, ·)‖²

    参数同 amplitude；k 须为正实数部分
    """
    results, closed = _amplitudes(config)
    rows = []
    for k, A in results:
        sample = spectral_density(A, k.tau)
        row = {'k': sample.k, 'E': sample.E, 'density': sample.density, 'l2_norm_sq': A.l2_norm_sq,
               'closed_density': float('nan'), 'rel_error': float('nan'), 'delta_proxy': sample.delta_proxy}
        if closed is not None:
            expected = sample.k / np.pi * 4.0 * np.pi * abs(closed(A.k.k)) ** 2
            row['closed_density'] = expected
            row['rel_error'] = abs(sample.density - expected) / expected
        rows.append(row)
    diagnostics = {'max_rel_error': max(row['rel_error'] for row in rows) if closed is not None else None}
    return CommandOutcome(tables={'density': rows}, diagnostics=diagnostics)


def run_entropy(config: ExperimentConfig, defaults: Defaults) -> CommandOutcome:
    """
    熵证书：调和测度、边界 ν、平均值检验与底边熵积分

    fields.f、fields.Q；params: triangle {a1, a2, gamma1}, k0, n_walkers, bins_per_edge,
    delta_proxy, rho, split_radius, nu_stride, n_theta, n_phi, endpoint_fit（默认 true）
    """
    f = field_role(config, 'f', {'kind': 'ball_indicator'}, FieldKind.SCALAR)
    Q = field_role(config, 'Q', {'kind': 'zero'}, FieldKind.VECTOR)
    tri = _param(config, 'triangle', {'a1': 0.5, 'a2': 1.5, 'gamma1': 3.0})
    try:
        T = TriangleDomain(float(tri['a1']), float(tri['a2']), float(tri['gamma1']))
    except (KeyError, TypeError, ParameterError) as e:
        raise ConfigError([f"params.triangle: {e}"])
    k0 = _param(config, 'k0')
    kwargs: Dict[str, Any] = {
        'k0': None if k0 is None else _config_k0(k0),
        'n_walkers': int(_param(config, 'n_walkers', defaults.get('n_walkers', 100_000))),
        'seed': config.seed,
        'delta_proxy': float(_param(config, 'delta_proxy', 1e-2)),
        'rho': _param(config, 'rho'),
        'split_radius': float(_param(config, 'split_radius', 1.0)),
        'nu_stride': _param(config, 'nu_stride'),
        'n_theta': int(_param(config, 'n_theta', 8)),
        'n_phi': int(_param(config, 'n_phi', 16)),
    }
    if 'bins_per_edge' in config.params:
        kwargs['bins_per_edge'] = int(config.params['bins_per_edge'])
    cert = build_entropy_certificate(f, T, Q, **kwargs)
    omega = cert.omega

    measure = [{'edge': e, 's': s, 'mass': m, 'error': err} for e, s, m, err in omega.rows()]
    boundary = [
        {'edge': int(e), 's': float(s), 're': z.real, 'im': z.imag, 'nu': float(nu)}
        for e, s, z, nu in zip(omega.bin_edge, omega.bin_centers, omega.bin_points, cert.nu_boundary)
    ]
    base = omega.base_mask()
    densities = [{'k': float(z.real), 'density': float(d)}
                 for z, d in zip(omega.bin_points[base], cert.densities)]
    diagnostics = cert.to_dict()
    if _param(config, 'endpoint_fit', True):
        exponent, stderr = endpoint_exponent(omega)
        diagnostics['endpoint_exponent'] = {'value': exponent, 'stderr': stderr,
                                            'expected': T.gamma1 - 1.0}
    return CommandOutcome(tables={'harmonic_measure': measure, 'boundary': boundary,
                                  'base_density': densities}, diagnostics=diagnostics)


def _config_k0(value: Any) -> complex:
    """[re, im] 或复数字符串"""
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    try:
        return complex(str(value).replace(' ', ''))
    except ValueError:
        raise ConfigError([f"params.k0: not a complex number: {value!r}"])


def run_eikonal(config: ExperimentConfig, defaults: Defaults) -> CommandOutcome:
    """
    相位修正 μ 的 Picard 迭代

    fields.V（默认 0.1·e^{-|x|²}）；wavenumbers.k（默认 10）；
    params: n_iter, tol, settings（EikonalSettings 参数）, residual_step
    """
    V = field_role(config, 'V', {'kind': 'gaussian_potential', 'amplitude': 0.1}, FieldKind.SCALAR)
    k = config.wavenumber('k', 10.0).tau
    settings = _settings(config, 'settings', EikonalSettings)
    mu = picard_iterate_mu(V, k, int(_param(config, 'n_iter', 3)), settings,
                           float(_param(config, 'tol', 0.0)))
    h = float(_param(config, 'residual_step', 1e-2))

    ratios = [float('nan')] + mu.contraction_ratios
    iterations = []
    for n, norm in enumerate(mu.diff_norms, start=1):
        residual = eikonal_residual(mu.iterate(n), V, k, h) if n < len(mu.history) else float('nan')
        iterations.append({'iteration': n, 'diff_norm': norm,
                           'contraction_ratio': ratios[n - 1], 'residual': residual})
    rows = [{'direction': j, 'radius': r, 'value': v, 'iteration': it} for j, r, v, it in mu.rows()]
    plot = _decay_plot('mu', mu.grid.radii, np.max(np.abs(mu.values), axis=1), '|mu|')
    return CommandOutcome(tables={'mu': rows, 'iterations': iterations},
                          diagnostics={**mu.to_dict(), 'settings': settings.to_dict()}, plots=[plot])


def run_helmholtz(config: ExperimentConfig, defaults: Defaults) -> CommandOutcome:
    """
    V = div Q 的 Helmholtz 重构

    fields.V（默认 Gaussian）；params: radii, directions, split_radius,
    divergence_radii（div Q 与 V 比较的半径，沿 ±e_i）, fd_step
    """
    V = field_role(config, 'V', {'kind': 'gaussian_potential'}, FieldKind.SCALAR)
    spec = config.quadrature_spec(defaults.get('quadrature'))
    split = float(_param(config, 'split_radius', 1.0))
    radii = _floats(config, 'radii', (1.0, 2.0, 4.0, 8.0))
    dirs = _directions(config, 'directions')

    rows = []
    sup = np.zeros(len(radii))
    for i, r in enumerate(radii):
        for d in dirs:
            x = Point3.from_array(r * d)
            parts = helmholtz_parts(V, x, split, spec)
            q = parts.total
            sup[i] = max(sup[i], float(np.linalg.norm(q)))
            rows.append({'x1': x.x1, 'x2': x.x2, 'x3': x.x3, 'radius': r,
                         'q1': q[0], 'q2': q[1], 'q3': q[2],
                         'near_norm': float(np.linalg.norm(parts.near)),
                         'far_norm': float(np.linalg.norm(parts.far)), 'error': parts.error})

    div_radii = _floats(config, 'divergence_radii', (0.5, 1.5))
    check_points = np.concatenate([r * np.eye(3) for r in div_radii]) if len(div_radii) else np.zeros((0, 3))
    Q = helmholtz_field(V, split, spec, float(_param(config, 'fd_step', 1e-3)))
    div_rows = []
    if len(check_points):
        div_q = Q.fd_divergence(check_points)
        v = np.asarray(V(check_points))
        div_rows = [{'x1': p[0], 'x2': p[1], 'x3': p[2], 'div_q': a, 'v': b, 'abs_error': abs(a - b)}
                    for p, a, b in zip(check_points, div_q, v)]
        scale = float(np.max(np.abs(v)))
        rel = float(np.max(np.abs(div_q - v))) / scale if scale > 0 else float(np.max(np.abs(div_q)))
    else:
        rel = float('nan')
    plot = _decay_plot('helmholtz', radii, sup, '|Q|')
    diagnostics = {'potential': V.name, 'split_radius': split, 'divergence_rel_error': rel,
                   'decay_exponent': plot.exponent}
    return CommandOutcome(tables={'helmholtz': rows, 'divergence': div_rows},
                          diagnostics=diagnostics, plots=[plot])


def run_anderson(config: ExperimentConfig, defaults: Defaults) -> CommandOutcome:
    """
    随机化势远场部分 Q₂ 的统计

    params: eps, ball_radius, amplitude, sign_law, spacing, n_realizations, radii,
    moments（p 的列表，默认 [2]）, export_centers（导出第 0 次实现的中心与符号）
    """
    spec = anderson_spec_from(config.params, config.seed)
    n = int(_param(config, 'n_realizations', defaults.get('n_realizations', 200)))
    radii = _floats(config, 'radii', DEFAULT_ANDERSON_RADII)
    report = anderson_decay_stats(spec, n, radii, config.seed)
    tables = {'decay': report.rows()}
    diagnostics: Dict[str, Any] = {'decay': report.to_dict(), 'n_centers': spec.n_centers}
    for p in _param(config, 'moments', [2]):
        moments = moment_bound_check(spec, int(p), n_realizations=n, seed=config.seed)
        tables[f'moments_p{int(p)}'] = moments.rows()
        diagnostics[f'moments_p{int(p)}'] = moments.to_dict()
    if _param(config, 'export_centers', False):
        path = Path(config.output_dir) / f"{config.name or config.command}_centers.csv"
        export_anderson_csv(spec, path, config.seed, 0)
    plots = [_decay_plot('anderson_second_moment', report.radii, report.second_moment, 'E|Q2|^2')]
    if report.defined:
        plots.append(_decay_plot('anderson_dispersion', report.radii, report.dispersion, 'exact E|Q2|^2'))
    return CommandOutcome(tables=tables, diagnostics=diagnostics, plots=plots)


def run_verify_lemmas(config: ExperimentConfig, defaults: Defaults) -> CommandOutcome:
    """
    积分估计扫描与正性检验

    params: deltas, rhos, xs（第一个估计）, lemma2_deltas, lemma2_xs, tolerance_factor,
    positivity {enabled, gamma, n_tests, n_bumps}；fields.Q 为正性检验的场（默认 Gaussian 梯度场）
    """
    factor = float(_param(config, 'tolerance_factor', 2.0))
    sweep1 = lemma1_sweep(_floats(config, 'deltas', DEFAULT_DELTAS), _floats(config, 'rhos', DEFAULT_RHOS),
                          _floats(config, 'xs', DEFAULT_XS), tolerance_factor=factor)
    sweep2 = lemma2_sweep(_floats(config, 'lemma2_deltas', DEFAULT_DELTAS),
                          _floats(config, 'lemma2_xs', DEFAULT_XS), tolerance_factor=factor)
    tables = {'lemma1': sweep1.rows(), 'lemma2': sweep2.rows()}
    diagnostics: Dict[str, Any] = {'lemma1': sweep1.to_dict(), 'lemma2': sweep2.to_dict()}

    positivity = _param(config, 'positivity', {})
    if positivity.get('enabled', True):
        Q = field_role(config, 'Q', {'kind': 'gaussian_gradient'}, FieldKind.VECTOR)
        check = proposition_form_check(Q, float(positivity.get('gamma', 1.0)),
                                       int(positivity.get('n_tests', 8)), config.seed,
                                       int(positivity.get('n_bumps', 3)))
        tables['positivity'] = [{'index': i, 'value': v, 'gradient_energy': e}
                                for i, (v, e) in enumerate(zip(check.values, check.gradient_energies))]
        diagnostics['positivity'] = check.to_dict()
    diagnostics['passed'] = bool(sweep1.passed and sweep2.passed
                                 and diagnostics.get('positivity', {}).get('passed', True))
    return CommandOutcome(tables=tables, diagnostics=diagnostics)


def run_dirac_check(config: ExperimentConfig, defaults: Defaults) -> CommandOutcome:
    """
    𝒟² 与 H 的分解检验

    fields.v（默认 Gaussian 梯度场）；params: steps, trial（gaussian / bump）, width,
    extent, n_grid
    """
    v = field_role(config, 'v', {'kind': 'gaussian_gradient'}, FieldKind.VECTOR)
    trial = _param(config, 'trial', 'gaussian')
    if trial == 'gaussian':
        test_fn = gaussian_trial_function(float(_param(config, 'width', 1.0)))
    elif trial == 'bump':
        test_fn = bump_trial_function(float(_param(config, 'width', 2.0)))
    else:
        raise ConfigError([f"params.trial: unknown trial function {trial!r}, expected gaussian or bump"])
    result = dirac_convergence(v, tuple(_floats(config, 'steps', (0.1, 0.05))), test_fn,
                               extent=float(_param(config, 'extent', 1.5)),
                               n_grid=int(_param(config, 'n_grid', 9)))
    rows = [{'grid_step': r.grid_step, 'n_points': r.n_points, 'deviation': r.deviation,
             'off_diagonal': r.off_diagonal} for r in result.reports]
    return CommandOutcome(tables={'dirac': rows},
                          diagnostics={**result.to_dict(), 'unitary_error': unitary_error()})


COMMANDS: Dict[str, CommandFn] = {
    'green': run_green,
    'resolvent': run_resolvent,
    'amplitude': run_amplitude,
    'density': run_density,
    'entropy': run_entropy,
    'eikonal': run_eikonal,
    'helmholtz': run_helmholtz,
    'anderson': run_anderson,
    'verify-lemmas': run_verify_lemmas,
    'dirac-check': run_dirac_check,
}
assert tuple(COMMANDS) == COMMAND_NAMES


def get_command(name: str) -> Optional[CommandFn]:
    return COMMANDS.get(name)


def describe_tables() -> str:
    """--help 中的输出表说明"""
    lines = []
    for name in COMMAND_NAMES:
        doc = (COMMANDS[name].__doc__ or "").strip().splitlines()
        lines.append(f"{name}: {doc[0] if doc else ''}")
        for table, columns in TABLES[name].items():
            lines.append(f"    {table}.csv  {columns}")
    return "\n".join(lines)

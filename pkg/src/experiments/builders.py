"""
由配置描述构造场

描述为 {'kind': ..., 参数...}，可选 'scale' 对结果整体缩放
"""
from typing import Any, Callable, Dict, Optional

from ..core.exceptions import ParameterError
from ..core.types import Point3
from ..fields.anderson import default_anderson_spec, sample_anderson
from ..fields.examples import (
    build_ball_indicator, build_bump_field, build_bump_potential, build_example1, build_example2,
    build_gaussian_gradient_field, build_gaussian_potential, build_proposition_potential,
    example1_potential
)
from ..fields.types import AndersonPotentialSpec, FieldKind, FieldSpec, SignLaw
from .exceptions import ConfigError


def _center(desc: Dict[str, Any]) -> Point3:
    return Point3.from_array(desc.get('center', (0.0, 0.0, 0.0)))


def anderson_spec_from(desc: Dict[str, Any], seed: int = 0) -> AndersonPotentialSpec:
    """{'eps', 'ball_radius', 'scale', 'sign_law', 'spacing'}"""
    return default_anderson_spec(
        eps=float(desc.get('eps', 0.25)),
        ball_radius=float(desc.get('ball_radius', 48.0)),
        scale=float(desc.get('amplitude', 1.0)),
        sign_law=SignLaw(desc.get('sign_law', SignLaw.RADEMACHER.value)),
        seed=int(desc.get('seed', seed)),
        spacing=float(desc.get('spacing', 3.0)),
    )


_BUILDERS: Dict[str, Callable[[Dict[str, Any], int], FieldSpec]] = {
    'zero': lambda d, s: FieldSpec.zero(FieldKind(d.get('field_kind', FieldKind.VECTOR.value))),
    'bump_field': lambda d, s: build_bump_field(float(d.get('amplitude', 0.5)), _center(d),
                                                float(d.get('eps', 1.0))),
    'bump_potential': lambda d, s: build_bump_potential(float(d.get('amplitude', 1.0)), _center(d)),
    'gaussian_potential': lambda d, s: build_gaussian_potential(float(d.get('amplitude', 1.0)),
                                                                float(d.get('width', 1.0)),
                                                                float(d.get('eps', 1.0))),
    'gaussian_gradient': lambda d, s: build_gaussian_gradient_field(float(d.get('amplitude', 1.0)),
                                                                    float(d.get('eps', 1.0))),
    'example1': lambda d, s: build_example1(float(d.get('gamma', 1.0)))[0],
    'example1_potential': lambda d, s: example1_potential(float(d.get('gamma', 1.0))),
    'example2': lambda d, s: build_example2(d.get('centers', [[0.0, 0.0, 0.0]]),
                                            d.get('amplitudes', [1.0]), eps=float(d.get('eps', 0.5))),
    'ball_indicator': lambda d, s: build_ball_indicator(float(d.get('amplitude', 1.0)),
                                                        float(d.get('radius', 1.0))),
    'proposition': lambda d, s: build_proposition_potential(build_field(d.get('Q', {'kind': 'zero'}), s),
                                                            float(d.get('gamma', 1.0))),
    'anderson_sample': lambda d, s: sample_anderson(anderson_spec_from(d, s), int(d.get('seed', s)),
                                                    int(d.get('realization', 0))),
}


def build_field(desc: Dict[str, Any], seed: int = 0) -> FieldSpec:
    """按描述构造场；参数无效时抛 ConfigError"""
    kind = desc.get('kind')
    if kind not in _BUILDERS:
        raise ConfigError([f"kind: unknown field kind {kind!r}"])
    try:
        spec = _BUILDERS[kind](desc, seed)
    except (ParameterError, TypeError, ValueError) as e:
        raise ConfigError([f"{kind}: {e}"])
    scale = desc.get('scale')
    return spec.scaled(float(scale)) if scale is not None else spec


def field_role(config, role: str, default: Optional[Dict[str, Any]] = None,
               kind: Optional[FieldKind] = None) -> FieldSpec:
    """取配置中某一角色的场，缺省时用 default"""
    desc = config.fields.get(role, default)
    if desc is None:
        raise ConfigError([f"fields.{role}: required for command {config.command!r}"])
    try:
        spec = build_field(desc, config.seed)
    except ConfigError as e:
        raise ConfigError([f"fields.{role}.{p}" for p in e.problems])
    if kind is not None and spec.kind is not kind:
        raise ConfigError([f"fields.{role}: command {config.command!r} needs a {kind.value} field"])
    return spec

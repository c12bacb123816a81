"""
核心模块测试
"""
import json

import numpy as np
import pytest

from src.core import (
    ComplexWavenumber, DomainError, ParameterError, Point3, angle_zeta,
    canonical_json, cube_directions, dyadic_radii, fit_power_law, format_float,
    random_directions, stream, to_serializable
)


class TestPoint3:
    """测试空间点"""

    def test_norm(self):
        assert Point3(3.0, 4.0, 12.0).norm == 13.0

    def test_distance_symmetric(self):
        x = Point3(1.0, 2.0, 3.0)
        y = Point3(-2.0, 0.5, 7.0)
        assert x.distance(y) == y.distance(x)

    def test_from_array(self):
        p = Point3.from_array([1, 2, 3])
        assert p.to_tuple() == (1.0, 2.0, 3.0)
        assert np.array_equal(p.as_array(), np.array([1.0, 2.0, 3.0]))


class TestAngle:
    """测试夹角 ζ(u, v)"""

    def test_right_angle(self):
        assert abs(angle_zeta(Point3(1, 0, 0), Point3(0, 2, 0)) - np.pi / 2) < 1e-15

    def test_antiparallel(self):
        assert abs(angle_zeta(Point3(1, 1, 0), Point3(-2, -2, 0)) - np.pi) < 1e-15

    def test_zero_vector(self):
        with pytest.raises(DomainError):
            angle_zeta(Point3(0, 0, 0), Point3(1, 0, 0))

    def test_sine_and_cosine_laws(self):
        """|x×y| = |x||y| sin ζ，|x-y|² = |x|² + |y|² - 2|x||y| cos ζ"""
        rng = np.random.default_rng(11)
        for _ in range(1000):
            x = Point3.from_array(rng.normal(size=3))
            y = Point3.from_array(rng.normal(size=3))
            zeta = angle_zeta(x, y)
            cross = np.linalg.norm(np.cross(x.as_array(), y.as_array()))
            assert abs(cross - x.norm * y.norm * np.sin(zeta)) < 1e-12
            law = x.norm ** 2 + y.norm ** 2 - 2 * x.norm * y.norm * np.cos(zeta)
            assert abs(x.distance(y) ** 2 - law) < 1e-12


class TestWavenumber:
    """测试复波数"""

    def test_z(self):
        k = ComplexWavenumber(1.0, 0.5)
        assert k.z == complex(1.0, 0.5) ** 2

    def test_resolvent_guard(self):
        with pytest.raises(ParameterError):
            ComplexWavenumber(1.0, 0.0).require_resolvent()

    def test_strip(self):
        k = ComplexWavenumber.from_complex(0.5 + 0.2j)
        assert k.in_strip(1.0, 0.3)
        assert not k.in_strip(1.0, 0.1)


class TestGrids:
    """测试标准网格"""

    def test_cube_directions(self):
        dirs = cube_directions()
        assert dirs.shape == (26, 3)
        assert np.allclose(np.linalg.norm(dirs, axis=1), 1.0)

    def test_dyadic(self):
        assert list(dyadic_radii()) == [1, 2, 4, 8, 16, 32, 64, 128, 256]

    def test_random_directions_deterministic(self):
        a = random_directions(50, seed=4)
        b = random_directions(50, seed=4)
        assert np.array_equal(a, b)
        assert np.allclose(np.linalg.norm(a, axis=1), 1.0)


class TestRandomStreams:
    """测试计数器型随机流"""

    def test_same_key_same_stream(self):
        assert np.array_equal(stream(3, 7).random(10), stream(3, 7).random(10))

    def test_different_index(self):
        assert not np.array_equal(stream(3, 7).random(10), stream(3, 8).random(10))

    def test_negative_seed(self):
        with pytest.raises(ValueError):
            stream(-1, 0)


class TestSerialization:
    """测试结果序列化"""

    def test_complex_and_numpy(self):
        data = to_serializable({'z': 1 + 2j, 'a': np.arange(3), 'nan': float('nan')})
        assert data == {'z': [1.0, 2.0], 'a': [0, 1, 2], 'nan': "nan"}

    def test_canonical_order(self):
        assert canonical_json({'b': 1, 'a': 2}) == canonical_json({'a': 2, 'b': 1})
        assert json.loads(canonical_json({'b': 1})) == {'b': 1}

    def test_format_float(self):
        assert float(format_float(0.1)) == 0.1
        assert format_float(1 / 3) == "0.33333333333333331"


class TestFitting:
    """测试幂律拟合"""

    def test_exact_power_law(self):
        x = np.geomspace(1, 100, 20)
        fit = fit_power_law(x, 3.0 * x ** -1.5)
        assert abs(fit.exponent - 1.5) < 1e-12
        assert abs(fit.prefactor - 3.0) < 1e-10
        assert fit.r_squared > 0.999999

    def test_all_zero(self):
        fit = fit_power_law(np.arange(1.0, 5.0), np.zeros(4))
        assert np.isnan(fit.exponent)
        assert not fit.reliable

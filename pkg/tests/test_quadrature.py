"""
求积模块测试

解析可积的例子作为参照值
"""
import numpy as np
import pytest
from scipy.integrate import quad

from src.core import ORIGIN, Point3, AccuracyError, DivergenceError, ParameterError
from src.quadrature import (
    QuadratureSpec, RegionTag, ShellGrid, exponential_tail,
    exterior_truncation_radius, integrate_ball, integrate_ball_singular,
    integrate_exterior, integrate_sphere, integrate_two_center, log_radii,
    two_center_nodes
)


@pytest.fixture
def spec():
    return QuadratureSpec(n_theta=16, n_phi=32, n_radial=16, tol=1e-10, atol=1e-12)


class TestQuadratureSpec:
    """测试求积配置"""

    def test_validation(self):
        with pytest.raises(ParameterError):
            QuadratureSpec(n_theta=3)
        with pytest.raises(ParameterError):
            QuadratureSpec(tol=0.0)

    def test_refined_and_oracle(self):
        s = QuadratureSpec(n_theta=8, n_phi=16, n_radial=4)
        r = s.refined()
        assert (r.n_theta, r.n_phi, r.n_radial) == (16, 32, 8)
        o = s.oracle()
        assert o.n_theta == 32 and o.max_refine == 0


class TestSphere:
    """测试球面积分"""

    def test_area(self, spec):
        result = integrate_sphere(lambda y: np.ones(len(y)), 2.0, spec)
        assert abs(result.value - 16 * np.pi) < 1e-10

    def test_odd_integrand(self, spec):
        result = integrate_sphere(lambda y: y[:, 0], 2.0, spec)
        assert abs(result.value) < 1e-10

    def test_damped_closed_form(self, spec):
        """|x| = 10, ρ = 2, δ = 0.5 的阻尼积分与一维闭式比较"""
        delta, rho, xn = 0.5, 2.0, 10.0
        x = np.array([xn, 0.0, 0.0])

        def f(y):
            return np.exp(-delta * (np.linalg.norm(y - x, axis=1) + np.linalg.norm(y, axis=1)))

        def antiderivative(s):
            return np.exp(-delta * s) * (s / delta + 1 / delta ** 2)

        expected = (2 * np.pi * rho / xn) * np.exp(-delta * rho) * (
            antiderivative(xn - rho) - antiderivative(xn + rho))
        result = integrate_sphere(f, rho, spec, axis=x)
        assert abs(result.value - expected) < 1e-8 * expected

    def test_nonpositive_radius(self, spec):
        with pytest.raises(ParameterError):
            integrate_sphere(lambda y: np.ones(len(y)), 0.0, spec)

    def test_accuracy_error(self):
        """不连续被积函数在极少加密次数下达不到容差"""
        coarse = QuadratureSpec(n_theta=4, n_phi=4, max_refine=1, tol=1e-14)
        with pytest.raises(AccuracyError) as exc:
            integrate_sphere(lambda y: (y[:, 0] > 0.3).astype(float), 1.0, coarse)
        assert exc.value.estimate > 0

    def test_linearity(self, spec):
        f = lambda y: np.exp(-np.sum(y, axis=1))
        g = lambda y: y[:, 2] ** 2
        a, b = 2.5, -1.25
        lhs = integrate_sphere(lambda y: a * f(y) + b * g(y), 1.5, spec).value
        rhs = a * integrate_sphere(f, 1.5, spec).value + b * integrate_sphere(g, 1.5, spec).value
        assert abs(lhs - rhs) < 1e-10


class TestBall:
    """测试球体积分"""

    def test_singular_constant(self, spec):
        result = integrate_ball_singular(lambda y: np.ones(len(y)), ORIGIN, 2.0, spec)
        assert abs(result.value - 2 * np.pi * 4.0) < 1e-9

    def test_singular_cancelled(self, spec):
        center = Point3(1.0, -2.0, 0.5)
        c = center.as_array()
        result = integrate_ball_singular(lambda y: np.linalg.norm(y - c, axis=1), center, 1.5, spec)
        assert abs(result.value - 4 * np.pi * 1.5 ** 3 / 3) < 1e-9

    def test_singular_gaussian(self, spec):
        result = integrate_ball_singular(lambda y: np.exp(-np.sum(y * y, axis=1)), ORIGIN, 3.0, spec)
        oracle, _ = quad(lambda r: 4 * np.pi * r * np.exp(-r * r), 0.0, 3.0, epsabs=1e-13)
        assert abs(result.value - oracle) < 1e-8
        assert abs(oracle - 2 * np.pi * (1 - np.exp(-9.0))) < 1e-10

    def test_radius_guard(self, spec):
        with pytest.raises(ParameterError):
            integrate_ball_singular(lambda y: np.ones(len(y)), ORIGIN, -1.0, spec)

    def test_ball_volume(self, spec):
        result = integrate_ball(lambda y: np.ones(len(y)), Point3(3.0, 0.0, 0.0), 2.0, spec)
        assert abs(result.value - 4 * np.pi * 8 / 3) < 1e-9


class TestExterior:
    """测试阻尼外部积分"""

    def test_zero(self, spec):
        result = integrate_exterior(lambda y: np.zeros(len(y)), 1.0, spec)
        assert result.value == 0

    def test_exponential(self, spec):
        result = integrate_exterior(lambda y: np.exp(-np.linalg.norm(y, axis=1)), 1.0, spec)
        assert abs(result.value - 8 * np.pi) < 1e-8
        assert result.truncation_radius > 20

    def test_truncation_radius(self):
        radius = exterior_truncation_radius(0.5, 2.0, 1e-9)
        assert abs(exponential_tail(radius, 0.5, 2.0) - 1e-9) < 1e-12

    def test_damping_guard(self, spec):
        with pytest.raises(DivergenceError):
            integrate_exterior(lambda y: np.ones(len(y)), 0.0, spec)

    def test_upsilon_integrand(self):
        """三区域中 Υ 部分的阻尼积分为正且低于指数形状"""
        delta, xn = 0.5, 6.0
        x = np.array([xn, 0.0, 0.0])

        def f(y):
            inside = RegionTag.UPSILON.contains(y, x)
            damp = np.exp(-delta * (np.linalg.norm(y - x, axis=1) + np.linalg.norm(y, axis=1)))
            return np.where(inside, damp, 0.0)

        loose = QuadratureSpec(n_theta=32, n_phi=8, n_radial=16, tol=5e-2, max_refine=2)
        result = integrate_exterior(f, delta, loose, axis=x, breaks=(2 * xn / 3,))
        assert result.value.real > 0
        assert result.value.real < 30 * delta ** -3 * np.exp(-1.05 * delta * xn)


class TestRegionTag:
    """测试三区域划分"""

    @pytest.mark.parametrize("xn", [2.0, 5.0, 20.0])
    def test_cover(self, xn):
        rng = np.random.default_rng(7)
        x = np.array([0.0, xn, 0.0])
        y = rng.normal(scale=xn, size=(10000, 3))
        covered = sum(tag.contains(y, x).astype(int) for tag in RegionTag)
        assert np.all(covered >= 1)

    def test_classify(self):
        x = np.array([3.0, 0.0, 0.0])
        y = np.array([[0.0, 0.0, 0.0], [3.0, 0.1, 0.0], [0.0, 10.0, 0.0]])
        assert list(RegionTag.classify(y, x)) == ["near", "shifted", "upsilon"]


class TestTwoCenter:
    """测试双中心积分"""

    def test_coulomb_pair(self, spec):
        """∫_{|y-a|<R} 1/(|y-a||y-b|) dy = 4π(R - c/2)，c < R"""
        a = np.array([0.0, 0.0, 0.0])
        b = np.array([0.0, 1.0, 0.0])
        result = integrate_two_center(lambda n: 1.0 / (n.r_a * n.r_b), a, b, 3.0, spec)
        assert abs(result.value - 4 * np.pi * 2.5) < 1e-9

    def test_distance_fields(self):
        a = np.array([1.0, 2.0, -1.0])
        b = np.array([2.0, 0.0, 1.0])
        nodes = two_center_nodes(a, b, 2.0, 6, 6, 8)
        assert np.allclose(np.linalg.norm(nodes.points - a, axis=1), nodes.r_a, atol=1e-12)
        assert np.allclose(np.linalg.norm(nodes.points - b, axis=1), nodes.r_b, atol=1e-12)
        assert np.all(nodes.r_a < 2.0 + 1e-12)

    def test_volume(self, spec):
        a = np.array([0.0, 0.0, 0.0])
        b = np.array([5.0, 0.0, 0.0])
        result = integrate_two_center(lambda n: np.ones(len(n)), a, b, 1.0, spec)
        assert abs(result.value - 4 * np.pi / 3) < 1e-9

    def test_coincident_centers(self, spec):
        a = np.zeros(3)
        result = integrate_two_center(lambda n: 1.0 / (n.r_a * n.r_b), a, a, 2.0, spec)
        assert abs(result.value - 8 * np.pi) < 1e-9


class TestShellGrid:
    """测试球壳插值"""

    def test_reproduces_harmonic_polynomial(self):
        grid = ShellGrid(log_radii(0.5, 8.0, 12), center=Point3(1.0, 0.0, 0.0))
        c = grid.center.as_array()

        def f(p):
            d = p - c
            return d[:, 0] + 2.0 * d[:, 1] * d[:, 2]

        shell_field = grid.sample(f(grid.points))
        rng = np.random.default_rng(3)
        dirs = rng.normal(size=(200, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        pts = c + rng.uniform(0.5, 8.0, size=(200, 1)) * dirs
        assert np.max(np.abs(shell_field(pts) - f(pts))) < 1e-9

    def test_too_few_radii(self):
        with pytest.raises(ParameterError):
            ShellGrid(np.array([1.0, 2.0]))

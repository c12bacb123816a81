"""
程函模块测试
"""
import numpy as np
import pytest

from src.core import DomainError, InsufficientDataError, ParameterError, Point3
from src.eikonal import (
    ContractionError, EikonalSettings, PhaseCorrection, apply_G, apply_G_many, apply_G_result,
    damping_prefactor, eikonal_residual, hj_residual, integration_radius, picard_iterate_mu
)
from src.eikonal import picard as picard_module
from src.fields import build_ball_indicator, build_bump_field, build_gaussian_potential
from src.quadrature import QuadratureSpec, ShellGrid, two_center_nodes

K = 10.0
X = Point3(3.0, 0.0, 0.0)
FIXED = QuadratureSpec(n_theta=16, n_phi=8, n_radial=16, radial_panels=3, max_refine=0)


@pytest.fixture(scope="module")
def settings():
    """桌面规模的 Picard 网格"""
    return EikonalSettings(n_shells=12, r_max=8.0, n_s=12, n_t=16, n_phi=4)


@pytest.fixture(scope="module")
def gaussian():
    return build_gaussian_potential(amplitude=2.0, width=1.0)


@pytest.fixture(scope="module")
def contraction_run(gaussian, settings):
    return picard_iterate_mu(gaussian, K, n_iter=3, settings=settings)


class TestApplyG:
    """测试算子 G"""

    def test_zero_source(self):
        assert apply_G(K, build_gaussian_potential(0.0), X) == 0.0

    def test_requires_positive_k(self, gaussian):
        with pytest.raises(ParameterError):
            apply_G(0.0, gaussian, X)
        with pytest.raises(ParameterError):
            apply_G(-1.0, gaussian, X)

    def test_requires_exterior_target(self, gaussian):
        with pytest.raises(DomainError):
            apply_G(K, gaussian, Point3(0.5, 0.0, 0.0))

    def test_positive_kernel(self, gaussian):
        for x in (Point3(1.5, 0.0, 0.0), Point3(0.0, -2.0, 1.0), Point3(4.0, 4.0, 4.0)):
            assert apply_G(K, gaussian, x) > 0

    def test_indicator_oracle(self):
        """单位球示性函数，|x| = 3，k = 10：与 4 倍节点的规则一致"""
        f = build_ball_indicator()
        value = apply_G(K, f, X)
        oracle = QuadratureSpec(n_theta=48, n_phi=32, n_radial=64, radial_panels=3, max_refine=0)
        reference = apply_G(K, f, X, oracle)
        assert abs(value - reference) < 1e-6 * abs(reference)
        assert 0.03 < value < 0.055

    def test_support_limits_radius(self):
        f = build_ball_indicator()
        assert integration_radius(f, K, 3.0) == 1.0
        assert integration_radius(lambda p: np.ones(len(p)), K, 3.0) == pytest.approx(5.0)
        assert apply_G_result(K, f, X).truncation_radius == 1.0

    def test_prefactor_bounded(self):
        nodes = two_center_nodes(np.zeros(3), X.as_array(), 5.0, 16, 16, 8, damping=K, s_panels=3)
        prefactor = damping_prefactor(nodes, X.norm, K)
        assert np.all(prefactor <= X.norm * (1.0 + 1e-12))
        assert np.all(prefactor > 0)

    def test_linearity(self):
        rng = np.random.default_rng(4)
        a, b = rng.normal(size=3), rng.normal(size=3)

        def f(p):
            return np.cos(p @ a)

        def g(p):
            return np.sin(p @ b) / (1.0 + np.sum(p * p, axis=1))

        x = Point3(2.0, 0.5, -1.0)
        combined = apply_G(K, lambda p: f(p) - 3.0 * g(p), x, FIXED)
        separate = apply_G(K, f, x, FIXED) - 3.0 * apply_G(K, g, x, FIXED)
        assert abs(combined - separate) < 1e-10

    def test_many_matches_single(self, gaussian):
        targets = np.array([[2.0, 0.0, 0.0], [0.0, 0.0, -3.0]])
        values = apply_G_many(K, gaussian, targets, FIXED)
        assert values[1] == apply_G(K, gaussian, Point3(0.0, 0.0, -3.0), FIXED)


class TestPicard:
    """测试 μ 的 Picard 迭代"""

    def test_zero_potential(self, settings):
        mu = picard_iterate_mu(build_gaussian_potential(0.0), K, n_iter=3, settings=settings)
        assert mu.iteration == 3
        assert all(np.all(h == 0) for h in mu.history)
        assert mu.diff_norms == [0.0, 0.0, 0.0]

    def test_first_iterate(self, contraction_run, gaussian, settings):
        grid = settings.grid()
        minus_GV = -apply_G_many(K, gaussian, grid.points, settings.quadrature).reshape(grid.shape)
        assert np.allclose(contraction_run.history[1], minus_GV, rtol=1e-14, atol=0.0)
        assert contraction_run.diff_norms[0] == pytest.approx(np.max(np.abs(minus_GV)))

    def test_phase_is_negative_for_positive_potential(self, contraction_run):
        assert np.all(contraction_run.history[1] < 0)

    def test_contraction(self, contraction_run):
        ratios = contraction_run.contraction_ratios
        assert ratios[0] < 0.5
        assert contraction_run.diff_norms[-1] < contraction_run.diff_norms[0]

    def test_refined_quadrature_agrees(self, gaussian, settings, contraction_run):
        fine = picard_iterate_mu(gaussian, K, n_iter=1, settings=settings.refined())
        mu1 = contraction_run.history[1]
        assert np.max(np.abs(fine.history[1] - mu1)) < 0.1 * np.max(np.abs(mu1))

    def test_snapshot(self, contraction_run):
        first = contraction_run.iterate(1)
        assert first.iteration == 1
        assert np.array_equal(first.values, contraction_run.history[1])
        with pytest.raises(ParameterError):
            contraction_run.iterate(9)

    def test_requires_large_k(self, gaussian, settings):
        with pytest.raises(ParameterError):
            picard_iterate_mu(gaussian, 2.0, settings=settings)

    def test_requires_scalar_potential(self, settings):
        with pytest.raises(ParameterError):
            picard_iterate_mu(build_bump_field(0.1), K, settings=settings)

    def test_growing_differences(self, gaussian, settings, monkeypatch):
        """相邻差连续两步增大"""
        outputs = iter([1.0, 3.0, 8.0, 20.0])

        def fake(k, f, targets, spec=None):
            return np.full(len(targets), next(outputs))

        monkeypatch.setattr(picard_module, "apply_G_many", fake)
        with pytest.raises(ContractionError) as err:
            picard_iterate_mu(gaussian, K, n_iter=4, settings=settings)
        assert err.value.norms == pytest.approx([1.0, 3.0, 5.0])
        assert err.value.partial.iteration == 3


class TestResidual:
    """测试 (HJ) 残差"""

    def test_all_zero(self, settings):
        grid = settings.grid()
        mu = PhaseCorrection(k=K, grid=grid, values=np.zeros(grid.shape))
        assert eikonal_residual(mu, build_gaussian_potential(0.0)) == 0.0

    def test_zero_phase(self, settings, gaussian):
        grid = settings.grid()
        mu = PhaseCorrection(k=K, grid=grid, values=np.zeros(grid.shape))
        interior = (grid.radii[1:-1, None, None] * grid.directions[None, :, :]).reshape(-1, 3)
        assert eikonal_residual(mu, gaussian) == pytest.approx(np.max(np.abs(gaussian(interior))))

    def test_decreases_over_iterations(self):
        """μ 插值误差须小于 |∇μ₁|²：加密球壳，加大势场"""
        V = build_gaussian_potential(amplitude=8.0, width=1.0)
        fine_grid = EikonalSettings(n_shells=32, r_max=8.0, n_s=12, n_t=24, n_phi=4)
        run = picard_iterate_mu(V, 5.0, n_iter=3, settings=fine_grid)
        r1, r2, r3 = (eikonal_residual(run.iterate(n), V) for n in (1, 2, 3))
        assert r2 < r1
        assert r3 < r1

    def test_second_order_differences(self):
        """μ = a/r 的解析残差为零，差分残差按 h² 收敛"""
        a = 0.5

        def mu(p):
            return a / np.linalg.norm(p, axis=1)

        def V(p):
            r = np.linalg.norm(p, axis=1)
            return a * a / r ** 4 + 2.0 * K * a / r ** 2 + 2.0 * a / r ** 3

        points = 2.0 * np.eye(3)
        coarse = np.max(np.abs(hj_residual(mu, V, K, points, 0.02)))
        fine = np.max(np.abs(hj_residual(mu, V, K, points, 0.01)))
        assert 3.4 <= coarse / fine <= 4.6

    def test_too_few_shells(self):
        grid = ShellGrid(radii=np.array([1.5, 2.0, 3.0, 4.0]))
        mu = PhaseCorrection(k=K, grid=grid, values=np.zeros(grid.shape))
        with pytest.raises(InsufficientDataError):
            eikonal_residual(mu, build_gaussian_potential(1.0))

"""
场模块测试
"""
import csv

import numpy as np
import pytest
from scipy.special import erf

from src.core import ORIGIN, ParameterError, Point3, dyadic_radii, random_directions
from src.fields import (
    GRADIENT_BOUND, AndersonPotentialSpec, DecayEnvelope, FieldKind, FieldSpec,
    SignLaw, SpecError, anderson_envelope, build_bump_field, build_bump_potential,
    build_example1, build_example2, build_gaussian_potential, build_proposition_potential,
    bump_far_kernel, bump_mass, cutoff_gradient, default_anderson_spec, draw_signs,
    estimate_decay_envelope, eval_cutoff, example1_potential, export_anderson_csv,
    fit_decay_exponent, helmholtz_parts, helmholtz_reconstruct, is_short_range,
    lattice_centers, refine_radii, sample_anderson, split_field, truncate_far_part
)
from src.quadrature import QuadratureSpec


def random_points(n, scale=3.0, seed=0):
    return np.random.default_rng(seed).uniform(-scale, scale, size=(n, 3))


class TestCutoff:
    """测试截断函数 χ_R"""

    def test_values(self):
        assert eval_cutoff(Point3(0.5, 0.0, 0.0), 1.0) == 1.0
        assert eval_cutoff(Point3(2.5, 0.0, 0.0), 1.0) == 0.0
        assert 0.0 < eval_cutoff(Point3(1.5, 0.0, 0.0), 1.0) < 1.0

    def test_radius_guard(self):
        with pytest.raises(ParameterError):
            eval_cutoff(ORIGIN, 0.0)

    @pytest.mark.parametrize("R", [1.0, 10.0, 1000.0])
    def test_gradient_bound_uniform(self, R):
        r = np.linspace(R - 0.5, R + 1.5, 4001)
        pts = np.stack([r, np.zeros_like(r), np.zeros_like(r)], axis=1)
        grad = np.linalg.norm(cutoff_gradient(pts, R), axis=1)
        assert grad.max() <= GRADIENT_BOUND + 1e-12
        assert grad.max() <= 2.0

    def test_split_reproduces_field(self):
        Q, _ = build_example1(1.0)
        split = split_field(Q, 2.0)
        pts = random_points(500, scale=4.0)
        assert np.max(np.abs(split.Q1(pts) + split.Q2(pts) - Q(pts))) < 1e-12
        assert np.max(np.abs(split.Q1.div(pts) + split.Q2.div(pts) - Q.div(pts))) < 1e-12

    def test_split_divergence_matches_fd(self):
        Q, _ = build_example1(1.0)
        split = split_field(Q, 1.5)
        pts = random_points(100, scale=3.0, seed=5)
        fd = split.Q1.fd_divergence(pts, h=1e-4)
        assert np.max(np.abs(fd - split.Q1.div(pts))) < 1e-6

    def test_split_swallows_compact_field(self):
        Q = build_bump_field(0.5)
        split = split_field(Q, 2.0)
        assert split.Q2.is_zero
        pts = random_points(200, scale=3.0)
        assert np.max(np.abs(split.Q2(pts))) == 0.0

    def test_truncation_keeps_annulus_only(self):
        """χ_ρ(1 - χ_R)Q：R + 1 < |x| < ρ 上等于 Q，近场与 ρ + 1 外为零"""
        Q, _ = build_example1(1.0)
        T = truncate_far_part(Q, rho=6.0, R=1.0)
        dirs = random_directions(40, seed=1)
        for r, inside in ((0.5, False), (2.5, True), (5.5, True), (7.5, False)):
            pts = r * dirs
            expected = Q(pts) if inside else np.zeros_like(pts)
            assert np.max(np.abs(T(pts) - expected)) < 1e-12, r
        assert T.reach == pytest.approx(7.0)

    def test_truncation_drops_near_bump(self):
        assert truncate_far_part(build_bump_field(0.05), rho=4.0, R=1.0).is_zero
        shifted = build_bump_field(0.05, center=Point3(3.0, 0.0, 0.0))
        T = truncate_far_part(shifted, rho=6.0, R=1.0)
        pts = np.array([3.0, 0.0, 0.0]) + random_points(100, scale=0.5)
        assert np.allclose(T(pts), shifted(pts), rtol=0, atol=1e-14)

    def test_truncation_radius_guard(self):
        Q = build_bump_field(0.05)
        with pytest.raises(ParameterError):
            truncate_far_part(Q, rho=2.0, R=1.0)
        with pytest.raises(ParameterError):
            truncate_far_part(Q, rho=5.0, R=0.0)


class TestFieldSpec:
    """测试场抽象"""

    def test_fd_divergence_second_order(self):
        """halving h 使误差缩小到约 1/4"""
        Q, _ = build_example1(1.0)
        pts = random_points(200, scale=2.0, seed=1)
        err = [np.max(np.abs(Q.fd_divergence(pts, h) - Q.div(pts))) for h in (0.02, 0.01)]
        assert 3.4 <= err[0] / err[1] <= 4.6

    def test_scaled(self):
        Q = build_bump_field(0.5)
        half = Q.scaled(0.5)
        pts = random_points(50, scale=1.0)
        assert np.allclose(half.div(pts), 0.5 * Q.div(pts))
        assert half.envelope.m == pytest.approx(0.5 * Q.envelope.m)

    def test_zero(self):
        Z = FieldSpec.zero()
        assert Z.is_zero
        assert np.all(Z.div(random_points(5)) == 0)

    def test_envelope_validation(self):
        with pytest.raises(ParameterError):
            DecayEnvelope(1.0, 0.0)

    def test_bump_envelope_holds(self):
        Q = build_bump_field(0.5, Point3(0.5, 0.0, 0.0))
        pts = random_points(2000, scale=2.0)
        assert Q.envelope.holds(Q.magnitude(pts), np.linalg.norm(pts, axis=1))

    def test_bump_divergence_matches_fd(self):
        Q = build_bump_field(0.5)
        pts = random_points(300, scale=1.0, seed=2)
        assert np.max(np.abs(Q.fd_divergence(pts, h=1e-4) - Q.div(pts))) < 1e-5


class TestExamples:
    """测试例子中的场"""

    def test_example1_identity(self):
        Q, V2 = build_example1(1.0)
        V = example1_potential(1.0)
        pts = random_points(1000, scale=5.0)
        assert np.max(np.abs(Q.div(pts) + V2(pts) - V(pts))) < 1e-12

    def test_example1_point(self):
        Q, V2 = build_example1(1.0)
        x = Point3(np.pi / 2, 0.0, 0.0)
        assert Q.div(x)[0] + V2.at(x) == pytest.approx(1.0 / (1.0 + np.pi ** 2 / 4), abs=1e-14)

    def test_example1_gamma_guard(self):
        with pytest.raises(ParameterError):
            build_example1(0.2)

    def test_example1_remainder_is_short_range(self):
        _, V2 = build_example1(1.0)
        dirs = random_directions(200, seed=9)
        exponent, r2 = fit_decay_exponent(V2, np.geomspace(8.0, 256.0, 24), dirs)
        assert abs(exponent - 3.0) < 0.2
        assert is_short_range(V2, 1.0, np.geomspace(8.0, 256.0, 24), dirs)

    def test_example2(self):
        centers = [[0.0, 0.0, 0.0], [3.0, 0.0, 0.0], [0.0, -3.0, 0.0]]
        Q = build_example2(centers, [1.0, 0.5, 0.25])
        pts = random_points(500, scale=4.0, seed=3)
        assert np.max(np.abs(Q.fd_divergence(pts, h=1e-4) - Q.div(pts))) < 1e-5
        single = build_bump_field(0.5, Point3(3.0, 0.0, 0.0))
        near = np.array([[3.2, 0.1, -0.3]])
        assert np.allclose(Q(near), single(near))

    def test_example2_separation(self):
        with pytest.raises(SpecError):
            build_example2([[0.0, 0.0, 0.0], [1.5, 0.0, 0.0]], [1.0, 1.0])

    def test_proposition_potential(self):
        Q = build_bump_field(0.5)
        V = build_proposition_potential(Q, 1.0)
        x = np.array([[0.3, 0.2, -0.1]])
        q = Q(x)
        assert V(x)[0] == pytest.approx(Q.div(x)[0] + np.sum(q * q))
        with pytest.raises(ParameterError):
            build_proposition_potential(Q, 1.5)

    def test_bump_mass(self):
        r, w = np.polynomial.legendre.leggauss(200)
        r = 0.5 * (r + 1.0)
        pts = np.stack([r, np.zeros_like(r), np.zeros_like(r)], axis=1)
        reference = np.sum(0.5 * w * 4 * np.pi * r ** 2 * build_bump_potential()(pts))
        assert abs(bump_mass() - reference) < 1e-9


class TestEnvelope:
    """测试包络估计"""

    def test_saturated(self):
        eps = 0.3
        F = FieldSpec(kind=FieldKind.SCALAR,
                      evaluate=lambda p: 1.0 / (1.0 + np.linalg.norm(p, axis=1) ** (0.5 + eps)),
                      envelope=DecayEnvelope(1.0, eps))
        assert abs(estimate_decay_envelope(F, eps) - 1.0) < 1e-12

    def test_example1_refinement_stable(self):
        Q, _ = build_example1(1.0)
        base = dyadic_radii()
        m0 = estimate_decay_envelope(Q, 0.4, base)
        m1 = estimate_decay_envelope(Q, 0.4, refine_radii(base))
        m2 = estimate_decay_envelope(Q, 0.4, refine_radii(refine_radii(base)))
        assert np.isfinite(m0)
        assert abs(m1 / m0 - 1) < 0.05 and abs(m2 / m0 - 1) < 0.05

    def test_empty_grid(self):
        with pytest.raises(ParameterError):
            estimate_decay_envelope(build_bump_field(), 0.5, [])

    def test_nonpositive_eps(self):
        with pytest.raises(ParameterError):
            estimate_decay_envelope(build_bump_field(), 0.0)


class TestAnderson:
    """测试随机化势"""

    def test_lattice_separation(self):
        centers = lattice_centers(12.0)
        d = np.linalg.norm(centers[:, None] - centers[None], axis=2)
        np.fill_diagonal(d, np.inf)
        assert d.min() > 2.0

    def test_close_centers_rejected(self):
        with pytest.raises(SpecError):
            AndersonPotentialSpec(centers=[[0, 0, 0], [2, 0, 0]], amplitudes=[1, 1])

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_envelope_holds(self, seed):
        spec = default_anderson_spec(eps=0.25, ball_radius=15.0, seed=seed)
        V = sample_anderson(spec)
        rng = np.random.default_rng(seed)
        j = rng.integers(0, spec.n_centers, 2000)
        pts = spec.centers[j] + rng.uniform(-0.8, 0.8, size=(2000, 3))
        env = anderson_envelope(spec)
        assert env.holds(np.abs(V(pts)), np.linalg.norm(pts, axis=1))

    def test_zero_amplitudes(self):
        centers = lattice_centers(9.0)
        spec = AndersonPotentialSpec(centers=centers, amplitudes=np.zeros(len(centers)))
        V = sample_anderson(spec)
        assert V.is_zero
        assert np.all(V(centers) == 0)

    def test_signs_deterministic_and_even(self):
        spec = default_anderson_spec(ball_radius=30.0, seed=5)
        assert np.array_equal(draw_signs(spec, realization=3), draw_signs(spec, realization=3))
        signs = draw_signs(spec)
        assert set(np.unique(signs)) == {-1.0, 1.0}
        assert abs(signs.mean()) < 3.0 / np.sqrt(len(signs))

    def test_uniform_law(self):
        spec = default_anderson_spec(ball_radius=30.0, sign_law=SignLaw.UNIFORM)
        signs = draw_signs(spec)
        assert np.all(np.abs(signs) <= 1.0)
        assert abs(np.mean(signs ** 2) - 1 / 3) < 4 * np.sqrt(4 / 45 / len(signs))

    def test_value_at_center(self):
        spec = default_anderson_spec(ball_radius=9.0, seed=2)
        V = sample_anderson(spec)
        signs = draw_signs(spec)
        assert np.allclose(V(spec.centers), spec.amplitudes * signs * np.exp(-1.0))

    def test_export_csv(self, tmp_path):
        spec = default_anderson_spec(ball_radius=6.0)
        path = export_anderson_csv(spec, tmp_path / "realization.csv")
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["x1", "x2", "x3", "amplitude", "sign"]
        assert len(rows) == spec.n_centers + 1


class TestHelmholtz:
    """测试 Helmholtz 重构"""

    def test_zero(self):
        V = FieldSpec.zero(FieldKind.SCALAR)
        assert np.all(helmholtz_reconstruct(V, Point3(1.0, 2.0, 3.0)) == 0)

    def test_gaussian_center(self):
        V = build_gaussian_potential()
        assert np.max(np.abs(helmholtz_reconstruct(V, ORIGIN))) < 1e-10

    def test_gaussian_closed_form(self):
        V = build_gaussian_potential()
        x = Point3(2.0, 0.0, 0.0)
        mass = 4 * np.pi * (np.sqrt(np.pi) / 4 * erf(2.0) - 2.0 * np.exp(-4.0) / 2)
        Q = helmholtz_reconstruct(V, x)
        assert abs(Q[0] - mass / (4 * np.pi * 4.0)) < 1e-8
        assert np.max(np.abs(Q[1:])) < 1e-10

    def test_gaussian_divergence(self):
        """中心差分散度还原 V"""
        V = build_gaussian_potential()
        x = np.array([2.0, 0.0, 0.0])
        h = 1e-2
        div = 0.0
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            qp = helmholtz_reconstruct(V, Point3.from_array(x + e))
            qm = helmholtz_reconstruct(V, Point3.from_array(x - e))
            div += (qp[i] - qm[i]) / (2 * h)
        assert abs(div - V(x)[0]) < 1e-2

    @pytest.mark.parametrize("xn", [1.5, 3.0])
    def test_far_kernel_matches_reconstruction(self, xn):
        V = build_bump_potential(1.0)
        x = Point3(xn, 0.0, 0.0)
        spec = QuadratureSpec(n_theta=16, n_phi=16, n_radial=16, tol=1e-5)
        far = helmholtz_parts(V, x, spec=spec).far
        kernel = bump_far_kernel()(x.as_array()[None, :])[0]
        assert np.allclose(far, kernel, rtol=1e-4, atol=1e-9)

    def test_far_kernel_newton(self):
        kernel = bump_far_kernel()
        d = np.array([[0.0, 4.0, 0.0]])
        assert np.allclose(kernel(d)[0], [0.0, bump_mass() / (4 * np.pi * 16.0), 0.0])
        # 表与牛顿公式在 |d| = 2 处衔接
        assert kernel.radial(np.array([1.999999]))[0] == pytest.approx(
            bump_mass() / (16 * np.pi), rel=1e-4)

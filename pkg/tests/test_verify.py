"""
验证模块测试
"""
from dataclasses import replace

import numpy as np
import pytest
from scipy.integrate import dblquad

from src.core import InsufficientDataError, ParameterError
from src.fields import (
    DecayEnvelope, FieldKind, FieldSpec, build_bump_potential, build_gaussian_gradient_field,
    bump_far_kernel, default_anderson_spec, draw_signs
)
from src.fields import AndersonPotentialSpec
from src.quadrature import QuadratureSpec, RegionTag, integrate_exterior
from src.verify import (
    anderson_decay_stats, bump_trial_function, cumulative_growth, default_k_points,
    dirac_convergence, dirac_factorization_check, far_part_operator, fit_lemma2,
    gaussian_trial_function, lemma1_integrals, lemma1_sweep, lemma2_sweep, moment_bound_check,
    proposition_form_check, sphere_damping_exact, unitary_error, upsilon_integral
)


@pytest.fixture(scope="module")
def anderson_spec():
    return default_anderson_spec(eps=0.25)


@pytest.fixture(scope="module")
def decay_report(anderson_spec):
    return anderson_decay_stats(anderson_spec, n_realizations=200, seed=3)


def swirl_field():
    """v = (-x2, x1, 0)e^{-|x|²}，散度为零、旋度非零"""
    def evaluate(p):
        g = np.exp(-np.sum(p * p, axis=1))
        return np.stack([-p[:, 1] * g, p[:, 0] * g, np.zeros(len(p))], axis=1)

    return FieldSpec(kind=FieldKind.VECTOR, evaluate=evaluate, envelope=DecayEnvelope(1.0, 1.0),
                     divergence=lambda p: np.zeros(len(p)), name="swirl")


class TestRegression:
    """测试对数回归"""

    def test_fit_lemma2_exact(self):
        deltas = np.array([0.2, 0.5, 1.0, 0.5])
        xs = np.array([4.0, 4.0, 8.0, 16.0])
        lhs = 2.0 * deltas ** -3 * np.exp(-1.3 * deltas * xs)
        C, gamma, fit = fit_lemma2(deltas, xs, lhs)
        assert C == pytest.approx(2.0, rel=1e-10)
        assert gamma == pytest.approx(1.3, rel=1e-10)
        assert fit.r_squared == pytest.approx(1.0)

    def test_fit_lemma2_needs_data(self):
        with pytest.raises(InsufficientDataError):
            fit_lemma2([0.5, 0.5], [4.0, 8.0], [1.0, 0.5])

    def test_cumulative_growth(self):
        xs = np.array([4.0, 4.0, 8.0, 8.0])
        ratios = np.array([1.0, 2.0, 3.0, 1.0])
        assert cumulative_growth(xs, ratios) == pytest.approx(1.5)
        assert cumulative_growth(np.array([4.0]), np.array([7.0])) == 1.0


class TestLemma1:
    """测试球面积分估计"""

    def test_closed_form(self):
        delta, rho, xn = 0.5, 2.0, 10.0
        scaled = lemma1_integrals(delta, rho, xn).value[0]
        exact = sphere_damping_exact(delta, rho, xn)
        assert scaled * np.exp(-delta * xn) == pytest.approx(exact, rel=1e-8)

    def test_single_triple(self):
        report = lemma1_sweep([0.5], [2.0], [10.0])
        assert np.all(np.isfinite(report.ratios))
        assert np.all(report.ratios > 0)

    def test_scale_invariance(self):
        """ρ/|x| 与 δ|x| 固定时比值不变"""
        a = lemma1_sweep([0.5], [2.0], [10.0]).ratios[0, 0]
        b = lemma1_sweep([0.25], [4.0], [20.0]).ratios[0, 0]
        assert 0.5 < a / b < 2.0
        assert a == pytest.approx(b, rel=1e-6)

    def test_weights_ordered(self):
        """ζ ≤ π，加权积分依次受控"""
        values = lemma1_integrals(1.0, 2.0, 8.0).value
        assert values[1] <= np.pi * values[0]
        assert values[2] <= np.pi * values[1]

    @pytest.mark.parametrize("rho, xn", [(4.0, 6.0), (1.0, 6.0), (5.0, 6.0)])
    def test_constraint(self, rho, xn):
        with pytest.raises(ParameterError):
            lemma1_sweep([0.5], [rho], [xn])

    def test_delta_range(self):
        with pytest.raises(ParameterError):
            lemma1_sweep([0.0], [1.5], [4.0])

    def test_default_sweep(self):
        report = lemma1_sweep()
        assert report.lhs.shape == (24, 3)
        assert report.passed
        assert np.all(report.growth <= 2.0)
        assert len(report.rows()) == 24
        assert report.to_dict()['passed'] is True


class TestLemma2:
    """测试 Υ 上的体积估计"""

    def test_nested_quadrature_oracle(self):
        delta, xn = 0.5, 6.0
        r0 = 2.0 * xn / 3.0

        def u_max(r):
            return min(1.0, (r * r + xn * xn - r0 * r0) / (2.0 * r * xn))

        def integrand(u, r):
            s = np.sqrt(r * r + xn * xn - 2.0 * r * xn * u)
            return 2.0 * np.pi * r * r * np.exp(-delta * (r + s))

        reference, _ = dblquad(integrand, r0, 80.0, lambda r: -1.0, u_max, epsabs=1e-14, epsrel=1e-10)
        assert upsilon_integral(delta, xn).value.real == pytest.approx(reference, rel=1e-6)

    def test_masked_exterior_quadrature(self):
        delta, xn = 0.5, 6.0
        x = np.array([xn, 0.0, 0.0])

        def f(y):
            inside = RegionTag.UPSILON.contains(y, x)
            damp = np.exp(-delta * (np.linalg.norm(y - x, axis=1) + np.linalg.norm(y, axis=1)))
            return np.where(inside, damp, 0.0)

        loose = QuadratureSpec(n_theta=32, n_phi=8, n_radial=16, tol=5e-2, max_refine=2)
        brute = integrate_exterior(f, delta, loose, axis=x, breaks=(2 * xn / 3,)).value.real
        assert brute == pytest.approx(upsilon_integral(delta, xn).value.real, rel=0.1)

    def test_fixed_delta(self):
        report = lemma2_sweep([0.5], [4.0, 8.0, 16.0])
        assert report.exponent > 1.0
        assert report.passed
        lhs = report.lhs[:, 0]
        assert lhs[0] > lhs[1] > lhs[2]

    def test_region_bound(self):
        """Υ 上 |x-y| + |y| ≥ 4|x|/3，故积分 ≤ e^{-2δ|x|/3}∫e^{-δ|y|/2}dy"""
        delta, xn = 0.5, 6.0
        bound = 64.0 * np.pi / delta ** 3 * np.exp(-2.0 * delta * xn / 3.0)
        assert 0 < upsilon_integral(delta, xn).value.real <= bound

    def test_default_sweep(self):
        report = lemma2_sweep()
        assert report.exponent > 1.0
        assert report.passed
        assert report.rhos is None

    def test_requires_exterior_point(self):
        with pytest.raises(ParameterError):
            lemma2_sweep([0.5], [1.0])


class TestDirac:
    """测试 𝒟² 的分解"""

    def test_unitary(self):
        assert unitary_error() < 1e-15

    def test_free_case(self):
        v = FieldSpec.zero()
        result = dirac_convergence(v)
        assert 3.4 <= result.deviation_ratios[0] <= 4.6
        assert all(r.off_diagonal < 1e-9 for r in result.reports)
        assert result.second_order

    def test_gradient_field(self):
        v = build_gaussian_gradient_field(1.0)
        result = dirac_convergence(v)
        assert result.reports[0].gradient_case
        assert 3.4 <= result.deviation_ratios[0] <= 4.6
        assert 3.4 <= result.off_diagonal_ratios[0] <= 4.6
        assert result.second_order

    def test_rotational_field(self):
        """一般 v 仍有 (1,1) 分量恒等式，但第一行其余元素不趋于零"""
        result = dirac_convergence(swirl_field())
        assert not result.reports[0].gradient_case
        assert 3.4 <= result.deviation_ratios[0] <= 4.6
        assert result.reports[-1].off_diagonal > 1e-2
        assert result.off_diagonal_ratios[0] < 1.5

    def test_too_coarse(self):
        with pytest.raises(InsufficientDataError):
            dirac_factorization_check(FieldSpec.zero(), 0.5)

    def test_scalar_field_rejected(self):
        with pytest.raises(ParameterError):
            dirac_factorization_check(build_bump_potential(1.0), 0.1)

    def test_bump_laplacian(self):
        trial = bump_trial_function(radius=2.0)
        h = 1e-3
        pts = np.array([[0.3, -0.2, 0.5], [0.0, 0.0, 0.0], [1.1, 0.4, 0.2]])
        fd = -6.0 * trial.value(pts)
        for e in np.eye(3):
            fd += trial.value(pts + h * e) + trial.value(pts - h * e)
        fd /= h * h
        assert np.allclose(fd, trial.laplacian(pts), rtol=1e-4, atol=1e-6)

    def test_report_serializable(self):
        report = dirac_factorization_check(FieldSpec.zero(), 0.1, gaussian_trial_function(1.0))
        data = report.to_dict()
        assert data['grid_step'] == 0.1
        assert data['n_points'] == 729


class TestAndersonStats:
    """测试 Q₂ 的矩与衰减"""

    def test_second_moment_decay(self, decay_report):
        assert decay_report.defined
        assert decay_report.decay.exponent >= 1.3
        assert decay_report.dispersion_decay.exponent >= 1.3

    def test_mean_vanishes(self, decay_report):
        assert decay_report.mean_vanishes

    def test_matches_exact_dispersion(self, decay_report):
        gap = np.abs(decay_report.second_moment - decay_report.dispersion)
        assert np.all(gap <= 5.0 * decay_report.second_moment_error)

    def test_differential(self, decay_report):
        assert decay_report.differential_fd_error < 1e-3
        assert np.all(np.isfinite(decay_report.differential_ratio))
        assert np.isfinite(decay_report.envelope_exponent)
        assert decay_report.envelope_exponent_error > 0

    def test_zero_amplitudes(self):
        small = default_anderson_spec(eps=0.25, ball_radius=12.0)
        silent = replace(small, amplitudes=np.zeros(small.n_centers))
        report = anderson_decay_stats(silent, n_realizations=50, radii=(4.0, 8.0))
        assert not report.defined
        assert np.all(report.second_moment == 0)
        assert np.all(np.isnan(report.envelope_exponents))

    def test_requires_realizations(self, anderson_spec):
        with pytest.raises(ParameterError):
            anderson_decay_stats(anderson_spec, n_realizations=49)

    def test_default_radii_inside_cloud(self, anderson_spec, decay_report):
        assert anderson_spec.cloud_radius == pytest.approx(48.0)
        assert decay_report.radii.max() <= anderson_spec.cloud_radius - 1.0

    def test_radii_outside_cloud_rejected(self, anderson_spec):
        with pytest.raises(ParameterError):
            anderson_decay_stats(anderson_spec, n_realizations=50, radii=(4.0, 16.0, 64.0))
        small = default_anderson_spec(eps=0.25, ball_radius=12.0)
        with pytest.raises(ParameterError):
            moment_bound_check(small, p=1, n_realizations=50)

    def test_requires_default_bump(self):
        small = default_anderson_spec(eps=0.25, ball_radius=6.0)
        with pytest.raises(ParameterError):
            anderson_decay_stats(replace(small, bump=build_bump_potential(1.0)), n_realizations=50)

    def test_operator_is_linear_in_centers(self):
        spec = AndersonPotentialSpec(centers=np.array([[0.0, 0.0, 0.0], [3.0, 0.0, 0.0]]),
                                     amplitudes=np.array([1.0, 0.5]))
        x = np.array([[1.5, 1.0, 0.0]])
        kernel = bump_far_kernel()
        signs = draw_signs(spec, 1, 0)
        q2 = far_part_operator(spec, x)[0] @ signs
        expected = signs[0] * kernel(x)[0] + 0.5 * signs[1] * kernel(x - [3.0, 0.0, 0.0])[0]
        assert np.allclose(q2, expected, rtol=1e-13, atol=1e-15)

    def test_first_moment_consistency(self, anderson_spec):
        """p = 1 与衰减统计在相同格点上给出相同指数"""
        faces = np.concatenate([np.eye(3), -np.eye(3)])
        decay = anderson_decay_stats(anderson_spec, n_realizations=60, seed=5, directions=faces)
        moments = moment_bound_check(anderson_spec, p=1, k_points=default_k_points(),
                                     n_realizations=60, seed=5)
        assert abs(moments.fit.exponent - decay.decay.exponent) < 0.1

    def test_fourth_moment(self, anderson_spec):
        report = moment_bound_check(anderson_spec, p=2, n_realizations=200, seed=3)
        assert report.fit.exponent >= 2.6
        assert report.independent_signs
        assert report.target_exponent == pytest.approx(3.0)

    def test_moment_arguments(self, anderson_spec):
        with pytest.raises(ParameterError):
            moment_bound_check(anderson_spec, p=3)
        with pytest.raises(ParameterError):
            moment_bound_check(anderson_spec, p=1, k_points=np.array([[0.5, 0.0, 0.0]]))


class TestPositivity:
    """测试 -Δ + γ div Q + |Q|² 的正性"""

    def test_gaussian_gradient(self):
        report = proposition_form_check(build_gaussian_gradient_field(1.0), gamma=1.0, n_tests=4)
        assert report.passed
        assert report.min_value >= -1e-8

    def test_gamma_zero_dominates_energy(self):
        report = proposition_form_check(build_gaussian_gradient_field(1.0), gamma=0.0, n_tests=3)
        assert np.all(report.values >= report.gradient_energies - 1e-12)

    def test_zero_field(self):
        report = proposition_form_check(FieldSpec.zero(), gamma=1.0, n_tests=2)
        assert np.allclose(report.values, report.gradient_energies, rtol=1e-14, atol=0.0)

    def test_gamma_guard(self):
        with pytest.raises(ParameterError):
            proposition_form_check(build_gaussian_gradient_field(1.0), gamma=1.5)

    def test_deterministic(self):
        Q = build_gaussian_gradient_field(1.0)
        a = proposition_form_check(Q, n_tests=2, seed=9)
        b = proposition_form_check(Q, n_tests=2, seed=9)
        assert np.array_equal(a.values, b.values)

"""Structural identities of the generalized shift: normalization, identity at
zero step, the diagonal action on one Jacobi family, difference algebra, and
the damped boundedness ratio."""

import math

import numpy as np
import pytest

from gshift import (
    DegenerateInputError,
    DifferenceQuery,
    EvaluationError,
    JacobiParams,
    NormConfig,
    ShiftKernelConfig,
    SiKind,
    SingularArgumentError,
    SpaceParams,
    WeightSpec,
    apply_shift,
    boundedness_ratio,
    co_value,
    difference_via_inclusion_exclusion,
    eval_jacobi,
    generalized_difference,
    kernel_B,
    shift_values,
    validate_kernel,
)
from gshift.shift import DifferenceEvaluator, difference_values

from conftest import EIGEN_BASIS, MULTIPLIER_FAMILY

XS = np.linspace(-0.95, 0.95, 21)


class TestShiftBasics:
    def test_normalization_of_constant(self, kernel_cfg):
        for y in (-0.7, 0.0, 0.4, 0.95, 1.0):
            vals = shift_values(kernel_cfg, lambda u: np.ones_like(u), y, XS)
            np.testing.assert_allclose(vals, 1.0, atol=1e-9)

    def test_identity_at_zero_step(self, kernel_cfg):
        for f in (lambda u: np.abs(u - 0.25), lambda u: np.exp(u), lambda u: u**3):
            got = shift_values(kernel_cfg, f, 1.0, XS)
            np.testing.assert_allclose(got, f(XS), atol=1e-12)

    def test_linearity(self, kernel_cfg):
        f = lambda u: np.sin(2 * u)
        g = lambda u: u**2
        y = 0.6
        combined = shift_values(kernel_cfg, lambda u: 2.0 * f(u) - 3.0 * g(u), y, XS)
        separate = 2.0 * shift_values(kernel_cfg, f, y, XS) - 3.0 * shift_values(
            kernel_cfg, g, y, XS
        )
        np.testing.assert_allclose(combined, separate, atol=1e-12)

    def test_scalar_and_array_entry_points_agree(self, kernel_cfg):
        f = lambda u: np.cos(u)
        y = 0.3
        arr = apply_shift(kernel_cfg, f, y, XS[:5])
        for x, v in zip(XS[:5], arr):
            assert apply_shift(kernel_cfg, f, y, float(x)) == pytest.approx(v, abs=1e-14)

    def test_kernel_pair_shapes_and_range(self, kernel_cfg):
        R, B = kernel_B(kernel_cfg, 0.5, 0.2, 0.7)
        assert isinstance(R, float) and isinstance(B, float)
        assert abs(R) < 1.0
        Rs, Bs = kernel_B(kernel_cfg, 0.5, XS, 0.7)
        assert Rs.shape == XS.shape and Bs.shape == XS.shape
        assert np.all(np.abs(Rs) <= 1.0)

    def test_rejects_out_of_range_arguments(self, kernel_cfg):
        with pytest.raises(SingularArgumentError):
            shift_values(kernel_cfg, np.cos, 1.5, XS)
        with pytest.raises(SingularArgumentError):
            shift_values(kernel_cfg, np.cos, -1.0, XS)
        with pytest.raises(SingularArgumentError):
            shift_values(kernel_cfg, np.cos, 0.5, np.array([0.0, 1.0]))

    def test_non_finite_function_reported(self, kernel_cfg):
        with pytest.raises(EvaluationError):
            shift_values(
                kernel_cfg, lambda u: np.where(np.abs(u) < 0.5, np.nan, 1.0), 0.5, XS
            )


class TestDiagonalAction:
    def test_eigenfunction_scaling(self, kernel_cfg):
        # tau_y P_n = m_n(y) P_n with the multiplier drawn from the companion
        # family, both normalized to 1 at the right endpoint.
        for n in (0, 1, 2, 5, 8):
            f = lambda u, n=n: eval_jacobi(EIGEN_BASIS, n, u)
            for y in (-0.6, 0.1, 0.8):
                m = eval_jacobi(MULTIPLIER_FAMILY, n, y)
                got = shift_values(kernel_cfg, f, y, XS)
                np.testing.assert_allclose(got, m * f(XS), atol=1e-9)

    def test_degree_one_multiplier_closed_form(self, kernel_cfg):
        # The first multiplier is 3y - 2.
        ys = np.linspace(-0.9, 1.0, 9)
        for y in ys:
            assert eval_jacobi(MULTIPLIER_FAMILY, 1, float(y)) == pytest.approx(
                3.0 * y - 2.0, abs=1e-12
            )

    def test_constant_is_fixed_point(self, kernel_cfg):
        for y in (-0.3, 0.7):
            got = shift_values(kernel_cfg, lambda u: np.full_like(u, 2.5), y, XS)
            np.testing.assert_allclose(got, 2.5, atol=1e-9)


class TestKernelValidation:
    def test_accepted_interpretation_and_residuals(self, accepted_spec):
        cfg = ShiftKernelConfig(weight=accepted_spec, quadrature_size=128)
        report = validate_kernel(
            cfg,
            np.linspace(-0.9, 0.9, 9),
            np.linspace(-0.8, 0.9, 9),
            basis=EIGEN_BASIS,
        )
        assert report.accepted == SiKind.ONE_MINUS_U_SQUARED.value
        by_kind = {e["interpretation"]: e for e in report.entries}
        good = by_kind[SiKind.ONE_MINUS_U_SQUARED.value]
        assert good["verdict"] is True
        assert good["normalization_residual"] <= 1e-6
        assert good["enforced_normalization_residual"] <= 1e-12
        assert good["identity_residual"] <= 1e-8
        assert good["multiplier_residual"] <= 1e-6
        bad = by_kind[SiKind.ONE_MINUS_U.value]
        assert bad["verdict"] is False
        assert bad["normalization_residual"] > 1e-6

    def test_enforced_mode_normalizes_by_construction(self, accepted_spec):
        cfg = ShiftKernelConfig(
            weight=accepted_spec, quadrature_size=64, enforce_normalization=True
        )
        vals = shift_values(cfg, lambda u: np.ones_like(u), 0.37, XS)
        np.testing.assert_allclose(vals, 1.0, atol=1e-15)


class TestDifferences:
    def test_first_difference_matches_definition(self, kernel_cfg):
        f = lambda u: np.exp(u)
        t = 0.8
        q = DifferenceQuery(steps=(t,))
        got = difference_values(kernel_cfg, f, q, XS)
        want = shift_values(kernel_cfg, f, math.cos(t), XS) - f(XS)
        np.testing.assert_allclose(got, want, atol=1e-13)

    def test_permutation_symmetry_exact_for_smooth(self, kernel_cfg):
        f = lambda u: np.exp(u)
        a = difference_values(kernel_cfg, f, DifferenceQuery(steps=(0.3, 0.9)), XS[:7])
        b = difference_values(kernel_cfg, f, DifferenceQuery(steps=(0.9, 0.3)), XS[:7])
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_permutation_asymmetry_is_quadrature_order(self, accepted_spec):
        # On a function with a corner the two orderings differ only by the
        # kernel quadrature error, which shrinks as the rule is refined.
        f = lambda u: np.abs(u - 0.25)
        gaps = []
        for quad in (128, 256, 512):
            cfg = ShiftKernelConfig(weight=accepted_spec, quadrature_size=quad)
            a = difference_values(cfg, f, DifferenceQuery(steps=(0.3, 0.9)), XS[:7])
            b = difference_values(cfg, f, DifferenceQuery(steps=(0.9, 0.3)), XS[:7])
            gaps.append(float(np.max(np.abs(a - b))))
        assert gaps[0] < 5e-5
        assert gaps[2] < gaps[0]
        assert gaps[2] < 1e-7

    def test_recursive_equals_subset_expansion(self, kernel_cfg):
        rng = np.random.default_rng(7)
        for r in (1, 2, 3):
            coeffs = rng.normal(size=5)
            f = lambda u, c=coeffs: np.polynomial.polynomial.polyval(np.asarray(u), c)
            steps = tuple(rng.uniform(0.1, 2.5, size=r))
            x = float(rng.uniform(-0.9, 0.9))
            q = DifferenceQuery(steps=steps)
            a = generalized_difference(kernel_cfg, f, q, x)
            b = difference_via_inclusion_exclusion(kernel_cfg, f, q, x)
            assert a == pytest.approx(b, abs=1e-9)

    def test_eigenfunction_difference_closed_form(self, kernel_cfg):
        # For a diagonal-basis member the r-fold difference multiplies by
        # prod_j (m_n(cos t_j) - 1).
        n = 4
        f = lambda u: eval_jacobi(EIGEN_BASIS, n, u)
        steps = (0.5, 1.1)
        factor = math.prod(
            eval_jacobi(MULTIPLIER_FAMILY, n, math.cos(t)) - 1.0 for t in steps
        )
        got = difference_values(kernel_cfg, f, DifferenceQuery(steps=steps), XS[:9])
        np.testing.assert_allclose(got, factor * f(XS[:9]), atol=1e-9)

    def test_zero_step_count_rejected(self, kernel_cfg):
        from gshift import ParameterDomainError

        with pytest.raises(ParameterDomainError):
            DifferenceEvaluator(kernel_cfg, np.cos).values((), XS)

    def test_overlarge_step_rejected(self, kernel_cfg):
        from gshift import ParameterDomainError

        # The query object rejects |t| > pi outright ...
        with pytest.raises(ParameterDomainError):
            DifferenceQuery(steps=(3.5,))
        # ... and the evaluation path rejects the singular boundary |t| = pi.
        with pytest.raises(SingularArgumentError):
            difference_values(kernel_cfg, np.cos, DifferenceQuery(steps=(math.pi,)), XS)


class TestBoundednessRatio:
    def test_zero_step_gives_one(self, kernel_cfg, sup_params):
        got = boundedness_ratio(kernel_cfg, lambda u: np.exp(u), 0.0, sup_params)
        assert got == pytest.approx(1.0, abs=1e-9)

    def test_constant_function_traces_damping(self, kernel_cfg, sup_params):
        for t in (0.4, 1.3, 2.2):
            got = boundedness_ratio(kernel_cfg, lambda u: np.ones_like(u), t, sup_params)
            assert got == pytest.approx(co_value(t), rel=1e-8)

    def test_zero_function_rejected(self, kernel_cfg, sup_params):
        with pytest.raises(DegenerateInputError):
            boundedness_ratio(kernel_cfg, lambda u: np.zeros_like(u), 0.5, sup_params)

    def test_sweep_stays_bounded(self, fast_kernel_cfg, sup_params):
        f = lambda u: np.sin(3 * u) + 0.5
        cfg_norm = NormConfig(sup_grid_size=513)
        ratios = [
            boundedness_ratio(fast_kernel_cfg, f, t, sup_params, cfg_norm)
            for t in np.linspace(-2.9, 2.9, 15)
        ]
        assert max(ratios) < 10.0

"""Decay fitting, theorem-verification harnesses, and diagonalizing-basis
discovery.  Heavy sweeps live in the acceptance suite; these tests pin the
report contracts on small, fast configurations."""

import math

import numpy as np
import pytest

from gshift import (
    ClassKind,
    ClassSpec,
    DomainError,
    JacobiParams,
    NormConfig,
    ParameterDomainError,
    SpaceParams,
    coincidence_report,
    discover_diagonalizing_basis,
    estimate_decay,
    get_function,
    verify_direct_embedding,
    verify_inverse_embedding,
    verify_jackson,
)
from gshift.experiments import EXPONENT_TOLERANCE, run_jobs

SMALL_NORM = NormConfig(quadrature_size=96, sup_grid_size=257)


class TestEstimateDecay:
    def test_recovers_exact_power_law(self):
        ns = [2, 4, 8, 16, 32]
        ys = [3.0 * n**-1.2 for n in ns]
        fit = estimate_decay(ns, ys)
        assert fit.lambda_hat == pytest.approx(1.2, abs=1e-12)
        assert fit.c_hat == pytest.approx(3.0, rel=1e-12)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
        assert fit.points_used == 5

    def test_tolerates_mild_perturbation(self):
        rng = np.random.default_rng(7)
        ns = np.array([2.0, 4.0, 8.0, 16.0, 32.0, 64.0])
        ys = ns**-1.0 * (1.0 + 0.02 * rng.standard_normal(ns.size))
        fit = estimate_decay(ns, ys)
        assert 0.95 <= fit.lambda_hat <= 1.05
        assert fit.r_squared > 0.99

    def test_scaling_leaves_exponent_unchanged(self):
        ns = [3, 5, 9, 17]
        ys = [n**-0.7 * (1 + 0.1 * math.sin(n)) for n in ns]
        base = estimate_decay(ns, ys)
        scaled = estimate_decay(ns, [17.3 * y for y in ys])
        assert scaled.lambda_hat == pytest.approx(base.lambda_hat, abs=1e-12)
        assert scaled.r_squared == pytest.approx(base.r_squared, abs=1e-12)

    def test_constant_data_is_a_perfect_flat_fit(self):
        fit = estimate_decay([1, 2, 4, 8], [5.0, 5.0, 5.0, 5.0])
        assert fit.lambda_hat == pytest.approx(0.0, abs=1e-12)
        assert fit.r_squared == 1.0

    def test_rejects_short_or_nonpositive_data(self):
        with pytest.raises(ParameterDomainError):
            estimate_decay([1, 2], [1.0, 0.5])
        with pytest.raises(DomainError):
            estimate_decay([1, 2, 3], [1.0, 0.0, 0.5])
        with pytest.raises(DomainError):
            estimate_decay([1, -2, 3], [1.0, 0.5, 0.2])
        with pytest.raises(ParameterDomainError):
            estimate_decay([1, 2, 3], [1.0, 0.5])


class TestClassSpec:
    def test_coincidence_window(self):
        params = SpaceParams(p=2.0, alpha=1.0)
        h = ClassSpec(ClassKind.H_CLASS, params, lam=1.5, m_const=1.0, r=1)
        assert h.admissible_for_coincidence()
        wide = ClassSpec(ClassKind.H_CLASS, params, lam=2.5, m_const=1.0, r=1)
        assert not wide.admissible_for_coincidence()
        e = ClassSpec(ClassKind.E_CLASS, params, lam=1.5, m_const=1.0)
        assert not e.admissible_for_coincidence()

    def test_validation(self):
        params = SpaceParams(p=2.0, alpha=1.0)
        with pytest.raises(ParameterDomainError):
            ClassSpec(ClassKind.E_CLASS, params, lam=0.0, m_const=1.0)
        with pytest.raises(ParameterDomainError):
            ClassSpec(ClassKind.E_CLASS, params, lam=1.0, m_const=-1.0)
        with pytest.raises(ParameterDomainError):
            ClassSpec(ClassKind.H_CLASS, params, lam=1.0, m_const=1.0)

    def test_to_dict_round_trip(self):
        params = SpaceParams(p=math.inf, alpha=1.0)
        spec = ClassSpec(ClassKind.H_CLASS, params, lam=1.0, m_const=2.0, r=2)
        d = spec.to_dict()
        assert d["kind"] == "modulus_decay"
        assert d["r"] == 2 and d["lambda"] == 1.0 and d["M"] == 2.0


class TestRunJobs:
    def test_preserves_item_order(self):
        items = list(range(10))
        assert run_jobs(1, items, lambda i: i * i) == [i * i for i in items]
        assert run_jobs(4, items, lambda i: i * i) == [i * i for i in items]

    def test_propagates_worker_errors(self):
        def worker(i):
            if i == 3:
                raise ValueError("boom")
            return i

        with pytest.raises(ValueError):
            run_jobs(2, [1, 2, 3, 4], worker)


class TestJacksonHarness:
    def test_ratio_is_scale_invariant(self, fast_kernel_cfg, sup_params, accepted_spec):
        f = get_function("abspow:1.0")
        base = verify_jackson(
            fast_kernel_cfg, f, [4, 8], sup_params, 1, accepted_spec, norm_cfg=SMALL_NORM
        )
        scaled = verify_jackson(
            fast_kernel_cfg,
            lambda x: 3.0 * f(x),
            [4, 8],
            sup_params,
            1,
            accepted_spec,
            norm_cfg=SMALL_NORM,
        )
        assert base.max_ratio is not None
        assert scaled.max_ratio == pytest.approx(base.max_ratio, rel=1e-10)
        assert base.verdict in {"PASS", "FAIL"}

    def test_polynomial_rows_are_vacuous(self, fast_kernel_cfg, sup_params, accepted_spec):
        report = verify_jackson(
            fast_kernel_cfg,
            get_function("poly:3"),
            [4, 8],
            sup_params,
            1,
            accepted_spec,
            norm_cfg=SMALL_NORM,
        )
        assert report.verdict == "PASS"
        assert report.max_ratio is None
        # E_n sits at the floor for every n >= degree; the modulus of a
        # non-constant polynomial stays genuinely positive.
        assert all(cell["status"] == "e_zero" for cell in report.cells)

    def test_rejects_bad_arguments(self, fast_kernel_cfg, sup_params, accepted_spec):
        f = get_function("abspow:1.0")
        with pytest.raises(ParameterDomainError):
            verify_jackson(fast_kernel_cfg, f, [4, 8], sup_params, 0, accepted_spec)
        with pytest.raises(ParameterDomainError):
            verify_jackson(fast_kernel_cfg, f, [], sup_params, 1, accepted_spec)
        with pytest.raises(ParameterDomainError):
            SpaceParams(p=0.5, alpha=1.0)


class TestEmbeddingHarnesses:
    def test_direct_embedding_on_corner(self, fast_kernel_cfg, sup_params, accepted_spec):
        report = verify_direct_embedding(
            fast_kernel_cfg,
            get_function("abspow:1.0"),
            1,
            1.0,
            sup_params,
            accepted_spec,
            norm_cfg=SMALL_NORM,
        )
        assert report.direction == "direct"
        assert report.verdict == "PASS"
        assert not report.low_confidence
        assert report.fit_omega.lambda_hat >= report.fit_e.lambda_hat - EXPONENT_TOLERANCE
        assert report.fit_stability["stable"] is True
        assert set(report.fit_stability) >= {"lambda_front", "lambda_back", "difference"}
        assert report.dyadic["slope_consistent_with_lambda_e"] is True
        for level, bound in zip(report.dyadic["levels"], report.dyadic["triangle_bounds"]):
            assert level["piece_norm"] <= bound + 1e-12

    def test_inverse_embedding_on_corner(self, fast_kernel_cfg, sup_params, accepted_spec):
        report = verify_inverse_embedding(
            fast_kernel_cfg,
            get_function("abspow:1.0"),
            1,
            sup_params,
            accepted_spec,
            norm_cfg=SMALL_NORM,
        )
        assert report.direction == "inverse"
        assert report.verdict == "PASS"
        assert report.jackson_max_ratio is not None and report.jackson_max_ratio > 0.0
        assert report.fit_e.lambda_hat >= report.fit_omega.lambda_hat - EXPONENT_TOLERANCE

    def test_direct_rejects_inadmissible_parameters(self, fast_kernel_cfg, accepted_spec):
        narrow = SpaceParams(p=1.0, alpha=1.0)
        with pytest.raises(ParameterDomainError):
            verify_direct_embedding(
                fast_kernel_cfg, get_function("abspow:1.0"), 1, 1.0, narrow, accepted_spec
            )


class TestCoincidence:
    def test_polynomial_passes_trivially(self, fast_kernel_cfg, sup_params, accepted_spec):
        report = coincidence_report(
            fast_kernel_cfg,
            get_function("poly:1"),
            [1],
            sup_params,
            accepted_spec,
            norm_cfg=SMALL_NORM,
        )
        assert report.verdict == "PASS"
        assert not report.low_confidence
        assert report.exponents == {"lambda_E": None}

    def test_smooth_function_is_skipped_outside_window(self, fast_kernel_cfg, accepted_spec):
        params = SpaceParams(p=2.0, alpha=1.0)
        report = coincidence_report(
            fast_kernel_cfg,
            get_function("abspow:1.5"),
            [1],
            params,
            accepted_spec,
            norm_cfg=SMALL_NORM,
        )
        assert report.verdict == "SKIPPED"
        assert not report.low_confidence
        assert any("outside (0, 2r)" in reason for reason in report.reasons)
        assert report.exponents["lambda_E"] > 2.0

    def test_unstable_fit_yields_low_confidence_skip(self, fast_kernel_cfg, sup_params, accepted_spec):
        report = coincidence_report(
            fast_kernel_cfg,
            get_function("abspow:2.5"),
            [1],
            sup_params,
            accepted_spec,
            norm_cfg=SMALL_NORM,
        )
        assert report.verdict == "SKIPPED"
        assert report.low_confidence
        assert any("unstable" in reason for reason in report.reasons)

    def test_rejects_empty_or_nonpositive_orders(self, fast_kernel_cfg, sup_params, accepted_spec):
        f = get_function("abspow:1.0")
        with pytest.raises(ParameterDomainError):
            coincidence_report(fast_kernel_cfg, f, [], sup_params, accepted_spec)
        with pytest.raises(ParameterDomainError):
            coincidence_report(fast_kernel_cfg, f, [0, 1], sup_params, accepted_spec)


class TestBasisDiscovery:
    def test_finds_the_diagonalizing_family(self, fast_kernel_cfg):
        candidates = [JacobiParams(0.0, 0.0), JacobiParams(1.0, 1.0), JacobiParams(2.0, 2.0)]
        report = discover_diagonalizing_basis(
            fast_kernel_cfg, candidates, max_degree=4, y_values=[-0.35, 0.62], quadrature_size=96
        )
        assert (report.winner.a, report.winner.b) == (2.0, 2.0)
        losers = [s["score"] for s in report.scores if (s["a"], s["b"]) != (2.0, 2.0)]
        assert min(losers) > 10.0 * report.winner_score

    def test_winner_is_stable_under_y_refinement(self, fast_kernel_cfg):
        candidates = [JacobiParams(0.0, 0.0), JacobiParams(2.0, 2.0)]
        coarse = discover_diagonalizing_basis(
            fast_kernel_cfg, candidates, max_degree=3, y_values=[0.5], quadrature_size=96
        )
        fine = discover_diagonalizing_basis(
            fast_kernel_cfg,
            candidates,
            max_degree=3,
            y_values=[0.25, 0.5, 0.75],
            quadrature_size=96,
        )
        assert coarse.winner == fine.winner == JacobiParams(2.0, 2.0)

    def test_rejects_degenerate_inputs(self, fast_kernel_cfg):
        from gshift import DegenerateInputError

        with pytest.raises(DegenerateInputError):
            discover_diagonalizing_basis(fast_kernel_cfg, [], 3, [0.5])
        with pytest.raises(ParameterDomainError):
            discover_diagonalizing_basis(fast_kernel_cfg, [JacobiParams(0.0, 0.0)], 0, [0.5])
        with pytest.raises(DomainError):
            discover_diagonalizing_basis(fast_kernel_cfg, [JacobiParams(0.0, 0.0)], 3, [-1.0])

import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from app.core.dependencies import get_service_container
from app.core.exceptions import AxisMismatch, DimensionMismatch, DomainError, EigenSolverFailure, InfiniteConditionConstant
from app.models.distribution import Axis
from app.models.report import SamplerKind

container = get_service_container()
distributions, theory = container.distributions, container.theory

rates = st.floats(0.0, 1.0)
selections = st.floats(0.01, 0.99)


class TestTheorem1Formula:
    def test_independent_case(self):
        assert theory.theorem1_rhs(0.0, 0.5) == pytest.approx(0.5)

    @pytest.mark.parametrize("r", [0.1, 0.5, 0.9])
    def test_degenerate_case(self, r):
        assert theory.theorem1_rhs(1.0, r) == pytest.approx(1.0)

    def test_quarter(self):
        assert theory.theorem1_rhs(0.25, 0.5) == pytest.approx(0.75)

    @pytest.mark.parametrize("rho_d, r", [(-0.1, 0.5), (1.1, 0.5), (0.5, 0.0), (0.5, 1.0)])
    def test_domain(self, rho_d, r):
        with pytest.raises(DomainError):
            theory.theorem1_rhs(rho_d, r)

    def test_optimal_selection_probability(self):
        r, value = theory.optimal_selection_probability(0.81)
        assert r == 0.5
        assert value == pytest.approx(0.95)

    @seed(1)
    @settings(max_examples=100, deadline=None)
    @given(rho_d=rates, r=selections)
    def test_symmetric_in_selection(self, rho_d, r):
        assert theory.theorem1_rhs(rho_d, r) == pytest.approx(theory.theorem1_rhs(rho_d, 1 - r), abs=1e-12)

    @seed(2)
    @settings(max_examples=100, deadline=None)
    @given(rho_d=rates, r=selections)
    def test_bounded_below_by_selection(self, rho_d, r):
        value = theory.theorem1_rhs(rho_d, r)
        assert max(r, 1 - r) - 1e-12 <= value <= 1.0 + 1e-12
        assert value >= rho_d - 1e-12

    @seed(3)
    @settings(max_examples=100, deadline=None)
    @given(low=rates, high=rates, r=selections)
    def test_monotone_in_rho_d(self, low, high, r):
        low, high = sorted((low, high))
        assert theory.theorem1_rhs(low, r) <= theory.theorem1_rhs(high, r) + 1e-12

    @seed(4)
    @settings(max_examples=100, deadline=None)
    @given(rho_d=rates, r=selections)
    def test_half_is_optimal(self, rho_d, r):
        assert theory.optimal_selection_probability(rho_d)[1] <= theory.theorem1_rhs(rho_d, r) + 1e-12


class TestTheorem1OnInstances:
    def test_example(self, example_joint):
        report = theory.verify_theorem1(example_joint, 0.5)
        assert report.passed
        assert report.computed["rho_d"] == pytest.approx(0.36, abs=1e-12)
        assert report.computed["rho_r"] == pytest.approx(0.8, abs=1e-12)
        assert report.computed["rho_r_formula"] == pytest.approx(0.8, abs=1e-12)

    @pytest.mark.parametrize("r", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_random_5x5(self, corpus_5x5, r):
        for joint in corpus_5x5:
            report = theory.verify_theorem1(joint, r)
            assert report.passed, report.computed
            assert report.computed["abs_error"] < 1e-8

    def test_product(self, product_joint):
        report = theory.verify_theorem1(product_joint, 0.3)
        assert report.passed
        assert report.computed["rho_d"] == pytest.approx(0.0, abs=1e-12)
        assert report.computed["rho_r"] == pytest.approx(0.7, abs=1e-12)

    def test_report_serializes_pass_key(self, example_joint):
        dumped = theory.verify_theorem1(example_joint, 0.5).model_dump(by_alias=True)
        assert dumped["pass"] is True


class TestBounds:
    def test_example_numbers(self, example_joint):
        report = theory.lemma4_and_young_bounds(example_joint, 0.5)
        assert report.passed
        assert report.computed["bound_x"] == pytest.approx(0.68)
        assert report.computed["young"] == pytest.approx(0.36 ** 0.25)
        assert report.computed["k_star"] == pytest.approx(math.log(0.36) / math.log(0.8))
        assert report.computed["k_star"] >= 4.0

    def test_product_is_tight(self, product_joint):
        report = theory.lemma4_and_young_bounds(product_joint, 0.3)
        assert report.passed
        assert report.computed["bound_x"] == pytest.approx(0.7)
        assert report.computed["rho_r"] == pytest.approx(0.7, abs=1e-12)
        assert report.computed["k_star"] is None

    def test_diagonal_is_tight(self, diagonal_joint):
        report = theory.lemma4_and_young_bounds(diagonal_joint, 0.4, restrict_support=True)
        assert report.passed
        for key in ("rho_d", "rho_r", "gamma_sq", "bound_x", "bound_y", "young"):
            assert report.computed[key] == pytest.approx(1.0, abs=1e-12)
        assert "DegenerateRate" in report.details

    def test_random_corpus(self, corpus_5x5):
        for joint in corpus_5x5:
            for r in (0.1, 0.5, 0.9):
                assert theory.lemma4_and_young_bounds(joint, r).passed
                assert theory.verify_strict_gap(joint, r).passed
                assert theory.verify_nonnegative_definite(joint, r).passed
                assert theory.verify_compute_time(joint, r, 1.0, 3.0).passed

    def test_compute_time_needs_positive_times(self, example_joint):
        with pytest.raises(DomainError):
            theory.verify_compute_time(example_joint, 0.5, 0.0, 1.0)


class TestNormIdentities:
    def test_lemma3_example(self, example_joint):
        report = theory.verify_lemma3(example_joint)
        assert report.passed
        assert report.computed["pd_root"] == pytest.approx(0.36, abs=1e-10)

    def test_lemma3_with_dc_sandwich(self, corpus_5x5, independence_proposals):
        for joint in corpus_5x5:
            _, q2 = independence_proposals(joint)
            assert theory.verify_lemma3(joint, q2).passed

    def test_lemma3_product(self, product_joint):
        assert theory.verify_lemma3(product_joint).passed

    def test_maximal_correlation(self, corpus_5x5):
        assert all(theory.verify_maximal_correlation(joint).passed for joint in corpus_5x5)


class TestConditionConstants:
    def test_independence_example(self, example_joint):
        q2 = distributions.gen_independence_proposal(example_joint, Axis.X)
        constant = theory.condition_c(example_joint, q2)
        assert constant.finite
        assert constant.value == pytest.approx(1.6)

    def test_swap_is_infinite(self, counterexample):
        joint, q2 = counterexample
        constant = theory.condition_c(joint, q2)
        assert constant.infinite
        proposed, current, _ = constant.argmax
        assert proposed == current

    def test_exact_is_one(self, corpus_3x3):
        joint = corpus_3x3[0]
        assert theory.condition_c(joint, distributions.gen_exact_proposal(joint, Axis.X)).value == pytest.approx(1.0)
        assert theory.condition_c1(joint, distributions.gen_exact_proposal(joint, Axis.Y)).value == pytest.approx(1.0)

    def test_axis_check(self, example_joint):
        with pytest.raises(AxisMismatch):
            theory.condition_c(example_joint, distributions.gen_independence_proposal(example_joint, Axis.Y))

    def test_shape_check(self, example_joint, corpus_3x3):
        wrong_size = distributions.gen_independence_proposal(corpus_3x3[0], Axis.X)
        with pytest.raises(DimensionMismatch):
            theory.condition_c(example_joint, wrong_size)


class TestMinorizations:
    def test_example(self, example_joint, independence_proposals):
        q1, q2 = independence_proposals(example_joint)
        report = theory.verify_minorizations(example_joint, q2, 0.5, q1)
        assert report.passed
        assert report.computed["C"] == pytest.approx(1.6)

    def test_exact_is_equality(self, example_joint):
        q1 = distributions.gen_exact_proposal(example_joint, Axis.Y)
        q2 = distributions.gen_exact_proposal(example_joint, Axis.X)
        report = theory.verify_minorizations(example_joint, q2, 0.5, q1)
        assert report.passed
        assert report.computed["C"] == pytest.approx(1.0)
        assert report.computed["Q_vs_conditional"] == pytest.approx(0.0, abs=1e-14)

    def test_random_3x3(self, corpus_3x3, independence_proposals):
        for joint in corpus_3x3:
            q1, q2 = independence_proposals(joint)
            assert theory.verify_minorizations(joint, q2, 0.4, q1).passed

    def test_infinite_constant(self, counterexample):
        joint, q2 = counterexample
        with pytest.raises(InfiniteConditionConstant):
            theory.verify_minorizations(joint, q2, 0.5)


class TestCounterexample:
    def test_joint_is_uniform(self, counterexample):
        joint, _ = counterexample
        assert np.all(joint.p == 0.25)

    def test_rates(self, counterexample):
        joint, q2 = counterexample
        assert theory.sampler_rates(joint, 0.25, q2=q2)[SamplerKind.DC] == pytest.approx(1.0, abs=1e-12)
        assert theory.sampler_rates(joint, 0.25, q2=q2)[SamplerKind.RC] == pytest.approx(0.5, abs=1e-12)

    def test_reports_carry_norm_powers(self, counterexample):
        joint, q2 = counterexample
        reports = theory.sampler_reports(joint, 0.25, q2=q2, n_powers=3)
        assert set(reports) == {SamplerKind.DG, SamplerKind.RG, SamplerKind.DC, SamplerKind.RC}
        assert [n for n, _ in reports[SamplerKind.RC].norm_powers] == [1, 2, 3]
        assert reports[SamplerKind.RC].norm_powers[1][1] == pytest.approx(0.25, abs=1e-12)

    def test_audit_skips_dashed_arrows(self, counterexample):
        joint, q2 = counterexample
        report = theory.qualitative_audit(joint, 0.5, q2=q2)
        assert report.passed
        assert report.computed["rho_DC"] == pytest.approx(1.0, abs=1e-12)
        assert report.computed["rho_RC"] < 1.0
        assert report.computed["rho_DG"] < 1.0
        assert report.computed["arrows_skipped"] > 0
        assert "RC->DC" in report.details

    def test_selection_robustness(self, counterexample):
        joint, q2 = counterexample
        report = theory.selection_robustness(joint, [0.1, 0.5, 0.9], q2)
        assert report.passed
        assert report.computed["rho_RC@0.1"] == pytest.approx(0.8, abs=1e-12)
        assert report.computed["rho_RC@0.9"] == pytest.approx(0.9, abs=1e-12)


class TestQualitativeAudit:
    def test_random_4x4(self, independence_proposals):
        for joint in distributions.gen_dirichlet_corpus(50, 4, 4, seed=21):
            q1, q2 = independence_proposals(joint)
            for r in (0.3, 0.5):
                report = theory.qualitative_audit(joint, r, q1, q2)
                assert report.passed, report.details
                assert report.computed["violations"] == 0.0
                assert report.computed["arrows_skipped"] == 0.0
            assert theory.selection_robustness(joint, [0.3, 0.5], q2).passed

    def test_no_arrow_leaves_dcmm(self):
        sources = [source for source, _ in theory.solid_arrows] + [source for source, _, _ in theory.dashed_arrows]
        assert SamplerKind.DCMM not in sources

    def test_exact_proposals_share_rates(self, corpus_3x3):
        joint = corpus_3x3[6]
        q1 = distributions.gen_exact_proposal(joint, Axis.Y)
        q2 = distributions.gen_exact_proposal(joint, Axis.X)
        found = theory.sampler_rates(joint, 0.5, q1, q2)
        assert found[SamplerKind.DC] == pytest.approx(found[SamplerKind.DG], abs=1e-10)
        assert found[SamplerKind.RC] == pytest.approx(found[SamplerKind.RG], abs=1e-10)
        assert found[SamplerKind.RCMM] == pytest.approx(found[SamplerKind.RG], abs=1e-10)

    def test_diagonal_selection_robustness(self, diagonal_joint):
        report = theory.selection_robustness(diagonal_joint, [0.2, 0.5, 0.8], restrict_support=True)
        assert report.passed
        assert all(value == pytest.approx(1.0, abs=1e-12) for value in report.computed.values())

    def test_mixture_bound(self):
        assert theory.selection_mixture_bound(0.25, 0.5) == pytest.approx(0.5)
        assert theory.selection_mixture_bound(0.75, 0.5) == pytest.approx(0.5)
        assert theory.selection_mixture_bound(0.5, 0.5) == 1.0


class TestSuite:
    def test_counterexample_suite_passes_with_skips(self, counterexample):
        joint, _ = counterexample

        def swap(j):
            return distributions.gen_swap_proposal(j.nx, j.ny, Axis.Y), distributions.gen_swap_proposal(j.nx, j.ny, Axis.X)

        reports = theory.run_suite([joint], [0.5], swap)
        assert all(report.passed for report in reports)
        assert any(report.skipped and report.claim == "minorizations" for report in reports)

    def test_corpus_suite_is_ordered_and_passes(self, independence_proposals):
        joints = distributions.gen_dirichlet_corpus(3, 3, 3, seed=11)
        serial = theory.run_suite(joints, [0.3, 0.7], independence_proposals, threads=0)
        threaded = theory.run_suite(joints, [0.3, 0.7], independence_proposals, threads=2)
        assert all(report.passed for report in serial)
        assert [(report.claim, report.computed) for report in serial] == [(report.claim, report.computed) for report in threaded]

    def test_input_error_is_not_reported_as_failure(self, example_joint, corpus_3x3):
        def mismatched(joint):
            return None, distributions.gen_independence_proposal(corpus_3x3[0], Axis.X)

        with pytest.raises(DimensionMismatch):
            theory.run_suite([example_joint], [0.5], mismatched)

    def test_numerical_error_becomes_failed_report(self, example_joint, independence_proposals, monkeypatch):
        def broken(joint, q2=None, n_max=None):
            raise EigenSolverFailure("did not converge")

        monkeypatch.setattr(theory, "verify_lemma3", broken)
        reports = theory.run_suite([example_joint], [0.5], independence_proposals)
        (lemma3,) = [report for report in reports if report.claim == "lemma3"]
        assert not lemma3.passed
        assert not lemma3.skipped
        assert lemma3.details.startswith("EigenSolverFailure")
        assert all(report.passed for report in reports if report.claim != "lemma3")


@pytest.mark.slow
class TestCorpusScale:
    @pytest.fixture(scope="class")
    def corpus_100(self):
        return distributions.gen_dirichlet_corpus(100, 5, 5, seed=11)

    @pytest.mark.parametrize("r", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_theorem1_on_hundred_instances(self, corpus_100, r):
        errors = [theory.verify_theorem1(joint, r).computed["abs_error"] for joint in corpus_100]
        assert max(errors) < 1e-8

    def test_lemma3_on_twenty_five_instances(self, corpus_100, independence_proposals):
        for joint in corpus_100[:25]:
            _, q2 = independence_proposals(joint)
            report = theory.verify_lemma3(joint, q2)
            assert report.passed, report.computed

    def test_minorizations_on_random_4x4(self, independence_proposals):
        for joint in distributions.gen_dirichlet_corpus(25, 4, 4, seed=5):
            q1, q2 = independence_proposals(joint)
            for r in (0.2, 0.5, 0.8):
                report = theory.verify_minorizations(joint, q2, r, q1)
                assert report.passed, report.computed

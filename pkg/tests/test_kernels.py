import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from app.core.dependencies import get_service_container
from app.core.exceptions import AxisMismatch, DimensionMismatch, DomainError, InvariantViolation, ZeroMarginal
from app.models.distribution import Axis
from app.models.kernel import TransitionKernel

container = get_service_container()
distributions, kernels = container.distributions, container.kernels


def _state(joint, x, y):
    return x * joint.ny + y


class TestConditionals:
    def test_row_normalization(self, example_joint):
        family = kernels.conditionals(example_joint)
        assert np.allclose(family.y_given_x[0], [0.8, 0.2])
        assert np.allclose(family.x_given_y[1], [0.2, 0.8])

    def test_uniform(self, uniform_joint):
        family = kernels.conditionals(uniform_joint)
        assert np.allclose(family.y_given_x, 0.5)
        assert np.allclose(family.x_given_y, 0.5)

    def test_perfect_correlation(self, diagonal_joint):
        family = kernels.conditionals(diagonal_joint)
        assert np.allclose(family.x_given_y[0], [1.0, 0.0])

    def test_zero_marginal_needs_restriction(self):
        joint = distributions.validate_joint([[0.2, 0.1, 0.1], [0.0, 0.0, 0.0], [0.3, 0.2, 0.1]])
        with pytest.raises(ZeroMarginal):
            kernels.conditionals(joint)
        family = kernels.conditionals(joint, restrict_support=True)
        assert np.allclose(family.y_given_x.sum(axis=1), 1.0)


class TestMhStep:
    def test_exact_proposal_accepts_everything(self, example_joint):
        family = kernels.conditionals(example_joint)
        exact = distributions.gen_exact_proposal(example_joint, Axis.X)
        step = kernels.mh_step(family, exact)
        assert np.allclose(step.Q, family.target(Axis.X), atol=1e-15)

    def test_swap_on_uniform_always_moves(self, uniform_joint):
        family = kernels.conditionals(uniform_joint)
        step = kernels.mh_step(family, distributions.gen_swap_proposal(2, 2, Axis.X))
        for y in range(2):
            assert np.allclose(step.Q[:, y, :], [[0.0, 1.0], [1.0, 0.0]])

    def test_independence_ratio_by_hand(self, example_joint):
        family = kernels.conditionals(example_joint)
        step = kernels.mh_step(family, distributions.gen_independence_proposal(example_joint, Axis.X))
        # y = 0: 목표 (0.8, 0.2), 제안 (0.5, 0.5)
        assert step.Q[1, 0, 0] == pytest.approx(0.5)
        assert step.Q[1, 0, 1] == pytest.approx(0.5)
        assert step.Q[0, 0, 1] == pytest.approx(0.5 * 0.2 / 0.8)
        assert step.Q[0, 0, 0] == pytest.approx(1.0 - 0.125)

    def test_axis_mismatch(self, example_joint):
        family = kernels.conditionals(example_joint)
        with pytest.raises(AxisMismatch):
            kernels.mh_step(family, distributions.gen_independence_proposal(example_joint, Axis.Y), axis=Axis.X)

    def test_dimension_mismatch(self, example_joint):
        family = kernels.conditionals(example_joint)
        with pytest.raises(DimensionMismatch):
            kernels.mh_step(family, distributions.gen_swap_proposal(3, 2, Axis.X))


class TestProductKernels:
    def test_dg_rows_depend_on_x_only(self, corpus_3x3):
        joint = corpus_3x3[0]
        P = kernels.dg_kernel(joint).P
        for x in range(joint.nx):
            rows = [P[_state(joint, x, y)] for y in range(joint.ny)]
            for row in rows[1:]:
                assert np.allclose(row, rows[0], atol=1e-15)

    def test_dg_uniform(self, uniform_joint):
        assert np.allclose(kernels.dg_kernel(uniform_joint).P, 0.25)

    def test_dg_hand_entry(self, example_joint):
        assert kernels.dg_kernel(example_joint).P[0, 0] == pytest.approx(0.64)

    def test_rg_entries(self, uniform_joint, example_joint):
        assert kernels.rg_kernel(uniform_joint, 0.5).P[_state(uniform_joint, 0, 0), _state(uniform_joint, 1, 0)] == pytest.approx(0.25)
        assert kernels.rg_kernel(example_joint, 0.5).P[0, 0] == pytest.approx(0.8)

    def test_rg_rejects_bad_r(self, example_joint):
        with pytest.raises(DomainError):
            kernels.rg_kernel(example_joint, 1.0)

    def test_exact_proposals_reduce_to_gibbs(self, corpus_3x3):
        joint = corpus_3x3[1]
        q1 = distributions.gen_exact_proposal(joint, Axis.Y)
        q2 = distributions.gen_exact_proposal(joint, Axis.X)
        pd, pr = kernels.dg_kernel(joint).P, kernels.rg_kernel(joint, 0.3).P
        assert np.allclose(kernels.dc_kernel(joint, q2).P, pd, atol=1e-14)
        assert np.allclose(kernels.rc_kernel(joint, q2, 0.3).P, pr, atol=1e-14)
        assert np.allclose(kernels.dcmm_kernel(joint, q1, q2).P, pd, atol=1e-14)
        assert np.allclose(kernels.rcmm_kernel(joint, q1, q2, 0.3).P, pr, atol=1e-14)
        assert np.allclose(kernels.marginal_xm(joint, q2).P, kernels.marginal_x(joint).P, atol=1e-14)

    def test_exact_y_proposal_reduces_rcmm_to_rc(self, corpus_3x3, independence_proposals):
        joint = corpus_3x3[2]
        _, q2 = independence_proposals(joint)
        q1 = distributions.gen_exact_proposal(joint, Axis.Y)
        assert np.allclose(kernels.rcmm_kernel(joint, q1, q2, 0.6).P, kernels.rc_kernel(joint, q2, 0.6).P, atol=1e-14)

    def test_dcmm_with_exact_x_update(self, corpus_3x3, independence_proposals):
        joint = corpus_3x3[3]
        q1, _ = independence_proposals(joint)
        q2 = distributions.gen_exact_proposal(joint, Axis.X)
        family = kernels.conditionals(joint)
        y_step = kernels.mh_step(family, q1).Q
        expected = np.einsum("abk,kc->abck", y_step, family.x_given_y).reshape(joint.n_states, joint.n_states)
        assert np.allclose(kernels.dcmm_kernel(joint, q1, q2).P, expected, atol=1e-14)

    def test_counterexample_dc_is_flip_after_refresh(self, counterexample):
        joint, q2 = counterexample
        P = kernels.dc_kernel(joint, q2).P
        for x in range(2):
            for y in range(2):
                for y_new in range(2):
                    assert P[_state(joint, x, y), _state(joint, 1 - x, y_new)] == pytest.approx(0.5)

    def test_counterexample_rc(self, counterexample):
        joint, q2 = counterexample
        P = kernels.rc_kernel(joint, q2, 0.5).P
        start = _state(joint, 0, 0)
        assert P[start, _state(joint, 1, 0)] == pytest.approx(0.5)
        assert P[start, _state(joint, 0, 0)] == pytest.approx(0.25)
        assert P[start, _state(joint, 0, 1)] == pytest.approx(0.25)


class TestMarginalChains:
    def test_px_by_hand(self, example_joint):
        assert np.allclose(kernels.marginal_x(example_joint).P, [[0.68, 0.32], [0.32, 0.68]])

    def test_py_by_hand(self, example_joint):
        assert np.allclose(kernels.marginal_y(example_joint).P, [[0.68, 0.32], [0.32, 0.68]])

    def test_px_uniform(self, uniform_joint):
        assert np.allclose(kernels.marginal_x(uniform_joint).P, 0.5)

    def test_pxm_counterexample_is_permutation(self, counterexample):
        joint, q2 = counterexample
        assert np.allclose(kernels.marginal_xm(joint, q2).P, [[0.0, 1.0], [1.0, 0.0]])


class TestKernelModel:
    def test_rejects_non_stochastic_rows(self):
        with pytest.raises(InvariantViolation):
            TransitionKernel(name="bad", space="X", labels=[(0,), (1,)], P=[[0.5, 0.4], [0.5, 0.5]],
                             stationary=[0.5, 0.5], reversible=False)

    def test_rejects_false_reversibility(self):
        cycle = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]
        with pytest.raises(InvariantViolation):
            TransitionKernel(name="cycle", space="X", labels=[(0,), (1,), (2,)], P=cycle,
                             stationary=[1 / 3] * 3, reversible=True)

    def test_restrict_drops_zero_mass_states(self, diagonal_joint):
        kernel = kernels.rg_kernel(diagonal_joint, 0.5, restrict_support=True).restrict()
        assert kernel.labels == [(0, 0), (1, 1)]
        assert np.allclose(kernel.P, np.eye(2))

    def test_encode_decode(self, example_joint):
        kernel = kernels.dg_kernel(example_joint)
        assert kernel.decode(kernel.encode((1, 0))) == (1, 0)
        assert kernel.encode((1, 0)) == 2


@seed(7)
@settings(max_examples=20, deadline=None)
@given(draw_seed=st.integers(0, 100_000), r=st.floats(0.05, 0.95))
def test_random_kernels_hold_invariants(draw_seed, r):
    # 모델 생성 시 행 합, 정상성, 가역성 검증이 실행된다
    joint = distributions.gen_dirichlet_joint(3, 3, seed=draw_seed)
    q1 = distributions.gen_independence_proposal(joint, Axis.Y)
    q2 = distributions.gen_independence_proposal(joint, Axis.X)
    pi = joint.p.ravel()
    for kernel in (
        kernels.dg_kernel(joint),
        kernels.rg_kernel(joint, r),
        kernels.dc_kernel(joint, q2),
        kernels.rc_kernel(joint, q2, r),
        kernels.dcmm_kernel(joint, q1, q2),
        kernels.rcmm_kernel(joint, q1, q2, r),
    ):
        assert np.allclose(pi @ kernel.P, pi, atol=1e-12)
        assert np.allclose(kernel.P.sum(axis=1), 1.0, atol=1e-12)

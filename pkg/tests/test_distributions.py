import json

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from app.core.dependencies import get_service_container
from app.core.exceptions import (
    AssumptionOneViolated,
    BadConcentration,
    BadInputFile,
    DimensionMismatch,
    IoError,
    NegativeEntry,
    SumNotOne,
    ZeroMarginalState,
)
from app.models.distribution import Axis

container = get_service_container()
distributions = container.distributions


class TestValidateJoint:
    def test_uniform_table_is_accepted(self):
        joint = distributions.validate_joint(np.full((2, 2), 0.25))
        assert (joint.nx, joint.ny) == (2, 2)
        assert np.allclose(joint.marginal_x, [0.5, 0.5])

    def test_single_x_state_is_rejected(self):
        with pytest.raises(AssumptionOneViolated):
            distributions.validate_joint([[0.5, 0.5]])

    def test_zero_row_with_two_positive_rows_is_accepted(self):
        table = [[0.2, 0.1, 0.1], [0.0, 0.0, 0.0], [0.3, 0.2, 0.1]]
        joint = distributions.validate_joint(table)
        assert not joint.is_strictly_positive
        assert not joint.has_positive_marginals

    def test_negative_entry(self):
        with pytest.raises(NegativeEntry):
            distributions.validate_joint([[0.6, -0.1], [0.25, 0.25]])

    def test_sum_far_from_one(self):
        with pytest.raises(SumNotOne):
            distributions.validate_joint([[0.3, 0.3], [0.3, 0.3]])

    def test_small_drift_is_renormalized(self):
        joint = distributions.validate_joint([[0.25 + 1e-10, 0.25], [0.25, 0.25]])
        assert joint.p.sum() == pytest.approx(1.0, abs=1e-15)

    def test_ragged_table(self):
        with pytest.raises(DimensionMismatch):
            distributions.validate_joint([[0.5, 0.25], [0.25]])

    def test_table_is_read_only(self):
        joint = distributions.validate_joint(np.full((2, 2), 0.25))
        with pytest.raises(ValueError):
            joint.p[0, 0] = 1.0

    def test_restricted_drops_zero_rows_and_columns(self):
        joint = distributions.validate_joint([[0.5, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.5]])
        sub, kept_x, kept_y = joint.restricted()
        assert kept_x.tolist() == [0, 2]
        assert kept_y.tolist() == [0, 2]
        assert np.allclose(sub.p, [[0.5, 0.0], [0.0, 0.5]])


class TestDirichlet:
    def test_five_by_five(self):
        joint = distributions.gen_dirichlet_joint(5, 5, concentration=1.0, seed=7)
        assert joint.p.shape == (5, 5)
        assert np.all(joint.p > 0)
        assert joint.p.sum() == pytest.approx(1.0, abs=1e-12)

    def test_seeded_determinism(self):
        first = distributions.gen_dirichlet_joint(5, 5, concentration=1.0, seed=7)
        second = distributions.gen_dirichlet_joint(5, 5, concentration=1.0, seed=7)
        assert np.array_equal(first.p, second.p)

    def test_matches_gamma_normalization(self):
        alpha = np.array([0.7, 1.3, 2.0, 0.9])
        joint = distributions.gen_dirichlet_joint(2, 2, concentration=alpha, seed=3)
        gammas = np.random.default_rng(3).standard_gamma(alpha)
        assert np.allclose(joint.p.ravel(), gammas / gammas.sum(), rtol=1e-12, atol=0)

    def test_random_concentration_is_seeded(self):
        first = distributions.gen_dirichlet_joint(3, 4, seed=5)
        second = distributions.gen_dirichlet_joint(3, 4, seed=5)
        other = distributions.gen_dirichlet_joint(3, 4, seed=6)
        assert np.array_equal(first.p, second.p)
        assert not np.array_equal(first.p, other.p)

    @pytest.mark.parametrize("concentration", [0.0, -1.0, [1.0, 2.0]])
    def test_bad_concentration(self, concentration):
        with pytest.raises(BadConcentration):
            distributions.gen_dirichlet_joint(2, 2, concentration=concentration, seed=0)

    def test_too_few_states(self):
        with pytest.raises(AssumptionOneViolated):
            distributions.gen_dirichlet_joint(1, 2)

    def test_corpus_uses_consecutive_seeds(self):
        corpus = distributions.gen_dirichlet_corpus(3, 2, 3, seed=10)
        assert np.array_equal(corpus[2].p, distributions.gen_dirichlet_joint(2, 3, seed=12).p)

    @seed(20240611)
    @settings(max_examples=30, deadline=None)
    @given(nx=st.integers(2, 6), ny=st.integers(2, 6), draw_seed=st.integers(0, 10_000))
    def test_random_instances_are_valid(self, nx, ny, draw_seed):
        joint = distributions.gen_dirichlet_joint(nx, ny, seed=draw_seed)
        assert joint.is_strictly_positive
        assert abs(joint.p.sum() - 1.0) < 1e-12


class TestProposals:
    def test_independence_proposal_is_marginal(self, example_joint):
        proposal = distributions.gen_independence_proposal(example_joint, Axis.X)
        assert proposal.q.shape == (2, 2, 2)
        assert np.allclose(proposal.q, 0.5)

    def test_independence_proposal_uniform_y(self, uniform_joint):
        proposal = distributions.gen_independence_proposal(uniform_joint, Axis.Y)
        assert np.allclose(proposal.q, 0.5)

    def test_zero_marginal_state(self):
        joint = distributions.validate_joint([[0.2, 0.1, 0.1], [0.0, 0.0, 0.0], [0.3, 0.2, 0.1]])
        with pytest.raises(ZeroMarginalState):
            distributions.gen_independence_proposal(joint, Axis.X)

    def test_exact_proposal_is_conditional(self, example_joint):
        proposal = distributions.gen_exact_proposal(example_joint, Axis.Y)
        assert np.allclose(proposal.q[0, 0], [0.8, 0.2])
        assert np.allclose(proposal.q[1, 1], [0.2, 0.8])

    def test_swap_proposal_never_stays(self):
        proposal = distributions.gen_swap_proposal(3, 2, Axis.X)
        for x in range(3):
            for y in range(2):
                assert proposal.q[x, y, x] == 0.0
                assert proposal.q[x, y].sum() == 1.0


class TestJsonFiles:
    def test_joint_file_shape(self, tmp_path, example_joint):
        path = distributions.save_joint(example_joint, tmp_path / "joint.json")
        payload = json.loads(path.read_text())
        assert (payload["nx"], payload["ny"]) == (2, 2)
        assert payload["p"] == pytest.approx([0.4, 0.1, 0.1, 0.4], abs=1e-15)
        assert np.array_equal(distributions.load_joint(path).p, example_joint.p)

    def test_proposal_file(self, tmp_path, example_joint):
        proposal = distributions.gen_independence_proposal(example_joint, Axis.X)
        path = distributions.save_proposal(proposal, tmp_path / "q2.json")
        loaded = distributions.load_proposal(path)
        assert loaded.axis == Axis.X
        assert np.array_equal(loaded.q, proposal.q)

    def test_corrupted_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(BadInputFile):
            distributions.load_joint(path)

    def test_missing_keys(self):
        with pytest.raises(BadInputFile):
            distributions.joint_from_json({"nx": 2, "p": [0.25] * 4})

    def test_wrong_length(self):
        with pytest.raises(BadInputFile):
            distributions.joint_from_json({"nx": 2, "ny": 2, "p": [0.5, 0.5]})

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoError):
            distributions.load_joint(tmp_path / "absent.json")


import numpy as np
import pytest
from numpy.testing import assert_allclose

from qglue.core.builders import bell, ghz, max_entangled_pair, random_state, zero_state
from qglue.core.entangling_gates import bell_gate, builtin
from qglue.core.exceptions import ArgumentError, DimensionError, ZeroProbabilityBranchError
from qglue.core.gluing import (
    GlueOutcome,
    GlueVariant,
    enumerate_branches,
    glue,
    glue_layout,
    glue_star,
    glue_star_star,
    run_glue,
)
from qglue.core.state_core import (
    basis_state,
    coefficient_states,
    fidelity,
    measure_computational,
)


class TestGlueLayout:
    def test_layout(self):
        # Φ 三体在 x=1 处，Ψ 两体在 y=0 处
        assert glue_layout(3, 1, 2, 0) == [0, 2, 1, 3, 4]

    def test_out_of_range(self):
        with pytest.raises(ArgumentError):
            glue_layout(2, 2, 2, 0)
        with pytest.raises(ArgumentError):
            glue_layout(2, 0, 2, -1)


class TestGlue:
    def test_party_counts(self):
        v1 = builtin("V1")
        assert glue(ghz(3), 2, ghz(3), 0, v1).num_parties == 6
        assert glue_star(ghz(3), 2, ghz(3), 0, v1, outcome=0).state.num_parties == 5
        assert glue_star_star(ghz(3), 2, ghz(3), 0, v1, (0, 0)).state.num_parties == 4

    def test_gate_acts_on_glued_sites(self):
        # |0⟩⋄|0⟩ 经 V1 得到 φ⁺
        result = glue(basis_state(2, [0]), 0, basis_state(2, [0]), 0, builtin("V1"))
        assert fidelity(result, bell("phi+")) == pytest.approx(1)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            glue(ghz(3), 0, max_entangled_pair(3), 0, builtin("V1"))
        with pytest.raises(DimensionError):
            glue(ghz(3), 0, ghz(3), 0, bell_gate(3))

    def test_qutrit_glue_is_normalized(self):
        result = glue(max_entangled_pair(3), 1, max_entangled_pair(3), 0, bell_gate(3))
        assert result.num_parties == 4
        assert result.is_normalized()


class TestGlueStar:
    def test_forced_equals_measure_after_glue(self, rng):
        gate = builtin("V2")
        phi = random_state(2, 3, seed=int(rng.integers(1 << 30)))
        psi = random_state(2, 2, seed=int(rng.integers(1 << 30)))
        for outcome in range(2):
            star = glue_star(phi, 1, psi, 1, gate, outcome=outcome)
            direct = measure_computational(glue(phi, 1, psi, 1, gate), 2, outcome)
            assert_allclose(star.state.amplitudes, direct.post_state.amplitudes, atol=1e-14)
            assert star.probability == pytest.approx(direct.probability)
            assert star.measured == (("x", outcome),)

    def test_sampling_reproducible(self):
        gate = builtin("V1")
        a = glue_star(ghz(3), 0, ghz(3), 0, gate, seed=7)
        b = glue_star(ghz(3), 0, ghz(3), 0, gate, seed=7)
        assert a.outcomes == b.outcomes
        assert_allclose(a.state.amplitudes, b.state.amplitudes)

    def test_zero_probability_branch(self):
        with pytest.raises(ZeroProbabilityBranchError):
            glue_star(zero_state(2), 1, zero_state(2), 0, builtin("V3"), outcome=1)


class TestGlueStarStar:
    @staticmethod
    def branch_table(phi, x, psi, y):
        """两个测量结果对应的未归一化剩余态"""
        p = coefficient_states(phi, x)
        q = coefficient_states(psi, y)
        s = 2 ** -0.5
        return {
            (0, 0): s * (np.kron(p[0], q[0]) + np.kron(p[1], q[1])),
            (0, 1): s * (np.kron(p[0], q[1]) + np.kron(p[1], q[0])),
            (1, 0): s * (np.kron(p[0], q[1]) - np.kron(p[1], q[0])),
            (1, 1): s * (np.kron(p[0], q[0]) - np.kron(p[1], q[1])),
        }

    @staticmethod
    def compact_formula(phi, x, psi, y, a, b):
        p = coefficient_states(phi, x)
        q = coefficient_states(psi, y)
        return 2 ** -0.5 * sum((-1) ** (a * j) * np.kron(p[j], q[(j + a + b) % 2]) for j in range(2))

    def test_branch_table(self, rng):
        v1 = builtin("V1")
        for _ in range(20):
            m, n = rng.integers(2, 4, size=2)
            phi = random_state(2, int(m), seed=int(rng.integers(1 << 30)))
            psi = random_state(2, int(n), seed=int(rng.integers(1 << 30)))
            x, y = int(rng.integers(m)), int(rng.integers(n))
            table = self.branch_table(phi, x, psi, y)
            for (a, b), expected in table.items():
                result = glue_star_star(phi, x, psi, y, v1, (a, b))
                assert_allclose(
                    np.sqrt(result.probability) * result.state.amplitudes, expected, atol=1e-12
                )
                assert_allclose(self.compact_formula(phi, x, psi, y, a, b), expected, atol=1e-12)

    def test_measured_labels(self):
        result = glue_star_star(ghz(3), 2, ghz(3), 0, builtin("V1"), (1, 0))
        assert result.measured == (("x", 1), ("y", 0))
        assert result.variant is GlueVariant.STAR_STAR

    def test_requires_leftover_parties(self):
        with pytest.raises(ArgumentError):
            glue_star_star(basis_state(2, [0]), 0, basis_state(2, [1]), 0, builtin("V1"))

    def test_outcome_count(self):
        with pytest.raises(ArgumentError):
            glue_star_star(ghz(3), 0, ghz(3), 0, builtin("V1"), (0,))

    def test_seed_sequence_accepted(self):
        seed = np.random.SeedSequence(3)
        result = glue_star_star(ghz(3), 0, ghz(3), 0, builtin("V1"), seed=seed)
        assert result.state.num_parties == 4


class TestBranches:
    def test_enumerate_star_star_probabilities(self):
        branches = enumerate_branches(ghz(3), 2, ghz(4), 0, builtin("V1"), GlueVariant.STAR_STAR)
        assert [b.outcomes for b in branches] == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert sum(b.probability for b in branches) == pytest.approx(1)

    def test_enumerate_skips_zero_branches(self):
        branches = enumerate_branches(
            zero_state(2), 1, zero_state(2), 0, builtin("V3"), GlueVariant.STAR
        )
        assert [b.outcomes for b in branches] == [(0,)]
        assert branches[0].probability == pytest.approx(1)

    def test_enumerate_none(self):
        (branch,) = enumerate_branches(bell(), 0, bell(), 1, builtin("V1"), "none")
        assert branch.probability == 1.0
        assert branch.variant is GlueVariant.NONE


class TestRunGlue:
    def test_dispatch(self):
        v1 = builtin("V1")
        assert run_glue(ghz(3), 2, ghz(3), 0, v1, "none").state.num_parties == 6
        assert run_glue(ghz(3), 2, ghz(3), 0, v1, GlueVariant.STAR, [1]).outcomes == (1,)
        assert run_glue(ghz(3), 2, ghz(3), 0, v1, "starstar", [0, 1]).outcomes == (0, 1)

    def test_outcome_length(self):
        with pytest.raises(ArgumentError):
            run_glue(ghz(3), 2, ghz(3), 0, builtin("V1"), "star", [0, 1])

    def test_unknown_variant(self):
        with pytest.raises(ArgumentError):
            run_glue(ghz(3), 2, ghz(3), 0, builtin("V1"), "triple")


class TestGlueOutcome:
    def test_probability_range(self):
        with pytest.raises(ArgumentError):
            GlueOutcome(state=bell(), probability=1.5)

    def test_at_most_two_measurements(self):
        with pytest.raises(ArgumentError):
            GlueOutcome(state=bell(), measured=(("x", 0), ("y", 0), ("z", 0)))

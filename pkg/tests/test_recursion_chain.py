import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from qglue.core.analysis import equal_up_to_phase
from qglue.core.builders import ghz, max_entangled_pair, parity_state, random_state
from qglue.core.entangling_gates import TwoQuditGate, bell_gate, builtin
from qglue.core.exceptions import (
    ArgumentError,
    DegenerateInputError,
    DimensionError,
    ZeroProbabilityBranchError,
)
from qglue.core.recursion_chain import (
    ChainPolicy,
    RecursionMatrix,
    assemble,
    chain_via_gluing,
    chain_via_recursion,
    coefficients_of,
    compose,
    expand,
    power,
    recursion_from_gate,
    run_chain,
)
from qglue.core.state_core import basis_state

S = 2 ** -0.5


def parity_vector(n, parity):
    """n 比特中给定奇偶性的全部基态之和（未归一化）"""
    weights = np.array([bin(i).count("1") % 2 for i in range(2 ** n)])
    return (weights == parity).astype(float)


def random_recursion(rng, d, p):
    entries = rng.normal(size=(d, d, d ** p)) + 1j * rng.normal(size=(d, d, d ** p))
    return RecursionMatrix(d, p, entries)


class TestRecursionFromGate:
    def test_g1(self):
        g = recursion_from_gate(builtin("V1"))
        assert_allclose(g.entry(0, 0), [S, 0])
        assert_allclose(g.entry(0, 1), [0, S])
        assert_allclose(g.entry(1, 0), [0, S])
        assert_allclose(g.entry(1, 1), [S, 0])

    def test_g2(self):
        g = recursion_from_gate(builtin("V2"))
        assert_allclose(g.entries, S * np.array([[[1, 0], [0, 1]], [[0, -1], [1, 0]]]))

    def test_g3_diagonal(self):
        g = recursion_from_gate(builtin("V3"))
        assert_allclose(g.entries, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]])

    def test_g4(self):
        g = recursion_from_gate(builtin("V4"))
        assert_allclose(g.entries, [[[S, 0], [0, 1]], [[0, 0], [S, 0]]])

    def test_outcome_range(self):
        with pytest.raises(ArgumentError):
            recursion_from_gate(builtin("V1"), outcome=2)

    def test_entries_shape_checked(self):
        with pytest.raises(DimensionError):
            RecursionMatrix(2, 1, np.zeros((2, 2, 4)))


class TestCompose:
    def test_g1_squared(self):
        g = recursion_from_gate(builtin("V1"))
        g2 = g @ g
        assert g2.block_parties == 2
        assert_allclose(g2.entry(0, 0), [0.5, 0, 0, 0.5])
        assert_allclose(g2.entry(0, 1), [0, 0.5, 0.5, 0])

    def test_g2_g1_gives_bell_blocks(self):
        g = compose(recursion_from_gate(builtin("V2")), recursion_from_gate(builtin("V1")))
        assert_allclose(g.entry(0, 0), [0.5, 0, 0, 0.5])
        assert_allclose(g.entry(0, 1), [0, 0.5, 0.5, 0])
        assert_allclose(g.entry(1, 0), [0, 0.5, -0.5, 0])
        assert_allclose(g.entry(1, 1), [0.5, 0, 0, -0.5])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            compose(recursion_from_gate(builtin("V1")), recursion_from_gate(bell_gate(3)))

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2 ** 32 - 1), d=st.sampled_from([2, 3]), p=st.integers(1, 2))
    def test_associative(self, seed, d, p):
        rng = np.random.default_rng(seed)
        a, b, c = (random_recursion(rng, d, p) for _ in range(3))
        assert_allclose(
            compose(compose(a, b), c).entries, compose(a, compose(b, c)).entries, atol=1e-10
        )


class TestPower:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_g1_closed_form(self, n):
        g = power(recursion_from_gate(builtin("V1")), n)
        even = parity_vector(n, 0) / np.sqrt(2 ** (n - 1))
        odd = parity_vector(n, 1) / np.sqrt(2 ** (n - 1))
        assert_allclose(g.entry(0, 0), S * even, atol=1e-12)
        assert_allclose(g.entry(0, 1), S * odd, atol=1e-12)
        assert_allclose(g.entry(1, 0), S * odd, atol=1e-12)
        assert_allclose(g.entry(1, 1), S * even, atol=1e-12)

    @pytest.mark.parametrize("n", [1, 4, 8])
    def test_g3_stays_diagonal(self, n):
        g = power(recursion_from_gate(builtin("V3")), n)
        assert_allclose(g.entry(0, 1), 0)
        assert_allclose(g.entry(1, 0), 0)
        assert g.entry(0, 0)[0] == pytest.approx(1)
        assert g.entry(1, 1)[-1] == pytest.approx(1)

    def test_rejects_zero(self):
        with pytest.raises(ArgumentError):
            power(recursion_from_gate(builtin("V1")), 0)


class TestExpandAssemble:
    def test_expand_g3(self):
        coeffs = expand([[S, 0], [0, S]], recursion_from_gate(builtin("V3")))
        assert_allclose(coeffs[0], [S, 0, 0, 0])
        assert_allclose(coeffs[1], [0, 0, 0, S])
        assert equal_up_to_phase(assemble(coeffs), ghz(3))

    def test_assemble_pair(self):
        state = assemble([[S, 0], [0, S]])
        assert_allclose(state.amplitudes, max_entangled_pair(2).amplitudes)

    def test_assemble_zero(self):
        with pytest.raises(DegenerateInputError):
            assemble([[0, 0], [0, 0]])

    def test_expand_shape_errors(self):
        g = recursion_from_gate(builtin("V1"))
        with pytest.raises(DimensionError):
            expand([[1, 0]], g)
        with pytest.raises(DimensionError):
            expand([[1, 0], [1, 0, 0]], g)

    def test_coefficients_round_trip(self):
        state = random_state(2, 3, seed=5)
        assert_allclose(assemble(coefficients_of(state)).amplitudes, state.amplitudes)


class TestChain:
    @pytest.mark.parametrize("gate_name", ["V1", "V2", "V3", "V4"])
    @pytest.mark.parametrize("steps", range(1, 6))
    def test_recursion_matches_gluing(self, gate_name, steps):
        gates = [builtin(gate_name)] * steps
        pair = max_entangled_pair(2)
        by_recursion = chain_via_recursion(pair, gates)
        by_gluing = chain_via_gluing(pair, gates, outcomes=[0] * steps)
        assert equal_up_to_phase(by_recursion.state, by_gluing.state)
        assert by_recursion.probability == pytest.approx(by_gluing.probability)

    def test_mixed_outcomes_match(self, rng):
        initial = random_state(2, 3, seed=int(rng.integers(1 << 30)))
        gates = [builtin("V4"), builtin("V2"), builtin("V1")]
        outcomes = [1, 0, 1]
        by_recursion = chain_via_recursion(initial, gates, outcomes)
        by_gluing = chain_via_gluing(initial, gates, outcomes)
        assert equal_up_to_phase(by_recursion.state, by_gluing.state)
        assert by_recursion.probability == pytest.approx(by_gluing.probability)

    def test_qutrit_chain(self):
        gates = [bell_gate(3)] * 2
        pair = max_entangled_pair(3)
        a = chain_via_recursion(pair, gates)
        b = chain_via_gluing(pair, gates, outcomes=[0, 0])
        assert a.state.num_parties == 4
        assert equal_up_to_phase(a.state, b.state)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_v3_chain_is_ghz(self, n):
        result = run_chain([builtin("V3")] * n)
        assert equal_up_to_phase(result.state, ghz(n + 2))

    @pytest.mark.parametrize("n", range(1, 7))
    def test_v1_chain_is_even_parity(self, n):
        result = run_chain([builtin("V1")] * n)
        assert equal_up_to_phase(result.state, parity_state(n + 2, "even"))

    def test_zero_probability(self):
        flip = TwoQuditGate(2, np.kron([[0, 1], [1, 0]], np.eye(2)), name="flip")
        with pytest.raises(ZeroProbabilityBranchError):
            chain_via_recursion(basis_state(2, [0, 0]), [flip])

    def test_sample_policy_reproducible(self):
        gates = [builtin("V4")] * 4
        a = run_chain(gates, ChainPolicy.SAMPLE, seed=3)
        b = run_chain(gates, "sample", seed=3)
        assert a.outcomes == b.outcomes
        assert_allclose(a.state.amplitudes, b.state.amplitudes)
        assert 0 < a.probability <= 1

    def test_empty_chain(self):
        with pytest.raises(ArgumentError):
            run_chain([])

    def test_unknown_policy(self):
        with pytest.raises(ArgumentError):
            run_chain([builtin("V1")], "always-one")

    def test_outcome_count(self):
        with pytest.raises(ArgumentError):
            chain_via_recursion(max_entangled_pair(2), [builtin("V1")], [0, 0])

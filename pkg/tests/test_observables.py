import math
import sys
sys.path.append('src')

import numpy as np
import pytest

import observables as obs
from gates import apply_pauli_rotation
from statevector import StateVector, basis_state, bitstring_index, index_bitstring, probabilities, random_state


def superposition(*kets):
    n = len(kets[0])
    amps = np.zeros(2 ** n, dtype=complex)
    for ket in kets:
        amps[bitstring_index(ket)] = 1
    return StateVector(n, amps / np.linalg.norm(amps))


def test_single_kink_profile():
    profile = obs.kink_profile(basis_state("10000000"))
    np.testing.assert_array_equal(profile, [1, 0, 0, 0, 0, 0, 0])
    assert obs.kink_density(basis_state("10000000"), 0) == 1
    assert obs.total_kinks(basis_state("10000000")) == 1


def test_four_meson_kinks():
    state = basis_state("00111100")
    assert [j for j in range(7) if obs.kink_density(state, j) == 1] == [1, 5]
    assert obs.total_kinks(state) == 2


def test_aligned_superposition_has_no_kinks():
    assert obs.kink_density(superposition("00", "11"), 0) == pytest.approx(0)


def test_kink_density_bond_range():
    with pytest.raises(ValueError):
        obs.kink_density(basis_state("000"), 2)


def test_totals():
    assert obs.total_spin_flips(basis_state("00111100")) == 4
    assert obs.total_kinks(basis_state("00111100")) == 2
    assert obs.total_spin_flips(basis_state("00100100")) == 2
    assert obs.total_kinks(basis_state("00100100")) == 4


def test_spin_flip_density():
    state = basis_state("00100100")
    assert obs.spin_flip_density(state, 2) == 1
    assert obs.spin_flip_density(state, 0) == 0
    rotated = apply_pauli_rotation(basis_state("0"), 0, "x", math.pi / 10)
    assert obs.spin_flip_density(rotated, 0) == pytest.approx(math.sin(math.pi / 10) ** 2)
    with pytest.raises(ValueError):
        obs.spin_flip_density(state, 8)


def test_meson_numbers_of_prepared_states():
    assert obs.meson_histogram(basis_state("00111100")).nonzero() == {4: 1}
    assert obs.meson_number(basis_state("00100100"), 1) == 2
    assert obs.meson_number(basis_state("00010000"), 1) == 1
    with pytest.raises(ValueError):
        obs.meson_number(basis_state("0000"), 5)


def test_meson_histogram_edge_runs():
    assert obs.meson_histogram(basis_state("11110000")).nonzero() == {4: 1}
    assert obs.meson_histogram(basis_state("10101010")).nonzero() == {1: 4}
    histogram = obs.meson_histogram(basis_state("10101010"))
    assert sorted(histogram.populations) == list(range(1, 9))


def test_meson_histogram_uniform_two_qubits():
    uniform = StateVector(2, np.full(4, 0.5))
    histogram = obs.meson_histogram(uniform)
    # "01" and "10" hold one 1-meson each, "11" one 2-meson
    assert histogram.populations[1] == pytest.approx(0.5)
    assert histogram.populations[2] == pytest.approx(0.25)


def test_count_mesons_bits():
    assert obs.count_mesons_bits("00111100") == {4: 1}
    assert obs.count_mesons_bits("11011011") == {2: 3}
    assert obs.count_mesons_bits("00000000") == {}
    with pytest.raises(ValueError):
        obs.count_mesons_bits("0102")


def test_projector_counting_matches_run_lengths_on_every_basis_state():
    for index in range(256):
        bits = index_bitstring(index, 8)
        state = basis_state(bits)
        expected = obs.count_mesons_bits(bits)
        assert obs.meson_histogram(state).nonzero() == expected
        for length in range(1, 9):
            assert obs.meson_number(state, length) == expected.get(length, 0)


def test_weighted_lengths_equal_spin_flips():
    rng = np.random.default_rng(17)
    for _ in range(200):
        state = random_state(8, rng)
        histogram = obs.meson_histogram(state)
        assert abs(histogram.weighted_length() - obs.total_spin_flips(state)) < 1e-10


def test_kinks_are_twice_mesons_with_empty_edges():
    for index in range(256):
        bits = index_bitstring(index, 8)
        if bits[0] == "0" and bits[-1] == "0":
            state = basis_state(bits)
            assert obs.total_kinks(state) == 2 * sum(obs.meson_histogram(state).populations.values())


def test_expectations_stay_in_unit_interval():
    rng = np.random.default_rng(23)
    for _ in range(20):
        state = random_state(6, rng)
        values = list(obs.kink_profile(state)) + [obs.spin_flip_density(state, j) for j in range(6)]
        assert all(-1e-12 <= v <= 1 + 1e-12 for v in values)
        assert obs.kink_profile(state).sum() == pytest.approx(obs.total_kinks(state), abs=1e-10)


def test_sampling_basis_state():
    assert obs.sample_bitstrings(basis_state("0110"), 500, seed=1) == {"0110": 500}


def test_sampling_is_deterministic_per_seed():
    state = random_state(4, np.random.default_rng(0))
    assert obs.sample_bitstrings(state, 1000, seed=7) == obs.sample_bitstrings(state, 1000, seed=7)
    assert obs.sample_bitstrings(state, 1000, seed=[7, 3]) == obs.sample_bitstrings(state, 1000, seed=[7, 3])


def test_sampling_equal_superposition_is_binomial():
    shots = 100_000
    counts = obs.sample_bitstrings(StateVector(1, np.array([1, 1]) / math.sqrt(2)), shots, seed=12)
    sigma = math.sqrt(shots * 0.25)
    assert abs(counts["0"] - shots / 2) < 5 * sigma
    assert counts["0"] + counts["1"] == shots


def test_shot_estimate_of_meson_number_converges():
    shots = 100_000
    state = random_state(4, np.random.default_rng(31))
    exact = obs.meson_number(state, 1)
    estimate = obs.meson_number(obs.empirical_probabilities(obs.sample_bitstrings(state, shots, seed=5), 4), 1)
    second_moment = probabilities(state) @ obs.meson_operator_diagonal(4, 1) ** 2
    variance = second_moment - exact ** 2
    assert abs(estimate - exact) < 3 * math.sqrt(variance / shots) + 1e-12


def test_sampling_rejects_zero_shots():
    with pytest.raises(ValueError):
        obs.sample_bitstrings(basis_state("0"), 0)


def test_empirical_probabilities_validation():
    probs = obs.empirical_probabilities({"01": 3, "10": 1}, 2)
    np.testing.assert_allclose(probs, [0, 0.75, 0.25, 0])
    with pytest.raises(ValueError):
        obs.empirical_probabilities({"011": 3}, 2)


def test_spread_metric_examples():
    assert obs.spread_metric([0, 0, 1, 0], source=2) == 0
    assert obs.spread_metric([0, 0.5, 0, 0.5, 0], source=2) == pytest.approx(1)
    uniform = np.full(7, 1 / 7)
    expected = math.sqrt(sum(d * d for d in range(7)) / 7)
    assert obs.spread_metric(uniform, source=0) == pytest.approx(expected)
    # default source is the profile centre
    assert obs.spread_metric([0, 0.5, 0, 0.5, 0]) == pytest.approx(1)
    with pytest.raises(ValueError):
        obs.spread_metric([0, 0, 0])


def test_index_domain():
    assert obs.index_domain("kink_density", 8) == list(range(7))
    assert obs.index_domain("meson_number", 3) == [1, 2, 3]
    assert obs.index_domain("total_kinks", 8) is None
    with pytest.raises(ValueError):
        obs.index_domain("entropy", 8)

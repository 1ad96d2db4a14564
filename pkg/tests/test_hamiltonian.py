import math
import sys
sys.path.append('src')

import numpy as np
import pytest

from gates import FloquetParams, dense_unitary
from hamiltonian import (
    build_hamiltonian,
    cycle_hamiltonian,
    energy,
    exact_evolve,
    exact_trajectory,
    fine_step_deviation,
    trotter_error,
    trotter_scan,
)
from statevector import basis_state, bit_table, bitstring_index, random_state

BASE = FloquetParams(J=math.pi / 4, mu=math.pi / 10, h=math.pi / 8, n=4)


def diagonal_oracle(bits, J, h):
    """Independent term-by-term sum of the literal Hamiltonian's diagonal for one ket."""
    spins = [1 if b == "1" else -1 for b in bits]
    zz = sum(spins[j] * spins[j + 1] for j in range(len(spins) - 1))
    return -J * zz + h * sum(spins)


def test_two_site_ising_only():
    J = 0.6
    H = build_hamiltonian(FloquetParams(J=J, mu=0, h=0, n=2))
    np.testing.assert_allclose(H.matrix, np.diag([-J, J, J, -J]))


def test_two_site_longitudinal_only():
    # "1" is spin up
    H = build_hamiltonian(FloquetParams(J=0, mu=0, h=1, n=2))
    np.testing.assert_allclose(H.matrix, np.diag([-2, 0, 0, 2]))


def test_literal_form_is_resonant_at_h_equal_j():
    J = h = math.pi / 4
    H = build_hamiltonian(FloquetParams(J=J, mu=0, h=h, n=8))
    two_singles, one_four = bitstring_index("00100100"), bitstring_index("00111100")
    assert H.matrix[two_singles, two_singles].real == pytest.approx(H.matrix[one_four, one_four].real, abs=1e-12)
    cycle = cycle_hamiltonian(FloquetParams(J=J, mu=0, h=h, n=8))
    assert abs(cycle.matrix[two_singles, two_singles] - cycle.matrix[one_four, one_four]) == pytest.approx(8 * J)


def test_reference_drive_diagonal_element():
    J, mu, h = math.pi / 4, math.pi / 10, math.pi / 4
    H = build_hamiltonian(FloquetParams(J=J, mu=mu, h=h, n=8))
    index = bitstring_index("00111100")
    assert H.matrix[index, index].real == pytest.approx(diagonal_oracle("00111100", J, h), abs=1e-12)
    # 5 aligned bonds, 2 kinks, zero magnetization
    assert diagonal_oracle("00111100", J, h) == pytest.approx(-3 * J)


def test_transverse_term_couples_single_flips():
    mu = 0.3
    H = build_hamiltonian(FloquetParams(J=0, mu=mu, h=0, n=3))
    assert H.matrix[bitstring_index("000"), bitstring_index("010")] == pytest.approx(mu)
    assert H.matrix[bitstring_index("000"), bitstring_index("011")] == 0


def test_hermitian_and_eigen_residual():
    rng = np.random.default_rng(4)
    H = build_hamiltonian(FloquetParams(*rng.uniform(-1, 1, size=3), n=6))
    assert H.hermiticity_residual() < 1e-12
    energies, vectors = H.eigensystem
    assert np.linalg.norm(H.matrix @ vectors - vectors * energies, ord=2) < 1e-10


def test_cycle_hamiltonian_flips_ising_sign_only():
    p = FloquetParams(J=0.4, mu=0.2, h=0.1, n=3)
    literal, cycle = build_hamiltonian(p).matrix, cycle_hamiltonian(p).matrix
    off_diagonal = ~np.eye(8, dtype=bool)
    np.testing.assert_allclose(literal[off_diagonal], cycle[off_diagonal])
    assert not np.allclose(np.diag(literal), np.diag(cycle))


def test_size_limit():
    with pytest.raises(ValueError):
        build_hamiltonian(FloquetParams(J=0.1, mu=0.1, h=0.1, n=13))
    with pytest.raises(ValueError):
        trotter_error(FloquetParams(J=0.1, mu=0.1, h=0.1, n=5), 0.1, limit=4)


def test_exact_evolve_at_zero_is_identity():
    rng = np.random.default_rng(6)
    psi = random_state(4, rng)
    out = exact_evolve(psi, build_hamiltonian(BASE), 0)
    np.testing.assert_allclose(out.amplitudes, psi.amplitudes, atol=1e-12)


def test_exact_evolve_keeps_norm_and_energy():
    H = build_hamiltonian(FloquetParams(J=math.pi / 4, mu=math.pi / 10, h=math.pi / 4, n=8))
    psi = basis_state("00100100")
    e0 = energy(psi, H)
    out = exact_evolve(psi, H, 15)
    assert abs(out.norm_squared() - 1) < 1e-10
    assert energy(out, H) == pytest.approx(e0, abs=1e-10)


def test_single_qubit_transverse_closed_form():
    # one spin: H = mu sx, no bonds, built directly
    mu, t = 0.7, 1.3
    H = build_hamiltonian(FloquetParams(J=0, mu=mu, h=0, n=2))
    out = exact_evolve(basis_state("00"), H, t)
    single = np.array([math.cos(mu * t), -1j * math.sin(mu * t)])
    np.testing.assert_allclose(out.amplitudes, np.kron(single, single), atol=1e-12)


def test_exact_evolve_dimension_mismatch():
    with pytest.raises(ValueError):
        exact_evolve(basis_state("000"), build_hamiltonian(BASE), 1)


def test_exact_trajectory_samples_integer_times():
    H = build_hamiltonian(BASE)
    psi = basis_state("0110")
    records = exact_trajectory(psi, H, range(4), lambda i, s: s)
    assert len(records) == 4
    np.testing.assert_allclose(records[3].amplitudes, exact_evolve(psi, H, 3).amplitudes)


def test_trotter_error_zero_step():
    assert trotter_error(BASE, 0) == 0


def test_trotter_error_vanishes_for_commuting_terms():
    p = FloquetParams(J=math.pi / 4, mu=0, h=math.pi / 8, n=4)
    for dt in (0.1, 1.0, 3.0):
        assert trotter_error(p, dt) < 1e-12


def test_trotter_error_positive_for_generic_parameters():
    assert trotter_error(BASE, 0.1) > 1e-6


def test_trotter_error_is_quadratic_in_step():
    rows = trotter_scan(BASE, [0.1, 0.05, 0.025])
    ratios = [ratio for _, _, ratio in rows[1:]]
    assert rows[0][2] is None
    for ratio in ratios:
        assert 0.15 <= ratio <= 0.35
        assert ratio == pytest.approx(0.25, abs=0.1)


def test_trotter_error_matches_dense_oracle_definition():
    dt = 0.05
    expected = np.linalg.norm(dense_unitary(BASE.scaled(dt)) - cycle_hamiltonian(BASE).propagator(dt), ord=2)
    assert trotter_error(BASE, dt) == pytest.approx(expected)


def test_fine_step_evolution_converges_to_exact():
    psi = basis_state("0100")
    deviations = [fine_step_deviation(BASE, psi, 2.0, steps) for steps in (20, 40, 80)]
    assert deviations[0] > deviations[1] > deviations[2]
    assert deviations[2] / deviations[0] < 0.35


def test_energy_of_basis_state_is_diagonal_entry():
    H = build_hamiltonian(BASE)
    assert energy(basis_state("0110"), H) == pytest.approx(diagonal_oracle("0110", BASE.J, BASE.h))


def test_bit_table_matches_ket_order():
    table = bit_table(3)
    assert "".join(map(str, table[bitstring_index("011")])) == "011"

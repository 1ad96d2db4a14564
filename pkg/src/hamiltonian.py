"""Time-independent mixed-field Ising chain and exact continuous-time evolution.

H = -J sum_j sz_j sz_{j+1} + mu sum_j sx_j + h sum_j sz_j   (open chain)

Ket "1" is sz = +1, as in the gate kernels. One Floquet cycle corresponds to
t = 1. This literal form is resonant at h = J: two 1-mesons merging into a
4-meson cost -4J + 4h. The cycle applies exp(-i J sz sz) per bond, so its
small-angle generator is the same operator with J -> -J;
``cycle_hamiltonian`` builds that one for Trotter checks.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Iterable

import numpy as np
import scipy.linalg as linalg

from gates import FloquetParams, PAULI_X, dense_unitary, embed, floquet_cycle
from statevector import NumericalToleranceError, StateVector, bit_table

logger = logging.getLogger(__name__)

HAMILTONIAN_LIMIT = 12
HERMITICITY_TOLERANCE = 1e-12
EIGEN_RESIDUAL_TOLERANCE = 1e-10


@dataclass(frozen=True)
class DenseHamiltonian:
    n: int
    matrix: np.ndarray
    params: tuple[float, float, float]  # (J, mu, h)

    @cached_property
    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues and eigenvectors, checked against the residual tolerance."""
        energies, vectors = linalg.eigh(self.matrix)
        residual = np.linalg.norm(self.matrix @ vectors - vectors * energies, ord=2)
        logger.debug("eigendecomposition of %dx%d Hamiltonian, residual %.2e", *self.matrix.shape, residual)
        if residual > EIGEN_RESIDUAL_TOLERANCE:
            raise NumericalToleranceError(f"eigensolver residual {residual:.3e} above {EIGEN_RESIDUAL_TOLERANCE:.0e}")
        return energies, vectors

    def hermiticity_residual(self) -> float:
        """Operator-norm distance from the conjugate transpose."""
        return float(np.linalg.norm(self.matrix - self.matrix.conj().T, ord=2))

    def propagator(self, t: float) -> np.ndarray:
        """exp(-iHt) as a dense matrix."""
        energies, vectors = self.eigensystem
        return (vectors * np.exp(-1j * energies * t)) @ vectors.conj().T


def build_hamiltonian(p: FloquetParams, limit: int = HAMILTONIAN_LIMIT) -> DenseHamiltonian:
    """Mixed-field Ising Hamiltonian -J sum zz + mu sum x + h sum z, term by term."""
    return _mixed_field_ising(-p.J, p.mu, p.h, p.n, limit, params=(p.J, p.mu, p.h))


def cycle_hamiltonian(p: FloquetParams, limit: int = HAMILTONIAN_LIMIT) -> DenseHamiltonian:
    """Generator whose first-order product formula is the Floquet cycle: +J sz sz + mu sx + h sz."""
    return _mixed_field_ising(p.J, p.mu, p.h, p.n, limit, params=(p.J, p.mu, p.h))


def _mixed_field_ising(zz: float, mu: float, h: float, n: int, limit: int, params) -> DenseHamiltonian:
    if n > limit:
        raise ValueError(f"dense Hamiltonian needs n <= {limit}, got n={n}")
    spins = 2 * bit_table(n) - 1  # sz eigenvalues per site
    diagonal = zz * (spins[:, :-1] * spins[:, 1:]).sum(axis=1) + h * spins.sum(axis=1)
    matrix = np.diag(diagonal.astype(np.complex128))
    for q in range(n):
        matrix += mu * embed(PAULI_X, q, n)
    return DenseHamiltonian(n, matrix, params)


def exact_evolve(state: StateVector, H: DenseHamiltonian, t: float) -> StateVector:
    """exp(-iHt)|state> via the eigenbasis."""
    if state.n != H.n:
        raise ValueError(f"dimension mismatch: state has {state.n} qubits, Hamiltonian has {H.n}")
    energies, vectors = H.eigensystem
    coefficients = vectors.conj().T @ state.amplitudes
    return StateVector(state.n, vectors @ (np.exp(-1j * energies * t) * coefficients))


def exact_trajectory(state: StateVector, H: DenseHamiltonian, times: Iterable[float], recorder: Callable[[int, StateVector], Any]) -> list:
    """Call ``recorder(i, psi(t_i))`` for every requested time, sharing one eigendecomposition."""
    return [recorder(i, exact_evolve(state, H, t)) for i, t in enumerate(times)]


def energy(state: StateVector, H: DenseHamiltonian) -> float:
    """<state|H|state>, rejecting a non-negligible imaginary part."""
    value = complex(np.vdot(state.amplitudes, H.matrix @ state.amplitudes))
    if abs(value.imag) > EIGEN_RESIDUAL_TOLERANCE:
        raise NumericalToleranceError(f"<H> has imaginary part {value.imag:.3e}")
    return value.real


def trotter_error(p: FloquetParams, dt: float, limit: int = HAMILTONIAN_LIMIT) -> float:
    """Operator-norm distance between one cycle at angles scaled by ``dt`` and exp(-i H_cycle dt)."""
    if p.n > limit:
        raise ValueError(f"Trotter error needs n <= {limit}, got n={p.n}")
    if dt == 0:
        return 0.0
    u_cycle = dense_unitary(p.scaled(dt), limit=limit)
    u_exact = cycle_hamiltonian(p, limit).propagator(dt)
    return float(np.linalg.norm(u_cycle - u_exact, ord=2))


def trotter_scan(p: FloquetParams, dts: Iterable[float]) -> list[tuple[float, float, float | None]]:
    """Rows of (dt, error, error / error of the previous dt)."""
    rows = []
    previous = None
    for dt in dts:
        error = trotter_error(p, dt)
        ratio = error / previous if previous else None
        rows.append((dt, error, ratio))
        previous = error
    return rows


def fine_step_deviation(p: FloquetParams, state: StateVector, t: float, steps: int) -> float:
    """Max amplitude gap between ``steps`` cycles at angles scaled by t/steps and exact evolution to t."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    small = p.scaled(t / steps)
    work = state.copy()
    for _ in range(steps):
        floquet_cycle(work, small)
    exact = exact_evolve(state, cycle_hamiltonian(p), t)
    return float(np.max(np.abs(work.amplitudes - exact.amplitudes)))

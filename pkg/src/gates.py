"""Floquet cycle kernels, the Ising-layer gate decomposition and a dense oracle.

One cycle is U = exp(-i h sum sz) exp(-i mu sum sx) exp(i J H_zz) with
H_zz = -sum_j sz_j sz_{j+1} on an open chain, i.e. every bond picks up
exp(-i J sz_j sz_{j+1}).

Ket "1" is spin up (sz = +1), so sigma+ sigma- = (1 + sz) / 2 reads 1 on a
flipped spin. The raw kernels use the register Pauli PAULI_Z = diag(1, -1)
over (|0>, |1>); the physical spin is SPIN_Z = -PAULI_Z. Only the
longitudinal field feels the difference, the ZZ phase is even in it.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable

import numpy as np
import scipy.linalg as linalg

from statevector import StateVector

logger = logging.getLogger(__name__)

DENSE_ORACLE_LIMIT = 10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SPIN_Z = -PAULI_Z


class LayerOrder(str, Enum):
    EQ1 = "EQ1"  # ZZ, then X, then Z
    FIG1B = "FIG1B"  # X, then Z, then ZZ


@dataclass(frozen=True)
class FloquetParams:
    J: float
    mu: float
    h: float
    n: int
    layer_order: LayerOrder = LayerOrder.EQ1

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2 so the chain has a bond, got {self.n}")
        for name in ("J", "mu", "h"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be a finite angle, got {getattr(self, name)}")
        # accept plain strings from configs
        object.__setattr__(self, "layer_order", LayerOrder(self.layer_order))

    def scaled(self, factor: float) -> "FloquetParams":
        """Same chain with every angle multiplied by ``factor``."""
        return FloquetParams(self.J * factor, self.mu * factor, self.h * factor, self.n, self.layer_order)


def _check_qubit(state: StateVector, qubit: int):
    if not 0 <= qubit < state.n:
        raise ValueError(f"qubit {qubit} out of range for n={state.n}")


def _slice(n: int, fixed: dict[int, int]) -> tuple:
    index: list[Any] = [slice(None)] * n
    for axis, value in fixed.items():
        index[axis] = value
    return tuple(index)


def apply_pauli_rotation(state: StateVector, qubit: int, axis: str, alpha: float) -> StateVector:
    """Apply exp(-i alpha sigma^axis) to ``qubit`` in place (register Paulis, no half-angle)."""
    _check_qubit(state, qubit)
    t = state.tensor()
    lo, hi = _slice(state.n, {qubit: 0}), _slice(state.n, {qubit: 1})
    if axis == "z":
        t[lo] *= np.exp(-1j * alpha)
        t[hi] *= np.exp(1j * alpha)
    elif axis == "x":
        c, s = math.cos(alpha), math.sin(alpha)
        a0 = t[lo].copy()
        a1 = t[hi].copy()
        t[lo] = c * a0 - 1j * s * a1
        t[hi] = c * a1 - 1j * s * a0
    else:
        raise ValueError(f"axis must be 'x' or 'z', got {axis!r}")
    return state


def apply_zz_phase(state: StateVector, bond: int, theta: float) -> StateVector:
    """Apply exp(-i theta sz_j sz_{j+1}) on bond ``j`` in place."""
    if not 0 <= bond < state.n - 1:
        raise ValueError(f"bond {bond} out of range for an open chain of {state.n} qubits")
    t = state.tensor()
    aligned, anti = np.exp(-1j * theta), np.exp(1j * theta)
    for a in (0, 1):
        for b in (0, 1):
            t[_slice(state.n, {bond: a, bond + 1: b})] *= aligned if a == b else anti
    return state


def apply_cphase(state: StateVector, control: int, target: int, phi: float) -> StateVector:
    """diag(1, 1, 1, e^{i phi}) on (control, target)."""
    _check_qubit(state, control)
    _check_qubit(state, target)
    if control == target:
        raise ValueError("controlled-phase needs two distinct qubits")
    state.tensor()[_slice(state.n, {control: 1, target: 1})] *= np.exp(1j * phi)
    return state


def ising_layer(state: StateVector, J: float) -> StateVector:
    """exp(-i J sz_j sz_{j+1}) on every bond."""
    for bond in range(state.n - 1):
        apply_zz_phase(state, bond, J)
    return state


def transverse_layer(state: StateVector, mu: float) -> StateVector:
    """exp(-i mu sx) on every qubit."""
    for qubit in range(state.n):
        apply_pauli_rotation(state, qubit, "x", mu)
    return state


def longitudinal_layer(state: StateVector, h: float) -> StateVector:
    """exp(-i h sz) on every qubit; a "1" picks up e^{-ih}."""
    for qubit in range(state.n):
        # sz = -PAULI_Z
        apply_pauli_rotation(state, qubit, "z", -h)
    return state


def _layers(p: FloquetParams) -> list[Callable[[StateVector], StateVector]]:
    zz = lambda s: ising_layer(s, p.J)
    x = lambda s: transverse_layer(s, p.mu)
    z = lambda s: longitudinal_layer(s, p.h)
    if p.layer_order is LayerOrder.FIG1B:
        return [x, z, zz]
    return [zz, x, z]


def floquet_cycle(state: StateVector, p: FloquetParams) -> StateVector:
    """One driving cycle, applied in place."""
    if state.n != p.n:
        raise ValueError(f"dimension mismatch: state has {state.n} qubits, params have n={p.n}")
    for layer in _layers(p):
        layer(state)
    return state


def snapshot(cycle: int, state: StateVector) -> StateVector:
    """Default recorder: a copy of the state."""
    return state.copy()


def evolve(state: StateVector, p: FloquetParams, cycles: int, recorder: Callable[[int, StateVector], Any] = snapshot) -> list:
    """Run ``cycles`` cycles on a copy of ``state``.

    ``recorder(cycle, state)`` is called at cycle 0 and after every cycle;
    its return values are collected in order (``cycles + 1`` entries).
    """
    if cycles < 0:
        raise ValueError(f"cycles must be >= 0, got {cycles}")
    work = state.copy()
    records = [recorder(0, work)]
    for t in range(1, cycles + 1):
        floquet_cycle(work, p)
        records.append(recorder(t, work))
        logger.debug("cycle %d/%d done", t, cycles)
    return records


@dataclass(frozen=True)
class Gate:
    kind: str  # "RZ" or "CPHASE"
    qubits: tuple[int, ...]
    angle: float


@dataclass(frozen=True)
class GateSequence:
    gates: tuple[Gate, ...]
    global_phase: complex = 1.0 + 0j
    n_qubits: int = field(default=2)

    def matrix(self) -> np.ndarray:
        """Compose the listed gates (first gate acts first) times the global phase."""
        u = np.eye(2 ** self.n_qubits, dtype=np.complex128)
        for gate in self.gates:
            u = _gate_matrix(gate, self.n_qubits) @ u
        return self.global_phase * u

    def apply(self, state: StateVector, offset: int = 0) -> StateVector:
        """Apply the sequence in place with its qubit 0 mapped to ``offset``."""
        for gate in self.gates:
            qubits = [offset + q for q in gate.qubits]
            if gate.kind == "RZ":
                apply_pauli_rotation(state, qubits[0], "z", gate.angle)
            else:
                apply_cphase(state, qubits[0], qubits[1], gate.angle)
        state.amplitudes *= self.global_phase
        return state


def _gate_matrix(gate: Gate, n_qubits: int) -> np.ndarray:
    if gate.kind == "RZ":
        return embed(linalg.expm(-1j * gate.angle * PAULI_Z), gate.qubits[0], n_qubits)
    if gate.kind == "CPHASE":
        diag = np.ones(2 ** n_qubits, dtype=np.complex128)
        bits = (np.arange(2 ** n_qubits)[:, None] >> (n_qubits - 1 - np.array(gate.qubits))) & 1
        diag[bits.all(axis=1)] = np.exp(1j * gate.angle)
        return np.diag(diag)
    raise ValueError(f"unknown gate kind {gate.kind!r}")


def zz_decomposition(J: float) -> GateSequence:
    """exp(-i J sz x sz) as RZ(J) on both qubits, CPHASE(-4J) and a global phase e^{iJ}.

    From sz_a sz_b = 1 - 2a - 2b + 4ab on bits a, b and RZ(J) = e^{-iJ} diag(1, e^{2iJ}).
    """
    gates = (
        Gate("RZ", (0,), J),
        Gate("RZ", (1,), J),
        Gate("CPHASE", (0, 1), -4 * J),
    )
    return GateSequence(gates, global_phase=complex(np.exp(1j * J)))


def embed(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Kronecker-embed a single-qubit operator at ``qubit`` of an n-qubit register."""
    return np.kron(np.kron(np.eye(2 ** qubit), op), np.eye(2 ** (n - qubit - 1)))


def dense_unitary(p: FloquetParams, limit: int = DENSE_ORACLE_LIMIT) -> np.ndarray:
    """Full-cycle matrix from Kronecker products; oracle for the kernels."""
    if p.n > limit:
        raise ValueError(f"dense unitary needs n <= {limit}, got n={p.n}")
    n = p.n
    ux = linalg.expm(-1j * p.mu * PAULI_X)
    uz = linalg.expm(-1j * p.h * SPIN_Z)
    x_layer = np.ones((1, 1), dtype=np.complex128)
    z_layer = np.ones((1, 1), dtype=np.complex128)
    for _ in range(n):
        x_layer = np.kron(x_layer, ux)
        z_layer = np.kron(z_layer, uz)
    bond = np.diag(linalg.expm(-1j * p.J * np.kron(SPIN_Z, SPIN_Z)))
    zz_diag = np.ones(2 ** n, dtype=np.complex128)
    for j in range(n - 1):
        zz_diag *= np.kron(np.kron(np.ones(2 ** j), bond), np.ones(2 ** (n - j - 2)))
    zz_layer = np.diag(zz_diag)
    if p.layer_order is LayerOrder.FIG1B:
        return zz_layer @ z_layer @ x_layer
    return z_layer @ x_layer @ zz_layer

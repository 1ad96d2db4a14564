"""Dense statevector of an open n-qubit chain.

Kets are written left to right as Q0..Q(n-1), matching strings such as
``00010000``. Internally Q0 is the most-significant bit of the basis index,
so reshaping the amplitudes to ``(2,) * n`` puts qubit q on tensor axis q.
A "1" is a flipped spin, sz = +1; the gate kernels fix that convention.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-10


class NumericalToleranceError(RuntimeError):
    """A numerical check exceeded its stated tolerance."""


@dataclass
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.n}")
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (2 ** self.n,):
            raise ValueError(
                f"expected {2 ** self.n} amplitudes for n={self.n}, got shape {self.amplitudes.shape}"
            )

    @property
    def dim(self) -> int:
        return 2 ** self.n

    def tensor(self) -> np.ndarray:
        """View of the amplitudes with qubit q on axis q."""
        return self.amplitudes.reshape((2,) * self.n)

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amplitudes.copy())

    def norm_squared(self) -> float:
        """<psi|psi>."""
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def validate_bits(bits: str) -> str:
    """Strip whitespace and check that every symbol is 0 or 1."""
    cleaned = "".join(str(bits).split())
    if not cleaned:
        raise ValueError("bit string must contain at least one qubit")
    bad = sorted({c for c in cleaned if c not in "01"})
    if bad:
        raise ValueError(f"bit string {bits!r} contains non-binary symbols {bad}")
    return cleaned


def bitstring_index(bits: str) -> int:
    """Basis index of a ket string; Q0 (leftmost) is the most-significant bit."""
    return int(validate_bits(bits), 2)


def index_bitstring(index: int, n: int) -> str:
    """Ket string of a basis index, inverse of ``bitstring_index``."""
    if not 0 <= index < 2 ** n:
        raise ValueError(f"index {index} out of range for n={n}")
    return format(index, f"0{n}b")


def bit_table(n: int) -> np.ndarray:
    """(2**n, n) array whose row i holds the bits Q0..Q(n-1) of basis index i."""
    shifts = np.arange(n - 1, -1, -1)
    return (np.arange(2 ** n)[:, None] >> shifts) & 1


def basis_state(bits: str) -> StateVector:
    """Computational basis ket, e.g. ``basis_state("0100")``."""
    cleaned = validate_bits(bits)
    n = len(cleaned)
    amps = np.zeros(2 ** n, dtype=np.complex128)
    amps[int(cleaned, 2)] = 1.0
    return StateVector(n, amps)


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    """Haar-like random state from complex Gaussian amplitudes."""
    amps = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    amps /= np.linalg.norm(amps)
    return StateVector(n, amps)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} qubits vs {b.n} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def probabilities(state: StateVector) -> np.ndarray:
    """Born-rule weights |amplitude|**2 per basis index."""
    return np.abs(state.amplitudes) ** 2


def check_norm(state: StateVector, tol: float = NORM_TOLERANCE) -> float:
    """Return |<psi|psi> - 1| and raise if it exceeds ``tol``."""
    deviation = abs(state.norm_squared() - 1.0)
    if deviation > tol:
        logger.warning("norm drift %.3e exceeds %.0e", deviation, tol)
        raise NumericalToleranceError(f"state norm deviates from 1 by {deviation:.3e} (tolerance {tol:.0e})")
    return deviation

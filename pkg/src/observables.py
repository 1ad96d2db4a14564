"""Measured quantities of the chain: kinks, spin flips, meson populations, sampling.

Every observable here is diagonal in the computational basis, so each one
accepts either a StateVector or a probability vector over basis indices
(for example an empirical distribution built from sampled bit strings).
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from statevector import StateVector, bit_table, index_bitstring, probabilities, validate_bits

logger = logging.getLogger(__name__)

Source = Union[StateVector, np.ndarray]

OBSERVABLE_NAMES = (
    "kink_density",
    "total_kinks",
    "total_spin_flips",
    "spin_flip_density",
    "meson_number",
    "meson_histogram",
    "spread_metric",
)
SCALAR_OBSERVABLES = {"total_kinks", "total_spin_flips", "spread_metric"}


@dataclass
class MesonHistogram:
    n: int
    populations: dict[int, float] = field(default_factory=dict)

    def nonzero(self, tol: float = 1e-12) -> dict[int, float]:
        """Populations above ``tol``."""
        return {length: value for length, value in self.populations.items() if abs(value) > tol}

    def weighted_length(self) -> float:
        """sum_l l * <N_l>; equals <S_tot> when edge strings count."""
        return sum(length * value for length, value in self.populations.items())


def _distribution(source: Source) -> tuple[int, np.ndarray]:
    if isinstance(source, StateVector):
        return source.n, probabilities(source)
    probs = np.asarray(source, dtype=float)
    n = int(round(math.log2(probs.size))) if probs.size else 0
    if n < 1 or probs.shape != (2 ** n,):
        raise ValueError(f"probability vector must have 2**n entries, got shape {probs.shape}")
    return n, probs


@lru_cache(maxsize=None)
def _bits(n: int) -> np.ndarray:
    table = bit_table(n)
    table.setflags(write=False)
    return table


def _check_bond(n: int, bond: int):
    if not 0 <= bond < n - 1:
        raise ValueError(f"bond {bond} out of range for a chain of {n} qubits")


def _check_site(n: int, site: int):
    if not 0 <= site < n:
        raise ValueError(f"site {site} out of range for a chain of {n} qubits")


def kink_density(source: Source, bond: int) -> float:
    """<(1 - sz_j sz_{j+1}) / 2> on bond j + 1/2."""
    n, probs = _distribution(source)
    _check_bond(n, bond)
    bits = _bits(n)
    return float(probs @ (bits[:, bond] != bits[:, bond + 1]).astype(float))


def kink_profile(source: Source) -> np.ndarray:
    """Kink density on every bond, in bond order."""
    n, probs = _distribution(source)
    bits = _bits(n)
    return probs @ (bits[:, :-1] != bits[:, 1:]).astype(float)


def total_kinks(source: Source) -> float:
    """<D_tot>, the expected number of domain walls."""
    return float(kink_profile(source).sum())


def spin_flip_density(source: Source, site: int) -> float:
    """<sigma+_j sigma-_j>, the probability that qubit j reads 1."""
    n, probs = _distribution(source)
    _check_site(n, site)
    return float(probs @ _bits(n)[:, site])


def total_spin_flips(source: Source) -> float:
    """<S_tot>, the expected number of spins reading 1."""
    n, probs = _distribution(source)
    return float(probs @ _bits(n).sum(axis=1))


def _flank(bits: np.ndarray, site: int) -> np.ndarray:
    """P^0 on ``site``; sites beyond either chain end are vacuum, so the factor is 1 there."""
    n = bits.shape[1]
    if site < 0 or site >= n:
        return np.ones(bits.shape[0], dtype=bool)
    return bits[:, site] == 0


@lru_cache(maxsize=None)
def meson_operator_diagonal(n: int, length: int) -> np.ndarray:
    """Diagonal of N_l = sum_j P0_{j-1} (prod_{k=j}^{j+l-1} P1_k) P0_{j+l}."""
    if not 1 <= length <= n:
        raise ValueError(f"string length {length} out of range [1, {n}]")
    bits = _bits(n)
    total = np.zeros(bits.shape[0], dtype=np.int64)
    for start in range(n - length + 1):
        string = bits[:, start:start + length].all(axis=1)
        total += string & _flank(bits, start - 1) & _flank(bits, start + length)
    total.setflags(write=False)
    return total


def meson_number(source: Source, length: int) -> float:
    """<N_l> for strings of exactly ``length`` flipped spins."""
    n, probs = _distribution(source)
    return float(probs @ meson_operator_diagonal(n, length))


def meson_histogram(source: Source) -> MesonHistogram:
    """<N_l> for every length 1..n."""
    n, probs = _distribution(source)
    return MesonHistogram(n, {length: meson_number(probs, length) for length in range(1, n + 1)})


def count_mesons_bits(bits: str) -> dict[int, int]:
    """Lengths of maximal runs of 1s, chain ends treated as 0."""
    counts: Counter[int] = Counter()
    run = 0
    for symbol in validate_bits(bits) + "0":
        if symbol == "1":
            run += 1
        elif run:
            counts[run] += 1
            run = 0
    return dict(sorted(counts.items()))


def sample_bitstrings(source: Source, shots: int, seed: int | Sequence[int] | None = None) -> dict[str, int]:
    """Joint readout of every qubit, ``shots`` times.

    Draws come from a fresh ``numpy.random.default_rng(seed)`` per call through a
    single multinomial draw, so equal (seed, state, shots) give equal counts.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    n, probs = _distribution(source)
    probs = np.clip(probs, 0.0, None)
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs / probs.sum())
    logger.debug("sampled %d shots over %d qubits, %d distinct outcomes", shots, n, np.count_nonzero(counts))
    return {index_bitstring(int(i), n): int(counts[i]) for i in np.flatnonzero(counts)}


def empirical_probabilities(counts: dict[str, int], n: int) -> np.ndarray:
    """Frequency vector over basis indices from sampled counts."""
    probs = np.zeros(2 ** n)
    for bits, count in counts.items():
        cleaned = validate_bits(bits)
        if len(cleaned) != n:
            raise ValueError(f"sampled string {bits!r} does not have {n} qubits")
        probs[int(cleaned, 2)] += count
    total = probs.sum()
    if total <= 0:
        raise ValueError("no samples to build a distribution from")
    return probs / total


def profile_center(profile: Sequence[float]) -> float:
    """Weight-averaged bond index of a kink profile."""
    weights = np.asarray(profile, dtype=float)
    total = weights.sum()
    if total <= 0:
        raise ValueError("kink profile has zero total weight")
    return float(np.arange(weights.size) @ weights / total)


def spread_metric(profile: Sequence[float], source: float | None = None) -> float:
    """Weight-normalized RMS bond displacement from ``source`` (default: profile centre)."""
    weights = np.asarray(profile, dtype=float)
    total = weights.sum()
    if total <= 0:
        raise ValueError("kink profile has zero total weight")
    if source is None:
        source = profile_center(weights)
    displacement = np.arange(weights.size) - source
    return float(math.sqrt(weights @ displacement ** 2 / total))


def index_domain(name: str, n: int) -> list[int] | None:
    """Valid indices of an observable on an n-qubit chain, None for scalars."""
    if name == "kink_density":
        return list(range(n - 1))
    if name == "spin_flip_density":
        return list(range(n))
    if name in ("meson_number", "meson_histogram"):
        return list(range(1, n + 1))
    if name in SCALAR_OBSERVABLES:
        return None
    raise ValueError(f"unknown observable {name!r}; known: {', '.join(OBSERVABLE_NAMES)}")

"""Z2 lattice-gauge dual of the Floquet chain on an enlarged matter x gauge space.

Matter spins s_j sit on sites, gauge spins tau_{j+1/2} on links. Tensor
order interleaves them: s_0, tau_{1/2}, s_1, tau_{3/2}, ... so site j is
qubit 2j and link j+1/2 is qubit 2j+1. The chain bond sz_{j+1/2} maps to
tau^x_{j+1/2} and sx_{j+1/2} to s^x_j tau^z_{j+1/2} s^x_{j+1}.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from gates import FloquetParams

logger = logging.getLogger(__name__)

LGT_LIMIT = 12
GAUGE_TOLERANCE = 1e-10
ALGEBRA_TOLERANCE = 1e-12

_PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


class Boundary(str, Enum):
    OPEN = "open"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class LgtSystem:
    n_sites: int
    boundary: Boundary = Boundary.OPEN

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError(f"n_sites must be >= 2, got {self.n_sites}")
        object.__setattr__(self, "boundary", Boundary(self.boundary))

    @property
    def n_links(self) -> int:
        return self.n_sites if self.boundary is Boundary.PERIODIC else self.n_sites - 1

    @property
    def n_qubits(self) -> int:
        return self.n_sites + self.n_links

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    def site_qubit(self, j: int) -> int:
        return 2 * j

    def link_qubit(self, link: int) -> int:
        """Qubit of link ``link`` + 1/2."""
        return 2 * link + 1

    def link_ends(self, link: int) -> tuple[int, int]:
        return link, (link + 1) % self.n_sites

    def generator_sites(self) -> list[int]:
        if self.boundary is Boundary.PERIODIC:
            return list(range(self.n_sites))
        return list(range(1, self.n_sites - 1))

    def check_size(self, limit: int = LGT_LIMIT):
        if self.n_qubits > limit:
            raise ValueError(f"enlarged space has {self.n_qubits} spins, limit is {limit}")


@dataclass(frozen=True)
class GaugeGenerator:
    site: int
    matrix: np.ndarray


def pauli_string(sys: LgtSystem, factors: dict[int, str]) -> np.ndarray:
    """Dense operator with the given single-qubit Paulis and identity elsewhere."""
    out = np.ones((1, 1), dtype=np.complex128)
    for q in range(sys.n_qubits):
        out = np.kron(out, _PAULI[factors.get(q, "I")])
    return out


def matter(sys: LgtSystem, j: int, axis: str) -> np.ndarray:
    """Single Pauli on matter site ``j``."""
    return pauli_string(sys, {sys.site_qubit(j): axis})


def link(sys: LgtSystem, l: int, axis: str) -> np.ndarray:
    """Single Pauli on link ``l`` + 1/2."""
    return pauli_string(sys, {sys.link_qubit(l): axis})


def kinetic_term(sys: LgtSystem, l: int) -> np.ndarray:
    """s^x_j tau^z_{j+1/2} s^x_{j+1}; the image of the chain's sx on bond l."""
    left, right = sys.link_ends(l)
    return pauli_string(sys, {sys.site_qubit(left): "X", sys.link_qubit(l): "Z", sys.site_qubit(right): "X"})


def _involution_exp(theta: float, op: np.ndarray) -> np.ndarray:
    """exp(-i theta P) for P**2 = 1."""
    return math.cos(theta) * np.eye(op.shape[0]) - 1j * math.sin(theta) * op


def _product_exp(theta: float, ops: list[np.ndarray], dim: int) -> np.ndarray:
    out = np.eye(dim, dtype=np.complex128)
    for op in ops:
        out = _involution_exp(theta, op) @ out
    return out


def build_lgt_unitary(p: FloquetParams, sys: LgtSystem, limit: int = LGT_LIMIT) -> np.ndarray:
    """Electric field x kinetic term x mass term, the mass term acting first."""
    sys.check_size(limit)
    mass = _product_exp(-p.J, [matter(sys, j, "Z") for j in range(sys.n_sites)], sys.dim)
    kinetic = _product_exp(p.mu, [kinetic_term(sys, l) for l in range(sys.n_links)], sys.dim)
    electric = _product_exp(p.h, [link(sys, l, "X") for l in range(sys.n_links)], sys.dim)
    return electric @ kinetic @ mass


def gauge_generator(j: int, sys: LgtSystem) -> GaugeGenerator:
    """G_j = tau^x_{j-1/2} s^z_j tau^x_{j+1/2}."""
    if j not in sys.generator_sites():
        raise ValueError(
            f"site {j} has no generator under {sys.boundary.value} boundary with {sys.n_sites} sites"
        )
    left_link = (j - 1) % sys.n_sites
    matrix = pauli_string(sys, {sys.link_qubit(left_link): "X", sys.site_qubit(j): "Z", sys.link_qubit(j): "X"})
    return GaugeGenerator(j, matrix)


def _norm(op: np.ndarray) -> float:
    return float(np.linalg.norm(op, ord=2))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[a, b]."""
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """{a, b}."""
    return a @ b + b @ a


def check_gauge_invariance(p: FloquetParams, sys: LgtSystem, limit: int = LGT_LIMIT) -> float:
    """max_j ||[G_j, U_lgt]|| (0 when the system has no generators)."""
    u = build_lgt_unitary(p, sys, limit)
    norms = [_norm(commutator(gauge_generator(j, sys).matrix, u)) for j in sys.generator_sites()]
    return max(norms, default=0.0)


def generator_residuals(sys: LgtSystem) -> dict[str, float]:
    """Involution, trace and mutual-commutation residuals of all generators."""
    generators = [gauge_generator(j, sys).matrix for j in sys.generator_sites()]
    identity = np.eye(sys.dim)
    squared = max((_norm(g @ g - identity) for g in generators), default=0.0)
    trace = max((abs(np.trace(g)) for g in generators), default=0.0)
    mutual = max(
        (_norm(commutator(a, b)) for i, a in enumerate(generators) for b in generators[i + 1:]),
        default=0.0,
    )
    return {"generator_squared": squared, "generator_trace": float(trace), "generator_commutator": mutual}


def dual_algebra_check(n_bonds: int, boundary: Boundary = Boundary.OPEN, limit: int = LGT_LIMIT) -> dict[str, float]:
    """Max deviations of A_j = tau^x and B_j = s^x tau^z s^x from the per-bond Pauli algebra."""
    n_sites = n_bonds + 1 if Boundary(boundary) is Boundary.OPEN else n_bonds
    sys = LgtSystem(n_sites, boundary)
    sys.check_size(limit)
    identity = np.eye(sys.dim)
    a_ops = [link(sys, l, "X") for l in range(sys.n_links)]
    b_ops = [kinetic_term(sys, l) for l in range(sys.n_links)]
    pairs = [(j, k) for j in range(sys.n_links) for k in range(sys.n_links) if j != k]
    return {
        "A_squared": max(_norm(a @ a - identity) for a in a_ops),
        "B_squared": max(_norm(b @ b - identity) for b in b_ops),
        "same_bond_anticommutator": max(_norm(anticommutator(a, b)) for a, b in zip(a_ops, b_ops)),
        "cross_AB_commutator": max((_norm(commutator(a_ops[j], b_ops[k])) for j, k in pairs), default=0.0),
        "AA_commutator": max((_norm(commutator(a_ops[j], a_ops[k])) for j, k in pairs), default=0.0),
        "BB_commutator": max((_norm(commutator(b_ops[j], b_ops[k])) for j, k in pairs), default=0.0),
    }


def gauge_sector_projector(sys: LgtSystem, limit: int = LGT_LIMIT) -> np.ndarray:
    """Projector onto G_j = +1 for every generator."""
    sys.check_size(limit)
    identity = np.eye(sys.dim, dtype=np.complex128)
    projector = identity.copy()
    for j in sys.generator_sites():
        projector = projector @ (identity + gauge_generator(j, sys).matrix) / 2
    return projector


def sector_mass_identity_residual(sys: LgtSystem, limit: int = LGT_LIMIT) -> float:
    """|| P (-sum tau^x tau^x) P - P (-sum s^z) P || over sites carrying a generator."""
    projector = gauge_sector_projector(sys, limit)
    sites = sys.generator_sites()
    if not sites:
        return 0.0
    image = np.zeros((sys.dim, sys.dim), dtype=np.complex128)
    mass = np.zeros_like(image)
    for j in sites:
        left_link = (j - 1) % sys.n_sites
        image -= pauli_string(sys, {sys.link_qubit(left_link): "X", sys.link_qubit(j): "X"})
        mass -= matter(sys, j, "Z")
    return _norm(projector @ image @ projector - projector @ mass @ projector)


def gauge_audit(n_sites: int, boundary: Boundary | str = Boundary.OPEN, draws: int = 20, seed: int = 0) -> dict:
    """Machine-readable certification report for one lattice size and boundary."""
    sys = LgtSystem(n_sites, boundary)
    sys.check_size()
    rng = np.random.default_rng(seed)
    angles = [(math.pi / 4, math.pi / 10, math.pi / 8)]
    angles += [tuple(rng.uniform(-math.pi, math.pi, size=3)) for _ in range(max(draws - 1, 0))]
    invariance = 0.0
    projector_commutator = 0.0
    projector = gauge_sector_projector(sys)
    for J, mu, h in angles:
        p = FloquetParams(J, mu, h, n=max(n_sites, 2))
        u = build_lgt_unitary(p, sys)
        for j in sys.generator_sites():
            invariance = max(invariance, _norm(commutator(gauge_generator(j, sys).matrix, u)))
        projector_commutator = max(projector_commutator, _norm(commutator(projector, u)))
    n_bonds = sys.n_links
    checks = {
        "gauge_commutator": (invariance, GAUGE_TOLERANCE),
        "projector_commutator": (projector_commutator, GAUGE_TOLERANCE),
        "projector_idempotence": (_norm(projector @ projector - projector), ALGEBRA_TOLERANCE),
        "sector_mass_identity": (sector_mass_identity_residual(sys), GAUGE_TOLERANCE),
    }
    for name, value in generator_residuals(sys).items():
        checks[name] = (value, ALGEBRA_TOLERANCE)
    for name, value in dual_algebra_check(n_bonds, sys.boundary).items():
        checks[name] = (value, ALGEBRA_TOLERANCE)
    report = {
        "n_sites": sys.n_sites,
        "n_links": sys.n_links,
        "boundary": sys.boundary.value,
        "draws": len(angles),
        "sector_rank": int(round(np.trace(projector).real)),
        "checks": {name: {"value": float(value), "tolerance": tol, "ok": bool(value < tol)} for name, (value, tol) in checks.items()},
    }
    report["passed"] = all(entry["ok"] for entry in report["checks"].values())
    logger.info("gauge audit %s n_sites=%d: passed=%s", sys.boundary.value, sys.n_sites, report["passed"])
    return report

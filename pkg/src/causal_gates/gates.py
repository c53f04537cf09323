"""Local operations: unitaries, complex conjugation, anti-unitaries, Kraus
channels and projective measurements.

Complex conjugation ``K`` is defined only on single-qubit pure states, in the
computational basis.  It is refused on two-qubit inputs here; hypothesised
extensions to entangled states live in :mod:`causal_gates.timeorder`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence, Union

import numpy as np

from . import qlin
from .qlin import DimensionError, Side

GATE_TOL = 1e-10


class GateError(ValueError):
    """Raised when a gate is malformed or applied outside its domain."""


def _as_square(m, dim: int | None = None) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise GateError(f"expected a square matrix, got shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise GateError(f"expected dimension {dim}, got {m.shape[0]}")
    return m


def _check_unitary(u: np.ndarray, tol: float) -> None:
    eye = np.eye(u.shape[0])
    if not np.allclose(u.conj().T @ u, eye, rtol=0, atol=tol):
        raise GateError("matrix is not unitary")


@dataclass(frozen=True, eq=False)
class Unitary:
    matrix: np.ndarray
    tol: float = field(default=GATE_TOL, repr=False)

    kind = "unitary"

    def __post_init__(self):
        m = _as_square(self.matrix)
        _check_unitary(m, self.tol)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class Conjugation:
    kind = "conjugation"


@dataclass(frozen=True, eq=False)
class AntiUnitary:
    """``U`` applied after complex conjugation."""

    unitary: np.ndarray
    tol: float = field(default=GATE_TOL, repr=False)

    kind = "antiunitary"

    def __post_init__(self):
        u = _as_square(self.unitary, 2)
        _check_unitary(u, self.tol)
        object.__setattr__(self, "unitary", u)


@dataclass(frozen=True, eq=False)
class Kraus:
    operators: tuple
    tol: float = field(default=GATE_TOL, repr=False)

    kind = "kraus"

    def __post_init__(self):
        ops = tuple(_as_square(a) for a in self.operators)
        if not ops:
            raise GateError("Kraus set is empty")
        d = ops[0].shape[0]
        if any(a.shape != (d, d) for a in ops):
            raise GateError("Kraus operators have inconsistent shapes")
        total = sum(a.conj().T @ a for a in ops)
        if not np.allclose(total, np.eye(d), rtol=0, atol=self.tol):
            raise GateError("Kraus operators are not complete: sum A_k^dag A_k != I")
        object.__setattr__(self, "operators", ops)


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    basis: tuple
    tol: float = field(default=GATE_TOL, repr=False)

    kind = "measurement"

    def __post_init__(self):
        vecs = tuple(np.asarray(v, dtype=complex).reshape(-1) for v in self.basis)
        if not vecs:
            raise GateError("measurement basis is empty")
        d = vecs[0].size
        if len(vecs) != d or any(v.size != d for v in vecs):
            raise GateError("measurement basis must have as many vectors as the dimension")
        gram = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])
        if not np.allclose(gram, np.eye(d), rtol=0, atol=self.tol):
            raise GateError("measurement basis is not orthonormal")
        object.__setattr__(self, "basis", vecs)

    @property
    def projectors(self) -> list[np.ndarray]:
        return [qlin.projector(v) for v in self.basis]


GateSpec = Union[Unitary, Conjugation, AntiUnitary, Kraus, ProjectiveMeasurement]
PURE_ONLY = (Conjugation, AntiUnitary)


def pauli_measurement(axis: qlin.Axis) -> ProjectiveMeasurement:
    return ProjectiveMeasurement(qlin.AXIS_BASIS[axis])


def same_gate(g: GateSpec, h: GateSpec, tol: float = 1e-12) -> bool:
    if type(g) is not type(h):
        return False
    if isinstance(g, Unitary):
        return np.allclose(g.matrix, h.matrix, rtol=0, atol=tol)
    if isinstance(g, AntiUnitary):
        return np.allclose(g.unitary, h.unitary, rtol=0, atol=tol)
    if isinstance(g, Kraus):
        return len(g.operators) == len(h.operators) and all(
            np.allclose(a, b, rtol=0, atol=tol) for a, b in zip(g.operators, h.operators)
        )
    if isinstance(g, ProjectiveMeasurement):
        return len(g.basis) == len(h.basis) and all(
            np.allclose(a, b, rtol=0, atol=tol) for a, b in zip(g.basis, h.basis)
        )
    return True


def apply_pure(g: GateSpec, psi) -> np.ndarray:
    psi = qlin.ket(psi)
    if isinstance(g, Unitary):
        if g.matrix.shape[0] != psi.size:
            raise DimensionError("unitary and ket dimensions differ")
        return g.matrix @ psi
    if isinstance(g, PURE_ONLY):
        if psi.size != 2:
            raise GateError(
                "complex conjugation is only defined on single-qubit pure states; "
                "supply an extension rule for entangled inputs"
            )
        out = psi.conj()
        if isinstance(g, AntiUnitary):
            out = g.unitary @ out
        return out
    raise GateError(f"apply_pure does not accept {type(g).__name__}")


def kraus_operators(g: GateSpec) -> list[np.ndarray]:
    """Kraus form of any linear gate; measurements give the nonselective channel."""
    if isinstance(g, Unitary):
        return [g.matrix]
    if isinstance(g, Kraus):
        return list(g.operators)
    if isinstance(g, ProjectiveMeasurement):
        return g.projectors
    raise GateError(f"{type(g).__name__} has no Kraus representation")


def _lift(op: np.ndarray, side: Literal["A", "B", "whole"], dim: int) -> np.ndarray:
    if side == "whole":
        if op.shape[0] != dim:
            raise DimensionError(f"operator of size {op.shape[0]} acting on dimension {dim}")
        return op
    if dim != 4 or op.shape[0] != 2:
        raise DimensionError("side-local operations need a 2x2 operator and a 4x4 state")
    return qlin.embed(op, side)


def apply_kraus_linear(ops: Sequence[np.ndarray], w, side: Literal["A", "B", "whole"]) -> np.ndarray:
    """Apply ``sum_k A_k w A_k^dag`` to any square ``w``; no state validation."""
    w = np.asarray(w, dtype=complex)
    out = np.zeros_like(w)
    for a in ops:
        big = _lift(np.asarray(a, dtype=complex), side, w.shape[0])
        out += big @ w @ big.conj().T
    return out


def apply_channel(g: GateSpec, rho, side: Literal["A", "B", "whole"] = "whole") -> np.ndarray:
    rho = qlin.density(rho)
    return apply_kraus_linear(kraus_operators(g), rho, side)


@dataclass
class MeasurementRecord:
    outcomes: list  # (probability, post-state or None)
    nonselective: np.ndarray


def measure(basis: ProjectiveMeasurement, rho, side: Side, zero_tol: float = 1e-14) -> MeasurementRecord:
    """Projective measurement on one factor of a two-qubit state."""
    rho = qlin.density(rho)
    if len(basis.basis) != 2:
        raise DimensionError("measurement must be on a single qubit")
    outcomes = []
    nonselective = np.zeros((4, 4), dtype=complex)
    for proj in basis.projectors:
        big = qlin.embed(proj, side)
        branch = big @ rho @ big
        p = float(np.trace(branch).real)
        if p <= zero_tol:
            outcomes.append((0.0, None))
            continue
        outcomes.append((p, branch / p))
        nonselective += branch
    return MeasurementRecord(outcomes, nonselective)


def nonselective(basis: ProjectiveMeasurement, w, side: Side) -> np.ndarray:
    """Unconditioned post-measurement operator; linear, so any Hermitian input works."""
    return apply_kraus_linear(basis.projectors, w, side)


def pushforward_density(g: GateSpec, rho) -> np.ndarray:
    """Single-qubit action ``U conj(rho) U^dag`` of a conjugation-type gate."""
    if not isinstance(g, PURE_ONLY):
        raise GateError(f"pushforward_density expects a conjugation-type gate, got {type(g).__name__}")
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise GateError("conjugation-type gates are undefined on entangled (4x4) inputs")
    out = rho.conj()
    if isinstance(g, AntiUnitary):
        out = g.unitary @ out @ g.unitary.conj().T
    return out

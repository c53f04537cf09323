"""Remote ensemble preparation and the no-signaling checks.

Alice's choice of measurement steers Bob's reduced state into different
pure-state decompositions.  A gate at Bob's site signals if it lets him tell
those decompositions apart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gates, qlin
from .gates import GateSpec, ProjectiveMeasurement

STATE_EQUALITY = 1e-9


class EnsembleMismatchError(ValueError):
    """The two ensembles passed to a comparison do not describe the same state."""


@dataclass(frozen=True, eq=False)
class Ensemble:
    members: tuple  # (weight, ket)

    def __post_init__(self):
        if not self.members:
            raise ValueError("ensemble is empty")
        members = tuple((float(w), qlin.ket(v, tol=1e-10)) for w, v in self.members)
        weights = np.array([w for w, _ in members])
        if np.any(weights < 0) or abs(weights.sum() - 1) > 1e-10:
            raise ValueError(f"ensemble weights must be a probability vector, got {weights}")
        object.__setattr__(self, "members", members)

    @property
    def weights(self) -> list[float]:
        return [w for w, _ in self.members]

    @property
    def states(self) -> list[np.ndarray]:
        return [v for _, v in self.members]

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class EnsembleVerdict:
    distinguishable: bool
    distance: float


@dataclass(frozen=True)
class MarginalVerdict:
    signals: bool
    distance: float


def mix(e: Ensemble) -> np.ndarray:
    return sum(w * qlin.projector(v) for w, v in e.members)


def spectral_members(rho: np.ndarray, weight: float = 1.0, cutoff: float = 1e-12) -> list:
    """Pure members of ``rho``, descending eigenvalue, canonical phase."""
    pairs = qlin.eig_hermitian(rho, tol=1e-10)
    out = []
    for lam, v in reversed(pairs):
        if lam > cutoff:
            out.append((weight * lam, qlin.canonical_phase(v)))
    return out


def steer(rho_ab, alice_basis: ProjectiveMeasurement, zero_tol: float = 1e-14) -> Ensemble:
    """Bob's ensemble prepared by Alice measuring ``alice_basis`` on A."""
    rho_ab = qlin.density(rho_ab, tol=1e-10)
    members = []
    for proj in alice_basis.projectors:
        branch = qlin.partial_trace(qlin.embed(proj, "A") @ rho_ab @ qlin.embed(proj, "A"), "A")
        p = float(np.trace(branch).real)
        if p <= zero_tol:
            continue
        members.extend(spectral_members(branch / p, weight=p))
    total = sum(w for w, _ in members)
    return Ensemble(tuple((w / total, v) for w, v in members))


def pushforward_ensemble(g: GateSpec, e: Ensemble) -> Ensemble:
    return Ensemble(tuple((w, gates.apply_pure(g, v)) for w, v in e.members))


def random_decomposition(rho: np.ndarray, n_members: int, rng: np.random.Generator) -> Ensemble:
    """Another pure-state decomposition of a single-qubit ``rho``.

    Root-weighted spectral vectors are recombined through the rows of a random
    ``n_members x rank`` isometry.
    """
    pairs = [(lam, v) for lam, v in qlin.eig_hermitian(rho, tol=1e-10) if lam > 1e-14]
    rank = len(pairs)
    if n_members < rank:
        raise ValueError(f"need at least {rank} members to decompose a rank-{rank} state")
    tilde = np.array([np.sqrt(lam) * v for lam, v in pairs])  # rank x 2
    iso = qlin.random_isometry(n_members, rank, rng)
    members = []
    for row in iso:
        vec = row @ tilde
        w = float(np.vdot(vec, vec).real)
        if w > 1e-15:
            members.append((w, vec / np.sqrt(w)))
    total = sum(w for w, _ in members)
    return Ensemble(tuple((w / total, v) for w, v in members))


def rc_ensemble_check(g: GateSpec, e1: Ensemble, e2: Ensemble, tol: float = STATE_EQUALITY) -> EnsembleVerdict:
    """Can Bob tell ``e1`` from ``e2`` after applying ``g`` member by member?"""
    rho1, rho2 = mix(e1), mix(e2)
    gap = qlin.trace_distance(rho1, rho2)
    if gap > tol:
        raise EnsembleMismatchError(f"ensembles decompose different states (distance {gap:.3e})")

    def push(e):
        if isinstance(g, gates.Kraus):
            return gates.apply_kraus_linear(g.operators, mix(e), "whole")
        return mix(pushforward_ensemble(g, e))

    d = qlin.trace_distance(push(e1), push(e2))
    return EnsembleVerdict(distinguishable=d > tol, distance=d)


def rc_marginal_check(g: GateSpec, rho_ab, tol: float = STATE_EQUALITY) -> MarginalVerdict:
    """Does a linear operation by Alice change Bob's reduced state?"""
    rho_ab = np.asarray(rho_ab, dtype=complex)
    after = gates.apply_kraus_linear(gates.kraus_operators(g), rho_ab, "A")
    d = qlin.trace_distance(qlin.partial_trace(rho_ab, "A"), qlin.partial_trace(after, "A"))
    return MarginalVerdict(signals=d > tol, distance=d)


def ordered_kraus(rho_ab, kraus_a, kraus_b, first: str) -> np.ndarray:
    """Apply Alice's and Bob's channels in the given order ('A' or 'B' first)."""
    if first == "A":
        return gates.apply_kraus_linear(kraus_b, gates.apply_kraus_linear(kraus_a, rho_ab, "A"), "B")
    return gates.apply_kraus_linear(kraus_a, gates.apply_kraus_linear(kraus_b, rho_ab, "B"), "A")

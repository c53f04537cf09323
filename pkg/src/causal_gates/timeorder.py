"""Two-party harness: run both time orders of spacelike local operations and
classify the outcome.

Alice acts on A with a measurement, channel or unitary.  Bob acts on B with any
gate, including conjugation-type gates whose action on an entangled qubit is
not defined.  When such a gate meets an entangled joint state, an
:class:`ExtensionRule` supplies the hypothesised joint action.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from . import gates, qlin, steering
from .gates import GateSpec, ProjectiveMeasurement

STATE_EQUALITY = 1e-9
RULE_TOL = 1e-10

Order = Literal["AB", "BA"]


class MissingExtensionError(ValueError):
    """A conjugation-type gate was applied to an entangled state with no extension rule."""


@dataclass(frozen=True, eq=False)
class ExtensionRule:
    """Hypothesised action of ``K`` on a two-qubit joint state.

    Only the conjugation part is hypothesised; for an anti-unitary ``UK`` the
    harness applies ``I (x) U`` after the rule.
    """

    name: str
    map: Callable[[np.ndarray], np.ndarray]
    table: tuple | None = field(default=None, repr=False)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        out = np.asarray(self.map(np.asarray(rho, dtype=complex)), dtype=complex)
        if out.shape != (4, 4):
            raise ValueError(f"extension rule {self.name!r} returned shape {out.shape}")
        if not qlin.is_hermitian(out, RULE_TOL):
            raise ValueError(f"extension rule {self.name!r} returned a non-Hermitian operator")
        if abs(np.trace(out) - 1) > RULE_TOL:
            raise ValueError(f"extension rule {self.name!r} does not preserve trace")
        return out


GLOBAL_CONJUGATION = ExtensionRule("global-conjugation", lambda rho: rho.conj())
IDENTITY_ON_JOINT = ExtensionRule("identity-on-joint", lambda rho: rho.copy())
BUILTIN_RULES = {r.name: r for r in (GLOBAL_CONJUGATION, IDENTITY_ON_JOINT)}


def table_rule(name: str, entries, tol: float = STATE_EQUALITY) -> ExtensionRule:
    """Rule defined on sampled inputs: ``entries`` is a sequence of (input, output) pairs.

    Applying the rule to a state that matches none of the sampled inputs is an
    error; the rule makes no claim there.
    """
    entries = tuple((np.asarray(i, dtype=complex), np.asarray(o, dtype=complex)) for i, o in entries)
    for k, (i, o) in enumerate(entries):
        if i.shape != (4, 4) or o.shape != (4, 4):
            raise ValueError(f"extension table {name!r} entry {k}: expected 4x4 matrices")

    def lookup(rho):
        for i, o in entries:
            if qlin.trace_distance(i, rho) <= tol:
                return o.copy()
        raise MissingExtensionError(f"extension table {name!r} has no entry for this joint state")

    return ExtensionRule(name, lookup, table=entries)


@dataclass(frozen=True, eq=False)
class Scenario:
    initial: np.ndarray
    alice_op: GateSpec
    bob_op: GateSpec
    bob_extension: ExtensionRule | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "initial", qlin.density(self.initial, tol=1e-10))
        if isinstance(self.alice_op, gates.PURE_ONLY):
            raise ValueError("Alice's operation must be linear (measurement, channel or unitary)")
        for who, g in (("alice_op", self.alice_op), ("bob_op", self.bob_op)):
            if isinstance(g, gates.PURE_ONLY):
                continue
            size = len(g.basis) if isinstance(g, ProjectiveMeasurement) else gates.kraus_operators(g)[0].shape[0]
            if size != 2:
                raise ValueError(f"{who} must act on a single qubit")


@dataclass(frozen=True)
class ACVerdict:
    kind: str  # compliant | violation_a | violation_b
    joint_distance: float
    marginal_distance_A: float
    marginal_distance_B: float


@dataclass(frozen=True)
class RCCrossCheck:
    signals: bool
    alice_to_bob: float
    bob_to_alice: float | None
    ensemble_distance: float | None


def is_product(rho: np.ndarray, tol: float = 1e-10) -> bool:
    ra, rb = qlin.partial_trace(rho, "B"), qlin.partial_trace(rho, "A")
    return bool(np.allclose(np.kron(ra, rb), rho, rtol=0, atol=tol))


def _linear(g: GateSpec, w: np.ndarray, side: qlin.Side) -> np.ndarray:
    return gates.apply_kraus_linear(gates.kraus_operators(g), w, side)


def _bob_on_joint(s: Scenario, w: np.ndarray) -> np.ndarray:
    """Bob's gate on an (unnormalized) joint operator."""
    g = s.bob_op
    if not isinstance(g, gates.PURE_ONLY):
        return _linear(g, w, "B")
    weight = float(np.trace(w).real)
    if weight <= 1e-15:
        return np.zeros_like(w)
    rho = w / weight
    if is_product(rho):
        ra, rb = qlin.partial_trace(rho, "B"), qlin.partial_trace(rho, "A")
        return weight * np.kron(ra, gates.pushforward_density(g, rb))
    if s.bob_extension is None:
        raise MissingExtensionError(
            f"{type(g).__name__} on an entangled joint state needs an extension rule"
        )
    out = s.bob_extension(rho)
    if isinstance(g, gates.AntiUnitary):
        big = qlin.embed(g.unitary, "B")
        out = big @ out @ big.conj().T
    return weight * out


def run_order(s: Scenario, order: Order) -> np.ndarray:
    """Final joint operator when the two operations happen in ``order``."""
    if order == "AB":
        if isinstance(s.alice_op, ProjectiveMeasurement):
            # each branch is a product state, so Bob's gate is applied per branch
            out = np.zeros((4, 4), dtype=complex)
            for proj in s.alice_op.projectors:
                big = qlin.embed(proj, "A")
                out += _bob_on_joint(s, big @ s.initial @ big)
            return out
        return _bob_on_joint(s, _linear(s.alice_op, s.initial, "A"))
    if order == "BA":
        return _linear(s.alice_op, _bob_on_joint(s, s.initial), "A")
    raise ValueError(f"unknown order {order!r}")


def classify(s: Scenario, tol: float = STATE_EQUALITY) -> ACVerdict:
    tau_ab, tau_ba = run_order(s, "AB"), run_order(s, "BA")
    joint = qlin.trace_distance(tau_ab, tau_ba)
    dist_a = qlin.trace_distance(qlin.partial_trace(tau_ab, "B"), qlin.partial_trace(tau_ba, "B"))
    dist_b = qlin.trace_distance(qlin.partial_trace(tau_ab, "A"), qlin.partial_trace(tau_ba, "A"))
    if joint <= tol:
        kind = "compliant"
    elif dist_a > tol or dist_b > tol:
        kind = "violation_a"
    else:
        kind = "violation_b"
    return ACVerdict(kind, joint, dist_a, dist_b)


@dataclass(frozen=True, eq=False)
class OmegaConstraint:
    """Test that Alice's measurement on a candidate joint state reproduces the
    other time order's final state."""

    basis: ProjectiveMeasurement
    target: np.ndarray
    tol: float = STATE_EQUALITY

    def __call__(self, w) -> bool:
        w = np.asarray(w, dtype=complex)
        if not qlin.is_hermitian(w, 1e-10) or abs(np.trace(w) - 1) > 1e-10:
            return False
        return qlin.trace_distance(gates.nonselective(self.basis, w, "A"), self.target) <= self.tol

    def check(self, w) -> dict:
        w = np.asarray(w, dtype=complex)
        return {
            "accepted": self(w),
            "positive": bool(np.linalg.eigvalsh((w + w.conj().T) / 2)[0] >= -1e-10),
        }


def omega_constraint(s: Scenario, tol: float = STATE_EQUALITY) -> OmegaConstraint:
    if not isinstance(s.alice_op, ProjectiveMeasurement):
        raise ValueError("omega_constraint needs Alice's operation to be a projective measurement")
    return OmegaConstraint(s.alice_op, run_order(s, "AB"), tol)


def rc_cross_check(s: Scenario, tol: float = STATE_EQUALITY) -> RCCrossCheck:
    """Single-order signaling test for each party, independent of the AC verdict.

    Alice -> Bob: change of Bob's marginal under Alice's operation.
    Bob -> Alice: change of Alice's marginal under Bob's operation when it is
    defined on the joint state (linear gate, product state, or extension rule).
    For conjugation-type gates, also whether Bob can tell apart the ensembles
    Alice steers with each Pauli measurement.
    """
    alice = steering.rc_marginal_check(s.alice_op, s.initial, tol).distance

    bob_to_alice = None
    try:
        after = _bob_on_joint(s, s.initial)
    except MissingExtensionError:
        pass
    else:
        bob_to_alice = qlin.trace_distance(qlin.partial_trace(s.initial, "B"), qlin.partial_trace(after, "B"))

    ens_dist = None
    if isinstance(s.bob_op, gates.PURE_ONLY):
        bases = [gates.pauli_measurement(a) for a in ("z", "x", "y")]
        if isinstance(s.alice_op, ProjectiveMeasurement):
            bases.append(s.alice_op)
        ensembles = [steering.steer(s.initial, b) for b in bases]
        ens_dist = 0.0
        for i in range(len(ensembles)):
            for j in range(i + 1, len(ensembles)):
                v = steering.rc_ensemble_check(s.bob_op, ensembles[i], ensembles[j], tol)
                ens_dist = max(ens_dist, v.distance)

    worst = max(d for d in (alice, bob_to_alice, ens_dist) if d is not None)
    return RCCrossCheck(worst > tol, alice, bob_to_alice, ens_dist)


def theorem1_scenario(axis: qlin.Axis, extension: ExtensionRule | None = None) -> Scenario:
    """Singlet, Alice measures Pauli ``axis`` on A, Bob applies ``K`` on B."""
    return Scenario(
        initial=qlin.SINGLET,
        alice_op=gates.pauli_measurement(axis),
        bob_op=gates.Conjugation(),
        bob_extension=extension,
        name=f"singlet-sigma_{axis}-conjugation",
    )


def theorem1_scenarios() -> list[Scenario]:
    return [theorem1_scenario(a) for a in ("z", "x", "y")]

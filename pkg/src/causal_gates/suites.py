"""Verification suites.  Each returns a list of check records for one report
section; a record always has ``check`` and ``passed`` and may name the
``claim`` it reproduces."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from . import families, gates, oracles, popt, qlin, steering, timeorder
from .families import A1, A2, A3

SWEEP = 1000


@dataclass(frozen=True)
class Tolerances:
    state_equality: float = 1e-9
    invariant: float = 1e-10
    popt_floor: float = -1e-9

    @classmethod
    def with_overrides(cls, overrides: dict | None) -> "Tolerances":
        overrides = overrides or {}
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise KeyError(f"unknown tolerance name(s): {', '.join(unknown)}; known: {', '.join(sorted(known))}")
        return cls(**{k: float(v) for k, v in overrides.items()})


def _rng(seed: int, i: int) -> np.random.Generator:
    return np.random.default_rng([seed, i])


def _sweep(name: str, seed: int, limit: float, n: int, instance, claim: str | None = None) -> dict:
    dists = np.array([instance(_rng(seed, i)) for i in range(n)])
    worst = int(np.argmax(dists))
    rec = {
        "check": name,
        "seed": seed,
        "instances": n,
        "worst_instance": worst,
        "distance": float(dists[worst]),
        "limit": limit,
        "passed": bool(dists[worst] <= limit),
    }
    rec["verdict"] = "no-signaling" if rec["passed"] else "signaling"
    if claim:
        rec["claim"] = claim
    return rec


# qlin -----------------------------------------------------------------------

def qlin_suite(tol: Tolerances, seed: int = 0) -> list[dict]:
    pt = qlin.partial_transpose(qlin.SINGLET, "B")
    spec = qlin.eigenvalues(pt)
    expected = np.array([-0.5, 0.5, 0.5, 0.5])
    corr = {a: qlin.pauli_correlation(qlin.SINGLET, a, a) for a in "xyz"}
    return [
        {
            "check": "singlet_partial_transpose_spectrum",
            "eigenvalues": spec,
            "passed": bool(np.abs(spec - expected).max() <= tol.invariant),
        },
        {
            "check": "singlet_pauli_anticorrelation",
            "correlations": corr,
            "passed": all(abs(v + 1) <= tol.invariant for v in corr.values()),
        },
        {
            "check": "singlet_reduced_state_maximally_mixed",
            "distance": qlin.trace_distance(qlin.partial_trace(qlin.SINGLET, "A"), qlin.MAXIMALLY_MIXED_2),
            "passed": qlin.trace_distance(qlin.partial_trace(qlin.SINGLET, "A"), qlin.MAXIMALLY_MIXED_2)
            <= tol.invariant,
        },
    ]


# gates ----------------------------------------------------------------------

CONJUGATION_TABLE = (
    ("0", qlin.KET_0, qlin.KET_0),
    ("1", qlin.KET_1, qlin.KET_1),
    ("x", qlin.KET_X, qlin.KET_X),
    ("xbar", qlin.KET_XBAR, qlin.KET_XBAR),
    ("y", qlin.KET_Y, qlin.KET_YBAR),
    ("ybar", qlin.KET_YBAR, qlin.KET_Y),
)


def conjugation_table_distances() -> dict[str, float]:
    k = gates.Conjugation()
    return {
        label: qlin.trace_distance(qlin.projector(gates.apply_pure(k, psi)), qlin.projector(image))
        for label, psi, image in CONJUGATION_TABLE
    }


def gates_suite(tol: Tolerances, seed: int = 0) -> list[dict]:
    dists = conjugation_table_distances()

    def antiunitary_witness(rng):
        g = gates.AntiUnitary(qlin.random_unitary(2, rng))
        phi, psi = qlin.random_ket(2, rng), qlin.random_ket(2, rng)
        lhs = np.vdot(gates.apply_pure(g, phi), gates.apply_pure(g, psi))
        return abs(lhs - np.conj(np.vdot(phi, psi)))

    def pushforward_consistency(rng):
        g = gates.AntiUnitary(qlin.random_unitary(2, rng))
        psi = qlin.random_ket(2, rng)
        return qlin.trace_distance(
            gates.pushforward_density(g, qlin.projector(psi)), qlin.projector(gates.apply_pure(g, psi))
        )

    return [
        {
            "check": "conjugation_basis_table",
            "distances": dists,
            "distance": max(dists.values()),
            "passed": max(dists.values()) <= 1e-12,
            "claim": "conjugation-basis-table",
        },
        _sweep("antiunitary_inner_product_conjugation", seed, tol.invariant, SWEEP, antiunitary_witness),
        _sweep("pushforward_matches_pure_action", seed, tol.invariant, SWEEP, pushforward_consistency),
    ]


# steering -------------------------------------------------------------------

def antiunitary_no_signaling_instance(rng: np.random.Generator) -> float:
    rho_b = qlin.random_density(2, rng)
    e1 = steering.random_decomposition(rho_b, int(rng.integers(2, 5)), rng)
    e2 = steering.random_decomposition(rho_b, int(rng.integers(2, 5)), rng)
    g = gates.AntiUnitary(qlin.random_unitary(2, rng))
    return steering.rc_ensemble_check(g, e1, e2).distance


def kraus_no_signaling_instance(rng: np.random.Generator) -> float:
    rho = qlin.random_density(4, rng)
    g = gates.Kraus(tuple(qlin.random_kraus(3, rng)))
    return steering.rc_marginal_check(g, rho).distance


def order_commutation_instance(rng: np.random.Generator) -> float:
    rho = qlin.random_density(4, rng)
    ka = qlin.random_kraus(int(rng.integers(1, 4)), rng)
    kb = qlin.random_kraus(int(rng.integers(1, 4)), rng)
    return qlin.trace_distance(
        steering.ordered_kraus(rho, ka, kb, "A"), steering.ordered_kraus(rho, ka, kb, "B")
    )


def ghjw_instance(rng: np.random.Generator) -> float:
    rho = qlin.random_density(4, rng)
    u = qlin.random_unitary(2, rng)
    ens = steering.steer(rho, gates.ProjectiveMeasurement((u[:, 0], u[:, 1])))
    return qlin.trace_distance(steering.mix(ens), qlin.partial_trace(rho, "A"))


def steering_suite(tol: Tolerances, seed: int = 0) -> list[dict]:
    z_ens = steering.steer(qlin.SINGLET, gates.pauli_measurement("z"))
    x_ens = steering.steer(qlin.SINGLET, gates.pauli_measurement("x"))
    v = steering.rc_ensemble_check(gates.Conjugation(), z_ens, x_ens, tol.state_equality)
    return [
        {
            "check": "conjugation_z_vs_x_singlet_ensembles",
            "seed": seed,
            "distance": v.distance,
            "verdict": "signaling" if v.distinguishable else "no-signaling",
            "passed": not v.distinguishable,
        },
        _sweep("antiunitary_no_signaling", seed, tol.invariant, SWEEP, antiunitary_no_signaling_instance,
               claim="antiunitary-no-signaling"),
        _sweep("kraus_no_signaling", seed, tol.invariant, SWEEP, kraus_no_signaling_instance,
               claim="kraus-no-signaling"),
        _sweep("kraus_order_commutation", seed, tol.invariant, SWEEP, order_commutation_instance,
               claim="quantum-order-independence"),
        _sweep("ghjw_consistency", seed, tol.invariant, 200, ghjw_instance),
    ]


# timeorder ------------------------------------------------------------------

def _bell_mixture(pair) -> np.ndarray:
    return 0.5 * sum(qlin.projector(np.kron(a, b)) for a, b in pair)


EXPECTED_ORDER_AB = {
    "z": _bell_mixture(((qlin.KET_0, qlin.KET_1), (qlin.KET_1, qlin.KET_0))),
    "x": _bell_mixture(((qlin.KET_X, qlin.KET_XBAR), (qlin.KET_XBAR, qlin.KET_X))),
    "y": _bell_mixture(((qlin.KET_Y, qlin.KET_Y), (qlin.KET_YBAR, qlin.KET_YBAR))),
}


def verdict_record(name: str, v: timeorder.ACVerdict, x: timeorder.RCCrossCheck) -> dict:
    return {
        "check": name,
        "verdict": v.kind,
        "joint_distance": v.joint_distance,
        "marginal_distance_A": v.marginal_distance_A,
        "marginal_distance_B": v.marginal_distance_B,
        "signals": x.signals,
        "alice_to_bob": x.alice_to_bob,
        "bob_to_alice": x.bob_to_alice,
        "ensemble_distance": x.ensemble_distance,
    }


def random_kraus_scenario(rng: np.random.Generator) -> timeorder.Scenario:
    return timeorder.Scenario(
        initial=qlin.random_density(4, rng),
        alice_op=gates.Kraus(tuple(qlin.random_kraus(int(rng.integers(1, 4)), rng))),
        bob_op=gates.Kraus(tuple(qlin.random_kraus(int(rng.integers(1, 4)), rng))),
    )


def timeorder_suite(tol: Tolerances, seed: int = 0) -> list[dict]:
    out = []
    for k, axis in enumerate(("z", "x", "y"), start=1):
        s = timeorder.theorem1_scenario(axis)
        d = qlin.trace_distance(timeorder.run_order(s, "AB"), EXPECTED_ORDER_AB[axis])
        rec = {"check": f"scenario_{k}_order_AB_state", "distance": d, "passed": d <= tol.invariant}
        if k == 1:
            rec["claim"] = "scenario-1-final-state"
        out.append(rec)

    s3 = timeorder.theorem1_scenario("y", timeorder.GLOBAL_CONJUGATION)
    v, x = timeorder.classify(s3, tol.state_equality), timeorder.rc_cross_check(s3, tol.state_equality)
    rec = verdict_record("scenario_3_global_conjugation", v, x)
    rec["passed"] = (
        v.kind == "violation_b"
        and abs(v.joint_distance - 1) <= tol.invariant
        and max(v.marginal_distance_A, v.marginal_distance_B) <= tol.invariant
        and not x.signals
    )
    rec["claim"] = "ac-violation-without-rc-violation"
    out.append(rec)

    x1 = timeorder.rc_cross_check(timeorder.theorem1_scenario("z"), tol.state_equality)
    out.append({
        "check": "scenario_1_rc_cross_check",
        "signals": x1.signals,
        "ensemble_distance": x1.ensemble_distance,
        "alice_to_bob": x1.alice_to_bob,
        "passed": not x1.signals,
        "claim": "conjugation-no-signaling",
    })

    def kraus_compliance(rng):
        return timeorder.classify(random_kraus_scenario(rng), tol.state_equality).joint_distance

    out.append(_sweep("kraus_scenarios_compliant", seed, tol.invariant, SWEEP, kraus_compliance))
    out[-1]["verdict"] = "compliant" if out[-1]["passed"] else "violation"
    return out


def expected_outcome(s: timeorder.Scenario, tol: Tolerances) -> dict:
    """Run a user scenario: both orders where possible, verdict and cross-check."""
    try:
        v = timeorder.classify(s, tol.state_equality)
    except timeorder.MissingExtensionError:
        v = None
    x = timeorder.rc_cross_check(s, tol.state_equality)
    if v is None:
        rec = {
            "verdict": "undetermined",
            "order_AB": timeorder.run_order(s, "AB"),
            "signals": x.signals,
            "alice_to_bob": x.alice_to_bob,
            "ensemble_distance": x.ensemble_distance,
        }
    else:
        rec = verdict_record("", v, x)
        del rec["check"]
    return rec


def scenario_suite(items, tol: Tolerances, seed: int = 0) -> list[dict]:
    out = []
    for idx, (s, expect) in enumerate(items):
        rec = {"check": f"scenario[{idx}]" + (f" {s.name}" if s.name else "")}
        rec.update(expected_outcome(s, tol))
        want = {"verdict": "compliant", **expect} if "verdict" not in expect else dict(expect)
        rec["expect"] = want
        rec["passed"] = rec["verdict"] == want["verdict"] and (
            "signals" not in want or rec["signals"] == want["signals"]
        )
        out.append(rec)
    return out


# families -------------------------------------------------------------------

SCENARIO_FAMILIES = (("z", A1), ("x", A2), ("y", A3))


def family_omega_agreement(seed: int = 0, n_phase: int = 256, n_mix: int = 64) -> dict:
    """Compare each scenario's constraint with analytic membership of its family
    on every family's phase-grid projectors and random convex mixtures."""
    constraints = [(timeorder.omega_constraint(timeorder.theorem1_scenario(a)), f) for a, f in SCENARIO_FAMILIES]
    rng = _rng(seed, 0)
    disagreements = 0
    own_rejected = 0
    cross_accepted = 0
    evaluated = 0
    for _, fam in SCENARIO_FAMILIES:
        proj = families.family_projectors(fam, n_phase)
        mixes = []
        for _ in range(n_mix):
            idx = rng.choice(n_phase, size=3, replace=False)
            mixes.append(np.einsum("k,kij->ij", rng.dirichlet(np.ones(3)), proj[idx]))
        candidates = np.concatenate([proj, np.array(mixes)])
        for omega, target in constraints:
            for w in candidates:
                acc = omega(w)
                mem = families.membership(target, w)
                evaluated += 1
                disagreements += acc != mem
                if target is fam and not acc:
                    own_rejected += 1
                if target is not fam and acc:
                    cross_accepted += 1
    return {
        "evaluated": evaluated,
        "disagreements": disagreements,
        "own_rejected": own_rejected,
        "cross_accepted": cross_accepted,
    }


def membership_oracle_candidates(seed: int, n: int) -> list[np.ndarray]:
    out = []
    fams = (A1, A2, A3)
    for i in range(n):
        rng = _rng(seed, 10_000 + i)
        f = fams[i % 3]
        e1, e2 = f.basis_pair
        center = f.target()
        kind = (i // 3) % 4
        if kind in (0, 1):
            r = rng.uniform(0, 0.5) if kind == 0 else rng.uniform(0, 1.0)
            c = r * np.exp(1j * rng.uniform(0, 2 * np.pi))
            w = center + c * np.outer(e1, e2.conj()) + np.conj(c) * np.outer(e2, e1.conj())
        elif kind == 2:
            w = qlin.random_hermitian_unit_trace(4, rng)
        else:
            eps = rng.uniform(0.01, 0.2)
            w = (1 - eps) * center + eps * qlin.random_density(4, rng)
        out.append(w)
    return out


def membership_oracle_agreement(seed: int = 0, n: int = 500, grid: int = 720, threshold: float = 1e-8) -> dict:
    disagreements = 0
    members = 0
    hulls = {f.label: oracles.HullOracle(oracles.phase_grid_projectors(*f.basis_pair, grid)) for f in (A1, A2, A3)}
    for w in membership_oracle_candidates(seed, n):
        for f in (A1, A2, A3):
            analytic = families.membership(f, w)
            brute = hulls[f.label].residual(w) <= threshold
            members += analytic
            disagreements += analytic != brute
    return {"candidates": n, "comparisons": 3 * n, "members": members, "disagreements": disagreements}


def _intersection_record(f, g) -> dict:
    inter = families.pairwise_intersection(f, g)
    return {
        "check": f"pairwise_intersection_{f.label}_{g.label}",
        "pair": [f.label, g.label],
        "rank": inter.rank,
        "dimension": inter.dimension,
        "members": inter.members,
    }


def families_suite(tol: Tolerances, seed: int = 0) -> list[dict]:
    out = []
    agree = family_omega_agreement(seed)
    out.append({
        "check": "omega_constraint_matches_membership",
        **agree,
        "passed": agree["disagreements"] == 0 and agree["own_rejected"] == 0,
    })

    grid = {f.label: int(np.sum(families.membership(f, families.family_projectors(f, 256)))) for f in (A1, A2, A3)}
    out.append({"check": "phase_grid_members", "counts": grid, "passed": all(v == 256 for v in grid.values())})

    rec = _intersection_record(A1, A2)
    only = rec["members"][0] if len(rec["members"]) == 1 else None
    rec["passed"] = bool(
        rec["rank"] == 16 and only is not None and qlin.trace_distance(only, qlin.SINGLET) <= tol.state_equality
    )
    rec["claim"] = "a1-a2-single-common-solution"
    out.append(rec)

    for f, g, third in ((A2, A3, A1), (A1, A3, A2)):
        rec = _intersection_record(f, g)
        rec["passed"] = bool(
            rec["rank"] == 16 and len(rec["members"]) == 1 and not families.membership(third, rec["members"][0])
        )
        out.append(rec)

    self_inter = families.pairwise_intersection(A1, A1)
    out.append({
        "check": "pairwise_intersection_A1_A1",
        "pair": ["A1", "A1"],
        "rank": self_inter.rank,
        "dimension": self_inter.dimension,
        "passed": self_inter.dimension == 2,
    })

    cert = families.triple_intersection_empty()
    out.append({
        "check": "triple_intersection_empty",
        "empty": cert.empty,
        "witness_gap": cert.witness_gap,
        "grid_points_checked": cert.grid_points_checked,
        "counterexamples": cert.counterexamples,
        "relaxed_control_nonempty": cert.control_nonempty,
        "passed": bool(
            cert.empty and abs(cert.witness_gap - 2) <= tol.invariant and cert.counterexamples == 0
            and cert.control_nonempty
        ),
        "claim": "triple-intersection-empty",
    })

    sig = families.correlation_signature(A3, qlin.SINGLET)
    out.append({
        "check": "singlet_outside_A3",
        "y_correlation": sig.correlation,
        "passed": not families.membership(A3, qlin.SINGLET),
        "claim": "singlet-outside-A3",
    })

    orc = membership_oracle_agreement(seed)
    out.append({"check": "membership_oracle_agreement", **orc, "passed": orc["disagreements"] == 0})
    return out


# popt -----------------------------------------------------------------------

def popt_suite(tol: Tolerances, seed: int = 0) -> list[dict]:
    s = popt.build_S()
    eig = qlin.eigenvalues(s)
    corr = {a: qlin.pauli_correlation(s, a, a) for a in "zxy"}
    res = popt.is_popt(s, floor=tol.popt_floor, seed=seed)
    gm = {f.label: popt.generalized_membership(f, s, floor=tol.popt_floor) for f in (A1, A2, A3)}
    s_report = popt.scenario_consistency_report(s)
    singlet_report = popt.scenario_consistency_report(qlin.SINGLET)
    return [
        {
            "check": "S_spectrum",
            "eigenvalues": eig,
            "passed": bool(np.abs(eig - np.array([-0.5, 0.5, 0.5, 0.5])).max() <= tol.invariant),
            "claim": "S-not-a-quantum-state",
        },
        {
            "check": "S_correlations",
            "correlations": corr,
            "y_outcomes": "correlated" if corr["y"] > 0 else "anti-correlated",
            "passed": abs(corr["z"] + 1) <= 1e-12 and abs(corr["x"] + 1) <= 1e-12 and abs(corr["y"] - 1) <= 1e-12,
            "claim": "S-correlations",
        },
        {
            "check": "S_is_popt",
            "min_product_value": res.min_product_value,
            "argmin_angles": list(res.angles),
            "gradient_norm": res.gradient_norm,
            "passed": bool(res.popt and tol.popt_floor <= res.min_product_value <= 1e-6),
            "claim": "S-is-popt",
        },
        {
            "check": "S_generalized_membership",
            "families": gm,
            "passed": all(gm.values()),
            "claim": "S-common-solution",
        },
        {
            "check": "S_scenario_consistency",
            "scenario_consistency": [asdict(r) for r in s_report],
            "passed": all(r.passed for r in s_report),
        },
        {
            "check": "singlet_scenario_consistency",
            "scenario_consistency": [asdict(r) for r in singlet_report],
            "passed": [r.passed for r in singlet_report] == [True, True, False],
        },
    ]


SUITES = {
    "qlin": qlin_suite,
    "gates": gates_suite,
    "steering": steering_suite,
    "timeorder": timeorder_suite,
    "families": families_suite,
    "popt": popt_suite,
}

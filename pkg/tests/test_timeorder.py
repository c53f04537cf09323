import numpy as np
import pytest

from causal_gates import gates, qlin, suites, timeorder
from causal_gates.timeorder import Scenario

KET_00 = np.kron(qlin.KET_0, qlin.KET_0)


def bell_mixture(pairs):
    return 0.5 * sum(qlin.projector(np.kron(a, b)) for a, b in pairs)


ORDER_AB = {
    "z": bell_mixture([(qlin.KET_0, qlin.KET_1), (qlin.KET_1, qlin.KET_0)]),
    "x": bell_mixture([(qlin.KET_X, qlin.KET_XBAR), (qlin.KET_XBAR, qlin.KET_X)]),
    "y": bell_mixture([(qlin.KET_Y, qlin.KET_Y), (qlin.KET_YBAR, qlin.KET_YBAR)]),
}


@pytest.mark.parametrize("axis", ["z", "x", "y"])
def test_singlet_order_ab_final_states(axis):
    out = timeorder.run_order(timeorder.theorem1_scenario(axis), "AB")
    assert qlin.trace_distance(out, ORDER_AB[axis]) <= 1e-10


def test_order_ba_needs_extension_rule():
    s = timeorder.theorem1_scenario("z")
    with pytest.raises(timeorder.MissingExtensionError):
        timeorder.run_order(s, "BA")
    with pytest.raises(timeorder.MissingExtensionError):
        timeorder.classify(s)


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario(qlin.SINGLET, gates.Conjugation(), gates.Conjugation())
    with pytest.raises(ValueError):
        Scenario(qlin.SINGLET, gates.Unitary(np.eye(4)), gates.Conjugation())
    with pytest.raises(ValueError):
        Scenario(np.diag([1.5, -0.5, 0, 0]), gates.pauli_measurement("z"), gates.Conjugation())


def test_kraus_on_singlet_is_compliant():
    rng = np.random.default_rng(1)
    s = Scenario(
        qlin.SINGLET,
        gates.Kraus(tuple(qlin.random_kraus(2, rng))),
        gates.Kraus(tuple(qlin.random_kraus(3, rng))),
    )
    v = timeorder.classify(s)
    assert v.kind == "compliant"
    assert v.joint_distance <= 1e-10


def test_conjugation_on_product_state_needs_no_rule():
    rho = qlin.tensor(qlin.projector(qlin.KET_X), qlin.projector(qlin.KET_Y))
    s = Scenario(rho, gates.pauli_measurement("z"), gates.Conjugation())
    v = timeorder.classify(s)
    assert v.kind == "compliant"
    expected = qlin.tensor(qlin.MAXIMALLY_MIXED_2, qlin.projector(qlin.KET_YBAR))
    assert qlin.trace_distance(timeorder.run_order(s, "BA"), expected) <= 1e-12


def test_scenario_3_global_conjugation_is_violation_b_without_signaling():
    s = timeorder.theorem1_scenario("y", timeorder.GLOBAL_CONJUGATION)
    v = timeorder.classify(s)
    assert v.kind == "violation_b"
    assert v.joint_distance == pytest.approx(1.0, abs=1e-10)
    assert max(v.marginal_distance_A, v.marginal_distance_B) <= 1e-10
    assert not timeorder.rc_cross_check(s).signals


@pytest.mark.parametrize("axis", ["z", "x"])
def test_global_conjugation_is_compliant_for_real_bases(axis):
    s = timeorder.theorem1_scenario(axis, timeorder.GLOBAL_CONJUGATION)
    assert timeorder.classify(s).kind == "compliant"


def test_identity_on_joint_under_scenario_3_is_violation_b():
    s = timeorder.theorem1_scenario("y", timeorder.IDENTITY_ON_JOINT)
    v = timeorder.classify(s)
    assert v.kind == "violation_b"
    # order BA keeps the singlet's y anti-correlation
    ba = timeorder.run_order(s, "BA")
    assert qlin.pauli_correlation(ba, "y", "y") == pytest.approx(-1.0)
    assert not timeorder.rc_cross_check(s).signals


def test_table_rule_collapsing_singlet_signals():
    rule = timeorder.table_rule("collapse", [(qlin.SINGLET, qlin.projector(KET_00))])
    s = timeorder.theorem1_scenario("z", rule)
    v = timeorder.classify(s)
    assert v.kind == "violation_a"
    assert v.marginal_distance_A == pytest.approx(0.5)
    x = timeorder.rc_cross_check(s)
    assert x.signals
    assert x.bob_to_alice == pytest.approx(0.5)


def test_table_rule_outside_table_raises():
    rule = timeorder.table_rule("collapse", [(qlin.SINGLET, qlin.projector(KET_00))])
    with pytest.raises(timeorder.MissingExtensionError):
        rule(qlin.projector(qlin.PHI_PLUS))


def test_extension_rule_output_validated():
    bad = timeorder.ExtensionRule("scale", lambda rho: 2 * rho)
    with pytest.raises(ValueError):
        bad(qlin.SINGLET)


def test_antiunitary_dressing_after_rule():
    u = qlin.SIGMA_X
    s = Scenario(qlin.SINGLET, gates.pauli_measurement("z"), gates.AntiUnitary(u), timeorder.GLOBAL_CONJUGATION)
    big = qlin.embed(u, "B")
    expected_ba = gates.nonselective(gates.pauli_measurement("z"), big @ qlin.SINGLET @ big.conj().T, "A")
    assert qlin.trace_distance(timeorder.run_order(s, "BA"), expected_ba) <= 1e-12
    assert timeorder.classify(s).kind == "compliant"


def test_kraus_scenario_sweep_all_compliant():
    kinds = set()
    worst = 0.0
    for i in range(1000):
        v = timeorder.classify(suites.random_kraus_scenario(np.random.default_rng([3, i])))
        kinds.add(v.kind)
        worst = max(worst, v.joint_distance)
    assert kinds == {"compliant"}
    assert worst <= 1e-10


def test_omega_constraint_examples():
    omega = timeorder.omega_constraint(timeorder.theorem1_scenario("z"))
    assert omega(qlin.SINGLET)
    assert omega(ORDER_AB["z"])
    assert not omega(qlin.MAXIMALLY_MIXED_4)
    assert not omega(qlin.projector(qlin.PHI_PLUS))
    report = omega.check(qlin.partial_transpose(qlin.SINGLET, "B"))
    assert report == {"accepted": True, "positive": False}


def test_omega_requires_measurement():
    s = Scenario(qlin.SINGLET, gates.Unitary(qlin.SIGMA_X), gates.Conjugation())
    with pytest.raises(ValueError):
        timeorder.omega_constraint(s)


def test_omega_accepts_order_ba_outputs_of_compliant_scenarios():
    for i in range(100):
        rng = np.random.default_rng([4, i])
        u = qlin.random_unitary(2, rng)
        s = Scenario(
            qlin.random_density(4, rng),
            gates.ProjectiveMeasurement((u[:, 0], u[:, 1])),
            gates.Kraus(tuple(qlin.random_kraus(2, rng))),
        )
        assert timeorder.classify(s).kind == "compliant"
        after_bob = gates.apply_channel(s.bob_op, s.initial, "B")
        assert timeorder.omega_constraint(s)(after_bob)


def test_rc_cross_check_for_theorem_scenarios():
    for s in timeorder.theorem1_scenarios():
        x = timeorder.rc_cross_check(s)
        assert not x.signals
        assert x.bob_to_alice is None
        assert x.ensemble_distance <= 1e-12


def test_is_product():
    assert timeorder.is_product(qlin.tensor(qlin.projector(qlin.KET_X), qlin.MAXIMALLY_MIXED_2))
    assert not timeorder.is_product(qlin.SINGLET)

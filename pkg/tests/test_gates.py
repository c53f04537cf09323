import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causal_gates import gates, qlin
from causal_gates.gates import AntiUnitary, Conjugation, Kraus, ProjectiveMeasurement, Unitary

K = Conjugation()
s2 = np.sqrt(2)


@pytest.mark.parametrize(
    "amps, image",
    [
        ([1, 0], [1, 0]),
        ([0, 1], [0, 1]),
        ([1 / s2, 1 / s2], [1 / s2, 1 / s2]),
        ([1 / s2, -1 / s2], [1 / s2, -1 / s2]),
        ([1 / s2, 1j / s2], [1 / s2, -1j / s2]),
        ([1 / s2, -1j / s2], [1 / s2, 1j / s2]),
    ],
)
def test_conjugation_basis_table(amps, image):
    out = gates.apply_pure(K, np.array(amps, dtype=complex))
    assert qlin.trace_distance(qlin.projector(out), qlin.projector(np.array(image, dtype=complex))) <= 1e-12


def test_antiunitary_sigma_z_fixes_y():
    out = gates.apply_pure(AntiUnitary(qlin.SIGMA_Z), qlin.KET_Y)
    assert qlin.kets_equal(out, qlin.KET_Y, tol=1e-12)


def test_conjugation_refuses_two_qubit_kets():
    with pytest.raises(gates.GateError):
        gates.apply_pure(K, qlin.PSI_MINUS)
    with pytest.raises(gates.GateError):
        gates.pushforward_density(K, qlin.SINGLET)


def test_pushforward_density_examples():
    np.testing.assert_allclose(
        gates.pushforward_density(K, qlin.projector(qlin.KET_Y)), qlin.projector(qlin.KET_YBAR), atol=1e-15
    )
    np.testing.assert_allclose(gates.pushforward_density(K, qlin.MAXIMALLY_MIXED_2), qlin.MAXIMALLY_MIXED_2)
    # H K|y> = H|ybar>, which is |y> up to phase
    h = AntiUnitary(np.array([[1, 1], [1, -1]]) / s2)
    np.testing.assert_allclose(
        gates.pushforward_density(h, qlin.projector(qlin.KET_Y)), qlin.projector(qlin.KET_Y), atol=1e-15
    )


def test_antiunitary_conjugates_inner_products():
    rng = np.random.default_rng(11)
    g = AntiUnitary(qlin.random_unitary(2, rng))
    for _ in range(20):
        phi, psi = qlin.random_ket(2, rng), qlin.random_ket(2, rng)
        lhs = np.vdot(gates.apply_pure(g, phi), gates.apply_pure(g, psi))
        assert lhs == pytest.approx(np.conj(np.vdot(phi, psi)), abs=1e-12)


def test_pushforward_agrees_with_pure_action_on_1000_kets():
    rng = np.random.default_rng(2024)
    g = AntiUnitary(qlin.random_unitary(2, rng))
    worst = 0.0
    for _ in range(1000):
        psi = qlin.random_ket(2, rng)
        via_ket = qlin.projector(gates.apply_pure(g, psi))
        worst = max(worst, qlin.trace_distance(via_ket, gates.pushforward_density(g, qlin.projector(psi))))
    assert worst <= 1e-12


def test_invalid_gates_raise():
    with pytest.raises(gates.GateError):
        Unitary(np.array([[1, 1], [0, 1]]))
    with pytest.raises(gates.GateError):
        Kraus((np.eye(2) * 0.5,))
    with pytest.raises(gates.GateError):
        ProjectiveMeasurement((qlin.KET_0, qlin.KET_X))


def test_depolarizing_via_pauli_twirl_gives_maximally_mixed():
    ops = tuple(p / 2 for p in (qlin.I2, qlin.SIGMA_X, qlin.SIGMA_Y, qlin.SIGMA_Z))
    twirl = Kraus(ops)
    rng = np.random.default_rng(5)
    for _ in range(10):
        out = gates.apply_channel(twirl, qlin.random_density(2, rng))
        np.testing.assert_allclose(out, qlin.MAXIMALLY_MIXED_2, atol=1e-14)


def test_sigma_y_measurement_on_singlet():
    rec = gates.measure(gates.pauli_measurement("y"), qlin.SINGLET, "A")
    probs = [p for p, _ in rec.outcomes]
    np.testing.assert_allclose(probs, [0.5, 0.5])
    # outcome |y> on A leaves B in |ybar>
    post = rec.outcomes[0][1]
    expected = qlin.projector(np.kron(qlin.KET_Y, qlin.KET_YBAR))
    assert qlin.trace_distance(post, expected) <= 1e-12
    np.testing.assert_allclose(qlin.partial_trace(rec.nonselective, "A"), qlin.MAXIMALLY_MIXED_2, atol=1e-14)


def test_zero_probability_branch_is_reported():
    rho = qlin.projector(np.kron(qlin.KET_0, qlin.KET_0))
    rec = gates.measure(gates.pauli_measurement("z"), rho, "A")
    assert rec.outcomes[1] == (0.0, None)


def test_kraus_operators_of_measurement_are_projectors():
    m = gates.pauli_measurement("x")
    ops = gates.kraus_operators(m)
    np.testing.assert_allclose(sum(ops), np.eye(2), atol=1e-15)
    with pytest.raises(gates.GateError):
        gates.kraus_operators(K)


def test_same_gate():
    assert gates.same_gate(Unitary(qlin.SIGMA_X), Unitary(qlin.SIGMA_X))
    assert not gates.same_gate(Unitary(qlin.SIGMA_X), AntiUnitary(qlin.SIGMA_X))
    assert gates.same_gate(K, Conjugation())


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_local_channel_preserves_remote_marginal(seed):
    rng = np.random.default_rng(seed)
    rho = qlin.random_density(4, rng)
    ch = Kraus(tuple(qlin.random_kraus(3, rng)))
    out = gates.apply_channel(ch, rho, "A")
    np.testing.assert_allclose(qlin.partial_trace(out, "A"), qlin.partial_trace(rho, "A"), atol=1e-12)
    assert np.trace(out).real == pytest.approx(1.0)

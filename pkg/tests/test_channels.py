import numpy as np
import pytest

from qwass import (
    ChannelSpec,
    InputError,
    PAULIS,
    RngStream,
    apply_channel,
    build_cost,
    compose,
    dephasing_channel,
    depolarizing_channel,
    divergence,
    identity_channel,
    pauli_product_set,
    random_state,
    subadditivity_report,
    tensor_product,
    unitary_channel,
    wasserstein_complexity,
)
from helpers import random_channel

S1, S2, S3 = PAULIS
I2 = np.eye(2, dtype=complex)
KET0 = np.diag([1.0, 0.0]).astype(complex)


class TestChannelBasics:
    def test_identity_action(self):
        rho = random_state(3, 3, RngStream(130, 0))
        assert np.max(np.abs(apply_channel(identity_channel(3), rho) - rho)) < 1e-15

    def test_completely_depolarizing_pauli_twirl(self):
        # Kraus {sigma_mu / 2} over all four Paulis sends every state to I/2
        kraus = tuple(0.5 * s for s in (I2,) + PAULIS)
        phi = ChannelSpec(kraus=kraus)
        rho = random_state(2, 2, RngStream(131, 0))
        assert np.max(np.abs(apply_channel(phi, rho) - 0.5 * I2)) < 1e-12

    def test_unitary_action(self):
        u = np.array([[0, 1], [1j, 0]], dtype=complex) / 1.0
        phi = unitary_channel(u)
        rho = random_state(2, 2, RngStream(132, 0))
        assert np.max(np.abs(apply_channel(phi, rho) - u @ rho @ u.conj().T)) < 1e-14

    def test_trace_preservation_enforced(self):
        with pytest.raises(InputError):
            ChannelSpec(kraus=(0.5 * I2,))

    def test_depolarizing_map(self):
        rho = random_state(2, 2, RngStream(133, 0))
        p = 0.37
        got = apply_channel(depolarizing_channel(p), rho)
        assert np.max(np.abs(got - ((1 - p) * rho + p * 0.5 * I2))) < 1e-12

    def test_dephasing_map(self):
        rho = random_state(2, 2, RngStream(134, 0))
        p = 0.25
        got = apply_channel(dephasing_channel(p), rho)
        assert np.max(np.abs(got - ((1 - p) * rho + p * S3 @ rho @ S3))) < 1e-12

    def test_compose_order(self):
        phi = compose(unitary_channel(S1), dephasing_channel(1.0))
        rho = random_state(2, 2, RngStream(135, 0))
        expected = S1 @ (S3 @ rho @ S3) @ S1
        assert np.max(np.abs(apply_channel(phi, rho) - expected)) < 1e-12

    def test_tensor_product_action(self):
        phi = tensor_product(unitary_channel(S1), identity_channel(2))
        rho = random_state(4, 4, RngStream(136, 0))
        big = np.kron(S1, I2)
        assert np.max(np.abs(apply_channel(phi, rho) - big @ rho @ big.conj().T)) < 1e-12

    def test_random_channel_helper_is_cptp(self):
        phi = random_channel(3, 2, RngStream(137, 0))
        total = sum(k.conj().T @ k for k in phi.kraus)
        assert np.max(np.abs(total - np.eye(3))) < 1e-12


class TestWassersteinComplexity:
    def test_identity_is_faithful(self):
        result = wasserstein_complexity(identity_channel(2), PAULIS, restarts=3, maxfev=60)
        assert result.value <= 1e-6
        assert result.restarts_used == 3

    def test_bit_flip_reaches_two(self):
        # candidate rho = |0><0| has divergence 2 under a = {sigma_3}; the
        # basis-state seed plus monotone restarts guarantee at least that.
        result = wasserstein_complexity(unitary_channel(S1), [S3], restarts=4, maxfev=120)
        assert result.value >= 2.0 - 1e-4

    def test_monotone_improvement_over_seeds(self):
        phi = dephasing_channel(0.6)
        obs = [S1, S3]
        cost = build_cost(obs)
        seed_values = []
        for rho in (0.5 * I2, KET0, np.diag([0.0, 1.0]).astype(complex)):
            seed_values.append(divergence(rho, apply_channel(phi, rho), obs, cost=cost).value)
        result = wasserstein_complexity(phi, obs, restarts=3, maxfev=80)
        assert result.value >= max(seed_values) - 1e-9

    def test_argmax_state_consistency(self):
        phi = depolarizing_channel(0.5)
        result = wasserstein_complexity(phi, PAULIS, restarts=2, maxfev=60)
        redo = divergence(result.argmax_state, apply_channel(phi, result.argmax_state), PAULIS).value
        assert redo == pytest.approx(result.value, abs=1e-6)

    def test_extra_seed_states_add_restarts(self):
        rho = random_state(2, 2, RngStream(138, 0))
        result = wasserstein_complexity(
            dephasing_channel(0.3), PAULIS, restarts=2, maxfev=40, seed_states=(rho,)
        )
        assert result.restarts_used == 3

    def test_restart_validation(self):
        with pytest.raises(InputError):
            wasserstein_complexity(identity_channel(2), PAULIS, restarts=0)


class TestSubadditivity:
    def test_identity_pair(self):
        report = subadditivity_report(identity_channel(2), identity_channel(2), PAULIS,
                                      restarts=2, maxfev=40)
        assert abs(report.slack) <= 1e-6
        assert not report.warning

    def test_inverse_unitary_pair(self):
        theta = 0.7
        u = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]], dtype=complex)
        report = subadditivity_report(unitary_channel(u), unitary_channel(u.conj().T), PAULIS,
                                      restarts=3, maxfev=100)
        # the composition is the identity up to float rounding; the divergence
        # scales like the square root of the perturbation, so "zero" means
        # a few 1e-5 here
        assert report.complexity_composed <= 1e-4
        assert report.slack == pytest.approx(report.complexity_first + report.complexity_second,
                                             abs=1e-4)
        assert report.slack >= 0

    def test_random_pairs_nonnegative_slack(self):
        for k in range(4):
            phi1 = random_channel(2, 2, RngStream(139, 2 * k))
            phi2 = random_channel(2, 2, RngStream(139, 2 * k + 1))
            report = subadditivity_report(phi1, phi2, PAULIS, restarts=2, maxfev=50,
                                          rng=RngStream(140, k))
            assert report.slack >= -5e-4
            assert report.warning == (report.slack < -5e-4)

    def test_tensor_subadditivity(self):
        # C(phi1 (x) phi2) <= C(phi1 (x) I) + C(I (x) phi2), checked with the
        # same chain seeding the concatenation report uses.
        phi1 = dephasing_channel(0.8)
        phi2 = unitary_channel(S1)
        obs = pauli_product_set(2)
        both = tensor_product(phi1, phi2)
        left = tensor_product(phi1, identity_channel(2))
        right = tensor_product(identity_channel(2), phi2)
        c_both = wasserstein_complexity(both, obs, restarts=2, maxfev=60, rng=RngStream(141, 0))
        c_right = wasserstein_complexity(
            right, obs, restarts=2, maxfev=60, rng=RngStream(141, 1),
            seed_states=(c_both.argmax_state,),
        )
        c_left = wasserstein_complexity(
            left, obs, restarts=2, maxfev=60, rng=RngStream(141, 2),
            seed_states=(apply_channel(right, c_both.argmax_state),),
        )
        assert c_left.value + c_right.value - c_both.value >= -5e-4

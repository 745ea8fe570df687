import numpy as np
import pytest

from qwass import (
    DimensionMismatchError,
    NeitherPureError,
    PAULIS,
    RngStream,
    SolverConfig,
    build_cost,
    kron,
    partial_trace,
    pure_state_distance_sq,
    random_observable,
    random_state,
    self_distance_sq,
    solve_dual,
    solve_primal,
    sqrt_psd,
    symmetric_cost,
    tensor_coupling,
)

S1, S2, S3 = PAULIS
I2 = np.eye(2, dtype=complex)
KET0 = np.diag([1.0, 0.0]).astype(complex)
KET1 = np.diag([0.0, 1.0]).astype(complex)


def _instance(d, k, seed=0):
    rho = random_state(d, d, RngStream(700 + seed, 2 * k))
    omega = random_state(d, d, RngStream(700 + seed, 2 * k + 1))
    obs = [random_observable(d, RngStream(800 + seed, 10 * k + i)) for i in range(3)]
    return rho, omega, build_cost(obs)


class TestSolvePrimal:
    def test_commuting_pure_case(self):
        result = solve_primal(KET0, KET0, build_cost([S3]))
        assert result.squared_distance == pytest.approx(0.0, abs=1e-9)
        assert np.max(np.abs(result.coupling.matrix - tensor_coupling(KET0, KET0))) < 1e-7

    def test_sharp_bloch_pair(self):
        rho = 0.5 * (I2 + 0.5 * S1)
        omega = 0.5 * (I2 + 0.5 * S2)
        result = solve_primal(rho, omega, symmetric_cost())
        assert result.squared_distance == pytest.approx(2 * np.sqrt(2), abs=1e-6)

    def test_maximally_mixed_self(self):
        result = solve_primal(0.5 * I2, 0.5 * I2, symmetric_cost())
        assert result.squared_distance == pytest.approx(0.0, abs=1e-9)
        assert result.status == "optimal"

    def test_marginal_feasibility_and_tensor_bound(self):
        for d in (2, 3, 4):
            for k in range(10):
                rho, omega, cost = _instance(d, k)
                result = solve_primal(rho, omega, cost)
                pi = result.coupling.matrix
                assert np.linalg.norm(partial_trace(pi, "first", (d, d)) - omega) < 1e-7
                assert np.linalg.norm(partial_trace(pi, "second", (d, d)) - rho.T) < 1e-7
                upper = np.trace(tensor_coupling(rho, omega) @ cost.matrix).real
                assert result.squared_distance <= upper + 1e-7

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            solve_primal(np.eye(3) / 3, 0.5 * I2, symmetric_cost())

    def test_value_nonnegative(self):
        rho, omega, cost = _instance(3, 0, seed=5)
        assert solve_primal(rho, omega, cost).squared_distance >= 0.0


class TestSolveDual:
    def test_weak_duality(self):
        for d in (2, 3, 4):
            for k in range(12):
                rho, omega, cost = _instance(d, k, seed=9)
                primal = solve_primal(rho, omega, cost)
                dual = solve_dual(rho, omega, cost)
                assert dual.squared_distance <= primal.squared_distance + 1e-7

    def test_certificates_are_feasible(self):
        rho, omega, cost = _instance(3, 1, seed=9)
        dual = solve_dual(rho, omega, cost)
        cert_x, cert_y = dual.certificates
        d = cost.dim
        slack = cost.matrix - kron(cert_y, np.eye(d)) - kron(np.eye(d), cert_x.T)
        assert np.linalg.eigvalsh(slack)[0] > -1e-7
        value = np.trace(cert_x @ rho).real + np.trace(cert_y @ omega).real
        assert value == pytest.approx(dual.squared_distance, abs=1e-6)

    def test_bloch_certificate_value(self):
        # The 4|b_omega - b_rho| bound comes from the feasible pair
        # (Y, X) = (X_p, -X_p) with X_p = 4 (b_omega - b_rho) . sigma / |...|.
        rho = 0.5 * (I2 + 0.5 * S1)
        omega = 0.5 * (I2 + 0.5 * S2)
        delta = np.array([-0.5, 0.5, 0.0])
        x_p = 4.0 * sum(c * s for c, s in zip(delta / np.linalg.norm(delta), PAULIS))
        cs = symmetric_cost().matrix
        slack = cs - (kron(x_p, I2) - kron(I2, x_p.T))
        assert np.linalg.eigvalsh(slack)[0] > -1e-9
        certified = np.trace((omega - rho) @ x_p).real
        assert certified == pytest.approx(2 * np.sqrt(2), abs=1e-12)
        dual = solve_dual(rho, omega, symmetric_cost())
        assert dual.squared_distance >= certified - 1e-6

    def test_zero_certificate_always_feasible(self):
        rho, omega, cost = _instance(2, 3, seed=9)
        # C is PSD, so (X, Y) = (0, 0) is feasible with value 0
        assert np.linalg.eigvalsh(cost.matrix)[0] >= -1e-9
        assert solve_dual(rho, rho, cost).squared_distance >= -1e-9


class TestPureStateFormula:
    def test_orthogonal_pure_pair(self):
        assert pure_state_distance_sq(KET0, KET1, [S3]) == pytest.approx(4.0)

    def test_pure_eigenstate_self(self):
        assert pure_state_distance_sq(KET0, KET0, [S3]) == pytest.approx(0.0, abs=1e-12)

    def test_agreement_with_sdp(self):
        for d in (2, 3, 4):
            for k in range(12):
                rho = random_state(d, 1, RngStream(900, 2 * k + d))
                omega = random_state(d, d, RngStream(901, 2 * k + d))
                obs = [random_observable(d, RngStream(902, 10 * k + d + i)) for i in range(3)]
                cost = build_cost(obs)
                sdp_value = solve_primal(rho, omega, cost).squared_distance
                assert sdp_value == pytest.approx(pure_state_distance_sq(rho, omega, obs), abs=1e-6)

    def test_rejects_two_mixed_states(self):
        with pytest.raises(NeitherPureError):
            pure_state_distance_sq(0.5 * I2, 0.5 * I2, [S3])


class TestSelfDistance:
    def test_maximally_mixed(self):
        assert self_distance_sq(0.5 * I2, PAULIS) == pytest.approx(0.0, abs=1e-15)

    def test_pure_state_with_all_paulis(self):
        assert self_distance_sq(KET0, PAULIS) == pytest.approx(4.0)

    def test_agreement_with_sdp(self):
        for d in (2, 3, 4):
            for k in range(12):
                rho = random_state(d, d, RngStream(910, 2 * k + d))
                obs = [random_observable(d, RngStream(911, 10 * k + d + i)) for i in range(3)]
                cost = build_cost(obs)
                sdp_value = solve_primal(rho, rho, cost).squared_distance
                assert sdp_value == pytest.approx(self_distance_sq(rho, obs), abs=1e-6)

    def test_trace_form_equivalence(self):
        rho = random_state(3, 3, RngStream(912, 0))
        obs = [random_observable(3, RngStream(913, i)) for i in range(2)]
        root = sqrt_psd(rho)
        trace_form = sum(
            2.0 * np.trace(a @ rho @ a).real - 2.0 * np.trace(root @ a @ root @ a).real for a in obs
        )
        assert self_distance_sq(rho, obs) == pytest.approx(trace_form, abs=1e-10)


class TestInvariants:
    def test_concavity_bound(self):
        for d in (2, 3):
            for k in range(8):
                rho, omega, cost = _instance(d, k, seed=20)
                obs = cost.observables
                cross = solve_primal(rho, omega, cost).squared_distance
                bound = 0.5 * (self_distance_sq(rho, obs) + self_distance_sq(omega, obs))
                assert cross - bound >= -1e-7

    def test_cauchy_schwarz_trace_bound(self):
        gen = np.random.default_rng(33)
        for d in (2, 3, 4):
            for k in range(20):
                x = random_state(d, d, RngStream(930, 2 * k + d))
                a = random_observable(d, RngStream(931, 2 * k + d))
                root = sqrt_psd(x)
                lhs = np.trace(root @ a @ root @ a).real
                rhs = np.trace(x @ a).real ** 2
                assert lhs >= rhs - 1e-9

    def test_purification_optimality(self):
        rho = random_state(3, 3, RngStream(940, 0))
        obs = [random_observable(3, RngStream(941, i)) for i in range(3)]
        cost = build_cost(obs)
        assert solve_primal(rho, rho, cost).squared_distance == pytest.approx(
            self_distance_sq(rho, obs), abs=1e-6
        )


class TestSolverConfig:
    def test_rejects_nonpositive_tolerances(self):
        with pytest.raises(ValueError):
            SolverConfig(gap_tol=0.0)

    def test_result_gap_below_tolerance(self):
        rho, omega, cost = _instance(3, 2, seed=21)
        cfg = SolverConfig(gap_tol=1e-8, feas_tol=1e-8)
        result = solve_primal(rho, omega, cost, cfg)
        assert result.status == "optimal"
        scale = 1 + abs(result.squared_distance)
        assert result.duality_gap <= 1e-7 * scale

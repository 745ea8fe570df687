import numpy as np
import pytest

from qwass import (
    ConcavityViolationError,
    GapRecord,
    PAULIS,
    RngStream,
    SelfDistanceCache,
    build_cost,
    divergence,
    random_observable,
    random_state,
    self_distance_sq,
    solve_primal,
    triangle_gap,
)
from qwass.divergence import GAP_CSV_COLUMNS, gap_record_row

# the package re-exports the divergence *function* under the module's name,
# so reach the module itself through importlib
import importlib

divergence_module = importlib.import_module("qwass.divergence")

S1, S2, S3 = PAULIS
I2 = np.eye(2, dtype=complex)
KET0 = np.diag([1.0, 0.0]).astype(complex)
KET1 = np.diag([0.0, 1.0]).astype(complex)

# d^2 = 2 sqrt(2) - (4 - 2 sqrt(3)) for the quarter-Bloch pair under the
# symmetric cost: sharp transport value minus the two equal self-distances.
QUARTER_PAIR_DIVERGENCE = float(np.sqrt(2 * np.sqrt(2) - 4 + 2 * np.sqrt(3)))


class TestDivergence:
    def test_self_divergence_vanishes(self):
        for k in range(10):
            rho = random_state(3, 3, RngStream(50, k))
            obs = [random_observable(3, RngStream(51, 10 * k + i)) for i in range(3)]
            assert divergence(rho, rho, obs).value <= 1e-6

    def test_orthogonal_pure_pair(self):
        value = divergence(KET0, KET1, [S3])
        assert value.value == pytest.approx(2.0, abs=1e-6)
        assert value.components[1] == pytest.approx(0.0, abs=1e-9)
        assert value.components[2] == pytest.approx(0.0, abs=1e-9)

    def test_quarter_bloch_pair_closed_form(self):
        rho = 0.5 * (I2 + 0.5 * S1)
        omega = 0.5 * (I2 + 0.5 * S2)
        value = divergence(rho, omega, PAULIS)
        assert value.value == pytest.approx(QUARTER_PAIR_DIVERGENCE, abs=2e-6)
        # and the components recompose through an independent route
        cost = build_cost(PAULIS)
        cross = solve_primal(rho, omega, cost).squared_distance
        assert value.raw_squared == pytest.approx(
            cross - 0.5 * (self_distance_sq(rho, PAULIS) + self_distance_sq(omega, PAULIS)),
            abs=1e-9,
        )

    def test_symmetry(self):
        for d in (2, 3):
            for k in range(8):
                rho = random_state(d, d, RngStream(52, 2 * k + d))
                omega = random_state(d, d, RngStream(53, 2 * k + d))
                obs = [random_observable(d, RngStream(54, 10 * k + d + i)) for i in range(3)]
                forward = divergence(rho, omega, obs).value
                backward = divergence(omega, rho, obs).value
                assert forward == pytest.approx(backward, abs=1e-6)

    def test_raw_negativity_raises(self, monkeypatch):
        class FakeResult:
            squared_distance = 0.0

        monkeypatch.setattr(divergence_module, "solve_primal", lambda *a, **k: FakeResult())
        rho = random_state(2, 2, RngStream(55, 0))
        omega = random_state(2, 2, RngStream(55, 1))
        with pytest.raises(ConcavityViolationError):
            divergence(rho, omega, PAULIS)

    def test_value_is_clamped_square_root(self):
        rho = random_state(2, 2, RngStream(56, 0))
        value = divergence(rho, rho, PAULIS)
        assert value.value == np.sqrt(max(value.raw_squared, 0.0))


class TestTriangleGap:
    def test_fully_degenerate(self):
        rho = random_state(2, 2, RngStream(57, 0))
        obs = [random_observable(2, RngStream(58, i)) for i in range(3)]
        record = triangle_gap(rho, rho, rho, obs)
        assert abs(record.gap) <= 2e-6

    def test_endpoint_degenerate(self):
        rho = random_state(2, 2, RngStream(59, 0))
        tau = random_state(2, 2, RngStream(59, 1))
        obs = [random_observable(2, RngStream(60, i)) for i in range(3)]
        record = triangle_gap(rho, rho, tau, obs)
        assert abs(record.gap) <= 2e-6

    def test_random_wishart_triplet_positive(self):
        rho = random_state(3, 3, RngStream(61, 0))
        omega = random_state(3, 3, RngStream(61, 1))
        tau = random_state(3, 3, RngStream(61, 2))
        obs = [random_observable(3, RngStream(62, i)) for i in range(3)]
        record = triangle_gap(rho, omega, tau, obs, dim=3, seed=61, sampler_tag="wishart")
        assert record.gap > 0
        assert record.gap == pytest.approx(
            record.d_rho_omega + record.d_omega_tau - record.d_rho_tau
        )

    def test_record_metadata(self):
        rho = random_state(2, 2, RngStream(63, 0))
        obs = [random_observable(2, RngStream(64, i)) for i in range(2)]
        record = triangle_gap(rho, rho, rho, obs, seed=7, sampler_tag="demo")
        assert record.dim == 2
        assert record.seed == 7
        assert record.sampler_tag == "demo"


class TestCsvLayout:
    def test_columns(self):
        assert GAP_CSV_COLUMNS == (
            "dim", "seed", "sampler-tag", "d_rho_omega", "d_omega_tau", "d_rho_tau", "gap",
        )

    def test_row_matches_columns(self):
        record = GapRecord(0.1, 0.2, 0.25, 0.05, dim=2, seed=3, sampler_tag="t")
        row = gap_record_row(record)
        assert row == [2, 3, "t", 0.1, 0.2, 0.25, 0.05]


class TestSelfDistanceCache:
    def test_reuse(self):
        cache = SelfDistanceCache()
        rho = random_state(2, 2, RngStream(65, 0))
        omega = random_state(2, 2, RngStream(65, 1))
        divergence(rho, omega, PAULIS, cache=cache)
        assert len(cache) == 2
        divergence(rho, omega, PAULIS, cache=cache)
        assert len(cache) == 2

    def test_distinguishes_observable_sets(self):
        cache = SelfDistanceCache()
        rho = random_state(2, 2, RngStream(66, 0))
        first = cache.self_distance(rho, [S3])
        second = cache.self_distance(rho, PAULIS)
        assert len(cache) == 2
        assert first != second

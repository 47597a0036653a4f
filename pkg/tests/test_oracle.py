import numpy as np
import pytest

from kramers_slip import (
    OracleConfig,
    bc_residual,
    extract_slip,
    solve_halfspace,
)
from kramers_slip.errors import FitUnstable


@pytest.fixture(scope="module")
def sol_q1():
    return solve_halfspace(OracleConfig(q=1.0))


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError, match=r"q must lie in \(0,1\]"):
            OracleConfig(q=0.0)
        with pytest.raises(ValueError):
            OracleConfig(q=1.0, n_mu=2)
        with pytest.raises(ValueError):
            OracleConfig(q=1.0, x_max=5.0)


class TestFullAccommodation:
    def test_slip_value(self, sol_q1):
        assert sol_q1.U_sl_extracted == pytest.approx(0.5819, abs=5e-4)

    def test_wall_velocity(self, sol_q1):
        # closed-form wall value 1/sqrt(5) for the diffuse wall
        assert float(sol_q1.U_x[0]) == pytest.approx(1 / np.sqrt(5), abs=5e-4)

    def test_boundary_condition_exact(self, sol_q1):
        assert bc_residual(sol_q1) < 1e-12

    def test_extract_matches_stored(self, sol_q1):
        assert extract_slip(sol_q1) == pytest.approx(
            sol_q1.U_sl_extracted, abs=1e-12
        )

    def test_profile_monotone(self, sol_q1):
        assert np.all(np.diff(sol_q1.U_x) > 0)

    def test_far_field_linear(self, sol_q1):
        i = np.searchsorted(sol_q1.x_nodes, 20.0)
        resid = sol_q1.U_x[i] - (sol_q1.U_sl_extracted + sol_q1.x_nodes[i])
        assert abs(resid) < 1e-3


class TestPartialAccommodation:
    @pytest.mark.parametrize("q,expected", [(0.5, 1.67520), (0.25, 3.82246)])
    def test_slip(self, q, expected):
        sol = solve_halfspace(OracleConfig(q=q))
        assert sol.U_sl_extracted == pytest.approx(expected, abs=2e-3)
        assert bc_residual(sol) < 1e-12

    def test_specular_limit_grows(self):
        s1 = solve_halfspace(OracleConfig(q=1.0)).U_sl_extracted
        s2 = solve_halfspace(OracleConfig(q=0.5)).U_sl_extracted
        assert s2 > s1


class TestDiagnostics:
    def test_fit_window_guard(self, sol_q1):
        # a deliberately quadratic field has slope in the window
        from dataclasses import replace

        bad = replace(sol_q1, U_x=sol_q1.U_x + 0.01 * sol_q1.x_nodes**2)
        with pytest.raises(FitUnstable):
            extract_slip(bad)

    def test_mu_grid_shape(self, sol_q1):
        n = len(sol_q1.mu_nodes)
        assert n == 64
        assert np.all(np.diff(sol_q1.mu_nodes) > 0)
        assert sol_q1.h_field.shape == (len(sol_q1.x_nodes), n)
        # half-range weights each sum to 1, so the full range sums to 2
        assert sol_q1.mu_weights.sum() == pytest.approx(2.0, abs=1e-13)

    def test_coarse_ordinates_still_converge(self):
        sol = solve_halfspace(OracleConfig(q=1.0, n_mu=8))
        assert sol.U_sl_extracted == pytest.approx(0.5819, abs=5e-3)

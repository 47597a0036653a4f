import numpy as np
import pytest

from kramers_slip import (
    InvalidAccommodation,
    KGrid,
    SeriesCoefficients,
    SpectralDensity,
    V0_EXACT,
    build_E0,
    default_grid,
    semi_infinite_integral,
    slip_coefficient,
    slip_velocity,
    solve_series,
    solve_slip,
)


class TestGrid:
    def test_default_grid_invariants(self):
        g = default_grid()
        assert g.nodes[0] == 0.0
        assert np.all(np.diff(g.nodes) > 0)
        assert np.all(g.weights > 0)
        assert len(g.nodes) >= 64
        assert g.k_max == pytest.approx(200.0)

    def test_grid_integrates_polynomial(self):
        g = default_grid()
        # exact on smooth integrands over [0, k_max]
        val = float(g.weights @ np.exp(-g.nodes))
        assert val == pytest.approx(1.0 - np.exp(-g.k_max), abs=1e-9)

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            KGrid(nodes=np.array([0.5, 1.0]), weights=np.array([1.0, 1.0]))


class TestZerothDensity:
    def test_value_at_origin(self):
        E0 = build_E0(default_grid())
        assert float(E0(0.0)[0]) == pytest.approx(-2.0 / 21.0, abs=1e-12)

    def test_semi_infinite_integral(self):
        E0 = build_E0(default_grid())
        val, est = semi_infinite_integral(E0)
        assert val == pytest.approx(-0.458610753713, abs=2e-6)
        assert est < 1e-6

    def test_tail_model_signature(self):
        E0 = build_E0(default_grid())
        a, b = E0.tail_model()
        # tail behaves like (a + b ln k)/k^2, negative at large k
        assert a + b * np.log(500.0) < 0
        k = 500.0
        assert E0.extended(np.array([k]))[0] == pytest.approx(
            (a + b * np.log(k)) / k**2, rel=1e-3
        )


class TestSeries:
    def test_frozen_coefficients(self, series3):
        coeffs, _ = series3
        assert coeffs.V[0] == V0_EXACT
        assert coeffs.V[1] == pytest.approx(0.0518031, abs=2e-6)
        assert coeffs.V[2] == pytest.approx(-0.0034272, abs=2e-6)
        assert coeffs.V[3] == pytest.approx(0.0002547, abs=2e-6)

    def test_residuals_small(self, series3):
        coeffs, _ = series3
        assert all(r < 1e-8 for r in coeffs.residuals)

    def test_first_density_at_origin(self, series3):
        _, E = series3
        assert float(E[1](0.0)[0]) == pytest.approx(0.00571719, abs=1e-6)

    def test_density_integrals(self, series3):
        _, E = series3
        i1, _ = semi_infinite_integral(E[1])
        i2, _ = semi_infinite_integral(E[2])
        assert i1 == pytest.approx(0.0380322, abs=1e-6)
        assert i2 == pytest.approx(-0.0029458, abs=1e-6)

    def test_order_bounds(self):
        with pytest.raises(ValueError):
            solve_series(9)
        with pytest.raises(ValueError):
            solve_series(-1)

    def test_json_roundtrip(self, series3):
        coeffs, _ = series3
        again = SeriesCoefficients.from_json(coeffs.to_json())
        assert again == coeffs


class TestSlip:
    def test_q1_ladder(self, series3):
        coeffs, _ = series3
        V = coeffs.V
        partials = np.cumsum(V)
        assert partials[0] == pytest.approx(0.533333, abs=1e-5)
        assert partials[1] == pytest.approx(0.585140, abs=1e-5)
        assert partials[2] == pytest.approx(0.581712, abs=1e-5)
        assert partials[3] == pytest.approx(0.581967, abs=1e-5)

    @pytest.mark.parametrize("q,expected", [(0.5, 1.675234), (0.25, 3.822523)])
    def test_partial_accommodation(self, series3, q, expected):
        coeffs, _ = series3
        assert slip_velocity(q, coeffs) == pytest.approx(expected, abs=2e-5)

    def test_invalid_q(self, series3):
        coeffs, _ = series3
        for q in (0.0, -0.5, 1.5):
            with pytest.raises(InvalidAccommodation, match=r"q must lie in \(0,1\]"):
                slip_velocity(q, coeffs)
            with pytest.raises(InvalidAccommodation):
                slip_coefficient(-5.0, q, coeffs)

    def test_solve_slip_assembly(self, series3):
        coeffs, _ = series3
        sol = solve_slip(1.0, -5.0, order=2)
        assert sol.U_sl_dimensionless == pytest.approx(0.581712, abs=1e-5)
        # at q = 1 the dimensional coefficient is prefactor * U_sl / 2 * (2 - q)
        from kramers_slip import kv_prefactor

        assert sol.K_v == pytest.approx(
            kv_prefactor(-5.0) * 0.5 * sol.U_sl_dimensionless, rel=1e-10
        )
        d = sol.to_dict()
        assert d["order"] == 2
        assert len(d["V"]) == 3

    def test_slip_decreases_with_q(self, series3):
        coeffs, _ = series3
        qs = np.linspace(0.1, 1.0, 10)
        vals = [slip_velocity(float(q), coeffs) for q in qs]
        assert all(b < a for a, b in zip(vals, vals[1:]))

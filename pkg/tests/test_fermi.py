import math

import numpy as np
import pytest

from kramers_slip import ReducedChemicalPotential, fermi_log_moment, kv_prefactor


class TestLogMoments:
    def test_l1_at_zero_analytic(self):
        # int_0^inf t log(1 + e^{-t^2}) dt = pi^2 / 24
        assert fermi_log_moment(1, 0.0) == pytest.approx(
            math.pi**2 / 24.0, abs=1e-11
        )

    def test_classical_limit_ratio(self):
        # for alpha << 0 the moments shrink like e^alpha but the ratio fixes
        l0 = fermi_log_moment(0, -15.0)
        l1 = fermi_log_moment(1, -15.0)
        assert l0 / l1 == pytest.approx(math.sqrt(math.pi), rel=1e-6)

    @pytest.mark.parametrize("alpha", [-10.0, -5.0, 0.0, 5.0, 30.0])
    def test_positive(self, alpha):
        assert fermi_log_moment(0, alpha) > 0
        assert fermi_log_moment(1, alpha) > 0

    def test_monotone_in_alpha(self):
        alphas = np.linspace(-10, 10, 21)
        vals = [fermi_log_moment(1, a) for a in alphas]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_degenerate_scaling(self):
        # strongly degenerate: l1 ~ alpha^2 / 4
        a = 400.0
        assert fermi_log_moment(1, a) == pytest.approx(a * a / 4.0, rel=1e-2)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            fermi_log_moment(2, 0.0)
        with pytest.raises(ValueError):
            fermi_log_moment(0, float("inf"))
        with pytest.raises(ValueError):
            ReducedChemicalPotential(float("nan"))

    def test_wrapper_type_accepted(self):
        direct = fermi_log_moment(0, -3.0)
        wrapped = fermi_log_moment(0, ReducedChemicalPotential(-3.0))
        assert direct == wrapped


class TestPrefactor:
    def test_classical_limit(self):
        assert kv_prefactor(-20.0) == pytest.approx(1.875, abs=1e-6)

    def test_decreases_with_degeneracy(self):
        vals = [kv_prefactor(a) for a in (-5.0, 0.0, 5.0, 20.0)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert all(v > 0 for v in vals)

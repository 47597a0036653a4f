import numpy as np
import pytest
from scipy.integrate import quad

from kramers_slip import kernels
from kramers_slip.errors import NonConvergence


def brute_T(n, k):
    val, _ = quad(
        lambda t: 1.5 * t**n * (1 - t * t) / (1 + k * k * t * t), 0, 1,
        epsabs=1e-13, epsrel=1e-13,
    )
    return val


class TestMomentValues:
    def test_at_zero(self):
        for n in range(9):
            assert kernels.moment_at_zero(n) == pytest.approx(
                3.0 / ((n + 1) * (n + 3)), abs=0
            )

    def test_known_points(self):
        # closed-form spot checks at k = 1
        assert float(kernels.T_array(0, 1.0)[0]) == pytest.approx(
            0.8561944901923448, abs=1e-14
        )
        assert float(kernels.L_array(1.0)[0]) == pytest.approx(
            0.1438055098076552, abs=1e-14
        )

    @pytest.mark.parametrize("n", [0, 1, 2, 3, 4, 5, 6])
    @pytest.mark.parametrize("k", [0.0, 1e-3, 0.01, 0.5, 1.0, 5.0, 50.0, 200.0])
    def test_against_quadrature(self, n, k):
        assert float(kernels.T_array(n, k)[0]) == pytest.approx(
            brute_T(n, k), abs=1e-11
        )

    def test_monotone_decreasing_in_k(self):
        k = np.linspace(0, 30, 200)
        for n in range(5):
            assert np.all(np.diff(kernels.T_array(n, k)) < 0)

    def test_order_bounds(self):
        with pytest.raises(ValueError):
            kernels.T_array(9, 1.0)
        with pytest.raises(ValueError):
            kernels.eval_T(-1, 1.0)


class TestEvalScalars:
    def test_eval_T_error_estimate(self):
        kv = kernels.eval_T(4, 2.0)
        assert kv.est_error < 1e-10
        assert kv.value == pytest.approx(brute_T(4, 2.0), abs=1e-11)

    def test_eval_T_rejects_bad_k(self):
        with pytest.raises(ValueError):
            kernels.eval_T(0, -1.0)
        with pytest.raises(ValueError):
            kernels.eval_T(0, float("nan"))

    def test_eval_J_symmetry(self):
        a = kernels.eval_J(3, 0.7, 2.4).value
        b = kernels.eval_J(3, 2.4, 0.7).value
        assert a == pytest.approx(b, abs=1e-12)

    def test_eval_J_reduces_to_T(self):
        for n in (0, 1, 5):
            assert kernels.eval_J(n, 1.3, 0.0).value == pytest.approx(
                brute_T(n, 1.3), abs=1e-11
            )

    def test_eval_S_zero_at_origin(self):
        assert kernels.eval_S(1.7, 0.0).value == 0.0

    def test_nonconvergence_raised(self):
        spec = kernels.QuadratureSpec(abs_tol=1e-16, rel_tol=1e-16,
                                      max_subdivisions=2)
        with pytest.raises(NonConvergence):
            kernels.eval_J(5, 150.0, 180.0, spec)


class TestVectorizedCoupling:
    def test_J_outer_matches_scalar(self):
        k = np.array([0.3, 2.0, 40.0])
        k1 = np.array([0.0, 1.1, 90.0])
        grid = kernels.J_outer(5, k, k1)
        for i, ki in enumerate(k):
            for j, kj in enumerate(k1):
                assert grid[i, j] == pytest.approx(
                    kernels.eval_J(5, float(ki), float(kj)).value, abs=1e-10
                )

    def test_S_outer_matches_scalar(self):
        k = np.array([0.5, 3.0])
        k1 = np.array([0.8, 12.0])
        grid = kernels.S_outer(k, k1)
        for i, ki in enumerate(k):
            for j, kj in enumerate(k1):
                assert grid[i, j] == pytest.approx(
                    kernels.eval_S(float(ki), float(kj)).value, rel=1e-8
                )


class TestDerivedKernels:
    def test_L_double_zero(self):
        # L ~ 0.2 k^2 near the origin, no cancellation noise
        k = np.array([1e-6, 1e-4])
        L = kernels.L_array(k)
        assert np.allclose(L / k**2, 0.2, rtol=1e-6)

    def test_L_complements_T0(self):
        k = np.linspace(0.1, 100, 50)
        assert np.allclose(
            kernels.L_array(k), 1.0 - kernels.T_array(0, k), atol=1e-12
        )

    def test_phi0_at_zero(self):
        assert float(kernels.phi0_array(0.0)[0]) == pytest.approx(
            -2.0 / 105.0, abs=1e-14
        )

    def test_quadrature_spec_validation(self):
        with pytest.raises(ValueError):
            kernels.QuadratureSpec(abs_tol=0.0)
        with pytest.raises(ValueError):
            kernels.QuadratureSpec(semi_infinite_nodes=4)

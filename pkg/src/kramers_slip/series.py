"""Order-by-order solution of the slip problem in the accommodation series.

The unknown spectral density of the Knudsen-layer velocity is expanded in
powers of the accommodation coefficient q.  Each order n contributes a slip
coefficient V_n (fixed by removing the double pole of the density at k = 0)
and a spectral density E_n(k) on a semi-infinite k-grid.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import InvalidAccommodation, RegularityCheckFailed, TailTooLarge
from .fermi import kv_prefactor
from .kernels import (
    J_outer,
    L_array,
    QuadratureSpec,
    S_outer,
    T_array,
    moment_at_zero,
    phi0_array,
)

V0_EXACT = 8.0 / 15.0

# Extension range for semi-infinite integrals: exact evaluation of the
# densities is carried to K_FAR, and the slowly decaying (a + b ln k)/k**2
# remainder is handled by a fitted two-parameter model.
K_FAR = 2.0e6


@lru_cache(maxsize=8)
def _lobatto(m: int):
    """Gauss-Lobatto nodes/weights on [-1, 1] (endpoints included)."""
    interior = np.polynomial.legendre.Legendre.basis(m - 1).deriv().roots()
    x = np.concatenate([[-1.0], np.real(interior), [1.0]])
    pm = np.polynomial.legendre.Legendre.basis(m - 1)(x)
    w = 2.0 / (m * (m - 1) * pm**2)
    return x, w


def _composite_lobatto(edges: np.ndarray, m: int = 8):
    """Composite Lobatto rule; shared panel endpoints are merged."""
    x, w = _lobatto(m)
    nodes = [np.array([edges[0]])]
    weights = [np.array([0.0])]
    for a, b in zip(edges[:-1], edges[1:]):
        kn = 0.5 * (b - a) * x + 0.5 * (a + b)
        kw = 0.5 * (b - a) * w
        weights[-1][-1] += kw[0]
        nodes.append(kn[1:])
        weights.append(kw[1:])
    return np.concatenate(nodes), np.concatenate(weights)


def _gl_panels(edges: np.ndarray, m: int):
    x, w = np.polynomial.legendre.leggauss(m)
    a = edges[:-1]
    b = edges[1:]
    nodes = (0.5 * (b - a)[:, None] * x[None, :] + 0.5 * (a + b)[:, None]).ravel()
    wts = (0.5 * (b - a)[:, None] * w[None, :]).ravel()
    return nodes, wts


@dataclass(frozen=True)
class KGrid:
    """Quadrature grid for integrals over the spectral variable k."""

    nodes: np.ndarray
    weights: np.ndarray
    k_max: float = 200.0

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if len(nodes) != len(weights) or len(nodes) < 64:
            raise ValueError("grid needs >= 64 matched nodes and weights")
        if nodes[0] != 0.0 or np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must start at 0 and increase strictly")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")


def default_grid(k_max: float = 200.0, dense_until: float = 10.0) -> KGrid:
    """Geometric panels, dense on [0, dense_until], coarser out to k_max."""
    edges = np.concatenate(
        [
            [0.0],
            np.geomspace(0.05, dense_until, 33),
            np.geomspace(dense_until, k_max, 13)[1:],
        ]
    )
    nodes, weights = _composite_lobatto(edges, m=8)
    return KGrid(nodes=nodes, weights=weights, k_max=k_max)


@dataclass(frozen=True)
class SpectralDensity:
    """One order E_n(k), sampled on a KGrid and extendable beyond it.

    `extended` evaluates the same analytic object for k > k_max, where the
    sampled spline is no longer available; inside [0, k_max] calls go through
    a cubic interpolant of the stored samples.
    """

    order: int
    grid: KGrid
    values: np.ndarray
    extended: Callable[[np.ndarray], np.ndarray]
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(values)):
            raise RegularityCheckFailed(
                f"order-{self.order} density has non-finite samples"
            )
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_spline", CubicSpline(self.grid.nodes, values))

    def __call__(self, k) -> np.ndarray:
        k = np.atleast_1d(np.asarray(k, dtype=float))
        out = np.empty_like(k)
        inside = k <= self.grid.k_max
        out[inside] = self._spline(k[inside])
        if np.any(~inside):
            out[~inside] = self.extended(k[~inside])
        return out

    def tail_model(self) -> tuple[float, float]:
        """Fit E(k) ~ (a + b ln k) / k**2 at the grid edge."""
        ks = self.grid.k_max * np.array([1.0, 1.5, 2.0, 3.0])
        f = self.extended(ks) * ks**2
        design = np.vstack([np.ones_like(ks), np.log(ks)]).T
        (a, b), *_ = np.linalg.lstsq(design, f, rcond=None)
        return float(a), float(b)


def semi_infinite_integral(
    density: SpectralDensity,
    weight: Callable[[np.ndarray], np.ndarray] | None = None,
    spec: QuadratureSpec = QuadratureSpec(),
) -> tuple[float, float]:
    """Integrate weight(k) * E(k) over [0, inf).

    Returns (value, tail_error_estimate).  The grid covers [0, k_max]; the
    density's `extended` form is integrated on geometric panels out to K_FAR,
    and the analytic remainder uses the fitted log-over-square tail model.
    """
    grid = density.grid
    w_nodes = np.ones_like(grid.nodes) if weight is None else weight(grid.nodes)
    main = float(grid.weights @ (w_nodes * density.values))

    edges = np.geomspace(grid.k_max, K_FAR, 30)

    def ext_part(m: int) -> float:
        kn, kw = _gl_panels(edges, m)
        wk = np.ones_like(kn) if weight is None else weight(kn)
        return float(kw @ (wk * density.extended(kn)))

    ext = ext_part(12)
    ext_err = abs(ext - ext_part(8))

    a, b = density.tail_model()
    x, w = np.polynomial.legendre.leggauss(32)
    u = 0.5 * (x + 1.0)
    uw = 0.5 * w
    k_rem = K_FAR / u
    model = (a + b * np.log(k_rem)) / k_rem**2
    wk = np.ones_like(k_rem) if weight is None else weight(k_rem)
    remainder = float(np.sum(uw * wk * model * K_FAR / u**2))

    est = ext_err + 0.1 * abs(remainder)
    return main + ext + remainder, est


def build_E0(grid: KGrid, spec: QuadratureSpec = QuadratureSpec()) -> SpectralDensity:
    """Zeroth-order density phi0(k) / T_2(k); finite at k = 0 by construction."""

    def closed(k: np.ndarray) -> np.ndarray:
        return phi0_array(k) / T_array(2, k)

    return SpectralDensity(order=0, grid=grid, values=closed(grid.nodes),
                           extended=closed)


def next_V(E_prev: SpectralDensity, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Slip coefficient fixed by pole removal at the next order."""
    value, tail_est = semi_infinite_integral(
        E_prev, weight=lambda k: T_array(1, k), spec=spec
    )
    if tail_est > 10.0 * spec.abs_tol:
        raise TailTooLarge(
            f"tail uncertainty {tail_est:.2e} exceeds 10*abs_tol in V integral"
        )
    return -value / (np.pi * moment_at_zero(1))


def _transfer(E_prev: SpectralDensity, k: np.ndarray) -> np.ndarray:
    """Apply the regularized order-to-order transfer at arbitrary k >= 0."""
    grid = E_prev.grid
    smat = S_outer(k, grid.nodes)
    integ = smat @ (grid.weights * E_prev.values)
    return integ / (np.pi * T_array(2, k))


def next_E(
    E_prev: SpectralDensity,
    grid: KGrid,
    spec: QuadratureSpec = QuadratureSpec(),
) -> SpectralDensity:
    """Next spectral density via the pole-free transfer kernel."""
    values = _transfer(E_prev, grid.nodes)
    if not np.all(np.isfinite(values)):
        raise RegularityCheckFailed(
            f"transfer from order {E_prev.order} produced non-finite values"
        )
    return SpectralDensity(
        order=E_prev.order + 1,
        grid=grid,
        values=values,
        extended=lambda k: _transfer(E_prev, k),
    )


@dataclass(frozen=True)
class SeriesCoefficients:
    """Slip-series coefficients V_0..V_N with per-order residual diagnostics."""

    V: list[float]
    order: int
    residuals: list[float]

    def to_json(self) -> str:
        return json.dumps(
            {"order": self.order, "V": list(self.V), "residuals": list(self.residuals)}
        )

    @classmethod
    def from_json(cls, text: str) -> "SeriesCoefficients":
        data = json.loads(text)
        return cls(V=list(data["V"]), order=int(data["order"]),
                   residuals=list(data["residuals"]))


def _pole_residual(
    n: int,
    Vn: float,
    E_n: SpectralDensity,
    E_prev: SpectralDensity | None,
    spec: QuadratureSpec,
    eps: float = 1e-3,
) -> float:
    """Residual of the unregularized order-n balance at k = eps."""
    k = np.array([eps])
    lhs = float(E_n(k)[0] * L_array(k)[0]) + Vn * float(T_array(1, k)[0])
    if n == 0:
        return abs(lhs - float(T_array(2, k)[0]))
    coupling, _ = semi_infinite_integral(
        E_prev, weight=lambda kk: J_outer(1, k, kk)[0], spec=spec
    )
    return abs(lhs + coupling / np.pi)


def solve_series(
    order: int,
    grid: KGrid | None = None,
    spec: QuadratureSpec = QuadratureSpec(),
) -> tuple[SeriesCoefficients, list[SpectralDensity]]:
    """Run the series to the requested order.

    V_0 is the exact rational 8/15; each following order alternates the pole
    removal integral (V_n) with the transfer to the next density (E_n).
    """
    if not (0 <= order <= 8):
        raise ValueError("series order must be in [0, 8]")
    if grid is None:
        grid = default_grid()
    densities = [build_E0(grid, spec)]
    V = [V0_EXACT]
    residuals = [_pole_residual(0, V0_EXACT, densities[0], None, spec)]
    for n in range(1, order + 1):
        V.append(next_V(densities[-1], spec))
        densities.append(next_E(densities[-1], grid, spec))
        residuals.append(
            _pole_residual(n, V[-1], densities[-1], densities[-2], spec)
        )
    return SeriesCoefficients(V=V, order=order, residuals=residuals), densities


def slip_velocity(q: float, coeffs: SeriesCoefficients) -> float:
    """Slip velocity per unit shear gradient: (2-q)/q * sum V_n q**n."""
    if not (0.0 < q <= 1.0):
        raise InvalidAccommodation("q must lie in (0,1]")
    powers = q ** np.arange(len(coeffs.V))
    return (2.0 - q) / q * float(np.asarray(coeffs.V) @ powers)


def slip_coefficient(
    alpha: float,
    q: float,
    coeffs: SeriesCoefficients,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Dimensional slip coefficient: statistics prefactor times the q-bracket."""
    if not (0.0 < q <= 1.0):
        raise InvalidAccommodation("q must lie in (0,1]")
    powers = q ** np.arange(len(coeffs.V))
    bracket = float(np.asarray(coeffs.V) @ powers)
    return kv_prefactor(alpha, spec) * (2.0 - q) / 2.0 * bracket


@dataclass(frozen=True)
class SlipSolution:
    """Assembled slip results for one (alpha, q) pair."""

    q: float
    alpha: float
    U_sl_dimensionless: float
    K_v: float
    per_order_terms: list[float]
    coefficients: SeriesCoefficients

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "alpha": self.alpha,
            "U_sl_over_Gv": self.U_sl_dimensionless,
            "K_v": self.K_v,
            "per_order_terms": list(self.per_order_terms),
            "V": list(self.coefficients.V),
            "order": self.coefficients.order,
            "residuals": list(self.coefficients.residuals),
        }


def solve_slip(
    q: float,
    alpha: float,
    order: int = 2,
    grid: KGrid | None = None,
    spec: QuadratureSpec = QuadratureSpec(),
) -> SlipSolution:
    """Convenience wrapper: series + slip velocity + dimensional coefficient."""
    if not (0.0 < q <= 1.0):
        raise InvalidAccommodation("q must lie in (0,1]")
    coeffs, _ = solve_series(order, grid, spec)
    terms = [v * q**n for n, v in enumerate(coeffs.V)]
    return SlipSolution(
        q=q,
        alpha=alpha,
        U_sl_dimensionless=slip_velocity(q, coeffs),
        K_v=slip_coefficient(alpha, q, coeffs, spec),
        per_order_terms=terms,
        coefficients=coeffs,
    )


def spectral_Phi(
    n: int,
    k: float,
    mu: float,
    E_list: Sequence[SpectralDensity],
    coeffs: SeriesCoefficients,
    spec: QuadratureSpec = QuadratureSpec(),
) -> complex:
    """Spectral density of the distribution perturbation at order n."""
    if abs(mu) > 1.0:
        raise ValueError("|mu| must be <= 1")
    if n > coeffs.order:
        raise ValueError("order n exceeds the computed series")
    am = abs(mu)
    En_k = float(E_list[n](k)[0])
    if n == 0:
        numerator = En_k + (am - coeffs.V[0]) * am
    else:
        coupling, _ = semi_infinite_integral(
            E_list[n - 1], weight=lambda kk: 1.0 / (1.0 + kk**2 * mu**2), spec=spec
        )
        numerator = En_k - coeffs.V[n] * am - am / np.pi * coupling
    return numerator / (1.0 + 1j * k * mu)

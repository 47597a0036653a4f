"""Half-space velocity profiles by inverse cosine transforms.

The Knudsen-layer correction at each order is the cosine transform of its
spectral density.  Transforms are done with oscillation-aware panels: every
panel is no wider than a quarter period, and the slowly decaying spectral
tail beyond the grid is integrated through a fitted (a + b ln k)/k**2 model.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import OscillatoryNonConvergence
from .fermi import kv_prefactor
from .kernels import QuadratureSpec
from .series import (
    SeriesCoefficients,
    SpectralDensity,
    semi_infinite_integral,
    slip_velocity,
)

_GLX, _GLW = np.polynomial.legendre.leggauss(10)

_TAIL_TOL = 1e-9
_K_CAP = 1e8


@dataclass(frozen=True)
class ProfileRequest:
    """One profile evaluation: conditions, series order and x positions."""

    q: float
    alpha: float
    order: int
    x_nodes: np.ndarray
    include_components: bool = False

    def __post_init__(self):
        if not (0.0 < self.q <= 1.0):
            raise ValueError("q must lie in (0,1]")
        x = np.asarray(self.x_nodes, dtype=float)
        if np.any(x < 0) or np.any(np.diff(x) < 0):
            raise ValueError("x_nodes must be non-negative and sorted")
        object.__setattr__(self, "x_nodes", x)


@dataclass(frozen=True)
class VelocityProfile:
    x: np.ndarray
    U_over_Gv: np.ndarray
    Uc_components: np.ndarray | None = None


def _panel_integrate(g: Callable[[np.ndarray], np.ndarray],
                     edges: np.ndarray) -> float:
    a, b = edges[:-1], edges[1:]
    nodes = (0.5 * (b - a)[:, None] * _GLX[None, :] + 0.5 * (a + b)[:, None]).ravel()
    wts = (0.5 * (b - a)[:, None] * _GLW[None, :]).ravel()
    return float(wts @ g(nodes))


def _refined_edges(base: np.ndarray, x: float) -> np.ndarray:
    """Subdivide base panels so none exceeds a quarter period of cos(kx)."""
    if x <= 0.0:
        return base
    quarter = 0.5 * np.pi / x
    out = [base[0]]
    for a, b in zip(base[:-1], base[1:]):
        m = max(1, int(np.ceil((b - a) / quarter)))
        out.extend(np.linspace(a, b, m + 1)[1:])
    return np.asarray(out)


def _tail_cosine(a: float, b: float, x: float, K: float) -> float:
    """Integral of (a + b ln k)/k**2 * cos(kx) over [K, inf)."""
    if x == 0.0:
        return a / K + b * (np.log(K) + 1.0) / K

    def model_amp(k):
        return np.abs(a + b * np.log(k)) / k**2

    k_stop = K
    while 2.0 * model_amp(k_stop) / x > _TAIL_TOL:
        k_stop *= 2.0
        if k_stop > _K_CAP:
            raise OscillatoryNonConvergence(
                f"cosine tail did not alternate below {_TAIL_TOL} by k={_K_CAP:.0e}"
            )
    geo = np.geomspace(K, k_stop, 40)
    j0 = np.floor(K * x / np.pi - 0.5)
    zeros = (j0 + 0.5 + np.arange(1, int((k_stop - K) * x / np.pi) + 2)) * np.pi / x
    zeros = zeros[(zeros > K) & (zeros < k_stop)]
    edges = np.unique(np.concatenate([[K], geo, zeros, [k_stop]]))
    return _panel_integrate(
        lambda k: (a + b * np.log(k)) / k**2 * np.cos(x * k), edges
    )


def _base_edges(k_max: float) -> np.ndarray:
    return np.concatenate([[0.0], np.geomspace(0.05, k_max, 60)])


def cosine_transform(density: SpectralDensity, x: float) -> float:
    """One-sided cosine transform int_0^inf cos(kx) E(k) dk."""
    if x == 0.0:
        # no oscillatory cancellation at the wall; the plain semi-infinite
        # rule with its exact extended tail is an order more accurate there
        value, _ = semi_infinite_integral(density)
        return value
    k_max = density.grid.k_max
    edges = _refined_edges(_base_edges(k_max), x)
    main = _panel_integrate(lambda k: density(k) * np.cos(x * k), edges)
    a, b = density.tail_model()
    return main + _tail_cosine(a, b, x, k_max)


def uc_component(
    E_n: SpectralDensity,
    x: float,
    q: float,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Order-n Knudsen-layer velocity per unit gradient at position x."""
    if x < 0:
        raise ValueError("x must be >= 0")
    return (2.0 - q) / np.pi * cosine_transform(E_n, x)


def velocity_profile(
    req: ProfileRequest,
    coeffs: SeriesCoefficients,
    E_list: Sequence[SpectralDensity],
    spec: QuadratureSpec = QuadratureSpec(),
) -> VelocityProfile:
    """Total velocity per unit gradient: slip + linear growth + layer terms."""
    if req.order > min(coeffs.order, len(E_list) - 1):
        raise ValueError("requested order exceeds the computed series")
    slip = slip_velocity(req.q, coeffs)
    comps = np.empty((req.order + 1, len(req.x_nodes)))
    for n in range(req.order + 1):
        for j, x in enumerate(req.x_nodes):
            comps[n, j] = uc_component(E_list[n], float(x), req.q, spec)
    powers = req.q ** np.arange(req.order + 1)
    U = slip + req.x_nodes + powers @ comps
    return VelocityProfile(
        x=req.x_nodes,
        U_over_Gv=U,
        Uc_components=comps if req.include_components else None,
    )


def wall_velocity(
    q: float,
    coeffs: SeriesCoefficients,
    E_list: Sequence[SpectralDensity],
    spec: QuadratureSpec = QuadratureSpec(),
    order: int | None = None,
) -> float:
    """Velocity extrapolated to the wall, truncating the layer sum at `order`."""
    if order is None:
        order = min(coeffs.order, len(E_list) - 1)
    total = slip_velocity(q, coeffs)
    for n in range(order + 1):
        total += q**n * uc_component(E_list[n], 0.0, q, spec)
    return total


def profile_H(
    x: float,
    alpha: float,
    q: float,
    coeffs: SeriesCoefficients,
    E_list: Sequence[SpectralDensity],
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Dimensionless profile factor H(x, alpha) = U(x) per unit gradient."""
    req = ProfileRequest(q=q, alpha=alpha, order=min(coeffs.order, len(E_list) - 1),
                         x_nodes=np.array([x]))
    return float(velocity_profile(req, coeffs, E_list, spec).U_over_Gv[0])


def kv_star(
    x: float,
    alpha: float,
    q: float,
    coeffs: SeriesCoefficients,
    E_list: Sequence[SpectralDensity],
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Dimensional profile factor: statistics prefactor times H(x, alpha)."""
    return kv_prefactor(alpha, spec) * profile_H(x, alpha, q, coeffs, E_list, spec)


def assemble_density(
    E_list: Sequence[SpectralDensity],
    q: float,
    order: int | None = None,
) -> SpectralDensity:
    """Full spectral density 2(2-q) * sum_n q**n E_n as one object."""
    if order is None:
        order = len(E_list) - 1
    grid = E_list[0].grid
    powers = q ** np.arange(order + 1)
    scale = 2.0 * (2.0 - q)
    values = scale * sum(p * E.values for p, E in zip(powers, E_list))

    def extended(k):
        return scale * sum(p * E.extended(k) for p, E in zip(powers, E_list))

    return SpectralDensity(order=order, grid=grid, values=values, extended=extended)


def distribution_slice(
    x: float,
    mu: float,
    E_list: Sequence[SpectralDensity],
    coeffs: SeriesCoefficients,
    q: float,
    order: int | None = None,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Knudsen-layer distribution h_c(x, mu); diagnostic output.

    The spectral numerator splits into the density part, which decays in k
    and is integrated numerically, and per-order constants in k whose
    transforms reduce to wall-emitted exponentials carried only by
    outgoing directions (mu > 0).
    """
    if abs(mu) > 1.0:
        raise ValueError("|mu| must be <= 1")
    if order is None:
        order = min(coeffs.order, len(E_list) - 1)
    density = assemble_density(E_list, q, order)
    k_max = density.grid.k_max

    def integrand(k):
        return (
            (np.cos(k * x) + k * mu * np.sin(k * x))
            * density(k)
            / (1.0 + k**2 * mu**2)
        )

    edges = _refined_edges(_base_edges(k_max), abs(x) + abs(mu))
    main = _panel_integrate(integrand, edges)
    # tail decays like ln(k)/k**4 once the angular weight kicks in
    tail_edges = _refined_edges(np.geomspace(k_max, 100 * k_max, 30), abs(x) + abs(mu))
    a, b = density.tail_model()

    def tail_integrand(k):
        return (
            (np.cos(k * x) + k * mu * np.sin(k * x))
            * (a + b * np.log(k)) / k**2
            / (1.0 + k**2 * mu**2)
        )

    tail = _panel_integrate(tail_integrand, tail_edges)
    part_density = (main + tail) / np.pi

    # constant-in-k numerator terms; their cos/sin transforms cancel exactly
    # for mu < 0 and sum to (pi/mu) e^{-x/mu} for mu > 0
    part_const = 0.0
    if mu > 0.0:
        total_c = 0.0
        for n in range(order + 1):
            if n == 0:
                c = (mu - coeffs.V[0]) * mu
            else:
                coupling, _ = semi_infinite_integral(
                    E_list[n - 1],
                    weight=lambda kk: 1.0 / (1.0 + kk**2 * mu**2),
                    spec=spec,
                )
                c = -coeffs.V[n] * mu - mu / np.pi * coupling
            total_c += q**n * c
        part_const = 2.0 * (2.0 - q) * total_c / mu * np.exp(-x / mu)
    return part_density + part_const

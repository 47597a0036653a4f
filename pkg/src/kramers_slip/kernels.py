"""Kernel moments of the half-space scattering problem.

All kernels are moments of the weight t**n * (1 - t**2) on [0, 1] against
rational factors 1/(1 + k**2 t**2).  They are smooth, positive-decreasing in
k and n, and everything here is pure and thread-safe.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import NonConvergence

MAX_MOMENT_ORDER = 8


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and node budgets for all numerical integration."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    semi_infinite_nodes: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.semi_infinite_nodes < 16:
            raise ValueError("semi_infinite_nodes must be >= 16")


@dataclass(frozen=True)
class KernelValue:
    value: float
    est_error: float


def moment_at_zero(n: int) -> float:
    """Exact value of the n-th kernel moment at k = 0."""
    return 3.0 / ((n + 1) * (n + 3))


def _check_order(n: int) -> None:
    if not (0 <= n <= MAX_MOMENT_ORDER):
        raise ValueError(f"moment order must be in [0, {MAX_MOMENT_ORDER}], got {n}")


# Taylor expansion in k**2 around k = 0; used where the closed forms lose
# digits to cancellation (their k^-4, k^-5 terms amplify roundoff).
_SMALL_K = 0.5
_TAYLOR_TERMS = 40


def _taylor(n: int, k: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(k)
    k2 = k * k
    for m in range(_TAYLOR_TERMS):
        acc = acc + (-k2) ** m * moment_at_zero(n + 2 * m)
    return acc


def _t0_closed(k: np.ndarray) -> np.ndarray:
    out = np.empty_like(k)
    small = k < _SMALL_K
    ks = k[~small]
    out[~small] = 1.5 * ((1.0 + 1.0 / ks**2) * np.arctan(ks) / ks - 1.0 / ks**2)
    out[small] = _taylor(0, k[small])
    return out


def _t1_closed(k: np.ndarray) -> np.ndarray:
    out = np.empty_like(k)
    small = k < _SMALL_K
    ks = k[~small]
    out[~small] = 0.75 * ((1.0 + 1.0 / ks**2) * np.log1p(ks**2) / ks**2 - 1.0 / ks**2)
    out[small] = _taylor(1, k[small])
    return out


def _t2_closed(k: np.ndarray) -> np.ndarray:
    out = np.empty_like(k)
    small = k < _SMALL_K
    ks = k[~small]
    out[~small] = 1.5 * (
        (2.0 / 3.0) / ks**2 + 1.0 / ks**4 - (1.0 / ks**3 + 1.0 / ks**5) * np.arctan(ks)
    )
    out[small] = _taylor(2, k[small])
    return out


def T_array(n: int, k) -> np.ndarray:
    """Vectorized kernel moment T_n on k >= 0.

    n <= 2 uses closed arctan/log forms (Taylor-guarded near k = 0 where
    they cancel); higher orders use the boundary-layer panel rule, which is
    free of cancellation at any k.
    """
    _check_order(n)
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if n == 0:
        return _t0_closed(k)
    if n == 1:
        return _t1_closed(k)
    if n == 2:
        return _t2_closed(k)
    t, w = _t_rule()
    f = w * t**n * (1.0 - t * t)
    return 1.5 * np.sum(f[:, None] / (1.0 + k[None, :] ** 2 * t[:, None] ** 2),
                        axis=0)


def L_array(k) -> np.ndarray:
    """1 - T_0(k), computed as k**2 T_2(k) to keep the double zero exact."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    return k * k * _t2_closed(k)


def phi0_array(k) -> np.ndarray:
    """Regularized numerator (8/15) T_3(k) - T_4(k) of the zeroth density."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    return (8.0 / 15.0) * T_array(3, k) - T_array(4, k)


@lru_cache(maxsize=None)
def _t_rule(k_scale: float = 800.0, per_panel: int = 16):
    """Panel rule on t in [0, 1] resolving the 1/(1+k^2 t^2) boundary layer.

    Panel edges double geometrically from 1/k_scale, so every scale up to
    k ~ k_scale/4 is covered by a smooth octave panel.
    """
    edges = [0.0]
    e = 1.0 / k_scale
    while e < 1.0:
        edges.append(e)
        e *= 2.0
    edges.append(1.0)
    x, w = np.polynomial.legendre.leggauss(per_panel)
    nodes, wts = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * x + 0.5 * (a + b))
        wts.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(wts)


def J_outer(n: int, k, k1) -> np.ndarray:
    """Coupling moment J_n on the outer product of two k-vectors.

    Returns an array of shape (len(k), len(k1)).
    """
    _check_order(n)
    k = np.atleast_1d(np.asarray(k, dtype=float))
    k1 = np.atleast_1d(np.asarray(k1, dtype=float))
    t, w = _t_rule()
    t = t[:, None, None]
    w = w[:, None, None]
    integ = t**n * (1.0 - t * t) / (
        (1.0 + k[None, :, None] ** 2 * t * t) * (1.0 + k1[None, None, :] ** 2 * t * t)
    )
    return 1.5 * np.sum(w * integ, axis=0)


def S_outer(k, k1) -> np.ndarray:
    """Transfer kernel on the outer product grid; S(k, 0) = 0 identically."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    k1 = np.atleast_1d(np.asarray(k1, dtype=float))
    t3k = T_array(3, k)
    t3k1 = T_array(3, k1)
    return k1[None, :] ** 2 * (
        t3k[:, None] * t3k1[None, :] / moment_at_zero(1) - J_outer(5, k, k1)
    )


def _quad_checked(f, spec: QuadratureSpec, what: str) -> KernelValue:
    value, err = quad(
        f, 0.0, 1.0,
        epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdivisions,
    )
    if err > max(spec.abs_tol, spec.rel_tol * abs(value)):
        raise NonConvergence(
            f"{what}: error estimate {err:.2e} above tolerance "
            f"after {spec.max_subdivisions} subdivisions"
        )
    return KernelValue(value, err)


def eval_T(n: int, k: float, spec: QuadratureSpec = QuadratureSpec()) -> KernelValue:
    """Kernel moment T_n(k) with an error estimate.

    Orders 0..2 use closed forms (Taylor-guarded near k = 0) and report a
    roundoff-level error; higher orders go through adaptive quadrature.
    """
    _check_order(n)
    if not math.isfinite(k) or k < 0:
        raise ValueError("k must be finite and non-negative")
    if n <= 2:
        value = float(T_array(n, k)[0])
        return KernelValue(value, 4.0 * abs(value) * np.finfo(float).eps)
    return _quad_checked(
        lambda t: 1.5 * t**n * (1.0 - t * t) / (1.0 + k * k * t * t),
        spec, f"T_{n}({k})",
    )


def eval_J(n: int, k: float, k1: float,
           spec: QuadratureSpec = QuadratureSpec()) -> KernelValue:
    """Coupling moment J_n(k, k1); symmetric in its two arguments."""
    _check_order(n)
    if not (math.isfinite(k) and math.isfinite(k1)) or k < 0 or k1 < 0:
        raise ValueError("k and k1 must be finite and non-negative")
    return _quad_checked(
        lambda t: 1.5 * t**n * (1.0 - t * t)
        / ((1.0 + k * k * t * t) * (1.0 + k1 * k1 * t * t)),
        spec, f"J_{n}({k},{k1})",
    )


def eval_L(k: float, spec: QuadratureSpec = QuadratureSpec()) -> KernelValue:
    """L(k) = k**2 T_2(k); the double zero at k = 0 is exact by construction."""
    t2 = eval_T(2, k, spec)
    return KernelValue(k * k * t2.value, k * k * t2.est_error)


def eval_phi0(k: float, spec: QuadratureSpec = QuadratureSpec()) -> KernelValue:
    """Regularized numerator of the zeroth-order spectral density."""
    t3 = eval_T(3, k, spec)
    t4 = eval_T(4, k, spec)
    return KernelValue(
        (8.0 / 15.0) * t3.value - t4.value,
        (8.0 / 15.0) * t3.est_error + t4.est_error,
    )


def eval_S(k: float, k1: float,
           spec: QuadratureSpec = QuadratureSpec()) -> KernelValue:
    """Order-to-order transfer kernel; finite everywhere, zero at k1 = 0."""
    t3k = eval_T(3, k, spec)
    t3k1 = eval_T(3, k1, spec)
    j5 = eval_J(5, k, k1, spec)
    value = k1 * k1 * (t3k.value * t3k1.value / moment_at_zero(1) - j5.value)
    err = k1 * k1 * (
        (abs(t3k.value) * t3k1.est_error + abs(t3k1.value) * t3k.est_error)
        / moment_at_zero(1)
        + j5.est_error
    )
    return KernelValue(value, err)

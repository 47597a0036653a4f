"""Fermi-statistics factors entering the dimensional slip coefficient."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import QuadratureSpec


@dataclass(frozen=True)
class ReducedChemicalPotential:
    """Chemical potential over kT; negative values mean a near-classical gas."""

    alpha: float

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")


def fermi_log_moment(
    n: int,
    alpha: float | ReducedChemicalPotential,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Moment l_n(alpha) = int_0^inf t**n log(1 + exp(alpha - t**2)) dt.

    The integrand decays like a Gaussian past the Fermi edge, so the range is
    truncated at sqrt(max(alpha, 0)) + 40 and integrated with a composite
    Gauss rule sized by spec.semi_infinite_nodes.  log1p overflow at large
    alpha is avoided via logaddexp.
    """
    if n not in (0, 1):
        raise ValueError("only moments n in {0, 1} are defined")
    a = alpha.alpha if isinstance(alpha, ReducedChemicalPotential) else float(alpha)
    if not math.isfinite(a):
        raise ValueError("alpha must be finite")
    t_max = math.sqrt(max(a, 0.0)) + 40.0
    n_panels = max(spec.semi_infinite_nodes // 10, 8)
    edges = np.linspace(0.0, t_max, n_panels + 1)
    x, w = np.polynomial.legendre.leggauss(20)
    aa, bb = edges[:-1], edges[1:]
    t = (0.5 * (bb - aa)[:, None] * x[None, :] + 0.5 * (aa + bb)[:, None]).ravel()
    wt = (0.5 * (bb - aa)[:, None] * w[None, :]).ravel()
    return float(wt @ (t**n * np.logaddexp(0.0, a - t * t)))


def kv_prefactor(
    alpha: float | ReducedChemicalPotential,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Statistics prefactor 15 l_0 / (8 sqrt(pi) l_1); 15/8 in the classical limit."""
    l0 = fermi_log_moment(0, alpha, spec)
    l1 = fermi_log_moment(1, alpha, spec)
    return 15.0 * l0 / (8.0 * math.sqrt(math.pi) * l1)

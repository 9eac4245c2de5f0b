"""Pointwise evaluation of the regularized nonlinear term F(p).

F(p) is the sum of a regulated logarithmic bracket built from densities
sampled at x and x +- eta*L, and the quantum-potential term. On constant
densities every piece cancels identically; for smooth densities the whole
field is O(L) once the energy-scale constraint cal_E * L^2 = hbar^2/4m holds.

Floors enter logarithms and denominators only. In particular the second
derivative inside the quantum potential acts on the raw sqrt(p): flooring it
there would break the exact discrete cancellation against the kinetic term
for real states, which the half-line solutions rely on.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import UnregularizedEtaWarning
from .grid import (
    Density,
    Grid,
    NonlinearParams,
    PhysConstants,
    _laplacian_raw,
    _readonly,
    _shift_raw,
)


@dataclass(frozen=True)
class NonlinearField:
    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True)
        if v.shape != (self.grid.n_points,):
            raise ValueError("values length must match grid.n_points")
        if not np.isfinite(v).all():
            raise ValueError("nonlinear field must be finite after flooring")
        object.__setattr__(self, "values", _readonly(v))


def _kl_bracket_raw(
    p: np.ndarray, pp: np.ndarray, pm: np.ndarray, eta: float, eps: float
) -> np.ndarray:
    """The regulated bracket, dimensionless, without the cal_E/eta^4 prefactor.

    Two evaluation paths give the same mathematical value:

    * a log1p form in the density ratios r+- = (p+- - p)/p, used wherever all
      three densities sit comfortably above the floor; it keeps absolute
      rounding at the size of the bracket itself, which matters because the
      prefactor cal_E/eta^4 can exceed 1e9;
    * the literal floored form at degenerate points (nodes, deep tails).
    """
    safe = (p > 100.0 * eps) & (pp > 100.0 * eps) & (pm > 100.0 * eps)
    rp = (pp - p) / np.maximum(p, eps)
    rm = (pm - p) / np.maximum(p, eps)
    num = (1.0 - eta) * rp - eta * rm + (1.0 - 2.0 * eta) * rp * rm
    den = (1.0 + eta * rp) * (1.0 + (1.0 - eta) * rm)
    stable = -np.log1p(eta * rp) + eta * num / np.maximum(den, 1e-300)

    d_plus = (1.0 - eta) * p + eta * pp
    d_minus = (1.0 - eta) * pm + eta * p
    raw = (
        np.log(np.maximum(p, eps))
        - np.log(np.maximum(d_plus, eps))
        + 1.0
        - (1.0 - eta) * p / np.maximum(d_plus, eps)
        - eta * pm / np.maximum(d_minus, eps)
    )
    return np.where(safe, stable, raw)


def _quantum_potential_raw(
    p: np.ndarray, dx: float, boundary: str, eps: float, consts: PhysConstants
) -> np.ndarray:
    s = np.sqrt(p)
    d2s = _laplacian_raw(s, dx, boundary)
    return (consts.hbar**2 / (2.0 * consts.mass)) * d2s / np.maximum(s, np.sqrt(eps))


def _field_raw(
    p: np.ndarray,
    grid: Grid,
    params: NonlinearParams,
    consts: PhysConstants,
    policy: str,
    steps: int,
) -> np.ndarray:
    eps = 1e-12 * p.max() if p.max() > 0 else 1e-300
    pp = _shift_raw(p, +steps, policy, eps)
    pm = _shift_raw(p, -steps, policy, eps)
    pref = params.cal_E / params.eta**4
    kl = pref * _kl_bracket_raw(p, pp, pm, params.eta, eps)
    return kl + _quantum_potential_raw(p, grid.dx, grid.boundary, eps, consts)


def regularized_kl_term(
    p: Density, params: NonlinearParams, policy: str | None = None
) -> NonlinearField:
    """(cal_E/eta^4) times the regulated bracket of shifted densities."""
    if params.eta == 1.0:
        warnings.warn(
            "eta = 1 evaluates the unregularized, singular limit",
            UnregularizedEtaWarning,
            stacklevel=2,
        )
    steps = params.shift_steps(p.grid)
    eps = p.floor()
    pol = policy or p.grid.default_policy()
    pp = _shift_raw(p.values, +steps, pol, eps)
    pm = _shift_raw(p.values, -steps, pol, eps)
    pref = params.cal_E / params.eta**4
    return NonlinearField(p.grid, pref * _kl_bracket_raw(p.values, pp, pm, params.eta, eps))


def quantum_potential_term(p: Density, consts: PhysConstants) -> NonlinearField:
    """(hbar^2/2m) (d^2 sqrt(p) / dx^2) / sqrt(p), floored denominator."""
    vals = _quantum_potential_raw(
        p.values, p.grid.dx, p.grid.boundary, p.floor(), consts
    )
    return NonlinearField(p.grid, vals)


def nonlinear_term_F(
    p: Density,
    params: NonlinearParams | None,
    consts: PhysConstants,
    policy: str | None = None,
) -> NonlinearField:
    """Full nonlinear term: regulated bracket plus quantum potential.

    ``params=None`` selects the linear theory (the eta -> 0 convention),
    where F vanishes identically.
    """
    if params is None:
        return NonlinearField(p.grid, np.zeros(p.grid.n_points))
    kl = regularized_kl_term(p, params, policy)
    qp = quantum_potential_term(p, consts)
    return NonlinearField(p.grid, kl.values + qp.values)

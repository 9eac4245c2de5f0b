"""Real-time propagation with external potential and the nonlinear term.

Explicit RK4 on the full right side; the nonlinearity is recomputed at every
substage from the substage density. The step limit dt_max = 0.5 m dx^2 / hbar
is the usual explicit-scheme bound for the free operator; RK4's imaginary-axis
stability then covers the kinetic spectrum with margin.

Points flagged in ``Potential.singular_mask`` are held fixed: their right
side is zeroed every substage. This is the interior-Dirichlet treatment a
singular potential (or a density node, where the discrete quantum potential
is singular) requires; initial states should vanish there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonFiniteEvolutionError, UnstableStepError
from .grid import (
    Grid,
    NonlinearParams,
    PhysConstants,
    Wavefunction,
    _laplacian_raw,
    _readonly,
)
from .nonlinearity import _field_raw


@dataclass(frozen=True)
class Potential:
    grid: Grid
    values: np.ndarray = field(repr=False)
    singular_mask: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True)
        if v.shape != (self.grid.n_points,):
            raise ValueError("values length must match grid.n_points")
        mask = self.singular_mask
        if mask is None:
            mask = np.zeros(self.grid.n_points, dtype=bool)
        else:
            mask = np.array(mask, dtype=bool, copy=True)
            if mask.shape != (self.grid.n_points,):
                raise ValueError("singular_mask length must match grid.n_points")
        if not np.isfinite(v[~mask]).all():
            raise ValueError("potential must be finite off the singular mask")
        object.__setattr__(self, "values", _readonly(v))
        object.__setattr__(self, "singular_mask", _readonly(mask))


def zero_potential(grid: Grid) -> Potential:
    return Potential(grid, np.zeros(grid.n_points))


def harmonic_potential(
    grid: Grid, consts: PhysConstants, omega: float = 1.0, center: float = 0.0
) -> Potential:
    x = grid.x - center
    return Potential(grid, 0.5 * consts.mass * omega**2 * x * x)


def quartic_potential(grid: Grid, coeff: float = 1.0, center: float = 0.0) -> Potential:
    x = grid.x - center
    return Potential(grid, coeff * x**4)


@dataclass(frozen=True)
class EvolutionReport:
    times: np.ndarray
    norm_drift: np.ndarray
    energy_trace: np.ndarray
    final_state: Wavefunction

    def __post_init__(self):
        if not (len(self.times) == len(self.norm_drift) == len(self.energy_trace)):
            raise ValueError("report arrays must have equal length")


def dt_max(grid: Grid, consts: PhysConstants) -> float:
    """Largest stable step for the explicit scheme."""
    return 0.5 * consts.mass * grid.dx**2 / consts.hbar


def _make_rhs(
    grid: Grid,
    V: Potential,
    params: NonlinearParams | None,
    consts: PhysConstants,
    policy: str,
):
    """Right-side closure on raw complex arrays; masked points are pinned."""
    mask = V.singular_mask
    any_masked = bool(mask.any())
    v_ext = np.where(mask, 0.0, V.values)
    kin = -consts.hbar**2 / (2.0 * consts.mass)
    minus_i_over_hbar = -1j / consts.hbar
    steps = params.shift_steps(grid) if params is not None else 0
    dx, boundary = grid.dx, grid.boundary

    def rhs(psi: np.ndarray) -> np.ndarray:
        lap = _laplacian_raw(psi, dx, boundary)
        h_psi = kin * lap + v_ext * psi
        if params is not None:
            p = psi.real**2 + psi.imag**2
            f = _field_raw(p, grid, params, consts, policy, steps)
            h_psi += f * psi
        out = minus_i_over_hbar * h_psi
        if any_masked:
            out[mask] = 0.0
        return out

    return rhs


def rhs_apply(
    psi: Wavefunction,
    V: Potential,
    params: NonlinearParams | None,
    consts: PhysConstants,
    policy: str | None = None,
) -> Wavefunction:
    """(1/i hbar) [ -(hbar^2/2m) psi'' + V psi + F(p) psi ]."""
    pol = policy or psi.grid.default_policy()
    rhs = _make_rhs(psi.grid, V, params, consts, pol)
    return Wavefunction(psi.grid, rhs(psi.values.astype(np.complex128)))


def _rk4_raw(psi: np.ndarray, rhs, dt: float) -> np.ndarray:
    k1 = rhs(psi)
    k2 = rhs(psi + (0.5 * dt) * k1)
    k3 = rhs(psi + (0.5 * dt) * k2)
    k4 = rhs(psi + dt * k3)
    return psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _check_dt(dt: float, grid: Grid, consts: PhysConstants) -> None:
    limit = dt_max(grid, consts)
    if abs(dt) > limit * (1.0 + 1e-12):
        raise UnstableStepError(f"|dt| = {abs(dt)} exceeds dt_max = {limit}")


def rk4_step(
    psi: Wavefunction,
    V: Potential,
    params: NonlinearParams | None,
    consts: PhysConstants,
    dt: float,
    policy: str | None = None,
) -> Wavefunction:
    """One classical fourth-order step of the full equation."""
    _check_dt(dt, psi.grid, consts)
    pol = policy or psi.grid.default_policy()
    rhs = _make_rhs(psi.grid, V, params, consts, pol)
    return Wavefunction(psi.grid, _rk4_raw(psi.values.astype(np.complex128), rhs, dt))


def evolve(
    psi0: Wavefunction,
    V: Potential,
    params: NonlinearParams | None,
    consts: PhysConstants,
    dt: float,
    n_steps: int,
    policy: str | None = None,
) -> EvolutionReport:
    """Propagate n_steps and record norm drift and an energy diagnostic.

    The energy trace is <psi|H_lin|psi> + integral p F; it is reported as a
    diagnostic, with no exact-invariance claim attached. Aborts with
    NonFiniteEvolutionError (carrying the partial report) if amplitudes stop
    being finite.
    """
    _check_dt(dt, psi0.grid, consts)
    grid = psi0.grid
    pol = policy or grid.default_policy()
    rhs = _make_rhs(grid, V, params, consts, pol)
    w = grid.quad_weights()
    v_ext = np.where(V.singular_mask, 0.0, V.values)
    kin = -consts.hbar**2 / (2.0 * consts.mass)
    steps = params.shift_steps(grid) if params is not None else 0

    def energy(psi: np.ndarray) -> float:
        lap = _laplacian_raw(psi, grid.dx, grid.boundary)
        p = psi.real**2 + psi.imag**2
        e = np.sum(w * (np.conj(psi) * (kin * lap)).real) + np.sum(w * v_ext * p)
        if params is not None:
            f = _field_raw(p, grid, params, consts, pol, steps)
            e += np.sum(w * p * f)
        return float(e)

    psi = psi0.values.astype(np.complex128)
    norm0 = float(np.sum(w * (psi.real**2 + psi.imag**2)))
    times = [0.0]
    drift = [0.0]
    etrace = [energy(psi)]
    for k in range(1, n_steps + 1):
        # divergence is detected and reported below; keep numpy quiet about it
        with np.errstate(over="ignore", invalid="ignore"):
            psi = _rk4_raw(psi, rhs, dt)
        if not np.isfinite(psi.view(np.float64)).all():
            partial = EvolutionReport(
                np.array(times),
                np.array(drift),
                np.array(etrace),
                Wavefunction(grid, np.where(np.isfinite(psi), psi, 0.0)),
            )
            raise NonFiniteEvolutionError(
                f"non-finite amplitudes after step {k}", report=partial
            )
        times.append(k * dt)
        drift.append(abs(float(np.sum(w * (psi.real**2 + psi.imag**2))) - norm0))
        etrace.append(energy(psi))
    return EvolutionReport(
        np.array(times), np.array(drift), np.array(etrace), Wavefunction(grid, psi)
    )

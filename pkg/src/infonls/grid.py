"""Uniform 1-D grid, wavefunction/density containers, shifts and derivatives.

Everything downstream consumes these types. Values are treated as immutable
once constructed; the arrays are flagged read-only to make accidental
mutation loud.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    IncommensurateShiftError,
    NonFiniteError,
    StepTooLargeError,
    ZeroNormError,
)

#: Relative density floor: floors are ``FLOOR_REL * max(p)`` and enter only
#: logarithms and denominators, never multiplicative factors.
FLOOR_REL = 1e-12

#: Relative tolerance for "shift distance is an integer number of steps".
COMMENSURATE_RTOL = 1e-9

_BOUNDARIES = ("periodic", "dirichlet")
_POLICIES = ("periodic", "floor", "extrap")


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class PhysConstants:
    """Physical constants of the linear theory (natural units by default)."""

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise ValueError("hbar and mass must be positive")


@dataclass(frozen=True)
class Grid:
    """Uniform spatial grid, x_k = x_min + k*dx.

    ``boundary`` fixes how differential stencils treat the edges: 'periodic'
    wraps, 'dirichlet' uses zero ghost values (walls sit one step outside
    the first and last points).
    """

    x_min: float
    dx: float
    n_points: int
    boundary: str = "periodic"

    def __post_init__(self):
        if self.dx <= 0:
            raise ValueError("dx must be positive")
        if self.n_points < 8:
            raise ValueError("n_points must be at least 8")
        if self.boundary not in _BOUNDARIES:
            raise ValueError(f"boundary must be one of {_BOUNDARIES}")

    @property
    def x(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_points) * self.dx

    @property
    def length(self) -> float:
        """Domain length: the period for periodic grids, else the span."""
        if self.boundary == "periodic":
            return self.n_points * self.dx
        return (self.n_points - 1) * self.dx

    def quad_weights(self) -> np.ndarray:
        """Trapezoidal weights (uniform on the torus, half-weight ends else)."""
        w = np.full(self.n_points, self.dx)
        if self.boundary == "dirichlet":
            w[0] *= 0.5
            w[-1] *= 0.5
        return w

    def default_policy(self) -> str:
        """Shift policy implied by the boundary: wrap on the torus, floor else."""
        return "periodic" if self.boundary == "periodic" else "floor"

    def steps_for(self, distance: float) -> int:
        """Shift distance expressed in grid steps; must be commensurate."""
        ratio = distance / self.dx
        steps = int(round(ratio))
        if abs(ratio - steps) > COMMENSURATE_RTOL * max(1.0, abs(steps)):
            raise IncommensurateShiftError(
                f"shift distance {distance} is {ratio} grid steps; "
                f"not an integer within rtol {COMMENSURATE_RTOL}"
            )
        return steps


@dataclass(frozen=True)
class NonlinearParams:
    """Knobs of the nonlinearity: length scale L, regulator eta, energy scale.

    ``cal_E`` is not free: the linear small-L limit requires
    cal_E * L**2 = hbar**2 / (4 m). Use :meth:`for_length` to construct.
    """

    L: float
    eta: float
    cal_E: float

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError("L must be positive")
        if not (0.0 < self.eta <= 1.0):
            raise ValueError("eta must lie in (0, 1]")
        if self.cal_E <= 0:
            raise ValueError("cal_E must be positive")

    @classmethod
    def for_length(cls, L: float, eta: float, consts: PhysConstants) -> "NonlinearParams":
        return cls(L=L, eta=eta, cal_E=consts.hbar**2 / (4.0 * consts.mass * L * L))

    def validate_constraint(self, consts: PhysConstants, rtol: float = 1e-12) -> None:
        target = consts.hbar**2 / (4.0 * consts.mass)
        if abs(self.cal_E * self.L**2 - target) > rtol * target:
            raise ValueError(
                f"cal_E * L^2 = {self.cal_E * self.L ** 2} violates the "
                f"linear-limit constraint {target}"
            )

    def shift_steps(self, grid: Grid) -> int:
        """Grid steps in eta*L; raises IncommensurateShiftError if fractional."""
        return grid.steps_for(self.eta * self.L)


@dataclass(frozen=True)
class Wavefunction:
    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128, copy=True)
        if v.shape != (self.grid.n_points,):
            raise ValueError("values length must match grid.n_points")
        if not np.isfinite(v.view(np.float64)).all():
            raise NonFiniteError("wavefunction contains non-finite amplitudes")
        object.__setattr__(self, "values", _readonly(v))

    def norm_squared(self) -> float:
        p = self.values.real**2 + self.values.imag**2
        return float(np.sum(p * self.grid.quad_weights()))


@dataclass(frozen=True)
class Density:
    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True)
        if v.shape != (self.grid.n_points,):
            raise ValueError("values length must match grid.n_points")
        if not np.isfinite(v).all():
            raise NonFiniteError("density contains non-finite values")
        if (v < 0).any():
            raise ValueError("density must be non-negative")
        object.__setattr__(self, "values", _readonly(v))

    def floor(self) -> float:
        """Density floor used inside logarithms and denominators."""
        return FLOOR_REL * float(self.values.max())

    def integral(self) -> float:
        return float(np.sum(self.values * self.grid.quad_weights()))


def integrate(values: np.ndarray, grid: Grid) -> float:
    """Trapezoidal quadrature of point values on the grid."""
    return float(np.sum(values * grid.quad_weights()))


def density(psi: Wavefunction) -> Density:
    """Pointwise |psi|^2 on the same grid."""
    p = psi.values.real**2 + psi.values.imag**2
    return Density(psi.grid, p)


def normalize(psi: Wavefunction) -> Wavefunction:
    """Rescale to unit trapezoidal squared norm."""
    n2 = psi.norm_squared()
    if n2 < 1e-300:
        raise ZeroNormError(f"squared norm {n2} too small to normalize")
    return Wavefunction(psi.grid, psi.values / np.sqrt(n2))


def _shift_raw(p: np.ndarray, steps: int, policy: str, eps: float) -> np.ndarray:
    """out[k] = p[k + steps]; out-of-range per policy.

    'periodic' wraps, 'floor' fills with the density floor, 'extrap'
    continues geometrically (out[k] = p[k]^2 / p[k - steps], floored
    denominator), which is exact for exponentially damped profiles.
    """
    n = p.size
    if steps == 0:
        return p.copy()
    if policy == "periodic":
        return np.roll(p, -steps)
    out = np.empty_like(p)
    if steps > 0:
        out[: n - steps] = p[steps:]
        edge = np.arange(n - steps, n)
    else:
        out[-steps:] = p[:steps]
        edge = np.arange(0, -steps)
    if policy == "floor":
        out[edge] = eps
    elif policy == "extrap":
        src = edge - steps
        ok = (src >= 0) & (src < n)
        vals = np.full(edge.size, eps)
        vals[ok] = p[edge[ok]] ** 2 / np.maximum(p[src[ok]], eps)
        out[edge] = vals
    else:
        raise ValueError(f"policy must be one of {_POLICIES}")
    return out


def shift_density(p: Density, steps: int, policy: str | None = None) -> Density:
    """Nonlocal sample p(x + steps*dx) as a new Density."""
    if abs(steps) >= p.grid.n_points:
        raise StepTooLargeError(
            f"|steps| = {abs(steps)} must be below n_points = {p.grid.n_points}"
        )
    if policy is None:
        policy = p.grid.default_policy()
    if policy not in _POLICIES:
        raise ValueError(f"policy must be one of {_POLICIES}")
    return Density(p.grid, _shift_raw(p.values, steps, policy, p.floor()))


def _laplacian_raw(v: np.ndarray, dx: float, boundary: str) -> np.ndarray:
    out = np.empty_like(v)
    out[1:-1] = v[2:] - 2.0 * v[1:-1] + v[:-2]
    if boundary == "periodic":
        out[0] = v[1] - 2.0 * v[0] + v[-1]
        out[-1] = v[0] - 2.0 * v[-1] + v[-2]
    else:  # dirichlet: ghost values are zero
        out[0] = v[1] - 2.0 * v[0]
        out[-1] = v[-2] - 2.0 * v[-1]
    out /= dx * dx
    return out


def laplacian(psi: Wavefunction) -> Wavefunction:
    """Second-order central difference of the wavefunction."""
    g = psi.grid
    return Wavefunction(g, _laplacian_raw(psi.values, g.dx, g.boundary))

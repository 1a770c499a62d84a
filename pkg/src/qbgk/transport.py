"""Mild-solution transport operator for the stationary slab problem.

For each momentum node with p1 > 0 the operator attenuates the left
inflow datum by exp(-(A(x) - A(0)) / (tau p1)), where A is the prefix
integral of the mass profile, and adds a gain term against the local
equilibrium.  The gain is integrated cell-by-cell with an integrating
factor: under piecewise-constant equilibrium per cell and piecewise
linear A, each cell contributes an exact exponential increment

    [exp(-(A(x) - A(y_hi)) / (tau p1)) - exp(-(A(x) - A(y_lo)) / (tau p1))] K(y_mid)

which telescopes to 1 - attenuation.  That telescoping makes a global
equilibrium with matching boundary traces an exact fixed point, and it
stays accurate as p1 -> 0 where naive quadrature of the stiff kernel
would fail.  Momentum nodes with p1 < 0 mirror the formula from x = 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .equilibrium import EquilibriumParams, MomentTriple, evaluate, solve_parameters
from .errors import InvariantError, RegimeError
from .phase_grid import DistributionField, Grid, MomentProfile, compute_moments
from .quantum_stats import DEFAULT_QUAD, QuadratureSpec, Statistics

log = logging.getLogger(__name__)

_NEGATIVE_TOL = -1e-14


class BoundaryData:
    """Inflow data: f_L supported on p1 > 0, f_R on p1 < 0."""

    def values_on(self, grid: Grid) -> np.ndarray:
        """Combined inflow values f_LR at every momentum node of grid."""
        raise NotImplementedError


@dataclass(frozen=True)
class SlabExampleBoundary(BoundaryData):
    """Closed-form boundary family: an indicator slab in p1 times a unit
    Gaussian in the transverse momenta,

        f_L = C_L 1_{r1 <= p1 <= r2} exp(-(p2^2 + p3^2)/2),

    and f_R mirrored to -r2 <= p1 <= -r1 with amplitude C_R."""

    C_L: float
    C_R: float
    r1: float
    r2: float

    def __post_init__(self):
        if not (0.0 < self.r1 < self.r2):
            raise InvariantError(f"need 0 < r1 < r2; got r1={self.r1}, r2={self.r2}")
        if self.C_L <= 0 or self.C_R <= 0:
            raise InvariantError("amplitudes C_L, C_R must be positive")

    def __call__(self, p: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        p1 = p[..., 0]
        trans = np.exp(-0.5 * (p[..., 1] ** 2 + p[..., 2] ** 2))
        left = self.C_L * ((p1 >= self.r1) & (p1 <= self.r2))
        right = self.C_R * ((p1 >= -self.r2) & (p1 <= -self.r1))
        return (left + right) * trans

    def values_on(self, grid: Grid) -> np.ndarray:
        return self(grid.p)


@dataclass(frozen=True)
class GriddedBoundary(BoundaryData):
    """Inflow data sampled on the momentum nodes of a specific grid."""

    grid: Grid
    values: np.ndarray  # (npts,)

    def __post_init__(self):
        if self.values.shape != (self.grid.npts,):
            raise InvariantError("gridded boundary shape does not match grid")
        if np.any(self.values < 0):
            raise InvariantError("boundary data must be non-negative")

    def values_on(self, grid: Grid) -> np.ndarray:
        if grid is not self.grid and not np.array_equal(grid.p, self.grid.p):
            raise InvariantError("gridded boundary used with a different grid")
        return self.values


def equilibrium_trace_boundary(grid: Grid, params: EquilibriumParams) -> GriddedBoundary:
    """Boundary data equal to the traces of a global equilibrium."""
    return GriddedBoundary(grid=grid, values=evaluate(params, grid.p))


@dataclass(frozen=True)
class CumulativeDensity:
    """Prefix integral A(x_i) = int_0^{x_i} N(y) dy by the trapezoid rule."""

    A: np.ndarray

    def __post_init__(self):
        if self.A[0] != 0.0 or np.any(np.diff(self.A) < 0):
            raise InvariantError("cumulative density must start at 0 and be nondecreasing")


def cumulative_density(moments: MomentProfile) -> CumulativeDensity:
    """Trapezoidal prefix integral of the mass profile (exact for linear N)."""
    if np.any(moments.N <= 0):
        raise InvariantError("cumulative density requires N > 0 at all nodes")
    dx = np.diff(moments.x)
    inc = dx * 0.5 * (moments.N[:-1] + moments.N[1:])
    a = np.concatenate([[0.0], np.cumsum(inc)])
    return CumulativeDensity(A=a)


def solve_params_profile(
    moments: MomentProfile, stat: Statistics, q: QuadratureSpec = DEFAULT_QUAD
) -> list[EquilibriumParams]:
    """Equilibrium parameters at each slab node; raises RegimeError if any
    node leaves the regular regime."""
    out = []
    for i in range(moments.x.size):
        try:
            out.append(solve_parameters(moments.at(i), stat, q))
        except RegimeError as exc:
            raise RegimeError(f"x-node {i}: {exc}") from exc
    return out


def _midpoint_moments(moments: MomentProfile) -> list[MomentTriple]:
    n = 0.5 * (moments.N[:-1] + moments.N[1:])
    p = 0.5 * (moments.P[:-1] + moments.P[1:])
    e = 0.5 * (moments.E[:-1] + moments.E[1:])
    return [MomentTriple(N=float(n[j]), P=tuple(p[j]), E=float(e[j])) for j in range(n.size)]


def apply_solution_operator(
    f: DistributionField,
    tau: float,
    stat: Statistics,
    q: QuadratureSpec = DEFAULT_QUAD,
) -> DistributionField:
    """One application of the mild-solution operator to a gridded field."""
    if tau <= 0:
        raise InvariantError(f"tau must be positive; got {tau}")
    if f.boundary is None:
        raise InvariantError("field carries no boundary data")
    grid = f.grid
    moments = compute_moments(f)
    A = cumulative_density(moments).A

    # equilibrium at cell midpoints (moments interpolated linearly)
    mids = _midpoint_moments(moments)
    K = np.empty((grid.spec.nx, grid.npts))
    for j, m in enumerate(mids):
        try:
            params = solve_parameters(m, stat, q)
        except RegimeError as exc:
            raise RegimeError(f"cell {j}: {exc}") from exc
        K[j] = evaluate(params, grid.p)

    flr = f.boundary.values_on(grid)
    n23sq = grid.n23 * grid.n23
    Kg = K.reshape(grid.spec.nx, grid.n1, n23sq)
    bg = flr.reshape(grid.n1, n23sq)
    nxn = grid.x.size

    out = np.empty((nxn, grid.n1, n23sq))
    pos = np.where(grid.p1 > 0)[0]
    neg = np.where(grid.p1 < 0)[0]

    for g in pos:
        s = 1.0 / (tau * grid.p1[g])
        # E[i, j] = exp(-(A_i - A_j) s) for j <= i, zero weight otherwise
        expmat = np.exp(-np.maximum(A[:, None] - A[None, :], 0.0) * s)
        wts = np.tril(expmat[:, 1:] - expmat[:, :-1])  # (nxn, nx cells)
        out[:, g, :] = expmat[:, 0][:, None] * bg[g][None, :] + wts @ Kg[:, g, :]

    for g in neg:
        s = 1.0 / (tau * abs(grid.p1[g]))
        expmat = np.exp(-np.maximum(A[None, :] - A[:, None], 0.0) * s)
        wts = np.triu(expmat[:, :-1] - expmat[:, 1:])
        out[:, g, :] = expmat[:, -1][:, None] * bg[g][None, :] + wts @ Kg[:, g, :]

    vals = out.reshape(nxn, grid.npts)
    worst = float(vals.min())
    if worst < 0.0:
        if worst < _NEGATIVE_TOL:
            log.warning("transport output reached %.3e < 0; clipping", worst)
        vals = np.clip(vals, 0.0, None)
    return DistributionField(grid=grid, values=vals, boundary=f.boundary)


def initial_iterate(
    boundary: BoundaryData, grid: Grid, tau: float, a_u: float
) -> DistributionField:
    """Attenuated boundary data, the canonical starting iterate:
    exp(-a_u x / (tau p1)) f_L for p1 > 0 and the mirrored expression
    for p1 < 0.  Bounded below by the fully attenuated data, hence in
    the solution set whenever the boundary is admissible."""
    flr = boundary.values_on(grid)
    p1 = grid.p[:, 0]
    x = grid.x[:, None]
    depth = np.where(p1 > 0, x, 1.0 - x)
    att = np.exp(-a_u * depth / (tau * np.abs(p1)))
    return DistributionField(grid=grid, values=att * flr[None, :], boundary=boundary)


def attenuated_boundary_floor(
    boundary: BoundaryData, grid: Grid, tau: float, a_u: float
) -> np.ndarray:
    """Pointwise floor exp(-a_u / (tau |p1|)) f_LR that every operator
    output must dominate."""
    flr = boundary.values_on(grid)
    return np.exp(-a_u / (tau * np.abs(grid.p[:, 0]))) * flr


def attenuation_kernel_integral(
    grid: Grid, tau: float, a_l: float, decay: float = 1.0
) -> float:
    """Discrete analogue of the kernel decay integral

        int_0^1 int_0^inf (tau p1)^{-1} exp(-a_l(1-y)/(tau p1))
                                        exp(-decay p1^2) dp1 dy,

    evaluated with the grid's positive p1 quadrature and trapezoid in y.
    Scales like (ln tau + 1)/tau for large tau."""
    pos = grid.p1 > 0
    p1 = grid.p1[pos]
    w1 = grid.w1[pos]
    y = grid.x
    integrand = (
        np.exp(-a_l * (1.0 - y)[:, None] / (tau * p1[None, :]))
        * np.exp(-decay * p1 * p1)[None, :]
        / (tau * p1)[None, :]
    )
    per_y = integrand @ w1
    return float(np.trapezoid(per_y, y))

"""Boundary-data constants, admissibility checks, and the closed-form
boundary example.

The constants are momentum integrals of the inflow data f_LR:

    a_u = 2 int f_LR dp              c_u = 2 int f_LR |p|^2 dp
    a_l = int e^{-a_u/(tau|p1|)} f_LR dp        (same weight for c_l)
    a_s = int f_LR / |p1| dp                    (same weight for c_s)
    k   = (int_{p1>0} e^{-a_u/(tau p1)} f_L p1 dp)
          (int_{p1<0} e^{-a_u/(tau|p1|)} f_R |p1| dp)

a_u is computed first because the attenuated integrals depend on it.
The admissibility condition requires a_u^{8/5} / k^{3/5} to stay below
the statistics threshold (beta at the left endpoint of its invertible
domain); only then are the equilibrium parameters solvable on the whole
solution set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvariantError, NonConvergenceError
from .phase_grid import Grid
from .quantum_stats import (
    DEFAULT_QUAD,
    QuadratureSpec,
    Statistics,
    beta_inverse,
    beta_threshold,
    mass_integral,
)
from .transport import BoundaryData, GriddedBoundary, SlabExampleBoundary

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class TheoremConstants:
    """Boundary-derived constants of the existence theorem."""

    a_u: float
    a_l: float
    a_s: float
    c_u: float
    c_l: float
    c_s: float
    k: float
    threshold: float
    ratio: float

    def __post_init__(self):
        if self.a_l > self.a_u * (1 + 1e-12) or self.c_l > self.c_u * (1 + 1e-12):
            raise InvariantError("attenuated constants must not exceed the upper ones")

    @property
    def admissible(self) -> bool:
        return self.k > 0 and self.ratio < self.threshold


def slab_example_boundary(C_L: float, C_R: float, r1: float, r2: float) -> SlabExampleBoundary:
    """Closed-form boundary family: indicator slab in p1 times a unit
    transverse Gaussian (see SlabExampleBoundary)."""
    return SlabExampleBoundary(C_L=C_L, C_R=C_R, r1=r1, r2=r2)


def _p1_rule(lo: float, hi: float, panels: int = 4, order: int = 24):
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        xs.append(0.5 * (b - a) * xg + 0.5 * (a + b))
        ws.append(0.5 * (b - a) * wg)
    return np.concatenate(xs), np.concatenate(ws)


def _example_constants(b: SlabExampleBoundary, tau: float):
    """1D reduced integrals for the closed-form example.

    The transverse Gaussian integrates exactly: the mass-type weight
    contributes 2 pi per side and the energy-type weight 2 pi (p1^2 + 2).
    The p1 integrals run over the smooth restriction to [r1, r2], so the
    panel quadrature converges spectrally.
    """
    p, w = _p1_rule(b.r1, b.r2)
    amp = b.C_L + b.C_R
    twopi = 2.0 * math.pi

    a_u = 2.0 * twopi * amp * float(np.sum(w))
    att = np.exp(-a_u / (tau * p))
    a_l = twopi * amp * float(np.sum(w * att))
    a_s = twopi * amp * float(np.sum(w / p))
    c_u = 2.0 * twopi * amp * float(np.sum(w * (p * p + 2.0)))
    c_l = twopi * amp * float(np.sum(w * att * (p * p + 2.0)))
    c_s = twopi * amp * float(np.sum(w * (p * p + 2.0) / p))
    flux_l = twopi * b.C_L * float(np.sum(w * att * p))
    flux_r = twopi * b.C_R * float(np.sum(w * att * p))
    return a_u, a_l, a_s, c_u, c_l, c_s, flux_l * flux_r


def _gridded_constants(b: BoundaryData, tau: float, grid: Grid):
    flr = b.values_on(grid)
    w = grid.w
    p1 = grid.p[:, 0]
    psq = grid.psq

    a_u = 2.0 * float(np.sum(w * flr))
    att = np.exp(-a_u / (tau * np.abs(p1)))
    a_l = float(np.sum(w * att * flr))
    a_s = float(np.sum(w * flr / np.abs(p1)))
    c_u = 2.0 * float(np.sum(w * flr * psq))
    c_l = float(np.sum(w * att * flr * psq))
    c_s = float(np.sum(w * flr * psq / np.abs(p1)))
    pos = p1 > 0
    flux_l = float(np.sum((w * att * flr * np.abs(p1))[pos]))
    flux_r = float(np.sum((w * att * flr * np.abs(p1))[~pos]))
    for name, val in (("a_s", a_s), ("c_s", c_s)):
        if not math.isfinite(val):
            raise NonConvergenceError(
                f"{name} diverged: boundary violates the 1/|p1| integrability condition"
            )
    return a_u, a_l, a_s, c_u, c_l, c_s, flux_l * flux_r


def boundary_constants(
    boundary: BoundaryData,
    tau: float,
    stat: Statistics,
    grid: Grid | None = None,
    q: QuadratureSpec = DEFAULT_QUAD,
) -> TheoremConstants:
    """All seven theorem constants plus the admissibility ratio.

    Closed-form boundaries use exact 1D reduced quadrature; gridded
    boundaries use the momentum grid (required argument in that case).
    """
    if tau <= 0:
        raise InvariantError(f"tau must be positive; got {tau}")
    if isinstance(boundary, SlabExampleBoundary):
        a_u, a_l, a_s, c_u, c_l, c_s, k = _example_constants(boundary, tau)
    else:
        if grid is None:
            raise InvariantError("gridded boundary constants require a grid")
        a_u, a_l, a_s, c_u, c_l, c_s, k = _gridded_constants(boundary, tau, grid)
    threshold = beta_threshold(stat, q)
    ratio = a_u ** 1.6 / k ** 0.6 if k > 0 else math.inf
    return TheoremConstants(
        a_u=a_u, a_l=a_l, a_s=a_s, c_u=c_u, c_l=c_l, c_s=c_s,
        k=k, threshold=threshold, ratio=ratio,
    )


def example_ratio_closed_form(C_L: float, C_R: float, r1: float, r2: float, tau: float) -> float:
    """Closed-form admissibility ratio of the example family, using the
    conservative lower bound for k (attenuation frozen at p1 = r1):

        4^{8/5} pi^{2/5} (C_L+C_R)^{8/5} / (C_L C_R)^{3/5}
        * (r2-r1)^{2/5} / (r2+r1)^{6/5}
        * exp(24 pi (C_L+C_R)(r2-r1) / (5 tau r1)).

    The quadrature-computed ratio is bounded above by this value.
    """
    amp = C_L + C_R
    return (
        4.0 ** 1.6
        * math.pi ** 0.4
        * amp ** 1.6
        / (C_L * C_R) ** 0.6
        * (r2 - r1) ** 0.4
        / (r2 + r1) ** 1.2
        * math.exp(24.0 * math.pi * amp * (r2 - r1) / (5.0 * tau * r1))
    )


def example_k_lower_bound(C_L: float, C_R: float, r1: float, r2: float, tau: float) -> float:
    """Conservative lower bound pi^2 C_L C_R e^{-8 pi (C_L+C_R)(r2-r1)/(tau r1)}
    (r2^2 - r1^2)^2 for the flux product k."""
    amp = C_L + C_R
    return (
        math.pi ** 2
        * C_L * C_R
        * math.exp(-8.0 * math.pi * amp * (r2 - r1) / (tau * r1))
        * (r2 ** 2 - r1 ** 2) ** 2
    )


@dataclass(frozen=True)
class AssumptionCheck:
    name: str
    passed: bool
    margin: float
    detail: str = ""


@dataclass(frozen=True)
class AssumptionReport:
    checks: tuple[AssumptionCheck, ...]
    constants: TheoremConstants

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> AssumptionCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _transverse_flux_asymmetry(boundary: BoundaryData, grid: Grid) -> float:
    """Worst |int f_{L,R} p_i dp2 dp3| over sampled p1 nodes, i = 2, 3."""
    flr = boundary.values_on(grid).reshape(grid.n1, grid.n23, grid.n23)
    w2 = grid.wt[:, None] * grid.wt[None, :]
    m2 = np.einsum("gij,ij,i->g", flr, w2, grid.pt)
    m3 = np.einsum("gij,ij,j->g", flr, w2, grid.pt)
    return float(max(np.max(np.abs(m2)), np.max(np.abs(m3))))


def check_main_assumptions(
    boundary: BoundaryData,
    tau: float,
    stat: Statistics,
    grid: Grid | None = None,
    q: QuadratureSpec = DEFAULT_QUAD,
    symmetry_tol: float = 1e-10,
) -> AssumptionReport:
    """Verify the existence-theorem hypotheses with explicit margins:
    (1) non-negative data, (2) finite plain and 1/|p1|-weighted moments,
    (3) vanishing transverse inflow momentum, and the threshold condition
    on the ratio a_u^{8/5} / k^{3/5}."""
    tc = boundary_constants(boundary, tau, stat, grid=grid, q=q)

    if isinstance(boundary, GriddedBoundary):
        min_val = float(np.min(boundary.values))
    elif grid is not None:
        min_val = float(np.min(boundary.values_on(grid)))
    else:
        min_val = 0.0  # SlabExampleBoundary is non-negative by construction
    nonneg = AssumptionCheck("nonnegative", min_val >= 0.0, min_val)

    six = (tc.a_u, tc.a_l, tc.a_s, tc.c_u, tc.c_l, tc.c_s)
    finite = all(math.isfinite(v) for v in six)
    integrable = AssumptionCheck(
        "integrable", finite, min(six) if finite else math.nan,
        detail="a_u,a_l,a_s,c_u,c_l,c_s = " + ", ".join(f"{v:.6g}" for v in six),
    )

    if isinstance(boundary, SlabExampleBoundary) and grid is None:
        asym = 0.0  # even transverse Gaussian: exactly zero
    else:
        if grid is None:
            raise InvariantError("assumption (3) for gridded data requires a grid")
        asym = _transverse_flux_asymmetry(boundary, grid)
    symmetric = AssumptionCheck("transverse_symmetry", asym <= symmetry_tol, asym)

    margin = tc.threshold - tc.ratio
    threshold_ok = AssumptionCheck(
        "threshold", tc.k > 0 and margin > 0, margin,
        detail=f"ratio={tc.ratio:.6g} threshold={tc.threshold:.6g}",
    )

    return AssumptionReport(
        checks=(nonneg, integrable, symmetric, threshold_ok), constants=tc
    )


def parameter_bounds(
    tc: TheoremConstants, stat: Statistics, q: QuadratureSpec = DEFAULT_QUAD
) -> tuple[float, float, float, float]:
    """Bounds (a_lo, a_hi, c_lo, c_hi) on the equilibrium parameters of
    any solution-set member:

        c_lo = beta^{-1}(a_u^{8/5}/k^{3/5}),
        c_hi = beta^{-1}(a_l^{8/5}/(a_u c_u)^{3/5}),
        a_lo = mass(c_hi)^{2/3} a_u^{-2/3},
        a_hi = mass(c_lo)^{2/3} a_l^{-2/3}.
    """
    c_lo = beta_inverse(tc.ratio, stat, q)
    c_hi = beta_inverse(tc.a_l ** 1.6 / (tc.a_u * tc.c_u) ** 0.6, stat, q)
    a_lo = mass_integral(c_hi, stat, q) ** (2.0 / 3.0) * tc.a_u ** (-2.0 / 3.0)
    a_hi = mass_integral(c_lo, stat, q) ** (2.0 / 3.0) * tc.a_l ** (-2.0 / 3.0)
    return a_lo, a_hi, c_lo, c_hi

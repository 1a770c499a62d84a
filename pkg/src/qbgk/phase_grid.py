"""Slab x momentum discretization, gridded moments, and the weighted metric.

The momentum grid is a full 3D tensor product: composite Gauss-Legendre
panels in p1 (dyadically refined toward 0, mirrored to p1 < 0, never
placing a node at p1 = 0) and composite Gauss-Legendre panels on each
transverse axis.  The slab grid is uniform on [0, 1] with nx cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .equilibrium import MomentTriple
from .errors import GridMismatchError, InvariantError

Panel = tuple[tuple[float, float], int]


def dyadic_p1_panels(
    p1_max: float = 8.0,
    levels: int = 6,
    order: int = 8,
    breakpoints: tuple[float, ...] = (),
) -> tuple[Panel, ...]:
    """Dyadic panels on (0, p1_max]: breakpoints p1_max * 2^{-k} for
    k = levels..0 plus a closing panel [0, p1_max*2^{-levels}] whose
    Gauss-Legendre nodes stay strictly interior.  Extra breakpoints
    (e.g. the support edges of an indicator boundary) are merged in.
    """
    if p1_max <= 0 or levels < 1 or order < 1:
        raise InvariantError("p1_max, levels and order must be positive")
    edges = {0.0, p1_max}
    edges.update(p1_max * 2.0 ** (-k) for k in range(1, levels + 1))
    for b in breakpoints:
        if b <= 0:
            raise InvariantError(f"p1 breakpoints must be positive; got {b}")
        edges.add(float(b))
    srt = sorted(edges)
    return tuple(((lo, hi), order) for lo, hi in zip(srt[:-1], srt[1:]))


@dataclass(frozen=True)
class GridSpec:
    """Discretization parameters.

    nx: slab cells, uniform on [0, 1] (nx + 1 nodes).
    p1_panels: composite Gauss-Legendre panels for p1 > 0, mirrored.
    p23_nodes: nodes per transverse axis; split over 8 mirrored panels
               with breakpoints at fractions {1/8, 1/4, 1/2, 1} of p_max,
               so it must be divisible by 8.
    p_max: transverse momentum cutoff.
    """

    nx: int = 64
    p1_panels: tuple[Panel, ...] = field(default_factory=dyadic_p1_panels)
    p23_nodes: int = 48
    p_max: float = 8.0

    def __post_init__(self):
        if self.nx < 1:
            raise InvariantError("nx must be a positive integer")
        if self.p_max <= 0:
            raise InvariantError("p_max must be positive")
        if self.p23_nodes < 8 or self.p23_nodes % 8:
            raise InvariantError("p23_nodes must be a positive multiple of 8")
        prev = 0.0
        for (lo, hi), order in self.p1_panels:
            if lo < prev - 1e-15 or hi <= lo or order < 1:
                raise InvariantError(f"invalid p1 panel (({lo}, {hi}), {order})")
            prev = hi


def _gauss_panel(lo: float, hi: float, order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (hi - lo) * x + 0.5 * (hi + lo), 0.5 * (hi - lo) * w


def _composite(panels):
    xs, ws = [], []
    for (lo, hi), order in panels:
        x, w = _gauss_panel(lo, hi, order)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


@dataclass(frozen=True)
class Grid:
    """Built tensor grid: momentum nodes are flattened in the order
    (p1 index, p2 index, p3 index); p1 nodes ascend from negative to
    positive with the mirror symmetry p -> -p preserved exactly."""

    spec: GridSpec
    x: np.ndarray          # (nx+1,) slab nodes
    p1: np.ndarray         # (n1,) signed p1 nodes, ascending
    w1: np.ndarray         # (n1,) p1 weights
    pt: np.ndarray         # (n23,) transverse nodes (shared by both axes)
    wt: np.ndarray         # (n23,)
    p: np.ndarray          # (npts, 3) flattened momentum nodes
    w: np.ndarray          # (npts,) tensor weights

    @property
    def n1(self) -> int:
        return self.p1.size

    @property
    def n23(self) -> int:
        return self.pt.size

    @property
    def npts(self) -> int:
        return self.p.shape[0]

    @property
    def dx(self) -> float:
        return 1.0 / self.spec.nx

    @property
    def psq(self) -> np.ndarray:
        return np.sum(self.p * self.p, axis=-1)

    def momentum_integral(self, values: np.ndarray) -> np.ndarray:
        """Quadrature sum over momentum nodes (last axis)."""
        return values @ self.w


def build_grid(spec: GridSpec) -> Grid:
    """Build the tensor grid described by spec."""
    x = np.linspace(0.0, 1.0, spec.nx + 1)

    p1_pos, w1_pos = _composite(spec.p1_panels)
    p1 = np.concatenate([-p1_pos[::-1], p1_pos])
    w1 = np.concatenate([w1_pos[::-1], w1_pos])
    if np.any(p1 == 0.0):
        raise InvariantError("p1 grid placed a node at 0")

    frac = np.array([0.0, 0.125, 0.25, 0.5, 1.0]) * spec.p_max
    order = spec.p23_nodes // 8
    panels = tuple(((lo, hi), order) for lo, hi in zip(frac[:-1], frac[1:]))
    pt_pos, wt_pos = _composite(panels)
    pt = np.concatenate([-pt_pos[::-1], pt_pos])
    wt = np.concatenate([wt_pos[::-1], wt_pos])

    P1, P2, P3 = np.meshgrid(p1, pt, pt, indexing="ij")
    p = np.stack([P1.ravel(), P2.ravel(), P3.ravel()], axis=-1)
    w = (w1[:, None, None] * wt[None, :, None] * wt[None, None, :]).ravel()
    return Grid(spec=spec, x=x, p1=p1, w1=w1, pt=pt, wt=wt, p=p, w=w)


@dataclass
class DistributionField:
    """Distribution values on the tensor grid: shape (nx+1, npts)."""

    grid: Grid
    values: np.ndarray
    boundary: object = None

    def __post_init__(self):
        expected = (self.grid.x.size, self.grid.npts)
        if self.values.shape != expected:
            raise InvariantError(
                f"field shape {self.values.shape} does not match grid {expected}"
            )
        if not np.all(np.isfinite(self.values)):
            raise InvariantError("field contains non-finite values")

    def copy(self) -> "DistributionField":
        return DistributionField(self.grid, self.values.copy(), self.boundary)


@dataclass(frozen=True)
class MomentProfile:
    """Per-slab-node moments of a gridded field."""

    x: np.ndarray   # (nx+1,)
    N: np.ndarray   # (nx+1,)
    P: np.ndarray   # (nx+1, 3)
    E: np.ndarray   # (nx+1,)

    def at(self, i: int) -> MomentTriple:
        return MomentTriple(N=float(self.N[i]), P=tuple(self.P[i]), E=float(self.E[i]))

    def gram(self) -> np.ndarray:
        return self.E * self.N - np.sum(self.P * self.P, axis=-1)


def compute_moments(f: DistributionField) -> MomentProfile:
    """Quadrature moments N, P, E at every slab node."""
    g = f.grid
    n = f.values @ g.w
    if np.any(n <= 0.0):
        i = int(np.argmin(n))
        raise InvariantError(f"non-positive mass N={n[i]} at x-node {i}")
    p = f.values @ (g.w[:, None] * g.p)
    e = f.values @ (g.w * g.psq)
    return MomentProfile(x=g.x, N=n, P=p, E=e)


def weighted_distance(f: DistributionField, g: DistributionField) -> float:
    """sup over x of the weighted L^1 norm int |f-g| (1+|p|^2) dp."""
    if f.grid is not g.grid and (
        f.grid.npts != g.grid.npts
        or f.grid.x.size != g.grid.x.size
        or not np.array_equal(f.grid.p, g.grid.p)
    ):
        raise GridMismatchError("weighted_distance requires identical grids")
    wq = f.grid.w * (1.0 + f.grid.psq)
    return float(np.max(np.abs(f.values - g.values) @ wq))


def weighted_norms(f: DistributionField) -> np.ndarray:
    """Per-x weighted L^1 norm of f (used by diagnostics)."""
    wq = f.grid.w * (1.0 + f.grid.psq)
    return np.abs(f.values) @ wq

"""Solver configuration: TOML parsing with strict keys and defaults."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from .errors import ConfigError
from .phase_grid import GridSpec, dyadic_p1_panels
from .quantum_stats import Statistics
from .transport import BoundaryData, GriddedBoundary, SlabExampleBoundary

_TOP_KEYS = {
    "statistics", "tau", "tolerance", "max_iters", "lambda_policy",
    "seed", "probe_count", "output_dir",
}
_GRID_KEYS = {"nx", "p_max", "p1_levels", "p1_order", "p1_max", "p23_nodes"}
_BOUNDARY_KEYS = {"kind", "C_L", "C_R", "r1", "r2", "path"}


@dataclass(frozen=True)
class BoundarySpec:
    """Boundary description prior to grid construction."""

    kind: str
    C_L: float = 1.0
    C_R: float = 1.0
    r1: float = 10.0
    r2: float = 11.0
    path: str = ""


@dataclass(frozen=True)
class SolverConfig:
    statistics: Statistics
    tau: float
    boundary: BoundarySpec
    nx: int = 64
    p_max: float = 8.0
    p1_levels: int = 6
    p1_order: int = 8
    p1_max: float = 0.0  # 0 = derive from p_max / boundary support
    p23_nodes: int = 48
    tolerance: float = 1e-8
    max_iters: int = 200
    lambda_policy: str = "abort"
    seed: int = 42
    probe_count: int = 4
    output_dir: str = "."

    def grid_spec(self) -> GridSpec:
        """Grid with p1 panels adapted to the boundary support: indicator
        edges become panel breakpoints and the p1 range is extended past
        the support so no inflow mass is truncated."""
        p1_max = self.p1_max
        breakpoints: tuple[float, ...] = ()
        if self.boundary.kind == "slab_example":
            b = self.boundary
            if p1_max <= 0:
                p1_max = max(self.p_max, b.r2 + 1.0)
            breakpoints = tuple(
                v for v in (b.r1, b.r2, self.p_max) if 0.0 < v < p1_max
            )
        elif p1_max <= 0:
            p1_max = self.p_max
        panels = dyadic_p1_panels(
            p1_max=p1_max, levels=self.p1_levels, order=self.p1_order,
            breakpoints=breakpoints,
        )
        return GridSpec(
            nx=self.nx, p1_panels=panels, p23_nodes=self.p23_nodes, p_max=self.p_max
        )

    def build_boundary(self, grid) -> BoundaryData:
        b = self.boundary
        if b.kind == "slab_example":
            return SlabExampleBoundary(C_L=b.C_L, C_R=b.C_R, r1=b.r1, r2=b.r2)
        data = np.load(b.path)
        if "values" not in data:
            raise ConfigError(
                f"gridded boundary file {b.path} lacks a 'values' array",
                field="boundary.path",
            )
        return GriddedBoundary(grid=grid, values=np.asarray(data["values"], dtype=float))


def _require(table: dict, allowed: set[str], section: str) -> None:
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ConfigError(
            f"unknown key(s) in [{section}]: {', '.join(unknown)}",
            field=unknown[0],
        )


def _positive(value, name):
    if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
        raise ConfigError(f"'{name}' must be a positive number; got {value!r}", field=name)
    return value


def parse_config(text: str) -> SolverConfig:
    """Parse and validate a TOML configuration.

    Required keys: statistics, tau, [boundary].  Everything else has a
    documented default.  Unknown keys are rejected.
    """
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error: {exc}") from exc

    top = {k: v for k, v in raw.items() if not isinstance(v, dict)}
    _require(top, _TOP_KEYS, "top level")
    sections = {k: v for k, v in raw.items() if isinstance(v, dict)}
    _require(sections, {"grid", "boundary"}, "top level")

    if "statistics" not in top:
        raise ConfigError("missing required key 'statistics'", field="statistics")
    try:
        stat = Statistics(str(top["statistics"]).lower())
    except ValueError:
        raise ConfigError(
            f"'statistics' must be 'boson' or 'fermion'; got {top['statistics']!r}",
            field="statistics",
        ) from None

    if "tau" not in top:
        raise ConfigError("missing required key 'tau'", field="tau")
    tau = float(_positive(top["tau"], "tau"))

    if "boundary" not in sections:
        raise ConfigError("missing required section [boundary]", field="boundary")
    btab = sections["boundary"]
    _require(btab, _BOUNDARY_KEYS, "boundary")
    kind = btab.get("kind", "slab_example")
    if kind not in ("slab_example", "gridded"):
        raise ConfigError(
            f"boundary.kind must be 'slab_example' or 'gridded'; got {kind!r}",
            field="boundary.kind",
        )
    if kind == "slab_example":
        bspec = BoundarySpec(
            kind=kind,
            C_L=float(_positive(btab.get("C_L", 1.0), "boundary.C_L")),
            C_R=float(_positive(btab.get("C_R", 1.0), "boundary.C_R")),
            r1=float(_positive(btab.get("r1", 10.0), "boundary.r1")),
            r2=float(_positive(btab.get("r2", 11.0), "boundary.r2")),
        )
        if bspec.r1 >= bspec.r2:
            raise ConfigError("boundary requires r1 < r2", field="boundary.r1")
    else:
        path = btab.get("path", "")
        if not path:
            raise ConfigError("gridded boundary requires 'path'", field="boundary.path")
        if not Path(path).exists():
            raise ConfigError(f"boundary file not found: {path}", field="boundary.path")
        bspec = BoundarySpec(kind=kind, path=str(path))

    gtab = sections.get("grid", {})
    _require(gtab, _GRID_KEYS, "grid")

    policy = top.get("lambda_policy", "abort")
    if policy not in ("abort", "warn"):
        raise ConfigError(
            f"lambda_policy must be 'abort' or 'warn'; got {policy!r}",
            field="lambda_policy",
        )

    def ipos(table, key, default, name):
        v = table.get(key, default)
        _positive(v, name)
        if int(v) != v:
            raise ConfigError(f"'{name}' must be an integer; got {v!r}", field=name)
        return int(v)

    return SolverConfig(
        statistics=stat,
        tau=tau,
        boundary=bspec,
        nx=ipos(gtab, "nx", 64, "grid.nx"),
        p_max=float(_positive(gtab.get("p_max", 8.0), "grid.p_max")),
        p1_levels=ipos(gtab, "p1_levels", 6, "grid.p1_levels"),
        p1_order=ipos(gtab, "p1_order", 8, "grid.p1_order"),
        p1_max=float(gtab.get("p1_max", 0.0)),
        p23_nodes=ipos(gtab, "p23_nodes", 48, "grid.p23_nodes"),
        tolerance=float(_positive(top.get("tolerance", 1e-8), "tolerance")),
        max_iters=ipos(top, "max_iters", 200, "max_iters"),
        lambda_policy=policy,
        seed=ipos(top, "seed", 42, "seed") if top.get("seed", 42) != 0 else 0,
        probe_count=ipos(top, "probe_count", 4, "probe_count"),
        output_dir=str(top.get("output_dir", ".")),
    )

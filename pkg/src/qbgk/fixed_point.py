"""Picard iteration driver, solution-set membership checks, and the
empirical contraction estimate.

The solution set consists of fields that are (A) non-negative, (B) have
mass and energy profiles inside [a_l, a_u] x [c_l, c_u], and (C) satisfy
N E - |P|^2 >= k at every slab position.  The driver iterates the
transport operator from the attenuated boundary data, checks membership
at every iterate, and records the weighted-metric distance history.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import InvariantError, QbgkError
from .phase_grid import (
    DistributionField,
    Grid,
    compute_moments,
    weighted_distance,
)
from .quantum_stats import DEFAULT_QUAD, QuadratureSpec, Statistics
from .theorem_check import TheoremConstants, boundary_constants
from .transport import (
    BoundaryData,
    apply_solution_operator,
    initial_iterate,
    solve_params_profile,
)

log = logging.getLogger(__name__)


class LambdaViolationError(QbgkError):
    """An iterate left the solution set (abort policy)."""


@dataclass(frozen=True)
class ConditionMargin:
    """Worst margin of one membership condition (negative = violated)."""

    name: str
    margin: float
    location: int  # x-node (B, C) or flat index (A) of the worst margin

    @property
    def passed(self) -> bool:
        return self.margin >= 0.0


@dataclass(frozen=True)
class LambdaReport:
    """Membership report: one margin per condition, normalized by the
    scale of the corresponding constant where applicable."""

    conditions: tuple[ConditionMargin, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def __getitem__(self, name: str) -> ConditionMargin:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def worst(self) -> ConditionMargin:
        return min(self.conditions, key=lambda c: c.margin)


def lambda_check(f: DistributionField, tc: TheoremConstants) -> LambdaReport:
    """Report the worst margin of each solution-set condition."""
    min_idx = int(np.argmin(f.values))
    cond_a = ConditionMargin("A_nonnegative", float(f.values.min()), min_idx)

    mom = compute_moments(f)
    out = [cond_a]
    for name, vals, bound, sign in (
        ("B_mass_lower", mom.N, tc.a_l, +1),
        ("B_mass_upper", mom.N, tc.a_u, -1),
        ("B_energy_lower", mom.E, tc.c_l, +1),
        ("B_energy_upper", mom.E, tc.c_u, -1),
    ):
        margins = sign * (vals - bound)
        i = int(np.argmin(margins))
        out.append(ConditionMargin(name, float(margins[i]), i))

    gram = mom.gram() - tc.k
    i = int(np.argmin(gram))
    out.append(ConditionMargin("C_gram", float(gram[i]), i))
    return LambdaReport(conditions=tuple(out))


@dataclass
class SolutionReport:
    """Outcome of a Picard solve."""

    converged: bool
    iterations: int
    final_distance: float
    distance_history: list[float] = field(default_factory=list)
    margin_history: list[tuple[float, float, float]] = field(default_factory=list)
    lambda_violations: list[tuple[int, str, float]] = field(default_factory=list)
    profiles: dict[str, np.ndarray] = field(default_factory=dict)
    constants: TheoremConstants | None = None
    final_field: DistributionField | None = None

    def __post_init__(self):
        if self.converged and self.lambda_violations:
            raise InvariantError("a converged report cannot carry violations")


def _record_violations(report_list, it, lam):
    for cond in lam.conditions:
        if not cond.passed:
            report_list.append((it, cond.name, cond.margin))


def _condition_summary(lam: LambdaReport) -> tuple[float, float, float]:
    """Min margin of each condition family (A, B, C)."""
    a = lam["A_nonnegative"].margin
    b = min(lam[n].margin for n in (
        "B_mass_lower", "B_mass_upper", "B_energy_lower", "B_energy_upper"))
    c = lam["C_gram"].margin
    return a, b, c


def picard_solve(
    boundary: BoundaryData,
    tau: float,
    grid: Grid,
    stat: Statistics,
    tol: float = 1e-8,
    max_iters: int = 200,
    lambda_policy: str = "abort",
    tc: TheoremConstants | None = None,
    q: QuadratureSpec = DEFAULT_QUAD,
) -> SolutionReport:
    """Iterate the transport operator to a fixed point.

    Starts from the attenuated boundary data, stops when the weighted
    distance between consecutive iterates drops below tol.  Membership
    is checked at every iterate; lambda_policy selects abort (raise) or
    warn (record and continue).
    """
    if lambda_policy not in ("abort", "warn"):
        raise InvariantError(f"unknown lambda_policy {lambda_policy!r}")
    if tc is None:
        tc = boundary_constants(boundary, tau, stat, grid=grid, q=q)

    f = initial_iterate(boundary, grid, tau, tc.a_u)
    violations: list[tuple[int, str, float]] = []
    lam = lambda_check(f, tc)
    _record_violations(violations, 0, lam)
    if violations and lambda_policy == "abort":
        raise LambdaViolationError(
            f"initial iterate violates {violations[0][1]} by {violations[0][2]:.3e}"
        )

    history: list[float] = []
    margins: list[tuple[float, float, float]] = [_condition_summary(lam)]
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        nxt = apply_solution_operator(f, tau, stat, q)
        dist = weighted_distance(nxt, f)
        history.append(dist)
        lam = lambda_check(nxt, tc)
        margins.append(_condition_summary(lam))
        before = len(violations)
        _record_violations(violations, it, lam)
        if len(violations) > before:
            if lambda_policy == "abort":
                worst = lam.worst()
                raise LambdaViolationError(
                    f"iterate {it} violates {worst.name} by {worst.margin:.3e}"
                )
            log.warning("iterate %d left the solution set: %s", it, lam.worst())
        f = nxt
        if dist <= tol:
            converged = len(violations) == 0
            break

    mom = compute_moments(f)
    params = solve_params_profile(mom, stat, q)
    profiles = {
        "x": grid.x.copy(),
        "N": mom.N,
        "P": mom.P,
        "E": mom.E,
        "a": np.array([p.a for p in params]),
        "c": np.array([p.c for p in params]),
    }
    return SolutionReport(
        converged=converged,
        iterations=it,
        final_distance=history[-1] if history else 0.0,
        distance_history=history,
        margin_history=margins,
        lambda_violations=violations,
        profiles=profiles,
        constants=tc,
        final_field=f,
    )


def generate_probes(
    boundary: BoundaryData,
    tau: float,
    grid: Grid,
    tc: TheoremConstants,
    count: int = 4,
    seed: int = 42,
    amplitude: float = 0.5,
) -> list[DistributionField]:
    """Solution-set member fields used for contraction probing.

    Starts from the attenuated boundary data, adds non-negative random
    multiplicative perturbations (which can only raise mass and energy,
    both of which start at or below half their upper bounds), and mixes
    in convex combinations; every candidate is membership-checked and
    discarded on failure.
    """
    rng = np.random.default_rng(seed)
    f0 = initial_iterate(boundary, grid, tau, tc.a_u)
    probes = [f0]
    attempts = 0
    while len(probes) < count and attempts < 8 * count:
        attempts += 1
        bump = 1.0 + amplitude * rng.random(f0.values.shape)
        cand = DistributionField(grid, f0.values * bump, boundary)
        if len(probes) >= 2 and attempts % 3 == 0:
            theta = rng.choice([0.25, 0.5, 0.75])
            a, b = rng.choice(len(probes), size=2, replace=False)
            cand = DistributionField(
                grid,
                theta * probes[a].values + (1.0 - theta) * probes[b].values,
                boundary,
            )
        if lambda_check(cand, tc).passed:
            probes.append(cand)
    if len(probes) < 2:
        raise InvariantError("failed to generate at least two admissible probes")
    return probes


def contraction_estimate(
    boundary: BoundaryData,
    tau: float,
    grid: Grid,
    stat: Statistics,
    probe_count: int = 4,
    seed: int = 42,
    tc: TheoremConstants | None = None,
    q: QuadratureSpec = DEFAULT_QUAD,
) -> float:
    """Empirical contraction factor: max over probe pairs of
    d(Phi f, Phi g) / d(f, g), skipping degenerate pairs."""
    if tc is None:
        tc = boundary_constants(boundary, tau, stat, grid=grid, q=q)
    probes = generate_probes(boundary, tau, grid, tc, count=probe_count, seed=seed)
    images = [apply_solution_operator(p, tau, stat, q) for p in probes]
    best = 0.0
    for i in range(len(probes)):
        for j in range(i + 1, len(probes)):
            denom = weighted_distance(probes[i], probes[j])
            if denom <= 1e-300:
                continue
            best = max(best, weighted_distance(images[i], images[j]) / denom)
    return best

"""Local quantum equilibrium: regime classification, parameter solve,
pointwise evaluation and closed-form moments.

Given local moments (N, P, E) the regular-regime equilibrium is

    K(p) = 1 / (e^{a |p - u|^2 + c} +- 1),   u = P / N,

with c recovered from the moment ratio through the inverse of beta and
a = (mass_integral(c) / N)^{2/3}.  When the ratio reaches the statistics
threshold the state is condensed (boson: delta-function weight) or
saturated (fermion: Pauli-blocked sphere); those regimes are represented
but never evaluated pointwise here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvariantError, RegimeError
from .quantum_stats import (
    DEFAULT_QUAD,
    QuadratureSpec,
    Statistics,
    beta_inverse,
    beta_threshold,
    mass_integral,
    energy_integral,
)


@dataclass(frozen=True)
class MomentTriple:
    """Local mass N, momentum P (3-vector) and energy E."""

    N: float
    P: tuple[float, float, float]
    E: float

    def __post_init__(self):
        if self.N <= 0:
            raise InvariantError(f"mass must be positive; got N={self.N}")
        if self.E <= 0:
            raise InvariantError(f"energy must be positive; got E={self.E}")
        if self.gram() <= 0:
            raise InvariantError(
                f"E*N - |P|^2 must be positive; got {self.gram()}"
            )

    def p_norm_sq(self) -> float:
        return float(self.P[0] ** 2 + self.P[1] ** 2 + self.P[2] ** 2)

    def gram(self) -> float:
        """E*N - |P|^2, the Cauchy-Schwarz determinant of the moments."""
        return self.E * self.N - self.p_norm_sq()

    def ratio(self) -> float:
        """N^{8/5} / (E*N - |P|^2)^{3/5}, compared against the statistics
        threshold to classify the regime."""
        return self.N ** 1.6 / self.gram() ** 0.6


class RegimeTag(enum.Enum):
    REGULAR = "regular"
    CONDENSED = "condensed"
    SATURATED = "saturated"


@dataclass(frozen=True)
class Regime:
    """Classification result; weight for condensed bosons, radius for
    saturated fermions."""

    tag: RegimeTag
    weight: Optional[float] = None
    radius: Optional[float] = None

    def __post_init__(self):
        if self.tag is RegimeTag.CONDENSED and (self.weight is None or self.weight <= 0):
            raise InvariantError("condensed regime requires a positive weight")
        if self.tag is RegimeTag.SATURATED and (self.radius is None or self.radius <= 0):
            raise InvariantError("saturated regime requires a positive radius")


REGULAR = Regime(RegimeTag.REGULAR)


@dataclass(frozen=True)
class EquilibriumParams:
    """Solved equilibrium parameters for one slab position."""

    stat: Statistics
    a: float
    c: float
    u: tuple[float, float, float]
    regime: Regime = REGULAR


def classify(m: MomentTriple, stat: Statistics, q: QuadratureSpec = DEFAULT_QUAD) -> Regime:
    """Classify the local regime from the moment ratio.

    Bosons stay regular up to and including the threshold (the range of
    beta is closed at beta_B(0)); fermions require a strict inequality.
    """
    rho = m.ratio()
    top = beta_threshold(stat, q)
    if stat is Statistics.BOSON:
        if rho <= top:
            return REGULAR
        weight = m.N - top * (m.E - m.p_norm_sq() / m.N) ** 0.6
        return Regime(RegimeTag.CONDENSED, weight=weight)
    if rho < top:
        return REGULAR
    return Regime(RegimeTag.SATURATED, radius=(3.0 * m.N / (4.0 * math.pi)) ** (1.0 / 3.0))


def solve_parameters(
    m: MomentTriple, stat: Statistics, q: QuadratureSpec = DEFAULT_QUAD
) -> EquilibriumParams:
    """Solve the nonlinear moment relations for (a, c) in the regular regime."""
    regime = classify(m, stat, q)
    if regime.tag is not RegimeTag.REGULAR:
        raise RegimeError(
            f"moments classify as {regime.tag.value}; equilibrium parameters "
            "are only defined in the regular regime"
        )
    c = beta_inverse(m.ratio(), stat, q)
    a = (mass_integral(c, stat, q) / m.N) ** (2.0 / 3.0)
    u = (m.P[0] / m.N, m.P[1] / m.N, m.P[2] / m.N)
    return EquilibriumParams(stat=stat, a=a, c=c, u=u, regime=REGULAR)


def evaluate(params: EquilibriumParams, p: np.ndarray) -> np.ndarray:
    """Pointwise equilibrium value 1/(e^{a|p-u|^2+c} +- 1).

    p has shape (..., 3); returns shape (...).  Only defined in the
    regular regime; the saturated indicator has its own branch below and
    the condensed delta has no pointwise value.
    """
    if params.regime.tag is not RegimeTag.REGULAR:
        raise RegimeError(
            f"pointwise evaluation undefined in {params.regime.tag.value} regime"
        )
    p = np.asarray(p, dtype=float)
    d = p - np.asarray(params.u)
    expo = params.a * np.sum(d * d, axis=-1) + params.c
    # exp overflow in the far tail is the correct limit (value 0)
    with np.errstate(over="ignore"):
        return 1.0 / (np.exp(expo) + params.stat.sign)


def saturated_indicator(m: MomentTriple, p: np.ndarray) -> np.ndarray:
    """Saturated Fermi-Dirac value: indicator of |p - P/N| <= (3N/4pi)^{1/3}.

    Documented separate branch for the saturated regime; not reachable
    through evaluate().
    """
    radius = (3.0 * m.N / (4.0 * math.pi)) ** (1.0 / 3.0)
    p = np.asarray(p, dtype=float)
    u = np.array(m.P) / m.N
    d = p - u
    return (np.sum(d * d, axis=-1) <= radius * radius).astype(float)


def analytic_moments(params: EquilibriumParams, q: QuadratureSpec = DEFAULT_QUAD) -> MomentTriple:
    """Closed-form moments of a regular equilibrium.

    Obtained by the substitution p -> u + q/sqrt(a):
        N = mass_integral(c) / a^{3/2},
        P = N u,
        E = N |u|^2 + energy_integral(c) / a^{5/2}.
    """
    if params.regime.tag is not RegimeTag.REGULAR:
        raise RegimeError("analytic moments only defined in the regular regime")
    n = mass_integral(params.c, params.stat, q) / params.a ** 1.5
    usq = params.u[0] ** 2 + params.u[1] ** 2 + params.u[2] ** 2
    e = n * usq + energy_integral(params.c, params.stat, q) / params.a ** 2.5
    return MomentTriple(N=n, P=(n * params.u[0], n * params.u[1], n * params.u[2]), E=e)

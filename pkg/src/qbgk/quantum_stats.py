"""Bose/Fermi momentum integrals, the moment ratio beta, and its inverse.

The centered equilibrium 1/(e^{|p|^2+c} +- 1) has spherically symmetric
mass and energy integrals, reduced here to radial form

    mass(c)   = 4 pi int_0^inf r^2 / (e^{r^2+c} +- 1) dr,
    energy(c) = 4 pi int_0^inf r^4 / (e^{r^2+c} +- 1) dr,

evaluated by composite Gauss-Legendre panels on [0, R].  The ratio
beta(c) = mass / energy^{3/5} is strictly decreasing on [0, inf) for
bosons and on (-ln 3, inf) for fermions, which makes it invertible by
bracketed root finding on those domains.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NonConvergenceError, RangeError

FERMION_C_MIN = -math.log(3.0)
_FERMION_EDGE_PAD = 1e-12


class Statistics(enum.Enum):
    """Particle statistics: selects the sign in 1/(e^x +- 1) and the
    domain on which beta is invertible."""

    BOSON = "boson"
    FERMION = "fermion"

    @property
    def sign(self) -> float:
        """+1 for fermions, -1 for bosons."""
        return 1.0 if self is Statistics.FERMION else -1.0

    @property
    def c_min(self) -> float:
        """Left endpoint of the invertible domain of beta."""
        if self is Statistics.BOSON:
            return 0.0
        return FERMION_C_MIN + _FERMION_EDGE_PAD


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls the radial quadrature for the statistics integrals.

    radial_cutoff must be large enough that the e^{-R^2} tail is below
    tolerance; the default R = 12 leaves a tail ~ e^{-144}.
    series_terms is the truncation used by series-based cross-checks.
    """

    radial_panel_count: int = 12
    panel_order: int = 16
    radial_cutoff: float = 12.0
    series_terms: int = 400

    def __post_init__(self):
        if self.radial_panel_count <= 0 or self.panel_order <= 0:
            raise DomainError("panel count and order must be positive")
        if self.radial_cutoff <= 0:
            raise DomainError("radial_cutoff must be positive")
        if self.series_terms <= 0:
            raise DomainError("series_terms must be positive")


DEFAULT_QUAD = QuadratureSpec()


@lru_cache(maxsize=32)
def _radial_rule(q: QuadratureSpec):
    """Composite Gauss-Legendre nodes/weights on [0, radial_cutoff]."""
    xg, wg = np.polynomial.legendre.leggauss(q.panel_order)
    edges = np.linspace(0.0, q.radial_cutoff, q.radial_panel_count + 1)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (hi - lo) * xg + 0.5 * (hi + lo))
        weights.append(0.5 * (hi - lo) * wg)
    return np.concatenate(nodes), np.concatenate(weights)


def _check_domain(c: float, stat: Statistics) -> None:
    if stat is Statistics.BOSON and c < 0:
        raise DomainError(
            f"boson integrals require c >= 0 (integrand singular); got c={c}"
        )


def _radial_moment(c: float, stat: Statistics, q: QuadratureSpec, power: int) -> float:
    r, w = _radial_rule(q)
    val = 4.0 * math.pi * float(np.sum(w * r**power / (np.exp(r * r + c) + stat.sign)))
    if not math.isfinite(val) or val <= 0.0:
        raise NonConvergenceError(
            f"radial quadrature produced non-positive/non-finite value {val} at c={c}"
        )
    return val


def mass_integral(c: float, stat: Statistics, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """int_R3 dp / (e^{|p|^2+c} +- 1), reduced to radial form."""
    _check_domain(c, stat)
    return _radial_moment(c, stat, q, 2)


def energy_integral(c: float, stat: Statistics, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """int_R3 |p|^2 dp / (e^{|p|^2+c} +- 1), reduced to radial form."""
    _check_domain(c, stat)
    return _radial_moment(c, stat, q, 4)


def beta(c: float, stat: Statistics, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Moment ratio mass_integral(c) / energy_integral(c)^{3/5}."""
    return mass_integral(c, stat, q) / energy_integral(c, stat, q) ** 0.6


@lru_cache(maxsize=32)
def beta_threshold(stat: Statistics, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Supremum of beta on its invertible domain: beta_B(0) for bosons,
    beta_F(-ln 3) for fermions.  Moment ratios at or above this value
    signal condensation / saturation."""
    return beta(stat.c_min, stat, q)


def beta_inverse(y: float, stat: Statistics, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Unique c in the restricted domain with beta(c) = y.

    Uses bracket expansion plus Brent root finding; beta is strictly
    decreasing so the bracket is guaranteed once beta(c_hi) < y.
    Raises RangeError for y outside (0, threshold).
    """
    if y <= 0.0:
        raise RangeError(f"beta target must be positive; got {y}")
    c_lo = stat.c_min
    top = beta_threshold(stat, q)
    if y >= top:
        raise RangeError(
            f"beta target {y} >= threshold {top} for {stat.value}: "
            "moments indicate condensation/saturation, not invertible"
        )
    # geometric bracket expansion to the right of the domain endpoint
    step = 1.0
    c_hi = c_lo + step
    while beta(c_hi, stat, q) > y:
        step *= 2.0
        c_hi = c_lo + step
        if step > 1e6:
            raise NonConvergenceError("bracket expansion for beta_inverse stalled")
    c = brentq(lambda t: beta(t, stat, q) - y, c_lo, c_hi, xtol=1e-13, rtol=1e-15)
    if abs(beta(c, stat, q) - y) > 1e-10 * y:
        raise NonConvergenceError("beta_inverse did not reach tolerance 1e-10 in y")
    return float(c)

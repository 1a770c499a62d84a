"""Independent oracles used by the tests.

These deliberately avoid the library's own quadrature path: the series
oracle sums the polylogarithm expansion term by term, the adaptive
oracle uses scipy.integrate.quad on the radial integrand, and the dense
moment oracle integrates the closed-form equilibrium on a plain tensor
grid built here.
"""

import math

import numpy as np
from scipy.integrate import quad

from qbgk.quantum_stats import Statistics


def series_mass(c: float, stat: Statistics, terms: int = 400) -> float:
    """pi^{3/2} * sum_{n>=1} (-+1)^{n+1} e^{-nc} / n^{3/2} (boson: all +)."""
    if c <= 0 and not (stat is Statistics.BOSON and c == 0.0):
        raise ValueError("series oracle requires c > 0 (or boson c = 0)")
    total = 0.0
    for n in range(1, terms + 1):
        term = math.exp(-n * c) / n ** 1.5
        if stat is Statistics.FERMION and n % 2 == 0:
            term = -term
        total += term
    if stat is Statistics.BOSON and c == 0.0:
        # Euler-Maclaurin tail for sum_{n>N} n^{-3/2}
        n = float(terms)
        total += 2.0 / n ** 0.5 - 0.5 / n ** 1.5 + 0.125 / n ** 2.5
    return math.pi ** 1.5 * total


def series_energy(c: float, stat: Statistics, terms: int = 400) -> float:
    """(3/2) pi^{3/2} * sum_{n>=1} (-+1)^{n+1} e^{-nc} / n^{5/2}."""
    if c <= 0 and not (stat is Statistics.BOSON and c == 0.0):
        raise ValueError("series oracle requires c > 0 (or boson c = 0)")
    total = 0.0
    for n in range(1, terms + 1):
        term = math.exp(-n * c) / n ** 2.5
        if stat is Statistics.FERMION and n % 2 == 0:
            term = -term
        total += term
    if stat is Statistics.BOSON and c == 0.0:
        # Euler-Maclaurin tail for sum_{n>N} n^{-5/2}
        n = float(terms)
        total += (2.0 / 3.0) / n ** 1.5 - 0.5 / n ** 2.5 + (5.0 / 24.0) / n ** 3.5
    return 1.5 * math.pi ** 1.5 * total


def quad_mass(c: float, stat: Statistics) -> float:
    """Adaptive quadrature of 4 pi r^2 / (e^{r^2+c} +- 1)."""
    sign = stat.sign
    val, _ = quad(
        lambda r: 4.0 * math.pi * r * r / (math.exp(r * r + c) + sign),
        0.0, 14.0, epsabs=1e-14, epsrel=1e-12, limit=200,
    )
    return val


def quad_energy(c: float, stat: Statistics) -> float:
    """Adaptive quadrature of 4 pi r^4 / (e^{r^2+c} +- 1)."""
    sign = stat.sign
    val, _ = quad(
        lambda r: 4.0 * math.pi * r ** 4 / (math.exp(r * r + c) + sign),
        0.0, 14.0, epsabs=1e-14, epsrel=1e-12, limit=200,
    )
    return val


def quad_beta(c: float, stat: Statistics) -> float:
    return quad_mass(c, stat) / quad_energy(c, stat) ** 0.6


def dense_moments(a: float, c: float, u, stat: Statistics, n: int = 160, half: float = 9.0):
    """Brute-force tensor-grid moments of 1/(e^{a|p-u|^2+c} +- 1).

    Independent of the library grid: one plain Gauss-Legendre rule per
    axis, centred on the drift.
    """
    xg, wg = np.polynomial.legendre.leggauss(n)
    u = np.asarray(u, dtype=float)
    axes, wts = [], []
    for i in range(3):
        axes.append(half * xg + u[i])
        wts.append(half * wg)
    P1, P2, P3 = np.meshgrid(axes[0], axes[1], axes[2], indexing="ij")
    W = wts[0][:, None, None] * wts[1][None, :, None] * wts[2][None, None, :]
    d2 = (P1 - u[0]) ** 2 + (P2 - u[1]) ** 2 + (P3 - u[2]) ** 2
    with np.errstate(over="ignore"):
        f = 1.0 / (np.exp(a * d2 + c) + stat.sign)
    n0 = float(np.sum(W * f))
    p = np.array([
        float(np.sum(W * f * P1)),
        float(np.sum(W * f * P2)),
        float(np.sum(W * f * P3)),
    ])
    e = float(np.sum(W * f * (P1 ** 2 + P2 ** 2 + P3 ** 2)))
    return n0, p, e

"""Moment bounds, subexponential-norm checks, and chi-squared targets.

The likelihood-ratio statistic 2nV converges in distribution to a
chi-squared with k-1 degrees of freedom, so its asymptotic moments have
closed forms; those are the targets the exact finite-n moments are
compared against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate, stats

from . import bounds
from .core import CategoricalDist
from .errors import DomainError
from .exact import ExactDistribution, enumerate_divergence_distribution


def chi2_raw_moment(k: int, m: float) -> float:
    """E[(chi2_{k-1})^m] = 2^m Gamma(m + (k-1)/2) / Gamma((k-1)/2)."""
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k!r}")
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m!r}")
    half = (k - 1) / 2.0
    return math.exp(m * math.log(2.0) + math.lgamma(m + half) - math.lgamma(half))


def chi2_central_moment(k: int, m: int) -> float:
    """E[(chi2_{k-1} - (k-1))^m] by binomial expansion of raw moments."""
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k!r}")
    if m < 1 or m != int(m):
        raise DomainError(f"m must be a positive integer, got {m!r}")
    mu = float(k - 1)
    total = 0.0
    for j in range(m + 1):
        raw = 1.0 if j == 0 else chi2_raw_moment(k, j)
        total += math.comb(m, j) * raw * (-mu) ** (m - j)
    return total


def chi2_central_moment_quadrature(k: int, m: int) -> float:
    """Independent oracle: adaptive quadrature of the chi-squared
    density against (x - (k-1))^m, to a 1e-10 target."""
    mu = float(k - 1)
    pdf = stats.chi2(df=k - 1).pdf
    # substitute y = u^2: removes the x^(-1/2) endpoint singularity at
    # df = 1 so the adaptive rule sees a smooth integrand everywhere
    val, _ = integrate.quad(
        lambda u: (u * u - mu) ** m * pdf(u * u) * 2.0 * u,
        0.0,
        math.inf,
        epsabs=1e-12,
        epsrel=1e-10,
        limit=400,
    )
    return val


def gamma_mgf_bound(n: int, k: int, t: float) -> float:
    """Identical to bounds.mgf_bound; named for the Gamma(k-1, n)
    reading of the bound (its MGF is exactly (1 - t/n)^-(k-1))."""
    return bounds.mgf_bound(n, k, t)


def gamma_raw_moment(k: int, n: int, m: int) -> float:
    """m-th raw moment of Gamma(k-1, n): prod_{j<m} (k-1+j) / n^m."""
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m!r}")
    acc = 1.0
    for j in range(m):
        acc *= (k - 1 + j) / n
    return acc


def psi1_check(n: int, p: CategoricalDist, dist: ExactDistribution | None = None) -> float:
    """Exact E[exp(2nV / (4(k-1)))]; at most 2 when the MGF bound holds.

    This is the moment generating function evaluated at the argument
    the subexponential-norm bound uses, so values above 2 indicate a
    bug rather than a near-miss.
    """
    if dist is None:
        dist = enumerate_divergence_distribution(n, p)
    return dist.mgf(n / (2.0 * (dist.k - 1)))


def exact_raw_moment(
    n: int, p: CategoricalDist, m: float, dist: ExactDistribution | None = None
) -> float:
    """Exact E[(2nV)^m] from the enumerated distribution."""
    if dist is None:
        dist = enumerate_divergence_distribution(n, p)
    return dist.raw_moment(m)


def exact_central_moment(
    n: int, p: CategoricalDist, m: int, dist: ExactDistribution | None = None
) -> float:
    """Exact E[(2nV - E[2nV])^m], centered at the exact finite-n mean."""
    if dist is None:
        dist = enumerate_divergence_distribution(n, p)
    y = 2.0 * n * dist.values
    mu = float((dist.probs * y).sum())
    return float((dist.probs * (y - mu) ** m).sum())


@dataclass(frozen=True)
class MomentReport:
    """Exact moments of 2nV next to their chi-squared targets."""

    n: int
    k: int
    m: int
    raw_moment: float
    central_moment: float
    chi2_target_raw: float
    chi2_target_central: float

    def csv_row(self) -> str:
        return (
            f"{self.n},{self.k},{self.m},{self.raw_moment:.17g},"
            f"{self.central_moment:.17g},{self.chi2_target_raw:.17g},"
            f"{self.chi2_target_central:.17g}"
        )

    CSV_HEADER = "n,k,m,raw,central,chi2_raw,chi2_central"


def moment_report(
    n: int, p: CategoricalDist, m: int, dist: ExactDistribution | None = None
) -> MomentReport:
    """Exact raw/central moments of 2nV plus the asymptotic targets."""
    if dist is None:
        dist = enumerate_divergence_distribution(n, p)
    return MomentReport(
        n=n,
        k=dist.k,
        m=m,
        raw_moment=exact_raw_moment(n, p, m, dist=dist),
        central_moment=exact_central_moment(n, p, m, dist=dist),
        chi2_target_raw=chi2_raw_moment(dist.k, m),
        chi2_target_central=chi2_central_moment(dist.k, m),
    )

"""Closed-form tail and MGF bounds, comparisons, and inversion.

All arithmetic is done in log space; bound values for large n*eps
underflow to 0.0 only at the final exp.  Bounds are reported unclamped,
so a value above 1 signals a vacuous bound rather than an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy.optimize import brentq

from .errors import DomainError, OutOfRegionError

_MAX_BISECT_ITERS = 200


def mgf_bound(n: int, k: int, t: float) -> float:
    """(1 - t/n)^-(k-1), the gamma-shaped MGF bound, for 0 <= t < n."""
    return math.exp(log_mgf_bound(n, k, t))


def log_mgf_bound(n: int, k: int, t: float) -> float:
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k!r}")
    if not 0.0 <= t < n:
        raise DomainError(f"t must lie in [0, n={n}), got {t!r}")
    return -(k - 1) * math.log1p(-t / n)


def _check_region(n: int, k: int, eps: float) -> float:
    """Validate eps > (k-1)/n; return u = n*eps/(k-1) - 1 > 0."""
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k!r}")
    boundary = (k - 1) / n
    u = n * eps / (k - 1) - 1.0
    if u <= 0.0:
        raise OutOfRegionError(
            f"eps={eps!r} is outside the validity region: the tail bound "
            f"requires eps > (k-1)/n = {boundary!r}",
            boundary=boundary,
        )
    return u


def tail_bound(n: int, k: int, eps: float) -> float:
    """exp(-n eps) (e eps n / (k-1))^(k-1), valid for eps > (k-1)/n."""
    return math.exp(log_tail_bound(n, k, eps))


def log_tail_bound(n: int, k: int, eps: float) -> float:
    # With x = n*eps/(k-1), the log bound is (k-1)(1 - x + log x);
    # writing it as (k-1)(log1p(u) - u) for u = x - 1 keeps it exactly
    # <= 0 near the boundary instead of rounding up past 1.
    u = _check_region(n, k, eps)
    return (k - 1) * (math.log1p(u) - u)


def chernoff_optimal_t(n: int, k: int, eps: float) -> float:
    """The minimizing MGF argument t = n (1 - (k-1)/(n eps)).

    Plugging it into exp(-t eps) * mgf_bound reproduces tail_bound.
    """
    _check_region(n, k, eps)
    return n * (1.0 - (k - 1) / (eps * n))


def log_binom_count(n: int, k: int) -> float:
    """log C(n+k-1, k-1), the number of compositions of n into k parts."""
    return math.lgamma(n + k) - math.lgamma(k) - math.lgamma(n + 1)


def method_of_types_bound(n: int, k: int, eps: float) -> float:
    """exp(-n eps) * C(n+k-1, k-1), the standard counting bound."""
    return math.exp(log_method_of_types_bound(n, k, eps))


def log_method_of_types_bound(n: int, k: int, eps: float) -> float:
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k!r}")
    if eps < 0.0:
        raise DomainError(f"eps must be >= 0, got {eps!r}")
    return -n * eps + log_binom_count(n, k)


def interpretable_mardia_bound(n: int, k: int, eps: float) -> Optional[float]:
    """exp(-n eps) * (6 e^2 / pi^(3/2)) * (e^3 n / (2 pi k))^(k/2).

    Only stated for 3 <= k <= n; returns None outside that region.
    Transcribed from the crossover inequality it appears in, and used
    for comparison tables only (see README).
    """
    if not 3 <= k <= n:
        return None
    log_const = math.log(6.0) + 2.0 - 1.5 * math.log(math.pi)
    log_val = -n * eps + log_const + 0.5 * k * (3.0 + math.log(n / (2.0 * math.pi * k)))
    return math.exp(log_val)


def crossover_region(n: int, k: int) -> tuple[float, float]:
    """The eps interval on which tail_bound beats method_of_types_bound.

    Returns ``(eps_low, eps_high)`` with eps_low = (k-1)/n and
    eps_high = (k-1)/n * C(n+k-1, k-1)^(1/(k-1)) / e.  When the
    composition count is too small for the interval to exist the
    degenerate pair (eps_low, eps_low) is returned.
    """
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k!r}")
    eps_low = (k - 1) / n
    log_ratio = log_binom_count(n, k) / (k - 1) - 1.0
    if log_ratio <= 0.0:
        return eps_low, eps_low
    return eps_low, eps_low * math.exp(log_ratio)


def critical_epsilon(n: int, k: int, alpha: float) -> float:
    """The unique eps > (k-1)/n with tail_bound(n, k, eps) = alpha.

    Bisection on the (strictly decreasing) log bound, to 1e-12 relative
    on eps; runaway iteration is a hard error, not a loose answer.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    log_alpha = math.log(alpha)
    boundary = (k - 1) / n
    lo = boundary * (1.0 + 1e-15)
    hi = boundary * 2.0
    while log_tail_bound(n, k, hi) > log_alpha:
        hi *= 2.0
        if hi > boundary * 2.0**200:
            raise DomainError("failed to bracket the critical threshold")
    for _ in range(_MAX_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if log_tail_bound(n, k, mid) > log_alpha:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * hi:
            return 0.5 * (lo + hi)
    raise DomainError(
        f"bisection did not converge in {_MAX_BISECT_ITERS} iterations"
    )


def sample_size(k: int, eps: float, alpha: float) -> int:
    """Minimal n with n > (k-1)/eps and tail_bound(n, k, eps) <= alpha.

    Exponential doubling to bracket, then binary search; the log bound
    is decreasing in n on the valid region so the minimum is unique.
    """
    if eps <= 0.0:
        raise DomainError(f"eps must be > 0, got {eps!r}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    log_alpha = math.log(alpha)
    n_min = int(math.floor((k - 1) / eps)) + 1
    while (k - 1) / n_min >= eps:  # guard against floor roundoff
        n_min += 1
    hi = n_min
    while log_tail_bound(hi, k, eps) > log_alpha:
        hi *= 2
    lo = n_min  # invariant: every n < lo fails, hi passes
    while lo < hi:
        mid = (lo + hi) // 2
        if log_tail_bound(mid, k, eps) > log_alpha:
            lo = mid + 1
        else:
            hi = mid
    return lo


def types_comparison_constant() -> float:
    """The root C of (1+C)/C * H(C/(1+C)) = 1 (binary entropy in nats).

    Demonstration value only: it marks the asymptotic k/n ratio beyond
    which the tail bound can no longer beat the counting bound.
    """

    def h(q: float) -> float:
        return -q * math.log(q) - (1.0 - q) * math.log(1.0 - q)

    return float(brentq(lambda c: (1 + c) / c * h(c / (1 + c)) - 1.0, 1.0, 3.0, xtol=1e-12))


@dataclass(frozen=True)
class BoundReport:
    """Evaluated tail bounds at a single (n, k, eps) query point."""

    n: int
    k: int
    eps: float
    this_paper: float
    method_of_types: float
    interpretable_mardia: Optional[float]
    tightest: str

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "n": self.n,
            "k": self.k,
            "eps": self.eps,
            "this_paper": self.this_paper,
            "method_of_types": self.method_of_types,
            "interpretable_mardia": self.interpretable_mardia,
            "tightest": self.tightest,
        }


def bound_report(n: int, k: int, eps: float) -> BoundReport:
    """Evaluate every implemented bound at (n, k, eps) and name the
    tightest finite one."""
    entries = {
        "this_paper": tail_bound(n, k, eps),
        "method_of_types": method_of_types_bound(n, k, eps),
    }
    mardia = interpretable_mardia_bound(n, k, eps)
    if mardia is not None:
        entries["interpretable_mardia"] = mardia
    tightest = min(entries, key=entries.get)
    return BoundReport(
        n=n,
        k=k,
        eps=eps,
        this_paper=entries["this_paper"],
        method_of_types=entries["method_of_types"],
        interpretable_mardia=mardia,
        tightest=tightest,
    )

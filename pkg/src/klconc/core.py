"""Domain types and the empirical KL-divergence statistic.

The central quantity is the KL divergence between the empirical
distribution ``(X_1/n, ..., X_k/n)`` of a multinomial count vector and
the null distribution ``P = (p_1, ..., p_k)``.  All logs are natural;
the likelihood-ratio statistic is ``2n`` times this divergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateDistributionError,
    DimensionMismatchError,
    InvalidDistributionError,
)

#: Absolute tolerance on "probabilities sum to 1" at construction time.
SUM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class CategoricalDist:
    """A probability vector over a finite alphabet of size k >= 2.

    Entries must lie in [0, 1] and sum to 1 within ``SUM_TOLERANCE``;
    inputs inside the tolerance are renormalized exactly, anything
    further off is rejected rather than silently fixed.
    """

    probs: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.probs, dtype=np.float64)
        if v.ndim != 1 or v.size < 2:
            raise InvalidDistributionError(
                f"need a 1-d probability vector of length >= 2, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise InvalidDistributionError("probabilities must be finite")
        if np.any(v < 0.0) or np.any(v > 1.0):
            raise InvalidDistributionError("probabilities must lie in [0, 1]")
        total = math.fsum(v.tolist())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidDistributionError(
                f"probabilities sum to {total!r}, outside 1 +/- {SUM_TOLERANCE}"
            )
        v = v / total
        v.flags.writeable = False
        object.__setattr__(self, "probs", v)

    @property
    def k(self) -> int:
        return self.probs.size

    @classmethod
    def uniform(cls, k: int) -> "CategoricalDist":
        """The uniform distribution on k outcomes."""
        if k < 2:
            raise InvalidDistributionError("uniform distribution needs k >= 2")
        return cls(np.full(k, 1.0 / k))


@dataclass(frozen=True)
class CountVector:
    """Observed multinomial counts ``X`` with ``sum(X) == n``."""

    counts: np.ndarray
    n: int = field(default=-1)

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        if c.ndim != 1 or c.size < 1:
            raise InvalidDistributionError("counts must be a 1-d vector")
        if np.any(c < 0):
            raise InvalidDistributionError("counts must be non-negative")
        total = int(c.sum())
        n = self.n if self.n >= 0 else total
        if total != n:
            raise InvalidDistributionError(f"counts sum to {total}, expected n={n}")
        if n <= 0:
            raise InvalidDistributionError("n must be a positive integer")
        c.flags.writeable = False
        object.__setattr__(self, "counts", c)
        object.__setattr__(self, "n", n)

    @property
    def k(self) -> int:
        return self.counts.size


def _as_probs(p) -> np.ndarray:
    if isinstance(p, CategoricalDist):
        return p.probs
    return np.asarray(p, dtype=np.float64)


def kl_divergence(q, p) -> float:
    """KL divergence ``sum q_i log(q_i / p_i)`` in nats.

    Uses the 0 * log 0 = 0 convention (zero-mass terms are skipped) and
    returns ``math.inf`` when q puts mass where p has none.  The value
    is a legitimate float: +inf sorts and compares normally.
    """
    qv = _as_probs(q)
    pv = _as_probs(p)
    if qv.size != pv.size:
        raise DimensionMismatchError(
            f"length mismatch: q has {qv.size} entries, p has {pv.size}"
        )
    terms = []
    for qi, pi in zip(qv.tolist(), pv.tolist()):
        if qi == 0.0:
            continue
        if pi == 0.0:
            return math.inf
        terms.append(qi * math.log(qi / pi))
    s = math.fsum(terms)
    # Exact-rounding fsum can still return a tiny negative from rounded
    # terms when the true value is 0; clamp only that neighbourhood.
    if -1e-15 < s < 0.0:
        return 0.0
    return s


def empirical_divergence(x: CountVector, p) -> float:
    """Divergence of the empirical distribution ``x/n`` from ``p``.

    The likelihood-ratio statistic is ``2 * x.n`` times this value.
    """
    pv = _as_probs(p)
    if x.k != pv.size:
        raise DimensionMismatchError(
            f"length mismatch: counts have {x.k} entries, p has {pv.size}"
        )
    n = x.n
    terms = []
    for xi, pi in zip(x.counts.tolist(), pv.tolist()):
        if xi == 0:
            continue
        if pi == 0.0:
            return math.inf
        terms.append((xi / n) * math.log(xi / (n * pi)))
    s = math.fsum(terms)
    if -1e-15 < s < 0.0:
        return 0.0
    return s


def chain_rule_decompose(x: CountVector, p) -> tuple[float, float, float]:
    """Split the divergence into a binary term plus a conditional term.

    Returns ``(binary_part, conditional_part, weight)`` where

        binary_part      = KL((X_k/n, 1-X_k/n) || (p_k, 1-p_k))
        conditional_part = divergence of the first k-1 counts from the
                           renormalized first k-1 probabilities (0 when
                           X_k == n)
        weight           = (n - X_k) / n

    and ``binary_part + weight * conditional_part`` reconstructs the
    full divergence.
    """
    pv = _as_probs(p)
    if x.k != pv.size:
        raise DimensionMismatchError(
            f"length mismatch: counts have {x.k} entries, p has {pv.size}"
        )
    if x.k < 3:
        raise DimensionMismatchError("decomposition needs k >= 3")
    pk = float(pv[-1])
    if pk >= 1.0:
        raise DegenerateDistributionError(
            "last probability is 1; the conditional distribution is undefined"
        )
    n = x.n
    xk = int(x.counts[-1])
    binary_part = kl_divergence(
        np.array([xk / n, 1.0 - xk / n]), np.array([pk, 1.0 - pk])
    )
    weight = (n - xk) / n
    if xk == n:
        conditional_part = 0.0
    else:
        rest = CountVector(x.counts[:-1], n - xk)
        conditional_part = empirical_divergence(rest, pv[:-1] / (1.0 - pk))
    return binary_part, conditional_part, weight

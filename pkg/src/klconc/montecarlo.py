"""Seeded Monte Carlo estimation of tails and moments of the statistic.

Used where enumeration is out of reach.  Everything is a pure function
of (inputs, seed, samples): the generator is PCG64 seeded through
SeedSequence, draws are made in one fixed-shape batch, and no
platform-dependent reduction order is involved, so results are
bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CategoricalDist, CountVector
from .errors import DomainError

#: 97.5% standard-normal quantile for the 95% two-sided intervals.
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class McEstimate:
    """A point estimate with a 95% confidence interval."""

    point: float
    ci_low: float
    ci_high: float
    samples: int
    seed: int

    def csv_row(self, n: int, k: int, eps_or_m: float) -> str:
        return (
            f"{n},{k},{eps_or_m:.17g},{self.point:.17g},{self.ci_low:.17g},"
            f"{self.ci_high:.17g},{self.samples},{self.seed}"
        )

    CSV_HEADER = "n,k,eps_or_m,point,ci_low,ci_high,samples,seed"


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def _draw_counts(n: int, probs: np.ndarray, size: int, rng: np.random.Generator) -> np.ndarray:
    """Multinomial draws via the conditional-binomial method: O(k)
    binomial vectors instead of n categorical draws per sample."""
    k = probs.size
    counts = np.zeros((size, k), dtype=np.int64)
    remaining = np.full(size, n, dtype=np.int64)
    mass = 1.0
    for i in range(k - 1):
        pi = float(probs[i])
        if mass <= 0.0 or pi <= 0.0:
            ratio = 0.0
        else:
            ratio = min(pi / mass, 1.0)
        counts[:, i] = rng.binomial(remaining, ratio)
        remaining -= counts[:, i]
        mass -= pi
    counts[:, k - 1] = remaining
    return counts


def _divergences(counts: np.ndarray, n: int, probs: np.ndarray) -> np.ndarray:
    """Empirical divergence per row of a counts matrix; rows with mass
    on a zero-probability category come out as +inf."""
    freq = counts / n
    with np.errstate(divide="ignore"):
        ratio = np.log(np.where(counts > 0, freq / probs[None, :], 1.0))
    terms = freq * ratio
    v = terms.sum(axis=1)
    return np.where(v < 0.0, 0.0, v)


def sample_counts(n: int, p: CategoricalDist, seed: int) -> CountVector:
    """One multinomial draw, deterministic given the seed."""
    counts = _draw_counts(n, p.probs, 1, _rng(seed))[0]
    return CountVector(counts, n)


#: Draws per batch.  Fixed, so the generator consumption order (and
#: therefore every estimate) depends only on (seed, samples); batching
#: just caps peak memory at n = 10^6-scale sweeps.
_BATCH = 100_000


def _sample_divergences(n: int, p: CategoricalDist, samples: int, seed: int) -> np.ndarray:
    rng = _rng(seed)
    chunks = []
    remaining = samples
    while remaining > 0:
        size = min(_BATCH, remaining)
        counts = _draw_counts(n, p.probs, size, rng)
        chunks.append(_divergences(counts, n, p.probs))
        remaining -= size
    return np.concatenate(chunks)


def wilson_interval(successes: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion; stays sane
    when the observed proportion is 0 or 1."""
    z2 = _Z95 * _Z95
    phat = successes / trials
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = (_Z95 / denom) * np.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


def estimate_tail(
    n: int, p: CategoricalDist, eps: float, samples: int, seed: int
) -> McEstimate:
    """Monte Carlo estimate of P[V >= eps] with a Wilson 95% CI."""
    if samples < 100:
        raise DomainError(f"need at least 100 samples, got {samples!r}")
    v = _sample_divergences(n, p, samples, seed)
    hits = int(np.count_nonzero(v >= eps))
    lo, hi = wilson_interval(hits, samples)
    point = hits / samples
    return McEstimate(
        point=point,
        ci_low=min(lo, point),
        ci_high=max(hi, point),
        samples=samples,
        seed=seed,
    )


def estimate_moment(
    n: int, p: CategoricalDist, m: float, samples: int, seed: int
) -> McEstimate:
    """Monte Carlo estimate of E[(2nV)^m] with a normal 95% CI."""
    if samples < 100:
        raise DomainError(f"need at least 100 samples, got {samples!r}")
    if m > 20:
        raise DomainError(f"moment order capped at 20, got {m!r}")
    v = _sample_divergences(n, p, samples, seed)
    y = (2.0 * n * v) ** m
    point = float(y.mean())
    half = _Z95 * float(y.std(ddof=1)) / np.sqrt(samples)
    return McEstimate(
        point=point,
        ci_low=point - half,
        ci_high=point + half,
        samples=samples,
        seed=seed,
    )

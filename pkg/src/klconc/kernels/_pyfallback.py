"""Pure-Python/numpy implementations of the hot kernels.

Selected at import time by :mod:`klconc.kernels` when the compiled
extension is unavailable.  Semantics (including enumeration order) must
match ``_speedups.pyx`` exactly; only speed differs.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

BACKEND = "python"


def enumerate_divergence(n: int, probs: np.ndarray):
    """Enumerate all compositions of n into k parts in ascending
    lexicographic order, returning per-atom divergence values and
    multinomial probabilities.

    Returns ``(values, atom_probs, atom_logprobs)`` as float64 arrays of
    length C(n+k-1, k-1).  All entries of ``probs`` must be positive.
    """
    k = probs.size
    m = math.comb(n + k - 1, k - 1)
    values = np.empty(m, dtype=np.float64)
    logprobs = np.empty(m, dtype=np.float64)

    logp = [math.log(pi) for pi in probs.tolist()]
    lgam = [math.lgamma(i + 1.0) for i in range(n + 1)]  # lgamma(i+1) = log i!
    logi = [0.0] + [math.log(i) for i in range(1, n + 1)]
    logn = math.log(n)
    lg_n = lgam[n]

    c = [0] * k
    c[k - 1] = n
    idx = 0
    while True:
        lp = lg_n
        v = 0.0
        for j in range(k):
            cj = c[j]
            if cj:
                lp += cj * logp[j] - lgam[cj]
                v += (cj / n) * (logi[cj] - logn - logp[j])
        values[idx] = v if v > 0.0 else 0.0
        logprobs[idx] = lp
        idx += 1
        # next composition in ascending lex order: bump the rightmost
        # position (before the last) that has mass strictly to its right
        j = k - 2
        moved = c[k - 1]
        while j >= 0 and moved == 0:
            moved += c[j]
            j -= 1
        if j < 0:
            break
        moved = sum(c[j + 1 :])
        c[j] += 1
        for t in range(j + 1, k - 1):
            c[t] = 0
        c[k - 1] = moved - 1

    assert idx == m, (idx, m)
    return values, np.exp(logprobs), logprobs


@lru_cache(maxsize=512)
def _n_tables(n: int):
    """Per-n tables: log C(n,i) and log P[Binom(n, i/n) = i] for i = 0..n."""
    i = np.arange(n + 1, dtype=np.float64)
    lgam = np.array([math.lgamma(j + 1.0) for j in range(n + 1)])
    logc = lgam[n] - lgam - lgam[::-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        log_peak = logc + i * (np.log(i) - math.log(n)) + (n - i) * np.log1p(-i / n)
    log_peak[0] = 0.0
    log_peak[n] = 0.0
    return logc, log_peak


def _log_pmf(n: int, p: float, logc: np.ndarray) -> np.ndarray:
    if p <= 0.0:
        out = np.full(n + 1, -np.inf)
        out[0] = 0.0
        return out
    if p >= 1.0:
        out = np.full(n + 1, -np.inf)
        out[n] = 0.0
        return out
    i = np.arange(n + 1, dtype=np.float64)
    return logc + i * math.log(p) + (n - i) * math.log1p(-p)


def binom_kl_mgf(n: int, p: float, x: float) -> float:
    """Exact E[exp(n*x*KL(B/n || p))] for B ~ Binom(n, p).

    Equals sum_i pmf_i^(1-x) * peak_i^x where peak_i = P[Binom(n,i/n)=i].
    """
    logc, log_peak = _n_tables(n)
    log_pmf = _log_pmf(n, p, logc)
    mask = np.isfinite(log_pmf)
    expo = (1.0 - x) * log_pmf[mask] + x * log_peak[mask]
    return float(np.sum(np.exp(expo)))


def binom_half_mgf(n: int, p: float, x: float) -> float:
    """Exact E[exp(n*x*D(B/n || p))] where D is the upper-branch-only
    binary KL (zero when the empirical frequency is <= p)."""
    logc, log_peak = _n_tables(n)
    log_pmf = _log_pmf(n, p, logc)
    i = np.arange(n + 1, dtype=np.float64)
    upper = (i / n) > p
    mask = np.isfinite(log_pmf)
    lo = float(np.sum(np.exp(log_pmf[mask & ~upper])))
    hi = float(np.sum(np.exp(((1.0 - x) * log_pmf + x * log_peak)[mask & upper])))
    return lo + hi


def binom_kl_mgf_grid(n: int, ps: np.ndarray, x: float) -> np.ndarray:
    """``binom_kl_mgf`` over a grid of p values, vectorized over (i, p)."""
    logc, log_peak = _n_tables(n)
    ps = np.asarray(ps, dtype=np.float64)
    out = np.empty(ps.size, dtype=np.float64)
    interior = (ps > 0.0) & (ps < 1.0)
    pin = ps[interior]
    if pin.size:
        i = np.arange(n + 1, dtype=np.float64)[:, None]
        log_pmf = logc[:, None] + i * np.log(pin)[None, :] + (n - i) * np.log1p(-pin)[None, :]
        expo = (1.0 - x) * log_pmf + x * log_peak[:, None]
        out[interior] = np.sum(np.exp(expo), axis=0)
    # p = 0 or 1: all mass on the matching endpoint, whose KL is 0
    out[~interior] = 1.0
    return out


def binom_half_mgf_grid(n: int, ps: np.ndarray, x: float) -> np.ndarray:
    """``binom_half_mgf`` over a grid of p values, vectorized over (i, p)."""
    logc, log_peak = _n_tables(n)
    ps = np.asarray(ps, dtype=np.float64)
    out = np.empty(ps.size, dtype=np.float64)
    interior = (ps > 0.0) & (ps < 1.0)
    pin = ps[interior]
    if pin.size:
        i = np.arange(n + 1, dtype=np.float64)[:, None]
        log_pmf = logc[:, None] + i * np.log(pin)[None, :] + (n - i) * np.log1p(-pin)[None, :]
        upper = (i / n) > pin[None, :]
        lo = np.sum(np.where(upper, 0.0, np.exp(log_pmf)), axis=0)
        expo = (1.0 - x) * log_pmf + x * log_peak[:, None]
        hi = np.sum(np.where(upper, np.exp(expo), 0.0), axis=0)
        out[interior] = lo + hi
    out[~interior] = 1.0
    return out

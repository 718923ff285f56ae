"""Exact, brute-force computations used as the ground-truth oracle.

Everything here is exhaustive: the full distribution of the divergence
statistic by enumerating all compositions of n, exact binomial MGF
sums, and the majorant polynomial G_n whose coefficients bound the
binomial MGF from above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from . import kernels
from .core import CategoricalDist
from .errors import DomainError, EnumerationTooLargeError

#: Default cap on the number of atoms an enumeration may produce.
DEFAULT_ATOM_CAP = 2_000_000


@dataclass(frozen=True)
class ExactDistribution:
    """Finite support of the divergence statistic from full enumeration.

    One atom per composition of n into k parts, in ascending
    lexicographic order; atoms with equal value are not merged.
    """

    values: np.ndarray
    probs: np.ndarray
    log_probs: np.ndarray
    n: int
    k: int

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.values.tolist(), self.probs.tolist()))

    def tail(self, eps: float) -> float:
        """P[V >= eps], with a 1e-14 tolerance absorbing roundoff at
        atom boundaries."""
        return float(self.probs[self.values >= eps - 1e-14].sum())

    def mgf(self, t: float) -> float:
        """E[exp(t V)] via log-sum-exp over the atoms."""
        if not 0.0 <= t < self.n:
            raise DomainError(f"t must lie in [0, n={self.n}), got {t!r}")
        return float(math.exp(logsumexp(self.log_probs + t * self.values)))

    def raw_moment(self, m: float) -> float:
        """E[(2 n V)^m]."""
        return float(np.sum(self.probs * (2.0 * self.n * self.values) ** m))

    def mean(self) -> float:
        """E[V]."""
        return float(np.sum(self.probs * self.values))

    def write_csv(self, stream) -> None:
        """Write atoms as ``value,prob`` rows in enumeration order."""
        stream.write("value,prob\n")
        for v, pr in zip(self.values.tolist(), self.probs.tolist()):
            stream.write(f"{v:.17g},{pr:.17g}\n")


def enumerate_divergence_distribution(
    n: int, p: CategoricalDist, cap: int = DEFAULT_ATOM_CAP
) -> ExactDistribution:
    """Full distribution of the divergence statistic for n samples.

    Zero-probability categories are dropped first (their counts are 0
    with probability 1 and contribute nothing), so ``k`` in the result
    is the support size.
    """
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    probs = p.probs[p.probs > 0.0]
    k = probs.size
    if k < 2:
        raise DomainError("support must contain at least 2 categories")
    atoms = math.comb(n + k - 1, k - 1)
    if atoms > cap:
        raise EnumerationTooLargeError(
            f"enumeration needs {atoms} atoms, above the cap of {cap}; "
            f"raise the cap to at least {atoms} to proceed",
            required_cap=atoms,
        )
    values, atom_probs, atom_logprobs = kernels.enumerate_divergence(
        n, np.ascontiguousarray(probs)
    )
    return ExactDistribution(values, atom_probs, atom_logprobs, n=n, k=k)


def exact_mgf(n: int, p: CategoricalDist, t: float, cap: int = DEFAULT_ATOM_CAP) -> float:
    """Exact E[exp(t V)] by full enumeration, for 0 <= t < n."""
    if not 0.0 <= t < n:
        raise DomainError(f"t must lie in [0, n={n}), got {t!r}")
    return enumerate_divergence_distribution(n, p, cap=cap).mgf(t)


def exact_tail(n: int, p: CategoricalDist, eps: float, cap: int = DEFAULT_ATOM_CAP) -> float:
    """Exact P[V >= eps] by full enumeration."""
    if eps < 0.0:
        raise DomainError(f"eps must be >= 0, got {eps!r}")
    return enumerate_divergence_distribution(n, p, cap=cap).tail(eps)


def exact_binomial_mgf(n: int, p: float, x: float) -> float:
    """Exact binomial-KL MGF at t = n*x: E[exp(n x KL(B/n || p))]."""
    return kernels.binom_kl_mgf(n, float(p), float(x))


def gn_eval_direct(n: int, p: float, x: float) -> float:
    """The majorant G_n(p, x) as its defining (n+1)-term sum.

    Each term is the algebraic expression C(n,i) q^i (1-q)^(n-i) with
    q = (1-x)p + ix/n, evaluated even when q leaves [0, 1] (the
    p-independence identity is algebraic).  G_0 = 1 by the 0^0 = 1
    convention.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n!r}")
    if n == 0:
        return 1.0
    terms = []
    for i in range(n + 1):
        q = (1.0 - x) * p + i * x / n
        terms.append(math.comb(n, i) * q**i * (1.0 - q) ** (n - i))
    return math.fsum(terms)


@dataclass(frozen=True)
class GnPolynomial:
    """Coefficients of G_n as a polynomial in x.

    ``coeffs[i] = n! / (n^i (n-i)!) = prod_{j<i} (1 - j/n)``, which is
    1 at i = 0 and 1, positive, and non-increasing.
    """

    n: int
    coeffs: np.ndarray

    def evaluate(self, x: float) -> float:
        acc = 0.0
        for c in self.coeffs.tolist()[::-1]:
            acc = acc * x + c
        return acc


def gn_coefficients(n: int) -> GnPolynomial:
    """Polynomial coefficients of G_n, via a running product (never
    through factorials, which overflow long before n gets interesting)."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n!r}")
    coeffs = np.empty(n + 1, dtype=np.float64)
    acc = 1.0
    for i in range(n + 1):
        coeffs[i] = acc
        acc *= 1.0 - i / n if n else 0.0
    coeffs.flags.writeable = False
    return GnPolynomial(n=n, coeffs=coeffs)


def verify_logconcavity_majorization(n: int, p: float, x: float) -> tuple[float, float]:
    """Return (exact binomial-KL MGF at t = n*x, G_n(p, x)).

    The first is bounded by the second, which in turn is at most
    1/(1-x) for x in [0, 1).
    """
    return exact_binomial_mgf(n, p, x), gn_eval_direct(n, p, x)

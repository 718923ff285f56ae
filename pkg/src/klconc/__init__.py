"""Finite-sample concentration bounds for the empirical KL divergence
of multinomial samples, with exact brute-force oracles, bound
inversion, chi-squared asymptotic targets, Monte Carlo estimation, and
numerical conjecture scanners."""

from .core import CategoricalDist, CountVector, empirical_divergence, kl_divergence
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CategoricalDist",
    "CountVector",
    "empirical_divergence",
    "kl_divergence",
    "__version__",
]

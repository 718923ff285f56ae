"""Numerical scanners for the two conjectured binomial MGF bounds.

The main conjecture says f(x) = 2/sqrt(1-x) - 1 upper-bounds the exact
binomial-KL MGF at t = n*x for every n and p; the half-divergence
variant says 1/sqrt(1-x) bounds the MGF of the upper branch alone, and
implies the first via the identity checked by
``verify_conjecture_implication``.  Scans report worst margins and any
violations; a found counterexample is a reportable result, not a crash.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernels

#: Margins below this count as violations; anything in [threshold, 0)
#: is treated as roundoff and reported among the tight points instead.
VIOLATION_THRESHOLD = -1e-12

DEFAULT_NS = tuple(range(1, 201))
DEFAULT_PS = tuple(np.round(np.linspace(0.0, 1.0, 101), 2).tolist())
DEFAULT_XS = tuple(np.round(np.arange(0.0, 0.96, 0.05), 2).tolist()) + (0.99,)


def conjectured_mgf_bound(x: float) -> float:
    """The conjectured sample-independent bound 2/sqrt(1-x) - 1."""
    return 2.0 / math.sqrt(1.0 - x) - 1.0


def naive_sqrt_bound(x: float) -> float:
    """The asymptotic-shape bound 1/sqrt(1-x); known to fail at finite
    n, and used as the scanner's regression guard."""
    return 1.0 / math.sqrt(1.0 - x)


def half_kl(p_hat: float, q: float) -> float:
    """Upper-branch binary KL: 0 when p_hat <= q, else
    KL((p_hat, 1-p_hat) || (q, 1-q))."""
    if p_hat <= q:
        return 0.0
    if q == 0.0:
        return math.inf
    # p_hat > q here, so q < 1 and the second log is finite
    first = p_hat * math.log(p_hat / q)
    if p_hat == 1.0:
        return first
    return first + (1.0 - p_hat) * math.log((1.0 - p_hat) / (1.0 - q))


@dataclass(frozen=True)
class ScanResult:
    """Outcome of a grid scan of bound - exact margins."""

    grid_spec: str
    worst_margin: float
    worst_point: tuple[int, float, float]
    counterexamples: list[tuple[int, float, float, float]] = field(default_factory=list)
    tight_points: int = 0

    @property
    def falsified(self) -> bool:
        return bool(self.counterexamples)

    def to_dict(self) -> dict:
        n, p, x = self.worst_point
        return {
            "schema_version": 1,
            "grid_spec": self.grid_spec,
            "worst_margin": self.worst_margin,
            "worst_point": {"n": n, "p": p, "x": x},
            "counterexamples": [
                {"n": cn, "p": cp, "x": cx, "margin": cm}
                for cn, cp, cx, cm in self.counterexamples
            ],
            "tight_points": self.tight_points,
        }


def _scan(
    exact_grid: Callable[[int, np.ndarray, float], np.ndarray],
    bound_fn: Callable[[float], float],
    ns: Sequence[int],
    ps: Sequence[float],
    xs: Sequence[float],
    label: str,
    margins_stream=None,
) -> ScanResult:
    ps_arr = np.ascontiguousarray(ps, dtype=np.float64)
    worst = math.inf
    worst_point = (0, 0.0, 0.0)
    counterexamples = []
    tight = 0
    if margins_stream is not None:
        margins_stream.write("n,p,x,exact,bound,margin\n")
    for n in ns:
        for x in xs:
            bound = bound_fn(x)
            exact = exact_grid(int(n), ps_arr, float(x))
            margins = bound - exact
            if margins_stream is not None:
                for p, e, mg in zip(ps_arr.tolist(), exact.tolist(), margins.tolist()):
                    margins_stream.write(
                        f"{n},{p:.17g},{x:.17g},{e:.17g},{bound:.17g},{mg:.17g}\n"
                    )
            j = int(np.argmin(margins))
            if margins[j] < worst:
                worst = float(margins[j])
                worst_point = (int(n), float(ps_arr[j]), float(x))
            bad = margins < VIOLATION_THRESHOLD
            for jj in np.flatnonzero(bad).tolist():
                counterexamples.append(
                    (int(n), float(ps_arr[jj]), float(x), float(margins[jj]))
                )
            tight += int(np.count_nonzero(~bad & (margins < 0.0)))
    grid_spec = (
        f"{label}: n in [{min(ns)}..{max(ns)}] ({len(ns)} values), "
        f"p grid of {len(ps)} points in [0,1], x grid of {len(xs)} points in [0,1)"
    )
    return ScanResult(
        grid_spec=grid_spec,
        worst_margin=worst,
        worst_point=worst_point,
        counterexamples=counterexamples,
        tight_points=tight,
    )


def scan_conjecture_main(
    ns: Sequence[int] = DEFAULT_NS,
    ps: Sequence[float] = DEFAULT_PS,
    xs: Sequence[float] = DEFAULT_XS,
    bound_fn: Optional[Callable[[float], float]] = None,
    margins_stream=None,
) -> ScanResult:
    """Scan the full binomial-KL MGF against 2/sqrt(1-x) - 1 (or a
    caller-supplied bound, e.g. the naive one for the regression guard)."""
    fn = bound_fn if bound_fn is not None else conjectured_mgf_bound
    label = "binomial-kl-mgf" if bound_fn is None else "binomial-kl-mgf (custom bound)"
    return _scan(kernels.binom_kl_mgf_grid, fn, ns, ps, xs, label, margins_stream)


def scan_conjecture_half(
    ns: Sequence[int] = DEFAULT_NS,
    ps: Sequence[float] = DEFAULT_PS,
    xs: Sequence[float] = DEFAULT_XS,
    margins_stream=None,
) -> ScanResult:
    """Scan the upper-branch MGF against 1/sqrt(1-x)."""
    return _scan(
        kernels.binom_half_mgf_grid,
        naive_sqrt_bound,
        ns,
        ps,
        xs,
        "half-divergence-mgf",
        margins_stream,
    )


def verify_conjecture_implication(n: int, p: float, x: float) -> tuple[float, float]:
    """Return (full MGF, sum of the two branch MGFs minus 1).

    The two are equal: exactly one branch of the binary KL is active at
    each outcome, so the exponentials multiply as x*y = x + y - 1.
    """
    lhs = kernels.binom_kl_mgf(n, p, x)
    rhs_sum = kernels.binom_half_mgf(n, p, x) + kernels.binom_half_mgf(n, 1.0 - p, x) - 1.0
    return lhs, rhs_sum


def worst_margin_by_n(
    ns: Sequence[int] = DEFAULT_NS,
    ps: Sequence[float] = DEFAULT_PS,
    xs: Sequence[float] = DEFAULT_XS,
    which: str = "main",
) -> list[tuple[int, float]]:
    """Worst margin per n, for plotting how tight the bound gets."""
    ps_arr = np.ascontiguousarray(ps, dtype=np.float64)
    if which == "main":
        grid, fn = kernels.binom_kl_mgf_grid, conjectured_mgf_bound
    elif which == "half":
        grid, fn = kernels.binom_half_mgf_grid, naive_sqrt_bound
    else:
        raise ValueError(f"unknown scan kind {which!r}")
    out = []
    for n in ns:
        w = min(
            float(np.min(fn(x) - grid(int(n), ps_arr, float(x)))) for x in xs
        )
        out.append((int(n), w))
    return out

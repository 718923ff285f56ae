"""Command-line interface.

Subcommands: bound, mgf, threshold, samplesize, exact, moments, mc,
verify, conjecture, compare.  Machine formats (json/csv) print 17
significant digits; human format rounds to 6 and flags vacuous bounds.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import bounds, conjectures, exact, kernels, moments, montecarlo
from .core import CategoricalDist
from .errors import KlconcError, OutOfRegionError

DEFAULT_SEED = 0


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _human(v: float) -> str:
    return f"{v:.6g}"


def _vacuous(v: float) -> str:
    return " [vacuous >= 1]" if v >= 1.0 else ""


def _parse_probs(text: str) -> CategoricalDist:
    return CategoricalDist(np.array([float(s) for s in text.split(",")]))


def _emit_json(payload: dict, out) -> None:
    payload.setdefault("schema_version", 1)
    json.dump(payload, out, indent=2)
    out.write("\n")


# ---------------------------------------------------------------- bound


def _cmd_bound(args, out) -> int:
    report = bounds.bound_report(args.n, args.k, args.eps)
    if args.format == "json":
        _emit_json(report.to_dict(), out)
    elif args.format == "csv":
        out.write("n,k,eps,this_paper,method_of_types,interpretable_mardia,tightest\n")
        mardia = "" if report.interpretable_mardia is None else _fmt(report.interpretable_mardia)
        out.write(
            f"{report.n},{report.k},{_fmt(report.eps)},{_fmt(report.this_paper)},"
            f"{_fmt(report.method_of_types)},{mardia},{report.tightest}\n"
        )
    else:
        out.write(f"tail bound at n={report.n}, k={report.k}, eps={_human(report.eps)}\n")
        out.write(f"  this work        : {_human(report.this_paper)}{_vacuous(report.this_paper)}\n")
        out.write(
            f"  method of types  : {_human(report.method_of_types)}"
            f"{_vacuous(report.method_of_types)}\n"
        )
        if report.interpretable_mardia is not None:
            out.write(
                f"  interpretable    : {_human(report.interpretable_mardia)}"
                f"{_vacuous(report.interpretable_mardia)}\n"
            )
        out.write(f"  tightest         : {report.tightest}\n")
    return 0


def _cmd_mgf(args, out) -> int:
    val = bounds.mgf_bound(args.n, args.k, args.t)
    payload = {"n": args.n, "k": args.k, "t": args.t, "mgf_bound": val}
    if args.p is not None:
        p = _parse_probs(args.p)
        payload["exact_mgf"] = exact.exact_mgf(args.n, p, args.t, cap=args.cap)
    if args.format == "json":
        _emit_json(payload, out)
    elif args.format == "csv":
        keys = [key for key in ("n", "k", "t", "mgf_bound", "exact_mgf") if key in payload]
        out.write(",".join(keys) + "\n")
        out.write(",".join(_fmt(payload[key]) if isinstance(payload[key], float) else str(payload[key]) for key in keys) + "\n")
    else:
        out.write(f"MGF bound at n={args.n}, k={args.k}, t={_human(args.t)}: {_human(val)}\n")
        if "exact_mgf" in payload:
            out.write(f"exact MGF: {_human(payload['exact_mgf'])}\n")
    return 0


def _cmd_threshold(args, out) -> int:
    eps = bounds.critical_epsilon(args.n, args.k, args.alpha)
    achieved = bounds.tail_bound(args.n, args.k, eps)
    payload = {"n": args.n, "k": args.k, "alpha": args.alpha, "eps": eps, "tail_bound": achieved}
    if args.format == "json":
        _emit_json(payload, out)
    elif args.format == "csv":
        out.write("n,k,alpha,eps,tail_bound\n")
        out.write(f"{args.n},{args.k},{_fmt(args.alpha)},{_fmt(eps)},{_fmt(achieved)}\n")
    else:
        out.write(
            f"critical threshold for alpha={_human(args.alpha)} at n={args.n}, "
            f"k={args.k}: eps={_human(eps)}\n"
        )
    return 0


def _cmd_samplesize(args, out) -> int:
    n = bounds.sample_size(args.k, args.eps, args.alpha)
    achieved = bounds.tail_bound(n, args.k, args.eps)
    payload = {"k": args.k, "eps": args.eps, "alpha": args.alpha, "n": n, "tail_bound": achieved}
    if args.format == "json":
        _emit_json(payload, out)
    elif args.format == "csv":
        out.write("k,eps,alpha,n,tail_bound\n")
        out.write(f"{args.k},{_fmt(args.eps)},{_fmt(args.alpha)},{n},{_fmt(achieved)}\n")
    else:
        out.write(
            f"smallest n with bound <= {_human(args.alpha)} at eps={_human(args.eps)}, "
            f"k={args.k}: n={n} (bound {_human(achieved)})\n"
        )
    return 0


def _cmd_exact(args, out) -> int:
    p = _parse_probs(args.p)
    dist = exact.enumerate_divergence_distribution(args.n, p, cap=args.cap)
    if args.eps is not None:
        payload = {"n": args.n, "k": dist.k, "eps": args.eps, "exact_tail": dist.tail(args.eps)}
        if args.format == "json":
            _emit_json(payload, out)
        elif args.format == "csv":
            out.write("n,k,eps,exact_tail\n")
            out.write(f"{args.n},{dist.k},{_fmt(args.eps)},{_fmt(payload['exact_tail'])}\n")
        else:
            out.write(f"exact tail at eps={_human(args.eps)}: {_human(payload['exact_tail'])}\n")
    elif args.t is not None:
        payload = {"n": args.n, "k": dist.k, "t": args.t, "exact_mgf": dist.mgf(args.t)}
        if args.format == "json":
            _emit_json(payload, out)
        elif args.format == "csv":
            out.write("n,k,t,exact_mgf\n")
            out.write(f"{args.n},{dist.k},{_fmt(args.t)},{_fmt(payload['exact_mgf'])}\n")
        else:
            out.write(f"exact MGF at t={_human(args.t)}: {_human(payload['exact_mgf'])}\n")
    else:
        dist.write_csv(out)
    return 0


def _cmd_moments(args, out) -> int:
    out.write(moments.MomentReport.CSV_HEADER + "\n")
    if args.p is not None:
        p = _parse_probs(args.p)
        dist = exact.enumerate_divergence_distribution(args.n, p, cap=args.cap)
        for m in range(1, args.m_max + 1):
            out.write(moments.moment_report(args.n, p, m, dist=dist).csv_row() + "\n")
    else:
        for m in range(1, args.m_max + 1):
            raw = moments.chi2_raw_moment(args.k, m)
            central = moments.chi2_central_moment(args.k, m)
            out.write(f",{args.k},{m},,,{_fmt(raw)},{_fmt(central)}\n")
    return 0


def _cmd_mc(args, out) -> int:
    p = _parse_probs(args.p)
    out.write(montecarlo.McEstimate.CSV_HEADER + "\n")
    if args.eps is not None:
        est = montecarlo.estimate_tail(args.n, p, args.eps, args.samples, args.seed)
        out.write(est.csv_row(args.n, p.k, args.eps) + "\n")
    elif args.m is not None:
        est = montecarlo.estimate_moment(args.n, p, args.m, args.samples, args.seed)
        out.write(est.csv_row(args.n, p.k, args.m) + "\n")
    else:
        raise KlconcError("mc needs one of --eps or --m")
    return 0


# --------------------------------------------------------------- verify


def _verify_lemmas(n_max: int):
    """G_n p-independence and the polynomial coefficient formula."""
    xs = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99]
    ps = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
    worst_pind = 0.0
    worst_poly = 0.0
    for n in range(1, n_max + 1):
        poly = exact.gn_coefficients(n)
        for x in xs:
            base = exact.gn_eval_direct(n, 0.0, x)
            scale = max(1.0, abs(base))
            worst_poly = max(worst_poly, abs(poly.evaluate(x) - base) / scale)
            for p in ps:
                diff = abs(exact.gn_eval_direct(n, p, x) - base) / scale
                worst_pind = max(worst_pind, diff)
    yield ("G_n p-independence", worst_pind, worst_pind <= 1e-10)
    yield ("G_n polynomial coefficients", worst_poly, worst_poly <= 1e-10)


def _verify_majorization(n_max: int):
    """Exact binomial MGF <= G_n(p, x) <= 1/(1-x)."""
    xs = [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99]
    ps = [0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99]
    worst_lower = math.inf
    worst_upper = math.inf
    for n in range(1, n_max + 1):
        for x in xs:
            geom = 1.0 / (1.0 - x)
            for p in ps:
                mgf, gn = exact.verify_logconcavity_majorization(n, p, x)
                worst_lower = min(worst_lower, gn - mgf)
                worst_upper = min(worst_upper, geom - gn)
    yield ("binomial MGF <= G_n", worst_lower, worst_lower >= -1e-12)
    yield ("G_n <= 1/(1-x)", worst_upper, worst_upper >= -1e-12)


def _verify_identity(n_max: int):
    """Chain-rule decomposition and branch-MGF identities."""
    from itertools import product

    from .core import CountVector, chain_rule_decompose, empirical_divergence

    worst_chain = 0.0
    p = CategoricalDist(np.array([0.2, 0.3, 0.5]))
    for n in range(1, min(n_max, 20) + 1):
        for a, b in product(range(n + 1), repeat=2):
            if a + b > n:
                continue
            x = CountVector(np.array([a, b, n - a - b]), n)
            binary, cond, w = chain_rule_decompose(x, p)
            worst_chain = max(
                worst_chain, abs(binary + w * cond - empirical_divergence(x, p))
            )
    worst_branch = 0.0
    for n in range(1, n_max + 1):
        for prob in (0.1, 0.3, 0.5, 0.8):
            for x in (0.1, 0.5, 0.9):
                lhs, rhs = conjectures.verify_conjecture_implication(n, prob, x)
                worst_branch = max(worst_branch, abs(lhs - rhs) / max(1.0, lhs))
    yield ("chain-rule decomposition", worst_chain, worst_chain <= 1e-12)
    yield ("branch-MGF identity", worst_branch, worst_branch <= 1e-12)


def _verify_convergence(n_max: int):
    """Monitored: E[exp(s 2nV)] stays under the finite-n bound while
    drifting toward the asymptotic chi-squared MGF."""
    p = CategoricalDist(np.array([0.5, 0.5]))
    ok = True
    worst = math.inf
    for s in (0.1, 0.25, 0.4):
        for n in (10, 40, 160):
            dist = exact.enumerate_divergence_distribution(n, p)
            val = dist.mgf(2.0 * s * n)  # E[exp(s * 2nV)]
            bound = (1.0 - 2.0 * s) ** -1.0
            worst = min(worst, bound - val)
            ok = ok and val <= bound + 1e-12
    yield ("MGF stays under finite-n bound", worst, ok)


_SUITES = {
    "lemmas": _verify_lemmas,
    "majorization": _verify_majorization,
    "identity": _verify_identity,
    "convergence": _verify_convergence,
}


def _cmd_verify(args, out) -> int:
    suite = _SUITES[args.suite]
    t0 = time.perf_counter()
    rows = list(suite(args.n_max))
    elapsed = time.perf_counter() - t0
    all_ok = True
    out.write(f"{'check':<36} {'worst':>14}  result\n")
    for name, worst, ok in rows:
        all_ok = all_ok and ok
        out.write(f"{name:<36} {worst:>14.6g}  {'PASS' if ok else 'FAIL'}\n")
    out.write(f"suite '{args.suite}' finished in {elapsed:.2f}s\n")
    return 0 if all_ok else 1


def _cmd_conjecture(args, out) -> int:
    ns = range(1, args.n_max + 1)
    stream = open(args.margins_csv, "w") if args.margins_csv else None
    try:
        if args.which == "main":
            result = conjectures.scan_conjecture_main(ns=ns, margins_stream=stream)
        elif args.which == "half":
            result = conjectures.scan_conjecture_half(ns=ns, margins_stream=stream)
        else:  # the known-broken bound, as a scanner self-test
            result = conjectures.scan_conjecture_main(
                ns=ns, bound_fn=conjectures.naive_sqrt_bound, margins_stream=stream
            )
    finally:
        if stream is not None:
            stream.close()
    if args.format == "human":
        n, p, x = result.worst_point
        out.write(f"scan: {result.grid_spec}\n")
        out.write(f"worst margin {_human(result.worst_margin)} at (n={n}, p={_human(p)}, x={_human(x)})\n")
        out.write(
            f"counterexamples: {len(result.counterexamples)}; "
            f"tight points: {result.tight_points}\n"
        )
    else:
        _emit_json(result.to_dict(), out)
    return 0


def _cmd_compare(args, out) -> int:
    ns = sorted(int(s) for s in args.n_list.split(","))
    ks = sorted(int(s) for s in args.k_list.split(","))
    mults = sorted(float(s) for s in args.eps_mults.split(","))
    out.write("n,k,eps,this_paper,method_of_types,interpretable_mardia,exact_tail_uniform\n")
    for n in ns:
        for k in ks:
            for mult in mults:
                eps = mult * (k - 1) / n
                try:
                    ours = _fmt(bounds.tail_bound(n, k, eps))
                except OutOfRegionError:
                    ours = ""
                mot = _fmt(bounds.method_of_types_bound(n, k, eps))
                mardia = bounds.interpretable_mardia_bound(n, k, eps)
                mardia_s = "" if mardia is None else _fmt(mardia)
                try:
                    ex = _fmt(exact.exact_tail(n, CategoricalDist.uniform(k), eps, cap=args.cap))
                except KlconcError:
                    ex = ""
                out.write(f"{n},{k},{_fmt(eps)},{ours},{mot},{mardia_s},{ex}\n")
    return 0


# ----------------------------------------------------------------- main


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv", "human"), default="human")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klconc",
        description=(
            "Finite-sample concentration bounds for the KL divergence between "
            "an empirical multinomial distribution and its truth "
            f"(kernel backend: {kernels.BACKEND})"
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("bound", help="evaluate all tail bounds at (n, k, eps)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("mgf", help="MGF bound (optionally vs the exact MGF)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--p", type=str, help="comma-separated probabilities for the exact MGF")
    p.add_argument("--cap", type=int, default=exact.DEFAULT_ATOM_CAP)
    _add_format(p)
    p.set_defaults(func=_cmd_mgf)

    p = sub.add_parser("threshold", help="invert the tail bound at a significance level")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("samplesize", help="minimal n achieving a significance level")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_samplesize)

    p = sub.add_parser("exact", help="exhaustive distribution, tail, or MGF")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=str, required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--cap", type=int, default=exact.DEFAULT_ATOM_CAP)
    _add_format(p)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("moments", help="exact moments of 2nV vs chi-squared targets")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=str)
    p.add_argument("--k", type=int, help="targets only, without an exact side")
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--cap", type=int, default=exact.DEFAULT_ATOM_CAP)
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("mc", help="Monte Carlo tail/moment estimate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=str, required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--m", type=float)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("verify", help="run a numerical verification suite")
    p.add_argument("--suite", choices=sorted(_SUITES), required=True)
    p.add_argument("--n-max", type=int, default=20)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("conjecture", help="grid-scan a conjectured MGF bound")
    p.add_argument("--which", choices=("main", "half", "naive"), default="main")
    p.add_argument("--n-max", type=int, default=200)
    p.add_argument("--margins-csv", type=str, help="stream per-point margins to a CSV file")
    _add_format(p)
    p.set_defaults(func=_cmd_conjecture)

    p = sub.add_parser("compare", help="sweep all bounds (and exact uniform tails) to CSV")
    p.add_argument("--n-list", type=str, required=True)
    p.add_argument("--k-list", type=str, required=True)
    p.add_argument("--eps-mults", type=str, default="1.01,1.5,2,4,8",
                   help="multipliers of (k-1)/n")
    p.add_argument("--cap", type=int, default=exact.DEFAULT_ATOM_CAP)
    p.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except BrokenPipeError:
        # downstream consumer (e.g. `head`) closed the pipe; not an error
        return 0
    except OutOfRegionError as e:
        print(f"error: {e} (boundary (k-1)/n = {e.boundary!r})", file=sys.stderr)
        return 1
    except KlconcError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 numerical non-convergence,
3 enumeration size guard.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys

import numpy as np

from . import formats
from .efficiency import ame_direct, entropy, evaluate, optimize_gamma, sweep_beta
from .errors import CapacityError, DomainError, NotConvergedError
from .link import ber_sweep
from .oracle import (
    check_enumerable,
    default_threads,
    empirical_entropy,
    gen_spreading,
    k_prime_for,
)
from .rng import derive_seed
from .saddle import DEFAULT_TOL, SystemPoint, saddle_residuals, solve_saddle

EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGED, EXIT_CAPACITY = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _seed(text):
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _positive(text):
    value = float(text)
    if not (value > 0.0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $POCDMA_THREADS or CPU count)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="pocdma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", parents=[common], help="solve the saddle point at one (beta, gamma)")
    p.add_argument("--beta", type=_positive, required=True)
    p.add_argument("--gamma", type=_positive, required=True)
    p.add_argument("--tol", type=_positive, default=DEFAULT_TOL)
    p.add_argument("--a0", type=_positive, default=1.0)
    p.add_argument("--b0", type=float, default=0.0)

    p = sub.add_parser("optimize", parents=[common], help="optimum gamma and efficiency at one beta")
    p.add_argument("--beta", type=_positive, required=True)
    p.add_argument("--tol", type=_positive, default=DEFAULT_TOL)

    p = sub.add_parser("sweep", parents=[common], help="optimum efficiency along a beta grid")
    p.add_argument("--beta-min", type=_positive, required=True)
    p.add_argument("--beta-max", type=_positive, required=True)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--log", action="store_true", help="logarithmic spacing")
    p.add_argument("--tol", type=_positive, default=DEFAULT_TOL)

    for name, helptext in (("mc-count", "per-instance admissible-codeword counts"),
                           ("mc-entropy", "empirical entropy summary")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        grp = p.add_mutually_exclusive_group()
        grp.add_argument("--k-prime", type=int)
        grp.add_argument("--gamma", type=_positive)
        p.add_argument("--instances", type=int, default=100 if name == "mc-entropy" else 1)
        p.add_argument("--seed", type=_seed, default=0)

    p = sub.add_parser("link-ber", parents=[common], help="BER versus noise level on one instance")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--k-prime", type=int)
    grp.add_argument("--gamma", type=_positive)
    p.add_argument("--sigmas", type=_float_list, default=[0.0, 0.05, 0.1, 0.2, 0.4])
    p.add_argument("--frames", type=int, default=10000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--signaling", choices=("codebook", "uniform"), default="codebook")
    return parser


def _resolve_k_prime(args):
    if args.k < 1 or args.n < 1:
        raise _UsageError("--k and --n must be >= 1")
    if args.k_prime is not None:
        if not 1 <= args.k_prime <= args.k:
            raise _UsageError(f"--k-prime must lie in [1, {args.k}]")
        return args.k_prime
    return k_prime_for(args.gamma if args.gamma is not None else 1.0, args.k)


def _analytic_h_bits(k, n, k_prime):
    try:
        return evaluate(SystemPoint(k / n, k_prime / k)).h_bits
    except NotConvergedError:
        return math.nan


def run_solve(args):
    point = SystemPoint(args.beta, args.gamma) if args.gamma <= 1.0 else None
    if point is None:
        raise _UsageError("--gamma must lie in (0, 1]")
    sol = solve_saddle(point, init=(args.a0, args.b0), tol=args.tol)
    r_a, r_b, _ = saddle_residuals(point, sol.a_star, sol.b_star)
    row = dict(beta=args.beta, gamma=args.gamma, a_star=sol.a_star, b_star=sol.b_star, t_star=sol.t_star,
               r_a=r_a, r_b=r_b, residual_inf_norm=sol.residual_inf_norm, iterations=sol.iterations,
               converged=sol.converged, h_nats=math.nan, h_bits=math.nan, eta=math.nan, eta_direct=math.nan)
    if sol.converged:
        ent = entropy(point, sol)
        row.update(h_nats=ent.h_nats, h_bits=ent.h_bits, eta=point.gamma * ent.h_bits,
                   eta_direct=ame_direct(point, sol))
    params = dict(beta=args.beta, gamma=args.gamma, tol=args.tol, a0=args.a0, b0=args.b0)
    summary = {"message": sol.message}
    return formats.run_record("solve", params, [row], summary), EXIT_OK if sol.converged else EXIT_NONCONVERGED


def run_optimize(args):
    g, eta = optimize_gamma(args.beta, tol=args.tol)
    params = dict(beta=args.beta, tol=args.tol)
    return formats.run_record("optimize", params, [dict(beta=args.beta, gamma_opt=g, eta_opt=eta)]), EXIT_OK


def beta_grid(beta_min, beta_max, points, log_spaced):
    if points < 1 or beta_max < beta_min:
        raise _UsageError("need --points >= 1 and --beta-max >= --beta-min")
    if points == 1:
        return [beta_min]
    grid = np.geomspace(beta_min, beta_max, points) if log_spaced else np.linspace(beta_min, beta_max, points)
    return [float(x) for x in grid]


def run_sweep(args):
    grid = beta_grid(args.beta_min, args.beta_max, args.points, args.log)
    rows = sweep_beta(grid, with_comparisons=True, tol=args.tol)
    out = [dict(beta=r.beta, gamma_opt=r.gamma_opt, eta_opt=r.eta_opt, eta_decorrelator=r.eta_decorrelator,
                eta_lmmse=r.eta_lmmse, eta_optimal_mud=r.eta_optimal_mud, status=r.status) for r in rows]
    params = dict(beta_min=args.beta_min, beta_max=args.beta_max, points=args.points, log=args.log, tol=args.tol)
    failed = sum(r.status != "ok" for r in rows)
    return formats.run_record("sweep", params, out, {"failed_points": failed}), \
        EXIT_NONCONVERGED if failed else EXIT_OK


def _mc_common(args):
    k_prime = _resolve_k_prime(args)
    check_enumerable(args.k)
    if args.instances < 1:
        raise _UsageError("--instances must be >= 1")
    stats = empirical_entropy(args.k, args.n, k_prime, args.instances, args.seed, threads=args.threads)
    h_an = _analytic_h_bits(args.k, args.n, k_prime)
    summary = dict(h_emp_bits=stats.h_emp_bits, h_emp_stderr=stats.h_emp_stderr, cv=stats.cv,
                   h_analytic_bits=h_an, gap=abs(stats.h_emp_bits - h_an), anomalies=stats.anomalies)
    params = dict(k=args.k, n=args.n, k_prime=k_prime, instances=args.instances, seed=args.seed)
    return stats, params, summary


def run_mc_count(args):
    stats, params, summary = _mc_common(args)
    rows = [dict(instance=i, instance_seed=derive_seed(args.seed, i), count=c,
                 log2_count_per_user=math.log2(c) / args.k if c > 0 else math.nan)
            for i, c in enumerate(stats.counts)]
    return formats.run_record("mc-count", params, rows, summary), EXIT_OK


def run_mc_entropy(args):
    stats, params, summary = _mc_common(args)
    row = dict(k=args.k, n=args.n, k_prime=stats.k_prime, instances=stats.instances, **summary)
    return formats.run_record("mc-entropy", params, [row], {"counts": list(stats.counts)}), EXIT_OK


def run_link(args):
    k_prime = _resolve_k_prime(args)
    if args.frames < 1:
        raise _UsageError("--frames must be >= 1")
    if any(s < 0 or not math.isfinite(s) for s in args.sigmas) or not args.sigmas:
        raise _UsageError("--sigmas must be a non-empty list of finite values >= 0")
    inst = gen_spreading(args.k, args.n, args.seed)
    rows = ber_sweep(inst, k_prime, args.sigmas, args.frames, args.seed, signaling=args.signaling,
                     threads=args.threads)
    out = [dict(sigma=r.sigma, snr_db=r.snr_db, ber_constrained=r.ber_constrained,
                ber_unconstrained=r.ber_unconstrained, frames=r.frames) for r in rows]
    params = dict(k=args.k, n=args.n, k_prime=k_prime, sigmas=list(args.sigmas), frames=args.frames,
                  seed=args.seed, signaling=args.signaling)
    return formats.run_record("link-ber", params, out), EXIT_OK


COMMANDS = {
    "solve": run_solve,
    "optimize": run_optimize,
    "sweep": run_sweep,
    "mc-count": run_mc_count,
    "mc-entropy": run_mc_entropy,
    "link-ber": run_link,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        if args.threads is None:
            args.threads = default_threads()
        elif args.threads < 1:
            raise _UsageError("--threads must be >= 1")
        record, code = COMMANDS[args.command](args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"pocdma: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except NotConvergedError as exc:
        print(f"pocdma: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except DomainError as exc:
        print(f"pocdma: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = formats.render_json(record) if args.format == "json" else formats.render_csv(record)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

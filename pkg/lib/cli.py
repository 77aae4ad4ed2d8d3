"""
Command-line interface.

    python lib/cli.py compute --rho R.json --sigma S.json --divergence renyi --alpha 2 --method layercake
    python lib/cli.py sweep --rho R.json --sigma S.json --alpha-range 0.1:3:0.1 --methods layercake,hs_integral
    python lib/cli.py rs-dist --rho R.json --sigma S.json --out staircase.csv
    python lib/cli.py exponents --rho R.json --sigma S.json --n 1,2,3 --a -0.2,0,0.2 --alpha 0.5,2
    python lib/cli.py verify --trials 5 --dims 2 --seed 1

JSON and CSV artifacts go to stdout (or --out); logs and errors go to stderr.
Exit codes: 0 ok, 2 validation error, 3 numerical failure, 4 property-suite failure.
"""
import argparse
import json
import logging
import math
import sys
from typing import Dict, Optional, Sequence

import config as qconfig
from convex_functions import get_convex_function
from divergences import (F_METHODS, Q_METHODS, RELENT_METHODS, f_divergence,
                         q_alpha, q_alpha_sweep, relative_entropy)
from duality import duality_optimum
from errors import BadArgument, NonPositiveQ, PropertySuiteFailure, QdivError
from report import (EXPONENT_HEADER, RS_HEADER, SWEEP_HEADER, format_check_table, method_spread,
                    save_suite_report, sweep_rows, write_csv, write_csv_file)
from rs_dist import f_div_rs, q_alpha_rs, relative_entropy_rs, rs_table
from state_io import StateFileValidator, parse_state_file
from testing_exponents import exponent_grid
from trace_reps import q_alpha_trace
from utils import jsonable, parse_float_list, parse_int_list, parse_range, to_log_base
from verify_suite import run_suite

logger = logging.getLogger('qdiv')

RENYI_METHODS = Q_METHODS + ('trace', 'rs', 'renyi_limit')
F_CLI_METHODS = F_METHODS + ('rs', 'duality')
RELENT_CLI_METHODS = RELENT_METHODS + ('rs',)


def configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="[%(name)s] %(message)s",
                        handlers=[logging.StreamHandler(sys.stderr)], force=True)


def build_config(args) -> qconfig.Config:
    log_base = '2' if args.bits else args.log_base
    return qconfig.Config.from_env(threads=args.threads, seed=resolve_seed(args),
                                   log_base=log_base)


def resolve_seed(args) -> int:
    for value in (getattr(args, 'seed', None), args.global_seed):
        if value is not None:
            return value
    return qconfig.DEFAULT_SEED


def _emit_rows(rows, header, out: Optional[str]) -> None:
    if out:
        write_csv_file(rows, header, out)
        logger.info("Wrote %s", out)
    else:
        write_csv(rows, header, sys.stdout)


def _load_pair(args, cfg: qconfig.Config):
    summary = StateFileValidator(cfg).validate_files([args.rho, args.sigma])
    for entry in summary['valid']:
        logger.debug("%s: %dx%d state, trace %.12g, min eigenvalue %.3e", entry['filepath'],
                     entry['dim'], entry['dim'], entry['trace'], entry['min_eig'])
    for entry in summary['invalid']:
        logger.error("%s: %s", entry['filepath'], '; '.join(entry['issues']))
    # re-parse so that the first bad file raises with its exit code
    return parse_state_file(args.rho, cfg), parse_state_file(args.sigma, cfg)


# Subcommands

def _compute_renyi(rho, sigma, args, cfg) -> Dict[str, object]:
    if args.alpha is None:
        raise BadArgument("--alpha is required for --divergence renyi")
    alpha, method = args.alpha, args.method
    if method not in RENYI_METHODS:
        raise BadArgument(f"Unknown Renyi method {method!r}; choose from {', '.join(RENYI_METHODS)}")
    if alpha == 1.0:
        if method != 'renyi_limit':
            raise BadArgument("alpha=1 requires method renyi_limit")
        res = relative_entropy(rho, sigma, 'renyi_limit', cfg)
        return {**res.to_dict(), 'alpha': alpha}
    if method == 'renyi_limit':
        raise BadArgument("method renyi_limit is only defined at alpha=1")

    if method == 'trace':
        q = q_alpha_trace(rho, sigma, alpha, cfg)
    elif method == 'rs':
        q = q_alpha_rs(rho, sigma, alpha, cfg)
    else:
        q = q_alpha(rho, sigma, alpha, method, cfg)
    value = _log_ratio(q.value, alpha)
    return {'value': value, 'method': q.method,
            'err_estimate': q.err_estimate / (abs(alpha - 1.0) * q.value),
            'converged': q.converged, 'alpha': alpha, 'q_alpha': q.value}


def _log_ratio(q: float, alpha: float) -> float:
    if q <= 0:
        raise NonPositiveQ(f"Q_alpha = {q:.3e} is not positive")
    return math.log(q) / (alpha - 1.0)


def cmd_compute(args, cfg: qconfig.Config) -> int:
    rho, sigma = _load_pair(args, cfg)
    if args.divergence == 'renyi':
        payload = _compute_renyi(rho, sigma, args, cfg)
        logarithmic = True
    elif args.divergence == 'relent':
        method = args.method
        if method not in RELENT_CLI_METHODS:
            raise BadArgument(f"Unknown relative entropy method {method!r}; "
                              f"choose from {', '.join(RELENT_CLI_METHODS)}")
        if method == 'rs':
            res = relative_entropy_rs(rho, sigma, cfg)
        else:
            res = relative_entropy(rho, sigma, method, cfg, generalized=args.generalized)
        payload = res.to_dict()
        logarithmic = True
    else:
        if not args.f:
            raise BadArgument("--f is required for --divergence f")
        f = get_convex_function(args.f)
        method = args.method
        if method not in F_CLI_METHODS:
            raise BadArgument(f"Unknown f-divergence method {method!r}; "
                              f"choose from {', '.join(F_CLI_METHODS)}")
        if method == 'rs':
            res = f_div_rs(rho, sigma, f, cfg)
        elif method == 'duality':
            res = duality_optimum(rho, sigma, f, cfg)
        else:
            res = f_divergence(rho, sigma, f, method, cfg, shift=args.shift)
        payload = {**res.to_dict(), 'f': f.name}
        logarithmic = False

    if logarithmic:
        payload['value'] = to_log_base(payload['value'], cfg.log_base)
        payload['err_estimate'] = to_log_base(payload['err_estimate'], cfg.log_base)
        payload['unit'] = 'bits' if cfg.log_base == '2' else 'nats'
    payload['divergence'] = args.divergence
    sys.stdout.write(json.dumps(jsonable(payload)) + '\n')
    return 0


def cmd_sweep(args, cfg: qconfig.Config) -> int:
    rho, sigma = _load_pair(args, cfg)
    try:
        alphas = parse_range(args.alpha_range)
    except ValueError as e:
        raise BadArgument(str(e))
    methods = [m.strip() for m in args.methods.split(',') if m.strip()]
    for m in methods:
        if m not in Q_METHODS + ('trace', 'rs'):
            raise BadArgument(f"Unknown sweep method {m!r}")
    if 1.0 in alphas:
        logger.warning("Skipping alpha=1 in the sweep (use compute --method renyi_limit)")
        alphas = [a for a in alphas if a != 1.0]

    cells = {}
    core = [m for m in methods if m in Q_METHODS and m != 'swapped']
    if core:
        for a, m, res in q_alpha_sweep(rho, sigma, alphas, core, cfg):
            cells[(a, m)] = res
    for a in alphas:
        for m in methods:
            if (a, m) in cells:
                continue
            if m == 'swapped' and a > 1.0:
                continue
            if m == 'swapped':
                cells[(a, m)] = q_alpha(rho, sigma, a, 'swapped', cfg)
            elif m == 'trace':
                cells[(a, m)] = q_alpha_trace(rho, sigma, a, cfg)
            elif m == 'rs':
                cells[(a, m)] = q_alpha_rs(rho, sigma, a, cfg)

    ordered = [(a, m, cells[(a, m)]) for a in alphas for m in methods if (a, m) in cells]
    rows = sweep_rows(ordered, cfg.log_base)
    if len(methods) > 1 and rows:
        spread = method_spread(rows)
        worst = max(spread, key=spread.get)
        logger.info("Largest Q_alpha spread across methods: %.3e at alpha=%g", spread[worst], worst)
    _emit_rows(rows, SWEEP_HEADER, args.out)
    return 0


def cmd_rs_dist(args, cfg: qconfig.Config) -> int:
    rho, sigma = _load_pair(args, cfg)
    rows = rs_table(rho, sigma, n_grid=args.grid, config=cfg)
    _emit_rows(rows, RS_HEADER, args.out)
    return 0


def cmd_exponents(args, cfg: qconfig.Config) -> int:
    rho, sigma = _load_pair(args, cfg)
    try:
        ns = parse_int_list(args.n)
        thresholds = parse_float_list(args.a)
        alphas = parse_float_list(args.alpha)
    except ValueError as e:
        raise BadArgument(f"Bad grid: {e}")
    rows = exponent_grid(rho, sigma, ns, thresholds, alphas, cfg)
    _emit_rows(rows, EXPONENT_HEADER, args.out)
    return 0


def cmd_verify(args, cfg: qconfig.Config) -> int:
    try:
        dims = parse_int_list(args.dims)
    except ValueError as e:
        raise BadArgument(f"Bad --dims: {e}")
    only = [name.strip() for item in (args.only or []) for name in item.split(',') if name.strip()]
    trials = args.trials
    if trials is None:
        trials = qconfig.ACCEPTANCE_TRIALS if args.acceptance else qconfig.VERIFY_TRIALS
    report = run_suite(trials=trials, dims=dims, seed=cfg.seed, only=only or None,
                       config=cfg, verbose=args.verbose,
                       show_progress=qconfig.PROGRESS_BAR and not args.no_progress,
                       witnesses=args.witnesses)
    sys.stdout.write(format_check_table(report.results) + '\n')
    if args.json:
        save_suite_report(report.to_dict(), args.json)
        logger.info("Wrote %s", args.json)
    report.raise_on_failure()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='qdiv',
        description="Quantum f-divergences and Renyi divergences via layer-cake representations")
    parser.add_argument('--bits', action='store_true', help="report logarithmic values in bits")
    parser.add_argument('--log-base', choices=qconfig.LOG_BASES, default='e')
    parser.add_argument('--threads', type=int, default=None,
                        help="worker threads (default: QDIV_THREADS or 1)")
    parser.add_argument('--no-progress', action='store_true', help="disable progress bars")
    parser.add_argument('--seed', dest='global_seed', type=int, default=None)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true')
    verbosity.add_argument('-q', '--quiet', action='store_true')

    sub = parser.add_subparsers(dest='command', required=True)

    def with_pair(p):
        p.add_argument('--rho', required=True, help="state file for rho")
        p.add_argument('--sigma', required=True, help="state file for sigma")
        return p

    p = with_pair(sub.add_parser('compute', help="one divergence value as JSON"))
    p.add_argument('--divergence', choices=('renyi', 'f', 'relent'), required=True)
    p.add_argument('--alpha', type=float)
    p.add_argument('--f', help=f"convex function name ({', '.join(('kl', 'chi2', 'tv', 'hellinger:A', 'sq_hellinger', 'hockey:C'))})")
    p.add_argument('--method', default='layercake')
    p.add_argument('--shift', type=float, default=1.0, help="reference point for method shifted")
    p.add_argument('--generalized', action='store_true',
                   help="add Tr[sigma - rho] to the relative entropy")
    p.set_defaults(handler=cmd_compute)

    p = with_pair(sub.add_parser('sweep', help="Q_alpha and D_alpha per alpha and method as CSV"))
    p.add_argument('--alpha-range', required=True, help="lo:hi:step")
    p.add_argument('--methods', default='layercake')
    p.add_argument('--out')
    p.set_defaults(handler=cmd_sweep)

    p = with_pair(sub.add_parser('rs-dist', help="Riemann-Stieltjes staircase as CSV"))
    p.add_argument('--grid', type=int, default=200)
    p.add_argument('--out')
    p.set_defaults(handler=cmd_rs_dist)

    p = with_pair(sub.add_parser('exponents', help="threshold-test bounds on an (n, a, alpha) grid"))
    p.add_argument('--n', default='1,2,3')
    p.add_argument('--a', default='-0.2,0,0.2')
    p.add_argument('--alpha', default='0.5,2')
    p.add_argument('--out')
    p.set_defaults(handler=cmd_exponents)

    p = sub.add_parser('verify', help="run the property suite")
    p.add_argument('--trials', type=int, default=None,
                   help=f"pairs per check (default {qconfig.VERIFY_TRIALS}, a smoke run)")
    p.add_argument('--acceptance', action='store_true',
                   help=f"{qconfig.ACCEPTANCE_TRIALS} pairs per check unless --trials is given")
    p.add_argument('--dims', default=','.join(map(str, qconfig.VERIFY_DIMS)))
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('--witnesses', type=int, default=qconfig.VERIFY_WITNESSES)
    p.add_argument('--only', action='append', help="check or group name (repeatable, comma lists)")
    p.add_argument('--json', help="write the full report to this path")
    p.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        cfg = build_config(args)
        return args.handler(args, cfg)
    except QdivError as e:
        if not isinstance(e, PropertySuiteFailure):
            logger.debug("Failed", exc_info=True)
        sys.stderr.write(json.dumps(jsonable(e.to_dict())) + '\n')
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())

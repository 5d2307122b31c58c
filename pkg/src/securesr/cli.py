"""
Command-line interface.

Parameter precedence: command-line flags, then values from ``--config``
(a JSON object keyed by SystemParams field names), then built-in defaults.

Exit status: 0 on success, 1 on a runtime error or oracle mismatch,
2 on a usage or configuration error, 3 if the instance is infeasible,
4 if the optimizer hit ``--max-iters``.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, fields
from pathlib import Path

import numpy as np

from .channel import SystemParams, load_realization, sample_channels, save_realization
from .errors import ConfigurationError, SecureSRError
from .experiments import SCHEMES, SWEEPABLE, SweepSpec, run_convergence, run_sweep
from .model import build_an_precoder, coefficients_ab, power_split, secrecy_rate
from .optimizer import (CONVERGED, INFEASIBLE, MAX_ITERATIONS, alternating_optimize,
                        optimal_phi_ab, w_unconstrained_secrecy, w_weighted_search)
from .validation import OracleConfig, grid_search_phi, sample_search_w

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_MAX_ITERS = 0, 1, 2, 3, 4

PARAM_FLAGS = {
    'nt': int, 'ne': int, 'p_dbm': float, 'gamma_s_th_db': float, 'alpha': float,
    'sigma_s2': float, 'sigma_c2': float, 'sigma_e2': float, 'd': int, 'epsilon': float,
    'seed': int,
}


def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group('system parameters (override --config and defaults)')
    defaults = SystemParams()
    for name, typ in PARAM_FLAGS.items():
        g.add_argument('--' + name.replace('_', '-'), dest=name, type=typ, default=None,
                       help=f'default {getattr(defaults, name)}')
    parser.add_argument('--config', type=Path, help='JSON file with SystemParams fields')
    parser.add_argument('--max-iters', type=int, default=50)
    parser.add_argument('--project-phi', action='store_true',
                        help='raise phi updates that break the QoS constraint to its boundary')
    parser.add_argument('--threads', type=int, default=1, help='worker processes')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='securesr', description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('solve', help='optimize one channel realization')
    _common(p)
    p.add_argument('--trial', type=int, default=0, help='trial index of the channel draw')
    p.add_argument('--channel-file', type=Path, help='load the realization from JSON')
    p.add_argument('--export-channel', type=Path, help='write the realization to JSON')
    p.add_argument('--out', type=Path, help='write the solution as JSON')
    p.add_argument('--validate', action='store_true', help='also run the brute-force oracles')

    p = sub.add_parser('sweep', help='Monte-Carlo sweep of one parameter')
    _common(p)
    p.add_argument('--param', required=True, choices=SWEEPABLE)
    p.add_argument('--values', required=True,
                   help='comma list "0,3,6" or inclusive range "start:step:stop"')
    p.add_argument('--trials', type=int, default=1000)
    p.add_argument('--schemes', default=','.join(SCHEMES))
    p.add_argument('--phi-fixed', type=float, default=0.5)
    p.add_argument('--out', type=Path, required=True,
                   help='CSV path; a JSON copy is written next to it')

    p = sub.add_parser('convergence', help='per-iteration secrecy rate of the proposed scheme')
    _common(p)
    p.add_argument('--trials', type=int, default=1000)
    p.add_argument('--tolerance', type=float, default=1e-4)
    p.add_argument('--out', type=Path, required=True)

    p = sub.add_parser('validate', help='compare the optimizer against brute-force oracles')
    _common(p)
    p.add_argument('--trials', type=int, default=10)
    p.add_argument('--phi-step', type=float, default=1e-5)
    p.add_argument('--samples', type=int, default=10_000)
    p.add_argument('--grid', type=int, default=200)
    return parser


def resolve_params(args) -> SystemParams:
    values = {}
    if getattr(args, 'config', None):
        cfg = json.loads(Path(args.config).read_text())
        known = {f.name for f in fields(SystemParams)}
        unknown = set(cfg) - known
        if unknown:
            raise ConfigurationError(f'unknown config keys: {sorted(unknown)}')
        values.update(cfg)
    for name in PARAM_FLAGS:
        v = getattr(args, name, None)
        if v is not None:
            values[name] = v
    return SystemParams(**values)


def parse_values(text: str, typ=float) -> list:
    text = text.strip()
    if ':' in text:
        start, step, stop = (float(x) for x in text.split(':'))
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        vals = [start + k * step for k in range(n)]
    else:
        vals = [float(x) for x in text.split(',') if x.strip()]
    if typ is int:
        if any(v != int(v) for v in vals):
            raise ConfigurationError('integer parameter needs integer values')
        return [int(v) for v in vals]
    return [int(v) if v == int(v) else v for v in vals]


def _fmt(x) -> str:
    return 'nan' if x is None or (isinstance(x, float) and math.isnan(x)) else f'{x:.6g}'


def _solution_doc(sol, params) -> dict:
    def cplx(v):
        return None if v is None else np.stack([v.real, v.imag], axis=-1).tolist()
    return {
        'params': asdict(params), 'status': sol.status, 'phi_opt': sol.phi_opt,
        'lambda_opt': None if math.isnan(sol.lambda_opt) else sol.lambda_opt,
        'r_sec': sol.r_sec, 'gamma_s': None if math.isnan(sol.gamma_s) else sol.gamma_s,
        'w_opt': cplx(sol.w_opt),
        'trace': [{k: (None if isinstance(v, float) and math.isnan(v) else v)
                   for k, v in asdict(t).items()} for t in sol.trace],
    }


def _oracle_report(ch, an, params, sol, cfg: OracleConfig) -> list[tuple[str, float, float]]:
    """(check, delta, tolerance) triples; a check fails when delta > tolerance."""
    out = []
    w, phi = sol.w_opt, sol.phi_opt
    a, b = coefficients_ab(w, ch, an, params)
    if a > b:
        phi_star, _ = grid_search_phi(w, ch, an, params, cfg)
        out.append(('phi closed form vs grid', abs(optimal_phi_ab(a, b).phi - phi_star),
                    cfg.phi_grid_step))
    split = power_split(phi, params)
    w_e2 = w_unconstrained_secrecy(phi, ch, an, params)
    r_e2 = float(secrecy_rate(w_e2, split, ch, an, params))
    _, r_free = sample_search_w(phi, ch, an, params, cfg, constrained=False)
    out.append(('unconstrained sample search - w_e2 rate', r_free - r_e2, 1e-9))
    _, _, r_step = w_weighted_search(phi, ch, an, params)
    _, r_con = sample_search_w(phi, ch, an, params, cfg, constrained=True)
    out.append(('constrained sample search - w-step rate', r_con - r_step, 1e-3))
    out.append(('proposed rate - w_e2 rate', sol.r_sec - r_e2, 1e-9))
    return out


def cmd_solve(args) -> int:
    params = resolve_params(args)
    if args.channel_file:
        ch = load_realization(args.channel_file)
        if (ch.nt, ch.ne) != (params.nt, params.ne):
            params = SystemParams(**{**asdict(params), 'nt': ch.nt, 'ne': ch.ne})
    else:
        ch = sample_channels(params, args.trial)
    if args.export_channel:
        save_realization(ch, args.export_channel, params)
    if params.ne > params.nt - 2:
        raise ConfigurationError(f'ne={params.ne} exceeds nt-2={params.nt - 2}')
    an = build_an_precoder(ch)
    sol = alternating_optimize(ch, params, an, max_iters=args.max_iters,
                               project_phi=args.project_phi)
    print(f'status      {sol.status}')
    print(f'phi_opt     {_fmt(sol.phi_opt)}')
    print(f'lambda_opt  {_fmt(sol.lambda_opt)}')
    print(f'r_sec       {_fmt(sol.r_sec)} bits/s/Hz')
    print(f'gamma_s     {_fmt(sol.gamma_s)} (threshold {_fmt(params.gamma_s_th)})')
    print('iter  phi        lambda1    r_sec        gamma_s      feasible')
    for t in sol.trace:
        print(f'{t.iteration:<5d} {_fmt(t.phi):<10} {_fmt(t.lambda1):<10} '
              f'{_fmt(t.r_sec):<12} {_fmt(t.gamma_s):<12} {t.feasible}')
    if args.out:
        Path(args.out).write_text(json.dumps(_solution_doc(sol, params), indent=1) + '\n')
    status = {CONVERGED: EXIT_OK, INFEASIBLE: EXIT_INFEASIBLE,
              MAX_ITERATIONS: EXIT_MAX_ITERS}[sol.status]
    if args.validate and sol.w_opt is not None:
        failed = False
        for name, delta, tol in _oracle_report(ch, an, params, sol, OracleConfig()):
            ok = delta <= tol
            failed |= not ok
            print(f'oracle  {name:<42} delta {delta:+.3e}  tol {tol:.0e}  {"ok" if ok else "EXCEEDED"}')
        if failed and status == EXIT_OK:
            status = EXIT_ERROR
    return status


def cmd_sweep(args) -> int:
    base = resolve_params(args)
    typ = int if args.param in ('nt', 'ne') else float
    spec = SweepSpec(args.param, parse_values(args.values, typ), trials=args.trials,
                     schemes=tuple(s.strip() for s in args.schemes.split(',') if s.strip()),
                     base=base, max_iters=args.max_iters, project_phi=args.project_phi,
                     phi_fixed=args.phi_fixed)
    spec.point_params()   # reject bad configurations before any work or file output
    result = run_sweep(spec, threads=args.threads)
    out = Path(args.out)
    result.to_csv(out)
    result.to_json(out.with_suffix('.json'))
    for r in result.rows:
        print(f'{args.param}={r.value:<8} {r.scheme:<20} R_sec {_fmt(r.mean_r_sec):<10} '
              f'phi {_fmt(r.mean_phi):<10} lambda {_fmt(r.mean_lambda):<10} '
              f'feasible {r.feasible_frac:.3f} n={r.trials}')
    return EXIT_OK


def cmd_convergence(args) -> int:
    params = resolve_params(args)
    res = run_convergence(params, args.trials, tolerance=args.tolerance,
                          max_iters=args.max_iters, project_phi=args.project_phi,
                          threads=args.threads)
    res.to_csv(args.out)
    print(f'feasible trials {len(res.trajectories)}, infeasible {res.n_infeasible}, '
          f'hit max-iters {res.n_max_iters}')
    print(f'iterations to tolerance {args.tolerance:g}: median {_fmt(res.median_iterations())}'
          f', 95th percentile {_fmt(res.percentile_iterations(95))}')
    for it, count in sorted(res.histogram().items()):
        print(f'  {it:3d}: {count}')
    return EXIT_OK


def cmd_validate(args) -> int:
    params = resolve_params(args)
    cfg = OracleConfig(phi_grid_step=args.phi_step, sphere_samples=args.samples,
                       subspace_grid=args.grid, seed=params.seed)
    worst: dict[str, tuple[float, float]] = {}
    for t in range(args.trials):
        ch = sample_channels(params, t)
        an = build_an_precoder(ch)
        sol = alternating_optimize(ch, params, an, max_iters=args.max_iters,
                                   project_phi=args.project_phi)
        if sol.w_opt is None:
            print(f'trial {t}: infeasible, skipped')
            continue
        for name, delta, tol in _oracle_report(ch, an, params, sol, cfg):
            if name not in worst or delta > worst[name][0]:
                worst[name] = (delta, tol)
    failed = False
    for name, (delta, tol) in worst.items():
        ok = delta <= tol
        failed |= not ok
        print(f'{name:<42} worst delta {delta:+.3e}  tol {tol:.0e}  {"ok" if ok else "EXCEEDED"}')
    return EXIT_ERROR if failed else EXIT_OK


COMMANDS = {'solve': cmd_solve, 'sweep': cmd_sweep, 'convergence': cmd_convergence,
            'validate': cmd_validate}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f'configuration error: {exc}', file=sys.stderr)
        return EXIT_USAGE
    except (SecureSRError, ValueError) as exc:
        print(f'error: {exc}', file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())

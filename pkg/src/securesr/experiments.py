"""
Monte-Carlo sweeps and convergence studies.

Trials are independent work items. Results are folded in trial order, so the
output does not depend on the number of worker processes.
"""
from __future__ import annotations

import csv
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .baselines import solve_mrt_optimal_phi, solve_optimal_w_fixed_phi
from .channel import SystemParams, sample_channels
from .errors import ConfigurationError
from .model import build_an_precoder
from .optimizer import DEFAULT_MAX_ITERS, MAX_ITERATIONS, alternating_optimize, \
    iterations_to_tolerance

__all__ = ['SWEEPABLE', 'SCHEMES', 'SweepSpec', 'SweepRow', 'SweepResult', 'run_sweep',
           'ConvergenceResult', 'run_convergence', 'CSV_HEADER']

SWEEPABLE = ('gamma_s_th_db', 'nt', 'ne', 'p_dbm', 'alpha')
SCHEMES = ('proposed', 'mrt_optimal_phi', 'optimal_w_fixed_phi')
CSV_HEADER = ['parameter', 'scheme', 'mean_r_sec', 'mean_phi', 'mean_lambda', 'mean_iters',
              'feasible_frac', 'trials']
CHUNK = 50


@dataclass(frozen=True)
class SweepSpec:
    swept_parameter: str
    values: Sequence
    trials: int = 1000
    schemes: Sequence[str] = SCHEMES
    base: SystemParams = field(default_factory=SystemParams)
    max_iters: int = DEFAULT_MAX_ITERS
    project_phi: bool = False
    phi_fixed: float = 0.5

    def point_params(self) -> list[SystemParams]:
        """Validated parameters for every swept value."""
        if self.swept_parameter not in SWEEPABLE:
            raise ConfigurationError(
                f'cannot sweep {self.swept_parameter!r}; choose one of {SWEEPABLE}')
        if len(self.values) == 0:
            raise ConfigurationError('no swept values given')
        if self.trials < 1:
            raise ConfigurationError('trials must be >= 1')
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad or not self.schemes:
            raise ConfigurationError(f'unknown schemes {bad}; choose from {SCHEMES}')
        out = []
        for v in self.values:
            params = replace(self.base, **{self.swept_parameter: v})
            if params.ne > params.nt - 2:
                raise ConfigurationError(
                    f'ne={params.ne} exceeds nt-2={params.nt - 2}: AN correlation is singular')
            out.append(params)
        return out


@dataclass(frozen=True)
class SweepRow:
    value: float
    scheme: str
    mean_r_sec: float
    mean_phi: float
    mean_lambda: float
    mean_iters: float
    feasible_frac: float
    trials: int          # paired-feasible trials behind the means


@dataclass
class SweepResult:
    parameter: str
    rows: list[SweepRow]

    def column(self, scheme: str, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows if r.scheme == scheme])

    def values(self) -> list:
        seen = []
        for r in self.rows:
            if r.value not in seen:
                seen.append(r.value)
        return seen

    def to_csv(self, path: str | Path) -> None:
        with open(path, 'w', newline='') as fh:
            writer = csv.writer(fh, lineterminator='\n')
            writer.writerow(CSV_HEADER)
            for r in self.rows:
                writer.writerow([r.value, r.scheme, repr(r.mean_r_sec), repr(r.mean_phi),
                                 repr(r.mean_lambda), repr(r.mean_iters),
                                 repr(r.feasible_frac), r.trials])

    def to_json(self, path: str | Path) -> None:
        doc = {'swept_parameter': self.parameter, 'columns': CSV_HEADER,
               'rows': [_json_row(r) for r in self.rows]}
        Path(path).write_text(json.dumps(doc, indent=1) + '\n')


def _json_row(r: SweepRow) -> dict:
    d = asdict(r)
    d['parameter'] = d.pop('value')
    # JSON has no NaN
    return {k: (None if isinstance(v, float) and math.isnan(v) else v)
            for k, v in ((c, d[c]) for c in CSV_HEADER)}


def _solve(scheme, ch, an, params, max_iters, project_phi, phi_fixed):
    if scheme == 'proposed':
        return alternating_optimize(ch, params, an, max_iters=max_iters,
                                    project_phi=project_phi)
    if scheme == 'mrt_optimal_phi':
        return solve_mrt_optimal_phi(ch, an, params)
    return solve_optimal_w_fixed_phi(ch, an, params, phi_fixed)


def _sweep_chunk(job):
    params, point, trials, schemes, max_iters, project_phi, phi_fixed = job
    out = []
    for t in trials:
        ch = sample_channels(params, t, point_index=point)
        an = build_an_precoder(ch)
        res = []
        for s in schemes:
            sol = _solve(s, ch, an, params, max_iters, project_phi, phi_fixed)
            res.append((sol.feasible, sol.r_sec, sol.phi_opt, sol.lambda_opt, sol.iterations))
        out.append(res)
    return out


def _map(fn, jobs, threads: int):
    if threads <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, jobs))


def run_sweep(spec: SweepSpec, threads: int = 1) -> SweepResult:
    """
    Average every scheme over `spec.trials` channel draws per swept value.

    A trial enters the means only if every requested scheme is feasible on
    it; ``feasible_frac`` is each scheme's own feasibility rate.
    """
    points = spec.point_params()
    schemes = tuple(spec.schemes)
    jobs = []
    for i, params in enumerate(points):
        for start in range(0, spec.trials, CHUNK):
            trials = range(start, min(start + CHUNK, spec.trials))
            jobs.append((params, i, trials, schemes, spec.max_iters, spec.project_phi,
                         spec.phi_fixed))
    chunks = _map(_sweep_chunk, jobs, threads)

    rows = []
    per_point = math.ceil(spec.trials / CHUNK)
    for i, value in enumerate(spec.values):
        results = [r for c in chunks[i * per_point:(i + 1) * per_point] for r in c]
        arr = np.array([[list(x) for x in trial] for trial in results], dtype=float)
        feas = arr[:, :, 0].astype(bool)
        paired = feas.all(axis=1)
        for k, s in enumerate(schemes):
            sel = arr[paired, k]
            rows.append(SweepRow(
                value=value, scheme=s,
                mean_r_sec=_mean(sel[:, 1]), mean_phi=_mean(sel[:, 2]),
                mean_lambda=_mean(sel[:, 3]), mean_iters=_mean(sel[:, 4]),
                feasible_frac=float(feas[:, k].mean()), trials=int(paired.sum())))
    return SweepResult(spec.swept_parameter, rows)


def _mean(x: np.ndarray) -> float:
    x = x[~np.isnan(x)]
    return float(x.mean()) if x.size else math.nan


@dataclass
class ConvergenceResult:
    tolerance: float
    trajectories: list[list[float]]    # per feasible trial, rate after each iteration
    iterations_to_tol: list[int]
    n_infeasible: int = 0
    n_max_iters: int = 0

    def mean_trajectory(self) -> np.ndarray:
        """Mean rate per iteration; finished runs hold their final value."""
        if not self.trajectories:
            return np.zeros(0)
        n = max(len(t) for t in self.trajectories)
        padded = np.array([t + [t[-1]] * (n - len(t)) for t in self.trajectories])
        return padded.mean(axis=0)

    def active(self) -> np.ndarray:
        n = max((len(t) for t in self.trajectories), default=0)
        return np.array([sum(len(t) > j for t in self.trajectories) for j in range(n)])

    def histogram(self) -> Counter:
        return Counter(self.iterations_to_tol)

    def median_iterations(self) -> float:
        return float(np.median(self.iterations_to_tol)) if self.iterations_to_tol else math.nan

    def percentile_iterations(self, q: float) -> float:
        return float(np.percentile(self.iterations_to_tol, q)) if self.iterations_to_tol \
            else math.nan

    def to_csv(self, path: str | Path) -> None:
        """One row per iteration: mean rate, runs still active, runs that reached the tolerance there."""
        mean = self.mean_trajectory()
        active = self.active()
        hist = self.histogram()
        with open(path, 'w', newline='') as fh:
            writer = csv.writer(fh, lineterminator='\n')
            writer.writerow(['iteration', 'mean_r_sec', 'active_trials', 'reached_tolerance'])
            for j in range(mean.size):
                writer.writerow([j + 1, repr(float(mean[j])), int(active[j]), hist.get(j + 1, 0)])


def _convergence_chunk(job):
    params, trials, tolerance, max_iters, project_phi = job
    out = []
    for t in trials:
        ch = sample_channels(params, t)
        sol = alternating_optimize(ch, params, max_iters=max_iters, project_phi=project_phi)
        out.append((sol.feasible, sol.status, [tr.r_sec for tr in sol.trace],
                    iterations_to_tolerance(sol.trace, tolerance) if sol.feasible else 0))
    return out


def run_convergence(params: SystemParams, trials: int, tolerance: float = 1e-4,
                    max_iters: int = DEFAULT_MAX_ITERS, project_phi: bool = False,
                    threads: int = 1) -> ConvergenceResult:
    """Record the per-iteration secrecy rate of the proposed algorithm over `trials` draws."""
    if params.ne > params.nt - 2:
        raise ConfigurationError(f'ne={params.ne} exceeds nt-2={params.nt - 2}')
    jobs = [(params, range(s, min(s + CHUNK, trials)), tolerance, max_iters, project_phi)
            for s in range(0, max(trials, 0), CHUNK)]
    results = [r for c in _map(_convergence_chunk, jobs, threads) for r in c]
    res = ConvergenceResult(tolerance, [], [])
    for feasible, status, rates, n_tol in results:
        if not feasible:
            res.n_infeasible += 1
            continue
        res.trajectories.append(rates)
        res.iterations_to_tol.append(n_tol)
        res.n_max_iters += status == MAX_ITERATIONS
    return res

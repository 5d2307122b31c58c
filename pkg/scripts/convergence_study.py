"""
Mean secrecy rate per iteration at the default setting, and the number of
iterations needed as the tolerance tightens.

    python scripts/convergence_study.py --trials 1000 --out-dir results
"""
import argparse
import csv
from pathlib import Path

from securesr.channel import SystemParams
from securesr.experiments import run_convergence


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    ap.add_argument('--trials', type=int, default=1000)
    ap.add_argument('--threads', type=int, default=1)
    ap.add_argument('--out-dir', default='results')
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    params = SystemParams()
    res = run_convergence(params, args.trials, tolerance=1e-4, threads=args.threads)
    res.to_csv(out / 'convergence_trajectory.csv')
    print(f'tolerance 1e-4: median {res.median_iterations():g}, '
          f'p95 {res.percentile_iterations(95):g}')

    with open(out / 'convergence_tolerance.csv', 'w', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(['tolerance', 'median_iterations', 'p95_iterations', 'mean_iterations'])
        for tol in (1e-2, 1e-4, 1e-6, 1e-8, 1e-10):
            r = run_convergence(params, args.trials, tolerance=tol, threads=args.threads)
            mean = sum(r.iterations_to_tol) / max(len(r.iterations_to_tol), 1)
            writer.writerow([tol, r.median_iterations(), r.percentile_iterations(95), repr(mean)])
            print(f'tolerance {tol:g}: median {r.median_iterations():g}')


if __name__ == '__main__':
    main()

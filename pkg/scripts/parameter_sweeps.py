"""
Secrecy rate of the proposed scheme against the antenna counts, the transmit
power and the reflection coefficient. One CSV per swept parameter.

    python scripts/parameter_sweeps.py --trials 1000 --out-dir results
"""
import argparse
from pathlib import Path

from securesr.experiments import SweepSpec, run_sweep

SWEEPS = {
    'nt': [6, 8, 10, 12],
    'ne': [1, 2, 4, 6],
    'p_dbm': [40, 44, 48, 52],
    'alpha': [0.1, 0.3, 0.5, 0.7],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    ap.add_argument('--trials', type=int, default=1000)
    ap.add_argument('--threads', type=int, default=1)
    ap.add_argument('--out-dir', default='results')
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for param, values in SWEEPS.items():
        res = run_sweep(SweepSpec(param, values, args.trials, schemes=('proposed',)),
                        threads=args.threads)
        res.to_csv(out / f'sweep_{param}.csv')
        rates = ', '.join(f'{v}: {r:.3f}' for v, r in
                          zip(res.values(), res.column('proposed', 'mean_r_sec')))
        print(f'{param:<6} {rates}')


if __name__ == '__main__':
    main()

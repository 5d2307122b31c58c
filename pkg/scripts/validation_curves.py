"""
Secrecy rate against phi and against the blend weight lambda for a few seeded
instances, with the algorithm's optimum marked. Writes two long-format CSVs.

    python scripts/validation_curves.py --instances 4 --out-dir results
"""
import argparse
import csv
from pathlib import Path

import numpy as np

from securesr.channel import SystemParams, sample_channels
from securesr.model import build_an_precoder, coefficients_ab, power_split, rate_vs_phi, \
    secrecy_rate, snr_primary
from securesr.optimizer import align_phase, alternating_optimize, combination_grid, w_snr_max, \
    w_unconstrained_secrecy


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    ap.add_argument('--instances', type=int, default=4)
    ap.add_argument('--points', type=int, default=1000, help='phi grid size')
    ap.add_argument('--seed', type=int, default=5)
    ap.add_argument('--out-dir', default='results')
    args = ap.parse_args()

    params = SystemParams(seed=args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    phis = np.linspace(0.0, 1.0, args.points + 1)[1:-1]

    with open(out / 'validation_phi.csv', 'w', newline='') as fphi, \
            open(out / 'validation_lambda.csv', 'w', newline='') as flam:
        wphi, wlam = csv.writer(fphi, lineterminator='\n'), csv.writer(flam, lineterminator='\n')
        wphi.writerow(['instance', 'phi', 'r_sec', 'is_optimum'])
        wlam.writerow(['instance', 'lambda', 'r_sec', 'qos_ok', 'is_optimum'])
        done, trial = 0, 0
        while done < args.instances:
            ch = sample_channels(params, trial)
            trial += 1
            an = build_an_precoder(ch)
            sol = alternating_optimize(ch, params, an)
            if not sol.feasible:
                continue
            a, b = coefficients_ab(sol.w_opt, ch, an, params)
            for phi, r in zip(phis, rate_vs_phi(phis, a, b)):
                wphi.writerow([done, repr(float(phi)), repr(float(r)), 0])
            wphi.writerow([done, repr(sol.phi_opt), repr(sol.r_sec), 1])

            w_e1, _ = w_snr_max(sol.phi_opt, ch, an, params)
            w_e2 = align_phase(w_e1, w_unconstrained_secrecy(sol.phi_opt, ch, an, params))
            lambdas, cands = combination_grid(w_e1, w_e2, params.d)
            split = power_split(sol.phi_opt, params)
            rates = secrecy_rate(cands, split, ch, an, params)
            ok = snr_primary(cands, split, ch, params) >= params.gamma_s_th
            for lam, r, k in zip(lambdas, rates, ok):
                wlam.writerow([done, repr(float(lam)), repr(float(r)), int(k), 0])
            wlam.writerow([done, repr(sol.lambda_opt), repr(sol.r_sec), 1, 1])
            print(f'instance {done} (trial {trial - 1}): phi* {sol.phi_opt:.4f} '
                  f'lambda* {sol.lambda_opt:.3f} R_sec {sol.r_sec:.4f}')
            done += 1


if __name__ == '__main__':
    main()

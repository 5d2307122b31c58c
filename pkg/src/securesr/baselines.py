"""Benchmark schemes: MRT beamformer with optimal phi, and optimal w with fixed phi."""
from __future__ import annotations

import math

import numpy as np

from .channel import ChannelRealization, SystemParams
from .errors import DegenerateBeamError
from .model import AnPrecoder, power_split, secrecy_rate, snr_primary
from .optimizer import (CONVERGED, INFEASIBLE, PHI_INIT, IterationTrace, Solution, feasibility_check,
                        optimal_phi, w_snr_max, w_unconstrained_secrecy, w_weighted_search)

__all__ = ['solve_mrt_optimal_phi', 'solve_optimal_w_fixed_phi']


def solve_mrt_optimal_phi(ch: ChannelRealization, an: AnPrecoder,
                          params: SystemParams) -> Solution:
    """Beamform along the BD channel h2 and pick phi in closed form."""
    w = ch.h2 / np.linalg.norm(ch.h2)
    try:
        phi = optimal_phi(w, ch, an, params).phi
    except DegenerateBeamError:
        # no BD signal at all (alpha or g1 is zero); any phi gives rate 0
        phi = PHI_INIT
    split = power_split(phi, params)
    gamma = float(snr_primary(w, split, ch, params))
    r = float(secrecy_rate(w, split, ch, an, params))
    ok = feasibility_check(gamma, params)
    trace = [IterationTrace(1, phi, math.nan, r if ok else 0.0, gamma, ok)]
    if not ok:
        return Solution(None, phi, 0.0, INFEASIBLE, trace, gamma_s=gamma)
    return Solution(w, phi, r, CONVERGED, trace, gamma_s=gamma)


def solve_optimal_w_fixed_phi(ch: ChannelRealization, an: AnPrecoder, params: SystemParams,
                              phi_fixed: float = 0.5) -> Solution:
    """A single w-step of the proposed algorithm at ``phi = phi_fixed``."""
    if not 0.0 < phi_fixed < 1.0:
        raise ValueError(f'phi_fixed must lie in (0, 1), got {phi_fixed}')
    w_e1, gamma_max = w_snr_max(phi_fixed, ch, an, params)
    if not feasibility_check(gamma_max, params):
        trace = [IterationTrace(1, phi_fixed, math.nan, 0.0, gamma_max, False)]
        return Solution(None, phi_fixed, 0.0, INFEASIBLE, trace)
    w_e2 = w_unconstrained_secrecy(phi_fixed, ch, an, params)
    w, lam, r = w_weighted_search(phi_fixed, ch, an, params, w_e1=w_e1, w_e2=w_e2)
    if w is None:
        w, lam = w_e1, 1.0
        r = float(secrecy_rate(w, power_split(phi_fixed, params), ch, an, params))
    gamma = float(snr_primary(w, power_split(phi_fixed, params), ch, params))
    trace = [IterationTrace(1, phi_fixed, lam, r, gamma, True)]
    return Solution(w, phi_fixed, r, CONVERGED, trace, lambda_opt=lam, gamma_s=gamma)

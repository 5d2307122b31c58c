"""
Alternating optimization of the information beamformer w and the power
factor phi.

For fixed phi, w is searched along the normalized segment between the
SNR-maximizing beamformer ``w_e1`` and the unconstrained secrecy-maximizing
beamformer ``w_e2``; for fixed w, phi has a closed form. The two steps
alternate until the secrecy rate stops improving.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .channel import ChannelRealization, SystemParams
from .errors import DegenerateBeamError, NumericalError
from .linalg import generalized_principal_eigenvector
from .model import (AnPrecoder, build_an_precoder, build_quotient_pairs, coefficients_ab,
                    power_split, secrecy_rate, snr_primary)

__all__ = ['IterationTrace', 'Solution', 'PhiUpdate', 'PHI_FLOOR', 'w_snr_max',
           'feasibility_check', 'w_unconstrained_secrecy', 'combination_grid',
           'w_weighted_search', 'optimal_phi_ab', 'optimal_phi', 'min_feasible_phi',
           'alternating_optimize', 'iterations_to_tolerance']

PHI_FLOOR = 1e-6
PHI_INIT = 0.5
DEFAULT_MAX_ITERS = 50
# slack when re-checking QoS on a candidate computed by another formula
QOS_RTOL = 1e-12

CONVERGED = 'converged'
INFEASIBLE = 'infeasible'
MAX_ITERATIONS = 'max-iterations'


@dataclass(frozen=True)
class IterationTrace:
    iteration: int
    phi: float
    lambda1: float
    r_sec: float
    gamma_s: float
    feasible: bool


@dataclass
class Solution:
    w_opt: np.ndarray | None
    phi_opt: float
    r_sec: float
    status: str
    trace: list[IterationTrace] = field(default_factory=list)
    lambda_opt: float = math.nan
    gamma_s: float = math.nan

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE

    @property
    def iterations(self) -> int:
        return len(self.trace)


class PhiUpdate(NamedTuple):
    phi: float
    positive_rate: bool   # False: no phi in (0, 1) gives a positive secrecy rate


def w_snr_max(phi: float, ch: ChannelRealization, an: AnPrecoder,
              params: SystemParams) -> tuple[np.ndarray, float]:
    """Beamformer maximizing the primary SNR at `phi`, and that maximum SNR."""
    pair, _ = build_quotient_pairs(phi, ch, an, params)
    w, lam = generalized_principal_eigenvector(pair)
    return w, float(pair.quotient(w))


def feasibility_check(gamma_s_max: float, params: SystemParams) -> bool:
    return bool(gamma_s_max >= params.gamma_s_th)


def w_unconstrained_secrecy(phi: float, ch: ChannelRealization, an: AnPrecoder,
                            params: SystemParams) -> np.ndarray:
    """Beamformer maximizing the secrecy rate at `phi` with the QoS constraint dropped."""
    _, pair = build_quotient_pairs(phi, ch, an, params)
    w, _ = generalized_principal_eigenvector(pair)
    return w


def combination_grid(w_e1: np.ndarray, w_e2: np.ndarray, d: int):
    """
    Normalized blends ``lam w_e1 + (1 - lam) w_e2`` for lam in {0, 1/d, ..., 1}.

    Grid points whose blend nearly cancels are dropped. Returns the kept
    weights and the beamformers stacked row-wise.
    """
    lambdas = np.arange(d + 1) / d
    blends = lambdas[:, None] * w_e1[None, :] + (1.0 - lambdas)[:, None] * w_e2[None, :]
    norms = np.linalg.norm(blends, axis=1)
    keep = norms >= 1e-12
    blends = blends[keep] / norms[keep, None]
    # endpoints are the eigenvectors themselves, not their renormalized copies
    lambdas = lambdas[keep]
    if lambdas[0] == 0.0:
        blends[0] = w_e2
    if lambdas[-1] == 1.0:
        blends[-1] = w_e1
    return lambdas, blends


def align_phase(w_ref: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Rotate `w` by a global phase so that ``w_ref^H w`` is real and non-negative."""
    inner = np.vdot(w_ref, w)
    if abs(inner) == 0.0:
        return w
    return w * (np.conj(inner) / abs(inner))


def w_weighted_search(phi: float, ch: ChannelRealization, an: AnPrecoder,
                      params: SystemParams, w_e1: np.ndarray | None = None,
                      w_e2: np.ndarray | None = None):
    """
    Best QoS-feasible blend of ``w_e1`` and ``w_e2`` at power factor `phi`.

    The candidates are ranked by the unclamped secrecy rate, so when every
    candidate has zero clamped rate the least negative one is still kept.
    Endpoints missing from the arguments are computed here.

    Returns
    -------
    w_best, lambda_best, r_best
        `r_best` is the clamped rate. Returns ``(None, nan, 0.0)`` when no
        candidate meets the QoS threshold.
    """
    if w_e1 is None:
        w_e1, _ = w_snr_max(phi, ch, an, params)
    if w_e2 is None:
        w_e2 = w_unconstrained_secrecy(phi, ch, an, params)
    w_e2 = align_phase(w_e1, w_e2)
    lambdas, cands = combination_grid(w_e1, w_e2, params.d)
    split = power_split(phi, params)
    gamma = snr_primary(cands, split, ch, params)
    rate = secrecy_rate(cands, split, ch, an, params, clamp=False)
    ok = gamma >= params.gamma_s_th * (1.0 - QOS_RTOL)
    if not np.any(ok):
        return None, math.nan, 0.0
    idx = np.flatnonzero(ok)[np.argmax(rate[ok])]
    return cands[idx], float(lambdas[idx]), max(float(rate[idx]), 0.0)


def optimal_phi_ab(a: float, b: float) -> PhiUpdate:
    """
    Maximizer of ``log2((1 + phi a) / (1 + phi b / (1 - phi)))`` over phi.

    Uses ``(a - b) / (a + sqrt(a b (a - b + 1)))``, the rationalized form of
    ``(a - sqrt(a b (a - b + 1))) / (a - a b)``; it stays finite at ``b = 1``
    and avoids cancellation. The result is clamped to
    ``[PHI_FLOOR, 1 - PHI_FLOOR]``.
    """
    if not a > 0.0:
        raise DegenerateBeamError('A = 0: beamformer is orthogonal to the BD channel')
    if b <= 0.0:
        # eavesdropper sees nothing, rate increases all the way to phi -> 1
        return PhiUpdate(1.0 - PHI_FLOOR, True)
    if abs(b - 1.0) < 1e-9:
        phi = (a - 1.0) / (2.0 * a)
    else:
        disc = a * b * (a - b + 1.0)
        phi = (a - b) / (a + math.sqrt(disc)) if disc >= 0.0 else PHI_FLOOR
    return PhiUpdate(min(max(phi, PHI_FLOOR), 1.0 - PHI_FLOOR), a > b)


def optimal_phi(w: np.ndarray, ch: ChannelRealization, an: AnPrecoder,
                params: SystemParams) -> PhiUpdate:
    a, b = coefficients_ab(w, ch, an, params)
    return optimal_phi_ab(a, b)


def min_feasible_phi(w: np.ndarray, ch: ChannelRealization, params: SystemParams) -> float | None:
    """
    Smallest phi with ``snr_primary(w, phi) >= threshold``, or None if no phi
    below 1 reaches it. The primary SNR is increasing in phi so the boundary
    solves a linear equation.
    """
    a = float(np.abs(np.vdot(ch.h1, w)) ** 2)
    b = params.alpha * abs(ch.g1) ** 2 * float(np.abs(np.vdot(ch.h2, w)) ** 2)
    th = params.gamma_s_th
    if a <= th * b:
        return None
    phi = th / (params.p_total * (a - th * b))
    return phi if phi < 1.0 else None


def _check_finite(*values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise NumericalError('non-finite value during optimization')


def alternating_optimize(ch: ChannelRealization, params: SystemParams,
                         an: AnPrecoder | None = None, *,
                         max_iters: int = DEFAULT_MAX_ITERS,
                         project_phi: bool = False,
                         phi_init: float = PHI_INIT) -> Solution:
    """
    Jointly optimize (w, phi) for the secrecy rate under the primary QoS constraint.

    Each iteration runs the w-step at the current phi (two eigenvector
    extractions and ``d + 1`` blend evaluations) and then the closed-form
    phi update. The loop stops once the secrecy rate improves by at most
    ``params.epsilon`` between two iterations, or after `max_iters`.

    With ``project_phi=True`` a phi update that would break the QoS
    constraint for the current w is raised to the constraint boundary.

    The best iterate is returned. If the w-step is infeasible at any
    iteration the status is ``'infeasible'`` and ``w_opt`` is None.
    """
    if an is None:
        an = build_an_precoder(ch)
    phi = phi_init
    trace: list[IterationTrace] = []
    best = None
    status = MAX_ITERATIONS
    for j in range(1, max_iters + 1):
        w_e1, gamma_max = w_snr_max(phi, ch, an, params)
        _check_finite(w_e1, gamma_max)
        if not feasibility_check(gamma_max, params):
            trace.append(IterationTrace(j, phi, math.nan, 0.0, gamma_max, False))
            return Solution(None, phi, 0.0, INFEASIBLE, trace)
        w_e2 = w_unconstrained_secrecy(phi, ch, an, params)
        w, lam, r = w_weighted_search(phi, ch, an, params, w_e1=w_e1, w_e2=w_e2)
        if w is None:
            # only reachable through rounding right at the threshold
            w, lam = w_e1, 1.0
            r = float(secrecy_rate(w, power_split(phi, params), ch, an, params))
        _check_finite(w, r)
        gamma = float(snr_primary(w, power_split(phi, params), ch, params))
        trace.append(IterationTrace(j, phi, lam, r, gamma, True))
        if best is None or r > best[3]:
            best = (w, phi, lam, r, gamma)

        if j >= 2 and trace[-1].r_sec - trace[-2].r_sec <= params.epsilon:
            status = CONVERGED
            break

        try:
            phi_next = optimal_phi(w, ch, an, params).phi
        except DegenerateBeamError:
            # w carries nothing towards the BD: no rate at any phi
            status = CONVERGED
            break
        if project_phi:
            floor = min_feasible_phi(w, ch, params)
            if floor is not None and phi_next < floor:
                phi_next = min(floor, 1.0 - PHI_FLOOR)
        _check_finite(phi_next)
        phi = phi_next

    w, phi_b, lam, r, gamma = best
    return Solution(w, phi_b, r, status, trace, lambda_opt=lam, gamma_s=gamma)


def iterations_to_tolerance(trace: list[IterationTrace], tol: float) -> int:
    """First iteration j >= 2 whose rate improvement over j - 1 is at most `tol`."""
    for k in range(1, len(trace)):
        if trace[k].r_sec - trace[k - 1].r_sec <= tol:
            return trace[k].iteration
    return len(trace)

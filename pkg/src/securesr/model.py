"""
Signal model: AN precoder, power split, link SNRs and the secrecy rate.

SNR evaluators accept a single beamformer of shape ``(nt,)`` or a stack of
beamformers of shape ``(n, nt)``; the latter returns an array of length n.
Noise powers are 1 and the eavesdropper is noiseless (worst case).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as sla

from .channel import ChannelRealization, SystemParams
from .errors import DimensionError, SingularCorrelationError
from .linalg import HermitianPair, null_space_basis

__all__ = ['AnPrecoder', 'PowerSplit', 'build_an_precoder', 'power_split', 'snr_primary',
           'snr_bd', 'snr_eve', 'secrecy_rate', 'coefficients_ab', 'rate_vs_phi',
           'build_quotient_pairs']

UNIT_NORM_TOL = 1e-10


@dataclass(frozen=True)
class AnPrecoder:
    """Null-space jamming precoder W and the eavesdropper correlation X = He W W^H He^H."""
    w_matrix: np.ndarray
    x_corr: np.ndarray

    @cached_property
    def eve_gain(self) -> float:
        """The scalar ``1^H X^-1 1`` that sets the eavesdropper's combining gain."""
        eigs = sla.eigvalsh(self.x_corr)
        if eigs[0] <= 1e-12 * abs(eigs[-1]):
            raise SingularCorrelationError(
                f'X is singular (rank {self.w_matrix.shape[1]} AN streams vs'
                f' {self.x_corr.shape[0]} eavesdropper antennas)')
        ones = np.ones(self.x_corr.shape[0])
        sol = sla.cho_solve(sla.cho_factor(self.x_corr), ones)
        return float(np.real(ones @ sol))


@dataclass(frozen=True)
class PowerSplit:
    phi: float
    p: float   # information power
    q: float   # power per AN stream


def build_an_precoder(ch: ChannelRealization) -> AnPrecoder:
    """Orthonormal AN precoder with nt - 2 columns in the null space of h1 and h2."""
    nt = ch.nt
    if nt <= 2:
        raise DimensionError(f'AN precoding needs nt > 2, got {nt}')
    w_mat = null_space_basis([ch.h1, ch.h2], nt - 2)
    hw = ch.he @ w_mat
    x = hw @ hw.conj().T
    x = 0.5 * (x + x.conj().T)
    return AnPrecoder(w_matrix=w_mat, x_corr=x)


def power_split(phi: float, params: SystemParams) -> PowerSplit:
    if not 0.0 < phi < 1.0:
        raise ValueError(f'power factor must lie in (0, 1), got {phi}')
    total = params.p_total
    return PowerSplit(phi=phi, p=phi * total, q=(1.0 - phi) * total / (params.nt - 2))


def _gains(w, h):
    w = np.asarray(w)
    norms = np.linalg.norm(w, axis=-1)
    if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
        raise ValueError('beamformer must have unit norm')
    return np.abs(w @ h.conj()) ** 2


def snr_primary(w, split: PowerSplit, ch: ChannelRealization, params: SystemParams):
    """SNR at the PR, with the backscattered signal treated as interference."""
    a = _gains(w, ch.h1)
    x = _gains(w, ch.h2)
    return split.p * a / (split.p * params.alpha * abs(ch.g1) ** 2 * x + 1.0)


def snr_bd(w, split: PowerSplit, ch: ChannelRealization, params: SystemParams):
    """SNR of the BD symbol at the PR after the primary symbol is cancelled."""
    return split.p * params.alpha * abs(ch.g1) ** 2 * _gains(w, ch.h2)


def snr_eve(w, split: PowerSplit, ch: ChannelRealization, an: AnPrecoder,
            params: SystemParams):
    """SNR of the BD symbol at a noiseless eavesdropper jammed by the AN."""
    x = _gains(w, ch.h2)
    return split.p * params.alpha * abs(ch.g2) ** 2 / split.q * an.eve_gain * x


def secrecy_rate(w, split: PowerSplit, ch: ChannelRealization, an: AnPrecoder,
                 params: SystemParams, clamp: bool = True):
    """Secrecy rate in bits/s/Hz; ``clamp=False`` keeps negative differences."""
    gc = snr_bd(w, split, ch, params)
    ge = snr_eve(w, split, ch, an, params)
    rate = np.log2((1.0 + gc) / (1.0 + ge))
    return np.maximum(rate, 0.0) if clamp else rate


def coefficients_ab(w, ch: ChannelRealization, an: AnPrecoder,
                    params: SystemParams) -> tuple[float, float]:
    """
    Coefficients that make the secrecy rate a scalar function of phi.

    With ``A = P alpha |g1|^2 |h2^H w|^2`` and
    ``B = (nt - 2) alpha |g2|^2 (1^H X^-1 1) |h2^H w|^2`` the rate reads
    ``log2((1 + phi A) / (1 + phi B / (1 - phi)))``, see :func:`rate_vs_phi`.
    """
    x = float(_gains(w, ch.h2))
    a = params.p_total * params.alpha * abs(ch.g1) ** 2 * x
    b = (params.nt - 2) * params.alpha * abs(ch.g2) ** 2 * an.eve_gain * x
    return a, b


def rate_vs_phi(phi, a: float, b: float, clamp: bool = True):
    phi = np.asarray(phi, dtype=float)
    rate = np.log2((1.0 + phi * a) / (1.0 + phi * b / (1.0 - phi)))
    return np.maximum(rate, 0.0) if clamp else rate


def build_quotient_pairs(phi: float, ch: ChannelRealization, an: AnPrecoder,
                         params: SystemParams) -> tuple[HermitianPair, HermitianPair]:
    """
    Matrix pairs whose Rayleigh quotients give the primary SNR and the
    secrecy-rate argument at power factor `phi`.

    Returns ``(G1, G2)`` and ``(G3, G4)`` with ``snr_primary = w^H G1 w / w^H G2 w``
    and ``secrecy_rate = [log2(w^H G3 w / w^H G4 w)]^+``.
    """
    split = power_split(phi, params)
    nt = ch.nt
    eye = np.eye(nt, dtype=complex)
    h1h1 = np.outer(ch.h1, ch.h1.conj())
    h2h2 = np.outer(ch.h2, ch.h2.conj())
    g1sq, g2sq = abs(ch.g1) ** 2, abs(ch.g2) ** 2
    g_1 = split.p * h1h1
    g_2 = params.alpha * split.p * g1sq * h2h2 + eye
    g_3 = eye + split.p * params.alpha * g1sq * h2h2
    if g2sq == 0.0 or params.alpha == 0.0:
        g_4 = eye.copy()
    else:
        g_4 = eye + split.p * params.alpha * g2sq / split.q * an.eve_gain * h2h2
    return HermitianPair(g_1, g_2), HermitianPair(g_3, g_4)

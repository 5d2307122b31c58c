"""
Brute-force oracles for the closed-form phi and the eigenvector beamformers.

These searches share no code path with the optimizer beyond the SNR
evaluators, and are meant for small instances.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, SystemParams
from .model import (AnPrecoder, coefficients_ab, power_split, rate_vs_phi, secrecy_rate,
                    snr_primary)
from .optimizer import w_snr_max, w_unconstrained_secrecy

__all__ = ['OracleConfig', 'phi_grid', 'grid_search_phi_ab', 'grid_search_phi',
           'random_unit_vectors', 'span_grid', 'sample_search_w', 'joint_search']


@dataclass(frozen=True)
class OracleConfig:
    phi_grid_step: float = 1e-5
    sphere_samples: int = 10_000
    subspace_grid: int = 200
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.phi_grid_step <= 0.01:
            raise ValueError('phi_grid_step must lie in (0, 0.01]')
        if self.sphere_samples < 1000:
            raise ValueError('sphere_samples must be at least 1000')
        if self.subspace_grid < 0:
            raise ValueError('subspace_grid must be non-negative')


def phi_grid(step: float) -> np.ndarray:
    n = int(round(1.0 / step))
    return np.arange(1, n) * step


def grid_search_phi_ab(a: float, b: float, step: float = 1e-5,
                       clamp: bool = True) -> tuple[float, float]:
    """Exhaustive argmax of the phi-only rate over {step, 2 step, ..., 1 - step}."""
    grid = phi_grid(step)
    rates = rate_vs_phi(grid, a, b, clamp=clamp)
    k = int(np.argmax(rates))
    return float(grid[k]), float(rates[k])


def grid_search_phi(w, ch: ChannelRealization, an: AnPrecoder, params: SystemParams,
                    cfg: OracleConfig = OracleConfig()) -> tuple[float, float]:
    a, b = coefficients_ab(w, ch, an, params)
    return grid_search_phi_ab(a, b, cfg.phi_grid_step)


def random_unit_vectors(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """`n` rows drawn uniformly from the complex unit sphere in C^dim."""
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def span_grid(u: np.ndarray, v: np.ndarray, n: int) -> np.ndarray:
    """
    An ``n x n`` grid of unit vectors ``cos(t) e1 + sin(t) e^{ip} e2`` over an
    orthonormal basis (e1, e2) of span{u, v}; global phase is irrelevant to
    every objective, so this covers the whole span.
    """
    e1 = u / np.linalg.norm(u)
    rest = v - np.vdot(e1, v) * e1
    if np.linalg.norm(rest) < 1e-12 or n == 0:
        return e1[None, :]
    e2 = rest / np.linalg.norm(rest)
    theta = np.linspace(0.0, np.pi / 2, n)
    psi = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    t, p = np.meshgrid(theta, psi, indexing='ij')
    coef2 = (np.sin(t) * np.exp(1j * p)).ravel()
    return np.cos(t).ravel()[:, None] * e1[None, :] + coef2[:, None] * e2[None, :]


def sample_search_w(phi: float, ch: ChannelRealization, an: AnPrecoder,
                    params: SystemParams, cfg: OracleConfig = OracleConfig(),
                    constrained: bool = True, samples: np.ndarray | None = None):
    """
    Best secrecy rate over random unit vectors plus a grid on span{w_e1, w_e2}.

    `samples`, when given, replaces both the random draw and the span grid.
    Returns ``(w_star, r_star)``; ``(None, 0.0)`` if nothing meets the QoS
    threshold in constrained mode.
    """
    if samples is None:
        rng = np.random.default_rng(cfg.seed)
        cands = random_unit_vectors(rng, cfg.sphere_samples, ch.nt)
        if cfg.subspace_grid:
            w_e1, _ = w_snr_max(phi, ch, an, params)
            w_e2 = w_unconstrained_secrecy(phi, ch, an, params)
            cands = np.vstack([cands, span_grid(w_e1, w_e2, cfg.subspace_grid)])
    else:
        cands = np.atleast_2d(samples)
    split = power_split(phi, params)
    rates = secrecy_rate(cands, split, ch, an, params)
    if constrained:
        ok = snr_primary(cands, split, ch, params) >= params.gamma_s_th
        if not np.any(ok):
            return None, 0.0
        rates = np.where(ok, rates, -np.inf)
    k = int(np.argmax(rates))
    return cands[k], float(rates[k])


def joint_search(ch: ChannelRealization, an: AnPrecoder, params: SystemParams,
                 phi_step: float = 1e-3, grid: int = 200, chunk: int = 64):
    """
    Joint brute force over a phi grid and a grid of unit vectors in
    span{w_e1, w_e2}.

    The span is taken at phi = 1/2. Both endpoints lie in span{h1, h2} for
    every phi, so the subspace does not depend on where it is computed.

    Returns ``(phi_star, w_star, r_star)``; ``r_star`` is 0 and ``w_star``
    None when no grid point meets the QoS threshold.
    """
    w_e1, _ = w_snr_max(0.5, ch, an, params)
    w_e2 = w_unconstrained_secrecy(0.5, ch, an, params)
    cands = span_grid(w_e1, w_e2, grid)
    # every objective depends on w only through these two gains
    a = np.abs(cands @ ch.h1.conj()) ** 2
    x = np.abs(cands @ ch.h2.conj()) ** 2
    total = params.p_total
    b1 = params.alpha * abs(ch.g1) ** 2
    be = params.alpha * abs(ch.g2) ** 2 * an.eve_gain * (params.nt - 2)
    th = params.gamma_s_th
    best = (float('nan'), None, 0.0)
    phis = phi_grid(phi_step)
    for start in range(0, phis.size, chunk):
        ph = phis[start:start + chunk, None]
        p = ph * total
        gamma = p * a / (p * b1 * x + 1.0)
        rate = np.log2((1.0 + p * b1 * x) / (1.0 + ph / (1.0 - ph) * be * x))
        rate = np.where(gamma >= th, np.maximum(rate, 0.0), -np.inf)
        i, k = np.unravel_index(np.argmax(rate), rate.shape)
        if rate[i, k] > best[2] or (best[1] is None and np.isfinite(rate[i, k])):
            best = (float(ph[i, 0]), cands[k], float(rate[i, k]))
    return best

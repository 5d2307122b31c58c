"""
Scenario parameters and seeded Rayleigh-fading channel draws.

Every draw comes from its own substream keyed by ``(seed, [point,] trial)``,
so trial ``k`` never depends on how many trials were drawn before it.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DegenerateChannelError

__all__ = ['SystemParams', 'ChannelRealization', 'sample_channels', 'dbm_to_linear',
           'db_to_linear', 'complex_gaussian', 'save_realization', 'load_realization']


def dbm_to_linear(x_dbm: float) -> float:
    """Convert dBm to linear power, with unit noise power taken as 1 mW."""
    return 10.0 ** (x_dbm / 10.0)


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """Scenario scalars. Defaults are the reference operating point."""
    nt: int = 10
    ne: int = 4
    p_dbm: float = 48.0
    gamma_s_th_db: float = 3.0
    alpha: float = 0.3
    sigma_s2: float = 1.0
    sigma_c2: float = 1.0
    sigma_e2: float = 1.0
    d: int = 100
    epsilon: float = 1e-10
    seed: int = 5

    def __post_init__(self):
        if int(self.nt) != self.nt or self.nt <= 2:
            raise ConfigurationError(f'nt must be an integer > 2, got {self.nt}')
        if int(self.ne) != self.ne or self.ne < 1:
            raise ConfigurationError(f'ne must be an integer >= 1, got {self.ne}')
        if self.nt <= self.ne:
            raise ConfigurationError(f'need nt > ne, got nt={self.nt}, ne={self.ne}')
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigurationError(f'alpha must lie in [0, 1], got {self.alpha}')
        if not self.epsilon > 0:
            raise ConfigurationError(f'epsilon must be positive, got {self.epsilon}')
        if int(self.d) != self.d or self.d < 1:
            raise ConfigurationError(f'd must be an integer >= 1, got {self.d}')
        for name in ('sigma_s2', 'sigma_c2', 'sigma_e2'):
            if getattr(self, name) < 0:
                raise ConfigurationError(f'{name} must be non-negative')

    @property
    def p_total(self) -> float:
        """Total transmit power P on the linear scale."""
        return dbm_to_linear(self.p_dbm)

    @property
    def gamma_s_th(self) -> float:
        """Primary QoS threshold on the linear scale."""
        return db_to_linear(self.gamma_s_th_db)

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of every fading coefficient in the network."""
    h1: np.ndarray   # PT -> PR
    h2: np.ndarray   # PT -> BD
    he: np.ndarray   # PT -> ED, shape (ne, nt)
    g1: complex      # BD -> PR
    g2: complex      # BD -> ED

    def __post_init__(self):
        for name in ('h1', 'h2', 'he'):
            arr = getattr(self, name)
            if not np.all(np.isfinite(arr)):
                raise DegenerateChannelError(f'{name} has non-finite entries')
        if not (np.isfinite(self.g1) and np.isfinite(self.g2)):
            raise DegenerateChannelError('g1/g2 must be finite')
        if not np.any(self.h1) or not np.any(self.h2):
            raise DegenerateChannelError('h1 and h2 must be nonzero (zero variance?)')
        if self.h1.shape != self.h2.shape or self.he.shape[1] != self.h1.shape[0]:
            raise DegenerateChannelError('inconsistent channel dimensions')

    @property
    def nt(self) -> int:
        return self.h1.shape[0]

    @property
    def ne(self) -> int:
        return self.he.shape[0]

    def to_dict(self) -> dict:
        def pairs(a):
            a = np.asarray(a)
            return np.stack([a.real, a.imag], axis=-1).tolist()
        return {'h1': pairs(self.h1), 'h2': pairs(self.h2), 'he': pairs(self.he),
                'g1': pairs(self.g1), 'g2': pairs(self.g2)}

    @classmethod
    def from_dict(cls, data: dict) -> 'ChannelRealization':
        def cplx(x):
            a = np.asarray(x, dtype=float)
            return a[..., 0] + 1j * a[..., 1]
        return cls(h1=cplx(data['h1']), h2=cplx(data['h2']), he=cplx(data['he']),
                   g1=complex(cplx(data['g1'])), g2=complex(cplx(data['g2'])))


def complex_gaussian(rng: np.random.Generator, shape, variance: float) -> np.ndarray:
    """CN(0, variance) entries, drawn as sqrt(variance) * (x + iy) / sqrt(2)."""
    x = rng.standard_normal(shape)
    y = rng.standard_normal(shape)
    return math.sqrt(variance) * (x + 1j * y) / math.sqrt(2.0)


def sample_channels(params: SystemParams, trial_index: int,
                    point_index: int | None = None) -> ChannelRealization:
    """
    Draw the channels of one trial.

    The stream is derived from ``(params.seed, trial_index)``, or from
    ``(params.seed, point_index, trial_index)`` when a sweep point is given.
    """
    key = [params.seed, trial_index] if point_index is None \
        else [params.seed, point_index, trial_index]
    rng = np.random.default_rng(np.random.SeedSequence(key))
    nt, ne = params.nt, params.ne
    h1 = complex_gaussian(rng, nt, params.sigma_s2)
    h2 = complex_gaussian(rng, nt, params.sigma_c2)
    he = complex_gaussian(rng, (ne, nt), params.sigma_e2)
    g1, g2 = complex_gaussian(rng, 2, 1.0)
    return ChannelRealization(h1=h1, h2=h2, he=he, g1=complex(g1), g2=complex(g2))


def save_realization(ch: ChannelRealization, path: str | Path,
                     params: SystemParams | None = None) -> None:
    """Write a realization as JSON, complex entries stored as [re, im] pairs."""
    doc = {'channels': ch.to_dict()}
    if params is not None:
        doc['params'] = asdict(params)
    Path(path).write_text(json.dumps(doc, indent=1))


def load_realization(path: str | Path) -> ChannelRealization:
    doc = json.loads(Path(path).read_text())
    return ChannelRealization.from_dict(doc.get('channels', doc))

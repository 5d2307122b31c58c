"""Secure backscatter transmission in multi-antenna symbiotic radio: joint
beamforming and artificial-noise power allocation."""
from .channel import ChannelRealization, SystemParams, sample_channels
from .model import build_an_precoder
from .optimizer import Solution, alternating_optimize

__version__ = '0.1.0'
__all__ = ['ChannelRealization', 'SystemParams', 'sample_channels', 'build_an_precoder',
           'Solution', 'alternating_optimize']

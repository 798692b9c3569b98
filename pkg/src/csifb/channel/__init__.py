from csifb.channel.arrays import (
    AntennaArray,
    CorrelationMatrix,
    build_correlation,
)
from csifb.channel.fading import (
    ChannelGenerator,
    ChannelRealization,
    DelayProfile,
    apply_spatial_correlation,
    sample_time_domain,
    stack_subcarriers,
    to_frequency_domain,
    unstack_subcarriers,
)
from csifb.channel.structure import restructure, unrestructure

__all__ = [
    "AntennaArray",
    "ChannelGenerator",
    "ChannelRealization",
    "CorrelationMatrix",
    "DelayProfile",
    "apply_spatial_correlation",
    "build_correlation",
    "restructure",
    "sample_time_domain",
    "stack_subcarriers",
    "to_frequency_domain",
    "unrestructure",
    "unstack_subcarriers",
]

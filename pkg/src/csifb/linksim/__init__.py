from csifb.linksim.config import LinkConfig
from csifb.linksim.drop import UserDrop, drop_users
from csifb.linksim.modem import (
    BitTally,
    awgn_16qam,
    beamforming_ber,
    demodulate,
    modulate,
    transmit_16qam,
)
from csifb.linksim.precoding import (
    PrecodedFrame,
    aggregate_channels,
    measure_sinr,
    zf_precoder,
)
from csifb.linksim.runner import (
    LinkContext,
    RowSpec,
    RowTally,
    run_drop,
    run_drops,
)

__all__ = [
    "BitTally",
    "LinkConfig",
    "LinkContext",
    "PrecodedFrame",
    "RowSpec",
    "RowTally",
    "UserDrop",
    "aggregate_channels",
    "awgn_16qam",
    "beamforming_ber",
    "demodulate",
    "drop_users",
    "measure_sinr",
    "modulate",
    "run_drop",
    "run_drops",
    "transmit_16qam",
    "zf_precoder",
]

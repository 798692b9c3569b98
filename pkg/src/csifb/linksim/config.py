import math
from dataclasses import dataclass, field

from csifb.config import settings
from csifb.errors import DimensionError
from csifb.utils.helpers import dbm_to_mw

MODULATIONS = ("16qam",)


def _default_min_distance() -> float:
    return settings.MIN_DISTANCE_KM


@dataclass(frozen=True)
class LinkConfig:
    """Downlink radio parameters.

    Units: Hz, dBm, dBm/Hz, km, dB. Path gain in dB is
    pathloss_intercept_db - 10 * pathloss_exponent * log10(l / km).
    """

    bandwidth_hz: float = 10e6
    tx_power_dbm: float = 43.0
    noise_psd_dbm_hz: float = -174.0
    coverage_km: float = 1.0
    pathloss_intercept_db: float = -123.0
    pathloss_exponent: float = 3.76
    users: int = 4
    modulation: str = "16qam"
    min_distance_km: float = field(default_factory=_default_min_distance)

    def __post_init__(self):
        if self.bandwidth_hz <= 0:
            raise DimensionError("bandwidth must be positive")
        if self.coverage_km <= 0:
            raise DimensionError("coverage side must be positive")
        if int(self.users) < 1:
            raise DimensionError(f"need at least one user, got {self.users}")
        if self.modulation not in MODULATIONS:
            raise DimensionError(
                f"unsupported modulation '{self.modulation}'"
            )
        if not 0 < self.min_distance_km < self.coverage_km / 2:
            raise DimensionError(
                f"min distance {self.min_distance_km} km must lie in "
                f"(0, coverage/2)"
            )

    @property
    def noise_power_dbm(self) -> float:
        return self.noise_psd_dbm_hz + 10.0 * math.log10(self.bandwidth_hz)

    def noise_power_mw(self, n_f: int) -> float:
        """Noise power on one subcarrier."""
        return dbm_to_mw(self.noise_power_dbm) / n_f

    def power_per_subcarrier_mw(self, n_f: int) -> float:
        return dbm_to_mw(self.tx_power_dbm) / n_f

    def pathloss_db(self, distance_km: float) -> float:
        if distance_km <= 0:
            raise DimensionError(f"distance must be positive: {distance_km}")
        return self.pathloss_intercept_db - 10.0 * self.pathloss_exponent * (
            math.log10(distance_km)
        )

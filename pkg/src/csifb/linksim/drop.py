from dataclasses import dataclass

import numpy as np

from csifb.linksim.config import LinkConfig
from csifb.utils.helpers import db_to_linear


@dataclass(frozen=True, eq=False)
class UserDrop:
    """User positions in km (Tx at the origin) and large-scale powers."""

    positions: np.ndarray
    distances: np.ndarray
    pathloss_db: np.ndarray
    sigma_h2: np.ndarray

    @property
    def users(self) -> int:
        return self.positions.shape[0]


def drop_users(config: LinkConfig, rng: np.random.Generator) -> UserDrop:
    """Uniform drop over the coverage square, closer than l_min redrawn."""
    half = config.coverage_km / 2.0
    positions = np.empty((config.users, 2))
    for user in range(config.users):
        while True:
            point = rng.uniform(-half, half, size=2)
            if np.hypot(point[0], point[1]) >= config.min_distance_km:
                break
        positions[user] = point
    distances = np.hypot(positions[:, 0], positions[:, 1])
    loss = np.array([config.pathloss_db(d) for d in distances])
    sigma_h2 = np.array([db_to_linear(value) for value in loss])
    return UserDrop(
        positions=positions,
        distances=distances,
        pathloss_db=loss,
        sigma_h2=sigma_h2,
    )

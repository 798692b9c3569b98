"""The feedback schemes and their (representation, structure, S) recipe.

  FCF: identity representation with spline recovery
  TCF: unitary IDFT representation
  SCF: KLT representation (needs a covariance model)

Suffix f/v is fixed/variable S; 1/2 is the ch/ch2 channel structure.
"""

from dataclasses import dataclass

from csifb.codec.selection import (
    FCF_EQUIDISTANT,
    FULL,
    INDEX_EQUIDISTANT,
    PCA_FIXED,
    TCF_FIXED_BOUNDARY,
    VARIABLE_MAGNITUDE,
)
from csifb.errors import ConfigError

FCF = "fcf"
TCF = "tcf"
SCF = "scf"


@dataclass(frozen=True)
class SchemeSpec:
    name: str
    family: str
    structure: str
    policy: str
    code: int

    @property
    def needs_model(self) -> bool:
        return self.family == SCF


SCHEMES: dict[str, SchemeSpec] = {
    spec.name: spec
    for spec in (
        SchemeSpec("FCF-f1", FCF, "ch", INDEX_EQUIDISTANT, 0),
        SchemeSpec("FCF-f2", FCF, "ch2", FCF_EQUIDISTANT, 1),
        SchemeSpec("TCF-f1", TCF, "ch", TCF_FIXED_BOUNDARY, 2),
        SchemeSpec("TCF-f2", TCF, "ch2", TCF_FIXED_BOUNDARY, 3),
        SchemeSpec("TCF-v1", TCF, "ch", VARIABLE_MAGNITUDE, 4),
        SchemeSpec("TCF-v2", TCF, "ch2", VARIABLE_MAGNITUDE, 5),
        SchemeSpec("SCF-f", SCF, "ch", PCA_FIXED, 6),
        SchemeSpec("SCF-v", SCF, "ch", VARIABLE_MAGNITUDE, 7),
        SchemeSpec("FULL", FCF, "ch", FULL, 8),
    )
}
SCHEMES_BY_CODE = {spec.code: spec for spec in SCHEMES.values()}


def get_scheme(scheme: "str | SchemeSpec") -> SchemeSpec:
    if isinstance(scheme, SchemeSpec):
        return scheme
    try:
        return SCHEMES[scheme]
    except KeyError:
        raise ConfigError(
            f"unknown scheme '{scheme}', expected one of "
            f"{', '.join(SCHEMES)}"
        ) from None

"""Built-in, exactly reproducible model definitions.

`bipod-table1` is the planar pin-pin benchmark bipod; the three hexapods
share its link properties and payload but differ in geometry. Prefixing any
name with `massless-` zeroes the strut masses and inertias.
"""

from dataclasses import dataclass

import numpy as np

from .bipod2d import StrutProperties
from .model3d import GeometryParams, PayloadProperties, build_hexapod

# benchmark strut: all values are exact decimal literals from the reference tables
TABLE1_STRUT = StrutProperties(
    k=5000.0,   # N/m
    c=7.2,      # N*s/m
    L=0.3,      # m
    eta_t=0.7,
    m_t=0.6,    # kg
    I_t=2.5e-3,  # kg*m^2
    eta_b=0.2,
    m_b=0.4,    # kg
    I_b=1.9e-3,  # kg*m^2
)

TABLE1_PAYLOAD_MASS = 25.0  # kg

# hexapod payload: CM on the symmetry axis, 30 mm below the moving platform,
# principal axes aligned with the world frame at rest
HEXAPOD_PAYLOAD = PayloadProperties(
    m_p=25.0,
    principal_inertia=(0.7608, 0.7608, 0.48),
)

_CM_BELOW_PLATFORM = 0.030  # m

# strut length is not part of the hexapod geometry tables; the links are the
# benchmark struts, so L = 0.3 m applies to all three configurations
HEXAPOD_GEOMETRY = {
    "hexapod-1-cubic": GeometryParams(
        r_t=0.245, beta=np.pi / 2, gamma=np.arctan(np.sqrt(2.0)), phi_t=0.0,
        L=TABLE1_STRUT.L, cm_below_platform=_CM_BELOW_PLATFORM,
    ),
    "hexapod-2-conic": GeometryParams(
        r_t=0.245, beta=np.pi / 2, gamma=np.pi / 2, phi_t=0.0,
        L=TABLE1_STRUT.L, cm_below_platform=_CM_BELOW_PLATFORM,
    ),
    "hexapod-3-general": GeometryParams(
        r_t=0.245, beta=2.0 * np.pi / 5.0, gamma=3.0 * np.pi / 5.0, phi_t=np.pi / 6.0,
        L=TABLE1_STRUT.L, cm_below_platform=_CM_BELOW_PLATFORM,
    ),
}


@dataclass(frozen=True)
class BipodPreset:
    """Inputs of the closed-form planar bipod analysis."""

    strut: StrutProperties
    m_p: float


def preset_names():
    names = ["bipod-table1", *HEXAPOD_GEOMETRY]
    return names + [f"massless-{n}" for n in names]


class UnknownPresetError(KeyError):
    def __init__(self, name):
        super().__init__(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}"
        )


def load_preset(name, formulation="link"):
    """Build a preset by name.

    Returns a BipodPreset for the planar benchmark and a fully constructed
    ManipulatorModel for the hexapods.
    """
    base = name
    strut = TABLE1_STRUT
    if name.startswith("massless-"):
        base = name[len("massless-"):]
        strut = strut.massless()
    if base == "bipod-table1":
        return BipodPreset(strut=strut, m_p=TABLE1_PAYLOAD_MASS)
    if base in HEXAPOD_GEOMETRY:
        return build_hexapod(HEXAPOD_GEOMETRY[base], strut, HEXAPOD_PAYLOAD,
                             formulation=formulation)
    raise UnknownPresetError(name)

"""Closed-form planar analysis of a perpendicular-strut bipod on pin-pin joints.

Each strut is a spring/damper in series between two rigid parts: the top part
(mass m_t, inertia I_t) rides with the payload-side pin, the bottom part
(m_b, I_b) with the base joint. High-frequency force transmission is governed
by a single dimensionless coefficient: the shear transfer function levels off
at `lam` while the axial one keeps decaying.

Frequencies are in Hz at the API boundary and converted to rad/s internally.
"""

import dataclasses
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StrutProperties:
    """Per-link stiffness/damping/geometry and the two-part mass split.

    eta_t and eta_b are the top/bottom part centre-of-mass positions as
    fractions of the length L, measured from each part's base attachment.
    """

    k: float          # N/m
    c: float          # N*s/m
    L: float          # m
    m_t: float = 0.0  # kg
    m_b: float = 0.0  # kg
    eta_t: float = 0.0
    eta_b: float = 0.0
    I_t: float = 0.0  # kg*m^2
    I_b: float = 0.0  # kg*m^2

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"stiffness k must be positive, got {self.k}")
        if not self.L > 0:
            raise ValueError(f"length L must be positive, got {self.L}")
        if self.c < 0:
            raise ValueError(f"damping c must be non-negative, got {self.c}")
        for name in ("m_t", "m_b", "I_t", "I_b"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        for name in ("eta_t", "eta_b"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")

    @property
    def m_s(self):
        """Total strut mass."""
        return self.m_t + self.m_b

    def massless(self):
        """Same strut with all masses and inertias zeroed."""
        return dataclasses.replace(self, m_t=0.0, m_b=0.0, I_t=0.0, I_b=0.0)

    def undamped(self):
        """Same strut with c = 0."""
        return dataclasses.replace(self, c=0.0)


@dataclass(frozen=True)
class BipodCoefficients:
    """Derived dynamic coefficients of the bipod + payload system."""

    m_dyn: float  # kg, effective translating mass
    I_s: float    # kg*m^2, strut rotational inertia about its base joint
    lam: float    # dimensionless high-frequency shear plateau level


def bipod_coefficients(strut: StrutProperties, m_p: float) -> BipodCoefficients:
    """Assemble m_dyn, I_s and lam from strut properties and payload mass m_p.

    lam vanishes exactly for massless struts.
    """
    if not m_p > 0:
        raise ValueError(f"payload mass must be positive, got {m_p}")
    m_dyn = m_p + strut.m_t + strut.eta_t * strut.m_t + strut.eta_b * strut.m_b
    I_s = strut.I_t + strut.I_b + (strut.m_t * strut.eta_t**2 + strut.m_b * strut.eta_b**2) * strut.L**2
    lam = m_dyn * strut.L**2 / (I_s + (m_p + strut.m_t) * strut.L**2) - 1.0
    return BipodCoefficients(m_dyn=m_dyn, I_s=I_s, lam=lam)


def _denominator(coeffs, strut, s):
    return coeffs.m_dyn * s * s + (coeffs.lam + 1.0) * (strut.c * s + strut.k)


def tf_axial(coeffs: BipodCoefficients, strut: StrutProperties, f: float) -> complex:
    """Axial base reaction per unit input force at frequency f (Hz)."""
    s = 2j * np.pi * f
    return -(coeffs.lam + 1.0) * (strut.c * s + strut.k) / _denominator(coeffs, strut, s)


def tf_shear(coeffs: BipodCoefficients, strut: StrutProperties, f: float) -> complex:
    """Shear base reaction per unit input force at frequency f (Hz).

    Shares the axial TF's pole pair but carries an extra zero at the origin,
    so it rises at low frequency and levels off at lam as f -> inf.
    """
    s = 2j * np.pi * f
    return coeffs.lam * coeffs.m_dyn * s * s / _denominator(coeffs, strut, s)


def tf_base_joints(coeffs, strut, f, alpha):
    """Complex reaction TF vectors at the two base joints for input angle alpha.

    Components are along the two strut axes (x1, x2). Returns (tf_b1, tf_b2).
    """
    ax = tf_axial(coeffs, strut, f)
    sh = tf_shear(coeffs, strut, f)
    ca, sa = np.cos(alpha), np.sin(alpha)
    return np.array([ax * ca, sh * sa]), np.array([sh * ca, ax * sa])


def total_force_magnitude(v) -> float:
    """Peak of |Re(v * e^{jt})| over phase t for a complex 2-vector v.

    This is the semi-major axis of the ellipse traced by the rotating vector;
    closed form sqrt((|v|^2 + |v1^2 + v2^2|) / 2).
    """
    v = np.asarray(v, dtype=complex)
    return float(np.sqrt((np.vdot(v, v).real + abs(np.sum(v * v))) / 2.0))


def massless_equivalent(strut: StrutProperties, m_p: float):
    """Equivalent 1-DOF stiffness/damping of the massless perpendicular bipod.

    With the two struts orthogonal and at 45 deg to ground, the projected
    stiffness is direction-independent: 2 k cos^2(45 deg) = k, same for c.
    """
    return strut.k, strut.c


def tf_massless_ideal(strut: StrutProperties, m_p: float, f: float) -> complex:
    """Transmitted-force TF of the equivalent 1-DOF oscillator (massless struts)."""
    k_eq, c_eq = massless_equivalent(strut, m_p)
    s = 2j * np.pi * f
    return (c_eq * s + k_eq) / (m_p * s * s + c_eq * s + k_eq)

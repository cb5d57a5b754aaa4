"""Static/kinematic determinacy counts: 2D Maxwell rule and 3D mobility.

Both operations are exact integer arithmetic on user-supplied counts. A
non-negative Maxwell count is necessary but not sufficient for determinacy;
no attempt is made to detect the residual mechanism cases.
"""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Maxwell2DCounts:
    joints: int
    members: int
    reactions: int

    def __post_init__(self):
        for name in ("joints", "members", "reactions"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")


@dataclass(frozen=True)
class Mobility3DCounts:
    """Moving-body count, internal-DOF count and per-joint free DOFs.

    The internal-DOF term b is taken verbatim from the mobility formula as a
    user-supplied count. Note the source convention is ambiguous ("6 per
    rigid body" does not reproduce the worked six-DOF example, which needs
    b = 6 total, i.e. one internal DOF per telescoping leg); no intent is
    guessed here.
    """

    moving_bodies: int
    internal_dofs: int
    joint_freedoms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not isinstance(self.moving_bodies, int) or self.moving_bodies < 0:
            raise ValueError("moving_bodies must be a non-negative integer")
        if not isinstance(self.internal_dofs, int) or self.internal_dofs < 0:
            raise ValueError("internal_dofs must be a non-negative integer")
        object.__setattr__(self, "joint_freedoms", tuple(self.joint_freedoms))
        for f in self.joint_freedoms:
            if not isinstance(f, int) or not 0 <= f <= 6:
                raise ValueError(f"joint freedom must be an integer in [0, 6], got {f!r}")


MAXWELL_CLASSIFICATIONS = {
    -1: "kinematically indeterminate (mechanism)",
    0: "isostatic candidate",
    1: "statically indeterminate",
}


def maxwell_2d(counts: Maxwell2DCounts):
    """Planar determinacy count n = r + s - 2j and its classification.

    n >= 0 is necessary, not sufficient: a zero or positive count can still
    hide a mechanism.
    """
    n = counts.reactions + counts.members - 2 * counts.joints
    return n, MAXWELL_CLASSIFICATIONS[min(max(n, -1), 1)]


def mobility_3d(counts: Mobility3DCounts) -> int:
    """Spatial mobility M = 6n + b - sum(6 - f_i) over the joints."""
    return (
        6 * counts.moving_bodies
        + counts.internal_dofs
        - sum(6 - f for f in counts.joint_freedoms)
    )

"""Microvibration transmission analysis for pin-slider parallel isolation platforms."""

from .bipod2d import (
    BipodCoefficients,
    StrutProperties,
    bipod_coefficients,
    massless_equivalent,
    tf_axial,
    tf_base_joints,
    tf_massless_ideal,
    tf_shear,
    total_force_magnitude,
)
from .coremath import (
    GimbalLockError,
    SingularSystemError,
    euler_rate_matrix,
    rot313,
    rot321,
    skew,
    solve_linear,
)
from .model3d import (
    ConfigurationError,
    GeometryParams,
    LinkFrame,
    ManipulatorModel,
    PayloadProperties,
    ReactionOutputs,
    assemble_system,
    build_hexapod,
    evaluate_reactions,
    joint_kinematics,
    pin_slider_bipod_model,
    single_strut_model,
    state_derivative,
    state_vector,
    total_energy,
    two_link_bipod_model,
)
from .presets import BipodPreset, load_preset, preset_names
from .simulate import (
    ExcitationSpec,
    IntegrationError,
    Mode,
    Trajectory,
    default_ramp_time,
    excitation_signal,
    integrate,
    linearize_at_rest,
    modal_analysis,
    natural_frequencies,
)
from .structure import Maxwell2DCounts, Mobility3DCounts, maxwell_2d, mobility_3d
from .tfx import (
    NonSteadyStateWarning,
    TFMatrix,
    TFPoint,
    default_grid,
    slope_fit,
    steady_state_amplitude,
    tf_matrix,
    tf_point,
    zero_pattern_check,
)

__version__ = "0.1.0"

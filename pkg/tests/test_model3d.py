import numpy as np
import pytest

import hexiso
from hexiso import (
    ConfigurationError,
    GeometryParams,
    GimbalLockError,
    LinkFrame,
    PayloadProperties,
    assemble_system,
    build_hexapod,
    evaluate_reactions,
    joint_kinematics,
    load_preset,
    pin_slider_bipod_model,
    single_strut_model,
    state_derivative,
    state_vector,
    total_energy,
    two_link_bipod_model,
)
from hexiso.model3d import (
    ground_moment,
    joint_accelerations,
    reaction_forces,
    slider_positions,
    slider_reaction_moments,
)
from oracles import newton_euler_residuals, random_state

PAYLOAD = PayloadProperties(m_p=25.0, principal_inertia=(0.7608, 0.7608, 0.48))


@pytest.fixture
def hexapod1(table1_strut):
    return build_hexapod(
        GeometryParams(r_t=0.245, beta=np.pi / 2, gamma=np.arctan(np.sqrt(2)),
                       phi_t=0.0, L=0.3, cm_below_platform=0.03),
        table1_strut, PAYLOAD,
    )


class TestHexapodGeometry:
    def test_cubic_adjacent_links_orthogonal(self, hexapod1):
        a = hexapod1.strut_axis_world
        for i in range(6):
            assert abs(a[i] @ a[(i + 1) % 6]) < 1e-12

    def test_cubic_opposite_links_parallel(self, hexapod1):
        a = hexapod1.strut_axis_world
        for i in range(3):
            assert a[i] @ a[i + 3] == pytest.approx(1.0, abs=1e-12)

    def test_exact_cube_proportion_reproduces_cube_vertices(self, table1_strut):
        # with r_t = L sqrt(2/3) the links are the edges of a cube standing on
        # a corner: equal top/base radii, base a third of the diagonal down
        L = 0.3
        model = build_hexapod(
            GeometryParams(r_t=L * np.sqrt(2.0 / 3.0), beta=np.pi / 2,
                           gamma=np.arctan(np.sqrt(2)), phi_t=0.0, L=L,
                           cm_below_platform=0.0),
            table1_strut, PAYLOAD,
        )
        s = model.rest_slider_positions()
        assert np.allclose(np.hypot(s[:, 0], s[:, 1]), L * np.sqrt(2.0 / 3.0), atol=1e-12)
        assert np.allclose(s[:, 2], -L / np.sqrt(3.0), atol=1e-12)

    def test_coincident_pins_for_zero_pin_separation(self, hexapod1):
        d = hexapod1.d
        for m in range(3):
            assert np.allclose(d[2 * m], d[2 * m + 1])
        assert np.allclose(np.hypot(d[:, 0], d[:, 1]), 0.245)
        assert np.allclose(d[:, 2], 0.03)

    def test_conic_pair_planes_vertical_and_orthogonal(self, table1_strut):
        model = build_hexapod(
            GeometryParams(r_t=0.245, beta=np.pi / 2, gamma=np.pi / 2, phi_t=0.0,
                           L=0.3, cm_below_platform=0.03),
            table1_strut, PAYLOAD,
        )
        for m in range(3):
            normal = model.R[2 * m] @ [0.0, 0.0, 1.0]
            assert abs(normal[2]) < 1e-12  # pair plane contains the vertical
            assert abs(model.strut_axis_world[2 * m] @ model.strut_axis_world[2 * m + 1]) < 1e-12

    def test_uniform_pin_spacing(self, table1_strut):
        model = build_hexapod(
            GeometryParams(r_t=0.245, beta=np.pi / 2, gamma=np.pi / 2, phi_t=np.pi / 3,
                           L=0.3, cm_below_platform=0.03),
            table1_strut, PAYLOAD,
        )
        angles = np.sort(np.arctan2(model.d[:, 1], model.d[:, 0]))
        assert np.allclose(np.diff(angles), np.pi / 3, atol=1e-12)

    def test_radial_symmetry_of_frames(self, hexapod1):
        rot120 = hexiso.rot313(2 * np.pi / 3, 0.0, 0.0)
        for i in range(4):
            assert np.allclose(rot120 @ hexapod1.R[i], hexapod1.R[i + 2], atol=1e-12)
            assert np.allclose(rot120 @ hexapod1.d[i], hexapod1.d[i + 2], atol=1e-12)

    def test_bipod_formulation_needs_coincident_pins(self, table1_strut):
        with pytest.raises(ConfigurationError, match="phi_t"):
            build_hexapod(
                GeometryParams(r_t=0.245, beta=np.pi / 2, gamma=np.pi / 2, phi_t=0.1),
                table1_strut, PAYLOAD, formulation="bipod",
            )

    def test_bipod_formulation_needs_perpendicular_pairs(self, table1_strut):
        with pytest.raises(ConfigurationError, match="beta"):
            build_hexapod(
                GeometryParams(r_t=0.245, beta=2 * np.pi / 5, gamma=np.pi / 2, phi_t=0.0),
                table1_strut, PAYLOAD, formulation="bipod",
            )

    def test_rest_orientation_enters_anchor_coordinates(self, table1_strut):
        R0 = hexiso.rot321(0.3, -0.1, 0.2)
        payload = PayloadProperties(m_p=25.0, principal_inertia=(0.7, 0.7, 0.5),
                                    rest_rotation=R0)
        frame = LinkFrame(rotation=np.eye(3), pin=np.array([0.1, 0.2, 0.3]))
        model = hexiso.ManipulatorModel(frames=(frame,), strut=table1_strut, payload=payload)
        assert np.allclose(model.u_b[0], R0.T @ frame.pin)


class TestJointKinematics:
    def test_rest_state_is_zero(self, hexapod1):
        u, u_dot = joint_kinematics(hexapod1, np.zeros(12))
        assert np.all(u == 0.0) and np.all(u_dot == 0.0)

    def test_pure_translation(self, hexapod1):
        delta = 1e-4
        u, _ = joint_kinematics(hexapod1, state_vector(d_hat=(0, 0, delta)))
        expected = delta * np.einsum("nba,b->na", hexapod1.R, [0.0, 0.0, 1.0])
        assert np.allclose(u, expected, atol=1e-18)

    def test_spin_about_anchor_axis_gives_zero_velocity(self, table1_strut):
        frame = LinkFrame(rotation=np.eye(3), pin=np.array([0.0, 0.0, 0.5]))
        model = hexiso.ManipulatorModel(frames=(frame,), strut=table1_strut, payload=PAYLOAD)
        _, u_dot = joint_kinematics(model, state_vector(omega_b=(0, 0, 2.0)))
        assert np.allclose(u_dot, 0.0, atol=1e-16)


class TestAssembly:
    def test_massless_mass_block_is_block_diagonal(self, table1_strut, hexapod1, rng):
        model = build_hexapod(
            GeometryParams(r_t=0.245, beta=np.pi / 2, gamma=np.arctan(np.sqrt(2)),
                           phi_t=0.0, L=0.3, cm_below_platform=0.03),
            table1_strut.massless(), PAYLOAD,
        )
        M, _ = assemble_system(model, 0.0, random_state(rng))
        assert np.allclose(M[6:9, 6:9], 25.0 * np.eye(3), atol=1e-15)
        assert np.allclose(M[9:12, 9:12], np.diag([0.7608, 0.7608, 0.48]), atol=1e-15)
        assert np.all(M[6:9, 9:12] == 0.0) and np.all(M[9:12, 6:9] == 0.0)

    def test_rest_is_equilibrium(self, hexapod1):
        M, g = assemble_system(hexapod1, 0.0, np.zeros(12))
        assert np.all(g == 0.0)
        assert np.all(state_derivative(hexapod1, 0.0, np.zeros(12)) == 0.0)

    def test_mass_block_symmetric_at_random_states(self, hexapod1, rng):
        for _ in range(20):
            M, _ = assemble_system(hexapod1, 0.0, random_state(rng, angle=0.05))
            block = M[6:, 6:]
            assert np.abs(block - block.T).max() <= 1e-10 * np.abs(block).max()

    def test_gimbal_lock_propagates(self, hexapod1):
        y = state_vector(angles=(0.0, np.pi / 2, 0.0))
        with pytest.raises(GimbalLockError):
            state_derivative(hexapod1, 0.0, y)

    @pytest.mark.parametrize("preset,formulation", [
        ("hexapod-1-cubic", "link"),
        ("hexapod-1-cubic", "bipod"),
        ("hexapod-2-conic", "link"),
        ("hexapod-3-general", "link"),
        ("massless-hexapod-2-conic", "bipod"),
    ])
    def test_newton_euler_oracle(self, preset, formulation, rng):
        model = load_preset(preset, formulation=formulation)

        def excitation(t):
            return np.array([0.3, -0.5, 1.0]), np.array([0.1, 0.2, -0.4])

        for _ in range(20):
            y = random_state(rng, angle=0.02)
            y_dot = state_derivative(model, 0.0, y, excitation)
            residual, scale = newton_euler_residuals(model, 0.0, y, y_dot, excitation)
            assert residual <= 1e-10 * scale


class TestDegenerateModels:
    def test_pair_and_two_link_forms_agree(self, table1_strut, rng):
        a = pin_slider_bipod_model(table1_strut, PAYLOAD)
        b = two_link_bipod_model(table1_strut, PAYLOAD)
        for _ in range(20):
            y = random_state(rng, angle=0.05)
            assert np.allclose(
                state_derivative(a, 0.0, y), state_derivative(b, 0.0, y),
                rtol=0, atol=1e-12,
            )

    def test_single_strut_has_axial_dynamics_only(self, table1_strut):
        model = single_strut_model(table1_strut, PAYLOAD)
        modes = hexiso.modal_analysis(model)
        oscillatory = [m for m in modes if m.frequency_hz > 1e-6]
        assert len(oscillatory) == 1
        # axial bounce of payload plus the pin-riding top part of the link
        f_expected = np.sqrt(5000.0 / (25.0 + 0.6)) / (2 * np.pi)
        assert oscillatory[0].frequency_hz == pytest.approx(f_expected, rel=1e-6)

    def test_oracle_on_degenerates(self, table1_strut, rng):
        for model in (
            pin_slider_bipod_model(table1_strut, PAYLOAD),
            two_link_bipod_model(table1_strut, PAYLOAD),
            single_strut_model(table1_strut, PAYLOAD),
        ):
            for _ in range(10):
                y = random_state(rng, angle=0.05)
                y_dot = state_derivative(model, 0.0, y)
                residual, scale = newton_euler_residuals(model, 0.0, y, y_dot)
                assert residual <= 1e-10 * scale


class TestReactions:
    def test_rest_reactions_vanish(self, hexapod1):
        r = evaluate_reactions(hexapod1, 0.0, np.zeros(12))
        assert np.all(r.f_out == 0.0)
        assert np.all(r.mu_ground == 0.0)
        assert np.all(r.roller_moments == 0.0)

    def test_static_vertical_stiffness(self, hexapod1):
        delta = 1e-6
        u, u_dot = joint_kinematics(hexapod1, state_vector(d_hat=(0, 0, delta)))
        f_out, _ = reaction_forces(hexapod1, u, u_dot)
        k_zz = hexapod1.strut.k * np.sum(hexapod1.strut_axis_world[:, 2] ** 2)
        assert f_out[0] == pytest.approx(0.0, abs=1e-18)
        assert f_out[1] == pytest.approx(0.0, abs=1e-18)
        assert f_out[2] == pytest.approx(k_zz * delta, rel=1e-9)
        # finite-difference consistency of the restoring force
        u2, ud2 = joint_kinematics(hexapod1, state_vector(d_hat=(0, 0, 2 * delta)))
        f2, _ = reaction_forces(hexapod1, u2, ud2)
        assert f2[2] == pytest.approx(2 * f_out[2], rel=1e-9)

    def test_per_link_forces_lie_in_constrained_subspace(self, hexapod1, rng):
        y = random_state(rng)
        u, u_dot = joint_kinematics(hexapod1, y)
        _, per_link = reaction_forces(hexapod1, u, u_dot)
        for i, frame in enumerate(hexapod1.frames):
            residual = (np.eye(3) - frame.projector) @ frame.rotation.T @ per_link[i]
            assert np.linalg.norm(residual) < 1e-15

    def test_total_equals_per_link_sum(self, hexapod1, rng):
        u, u_dot = joint_kinematics(hexapod1, random_state(rng))
        f_out, per_link = reaction_forces(hexapod1, u, u_dot)
        assert np.array_equal(f_out, per_link.sum(axis=0))

    def test_vertical_load_moment_symmetry(self, hexapod1):
        delta = 1e-4
        u, u_dot = joint_kinematics(hexapod1, state_vector(d_hat=(0, 0, delta)))
        f_out, _ = reaction_forces(hexapod1, u, u_dot)
        mu, _ = ground_moment(hexapod1, hexapod1.ground_point, u, u_dot)
        bound = 1e-12 * np.linalg.norm(f_out) * hexapod1.strut.L
        assert abs(mu[0]) < bound and abs(mu[1]) < bound

    def test_moment_transport_identity(self, hexapod1, rng):
        y = random_state(rng)
        u, u_dot = joint_kinematics(hexapod1, y)
        f_out, _ = reaction_forces(hexapod1, u, u_dot)
        G = hexapod1.ground_point
        shift = rng.normal(size=3)
        mu0, _ = ground_moment(hexapod1, G, u, u_dot)
        mu1, _ = ground_moment(hexapod1, G + shift, u, u_dot)
        assert np.allclose(mu1 - mu0, -np.cross(shift, f_out), atol=1e-12)

    def test_slider_positions_at_rest(self, hexapod1):
        u, _ = joint_kinematics(hexapod1, np.zeros(12))
        assert np.allclose(slider_positions(hexapod1, u), hexapod1.rest_slider_positions())


class TestSliderReactionMoments:
    def test_parallel_acceleration_gives_zero(self, hexapod1):
        u_ddot = np.tile([1.0, 0.0, 0.0], (6, 1))  # along every x-aligned link
        assert np.allclose(slider_reaction_moments(hexapod1, u_ddot), 0.0)

    def test_massless_links_give_zero(self, table1_strut, rng):
        model = build_hexapod(
            GeometryParams(r_t=0.245, beta=np.pi / 2, gamma=np.pi / 2, phi_t=0.0,
                           L=0.3, cm_below_platform=0.03),
            table1_strut.massless(), PAYLOAD,
        )
        assert np.all(slider_reaction_moments(model, rng.normal(size=(6, 3))) == 0.0)

    def test_scaling_matrix_drops_out(self, table1_strut, rng):
        # cross(e, S u) == cross(e, u) for S = E - (m_b/m_s) diag(e)
        e = np.array([1.0, 0.0, 0.0])
        S = np.eye(3) - (table1_strut.m_b / table1_strut.m_s) * np.diag(e)
        for _ in range(20):
            u = rng.normal(size=3)
            assert np.allclose(np.cross(e, S @ u), np.cross(e, u), atol=1e-15)

    def test_no_component_along_link_axis(self, hexapod1, rng):
        mu = slider_reaction_moments(hexapod1, rng.normal(size=(6, 3)))
        assert np.allclose(mu[:, 0], 0.0)  # local x is the link axis

    def test_accelerations_feed_reaction_moments(self, hexapod1, rng):
        y = random_state(rng)
        y_dot = state_derivative(hexapod1, 0.0, y)
        u_ddot = joint_accelerations(hexapod1, y, y_dot[6:9], y_dot[9:12])
        expected = hexapod1.eta_s_times_ms * hexapod1.strut.L * np.cross(
            np.tile([1.0, 0, 0], (6, 1)), u_ddot
        )
        r = evaluate_reactions(hexapod1, 0.0, y)
        assert np.allclose(r.roller_moments, expected, atol=1e-15)


class TestEnergy:
    def test_rest_energy_is_zero(self, hexapod1):
        assert total_energy(hexapod1, np.zeros(12)) == 0.0

    def test_energy_positive_definite(self, hexapod1, rng):
        for _ in range(20):
            y = random_state(rng)
            if np.any(y != 0.0):
                assert total_energy(hexapod1, y) > 0.0

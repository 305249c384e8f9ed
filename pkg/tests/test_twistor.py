"""Twistor-geometry tests: the complex-structure map and both fibrations."""

import numpy as np
import pytest

from g28twistor.multivector import FLOAT, Multivector
from g28twistor.sampling import grassmann_point, s6_point, s6_tangent, stream, unit_vector
from g28twistor.spinor import get_structure
from g28twistor.twistor import (
    E1,
    E3,
    E4,
    STANDARD_J,
    DecompositionFailure,
    GrassmannPoint,
    NotInFiber,
    PreconditionViolation,
    bivector_from_matrix,
    bivector_matrix,
    calibration_form,
    complex_structure_residual,
    fiber_point,
    j_v,
    phi_star,
    s4_invariance_check,
    spinor_identity_residual,
    standard_j,
    tangent_action,
    tau,
    tau1,
    theta_fiber,
    theta_space,
    vector_mv,
)

E = np.eye(8)

GOLDEN_P_E2 = np.array([
    [0, 1, 0, 0, 0, 0, 0, 0],
    [-1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, -1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, -1, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, -1],
    [0, 0, 0, 0, 0, 0, 1, 0],
], dtype=float)


def theta_sample(rng, theta):
    coef = rng.normal(size=4)
    coef /= np.linalg.norm(coef)
    return theta_space(theta).T @ coef


# --- GrassmannPoint ---------------------------------------------------------

def test_frame_canonicalization():
    x = GrassmannPoint(2.0 * E[0], E[0] + 3.0 * E[1])
    assert np.allclose(x.u, E[0])
    assert np.allclose(x.w, E[1])
    assert x.check_invariants() < 1e-12


def test_degenerate_frames_rejected():
    with pytest.raises(PreconditionViolation):
        GrassmannPoint(E[0], 2.0 * E[0])
    with pytest.raises(PreconditionViolation):
        GrassmannPoint(np.zeros(8), E[1])


def test_cliff_squares_to_minus_one():
    rng = stream(0, "cliff-square")
    for _ in range(25):
        x = grassmann_point(rng)
        sq = x.cliff * x.cliff + Multivector.scalar(1.0, ring=FLOAT)
        assert sq.norm() < 1e-12


def test_json_round_trip():
    rng = stream(0, "json")
    x = grassmann_point(rng)
    y = GrassmannPoint.from_json(x.to_json())
    assert np.allclose(x.u, y.u) and np.allclose(x.w, y.w)


def test_bivector_matrix_round_trip():
    rng = stream(0, "bivmat")
    x = grassmann_point(rng)
    assert np.allclose(bivector_matrix(x.cliff), x.coeff_matrix())
    mv = bivector_from_matrix(x.coeff_matrix())
    assert (mv - x.cliff).norm() < 1e-15


# --- phi_star ----------------------------------------------------------------

def test_phi_star_golden_block():
    x = GrassmannPoint(E[0], E[1])
    assert np.array_equal(phi_star(x), GOLDEN_P_E2)


def test_phi_star_complex_structures_randomized():
    rng = stream(1, "phi-star")
    for _ in range(100):
        j = phi_star(grassmann_point(rng))
        assert complex_structure_residual(j) < 1e-9


def test_phi_star_orientation_flip():
    rng = stream(1, "orientation")
    x = grassmann_point(rng)
    y = GrassmannPoint(x.w, x.u)
    assert np.allclose(phi_star(x), -phi_star(y), atol=1e-12)


def test_phi_star_well_defined_under_frame_rotation():
    rng = stream(1, "frame-rotation")
    for _ in range(20):
        x = grassmann_point(rng)
        ang = rng.uniform(0, 2 * np.pi)
        u2 = np.cos(ang) * x.u + np.sin(ang) * x.w
        w2 = -np.sin(ang) * x.u + np.cos(ang) * x.w
        y = GrassmannPoint(u2, w2)
        assert np.linalg.norm(phi_star(x) - phi_star(y)) < 1e-9


def test_phi_star_separates_planes():
    rng = stream(1, "separation")
    pts = [grassmann_point(rng) for _ in range(40)]
    for i in range(len(pts)):
        for k in range(i + 1, len(pts)):
            if pts[i].plane_distance(pts[k]) > 1e-6:
                assert np.linalg.norm(phi_star(pts[i]) - phi_star(pts[k])) > 1e-6


# --- tau and the S^6 fibration ------------------------------------------------

def test_tau_examples():
    assert np.allclose(tau(GrassmannPoint(E[0], E[2])), E[2], atol=1e-12)
    theta = 0.7
    v = np.cos(theta) * E[2] + np.sin(theta) * E[4]
    assert np.allclose(tau(GrassmannPoint(E[0], v)), v, atol=1e-12)


def test_tau_matches_direct_spinor_solve():
    st = get_structure()
    rng = stream(2, "tau-oracle")
    for _ in range(20):
        x = grassmann_point(rng)
        direct = np.asarray(st.decode_even(x.cliff * st.A_float))
        assert np.allclose(tau(x), direct, atol=1e-10)


def test_fiber_point_examples():
    fp = fiber_point(E[2], E[0])
    assert np.allclose(fp.u, E[0]) and np.allclose(fp.w, E[2])
    rng = stream(2, "fiber")
    for _ in range(100):
        v, u = s6_point(rng), unit_vector(rng)
        assert np.linalg.norm(tau(fiber_point(v, u)) - v) < 1e-8


def test_fiber_point_orientation_consistency():
    rng = stream(2, "fiber-orientation")
    v, u = s6_point(rng), unit_vector(rng)
    x = fiber_point(v, u)
    y = fiber_point(v, j_v(v) @ u)
    assert (x.cliff - y.cliff).norm() < 1e-10


def test_phi_star_preserves_e1_v_plane_on_fibers():
    rng = stream(2, "span-invariance")
    for _ in range(50):
        v, u = s6_point(rng), unit_vector(rng)
        j = phi_star(fiber_point(v, u))
        for z in (E1, v):
            img = j @ z
            res = img - np.dot(img, E1) * E1 - np.dot(img, v) * v
            assert np.linalg.norm(res) < 1e-8


# --- j_v ----------------------------------------------------------------------

def test_j_v_examples():
    j = j_v(E[2])
    assert np.allclose(j @ E1, E[2], atol=1e-12)
    assert np.allclose(j @ E[2], -E1, atol=1e-12)
    assert complex_structure_residual(j) < 1e-12


def test_j_v_randomized():
    rng = stream(3, "jv")
    for _ in range(50):
        assert complex_structure_residual(j_v(s6_point(rng))) < 1e-9


def test_j_v_rejects_bad_points():
    with pytest.raises(PreconditionViolation):
        j_v(E1)                       # not orthogonal to e1
    with pytest.raises(PreconditionViolation):
        j_v(0.5 * E[2])               # not unit


# --- tangent action -------------------------------------------------------------

def test_tangent_action_is_phi_star_action():
    x = GrassmannPoint(E[0], E[2])
    y = tangent_action(x, E[4])
    assert np.allclose(y, phi_star(x) @ E[4], atol=1e-12)
    rng = stream(4, "tangent-cross")
    for _ in range(50):
        v, u = s6_point(rng), unit_vector(rng)
        pt = fiber_point(v, u)
        xv = s6_tangent(rng, v)
        assert np.linalg.norm(tangent_action(pt, xv) - phi_star(pt) @ xv) < 1e-9


def test_tangent_action_squares_to_minus_one():
    rng = stream(4, "tangent-square")
    for _ in range(20):
        v, u = s6_point(rng), unit_vector(rng)
        pt = fiber_point(v, u)
        xv = s6_tangent(rng, v)
        y = tangent_action(pt, xv)
        assert abs(np.linalg.norm(y) - np.linalg.norm(xv)) < 1e-9
        assert np.linalg.norm(tangent_action(pt, y) + xv) < 1e-8


def test_tangent_action_rejects_non_tangent():
    x = GrassmannPoint(E[0], E[2])
    with pytest.raises(PreconditionViolation):
        tangent_action(x, E1)
    with pytest.raises(PreconditionViolation):
        tangent_action(x, E[2])


# --- tau1 and the theta family ---------------------------------------------------

def test_tau1_base_point():
    assert np.allclose(tau1(GrassmannPoint(E[0], E[2])), E4, atol=1e-12)


def test_tau1_rejects_other_fibers():
    with pytest.raises(NotInFiber):
        tau1(GrassmannPoint(E[0], E[1]))


def test_theta_fiber_examples():
    x = theta_fiber(0.0, E[0])
    assert np.allclose(x.u, E[0]) and np.allclose(x.w, E[2])
    assert np.allclose(tau1(x), E4, atol=1e-12)
    y = theta_fiber(np.pi / 2, (E[0] + E[6]) / np.sqrt(2))
    assert np.allclose(tau1(y), E[5], atol=1e-12)


def test_theta_fiber_projects_to_circle():
    rng = stream(5, "theta")
    for _ in range(50):
        theta = rng.uniform(0, 2 * np.pi)
        x = theta_fiber(theta, theta_sample(rng, theta))
        expected = np.cos(theta) * E4 + np.sin(theta) * E[5]
        assert np.linalg.norm(tau1(x) - expected) < 1e-8
        assert np.linalg.norm(tau(x) - E3) < 1e-8
        assert abs(np.linalg.norm(tau1(x)) - 1.0) < 1e-10


def test_theta_fiber_distinct_points_same_image():
    rng = stream(5, "theta-distinct")
    theta = 1.1
    a = theta_sample(rng, theta)
    b = theta_sample(rng, theta)
    x, y = theta_fiber(theta, a), theta_fiber(theta, b)
    assert x.plane_distance(y) > 1e-6
    assert np.linalg.norm(tau1(x) - tau1(y)) < 1e-8


def test_theta_fiber_rejects_outside_plane():
    with pytest.raises(PreconditionViolation):
        theta_fiber(0.3, E[0])        # e1 is not in V(0.3)


def test_theta_space_orthonormal():
    for theta in (0.0, 0.4, 1.9, np.pi):
        b = theta_space(theta)
        assert np.allclose(b @ b.T, np.eye(4), atol=1e-12)


# --- S^4 invariance and calibration ------------------------------------------------

def test_s4_invariance_base_point():
    m = s4_invariance_check(GrassmannPoint(E[0], E[2]))
    assert np.allclose(m @ m, -np.eye(4), atol=1e-12)


def test_s4_invariance_theta_family():
    rng = stream(6, "s4-inv")
    for _ in range(25):
        theta = rng.uniform(0, 2 * np.pi)
        m = s4_invariance_check(theta_fiber(theta, theta_sample(rng, theta)))
        assert np.linalg.norm(m @ m + np.eye(4)) < 1e-8


def test_s4_invariance_rejects_wrong_fiber():
    with pytest.raises(NotInFiber):
        s4_invariance_check(GrassmannPoint(E[0], E[1]))


def test_calibration_endpoints():
    c0 = calibration_form(0.0)
    e = Multivector.blade
    want0 = (e([1, 3], n=8).to_float() - e([2, 4], n=8).to_float())
    assert (c0 - want0).norm() < 1e-12
    cpi = calibration_form(np.pi)
    want_pi = (-e([5, 7], n=8).to_float() + e([6, 8], n=8).to_float())
    assert (cpi - want_pi).norm() < 1e-12


def test_spinor_identity_on_theta_fibers():
    rng = stream(6, "spinor-identity")
    for _ in range(20):
        theta = rng.uniform(0, 2 * np.pi)
        x = theta_fiber(theta, theta_sample(rng, theta))
        assert spinor_identity_residual(x) < 1e-9


def test_calibration_attains_one_on_fibers():
    rng = stream(6, "calibration-contact")
    for _ in range(20):
        theta = rng.uniform(0, 2 * np.pi)
        x = theta_fiber(theta, theta_sample(rng, theta))
        assert abs(float(calibration_form(theta).blade_inner(x.cliff)) - 1.0) < 1e-10


def test_standard_j_squares_to_minus_identity():
    assert np.array_equal(STANDARD_J, standard_j())
    assert np.array_equal(STANDARD_J @ STANDARD_J, -np.eye(8))
    assert np.allclose(STANDARD_J @ E[0], E[1])


def test_vector_mv_round_trip():
    rng = stream(7, "vecmv")
    v = rng.normal(size=8)
    mv = vector_mv(v)
    assert np.allclose([float(c) for c in mv.to_vector()], v)

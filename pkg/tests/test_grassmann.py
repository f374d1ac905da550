import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinholonomy.errors import DegenerateInputError, DomainError
from spinholonomy.grassmann import (
    KPlane,
    anticoherence,
    is_symmetry_rotation,
    orthonormalize,
    plane_distance,
    plane_from_kets,
    principal_angles,
    rotate_plane,
    spin_expectation_block,
)
from spinholonomy.spin_core import Rotation, wigner_D

from conftest import random_plane, random_unitary

seeds = st.integers(0, 2**31 - 1)


def test_kplane_rejects_bad_frames():
    with pytest.raises(DomainError):
        KPlane(1, np.ones((3, 1)))
    with pytest.raises(DomainError):
        KPlane(1, np.eye(4)[:, :2])


def test_orthonormalize_keeps_flag_and_orthonormal_input():
    a = np.array([[1, 1], [0, 1], [0, 0]], dtype=complex)
    q = orthonormalize(a)
    np.testing.assert_allclose(q[:, 0], [1, 0, 0])
    np.testing.assert_allclose(q.conj().T @ q, np.eye(2), atol=1e-15)
    frame = np.eye(3)[:, :2].astype(complex)
    assert np.array_equal(orthonormalize(frame), frame)


def test_rank_deficient_kets():
    with pytest.raises(DegenerateInputError):
        plane_from_kets(2, [[1, 0, 0, 0, 0], [2, 0, 0, 0, 0]])
    with pytest.raises(DegenerateInputError):
        plane_from_kets(2, [[1, 0, 0, 0]])


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_distance_is_basis_independent(seed):
    rng = np.random.default_rng(seed)
    a, b = random_plane(rng, 4, 2), random_plane(rng, 4, 2)
    u = random_unitary(rng, 2)
    assert plane_distance(a, b) == pytest.approx(plane_distance(a.with_basis(u), b), abs=1e-12)
    assert plane_distance(a, a.with_basis(u)) < 1e-7


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_distance_rotation_invariant(seed):
    rng = np.random.default_rng(seed)
    a, b = random_plane(rng, 5, 3), random_plane(rng, 5, 3)
    R = Rotation(rng.normal(size=3))
    d0 = plane_distance(a, b)
    assert plane_distance(rotate_plane(a, R), rotate_plane(b, R)) == pytest.approx(d0, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_triangle_inequality(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_plane(rng, 3, 2) for _ in range(3))
    assert plane_distance(a, c) <= plane_distance(a, b) + plane_distance(b, c) + 1e-12


def test_principal_angles_examples():
    e = np.eye(3, dtype=complex)
    a = KPlane(1, e[:, :2])
    b = KPlane(1, e[:, [0, 2]])
    np.testing.assert_allclose(principal_angles(a, b), [np.pi / 2, 0.0], atol=1e-15)
    assert plane_distance(a, b) == pytest.approx(np.pi / 2)
    theta = 1e-9
    c = KPlane(1, np.column_stack([e[:, 0], np.cos(theta) * e[:, 1] + np.sin(theta) * e[:, 2]]))
    # small angles keep full relative precision
    assert plane_distance(a, c) == pytest.approx(theta, rel=1e-6)


def test_plane_distance_domain():
    with pytest.raises(DomainError):
        plane_distance(KPlane(1, np.eye(3)[:, :1]), KPlane(1, np.eye(3)[:, :2]))


def test_rotate_plane_argument_forms():
    rng = np.random.default_rng(0)
    p = random_plane(rng, 4, 2)
    R = Rotation([0.1, 0.2, 0.3])
    f1 = rotate_plane(p, R).frame
    np.testing.assert_allclose(rotate_plane(p, np.array([0.1, 0.2, 0.3])).frame, f1)
    np.testing.assert_allclose(rotate_plane(p, wigner_D(2, R)).frame, f1)


def test_catalog_planes_anticoherent(pi_not, pi_cnot):
    for p in (pi_not, pi_cnot):
        rep = anticoherence(p, 1)
        assert rep.is_anticoherent and rep.order == 1
        assert np.max(np.abs(spin_expectation_block(p))) < 1e-12


def test_pi_not_is_not_two_anticoherent(pi_not):
    rep = anticoherence(pi_not, 2)
    assert rep.order == 1
    assert rep.residuals[2] > 1e-3


def test_random_plane_not_anticoherent():
    rep = anticoherence(random_plane(np.random.default_rng(7), 4, 2), 1)
    assert rep.order == 0 and not rep.is_anticoherent


def test_anticoherence_domain(pi_not):
    with pytest.raises(DomainError):
        anticoherence(pi_not, 5)


def test_documented_symmetries(pi_not, pi_cnot):
    assert is_symmetry_rotation(pi_not, Rotation([0, np.pi, 0]))[0]
    assert is_symmetry_rotation(pi_cnot, Rotation([np.pi, 0, 0]))[0]
    assert is_symmetry_rotation(pi_cnot, Rotation([0, 0, 2 * np.pi / 5]))[0]
    ok, dist = is_symmetry_rotation(pi_not, Rotation([0, 0.3, 0]))
    assert not ok and dist > 1e-3

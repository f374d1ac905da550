import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment

from spinholonomy.errors import DomainError
from spinholonomy.grassmann import plane_from_kets, rotate_plane
from spinholonomy.spin_core import Rotation, wigner_D
from spinholonomy.stellar import (
    Constellation,
    ContinuousAxis,
    casimir_multiplicities,
    check_congruence,
    induced_spin_operators,
    majorana_constellation,
    majorana_stars,
    multiconstellation,
    multiplet_bases,
    multiplet_decomposition,
    plane_symmetries,
    plucker_coordinates,
    polynomial_from_stars,
    symmetry_candidates,
    wedge_basis,
)

from conftest import random_plane

seeds = st.integers(0, 2**31 - 1)


def multiset_distance(a, b):
    cost = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    r, c = linear_sum_assignment(cost)
    return cost[r, c].max()


def tetrahedron():
    v = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / np.sqrt(3)
    return Constellation(v, np.ones(4, dtype=int))


def octahedron():
    v = np.vstack([np.eye(3), -np.eye(3)])
    return Constellation(v, np.ones(6, dtype=int))


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_constellation_equivariance(seed):
    rng = np.random.default_rng(seed)
    twice_s = int(rng.integers(1, 9))
    psi = rng.normal(size=twice_s + 1) + 1j * rng.normal(size=twice_s + 1)
    psi /= np.linalg.norm(psi)
    R = Rotation(rng.normal(size=3))
    a = R.apply(majorana_stars(psi))
    b = majorana_stars(wigner_D(twice_s / 2, R) @ psi)
    assert multiset_distance(a, b) < 1e-7


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_polynomial_roundtrip(seed):
    rng = np.random.default_rng(seed)
    twice_s = int(rng.integers(1, 9))
    psi = rng.normal(size=twice_s + 1) + 1j * rng.normal(size=twice_s + 1)
    psi /= np.linalg.norm(psi)
    stars = majorana_stars(psi)
    coef = polynomial_from_stars(stars, twice_s)
    from spinholonomy.stellar import majorana_coefficients

    ref = majorana_coefficients(psi)
    # equal up to one complex scale
    lam = np.vdot(coef, ref) / np.vdot(coef, coef)
    assert np.max(np.abs(lam * coef - ref)) < 1e-7


@pytest.mark.parametrize("twice_s", [1, 2, 5, 8])
def test_highest_weight_state_on_north_pole(twice_s):
    psi = np.zeros(twice_s + 1, complex)
    psi[0] = 1
    cst = majorana_constellation(psi)
    np.testing.assert_allclose(cst.points, [[0, 0, 1]])
    assert cst.multiplicities.tolist() == [twice_s]
    low = majorana_constellation(psi[::-1])
    np.testing.assert_allclose(low.points, [[0, 0, -1]])


def test_antipodal_pair():
    stars = majorana_stars(np.array([1, 0, 1]) / np.sqrt(2))
    assert stars.shape == (2, 3)
    np.testing.assert_allclose(stars[0], -stars[1], atol=1e-12)
    assert abs(stars[0, 2]) < 1e-12


def test_chi_is_tetrahedron_with_vertex_on_x(chi):
    pts = majorana_stars(chi)
    d = [np.linalg.norm(a - b) for a, b in itertools.combinations(pts, 2)]
    assert max(d) - min(d) < 1e-7
    assert np.min(np.linalg.norm(pts - [1, 0, 0], axis=1)) < 1e-7


def test_zero_state_rejected():
    with pytest.raises(DomainError):
        majorana_stars(np.zeros(3))


def test_constellation_json_roundtrip():
    cst = majorana_constellation(np.array([1, 0, 0, 0.3j, 0.1]))
    again = Constellation.from_json(cst.to_json())
    assert np.array_equal(again.points, cst.points)
    assert np.array_equal(again.multiplicities, cst.multiplicities)
    legacy = [{"x": 0.0, "y": 0.0, "z": 1.0, "multiplicity": 2}]
    assert Constellation.from_json(legacy).count == 2


def test_wedge_basis_and_plucker_of_coordinate_plane():
    assert wedge_basis(4, 2)[:3] == [(0, 1), (0, 2), (0, 3)]
    p = plane_from_kets(1.5, [[0, 1, 0, 0], [0, 0, 0, 1]])
    v = plucker_coordinates(p)
    assert abs(v.components[v.subsets.index((1, 3))]) == pytest.approx(1.0)


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_plucker_basis_independent_and_equivariant(seed):
    rng = np.random.default_rng(seed)
    p = random_plane(rng, 4, 2)
    R = Rotation(rng.normal(size=3))
    v = plucker_coordinates(p).components
    sx, sy, sz = induced_spin_operators(2, 2)
    m = R.axis_angle
    h = m[0] * sx + m[1] * sy + m[2] * sz
    w, vecs = np.linalg.eigh(h)
    big_d = (vecs * np.exp(-1j * w)) @ vecs.conj().T
    rotated = plucker_coordinates(rotate_plane(p, R)).components
    # Pluecker vectors are defined up to phase
    overlap = abs(np.vdot(big_d @ v, rotated))
    assert overlap == pytest.approx(1.0, abs=1e-10)


def test_induced_operators_satisfy_su2():
    sx, sy, sz = induced_spin_operators(2, 2)
    np.testing.assert_allclose(sx @ sy - sy @ sx, 1j * sz, atol=1e-12)
    np.testing.assert_allclose(sz @ sx - sx @ sz, 1j * sy, atol=1e-12)


def test_casimir_multiplicities():
    assert casimir_multiplicities(2, 2) == {3.0: 1, 1.0: 1}
    assert casimir_multiplicities(1, 1) == {1.0: 1}
    assert casimir_multiplicities(5, 4) == {
        14.0: 1, 12.0: 1, 11.0: 1, 10.0: 2, 9.0: 1, 8.0: 3, 7.0: 2,
        6.0: 3, 5.0: 2, 4.0: 3, 3.0: 1, 2.0: 3, 0.0: 1,
    }


def test_multiplet_bases_orthonormal_and_complete():
    for s, k in ((2, 2), (1.5, 2), (5, 4)):
        basis = np.hstack([mu.basis for mu in multiplet_bases(s, k)])
        assert basis.shape[0] == basis.shape[1]
        np.testing.assert_allclose(basis.conj().T @ basis, np.eye(basis.shape[1]), atol=1e-10)


def test_pi_not_multiplet_components(pi_not):
    parts = dict(multiplet_decomposition(pi_not))
    spin3 = parts[3.0]
    ref = np.array([-np.sqrt(2), 0, 0, np.sqrt(5), 0, 0, np.sqrt(2)]) / 3
    phase = np.vdot(ref, spin3)
    assert abs(phase) == pytest.approx(1.0, abs=1e-9)
    assert np.max(np.abs(spin3 - phase * ref)) < 1e-9
    assert np.max(np.abs(parts[1.0])) < 1e-9


def test_pi_not_multiconstellation(pi_not):
    mc = multiconstellation(pi_not)
    np.testing.assert_allclose(mc.weights, [1, 0], atol=1e-12)
    j, _, cst = mc.principal
    assert j == 3.0 and cst.count == 6
    d = np.linalg.norm(cst.points[:, None] - cst.points[None], axis=2)
    # octahedron: every star has exactly one antipode and four neighbours at sqrt(2)
    for row in d:
        assert np.sum(np.abs(row - 2) < 1e-7) == 1
        assert np.sum(np.abs(row - np.sqrt(2)) < 1e-7) == 4
    np.testing.assert_allclose(mc.spectator.points, [[0, 0, 1]], atol=1e-12)


def test_pi_cnot_principal_has_quadruple_poles(pi_cnot):
    mc = multiconstellation(pi_cnot)
    j, _, cst = mc.principal
    assert j == 14.0
    for pole in ([0, 0, 1], [0, 0, -1]):
        i = np.argmin(np.linalg.norm(cst.points - pole, axis=1))
        assert np.linalg.norm(cst.points[i] - pole) < 1e-7
        assert cst.multiplicities[i] == 4


def test_multiplet_components_rotate_covariantly():
    rng = np.random.default_rng(4)
    p = random_plane(rng, 4, 2)
    R = Rotation([0.3, 1.0, -0.5])
    before = multiplet_decomposition(p)
    after = multiplet_decomposition(rotate_plane(p, R))
    expected = np.concatenate([wigner_D(j, R) @ c for j, c in before])
    got = np.concatenate([c for _, c in after])
    # one common phase: the Pluecker vector is defined up to phase
    phase = np.vdot(expected, got)
    assert abs(phase) == pytest.approx(1.0, abs=1e-10)
    assert np.max(np.abs(got - phase * expected)) < 1e-8


def test_weight_moduli_and_spectator_latitude_invariant():
    rng = np.random.default_rng(4)
    p = random_plane(rng, 4, 2)
    a = multiconstellation(p)
    b = multiconstellation(rotate_plane(p, Rotation([0.3, 1.0, -0.5])))
    np.testing.assert_allclose(np.abs(a.weights), np.abs(b.weights), atol=1e-10)
    assert np.sum(np.abs(a.weights) ** 2) == pytest.approx(1.0)
    np.testing.assert_allclose(a.spectator.points[:, 2], b.spectator.points[:, 2], atol=1e-8)


def test_full_plane_is_trivial_multiplet():
    mc = multiconstellation(plane_from_kets(1, np.eye(3)))
    assert len(mc.multiplets) == 1
    j, w, cst = mc.multiplets[0]
    assert j == 0.0 and abs(w) == pytest.approx(1.0) and cst.count == 0


def test_symmetry_group_orders():
    assert len(symmetry_candidates(tetrahedron())) == 12
    assert len(symmetry_candidates(octahedron())) == 24
    found = symmetry_candidates(tetrahedron())
    assert all(check_congruence(tetrahedron(), tetrahedron(), R) for R in found)


def test_continuous_axis_marker():
    cst = Constellation(np.array([[0, 0, 1.0], [0, 0, -1.0]]), [2, 1])
    res = symmetry_candidates(cst)
    assert isinstance(res, ContinuousAxis)
    np.testing.assert_allclose(np.abs(res.axis), [0, 0, 1])


def test_plane_symmetries(pi_not, pi_cnot):
    sym_not = plane_symmetries(pi_not)
    assert len(sym_not) == 24
    assert any(R.same_as(Rotation([0, np.pi, 0])) for R in sym_not)
    sym_cnot = plane_symmetries(pi_cnot)
    assert len(sym_cnot) == 10
    for target in (Rotation([np.pi, 0, 0]), Rotation([0, 0, 2 * np.pi / 5])):
        assert any(R.same_as(target) for R in sym_cnot)


def test_chi_symmetry_bridge(chi):
    R = Rotation([2 * np.pi / 3, 0, 0])
    out = wigner_D(2, R) @ chi
    assert abs(abs(np.vdot(chi, out)) - 1) < 1e-10
    cst = majorana_constellation(chi)
    assert check_congruence(cst, cst, R)

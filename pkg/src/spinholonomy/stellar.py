"""Majorana constellations of spin states and multiconstellations of planes.

A state ``psi`` of spin ``s`` is mapped to the roots of

    p(z) = sum_m (-1)^(s-m) sqrt(binom(2s, s-m)) psi_m z^(s+m)

and each root ``z = tan(theta/2) e^{i phi}`` to the unit vector with polar
angles ``(theta, phi)``; a missing degree ``d`` puts ``d`` stars on the south
pole. With this choice ``D(R) psi`` has the constellation of ``psi`` rotated
by ``R``.

A k-plane is mapped to its Pluecker vector in the k-th exterior power, which is
split into spin multiplets of the induced rotation action.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DegeneracyError, DomainError
from .grassmann import KPlane, is_symmetry_rotation
from .spin_core import Rotation, SpinQuantum, as_spin, spin_operators

MERGE_TOL = 1e-6
ZERO_COEFF_TOL = 1e-10
MAX_SEARCH_STARS = 50


@dataclass(frozen=True)
class Constellation:
    """Distinct unit vectors ``points`` with integer ``multiplicities``."""

    points: np.ndarray
    multiplicities: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 3)
        mult = np.asarray(self.multiplicities, dtype=int).reshape(-1)
        if pts.shape[0] != mult.shape[0]:
            raise DomainError("points and multiplicities differ in length")
        if pts.size and np.max(np.abs(np.linalg.norm(pts, axis=1) - 1)) > 1e-10:
            raise DomainError("stars must be unit vectors")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "multiplicities", mult)

    @classmethod
    def from_stars(cls, stars, tol: float = MERGE_TOL) -> "Constellation":
        """Merge a raw list of (possibly repeated) stars."""
        stars = np.asarray(stars, dtype=float).reshape(-1, 3)
        pts: List[np.ndarray] = []
        mult: List[int] = []
        for v in stars:
            for i, p in enumerate(pts):
                if np.linalg.norm(p - v) < tol:
                    mult[i] += 1
                    break
            else:
                pts.append(v / np.linalg.norm(v))
                mult.append(1)
        return cls(np.array(pts).reshape(-1, 3), np.array(mult, dtype=int))

    @property
    def count(self) -> int:
        return int(self.multiplicities.sum())

    def expanded(self) -> np.ndarray:
        """All ``2j`` stars, repeated by multiplicity."""
        return np.repeat(self.points, self.multiplicities, axis=0)

    def rotated(self, R: Rotation) -> "Constellation":
        return Constellation(R.apply(self.points), self.multiplicities)

    def to_json(self) -> list:
        """Star list ``[{x, y, z, mult}, ...]`` as used in star files."""
        return [
            {"x": float(p[0]), "y": float(p[1]), "z": float(p[2]), "mult": int(m)}
            for p, m in zip(self.points, self.multiplicities)
        ]

    @classmethod
    def from_json(cls, stars: list) -> "Constellation":
        """Inverse of :meth:`to_json`; ``multiplicity`` is accepted for ``mult``."""
        pts = [[float(d["x"]), float(d["y"]), float(d["z"])] for d in stars]
        mult = [int(d["mult"] if "mult" in d else d["multiplicity"]) for d in stars]
        return cls(np.array(pts).reshape(-1, 3), np.array(mult, dtype=int))


@dataclass(frozen=True)
class ContinuousAxis:
    """Marker for constellations invariant under all rotations about ``axis``."""

    axis: np.ndarray


# ----------------------------------------------------------------------------
# single states
# ----------------------------------------------------------------------------


def majorana_coefficients(psi) -> np.ndarray:
    """Polynomial coefficients, index ``d`` <-> ``z^d``."""
    psi = np.asarray(psi, dtype=complex)
    tw = psi.size - 1
    i = np.arange(tw + 1)
    binom = np.array([math.comb(tw, int(x)) for x in i], dtype=float)
    coef = np.empty(tw + 1, dtype=complex)
    coef[tw - i] = (-1.0) ** i * np.sqrt(binom) * psi
    return coef


def _roots(coef: np.ndarray, zero_tol: float) -> Tuple[np.ndarray, int, int]:
    """Roots of ``sum_d coef[d] z^d`` plus counts of exact zero roots and roots at infinity."""
    scale = np.max(np.abs(coef))
    nz = np.nonzero(np.abs(coef) > zero_tol * scale)[0]
    low, high = int(nz[0]), int(nz[-1])
    n_zero = low
    n_inf = coef.size - 1 - high
    trimmed = coef[low : high + 1]
    if trimmed.size <= 1:
        return np.zeros(0, dtype=complex), n_zero, n_inf
    # companion matrix eigenvalues (LAPACK geev balances the matrix first)
    monic = trimmed[:-1] / trimmed[-1]
    deg = monic.size
    comp = np.zeros((deg, deg), dtype=complex)
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -monic
    return np.linalg.eigvals(comp), n_zero, n_inf


def _sphere_point(z: np.ndarray) -> np.ndarray:
    r2 = np.abs(z) ** 2
    return np.stack([2 * z.real, 2 * z.imag, 1 - r2], axis=-1) / (1 + r2)[..., None]


def majorana_stars(psi, zero_tol: float = ZERO_COEFF_TOL) -> np.ndarray:
    """Raw list of the ``2s`` stars of ``psi`` (shape ``(2s, 3)``)."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or np.linalg.norm(psi) == 0:
        raise DomainError("need a non-zero state vector")
    roots, n_zero, n_inf = _roots(majorana_coefficients(psi), zero_tol)
    parts = [np.tile([0.0, 0.0, 1.0], (n_zero, 1)), _sphere_point(roots).reshape(-1, 3),
             np.tile([0.0, 0.0, -1.0], (n_inf, 1))]
    return np.concatenate(parts, axis=0)


def majorana_constellation(psi, zero_tol: float = ZERO_COEFF_TOL, merge_tol: float = MERGE_TOL) -> Constellation:
    """Majorana constellation of a spin state given in the ``m = s..-s`` basis."""
    return Constellation.from_stars(majorana_stars(psi, zero_tol), merge_tol)


def polynomial_from_stars(stars, twice_s: int) -> np.ndarray:
    """Monic-up-to-scale coefficients rebuilt from stars (inverse map, for checks)."""
    coef = np.array([1.0 + 0j])
    for v in np.asarray(stars, dtype=float):
        if v[2] < -1 + 1e-12:
            continue  # south pole: degree deficit
        z = complex(v[0], v[1]) / (1 + v[2])
        coef = np.convolve(coef, [-z, 1.0])
    out = np.zeros(twice_s + 1, dtype=complex)
    out[: coef.size] = coef
    return out


# ----------------------------------------------------------------------------
# Pluecker embedding and induced rotation action
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class PluckerVector:
    s: SpinQuantum
    k: int
    components: np.ndarray

    @property
    def subsets(self) -> List[Tuple[int, ...]]:
        return wedge_basis(self.s.dim, self.k)


@lru_cache(maxsize=32)
def _wedge_basis(n: int, k: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(n), k))


def wedge_basis(n: int, k: int) -> List[Tuple[int, ...]]:
    """Row-index subsets ``i_1 < ... < i_k`` (i.e. ``m_1 > ... > m_k``)."""
    return list(_wedge_basis(n, k))


def plucker_coordinates(p: KPlane) -> PluckerVector:
    """Normalized ``k x k`` minors of the frame, one per row subset."""
    subsets = np.array(_wedge_basis(p.dim, p.k))
    minors = np.linalg.det(p.frame[subsets])
    minors = minors / np.linalg.norm(minors)
    return PluckerVector(p.s, p.k, minors)


@lru_cache(maxsize=16)
def _induced(twice_s: int, k: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    ops = spin_operators(SpinQuantum(twice_s))
    n = twice_s + 1
    basis = _wedge_basis(n, k)
    index = {b: i for i, b in enumerate(basis)}
    out = []
    for op in (ops.sx, ops.sy, ops.sz):
        big = np.zeros((len(basis), len(basis)), dtype=complex)
        for col, subset in enumerate(basis):
            members = set(subset)
            for r, i in enumerate(subset):
                for j in np.nonzero(op[:, i])[0]:
                    j = int(j)
                    if j != i and j in members:
                        continue
                    new = subset[:r] + (j,) + subset[r + 1 :]
                    between = sum(1 for x in subset if min(i, j) < x < max(i, j))
                    target = tuple(sorted(new))
                    big[index[target], col] += (-1) ** between * op[j, i]
        big.setflags(write=False)
        out.append(big)
    return tuple(out)


def induced_spin_operators(s, k: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rotation generators acting on the k-th exterior power (Leibniz rule)."""
    s = as_spin(s)
    if not 1 <= k <= s.dim:
        raise DomainError(f"k must lie in [1, {s.dim}]")
    return _induced(s.twice_s, int(k))


def casimir_multiplicities(s, k: int) -> dict:
    """``{j: number of spin-j multiplets}`` in the k-th exterior power."""
    sx, sy, sz = induced_spin_operators(s, k)
    cas = sx @ sx + sy @ sy + sz @ sz
    ev = np.linalg.eigvalsh(cas)
    js = np.round((-1 + np.sqrt(1 + 4 * np.clip(ev, 0, None))) / 2 * 2) / 2
    out = {}
    for j in sorted(set(js.tolist()), reverse=True):
        count = int(np.sum(js == j))
        out[float(j)] = count // int(round(2 * j + 1))
    return out


@dataclass(frozen=True)
class Multiplet:
    j: float
    basis: np.ndarray  # columns |j, m> for m = j..-j in the wedge space


def _fix_phase(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    i = int(np.nonzero(mags > mags.max() * (1 - 1e-9))[0][0])
    return v * (abs(v[i]) / v[i])


@lru_cache(maxsize=16)
def _multiplet_bases(twice_s: int, k: int) -> Tuple[Multiplet, ...]:
    sx, sy, sz = _induced(twice_s, k)
    splus = sx + 1j * sy
    sminus = sx - 1j * sy
    weights = np.real(np.diag(sz))
    top = weights.max()
    result = []
    j = top
    while j >= -1e-9:
        cols = np.nonzero(np.abs(weights - j) < 1e-9)[0]
        if cols.size:
            sub = splus[:, cols]
            _, sv, vh = np.linalg.svd(sub)
            rank = int(np.sum(sv > 1e-9 * max(1.0, sv.max() if sv.size else 1.0)))
            null = vh[rank:].conj().T  # (len(cols), n_j)
            n_j = null.shape[1]
            if n_j:
                proj = null @ null.conj().T
                chosen: List[np.ndarray] = []
                for c in range(cols.size):
                    v = proj[:, c].copy()
                    for w in chosen:
                        v -= w * (w.conj() @ v)
                    nv = np.linalg.norm(v)
                    if 1e-8 < nv < 1e-4:
                        raise DegeneracyError(f"ambiguous highest-weight tie-break for j={j}")
                    if nv >= 1e-4:
                        chosen.append(_fix_phase(v / nv))
                    if len(chosen) == n_j:
                        break
                if len(chosen) != n_j:
                    raise DegeneracyError(f"could not resolve {n_j} spin-{j} highest-weight vectors")
                for hw in chosen:
                    vec = np.zeros(len(weights), dtype=complex)
                    vec[cols] = hw
                    basis = [vec]
                    m = j
                    while m > -j + 1e-9:
                        nxt = sminus @ basis[-1] / math.sqrt(j * (j + 1) - m * (m - 1))
                        basis.append(nxt)
                        m -= 1
                    result.append(Multiplet(float(j), np.array(basis).T))
        j -= 1
    return tuple(result)


def multiplet_bases(s, k: int) -> List[Multiplet]:
    """Canonical ``|j, m>`` bases of every multiplet, ordered by decreasing ``j``.

    Each multiplet is generated by lowering a highest-weight vector; when a
    spin value occurs more than once, the highest-weight vectors are obtained
    by Gram-Schmidt on the columns of the (basis-independent) projector onto
    the highest-weight space, taken in wedge-basis order.
    """
    s = as_spin(s)
    return list(_multiplet_bases(s.twice_s, int(k)))


def multiplet_decomposition(v: Union[PluckerVector, KPlane]) -> List[Tuple[float, np.ndarray]]:
    """Components ``<j, m|v>`` of each multiplet, ``m = j..-j``."""
    if isinstance(v, KPlane):
        v = plucker_coordinates(v)
    return [(mu.j, mu.basis.conj().T @ v.components) for mu in multiplet_bases(v.s, v.k)]


@dataclass(frozen=True)
class MultiConstellation:
    multiplets: List[Tuple[float, complex, Optional[Constellation]]]
    spectator: Constellation

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w, _ in self.multiplets])

    @property
    def principal(self) -> Optional[Tuple[float, complex, Constellation]]:
        """Highest-spin multiplet with non-zero weight."""
        for entry in self.multiplets:
            if entry[2] is not None:
                return entry
        return None


def _first_nonzero_phase(c: np.ndarray, tol: float) -> complex:
    i = int(np.nonzero(np.abs(c) > tol)[0][0])
    return c[i] / abs(c[i])


def multiconstellation(p: KPlane, weight_tol: float = 1e-9) -> MultiConstellation:
    """Weighted constellations of each multiplet plus the spectator constellation.

    Weight of a multiplet: norm of its component times the phase of its first
    non-negligible entry; the weight vector is then rescaled so that its own
    first non-zero entry is real positive. The spectator is the constellation of the weight
    vector read as a spin ``(n - 1)/2`` state, ``n`` the number of multiplets.
    """
    parts = multiplet_decomposition(plucker_coordinates(p))
    entries = []
    for j, comp in parts:
        norm = float(np.linalg.norm(comp))
        if norm < weight_tol:
            entries.append((j, 0j, None))
            continue
        phase = _first_nonzero_phase(comp, weight_tol)
        cst = majorana_constellation(comp / (norm * phase)) if j > 0 else Constellation(np.zeros((0, 3)), [])
        entries.append((j, complex(norm * phase), cst))
    weights = np.array([w for _, w, _ in entries])
    # the Pluecker vector is only defined up to phase; so is the weight vector
    lead = _first_nonzero_phase(weights, weight_tol)
    weights = weights / lead
    entries = [(j, complex(w), c) for (j, _, c), w in zip(entries, weights)]
    if weights.size > 1:
        spectator = majorana_constellation(weights)
    else:
        spectator = Constellation(np.zeros((0, 3)), [])
    return MultiConstellation(entries, spectator)


# ----------------------------------------------------------------------------
# symmetry search
# ----------------------------------------------------------------------------


def check_congruence(c1: Constellation, c2: Constellation, R: Rotation, tol: float = 1e-7) -> bool:
    """``R`` maps ``c1`` onto ``c2`` as multisets (optimal assignment)."""
    a = R.apply(c1.expanded())
    b = c2.expanded()
    if a.shape != b.shape:
        return False
    if a.shape[0] == 0:
        return True
    cost = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    rows, cols = linear_sum_assignment(cost)
    return bool(cost[rows, cols].max() < tol)


def _frame(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    e1 = a / np.linalg.norm(a)
    e2 = b - e1 * (e1 @ b)
    e2 /= np.linalg.norm(e2)
    return np.column_stack([e1, e2, np.cross(e1, e2)])


def symmetry_candidates(c: Constellation, tol: float = 1e-7) -> Union[List[Rotation], ContinuousAxis]:
    """Rotations mapping the constellation onto itself.

    A reference pair of non-collinear stars is mapped to every other star pair
    with matching multiplicities and opening angle; each candidate is then
    validated with :func:`check_congruence`. Constellations whose stars are
    all on one axis return :class:`ContinuousAxis` instead.
    """
    pts, mult = c.points, c.multiplicities
    if c.count > MAX_SEARCH_STARS:
        raise DomainError(f"symmetry search limited to {MAX_SEARCH_STARS} stars")
    if len(pts) == 0:
        raise DomainError("empty constellation")
    # reference star from the rarest multiplicity class keeps the candidate list short
    counts = {int(m): int(np.sum(mult == m)) for m in mult}
    ia = min(range(len(pts)), key=lambda i: (counts[int(mult[i])], i))
    axis = pts[ia]
    off_axis = [i for i in range(len(pts)) if np.linalg.norm(np.cross(axis, pts[i])) > 1e-6]
    if not off_axis:
        return ContinuousAxis(axis.copy())
    ib = off_axis[0]
    ref_angle = float(pts[ia] @ pts[ib])
    ref = _frame(pts[ia], pts[ib])
    found: List[Rotation] = []
    for i in range(len(pts)):
        if mult[i] != mult[ia]:
            continue
        for j in range(len(pts)):
            if j == i or mult[j] != mult[ib] or abs(float(pts[i] @ pts[j]) - ref_angle) > 1e-6:
                continue
            mat = _frame(pts[i], pts[j]) @ ref.T
            R = Rotation.from_matrix(mat)
            if any(R.same_as(g, 1e-6) for g in found):
                continue
            if check_congruence(c, c, R, tol):
                found.append(R)
    return found


def plane_symmetries(p: KPlane, tol: float = 1e-8) -> Union[List[Rotation], ContinuousAxis]:
    """Rotation symmetries of a plane found from its multiconstellation.

    Candidates come from the first non-degenerate multiplet constellation and
    are kept only if they map the plane to itself.
    """
    mc = multiconstellation(p)
    cands = None
    for _, _, cst in mc.multiplets:
        if cst is None or cst.count == 0:
            continue
        res = symmetry_candidates(cst)
        if isinstance(res, ContinuousAxis):
            if cands is None:
                cands = res
            continue
        cands = res
        break
    if cands is None:
        cands = ContinuousAxis(np.array([0.0, 0.0, 1.0]))
    if isinstance(cands, ContinuousAxis):
        # a generic angle about the axis decides whether the plane shares the symmetry
        ok = is_symmetry_rotation(p, Rotation.about(cands.axis, 1.0), tol)[0]
        return cands if ok else []
    return [R for R in cands if is_symmetry_rotation(p, R, tol)[0]]

"""su(2) representation data: spin matrices, rotations, Clebsch-Gordan
coefficients and polarization tensors.

Basis convention used everywhere in the package: the column index ``i``
corresponds to ``m = s - i``, i.e. kets are written ``(psi_s, psi_{s-1}, ...,
psi_{-s})``. Phases follow Condon-Shortley.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

import numpy as np
from scipy.spatial.transform import Rotation as _SciRotation

from .errors import DomainError, RefinementRequiredError

__all__ = [
    "SpinQuantum",
    "SpinOperators",
    "Rotation",
    "RotationCurve",
    "PolarizationTensor",
    "as_spin",
    "spin_operators",
    "wigner_D",
    "wigner_D_from_su2",
    "su2_from_vector",
    "vector_from_su2",
    "clebsch_gordan",
    "polarization_tensor",
    "polarization_tensors",
    "lift_along_curve",
]

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class SpinQuantum:
    """Spin quantum number stored as ``twice_s`` so half-integers are exact."""

    twice_s: int

    def __post_init__(self):
        if int(self.twice_s) != self.twice_s or self.twice_s < 0:
            raise DomainError(f"twice_s must be a non-negative integer, got {self.twice_s}")
        object.__setattr__(self, "twice_s", int(self.twice_s))

    @property
    def s(self) -> float:
        return self.twice_s / 2

    @property
    def dim(self) -> int:
        return self.twice_s + 1

    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers in basis order ``s, s-1, ..., -s``."""
        return self.s - np.arange(self.dim)

    def __repr__(self):
        return f"SpinQuantum({Fraction(self.twice_s, 2)})"


def as_spin(s: Union[SpinQuantum, Number]) -> SpinQuantum:
    """Accept a ``SpinQuantum`` or a (half-)integer spin value."""
    if isinstance(s, SpinQuantum):
        return s
    tw = Fraction(s) * 2
    if tw.denominator != 1:
        raise DomainError(f"spin must be a half-integer, got {s}")
    return SpinQuantum(int(tw))


def _twice(x: Number) -> int:
    tw = 2 * x
    r = round(tw)
    if abs(tw - r) > 1e-9:
        raise DomainError(f"{x} is not a half-integer")
    return int(r)


@dataclass(frozen=True)
class SpinOperators:
    s: SpinQuantum
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray

    @property
    def splus(self) -> np.ndarray:
        return self.sx + 1j * self.sy

    @property
    def sminus(self) -> np.ndarray:
        return self.sx - 1j * self.sy

    def as_array(self) -> np.ndarray:
        """Stack ``(S_x, S_y, S_z)`` into shape ``(3, N, N)``."""
        return np.stack([self.sx, self.sy, self.sz])

    def dot(self, v) -> np.ndarray:
        """``v . S`` for a real 3-vector (or a batch of shape ``(..., 3)``)."""
        return np.tensordot(np.asarray(v, dtype=float), self.as_array(), axes=([-1], [0]))


@lru_cache(maxsize=64)
def _spin_operators(twice_s: int) -> SpinOperators:
    sq = SpinQuantum(twice_s)
    s = sq.s
    m = sq.m_values()
    n = sq.dim
    sp = np.zeros((n, n))
    # (S_+)_{m+1, m}: row i-1 <-> m+1, column i <-> m
    for i in range(1, n):
        sp[i - 1, i] = math.sqrt(s * (s + 1) - m[i] * (m[i] + 1))
    sx = (sp + sp.T) / 2
    sy = (sp - sp.T) / 2j
    sz = np.diag(m)
    ops = SpinOperators(sq, sx.astype(complex), sy.astype(complex), sz.astype(complex))
    for a in (ops.sx, ops.sy, ops.sz):
        a.setflags(write=False)
    return ops


def spin_operators(s) -> SpinOperators:
    """Spin matrices ``S_x, S_y, S_z`` (hbar = 1) for spin ``s``.

    Example:
        >>> ops = spin_operators(0.5)
        >>> ops.sz.real
        array([[ 0.5,  0. ],
               [ 0. , -0.5]])
    """
    return _spin_operators(as_spin(s).twice_s)


# ----------------------------------------------------------------------------
# rotations
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Rotation:
    """SO(3) rotation in axis-angle form; ``|axis_angle| <= pi``.

    ``wigner_D`` of a ``Rotation`` uses the canonical lift ``exp(-i m.S)`` with
    this representative. At ``|m| = pi`` the vectors ``m`` and ``-m`` are the
    same rotation but lift to opposite SU(2) elements; curves keep track of the
    lift, single rotations do not.
    """

    axis_angle: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        v = np.asarray(self.axis_angle, dtype=float).reshape(3)
        ang = np.linalg.norm(v)
        if ang > np.pi + 1e-12:
            v = _canonical_rotvec(v)
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "axis_angle", v)

    @classmethod
    def about(cls, axis, angle: float) -> "Rotation":
        axis = np.asarray(axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        return cls(_canonical_rotvec(axis * angle))

    @classmethod
    def identity(cls) -> "Rotation":
        return cls(np.zeros(3))

    @classmethod
    def from_matrix(cls, mat) -> "Rotation":
        return cls(_SciRotation.from_matrix(np.asarray(mat, dtype=float)).as_rotvec())

    @property
    def angle(self) -> float:
        return float(np.linalg.norm(self.axis_angle))

    def matrix(self) -> np.ndarray:
        return _SciRotation.from_rotvec(np.array(self.axis_angle)).as_matrix()

    def inverse(self) -> "Rotation":
        return Rotation(-self.axis_angle)

    def compose(self, other: "Rotation") -> "Rotation":
        """Rotation ``self * other`` (apply ``other`` first)."""
        return Rotation.from_matrix(self.matrix() @ other.matrix())

    def apply(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.matrix().T

    def su2(self) -> np.ndarray:
        return su2_from_vector(self.axis_angle)

    def same_as(self, other: "Rotation", tol: float = 1e-8) -> bool:
        """Equality as SO(3) elements."""
        return bool(np.max(np.abs(self.matrix() - other.matrix())) < tol)

    def __repr__(self):
        return f"Rotation({np.array2string(self.axis_angle, precision=6)})"


def _canonical_rotvec(v: np.ndarray) -> np.ndarray:
    ang = float(np.linalg.norm(v))
    if ang == 0.0:
        return np.zeros(3)
    axis = v / ang
    ang = math.remainder(ang, 2 * np.pi)  # in [-pi, pi]
    if ang < 0:
        axis, ang = -axis, -ang
    return axis * ang


_PAULI = np.array(
    [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex
)


def su2_from_vector(v) -> np.ndarray:
    """``exp(-i v.sigma/2)`` for one vector or a batch of shape ``(..., 3)``."""
    v = np.asarray(v, dtype=float)
    theta = np.linalg.norm(v, axis=-1)
    c = np.cos(theta / 2)
    # sin(theta/2)/theta without the 0/0
    k = 0.5 * np.sinc(theta / (2 * np.pi))
    gen = np.tensordot(v, _PAULI, axes=([-1], [0]))
    return c[..., None, None] * np.eye(2) - 1j * k[..., None, None] * gen


def vector_from_su2(u) -> np.ndarray:
    """Inverse of :func:`su2_from_vector` with rotation angle in ``[0, 2 pi]``.

    ``-I`` maps to ``(0, 0, 2 pi)``; any axis would do there.
    """
    u = np.asarray(u, dtype=complex)
    a = 0.5 * (u[..., 0, 0] + u[..., 1, 1]).real
    bz = -u[..., 0, 0].imag
    bx = -u[..., 1, 0].imag
    by = u[..., 1, 0].real
    b = np.stack([bx, by, bz], axis=-1)
    nb = np.linalg.norm(b, axis=-1)
    half = np.arctan2(nb, a)
    theta = 2 * half
    with np.errstate(invalid="ignore", divide="ignore"):
        axis = np.where(nb[..., None] > 0, b / np.where(nb > 0, nb, 1)[..., None], 0.0)
    axis = np.where((nb[..., None] == 0) & (a[..., None] < 0), np.array([0.0, 0.0, 1.0]), axis)
    return axis * theta[..., None]


def wigner_D(s, R) -> np.ndarray:
    """Spin-``s`` rotation matrix ``exp(-i m.S)``.

    ``R`` is a :class:`Rotation` or a raw 3-vector ``m``; a raw vector is not
    canonicalized, so ``|m| = 2 pi`` about ``z`` gives ``-I`` for half-integer
    ``s``. Batches of vectors with shape ``(..., 3)`` are accepted.
    """
    ops = spin_operators(s)
    m = R.axis_angle if isinstance(R, Rotation) else np.asarray(R, dtype=float)
    h = ops.dot(m)
    w, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(-1j * w)[..., None, :]) @ np.swapaxes(vecs.conj(), -1, -2)


def wigner_D_from_su2(s, u) -> np.ndarray:
    """Spin-``s`` representative of SU(2) element(s) ``u`` of shape ``(..., 2, 2)``.

    Uses the symmetric-power (polynomial) form of the representation, so no
    axis-angle extraction or diagonalization is needed: with ``|s, m>`` read
    as ``x^(s+m) y^(s-m) / sqrt((s+m)! (s-m)!)`` and ``u`` acting linearly
    on ``(x, y)``.
    """
    sq = as_spin(s)
    u = np.asarray(u, dtype=complex)
    batch = u.shape[:-2]
    u = u.reshape(-1, 2, 2)
    coef, e00, e10, e01, e11, scatter = _cayley_klein_terms(sq.twice_s)
    n = sq.dim
    pw = np.ones((4, u.shape[0], sq.twice_s + 1), dtype=complex)
    for idx, entry in enumerate((u[:, 0, 0], u[:, 1, 0], u[:, 0, 1], u[:, 1, 1])):
        for e in range(1, sq.twice_s + 1):
            pw[idx, :, e] = pw[idx, :, e - 1] * entry
    terms = pw[0][:, e00] * pw[1][:, e10] * pw[2][:, e01] * pw[3][:, e11] * coef
    return (terms @ scatter).reshape(batch + (n, n))


@lru_cache(maxsize=32)
def _cayley_klein_terms(twice_s: int):
    # D[m', m] = sqrt((j+m')!(j-m')!/((j+m)!(j-m)!))
    #            * sum_p C(j+m, p) C(j-m, q) u00^p u10^(j+m-p) u01^q u11^(j-m-q),  q = j+m'-p
    n = twice_s + 1
    coef, e00, e10, e01, e11, target = [], [], [], [], [], []
    for r in range(n):  # row <-> m', j+m' = twice_s - r
        jp_mp = twice_s - r
        for c in range(n):
            jp_m = twice_s - c
            jm_m = c
            norm = math.sqrt(_fact(jp_mp) * _fact(twice_s - jp_mp) / (_fact(jp_m) * _fact(jm_m)))
            for pp in range(0, jp_m + 1):
                q = jp_mp - pp
                if q < 0 or q > jm_m:
                    continue
                coef.append(norm * math.comb(jp_m, pp) * math.comb(jm_m, q))
                e00.append(pp)
                e10.append(jp_m - pp)
                e01.append(q)
                e11.append(jm_m - q)
                target.append(r * n + c)
    scatter = np.zeros((len(coef), n * n))
    scatter[np.arange(len(coef)), target] = 1.0
    return (np.array(coef), np.array(e00), np.array(e10), np.array(e01), np.array(e11), scatter)


# ----------------------------------------------------------------------------
# Clebsch-Gordan and polarization tensors
# ----------------------------------------------------------------------------


def _fact(n: int) -> int:
    return math.factorial(n)


@lru_cache(maxsize=None)
def _cg_twice(j1: int, j2: int, j: int, m1: int, m2: int, m: int) -> float:
    # all arguments doubled
    for jj, mm in ((j1, m1), (j2, m2), (j, m)):
        if jj < 0 or abs(mm) > jj or (jj - mm) % 2:
            raise DomainError("inconsistent (j, m) pair")
    if m1 + m2 != m:
        raise DomainError("m != m1 + m2")
    if not (abs(j1 - j2) <= j <= j1 + j2) or (j1 + j2 + j) % 2:
        raise DomainError("triangle condition violated")
    h = lambda x: x // 2  # noqa: E731  (exact: parities checked above)
    pre = Fraction(
        (j + 1) * _fact(h(j + j1 - j2)) * _fact(h(j - j1 + j2)) * _fact(h(j1 + j2 - j)),
        _fact(h(j1 + j2 + j) + 1),
    )
    pre *= (
        _fact(h(j + m)) * _fact(h(j - m)) * _fact(h(j1 - m1)) * _fact(h(j1 + m1))
        * _fact(h(j2 - m2)) * _fact(h(j2 + m2))
    )
    total = Fraction(0)
    for k in range(0, h(j1 + j2 - j) + 1):
        args = (
            h(j1 + j2 - j) - k,
            h(j1 - m1) - k,
            h(j2 + m2) - k,
            h(j - j2 + m1) + k,
            h(j - j1 - m2) + k,
        )
        if min(args) < 0:
            continue
        den = _fact(k)
        for a in args:
            den *= _fact(a)
        total += Fraction((-1) ** k, den)
    if total == 0:
        return 0.0
    return math.copysign(math.sqrt(pre * total * total), total)


def clebsch_gordan(j1, j2, j, m1, m2, m) -> float:
    """``<j1 m1; j2 m2 | j m>`` in the Condon-Shortley convention.

    Racah's sum is evaluated in exact rational arithmetic and only the final
    square root is taken in floating point.
    """
    return _cg_twice(*(_twice(x) for x in (j1, j2, j, m1, m2, m)))


@dataclass(frozen=True)
class PolarizationTensor:
    s: SpinQuantum
    ell: int
    m: int
    matrix: np.ndarray


@lru_cache(maxsize=512)
def _polarization_matrix(twice_s: int, ell: int, m: int) -> np.ndarray:
    sq = SpinQuantum(twice_s)
    n = sq.dim
    mat = np.zeros((n, n), dtype=complex)
    norm = math.sqrt((2 * ell + 1) / n)
    for r in range(n):
        tmr = twice_s - 2 * r  # 2 m'
        for c in range(n):
            tmc = twice_s - 2 * c  # 2 m''
            if tmc + 2 * m != tmr:
                continue
            mat[r, c] = norm * _cg_twice(twice_s, 2 * ell, twice_s, tmc, 2 * m, tmr)
    mat.setflags(write=False)
    return mat


def polarization_tensor(s, ell: int, m: int) -> PolarizationTensor:
    """Trace-orthonormal spin-``s`` polarization tensor ``T_{ell m}``."""
    sq = as_spin(s)
    if not (0 <= ell <= sq.twice_s) or abs(m) > ell or int(ell) != ell or int(m) != m:
        raise DomainError(f"need 0 <= ell <= 2s and |m| <= ell, got ell={ell}, m={m}")
    return PolarizationTensor(sq, int(ell), int(m), _polarization_matrix(sq.twice_s, int(ell), int(m)))


def polarization_tensors(s, ell: int) -> np.ndarray:
    """All ``T_{ell m}`` for ``m = ell, ..., -ell`` stacked as ``(2 ell + 1, N, N)``."""
    return np.stack([polarization_tensor(s, ell, m).matrix for m in range(ell, -ell - 1, -1)])


# ----------------------------------------------------------------------------
# rotation curves
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class RotationCurve:
    """Sampled path ``t -> R(t)`` together with its continuous SU(2) lift.

    ``spinors[i]`` is the lift of ``R(ts[i])``; the lift is what determines the
    spin-``s`` matrices, the SO(3) samples are derived from it.
    """

    ts: np.ndarray
    spinors: np.ndarray
    # maps sample times to spinors; lets the curve be re-sampled
    source: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        ts = np.asarray(self.ts, dtype=float)
        sp = np.asarray(self.spinors, dtype=complex)
        if ts.ndim != 1 or sp.shape != (ts.size, 2, 2):
            raise ValueError("ts must be 1-d and spinors of shape (len(ts), 2, 2)")
        if ts.size < 2 or np.any(np.diff(ts) <= 0):
            raise ValueError("need at least two strictly increasing sample times")
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "spinors", sp)

    @classmethod
    def from_generator(cls, ts, vectors) -> "RotationCurve":
        """Curve ``exp(-i v(t).sigma/2)`` from a continuous vector path ``v(t)``.

        ``v`` is unrestricted in length, so it may wind past ``pi``.
        """
        return cls(ts, su2_from_vector(vectors))

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], steps: int, t_end: float = 1.0) -> "RotationCurve":
        """Sample ``func(ts) -> spinors`` on ``steps`` uniform points of ``[0, t_end]``."""
        ts = np.linspace(0.0, t_end, steps)
        return cls(ts, func(ts), source=func)

    def resample(self, steps: int) -> "RotationCurve":
        if self.source is None:
            raise ValueError("curve has no source function; cannot re-sample")
        return RotationCurve.from_function(self.source, steps, self.ts[-1])

    @classmethod
    def from_axis_angles(cls, ts, axis_angles) -> "RotationCurve":
        """Lift canonical axis-angle samples by continuity, starting at ``+I``."""
        ts = np.asarray(ts, dtype=float)
        raw = su2_from_vector(np.asarray(axis_angles, dtype=float))
        if np.max(np.abs(raw[0] - np.eye(2))) > 1e-9 and np.max(np.abs(raw[0] + np.eye(2))) > 1e-9:
            raise ValueError("curve must start at the identity rotation")
        out = np.empty_like(raw)
        out[0] = np.eye(2)
        for i in range(1, len(raw)):
            c = 0.5 * np.trace(out[i - 1].conj().T @ raw[i]).real
            if abs(c) < _HALF_COS:
                raise RefinementRequiredError(
                    f"rotation between samples {i - 1} and {i} is too large to pick a branch"
                )
            out[i] = raw[i] if c > 0 else -raw[i]
        return cls(ts, out)

    @property
    def axis_angles(self) -> np.ndarray:
        """Canonical axis-angle representatives, ``|m| <= pi``."""
        return np.array([_canonical_rotvec(v) for v in vector_from_su2(self.spinors)])

    def rotation(self, i: int) -> Rotation:
        return Rotation(vector_from_su2(self.spinors[i]))

    @property
    def start(self) -> Rotation:
        return self.rotation(0)

    @property
    def end(self) -> Rotation:
        return self.rotation(-1)

    def __len__(self):
        return self.ts.size


# cos(pi/4): SU(2) half-angle threshold for a rotation step of pi/2
_HALF_COS = math.cos(math.pi / 4)


def lift_along_curve(s, curve: RotationCurve) -> np.ndarray:
    """Spin-``s`` matrices along ``curve``, shape ``(len(curve), N, N)``.

    The curve must start at the identity. Consecutive spinors are required to
    differ by a rotation of less than ``pi/2`` so that the branch is
    unambiguous.
    """
    u = curve.spinors
    if np.max(np.abs(u[0] - np.eye(2))) > 1e-9:
        raise ValueError("curve must start at the identity (lift fixed by R~_0 = I)")
    steps = 0.5 * np.einsum("nji,nji->n", u[:-1].conj(), u[1:]).real
    bad = np.nonzero(steps < _HALF_COS)[0]
    if bad.size:
        raise RefinementRequiredError(
            f"rotation step >= pi/2 between samples {bad[0]} and {bad[0] + 1}; refine the curve"
        )
    return wigner_D_from_su2(s, u)

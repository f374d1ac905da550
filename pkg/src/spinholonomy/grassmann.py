"""Spin-s k-planes: construction, principal-angle distance, rotation and
anticoherence / symmetry checks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import DegenerateInputError, DomainError
from .spin_core import (
    Rotation,
    SpinQuantum,
    as_spin,
    polarization_tensors,
    spin_operators,
    wigner_D,
)

ANTICOHERENCE_TOL = 1e-9
PLANE_TOL = 1e-8
RANK_TOL = 1e-10


@dataclass(frozen=True)
class KPlane:
    """A point of Gr(k, N) stored as an orthonormal ``N x k`` frame."""

    s: SpinQuantum
    frame: np.ndarray

    def __post_init__(self):
        s = as_spin(self.s)
        frame = np.asarray(self.frame, dtype=complex)
        if frame.ndim == 1:
            frame = frame[:, None]
        if frame.shape[0] != s.dim or not 1 <= frame.shape[1] <= s.dim:
            raise DomainError(f"frame of shape {frame.shape} does not fit spin {s}")
        defect = np.max(np.abs(frame.conj().T @ frame - np.eye(frame.shape[1])))
        if defect > 1e-10:
            raise DomainError(f"frame columns are not orthonormal (defect {defect:.2e})")
        frame = frame.copy()
        frame.setflags(write=False)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "frame", frame)

    @property
    def k(self) -> int:
        return self.frame.shape[1]

    @property
    def dim(self) -> int:
        return self.frame.shape[0]

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.conj().T

    def with_basis(self, b: np.ndarray) -> "KPlane":
        """Same plane, frame right-multiplied by the unitary ``b``."""
        return KPlane(self.s, self.frame @ b)


@dataclass(frozen=True)
class AnticoherenceReport:
    order: int
    residuals: dict  # ell -> max |<psi_i|T_{ell m}|psi_j>|
    tol: float

    @property
    def is_anticoherent(self) -> bool:
        return self.order >= 1


def orthonormalize(vectors: np.ndarray) -> np.ndarray:
    """Order-preserving Gram-Schmidt (via QR) of the columns of ``vectors``.

    Column ``j`` of the result spans the same flag as the first ``j + 1``
    inputs; phases are chosen so already-orthonormal input comes back as is.
    """
    a = np.asarray(vectors, dtype=complex)
    if np.max(np.abs(a.conj().T @ a - np.eye(a.shape[1]))) < 1e-14:
        return a.copy()
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[-1] < RANK_TOL * max(1.0, sv[0]):
        raise DegenerateInputError(f"input vectors are rank deficient (smallest singular value {sv[-1]:.2e})")
    q, r = np.linalg.qr(a)
    d = np.diag(r)
    return q * (d / np.abs(d))[None, :]


def plane_from_kets(s, kets: Sequence) -> KPlane:
    """Plane spanned by ``kets`` (each a length-N sequence)."""
    s = as_spin(s)
    a = np.array([np.asarray(k, dtype=complex) for k in kets]).T
    if a.ndim != 2 or a.shape[0] != s.dim:
        raise DegenerateInputError(f"kets must have length {s.dim}")
    return KPlane(s, orthonormalize(a))


def principal_angles(a: KPlane, b: KPlane) -> np.ndarray:
    sv = np.linalg.svd(a.frame.conj().T @ b.frame, compute_uv=False)
    return np.arccos(np.clip(sv, 0.0, 1.0))[::-1]


def plane_distance(a: KPlane, b: KPlane) -> float:
    """Largest principal angle between two planes of equal dimension.

    Small angles are recovered from the sine (projector difference) rather
    than ``arccos`` of a singular value close to 1, which would lose half the
    digits.
    """
    if a.s != b.s or a.k != b.k:
        raise DomainError("planes must share spin and dimension")
    sv = np.linalg.svd(a.frame.conj().T @ b.frame, compute_uv=False)
    smin = float(np.clip(sv.min(), 0.0, 1.0))
    if smin < 0.9:
        return float(np.arccos(smin))
    # sin of the largest angle = spectral norm of (1 - P_a) P_b restricted to b
    resid = b.frame - a.frame @ (a.frame.conj().T @ b.frame)
    sin_max = np.linalg.norm(resid, 2)
    return float(np.arcsin(min(sin_max, 1.0)))


def rotate_plane(p: KPlane, R) -> KPlane:
    """Apply a rotation to the plane's frame.

    ``R`` may be a :class:`Rotation`, an axis-angle 3-vector, or an already
    lifted ``N x N`` unitary.
    """
    if isinstance(R, Rotation):
        d = wigner_D(p.s, R)
    else:
        arr = np.asarray(R)
        d = wigner_D(p.s, arr) if arr.shape == (3,) else arr
    return KPlane(p.s, d @ p.frame)


def anticoherence(p: KPlane, t_max: int = 1, tol: float = ANTICOHERENCE_TOL) -> AnticoherenceReport:
    """Largest ``t <= t_max`` with all ``<psi_i|T_{ell m}|psi_j>`` below ``tol`` for ``ell <= t``."""
    if t_max > p.s.twice_s:
        raise DomainError(f"t_max={t_max} exceeds 2s={p.s.twice_s}")
    residuals = {}
    order = 0
    broken = False
    f = p.frame
    for ell in range(1, t_max + 1):
        ts = polarization_tensors(p.s, ell)
        block = np.einsum("ai,mab,bj->mij", f.conj(), ts, f)
        residuals[ell] = float(np.max(np.abs(block)))
        if not broken and residuals[ell] < tol:
            order = ell
        else:
            broken = True
    return AnticoherenceReport(order, residuals, tol)


def spin_expectation_block(p: KPlane) -> np.ndarray:
    """``<psi_i|S_a|psi_j>`` with shape ``(3, k, k)``."""
    ops = spin_operators(p.s).as_array()
    return np.einsum("ai,xab,bj->xij", p.frame.conj(), ops, p.frame)


def is_symmetry_rotation(p: KPlane, R, tol: float = PLANE_TOL) -> Tuple[bool, float]:
    """Whether ``R`` maps the plane onto itself; also returns the residual angle."""
    d = plane_distance(p, rotate_plane(p, R))
    return d < tol, d

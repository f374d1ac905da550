"""Wilczek-Zee holonomy of sampled curves of k-planes.

A curve is given as frame samples ``phi(t_i)`` (``N x k``, orthonormal). The
holonomy is ``U = P F^{-1}`` with ``P`` the polar part of the endpoint overlap
``Q = phi(0)^dag phi(T)`` and ``F`` the path-ordered exponential of the
connection ``A = phi^dag dphi/dt``, later times multiplying on the right.

Derivatives come from local Lagrange interpolation of the frame samples
(seven-point stencils at sample points, eight-point stencils at quadrature
nodes); ``F`` is integrated with the fourth-order two-point Gauss-Legendre
Magnus step. A second-order midpoint rule is available for comparison.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateOverlapError, DomainError, RefinementRequiredError
from .grassmann import KPlane
from .spin_core import RotationCurve, lift_along_curve

OVERLAP_TOL = 1e-10
NODE_STENCIL = 7
GAUSS_STENCIL = 8
_GAUSS = np.array([0.5 - np.sqrt(3) / 6, 0.5 + np.sqrt(3) / 6])


@dataclass(frozen=True)
class FrameCurve:
    """Frame samples ``frames[i]`` at increasing times ``ts[i]``."""

    ts: np.ndarray
    frames: np.ndarray
    step_bound: Optional[float] = None

    def __post_init__(self):
        ts = np.asarray(self.ts, dtype=float)
        frames = np.asarray(self.frames, dtype=complex)
        if frames.ndim == 2:
            frames = frames[:, :, None]
        if ts.ndim != 1 or frames.ndim != 3 or frames.shape[0] != ts.size:
            raise DomainError("frames must have shape (len(ts), N, k)")
        if ts.size < 2 or np.any(np.diff(ts) <= 0):
            raise DomainError("need at least two strictly increasing sample times")
        k = frames.shape[2]
        gram = np.einsum("tai,taj->tij", frames.conj(), frames)
        defect = np.max(np.abs(gram - np.eye(k)))
        if defect > 1e-10:
            raise DomainError(f"frames are not orthonormal (defect {defect:.2e})")
        if self.step_bound is not None:
            jump = np.max(np.linalg.norm(np.diff(frames, axis=0), axis=(1, 2)))
            if jump > self.step_bound:
                raise RefinementRequiredError(f"frame jump {jump:.3g} exceeds bound {self.step_bound}")
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "frames", frames)

    @property
    def n(self) -> int:
        return self.ts.size

    @property
    def dim(self) -> int:
        return self.frames.shape[1]

    @property
    def k(self) -> int:
        return self.frames.shape[2]


@dataclass(frozen=True)
class Holonomy:
    u: np.ndarray
    q: np.ndarray
    f: np.ndarray
    p: np.ndarray
    diagnostics: dict = field(default_factory=dict)


def frame_curve_from_rotations(p: KPlane, curve: RotationCurve, steps: Optional[int] = None) -> FrameCurve:
    """Frames ``D(R(t_i)) . p.frame`` along the continuous lift of ``curve``.

    If ``steps`` is given and differs from the curve's sample count the curve
    is re-sampled from its source function.
    """
    if steps is not None and steps != len(curve):
        curve = curve.resample(steps)
    d = lift_along_curve(p.s, curve)
    return FrameCurve(curve.ts, d @ p.frame)


# ----------------------------------------------------------------------------
# interpolation stencils
# ----------------------------------------------------------------------------


def _stencil_index(centers: np.ndarray, width: int, n: int) -> np.ndarray:
    """Index windows of ``width`` samples starting near ``centers``, clipped to range."""
    width = min(width, n)
    start = np.clip(centers, 0, n - width)
    return start[:, None] + np.arange(width)[None, :]


def _weights_off_node(nodes: np.ndarray, x: np.ndarray):
    """Value and first-derivative Lagrange weights at points ``x`` that are not nodes."""
    diff = x[:, None] - nodes  # (M, m)
    den = nodes[:, :, None] - nodes[:, None, :]  # x_j - x_l
    m = nodes.shape[1]
    eye = np.eye(m, dtype=bool)
    den = np.where(eye, 1.0, den)
    ratio = np.where(eye, 1.0, diff[:, None, :] / den)
    w0 = np.prod(ratio, axis=2)
    inv = np.where(eye, 0.0, 1.0 / np.where(eye, 1.0, diff[:, None, :]))
    w1 = w0 * inv.sum(axis=2)
    return w0, w1


def _derivative_weights_at_node(nodes: np.ndarray, pos: np.ndarray) -> np.ndarray:
    """Row ``pos`` of the differentiation matrix on each node set."""
    m = nodes.shape[1]
    den = nodes[:, :, None] - nodes[:, None, :]
    eye = np.eye(m, dtype=bool)
    bary = 1.0 / np.prod(np.where(eye, 1.0, den), axis=2)  # (M, m)
    rows = np.arange(nodes.shape[0])
    xi = nodes[rows, pos]
    with np.errstate(divide="ignore"):
        w = (bary / bary[rows, pos][:, None]) / (xi[:, None] - nodes)
    w[rows, pos] = 0.0
    w[rows, pos] = -w.sum(axis=1)
    return w


def _adjoint(a: np.ndarray) -> np.ndarray:
    return np.swapaxes(a.conj(), -1, -2)


def _combine(w: np.ndarray, frames: np.ndarray) -> np.ndarray:
    """``sum_m w[t, m] frames[t, m]`` for stacked stencils."""
    t, m, n, k = frames.shape
    return (w[:, None, :].astype(complex) @ frames.reshape(t, m, n * k)).reshape(t, n, k)


def _antihermitian(a: np.ndarray):
    ah = 0.5 * (a - np.swapaxes(a.conj(), -1, -2))
    herm = a - ah
    return ah, herm


def connection_samples(fc: FrameCurve):
    """Connection at every sample point, plus its discarded Hermitian part."""
    n = fc.n
    idx = _stencil_index(np.arange(n) - NODE_STENCIL // 2, NODE_STENCIL, n)
    nodes = fc.ts[idx]
    pos = np.arange(n) - idx[:, 0]
    w = _derivative_weights_at_node(nodes, pos)
    dphi = _combine(w, fc.frames[idx])
    raw = _adjoint(fc.frames) @ dphi
    return _antihermitian(raw)


def wz_connection(fc: FrameCurve, i: int) -> np.ndarray:
    """Anti-Hermitian connection ``A_ij = <phi_i|d phi_j/dt>`` at sample ``i``."""
    n = fc.n
    i = int(np.arange(n)[i])
    idx = _stencil_index(np.array([i - NODE_STENCIL // 2]), NODE_STENCIL, n)
    w = _derivative_weights_at_node(fc.ts[idx], np.array([i - idx[0, 0]]))
    dphi = np.einsum("m,mak->ak", w[0], fc.frames[idx[0]])
    return _antihermitian(fc.frames[i].conj().T @ dphi)[0]


def _quadrature_connection(fc: FrameCurve, points: np.ndarray):
    """Connection at fractional positions ``points`` inside each interval.

    Returns an array of shape ``(n - 1, len(points), k, k)`` and the largest
    Hermitian defect seen.
    """
    n = fc.n
    h = np.diff(fc.ts)
    out = []
    herm_max = 0.0
    idx = _stencil_index(np.arange(n - 1) - (GAUSS_STENCIL // 2 - 1), GAUSS_STENCIL, n)
    nodes = fc.ts[idx]
    stencil_frames = fc.frames[idx]
    for c in points:
        x = fc.ts[:-1] + c * h
        w0, w1 = _weights_off_node(nodes, x)
        phi = _combine(w0, stencil_frames)
        dphi = _combine(w1, stencil_frames)
        raw = _adjoint(phi) @ dphi
        ah, herm = _antihermitian(raw)
        herm_max = max(herm_max, float(np.max(np.abs(herm))))
        out.append(ah)
    return np.stack(out, axis=1), herm_max


def _expm_antihermitian(x: np.ndarray) -> np.ndarray:
    """Batched ``exp`` of anti-Hermitian matrices via ``eigh`` of ``i x``."""
    w, v = np.linalg.eigh(1j * x)
    return (v * np.exp(-1j * w)[..., None, :]) @ np.swapaxes(v.conj(), -1, -2)


def step_generators(fc: FrameCurve, method: str = "magnus4"):
    """Per-interval exponents ``Omega_i`` with ``F = prod_i exp(Omega_i)``."""
    h = np.diff(fc.ts)[:, None, None]
    if method == "magnus4":
        a, herm = _quadrature_connection(fc, _GAUSS)
        a1, a2 = a[:, 0], a[:, 1]
        comm = a1 @ a2 - a2 @ a1
        omega = 0.5 * h * (a1 + a2) + (np.sqrt(3) / 12) * h**2 * comm
    elif method == "midpoint":
        a, herm = _quadrature_connection(fc, np.array([0.5]))
        omega = h * a[:, 0]
    else:
        raise ValueError(f"unknown method {method!r}")
    return omega, herm


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    # earlier factors on the left, pairwise reduction for accuracy
    while mats.shape[0] > 1:
        if mats.shape[0] % 2:
            last = mats[-1:]
            mats = np.concatenate([mats[:-2:2] @ mats[1:-1:2], last])
        else:
            mats = mats[0::2] @ mats[1::2]
    return mats[0]


def path_ordered_exponential(fc: FrameCurve, method: str = "magnus4") -> np.ndarray:
    """``F = Pexp(int A dt)`` with later times acting on the right."""
    omega, _ = step_generators(fc, method)
    return _ordered_product(_expm_antihermitian(omega))


def overlap_matrix(fc: FrameCurve) -> np.ndarray:
    return fc.frames[0].conj().T @ fc.frames[-1]


def polar_part(q: np.ndarray, tol: float = OVERLAP_TOL) -> np.ndarray:
    """Unitary factor ``W V^dag`` of the SVD ``q = W D V^dag``."""
    w, d, vh = np.linalg.svd(np.asarray(q, dtype=complex))
    if d.min() < tol:
        raise DegenerateOverlapError(
            f"overlap matrix is singular (smallest singular value {d.min():.2e}); holonomy undefined"
        )
    return w @ vh


def _holonomy_core(fc: FrameCurve, method: str):
    q = overlap_matrix(fc)
    omega, herm = step_generators(fc, method)
    f = _ordered_product(_expm_antihermitian(omega))
    p = polar_part(q)
    return q, f, p, p @ f.conj().T, herm


def wz_holonomy(fc: FrameCurve, method: str = "magnus4", richardson: bool = True) -> Holonomy:
    """Holonomy ``U = P F^{-1}`` of an open or closed frame curve.

    Diagnostics: ``max_connection_norm`` (spectral norm of ``A`` over the
    samples), ``max_hermitian_part`` (discarded part of the raw finite-difference
    connection), ``min_overlap_sv``, ``f_unitarity_defect``, ``steps`` and, when
    ``richardson`` is set and the sample count allows, ``discretization_estimate``
    from re-running on every second sample.
    """
    q, f, p, u, herm = _holonomy_core(fc, method)
    a_nodes, herm_nodes = connection_samples(fc)
    diag = {
        "max_connection_norm": float(np.max(np.linalg.norm(a_nodes, ord=2, axis=(1, 2)))),
        "max_hermitian_part": max(herm, float(np.max(np.abs(herm_nodes)))),
        "min_overlap_sv": float(np.linalg.svd(q, compute_uv=False).min()),
        "f_unitarity_defect": float(np.max(np.abs(f.conj().T @ f - np.eye(fc.k)))),
        "steps": fc.n - 1,
        "method": method,
    }
    if richardson and fc.n >= 2 * GAUSS_STENCIL + 1 and fc.n % 2 == 1:
        coarse = FrameCurve(fc.ts[::2], fc.frames[::2])
        u_coarse = _holonomy_core(coarse, method)[3]
        order = 4 if method == "magnus4" else 2
        diag["discretization_estimate"] = float(np.max(np.abs(u - u_coarse))) / (2**order - 1)
    return Holonomy(u=u, q=q, f=f, p=p, diagnostics=diag)


def abelian_geometric_phase(fc: FrameCurve) -> float:
    """Geometric phase ``arg<psi(0)|psi(T)> + i int <psi|d psi/dt> dt`` in ``(-pi, pi]``.

    The dynamical integral uses the same quadrature as :func:`wz_holonomy`.
    """
    if fc.k != 1:
        raise DomainError("abelian phase needs a curve of rays (k = 1)")
    q = overlap_matrix(fc)[0, 0]
    if abs(q) < OVERLAP_TOL:
        raise DegenerateOverlapError("endpoint states are orthogonal")
    a, _ = _quadrature_connection(fc, _GAUSS)
    h = np.diff(fc.ts)
    integral = np.sum(0.5 * h * (a[:, 0, 0, 0] + a[:, 1, 0, 0]))
    phase = np.angle(q) + (1j * integral).real
    return float(np.angle(np.exp(1j * phase)))


def parallel_transport_oracle(fc: FrameCurve, tol: float = OVERLAP_TOL) -> np.ndarray:
    """Holonomy by explicit step-by-step parallel transport.

    The transported frame is projected onto each next plane and made
    orthonormal again through the polar part of its overlap with that plane's
    frame. No connection or exponential is involved.
    """
    w = fc.frames[0]
    for i in range(1, fc.n):
        nxt = fc.frames[i]
        m = nxt.conj().T @ w
        wl, d, vh = np.linalg.svd(m)
        if d.min() < tol:
            raise RefinementRequiredError(f"transport step {i} is degenerate; refine the curve")
        w = nxt @ (wl @ vh)
    return polar_part(fc.frames[0].conj().T @ w)


"""Catalog of anticoherent planes and gate curves, gate extraction, and the
endpoint-fixing perturbation harness."""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .grassmann import KPlane, is_symmetry_rotation, plane_from_kets
from .holonomy import Holonomy, frame_curve_from_rotations, wz_holonomy
from .spin_core import Rotation, RotationCurve, SpinQuantum, su2_from_vector

DEFAULT_STEPS = 2001
MAX_STEPS = 32001
REFINE_TOL = 1e-9
SWEEP_REFINE_TOL = 1e-8


def decode_complex(pairs) -> np.ndarray:
    """``[[re, im], ...]`` (any nesting) to a complex array."""
    a = np.asarray(pairs, dtype=float)
    return a[..., 0] + 1j * a[..., 1]


def encode_complex(values) -> list:
    a = np.asarray(values, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


@dataclass(frozen=True)
class ReferenceCurve:
    name: str
    axis: np.ndarray
    angle: float
    expected: np.ndarray
    source: str


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str  # "plane" or "state"
    s: SpinQuantum
    kets: np.ndarray  # (k, N)
    source: str
    symmetries: List[Rotation] = field(default_factory=list)
    curves: List[ReferenceCurve] = field(default_factory=list)
    closed_form: List[str] = field(default_factory=list)
    basis_change: Optional[np.ndarray] = None
    basis_change_from: Optional[str] = None

    @property
    def plane(self) -> KPlane:
        return plane_from_kets(self.s, self.kets)

    @property
    def state(self) -> np.ndarray:
        if self.kind != "state":
            raise ValueError(f"{self.name} is a {self.kind}, not a state")
        return self.kets[0]

    def curve(self, name: str) -> ReferenceCurve:
        for c in self.curves:
            if c.name == name:
                return c
        raise KeyError(name)


def _entry_from_json(d: dict) -> CatalogEntry:
    return CatalogEntry(
        name=d["name"],
        kind=d["kind"],
        s=SpinQuantum(d["twice_s"]),
        kets=decode_complex(d["kets"]),
        source=d["source"],
        symmetries=[Rotation(sym["axis_angle"]) for sym in d.get("symmetries", [])],
        curves=[
            ReferenceCurve(c["name"], np.asarray(c["axis"], float), float(c["angle"]),
                           decode_complex(c["expected"]), c["source"])
            for c in d.get("curves", [])
        ],
        closed_form=list(d.get("closed_form", [])),
        basis_change=decode_complex(d["basis_change"]) if "basis_change" in d else None,
        basis_change_from=d.get("basis_change_from"),
    )


@lru_cache(maxsize=1)
def _load_catalog() -> Tuple[CatalogEntry, ...]:
    text = resources.files("spinholonomy").joinpath("data/catalog.json").read_text()
    return tuple(_entry_from_json(d) for d in json.loads(text)["entries"])


def catalog() -> List[CatalogEntry]:
    """Planes, states and reference curves shipped in ``data/catalog.json``."""
    return list(_load_catalog())


def catalog_entry(name: str) -> CatalogEntry:
    for e in _load_catalog():
        if e.name == name:
            return e
    raise KeyError(f"no catalog entry {name!r}")


GATE_CURVES = {"not": "pi_not", "cnot1": "pi_cnot", "cnot2": "pi_cnot"}


def gate_setup(name: str) -> Tuple[CatalogEntry, ReferenceCurve]:
    """Catalog plane and reference curve of one of the demo gates."""
    if name not in GATE_CURVES:
        raise KeyError(f"unknown gate {name!r}; choose from {sorted(GATE_CURVES)}")
    entry = catalog_entry(GATE_CURVES[name])
    return entry, entry.curve(name)


# ----------------------------------------------------------------------------
# curves
# ----------------------------------------------------------------------------


def rotation_curve(axis, angle: float, steps: int = DEFAULT_STEPS) -> RotationCurve:
    """``R(t)`` = rotation about ``axis`` by ``angle * t``, ``t`` in ``[0, 1]``."""
    axis = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(axis)
    if abs(norm - 1) > 1e-12:
        raise ValueError("axis must be a unit vector")
    gen = axis * float(angle)

    def source(ts):
        return su2_from_vector(np.outer(ts, gen))

    return RotationCurve.from_function(source, steps)


@dataclass(frozen=True)
class PerturbedCurve(RotationCurve):
    """Rotation curve ``R_eps(t) R(t)`` with ``eps`` vanishing at both ends."""

    base: Optional[RotationCurve] = field(default=None, compare=False, repr=False)
    coefficients: Optional[np.ndarray] = field(default=None, compare=False)
    seed: Optional[int] = None


def _bump(ts: np.ndarray, coefficients: np.ndarray, t_end: float) -> np.ndarray:
    modes = np.arange(1, coefficients.shape[0] + 1)
    eps = np.sin(np.pi * np.outer(ts / t_end, modes)) @ coefficients
    # sin(n pi) is not exactly zero in floating point
    eps[(ts == 0.0) | (ts == t_end)] = 0.0
    return eps


def perturb_curve(base: RotationCurve, amplitude: float, n_modes: int = 3, seed: int = 0) -> PerturbedCurve:
    """Endpoint-fixing deformation of ``base``.

    ``eps(t) = sum_n a_n sin(n pi t / T)`` with random directions and
    ``|a_n|`` uniform in ``[0, amplitude]``; the amplitude need not be small.
    """
    if amplitude < 0:
        raise ValueError("amplitude must be non-negative")
    if base.source is None:
        raise ValueError("base curve needs a source function")
    rng = np.random.default_rng(seed)
    dirs = rng.normal(size=(n_modes, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    coeffs = dirs * (amplitude * rng.uniform(0.0, 1.0, size=(n_modes, 1)))
    t_end = float(base.ts[-1])
    base_source = base.source

    def source(ts):
        return su2_from_vector(_bump(ts, coeffs, t_end)) @ base_source(ts)

    ts = base.ts
    return PerturbedCurve(ts, source(ts), source=source, base=base, coefficients=coeffs, seed=seed)


def _smoothstep(x: np.ndarray) -> np.ndarray:
    """C-infinity step from 0 to 1 on [0, 1], flat to all orders at both ends."""
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        g = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1 - x, 1.0)), 0.0)
    return f / (f + g)


def concatenate_curves(first: RotationCurve, second: RotationCurve, steps: int = DEFAULT_STEPS) -> RotationCurve:
    """Run ``first`` then ``second`` (composed after ``first``'s endpoint) on ``[0, 1]``.

    Each half is reparametrized with a flat smooth step, so the joined lift is
    smooth at the junction.
    """
    f_src, s_src = first.source, second.source
    if f_src is None or s_src is None:
        raise ValueError("curves need source functions")
    t1, t2 = float(first.ts[-1]), float(second.ts[-1])
    u_mid = f_src(np.array([t1]))[0]

    def source(ts):
        ts = np.asarray(ts, dtype=float)
        out = np.empty((ts.size, 2, 2), dtype=complex)
        lo = ts <= 0.5
        out[lo] = f_src(t1 * _smoothstep(2 * ts[lo]))
        out[~lo] = s_src(t2 * _smoothstep(2 * ts[~lo] - 1)) @ u_mid
        return out

    return RotationCurve.from_function(source, steps)


# ----------------------------------------------------------------------------
# gates
# ----------------------------------------------------------------------------


def extract_gate(
    p: KPlane,
    curve: RotationCurve,
    steps: Optional[int] = None,
    refine: bool = True,
    tol: float = REFINE_TOL,
    richardson: bool = True,
) -> Holonomy:
    """Holonomy of ``p`` carried along ``curve``.

    ``diagnostics["closed"]`` records whether the endpoint is a symmetry of
    the plane; if not, the result is an open-curve holonomy. With ``refine``
    the sampling is doubled while the discretization diagnostics exceed
    ``tol`` (only possible for curves that carry a source function).
    """
    fc = frame_curve_from_rotations(p, curve, steps)
    hol = wz_holonomy(fc, richardson=richardson)
    n = fc.n
    while refine and curve.source is not None and n < MAX_STEPS and _needs_refinement(hol, tol):
        n = 2 * n - 1
        hol = wz_holonomy(frame_curve_from_rotations(p, curve, n), richardson=richardson)
    closed, resid = is_symmetry_rotation(p, curve.end)
    hol.diagnostics["closed"] = bool(closed)
    hol.diagnostics["endpoint_plane_distance"] = resid
    return hol


def _needs_refinement(hol: Holonomy, tol: float) -> bool:
    d = hol.diagnostics
    return (
        d["max_hermitian_part"] > tol
        or d["f_unitarity_defect"] > tol
        or d.get("discretization_estimate", 0.0) > tol
    )


def compare_gate(u, target, mode: str = "exact", tol: float = 1e-8) -> Tuple[bool, float]:
    """Max-abs distance between gates, optionally minimized over a global phase."""
    u = np.asarray(u, dtype=complex)
    target = np.asarray(target, dtype=complex)
    if u.shape != target.shape:
        raise ValueError("gate shapes differ")
    if mode == "exact":
        dist = float(np.max(np.abs(u - target)))
    elif mode in ("phase", "up-to-global-phase"):
        phi = np.angle(np.trace(target.conj().T @ u))
        dist = float(np.max(np.abs(u - np.exp(1j * phi) * target)))
    else:
        raise ValueError(f"unknown comparison mode {mode!r}")
    return dist < tol, dist


# ----------------------------------------------------------------------------
# invariance harness
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    seed: int
    amplitude: float
    deviation: float
    steps: int


def invariance_sweep(
    gate: str,
    seeds: Iterable[int],
    amplitudes: Iterable[float],
    n_modes: int = 3,
    steps: int = DEFAULT_STEPS,
    workers: int = 1,
    refine_tol: float = SWEEP_REFINE_TOL,
) -> List[SweepRecord]:
    """Deviation of perturbed-curve holonomies from the unperturbed gate.

    Each perturbed curve is refined until its discretization diagnostics
    fall below ``refine_tol``. Records come back sorted by
    ``(seed, amplitude)`` whatever the worker count.
    """
    entry, ref = gate_setup(gate)
    plane = entry.plane
    base = rotation_curve(ref.axis, ref.angle, steps)
    reference = extract_gate(plane, base, refine=False).u

    def run(job):
        seed, amp = job
        curve = perturb_curve(base, amp, n_modes, seed)
        hol = extract_gate(plane, curve, refine=True, tol=refine_tol, richardson=False)
        return SweepRecord(seed, amp, float(np.max(np.abs(hol.u - reference))), hol.diagnostics["steps"])

    jobs = [(int(s), float(a)) for s in seeds for a in amplitudes]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(run, jobs))
    else:
        out = [run(j) for j in jobs]
    return sorted(out, key=lambda r: (r.seed, r.amplitude))


def expected_gate(gate: str) -> np.ndarray:
    return gate_setup(gate)[1].expected


def symmetry_table(entry: CatalogEntry, tol: float = 1e-8) -> Dict[str, float]:
    """Plane distance after each documented symmetry rotation."""
    return {repr(R): is_symmetry_rotation(entry.plane, R, tol)[1] for R in entry.symmetries}

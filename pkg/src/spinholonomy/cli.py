"""Command-line interface.

Subcommands ``demo``, ``audit``, ``constellation`` and ``invariance`` print
a JSON run report to stdout. Exit codes: 0 success/PASS, 1 computed FAIL,
2 usage or parse error, 3 data error (bad dimensions, rank-deficient kets,
degenerate overlaps).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegeneracyError, DegenerateInputError, DegenerateOverlapError, DomainError
from .gates_lab import (
    DEFAULT_STEPS,
    GATE_CURVES,
    compare_gate,
    decode_complex,
    encode_complex,
    extract_gate,
    gate_setup,
    invariance_sweep,
    rotation_curve,
)
from .grassmann import ANTICOHERENCE_TOL, KPlane, anticoherence, plane_from_kets
from .spin_core import SpinQuantum
from .stellar import ContinuousAxis, majorana_constellation, multiconstellation, plane_symmetries

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3
SCHEMA = "spinholonomy.report/1"

DATA_ERRORS = (DomainError, DegenerateInputError, DegeneracyError, DegenerateOverlapError)


class UsageError(Exception):
    """Bad command line or unreadable input file (exit 2)."""


class DataError(Exception):
    """Input parsed but describes invalid data (exit 3)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ----------------------------------------------------------------------------
# files
# ----------------------------------------------------------------------------


def _read_json(path: str):
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(raw), raw
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _decode_ket(ket, n: int, where: str) -> np.ndarray:
    try:
        arr = np.asarray(ket, dtype=float)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{where}: entries must be [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise UsageError(f"{where}: entries must be [re, im] pairs")
    if arr.shape[0] != n:
        raise DataError(f"{where}: length {arr.shape[0]} does not match N = twice_s + 1 = {n}")
    return decode_complex(arr)


def load_input(path: str) -> Tuple[dict, bytes]:
    """Parse a plane file, or a state file (``ket`` key or ``kind: "state"``).

    Returns ``({"name", "kind", "s", "kets"}, raw_bytes)``.
    """
    d, raw = _read_json(path)
    if not isinstance(d, dict):
        raise UsageError("top level must be a JSON object")
    twice_s = d.get("twice_s")
    if not isinstance(twice_s, int) or isinstance(twice_s, bool):
        raise UsageError("twice_s must be an integer")
    if twice_s < 0:
        raise DataError("twice_s must be non-negative")
    s = SpinQuantum(twice_s)
    if "ket" in d:
        kets_raw, kind = [d["ket"]], "state"
    elif "kets" in d:
        kets_raw = d["kets"]
        kind = "state" if d.get("kind") == "state" else "plane"
    else:
        raise UsageError("file needs 'kets' (plane) or 'ket' (state)")
    if not isinstance(kets_raw, list) or not kets_raw:
        raise UsageError("kets must be a non-empty list")
    if kind == "state" and len(kets_raw) != 1:
        raise UsageError("a state file holds exactly one ket")
    kets = np.array([_decode_ket(k, s.dim, f"ket {i}") for i, k in enumerate(kets_raw)])
    name = d.get("name")
    return {"name": name if isinstance(name, str) else None, "kind": kind, "s": s, "kets": kets}, raw


def plane_file_dict(s: SpinQuantum, kets, name: Optional[str] = None) -> dict:
    """Plane-file JSON for the given kets (rows)."""
    out = {"twice_s": s.twice_s, "kets": [encode_complex(k) for k in np.atleast_2d(kets)]}
    if name is not None:
        out["name"] = name
    return out


def _pair(w) -> list:
    # adding 0.0 turns -0.0 into 0.0
    return [float(np.real(w)) + 0.0, float(np.imag(w)) + 0.0]


def star_file_dict(multiplets: List[Tuple[float, complex, object]], spectator) -> dict:
    entries = []
    for j, w, cst in multiplets:
        entries.append({
            "j": float(j),
            "weight": _pair(w),
            "stars": cst.to_json() if cst is not None else [],
        })
    return {"multiplets": entries, "spectator": spectator.to_json() if spectator is not None else []}


def _dumps(obj) -> str:
    # repr-based floats round-trip exactly; key order is fixed by construction
    return json.dumps(obj, indent=1, allow_nan=False) + "\n"


# ----------------------------------------------------------------------------
# report
# ----------------------------------------------------------------------------


def _digest(command: str, args: dict, files: Sequence[bytes]) -> str:
    h = hashlib.sha256()
    h.update(json.dumps({"command": command, "args": args}, sort_keys=True).encode())
    for raw in files:
        h.update(hashlib.sha256(raw).digest())
    return h.hexdigest()


def _report(command: str, args: dict, files: Sequence[bytes], outputs: dict, diagnostics: dict,
            verdicts: dict) -> dict:
    ok = all(v["pass"] for v in verdicts.values())
    return {
        "schema": SCHEMA,
        "command": command,
        "args": args,
        "inputs_digest": _digest(command, args, files),
        "outputs": outputs,
        "diagnostics": diagnostics,
        "verdicts": verdicts,
        "verdict": "PASS" if ok else "FAIL",
    }


def _verdict(value: float, tol: float, below: bool = True) -> dict:
    return {"value": float(value), "tol": float(tol), "pass": bool(value < tol) if below else bool(value >= tol)}


def _clean(diag: dict) -> dict:
    out = {}
    for k, v in diag.items():
        if isinstance(v, (bool, str)) or v is None:
            out[k] = v
        elif isinstance(v, (int, np.integer)):
            out[k] = int(v)
        else:
            out[k] = float(v)
    return out


def _symmetry_list(res) -> dict:
    if isinstance(res, ContinuousAxis):
        return {"continuous_axis": [float(x) for x in res.axis], "rotations": []}
    return {"continuous_axis": None, "rotations": [[float(x) for x in R.axis_angle] for R in res]}


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------


def cmd_demo(ns) -> Tuple[dict, int]:
    entry, ref = gate_setup(ns.name)
    plane = entry.plane
    curve = rotation_curve(ref.axis, ref.angle, ns.steps)
    hol = extract_gate(plane, curve, refine=False)
    _, dev = compare_gate(hol.u, ref.expected, "exact", ns.tol)
    ac = anticoherence(plane, 1, ANTICOHERENCE_TOL)
    args = {"name": ns.name, "steps": ns.steps, "tol": ns.tol, "seed": ns.seed}
    outputs = {
        "plane": entry.name,
        "curve": {"axis": ref.axis.tolist(), "angle": ref.angle},
        "holonomy": encode_complex(hol.u),
        "expected": encode_complex(ref.expected),
        "expected_source": ref.source,
        "overlap": encode_complex(hol.q),
        "path_ordered_exponential": encode_complex(hol.f),
        "max_abs_deviation": dev,
        "anticoherence_residuals": {str(k): v for k, v in ac.residuals.items()},
        "endpoint_plane_distance": hol.diagnostics["endpoint_plane_distance"],
    }
    verdicts = {
        "holonomy_matches_expected": _verdict(dev, ns.tol),
        "anticoherent": _verdict(ac.residuals[1], ANTICOHERENCE_TOL),
        "endpoint_is_symmetry": _verdict(hol.diagnostics["endpoint_plane_distance"], 1e-8),
    }
    rep = _report("demo", args, [], outputs, _clean(hol.diagnostics), verdicts)
    return rep, EXIT_PASS if rep["verdict"] == "PASS" else EXIT_FAIL


def _as_plane(inp: dict) -> KPlane:
    return plane_from_kets(inp["s"], inp["kets"])


def cmd_audit(ns) -> Tuple[dict, int]:
    inp, raw = load_input(ns.file)
    plane = _as_plane(inp)
    tmax = min(ns.tmax, plane.s.twice_s)
    ac = anticoherence(plane, tmax, ns.tol)
    mc = multiconstellation(plane)
    sym = plane_symmetries(plane)
    args = {"file": Path(ns.file).name, "tmax": ns.tmax, "tol": ns.tol, "seed": ns.seed}
    outputs = {
        "name": inp["name"],
        "twice_s": plane.s.twice_s,
        "k": plane.k,
        "anticoherence_order": ac.order,
        "anticoherence_residuals": {str(k): v for k, v in ac.residuals.items()},
        "multiplet_weights": [{"j": float(j), "weight": _pair(w)} for j, w, _ in mc.multiplets],
        "symmetries": _symmetry_list(sym),
    }
    # an audit reports findings; only a failed computation is an error
    rep = _report("audit", args, [raw], outputs, {"tmax_used": tmax}, {})
    return rep, EXIT_PASS


def cmd_constellation(ns) -> Tuple[dict, int]:
    inp, raw = load_input(ns.file)
    if inp["kind"] == "state":
        psi = inp["kets"][0]
        norm = float(np.linalg.norm(psi))
        if norm == 0.0:
            raise DataError("zero state vector")
        cst = majorana_constellation(psi / norm)
        stars = star_file_dict([(inp["s"].s, 1.0 + 0j, cst)], None)
    else:
        mc = multiconstellation(_as_plane(inp))
        stars = star_file_dict(mc.multiplets, mc.spectator)
    args = {"file": Path(ns.file).name, "out": ns.out is not None, "seed": ns.seed}
    if ns.out is not None:
        Path(ns.out).write_text(_dumps(stars))
    outputs = {"kind": inp["kind"], "name": inp["name"], "stars": stars}
    rep = _report("constellation", args, [raw], outputs, {}, {})
    return rep, EXIT_PASS


def cmd_invariance(ns) -> Tuple[dict, int]:
    seeds = range(ns.seed, ns.seed + ns.seeds)
    records = invariance_sweep(ns.name, seeds, ns.amplitude, n_modes=ns.modes, steps=ns.steps)
    worst = max((r.deviation for r in records), default=0.0)
    args = {"name": ns.name, "seeds": ns.seeds, "amplitude": list(ns.amplitude), "modes": ns.modes,
            "steps": ns.steps, "tol": ns.tol, "seed": ns.seed}
    outputs = {
        "table": [{"seed": r.seed, "amplitude": r.amplitude, "deviation": r.deviation} for r in records],
        "max_deviation": worst,
    }
    diagnostics = {"max_steps": max((r.steps for r in records), default=0), "jobs": len(records)}
    rep = _report("invariance", args, [], outputs, diagnostics, {"all_below_tol": _verdict(worst, ns.tol)})
    return rep, EXIT_PASS if rep["verdict"] == "PASS" else EXIT_FAIL


# ----------------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _steps(text: str) -> int:
    v = int(text)
    if v < 9:
        raise argparse.ArgumentTypeError("need at least 9 samples")
    return v


def _nonneg_float(text: str) -> float:
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base random seed (default 0)")
    common.add_argument("--out", default=None, help="write the primary artifact to this path")

    parser = _Parser(prog="spinholonomy", description="Holonomic gates from anticoherent spin planes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("demo", parents=[common], help="compute one of the catalog gates")
    p.add_argument("name", choices=sorted(GATE_CURVES))
    p.add_argument("--steps", type=_steps, default=DEFAULT_STEPS)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("audit", parents=[common], help="anticoherence and symmetries of a plane file")
    p.add_argument("file")
    p.add_argument("--tmax", type=_positive_int, default=1)
    p.add_argument("--tol", type=float, default=ANTICOHERENCE_TOL)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("constellation", parents=[common], help="export Majorana (multi)constellations")
    p.add_argument("file")
    p.set_defaults(func=cmd_constellation)

    p = sub.add_parser("invariance", parents=[common], help="perturbation sweep of a catalog gate")
    p.add_argument("name", choices=sorted(GATE_CURVES))
    p.add_argument("--seeds", type=_positive_int, default=10)
    p.add_argument("--amplitude", type=_nonneg_float, nargs="+", default=[1.0])
    p.add_argument("--modes", type=_positive_int, default=3)
    p.add_argument("--steps", type=_steps, default=DEFAULT_STEPS)
    p.add_argument("--tol", type=float, default=1e-7)
    p.set_defaults(func=cmd_invariance)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        report, code = ns.func(ns)
    except UsageError as exc:
        print(f"spinholonomy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, *DATA_ERRORS) as exc:
        print(f"spinholonomy: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    text = _dumps(report)
    if ns.out is not None and ns.command != "constellation":
        Path(ns.out).write_text(text)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Discretization study on the catalog gate curves.

For each curve and sample count, prints

* the largest connection norm from plain three-point central differences,
* the same from the package's seven-point stencils,
* the holonomy error of the midpoint rule and of the fourth-order Magnus step.

Usage: python3 scripts/convergence_study.py [--steps 51 101 201 401 1001 2001]
"""
import argparse
from dataclasses import dataclass
from typing import List

import numpy as np

from spinholonomy.gates_lab import gate_setup, rotation_curve
from spinholonomy.holonomy import connection_samples, frame_curve_from_rotations, wz_holonomy


@dataclass
class StudyConfig:
    gates: List[str]
    steps: List[int]


def central_difference_norm(fc) -> float:
    f = fc.frames
    h = fc.ts[1] - fc.ts[0]
    a = np.einsum("tai,taj->tij", f[1:-1].conj(), (f[2:] - f[:-2]) / (2 * h))
    return float(np.max(np.linalg.norm(a, ord=2, axis=(1, 2))))


def run(cfg: StudyConfig) -> None:
    print(f"{'gate':6} {'steps':>6} {'|A| 3-pt':>10} {'|A| 7-pt':>10} {'err mid':>10} {'err magnus':>10}")
    for gate in cfg.gates:
        entry, ref = gate_setup(gate)
        for n in cfg.steps:
            fc = frame_curve_from_rotations(entry.plane, rotation_curve(ref.axis, ref.angle, n))
            a, _ = connection_samples(fc)
            stencil = float(np.max(np.linalg.norm(a, ord=2, axis=(1, 2))))
            err_mid = np.max(np.abs(wz_holonomy(fc, "midpoint", richardson=False).u - ref.expected))
            err_mag = np.max(np.abs(wz_holonomy(fc, "magnus4", richardson=False).u - ref.expected))
            print(f"{gate:6} {n:6d} {central_difference_norm(fc):10.2e} {stencil:10.2e} {err_mid:10.2e} {err_mag:10.2e}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gates", nargs="+", default=["not", "cnot1", "cnot2"])
    ap.add_argument("--steps", nargs="+", type=int, default=[51, 101, 201, 401, 1001, 2001])
    ns = ap.parse_args()
    run(StudyConfig(ns.gates, ns.steps))


if __name__ == "__main__":
    main()

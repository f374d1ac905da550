"""Perturbation sweep over seeds and amplitudes for the catalog gates.

Writes a CSV table (gate, seed, amplitude, deviation, steps) and prints the
worst deviation per gate and amplitude.

Usage: python3 scripts/invariance_sweep.py --seeds 50 --amplitudes 0.5 1 1.5 2 --csv sweep.csv
"""
import argparse
import csv
import sys
import time
from dataclasses import dataclass, field
from typing import List

from spinholonomy.gates_lab import invariance_sweep


@dataclass
class SweepConfig:
    gates: List[str] = field(default_factory=lambda: ["not", "cnot1", "cnot2"])
    seeds: int = 50
    amplitudes: List[float] = field(default_factory=lambda: [0.5, 1.0, 1.5, 2.0])
    modes: int = 3
    steps: int = 2001
    tol: float = 1e-7


def run(cfg: SweepConfig, out=None) -> bool:
    writer = csv.writer(out) if out is not None else None
    if writer:
        writer.writerow(["gate", "seed", "amplitude", "deviation", "steps"])
    ok = True
    for gate in cfg.gates:
        t0 = time.perf_counter()
        records = invariance_sweep(gate, range(cfg.seeds), cfg.amplitudes, n_modes=cfg.modes, steps=cfg.steps)
        elapsed = time.perf_counter() - t0
        for r in records:
            if writer:
                writer.writerow([gate, r.seed, r.amplitude, repr(r.deviation), r.steps])
        for amp in cfg.amplitudes:
            worst = max(r.deviation for r in records if r.amplitude == amp)
            ok &= worst < cfg.tol
            print(f"{gate:6} amplitude {amp:4.2f}: max deviation {worst:.2e}")
        print(f"{gate:6} {len(records)} runs in {elapsed:.1f} s")
    return ok


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gates", nargs="+", default=["not", "cnot1", "cnot2"])
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--amplitudes", nargs="+", type=float, default=[0.5, 1.0, 1.5, 2.0])
    ap.add_argument("--modes", type=int, default=3)
    ap.add_argument("--steps", type=int, default=2001)
    ap.add_argument("--csv", default=None, help="write the full table here")
    ns = ap.parse_args()
    cfg = SweepConfig(ns.gates, ns.seeds, ns.amplitudes, ns.modes, ns.steps)
    if ns.csv:
        with open(ns.csv, "w", newline="") as fh:
            ok = run(cfg, fh)
    else:
        ok = run(cfg)
    print("all deviations below", cfg.tol if ok else "FAILED")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

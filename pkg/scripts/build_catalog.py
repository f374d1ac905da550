"""Regenerate src/spinholonomy/data/catalog.json from closed-form expressions.

Run from the repository root:

    python scripts/build_catalog.py
"""
import json
from pathlib import Path

import numpy as np

r2, r3, r5, r6 = np.sqrt(2), np.sqrt(3), np.sqrt(5), np.sqrt(6)
OUT = Path(__file__).resolve().parents[1] / "src" / "spinholonomy" / "data" / "catalog.json"


def c(v):
    return [[float(x.real), float(x.imag)] for x in np.asarray(v, dtype=complex).ravel()]


def mat(m):
    m = np.asarray(m, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def ket(twice_s, entries):
    v = np.zeros(twice_s + 1, dtype=complex)
    for m, amp in entries.items():
        v[(twice_s - int(2 * m)) // 2] = amp
    return v


psi1 = np.array([1, 0, 0, r2, 0]) / r3
psi2 = np.array([0, -r2, 0, 0, 1]) / r3
psi_a = np.array([1 / r2, -r3, 0, 1, r6 / 2]) / r6
psi_b = np.array([r6 / 2, 1, 0, r3, -1 / r2]) / r6
b = np.array([[0.5, r3 / 2], [r3 / 2, -0.5]])
sigma_x = np.array([[0, 1], [1, 0]])

chi = np.array([(r3 - 2 * r6) / 12, (r3 + r6) / 6, 1 / (2 * r2), (r3 - r6) / 6, (4 + r2) / (4 * r6)])

cnot_kets = [
    ket(10, {5: 0.5, 0: r2 * 1j / 2, -5: 0.5}),
    ket(10, {5: 0.5, 0: -r2 * 1j / 2, -5: 0.5}),
    ket(10, {3: r2 / r5, -2: r3 * 1j / r5}),
    ket(10, {2: r3 * 1j / r5, -3: r2 / r5}),
]
u1 = -np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
u2 = np.diag([1, 1, np.exp(4j * np.pi / 5), np.exp(-4j * np.pi / 5)])

catalog = {
    "schema": "spinholonomy.catalog/1",
    "entries": [
        {
            "name": "pi_not",
            "kind": "plane",
            "twice_s": 4,
            "kets": [c(psi1), c(psi2)],
            "closed_form": ["(1, 0, 0, sqrt2, 0)/sqrt3", "(0, -sqrt2, 0, 0, 1)/sqrt3"],
            "source": "published",
            "symmetries": [{"axis_angle": [0.0, float(np.pi), 0.0], "source": "published"}],
            "curves": [
                {
                    "name": "not",
                    "axis": [0.0, 1.0, 0.0],
                    "angle": float(np.pi),
                    "expected": mat(sigma_x),
                    "source": "published",
                }
            ],
        },
        {
            "name": "pi_not_alt",
            "kind": "plane",
            "twice_s": 4,
            "kets": [c(psi_a), c(psi_b)],
            "closed_form": [
                "(1/sqrt2, -sqrt3, 0, 1, sqrt6/2)/sqrt6",
                "(sqrt6/2, 1, 0, sqrt3, -1/sqrt2)/sqrt6",
            ],
            "source": "published",
            "basis_change_from": "pi_not",
            "basis_change": mat(b),
            "symmetries": [{"axis_angle": [0.0, float(np.pi), 0.0], "source": "published"}],
            "curves": [
                {
                    "name": "not",
                    "axis": [0.0, 1.0, 0.0],
                    "angle": float(np.pi),
                    "expected": mat(b.conj().T @ sigma_x @ b),
                    "source": "derived: B^dag sigma_x B",
                }
            ],
        },
        {
            "name": "pi_cnot",
            "kind": "plane",
            "twice_s": 10,
            "kets": [c(k) for k in cnot_kets],
            "closed_form": [
                "(|5,5> + sqrt2 i |5,0> + |5,-5>)/2",
                "(|5,5> - sqrt2 i |5,0> + |5,-5>)/2",
                "(sqrt2 |5,3> + sqrt3 i |5,-2>)/sqrt5",
                "(sqrt3 i |5,2> + sqrt2 |5,-3>)/sqrt5",
            ],
            "source": "published",
            "symmetries": [
                {"axis_angle": [float(np.pi), 0.0, 0.0], "source": "published"},
                {"axis_angle": [0.0, 0.0, float(2 * np.pi / 5)], "source": "published"},
            ],
            "curves": [
                {
                    "name": "cnot1",
                    "axis": [1.0, 0.0, 0.0],
                    "angle": float(np.pi),
                    "expected": mat(u1),
                    "source": "published",
                },
                {
                    "name": "cnot2",
                    "axis": [0.0, 0.0, 1.0],
                    "angle": float(2 * np.pi / 5),
                    "expected": mat(u2),
                    "source": "published",
                },
            ],
        },
        {
            "name": "chi",
            "kind": "state",
            "twice_s": 4,
            "kets": [c(chi)],
            "closed_form": [
                "((sqrt3 - 2 sqrt6)/12, (sqrt3 + sqrt6)/6, 1/(2 sqrt2), (sqrt3 - sqrt6)/6, (4 + sqrt2)/(4 sqrt6))"
            ],
            "source": "published",
            "symmetries": [{"axis_angle": [float(2 * np.pi / 3), 0.0, 0.0], "source": "published"}],
            "curves": [],
        },
    ],
}

if __name__ == "__main__":
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(catalog, indent=1) + "\n")
    print(f"wrote {OUT}")

"""Write the catalog planes and states as CLI input files.

Usage: python3 scripts/write_plane_files.py [outdir]   (default: ./planes)
"""
import json
import sys
from pathlib import Path

from spinholonomy.cli import plane_file_dict
from spinholonomy.gates_lab import catalog


def main() -> None:
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "planes")
    out.mkdir(parents=True, exist_ok=True)
    for entry in catalog():
        d = plane_file_dict(entry.s, entry.kets, entry.name)
        if entry.kind == "state":
            d["kind"] = "state"
        path = out / f"{entry.name}.json"
        path.write_text(json.dumps(d, indent=1) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()

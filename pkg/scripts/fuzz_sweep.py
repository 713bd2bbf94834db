#!/usr/bin/env python3
"""Fuzz the recollement machinery on random triangular matrix algebras.

Each instance draws small edge algebras and a random bimodule, builds the
recollement at both corner choices, and checks that the structural and
direct exactness verdicts agree, that the exactness consequences hold
objectwise, and that the four gluing laws pass their biconditional sweeps.
Instances whose universes outgrow the bound are recorded as skips.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from schurrec.census import fuzz_exactness_sweep, fuzz_theorem_sweep
from schurrec.storage import canonical_json


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=20260810)
    ap.add_argument("--char", type=int, default=2, choices=(2, 3, 5))
    ap.add_argument("--bound", type=int, default=3)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--laws", default="3.2,3.3,3.4,3.5")
    ap.add_argument("--out", help="write the combined JSON report here")
    args = ap.parse_args()

    exact = fuzz_exactness_sweep(args.count, args.seed, args.char, args.bound,
                                 workers=args.workers)
    laws = tuple(s for s in args.laws.split(",") if s)
    theorems = fuzz_theorem_sweep(args.count, args.seed + 10_000, laws,
                                  args.char, args.bound, workers=args.workers)
    print(f"exactness sweep: ok={exact['ok']} checked={exact['checked']} "
          f"skipped={exact['skipped']}")
    print(f"gluing sweep:    ok={theorems['ok']} checked={theorems['checked']} "
          f"skipped={theorems['skipped']} laws={list(laws)}")
    for entry in exact["instances"] + theorems["instances"]:
        if not entry.get("ok", True):
            print(f"  FAILURE at seed {entry['seed']}: {entry}")
    if args.out:
        Path(args.out).write_text(canonical_json(
            {"exactness": exact, "theorems": theorems}))
        print(f"report written to {args.out}")
    return 0 if exact["ok"] and theorems["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())

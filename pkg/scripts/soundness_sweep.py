"""Exhaustive soundness of the threshold-logic rules over grid measures.

Sweeps the acceptance lattices (three-element chain, four-element Boolean
algebra) across grid resolutions, printing instance counts and countermodel
totals; every total is expected to be zero.
"""

import time

from stonepair.lattice import boolean_algebra, chain
from stonepair.pl import check_soundness_grid


def main() -> None:
    lattices = [
        ("3-chain", chain(3, ["0", "d", "1"])),
        ("boolean-4", boolean_algebra(2)),
    ]
    for name, D in lattices:
        for k in (1, 2, 3, 4):
            start = time.perf_counter()
            report = check_soundness_grid(D, k)
            elapsed = time.perf_counter() - start
            counts = " ".join(
                f"{rule}={report.instance_counts[rule]}"
                for rule in sorted(report.instance_counts)
            )
            print(
                f"{name:<10s} k={k}  measures={report.measures_checked:3d}  "
                f"{counts}  countermodels={len(report.failures)}  ({elapsed:.2f}s)"
            )


if __name__ == "__main__":
    main()

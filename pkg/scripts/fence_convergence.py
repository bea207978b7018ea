"""Convergence of the alternating chain family, tagged versus collapsed.

Pairs the one-variable formula "maximal but not the maximum" and its negation
against the family of chains interleaved with chains-plus-isolated-point, and
prints both value sequences with their verdicts.  The negated formula is the
interesting one: the collapsed rational sequence converges to 1, but the
tagged sequence splits into an achieved limit 1^o on odd indices and a
strict-from-below limit 1^- on even indices.

Usage: python scripts/fence_convergence.py [horizon]
"""

import sys

from stonepair.fo import Not, maximal_not_maximum
from stonepair.gamma import format_gamma
from stonepair.pairing import FenceFamily, pairing_sequence


def show(label, report):
    print(f"{label}:")
    print("  index  count/total  value")
    for i, r in enumerate(report.results, start=1):
        print(f"  {i:5d}  {r.count:3d}/{r.total:<7d}  {format_gamma(r.gamma)}")
    print(f"  whole sequence: {report.verdict}")
    print(f"  odd subsequence: {report.odd}")
    print(f"  even subsequence: {report.even}")
    print(f"  verdict source: {'closed form' if report.exact else 'horizon heuristic'}")
    print()


def main() -> None:
    horizon = int(sys.argv[1]) if len(sys.argv) > 1 else 12
    psi = maximal_not_maximum()
    family = FenceFamily()
    print(f"formula: {psi}\n")
    show("psi", pairing_sequence(family, psi, horizon=horizon))
    show("!psi", pairing_sequence(family, Not(psi), horizon=horizon))


if __name__ == "__main__":
    main()

"""Full-scale sweep of the chain duality checks with timings.

Runs every check family at the bounds used by the acceptance suite:
adjunction up to n = 24, embedding preservation up to n, m = 8, derived
operation tables up to n = 12, floor/ceiling adjunctions up to n, m = 8, and
the projection cone on the resolution-10 grid up to n, m = 10.
"""

import time

from stonepair.chains import (
    ChainPoint,
    ceiling_map,
    check_adjunction,
    check_oplus_preserved,
    derive_partial_minus,
    derive_partial_plus,
    embed_point,
    find_ominus_counterexample,
    floor_map,
    project_gamma,
)
from stonepair.gamma import GammaGrid, format_gamma


def timed(label, fn):
    start = time.perf_counter()
    detail = fn()
    print(f"{label:<42s} {time.perf_counter() - start:6.2f}s  {detail}")


def adjunction():
    for n in range(1, 25):
        assert check_adjunction(n) is None
    return "n <= 24, all triples"


def oplus_preservation():
    for n in range(1, 9):
        for m in range(1, 9):
            assert check_oplus_preserved(n, m) is None
    return "n, m <= 8"


def ominus_witnesses():
    w = find_ominus_counterexample(2, 2)
    for n in range(1, 9):
        for m in (2, 3, 4):
            find_ominus_counterexample(n, m)
    return (
        f"witness at (2,2): ({w.u}, {w.v}) gives "
        f"{w.embedded_of_result} vs {w.result_of_embedded}"
    )


def derived_tables():
    for n in range(1, 13):
        derive_partial_minus(n)
        derive_partial_plus(n)
    return "n <= 12, cell-by-cell"


def floor_ceiling():
    for n in range(1, 9):
        for m in range(1, 9):
            for xa in range(n * m + 1):
                x = ChainPoint(n * m, xa)
                for ya in range(n + 1):
                    y = ChainPoint(n, ya)
                    assert (ceiling_map(n, m, x).a <= ya) == (xa <= embed_point(y, m).a)
                    assert (embed_point(y, m).a <= xa) == (ya <= floor_map(n, m, x).a)
    return "n, m <= 8"


def projection_cone():
    for x in GammaGrid(10).points:
        for n in range(1, 11):
            for m in range(1, 11):
                assert floor_map(n, m, project_gamma(x, n * m)) == project_gamma(x, n)
    sample = format_gamma(GammaGrid(10).points[5])
    return f"grid 10, n, m <= 10 (sample point {sample})"


def main() -> None:
    timed("adjunction of oplus and ominus", adjunction)
    timed("embeddings preserve oplus", oplus_preservation)
    timed("embeddings never preserve ominus", ominus_witnesses)
    timed("derived minus/plus tables match direct", derived_tables)
    timed("floor/ceiling adjoint triple", floor_ceiling)
    timed("projection cone over the grid", projection_cone)


if __name__ == "__main__":
    main()

"""Shared strategies and corpus generators for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

import hypothesis.strategies as st

from stonepair import fo, lattice
from stonepair.lattice import FiniteLattice
from stonepair.measure import ClassicalMeasure

BINARY_SIG = fo.Signature((("r", 2),))

rationals01 = st.fractions(min_value=Fraction(0), max_value=Fraction(1))


@st.composite
def gamma_values(draw):
    from stonepair import gamma

    q = draw(rationals01)
    if q == 0:
        return gamma.ZERO
    return gamma.GammaValue(q, draw(st.booleans()))


@st.composite
def structures(draw, max_size: int = 4):
    n = draw(st.integers(1, max_size))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    tuples = draw(st.frozensets(pairs, max_size=n * n))
    return fo.FiniteStructure(BINARY_SIG, n, {"r": tuples})


def _formula(draw, scope: tuple[str, ...], depth: int) -> fo.Formula:
    if depth == 0 or draw(st.integers(0, 2)) == 0:
        kind = draw(st.integers(0, 3))
        if kind == 0:
            return fo.TRUE
        if kind == 1:
            return fo.FALSE
        v = scope[draw(st.integers(0, len(scope) - 1))]
        w = scope[draw(st.integers(0, len(scope) - 1))]
        return fo.Eq(v, w) if kind == 2 else fo.Atom("r", (v, w))
    kind = draw(st.integers(0, 5))
    if kind == 0:
        return fo.Not(_formula(draw, scope, depth - 1))
    if kind <= 2:
        ctor = fo.And if kind == 1 else fo.Or
        return ctor(_formula(draw, scope, depth - 1), _formula(draw, scope, depth - 1))
    if kind == 3:
        return fo.Implies(_formula(draw, scope, depth - 1), _formula(draw, scope, depth - 1))
    var = f"z{len(scope)}"
    body = _formula(draw, scope + (var,), depth - 1)
    return fo.Exists(var, body) if kind == 4 else fo.Forall(var, body)


@st.composite
def formulas(draw, scope: tuple[str, ...] = ("x", "y"), depth: int = 3):
    return _formula(draw, scope, depth)


# -- seeded corpus generators (plain random module, used by acceptance too) -------


def random_structure(rng: random.Random, max_size: int = 5) -> fo.FiniteStructure:
    n = 1 + rng.randrange(max_size)
    tuples = frozenset(
        (i, j) for i in range(n) for j in range(n) if rng.randrange(2)
    )
    return fo.FiniteStructure(BINARY_SIG, n, {"r": tuples})


def random_formula(
    rng: random.Random, depth: int, scope: tuple[str, ...] = ("x", "y")
) -> fo.Formula:
    if depth == 0 or rng.randrange(3) == 0:
        kind = rng.randrange(6)
        if kind == 0:
            return fo.TRUE
        if kind == 1:
            return fo.FALSE
        v = scope[rng.randrange(len(scope))]
        w = scope[rng.randrange(len(scope))]
        return fo.Eq(v, w) if kind == 2 else fo.Atom("r", (v, w))
    kind = rng.randrange(6)
    if kind == 0:
        return fo.Not(random_formula(rng, depth - 1, scope))
    if kind == 1:
        return fo.And(random_formula(rng, depth - 1, scope), random_formula(rng, depth - 1, scope))
    if kind == 2:
        return fo.Or(random_formula(rng, depth - 1, scope), random_formula(rng, depth - 1, scope))
    if kind == 3:
        return fo.Implies(random_formula(rng, depth - 1, scope), random_formula(rng, depth - 1, scope))
    var = f"z{len(scope)}"
    body = random_formula(rng, depth - 1, scope + (var,))
    return fo.Exists(var, body) if kind == 4 else fo.Forall(var, body)


def small_lattice_corpus(max_size: int = 16) -> list[FiniteLattice]:
    """Chains, Boolean algebras, and products of chains up to ``max_size``.

    Starts at two elements: the one-element lattice has bottom equal to top
    and so admits no probability measure.
    """
    out: list[FiniteLattice] = []
    out.extend(lattice.chain(n) for n in range(2, 9) if n <= max_size)
    for atoms in (1, 2, 3, 4):
        if 2**atoms <= max_size:
            out.append(lattice.boolean_algebra(atoms))
    for a, b in ((2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (4, 4)):
        if a * b <= max_size:
            out.append(lattice.product_lattice(lattice.chain(a), lattice.chain(b)))
    return out


def random_classical_measure(L: FiniteLattice, rng: random.Random) -> ClassicalMeasure:
    """A random valuation: rational weights on the join-irreducibles summing
    to 1, each element measuring the weight below it."""
    J = L.join_irreducibles()
    denom = 1 + rng.randrange(24)
    cuts = sorted(rng.randrange(denom + 1) for _ in range(len(J) - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denom])]
    weight = {j: Fraction(p, denom) for j, p in zip(J, parts)}
    values = tuple(
        sum((weight[j] for j in J if L.leq(j, a)), Fraction(0)) for a in range(L.n)
    )
    return ClassicalMeasure(L, values)

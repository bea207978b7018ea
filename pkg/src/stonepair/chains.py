"""Finite chain lattices, their operators, and projections from the doubled
unit interval.

``L_n`` is the chain 0 < 1/n < ... < 1 < T with an adjoined top.  It carries
a truncated addition ``oplus`` (T absorbing, overflow to T) and its adjoint
partial subtraction ``ominus``; these satisfy

    u ominus v <= w  iff  u <= v oplus w.

The meet-irreducibles of L_n are exactly the points of the subdivision chain
{0, 1/n, ..., 1}, and the derived operations on those points are recovered
from the operators through the irreducibles isomorphism ``kappa``: partial
subtraction via ``kappa(ominus)`` and partial addition as the adjoint of
``ominus``.  Both derivations are checked cell by cell against direct
arithmetic.

The multiplication embeddings ``i(n, nm)`` preserve ``oplus`` but never
``ominus`` (for m >= 2 the top row disagrees), which is why the inverse
system defining the doubled interval is built on floor maps; floor and
ceiling on the point chains are the right and left adjoints of the point
embedding.  ``project_gamma`` maps the doubled interval onto each point
chain compatibly with the floor maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InternalInvariantError
from .gamma import GammaValue
from .lattice import FiniteLattice


@dataclass(frozen=True)
class ChainElement:
    """An element of L_n: the point a/n for 0 <= a <= n, or the top T."""

    n: int
    a: int | None  # None encodes T

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError("chain parameter must be positive")
        if self.a is not None and not 0 <= self.a <= self.n:
            raise DomainError(f"{self.a}/{self.n} is not on the chain")

    @property
    def is_top(self) -> bool:
        return self.a is None

    def __str__(self) -> str:
        return "T" if self.a is None else f"{self.a}/{self.n}"

    def rank(self) -> int:
        return self.n + 1 if self.a is None else self.a


def top(n: int) -> ChainElement:
    return ChainElement(n, None)


def frac(n: int, a: int) -> ChainElement:
    return ChainElement(n, a)


def chain_elements(n: int) -> tuple[ChainElement, ...]:
    """All of L_n in ascending order: 0, 1/n, ..., 1, T."""
    return tuple(ChainElement(n, a) for a in range(n + 1)) + (top(n),)


def chain_leq(u: ChainElement, v: ChainElement) -> bool:
    _same_chain(u, v)
    return u.rank() <= v.rank()


def _same_chain(u: ChainElement, v: ChainElement) -> None:
    if u.n != v.n:
        raise DomainError(f"mismatched chains: {u.n} vs {v.n}")


@dataclass(frozen=True)
class ChainPoint:
    """A point a/n of the subdivision chain {0, 1/n, ..., 1}."""

    n: int
    a: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError("chain parameter must be positive")
        if not 0 <= self.a <= self.n:
            raise DomainError(f"{self.a}/{self.n} is not on the chain")

    @property
    def value(self) -> Fraction:
        return Fraction(self.a, self.n)

    def __str__(self) -> str:
        return f"{self.a}/{self.n}"


# -- the operators on L_n --------------------------------------------------------


def oplus(u: ChainElement, v: ChainElement) -> ChainElement:
    """Truncated addition: T absorbing, sums beyond 1 overflow to T."""
    _same_chain(u, v)
    if u.is_top or v.is_top:
        return top(u.n)
    s = u.a + v.a
    return top(u.n) if s > u.n else frac(u.n, s)


def ominus(u: ChainElement, v: ChainElement) -> ChainElement:
    """The adjoint subtraction: largest w with u <= v oplus w."""
    _same_chain(u, v)
    n = u.n
    if v.is_top:
        return frac(n, 0)
    if u.is_top:
        return top(n) if v.a == 0 else frac(n, n - v.a + 1)
    return frac(n, max(u.a - v.a, 0))


@dataclass(frozen=True)
class AdjunctionViolation:
    u: ChainElement
    v: ChainElement
    w: ChainElement


def check_adjunction(n: int) -> AdjunctionViolation | None:
    """Exhaustively check ``u ominus v <= w iff u <= v oplus w`` on L_n."""
    elems = chain_elements(n)
    for u in elems:
        for v in elems:
            for w in elems:
                if chain_leq(ominus(u, v), w) != chain_leq(u, oplus(v, w)):
                    return AdjunctionViolation(u, v, w)
    return None


# -- the multiplication embeddings ----------------------------------------------


def embed(u: ChainElement, m: int) -> ChainElement:
    """The lattice embedding of L_n into L_{nm}: a/n to am/(nm), T to T."""
    if m < 1:
        raise DomainError("embedding factor must be positive")
    if u.is_top:
        return top(u.n * m)
    return frac(u.n * m, u.a * m)


def check_oplus_preserved(n: int, m: int) -> tuple[ChainElement, ChainElement] | None:
    """First pair (if any) where the embedding fails to commute with oplus."""
    for u in chain_elements(n):
        for v in chain_elements(n):
            if embed(oplus(u, v), m) != oplus(embed(u, m), embed(v, m)):
                return (u, v)
    return None


@dataclass(frozen=True)
class OminusWitness:
    u: ChainElement
    v: ChainElement
    embedded_of_result: ChainElement  # embed(u ominus v)
    result_of_embedded: ChainElement  # embed(u) ominus embed(v)


def find_ominus_counterexample(n: int, m: int) -> OminusWitness:
    """First pair, in ascending order, where the embedding fails to commute
    with ominus.  One always exists for m >= 2; failure to find one would
    contradict the adjunction analysis."""
    if m < 2:
        raise DomainError("the embedding is the identity for m = 1; need m >= 2")
    for u in chain_elements(n):
        for v in chain_elements(n):
            lhs = embed(ominus(u, v), m)
            rhs = ominus(embed(u, m), embed(v, m))
            if lhs != rhs:
                return OminusWitness(u, v, lhs, rhs)
    raise InternalInvariantError(f"no ominus counterexample for n={n}, m={m}")


# -- floor, ceiling, and the point embedding --------------------------------------


def embed_point(p: ChainPoint, m: int) -> ChainPoint:
    """The inclusion of subdivision chains: a/n to am/(nm)."""
    if m < 1:
        raise DomainError("embedding factor must be positive")
    return ChainPoint(p.n * m, p.a * m)


def floor_map(n: int, m: int, x: ChainPoint) -> ChainPoint:
    """Round a/(nm) down to the coarser chain: right adjoint to inclusion."""
    if x.n != n * m:
        raise DomainError(f"point lives on chain {x.n}, expected {n * m}")
    return ChainPoint(n, x.a // m)


def ceiling_map(n: int, m: int, x: ChainPoint) -> ChainPoint:
    """Round a/(nm) up to the coarser chain: left adjoint to inclusion."""
    if x.n != n * m:
        raise DomainError(f"point lives on chain {x.n}, expected {n * m}")
    return ChainPoint(n, -(-x.a // m))


# -- deriving the partial operations on the point chain ----------------------------


def chain_lattice(n: int) -> FiniteLattice:
    """L_n as a lattice object, elements in ascending order, top labelled T."""
    labels = [f"{a}/{n}" for a in range(n + 1)] + ["T"]
    return FiniteLattice(labels, [(i, i + 1) for i in range(n + 1)])


def _element_of_index(n: int, i: int) -> ChainElement:
    return top(n) if i == n + 1 else frac(n, i)


def derive_partial_minus(n: int) -> dict[tuple[int, int], Fraction]:
    """Partial subtraction on the point chain, derived from the operators.

    For points x <= z the recipe is kappa(ominus(kappa_inverse(z), x)),
    with kappa the irreducibles isomorphism of L_n computed on the lattice
    object.  The table is checked cell by cell against direct subtraction;
    a mismatch would contradict the derivation and raises an internal error.
    """
    L = chain_lattice(n)
    kappa_inv = {L.kappa(j): j for j in L.join_irreducibles()}
    table: dict[tuple[int, int], Fraction] = {}
    for za in range(n + 1):
        for xa in range(za + 1):
            j = _element_of_index(n, kappa_inv[za])
            raw = ominus(j, frac(n, xa))
            derived = Fraction(L.kappa(raw.rank()), n)
            direct = Fraction(za - xa, n)
            if derived != direct:
                raise InternalInvariantError(
                    f"derived minus {za}/{n} - {xa}/{n} = {derived}, expected {direct}"
                )
            table[(za, xa)] = derived
    return table


def derive_partial_plus(n: int) -> dict[tuple[int, int], Fraction]:
    """Partial addition on the point chain, derived as the adjoint of ominus.

    The sum of x and z is the largest u in L_n with ominus(u, x) <= z,
    restricted to the point chain (defined when it is not T, i.e. when the
    values sum to at most 1).  Checked cell by cell against direct addition.
    """
    elems = chain_elements(n)
    table: dict[tuple[int, int], Fraction] = {}
    for xa in range(n + 1):
        for za in range(n + 1 - xa):
            x, z = frac(n, xa), frac(n, za)
            best = max(
                (u for u in elems if chain_leq(ominus(u, x), z)),
                key=ChainElement.rank,
            )
            if best.is_top:
                raise InternalInvariantError(
                    f"derived plus {xa}/{n} + {za}/{n} escaped the point chain"
                )
            derived = Fraction(best.a, n)
            direct = Fraction(xa + za, n)
            if derived != direct:
                raise InternalInvariantError(
                    f"derived plus {xa}/{n} + {za}/{n} = {derived}, expected {direct}"
                )
            table[(xa, za)] = derived
    return table


# -- projections from the doubled interval -----------------------------------------


def project_gamma(x: GammaValue, n: int) -> ChainPoint:
    """The largest point of the subdivision chain whose exact copy is below x.

    Exact q^o projects to floor(qn)/n; an approximation r^- projects to the
    largest point strictly below r.  These projections commute with the
    floor maps, forming a cone over the inverse system of point chains.
    """
    if n < 1:
        raise DomainError("chain parameter must be positive")
    scaled = x.value * n
    if x.exact:
        a = math.floor(scaled)
    else:
        a = math.ceil(scaled) - 1
    return ChainPoint(n, a)

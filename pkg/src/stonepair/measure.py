"""Finitely additive measures on finite distributive lattices.

Two kinds live here.  A *classical* measure is a monotone map into [0, 1]
sending bottom to 0, top to 1, and satisfying the modular law
``m(a) + m(b) = m(a v b) + m(a ^ b)``.  A measure valued in the doubled unit
interval replaces the modular law by two inequalities phrased with the
partial subtraction ``mip`` and co-subtraction ``miss``:

    miss(mu(a), mu(a ^ b)) <= mip(mu(a v b), mu(b))
    mip(mu(a), mu(a ^ b)) >= miss(mu(a v b), mu(b))

Collapsing tags turns the second kind into the first (``collapse_measure``),
tagging values exact turns the first into the second (``lift_measure``), and
the round trip collapse-after-lift is the identity.  Pushforward along a
lattice homomorphism is composition.  Finitely supported weight functions
integrate to measures on subset algebras.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Collection, Hashable, Sequence

from . import gamma
from .errors import DomainError, InternalInvariantError, ParseError
from .gamma import GammaValue
from .lattice import FiniteLattice, LatticeHom, from_subsets


@dataclass(frozen=True)
class MeasureViolation:
    """One failed axiom instance, identified by kind and element pair."""

    kind: str  # bottom | top | monotone | additivity-left | additivity-right
    a: int | None = None
    b: int | None = None

    def render(self, L: FiniteLattice) -> str:
        if self.a is None:
            return f"FAIL {self.kind}"
        return f"FAIL {self.kind} a={L.labels[self.a]} b={L.labels[self.b]}"


@dataclass(frozen=True)
class Measure:
    """A map from lattice elements to the doubled unit interval."""

    lattice: FiniteLattice
    values: tuple[GammaValue, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.lattice.n:
            raise DomainError(
                f"{len(self.values)} values for {self.lattice.n} elements"
            )

    def __call__(self, a: int) -> GammaValue:
        return self.values[a]


@dataclass(frozen=True)
class ClassicalMeasure:
    """A map from lattice elements to rationals in [0, 1]."""

    lattice: FiniteLattice
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.lattice.n:
            raise DomainError(
                f"{len(self.values)} values for {self.lattice.n} elements"
            )

    def __call__(self, a: int) -> Fraction:
        return self.values[a]


def validate_measure(mu: Measure) -> list[MeasureViolation]:
    """Every failing axiom instance, in deterministic order.

    Endpoint checks first, then monotonicity over pairs in lexicographic
    index order, then the two additivity inequalities over all ordered pairs.
    Additivity on a pair is only evaluated when monotonicity supplies the
    domains of the partial operations; a pair skipped for that reason is
    already covered by a reported monotonicity violation.
    """
    L = mu.lattice
    out: list[MeasureViolation] = []
    if mu(L.bottom) != gamma.ZERO:
        out.append(MeasureViolation("bottom"))
    if mu(L.top) != gamma.ONE:
        out.append(MeasureViolation("top"))
    for a in range(L.n):
        for b in range(L.n):
            if a != b and L.leq(a, b) and not mu(a) <= mu(b):
                out.append(MeasureViolation("monotone", a, b))
    for a in range(L.n):
        for b in range(L.n):
            lo = mu(L.meet(a, b))
            hi = mu(L.join(a, b))
            if not (lo <= mu(a) and mu(b) <= hi):
                continue  # reported as a monotonicity failure
            if not gamma.miss(mu(a), lo) <= gamma.mip(hi, mu(b)):
                out.append(MeasureViolation("additivity-left", a, b))
            if not gamma.mip(mu(a), lo) >= gamma.miss(hi, mu(b)):
                out.append(MeasureViolation("additivity-right", a, b))
    return out


def validate_classical_measure(m: ClassicalMeasure) -> list[MeasureViolation]:
    """Failing instances of the classical axioms, same ordering conventions."""
    L = m.lattice
    out: list[MeasureViolation] = []
    if m(L.bottom) != 0:
        out.append(MeasureViolation("bottom"))
    if m(L.top) != 1:
        out.append(MeasureViolation("top"))
    for a in range(L.n):
        if not 0 <= m(a) <= 1:
            out.append(MeasureViolation("range", a, a))
    for a in range(L.n):
        for b in range(L.n):
            if a != b and L.leq(a, b) and not m(a) <= m(b):
                out.append(MeasureViolation("monotone", a, b))
    for a in range(L.n):
        for b in range(L.n):
            if m(a) + m(b) != m(L.join(a, b)) + m(L.meet(a, b)):
                out.append(MeasureViolation("modular", a, b))
    return out


def pushforward(mu: Measure, h: LatticeHom) -> Measure:
    """Precompose a measure on the target lattice with a homomorphism.

    The composite is re-validated; a failure would contradict the functor
    property and is reported as an internal error.
    """
    if h.target is not mu.lattice:
        raise DomainError("homomorphism target does not match the measure's lattice")
    nu = Measure(h.source, tuple(mu(h(a)) for a in range(h.source.n)))
    bad = validate_measure(nu)
    if bad:
        raise InternalInvariantError(
            f"pushforward produced a non-measure: {bad[0].render(h.source)}"
        )
    return nu


def collapse_measure(mu: Measure) -> ClassicalMeasure:
    """Forget tags pointwise; the result satisfies the classical axioms."""
    m = ClassicalMeasure(mu.lattice, tuple(gamma.gamma_collapse(v) for v in mu.values))
    bad = validate_classical_measure(m)
    if bad:
        raise InternalInvariantError(
            f"collapse produced a non-measure: {bad[0].render(mu.lattice)}"
        )
    return m


def lift_measure(m: ClassicalMeasure) -> Measure:
    """Tag values exact pointwise; the result satisfies the tagged axioms."""
    mu = Measure(m.lattice, tuple(gamma.iota_exact(v) for v in m.values))
    bad = validate_measure(mu)
    if bad:
        raise InternalInvariantError(
            f"lift produced a non-measure: {bad[0].render(m.lattice)}"
        )
    return mu


# -- finitely supported functions and integration ---------------------------------


@dataclass(frozen=True)
class FinSuppFn:
    """Weights over a finite carrier that sum to 1^o.

    The carrier is an indexed tuple of hashable points; the support is the
    set of points of nonzero weight.  Construction checks that the weights
    sum, in carrier order, to exactly 1^o.
    """

    points: tuple[Hashable, ...]
    weights: tuple[GammaValue, ...]

    def __post_init__(self) -> None:
        if len(self.points) != len(self.weights):
            raise DomainError("one weight per carrier point required")
        if len(set(self.points)) != len(self.points):
            raise DomainError("carrier points must be distinct")
        total = gamma.gamma_sum(w for w in self.weights if w != gamma.ZERO)
        if total != gamma.ONE:
            raise DomainError(f"weights sum to {total}, not 1^o")

    @property
    def support(self) -> tuple[Hashable, ...]:
        return tuple(p for p, w in zip(self.points, self.weights) if w != gamma.ZERO)

    def weight(self, point: Hashable) -> GammaValue:
        return self.weights[self.points.index(point)]


def integrate(f: FinSuppFn, M: Collection[Hashable]) -> GammaValue:
    """Sum of weights over the carrier points of M meeting the support.

    Always defined: any partial sum of the weights stays within the domain of
    the partial addition because the full sum is 1^o.
    """
    members = set(M)
    return gamma.gamma_sum(
        w for p, w in zip(f.points, f.weights) if w != gamma.ZERO and p in members
    )


def integration_measure(
    f: FinSuppFn, algebra: Sequence[frozenset[Hashable]]
) -> tuple[FiniteLattice, Measure]:
    """The measure ``M -> integral of f over M`` on a subset algebra.

    ``algebra`` must be a family of subsets of the carrier that is closed
    under intersection and union and contains the empty set and the full
    carrier; those requirements are the caller's (a violation raises
    ``DomainError``).  The integral's failure to be a measure would be a
    bug, not bad input.
    """
    sets = [frozenset(S) for S in algebra]
    if len(set(sets)) != len(sets):
        raise DomainError("algebra members must be distinct")
    carrier = frozenset(f.points)
    for S in sets:
        if not S <= carrier:
            raise DomainError(f"{sorted(S)} is not a subset of the carrier")
    if frozenset() not in sets or carrier not in sets:
        raise DomainError("algebra must contain the empty set and the full carrier")
    index = {S: i for i, S in enumerate(sets)}
    for S in sets:
        for T in sets:
            if S & T not in index:
                raise DomainError("algebra not closed under intersection")
            if S | T not in index:
                raise DomainError("algebra not closed under union")
    L = from_subsets(sets)
    mu = Measure(L, tuple(integrate(f, S) for S in sets))
    bad = validate_measure(mu)
    if bad:
        raise InternalInvariantError(
            f"integration produced a non-measure: {bad[0].render(L)}"
        )
    return L, mu


# -- measure file format -----------------------------------------------------------
#
#   lattice: boolean4.lat        (optional reference, resolved by the caller)
#   value(a) = 1/2^o
#
# One value line per lattice element; '#' starts a comment.

_VALUE_LINE = re.compile(r"value\(([A-Za-z0-9_]+)\)\s*=\s*(.+)")


def measure_lattice_reference(text: str) -> str | None:
    """The path named on the ``lattice:`` line, if the file has one."""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line.startswith("lattice:"):
            return line[len("lattice:"):].strip()
    return None


def parse_measure(text: str, lattice: FiniteLattice) -> Measure:
    """Parse value lines against the given lattice; every element needs one."""
    values: dict[int, GammaValue] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("lattice:"):
            continue
        m = _VALUE_LINE.fullmatch(line)
        if m is None:
            raise ParseError(f"unrecognised line {line!r}", line=lineno, column=1)
        label, body = m.group(1), m.group(2)
        idx = lattice.index_of(label)
        if idx in values:
            raise ParseError(f"duplicate value for {label}", line=lineno, column=1)
        values[idx] = gamma.parse_gamma(body)
    missing = [lattice.labels[i] for i in range(lattice.n) if i not in values]
    if missing:
        raise ParseError(f"missing values for {missing}", line=1, column=1)
    return Measure(lattice, tuple(values[i] for i in range(lattice.n)))


def format_measure(mu: Measure, lattice_ref: str | None = None) -> str:
    lines = []
    if lattice_ref is not None:
        lines.append(f"lattice: {lattice_ref}")
    for i, label in enumerate(mu.lattice.labels):
        lines.append(f"value({label}) = {gamma.format_gamma(mu.values[i])}")
    return "\n".join(lines) + "\n"

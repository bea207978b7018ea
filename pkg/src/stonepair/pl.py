"""Propositional logic of threshold atoms over measures.

Atoms assert that the measure of a subject is at least (``GE``) or strictly
below (``LT``) an exact rational threshold; subjects are either elements of a
finite lattice (measure semantics) or first-order formulas (structure
semantics, where the measure is the tagged Stone pairing).  Formulas close
the atoms under conjunction, disjunction and negation.

The inference rules checked here, over thresholds p, q, r and subjects a, b:

    L1  GE(q, a) entails GE(p, a)                       for p <= q
    L2  GE(0, bottom) and GE(q, top) hold; GE(p, bottom) is absurd for p > 0
    L3  GE(q, a) entails GE(q, b)                       for a <= b
    L4  GE(p, a) and GE(q, b) entail
        GE(p + q - r, a v b) or GE(r, a ^ b)            for 0 <= p+q-r <= 1
    L5  GE(p + q - r, a v b) and GE(r, a ^ b) entail
        GE(p, a) or GE(q, b)                            for 0 <= p+q-r <= 1
    L6  LT(q, a) is the complement of GE(q, a)

Entailment is decided over the finite universe of grid measures: measures
whose values live on a resolution-k grid of the doubled interval.  A grid
countermodel refutes an entailment outright; "holds on the grid" is evidence,
not a validity claim, so reports always carry the lattice and grid they were
computed on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from . import gamma
from .errors import DomainError, ParseError, PresentationError, SizeError
from .fo import FiniteStructure, Formula, Signature, parse_formula
from .gamma import GammaGrid, GammaValue, grid_rationals
from .lattice import FiniteLattice
from .measure import Measure, validate_measure
from .pairing import stone_pairing

MAX_LATTICE = 6
MAX_GRID = 6


class PLFormula:
    """Base class for threshold-logic AST nodes."""


@dataclass(frozen=True)
class PLConst(PLFormula):
    value: bool


PL_TRUE = PLConst(True)
PL_FALSE = PLConst(False)


@dataclass(frozen=True)
class GE(PLFormula):
    """The measure of ``subject`` is at least ``threshold`` tagged exact."""

    threshold: Fraction
    subject: object  # lattice element index or first-order Formula

    def __post_init__(self) -> None:
        t = Fraction(self.threshold)
        if not 0 <= t <= 1:
            raise DomainError(f"threshold {t} outside [0, 1]")
        object.__setattr__(self, "threshold", t)


@dataclass(frozen=True)
class LT(PLFormula):
    """The measure of ``subject`` is strictly below ``threshold`` tagged exact."""

    threshold: Fraction
    subject: object

    def __post_init__(self) -> None:
        t = Fraction(self.threshold)
        if not 0 <= t <= 1:
            raise DomainError(f"threshold {t} outside [0, 1]")
        object.__setattr__(self, "threshold", t)


@dataclass(frozen=True)
class PLNot(PLFormula):
    body: PLFormula


@dataclass(frozen=True)
class PLAnd(PLFormula):
    left: PLFormula
    right: PLFormula


@dataclass(frozen=True)
class PLOr(PLFormula):
    left: PLFormula
    right: PLFormula


def _eval(phi: PLFormula, atom_value) -> bool:
    match phi:
        case PLConst(value):
            return value
        case GE(_, _) | LT(_, _):
            return atom_value(phi)
        case PLNot(body):
            return not _eval(body, atom_value)
        case PLAnd(l, r):
            return _eval(l, atom_value) and _eval(r, atom_value)
        case PLOr(l, r):
            return _eval(l, atom_value) or _eval(r, atom_value)
    raise DomainError(f"not a threshold-logic node: {phi!r}")


def eval_pl_measure(mu: Measure, phi: PLFormula) -> bool:
    """Evaluate against a measure; atoms compare mu(a) with the threshold."""

    def atom_value(atom) -> bool:
        a = atom.subject
        if not isinstance(a, int) or not 0 <= a < mu.lattice.n:
            raise DomainError(f"atom subject {a!r} is not an element of the lattice")
        bound = gamma.iota_exact(atom.threshold)
        if isinstance(atom, GE):
            return mu(a) >= bound
        return mu(a) < bound

    return _eval(phi, atom_value)


def eval_pl_structure(A: FiniteStructure, phi: PLFormula) -> bool:
    """Evaluate against a finite structure; atoms pair their formula with A."""

    def atom_value(atom) -> bool:
        subject = atom.subject
        if not isinstance(subject, Formula):
            raise DomainError(f"atom subject {subject!r} is not a formula")
        value = stone_pairing(A, subject).gamma
        bound = gamma.iota_exact(atom.threshold)
        if isinstance(atom, GE):
            return value >= bound
        return value < bound

    return _eval(phi, atom_value)


# -- grid semantics ----------------------------------------------------------------


def _guard(D: FiniteLattice, k: int) -> None:
    if D.n > MAX_LATTICE:
        raise SizeError(f"lattice has {D.n} elements; the guard is {MAX_LATTICE}")
    if k > MAX_GRID:
        raise SizeError(f"grid resolution {k} exceeds the guard {MAX_GRID}")
    if k < 1:
        raise DomainError("grid resolution must be positive")


def grid_measures(D: FiniteLattice, k: int) -> list[Measure]:
    """All measures on D with values on the resolution-k grid.

    Enumerated in lexicographic order of the value tuple (elements in index
    order, grid points ascending).  Candidates are grown element by element
    with monotonicity pruning; survivors are filtered by the full validator.
    """
    _guard(D, k)
    points = GammaGrid(k).points
    forced: dict[int, GammaValue] = {D.bottom: gamma.ZERO, D.top: gamma.ONE}
    out: list[Measure] = []

    def extend(prefix: list[GammaValue]) -> None:
        e = len(prefix)
        if e == D.n:
            mu = Measure(D, tuple(prefix))
            if not validate_measure(mu):
                out.append(mu)
            return
        candidates = (forced[e],) if e in forced else points
        for v in candidates:
            ok = True
            for d in range(e):
                if D.leq(d, e) and not prefix[d] <= v:
                    ok = False
                    break
                if D.leq(e, d) and not v <= prefix[d]:
                    ok = False
                    break
            if ok:
                prefix.append(v)
                extend(prefix)
                prefix.pop()

    extend([])
    return out


@dataclass(frozen=True)
class EntailmentResult:
    holds: bool
    countermodel: Measure | None
    lattice: FiniteLattice
    k: int
    measures_checked: int


def entails_grid(
    lhs: PLFormula, rhs: PLFormula, D: FiniteLattice, k: int
) -> EntailmentResult:
    """Whether every grid measure satisfying lhs satisfies rhs.

    Returns the first countermodel in enumeration order, if any.  The result
    is relative to the grid: countermodels are conclusive, "holds" is not.
    """
    measures = grid_measures(D, k)
    for mu in measures:
        if eval_pl_measure(mu, lhs) and not eval_pl_measure(mu, rhs):
            return EntailmentResult(False, mu, D, k, len(measures))
    return EntailmentResult(True, None, D, k, len(measures))


# -- rule instances and soundness ---------------------------------------------------


@dataclass(frozen=True)
class RuleInstance:
    rule: str
    params: tuple[Fraction, ...]
    elements: tuple[int, ...]
    premise: PLFormula
    conclusion: PLFormula


def rule_instances(D: FiniteLattice, k: int) -> Iterator[RuleInstance]:
    """All instances of L1..L6 with thresholds on the resolution-k chain and
    subjects in D, side conditions enforced before generation."""
    Q = grid_rationals(k)
    for a in range(D.n):
        for q in Q:
            for p in Q:
                if p <= q:
                    yield RuleInstance("L1", (p, q), (a,), GE(q, a), GE(p, a))
    bot, top = D.bottom, D.top
    yield RuleInstance("L2", (Fraction(0),), (bot,), PL_TRUE, GE(Fraction(0), bot))
    for q in Q:
        yield RuleInstance("L2", (q,), (top,), PL_TRUE, GE(q, top))
    for p in Q:
        if p > 0:
            yield RuleInstance("L2", (p,), (bot,), GE(p, bot), PL_FALSE)
    for a in range(D.n):
        for b in range(D.n):
            if D.leq(a, b):
                for q in Q:
                    yield RuleInstance("L3", (q,), (a, b), GE(q, a), GE(q, b))
    for a in range(D.n):
        for b in range(D.n):
            lo, hi = D.meet(a, b), D.join(a, b)
            for p in Q:
                for q in Q:
                    for r in Q:
                        if not 0 <= p + q - r <= 1:
                            continue
                        s = p + q - r
                        yield RuleInstance(
                            "L4",
                            (p, q, r),
                            (a, b),
                            PLAnd(GE(p, a), GE(q, b)),
                            PLOr(GE(s, hi), GE(r, lo)),
                        )
                        yield RuleInstance(
                            "L5",
                            (p, q, r),
                            (a, b),
                            PLAnd(GE(s, hi), GE(r, lo)),
                            PLOr(GE(p, a), GE(q, b)),
                        )
    for a in range(D.n):
        for q in Q:
            yield RuleInstance(
                "L6", (q,), (a,), PLAnd(LT(q, a), GE(q, a)), PL_FALSE
            )
            yield RuleInstance(
                "L6", (q,), (a,), PL_TRUE, PLOr(LT(q, a), GE(q, a))
            )


@dataclass(frozen=True)
class SoundnessReport:
    lattice: FiniteLattice
    k: int
    instance_counts: dict[str, int]
    failures: tuple[tuple[RuleInstance, Measure], ...]
    measures_checked: int

    @property
    def total_instances(self) -> int:
        return sum(self.instance_counts.values())


def check_soundness_grid(D: FiniteLattice, k: int) -> SoundnessReport:
    """Check premise-entails-conclusion for every rule instance over every
    grid measure.  The expected failure list is empty."""
    measures = grid_measures(D, k)
    counts: dict[str, int] = {f"L{i}": 0 for i in range(1, 7)}
    failures: list[tuple[RuleInstance, Measure]] = []
    for inst in rule_instances(D, k):
        counts[inst.rule] += 1
        for mu in measures:
            if eval_pl_measure(mu, inst.premise) and not eval_pl_measure(
                mu, inst.conclusion
            ):
                failures.append((inst, mu))
                break
    return SoundnessReport(D, k, counts, tuple(failures), len(measures))


# -- filter presentations -------------------------------------------------------------


@dataclass(frozen=True)
class FilterPresentation:
    """A finite fragment of a prime filter of threshold atoms: the pairs
    (q, a) asserted to belong to it, with thresholds on the grid."""

    lattice: FiniteLattice
    k: int
    members: frozenset[tuple[Fraction, int]]

    def __post_init__(self) -> None:
        Q = set(grid_rationals(self.k))
        for q, a in self.members:
            if q not in Q:
                raise DomainError(f"threshold {q} is not on the resolution-{self.k} grid")
            if not 0 <= a < self.lattice.n:
                raise DomainError(f"element index {a} out of range")


def filter_to_measure(F: FilterPresentation) -> Measure:
    """The measure sending a to the largest asserted threshold, tagged exact.

    The presentation must be downward closed in the threshold and upward
    closed along the lattice order (the two monotonicity rules); the induced
    map must validate as a measure.  Violations of either are reported as
    ``PresentationError`` with a failing pair.
    """
    D, Q = F.lattice, grid_rationals(F.k)
    for q, a in F.members:
        for p in Q:
            if p <= q and (p, a) not in F.members:
                raise PresentationError(
                    f"threshold closure fails: ({q}, {D.labels[a]}) present "
                    f"but ({p}, {D.labels[a]}) missing"
                )
        for b in range(D.n):
            if D.leq(a, b) and (q, b) not in F.members:
                raise PresentationError(
                    f"order closure fails: ({q}, {D.labels[a]}) present "
                    f"but ({q}, {D.labels[b]}) missing"
                )
    values = []
    for a in range(D.n):
        qs = [q for q, b in F.members if b == a]
        values.append(gamma.iota_exact(max(qs)) if qs else gamma.ZERO)
    mu = Measure(D, tuple(values))
    bad = validate_measure(mu)
    if bad:
        raise PresentationError(
            f"presentation does not induce a measure: {bad[0].render(D)}"
        )
    return mu


def presentation_of_measure(mu: Measure, k: int) -> FilterPresentation:
    """The grid fragment of the filter of a measure: all (q, a) with
    q^o <= mu(a)."""
    members = frozenset(
        (q, a)
        for a in range(mu.lattice.n)
        for q in grid_rationals(k)
        if gamma.iota_exact(q) <= mu(a)
    )
    return FilterPresentation(mu.lattice, k, members)


# -- concrete syntax -----------------------------------------------------------------
#
# Threshold atoms are written  [>= 2/3]{ subject }  and  [< 2/3]{ subject },
# combinable with & | ! and parentheses; true and false are literals.  The
# subject between braces is a first-order formula when a signature is given,
# or a lattice element label when a lattice is given.


class _PLParser:
    def __init__(self, text: str, signature: Signature | None, lattice: FiniteLattice | None):
        if (signature is None) == (lattice is None):
            raise DomainError("pass exactly one of signature or lattice")
        self.text = text
        self.signature = signature
        self.lattice = lattice
        self.pos = 0

    def error(self, message: str) -> ParseError:
        return ParseError(message, line=1, column=self.pos + 1)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, literal: str) -> bool:
        self.skip_ws()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def parse(self) -> PLFormula:
        phi = self.disjunction()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error(f"unexpected trailing input {self.text[self.pos:]!r}")
        return phi

    def disjunction(self) -> PLFormula:
        left = self.conjunction()
        while self.take("|"):
            left = PLOr(left, self.conjunction())
        return left

    def conjunction(self) -> PLFormula:
        left = self.unary()
        while self.take("&"):
            left = PLAnd(left, self.unary())
        return left

    def unary(self) -> PLFormula:
        if self.take("!"):
            return PLNot(self.unary())
        if self.take("("):
            phi = self.disjunction()
            if not self.take(")"):
                raise self.error("expected ')'")
            return phi
        if self.take("true"):
            return PL_TRUE
        if self.take("false"):
            return PL_FALSE
        if self.take("["):
            return self.atom_tail()
        raise self.error("expected a formula")

    def rational(self) -> Fraction:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a rational threshold")
        num = int(self.text[start:self.pos])
        den = 1
        if self.pos < len(self.text) and self.text[self.pos] == "/":
            self.pos += 1
            dstart = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == dstart:
                raise self.error("expected a denominator")
            den = int(self.text[dstart:self.pos])
            if den == 0:
                raise self.error("zero denominator")
        return Fraction(num, den)

    def atom_tail(self) -> PLFormula:
        if self.take(">="):
            ctor = GE
        elif self.take("<"):
            ctor = LT
        else:
            raise self.error("expected '>=' or '<'")
        q = self.rational()
        if not 0 <= q <= 1:
            raise self.error(f"threshold {q} outside [0, 1]")
        if not self.take("]"):
            raise self.error("expected ']'")
        if not self.take("{"):
            raise self.error("expected '{'")
        close = self.text.find("}", self.pos)
        if close < 0:
            raise self.error("expected '}'")
        body = self.text[self.pos:close]
        self.pos = close + 1
        if self.signature is not None:
            subject: object = parse_formula(body, self.signature)
        else:
            label = body.strip()
            subject = self.lattice.index_of(label)
        return ctor(q, subject)


def parse_pl_formula(
    text: str,
    *,
    signature: Signature | None = None,
    lattice: FiniteLattice | None = None,
) -> PLFormula:
    """Parse the threshold-logic syntax.

    Exactly one of ``signature`` (subjects are first-order formulas) and
    ``lattice`` (subjects are element labels) must be given.
    """
    return _PLParser(text, signature, lattice).parse()

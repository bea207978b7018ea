"""Stone pairings of finite structures against formulas, and their limits.

The classical pairing of a structure A against a formula phi with n context
variables is the fraction of the ``|A| ** n`` assignments that satisfy phi; it
is an exact rational with denominator dividing ``|A| ** n``.  The tagged
pairing is the same number marked exact in the doubled unit interval, where a
sequence of pairings can distinguish a limit that is achieved (``q^o``) from
one approached strictly from below (``r^-``).

``pairing_sequence`` evaluates a family of structures along an index range
and classifies the whole sequence and its odd and even subsequences.  For a
family that publishes closed forms for the formula at hand the verdict is
exact; otherwise it is a horizon-bounded heuristic over the tail of the
computed values.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import fo, gamma
from .errors import DomainError, InternalInvariantError
from .fo import FiniteStructure, Formula
from .gamma import GammaValue
from .measure import FinSuppFn


@dataclass(frozen=True)
class PairingResult:
    """One pairing: satisfying-assignment count over the assignment total."""

    count: int
    total: int
    classical: Fraction
    gamma: GammaValue

    @staticmethod
    def from_counts(count: int, total: int) -> "PairingResult":
        classical = Fraction(count, total)
        return PairingResult(count, total, classical, gamma.iota_exact(classical))


def default_context(phi: Formula) -> tuple[str, ...]:
    """Free variables of phi in first-occurrence order."""
    return fo.free_vars(phi)


def padded_context(phi: Formula, n: int) -> tuple[str, ...]:
    """The free variables of phi padded with fresh names up to length n."""
    ctx = list(fo.free_vars(phi))
    if len(ctx) > n:
        raise DomainError(f"{len(ctx)} free variables do not fit in a context of {n}")
    taken = set(ctx) | fo.all_vars(phi)
    for i in itertools.count(1):
        if len(ctx) == n:
            break
        name = f"v{i}"
        if name not in taken:
            ctx.append(name)
            taken.add(name)
    return tuple(ctx)


def stone_pairing(
    A: FiniteStructure, phi: Formula, context: Sequence[str] | None = None
) -> PairingResult:
    """Count satisfying assignments of ``context`` and normalise exactly.

    Sentences pair over the empty context, so their value is 0 or 1.
    """
    ctx = default_context(phi) if context is None else tuple(context)
    count = fo.count_satisfying(A, phi, ctx)
    return PairingResult.from_counts(count, A.size ** len(ctx))


def assignment_distribution(
    A: FiniteStructure, context: Sequence[str]
) -> FinSuppFn:
    """The uniform weight function on all assignments of ``context`` into A."""
    ctx = tuple(context)
    if len(set(ctx)) != len(ctx):
        raise DomainError("context variables must be distinct")
    points = tuple(itertools.product(range(A.size), repeat=len(ctx)))
    w = gamma.iota_exact(Fraction(1, A.size ** len(ctx)))
    return FinSuppFn(points, (w,) * len(points))


@dataclass(frozen=True)
class PaddingViolation:
    narrow: PairingResult
    wide: PairingResult


def check_padding_invariance(
    A: FiniteStructure, phi: Formula, n: int, m: int
) -> PaddingViolation | None:
    """Whether pairing with n context variables equals pairing with m >= n.

    Returns None when the classical values agree (they always should: each
    narrow assignment extends in exactly ``|A| ** (m - n)`` ways).
    """
    if m < n:
        raise DomainError("wide context must be at least as long as the narrow one")
    narrow = stone_pairing(A, phi, padded_context(phi, n))
    wide = stone_pairing(A, phi, padded_context(phi, m))
    if narrow.classical != wide.classical or narrow.gamma != wide.gamma:
        return PaddingViolation(narrow, wide)
    return None


# -- convergence ------------------------------------------------------------------


class VerdictKind(Enum):
    CONVERGES_EXACT = "converges-exact"
    CONVERGES_APPROX = "converges-approx"
    DIVERGENT_AT_HORIZON = "divergent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    limit: GammaValue | None = None

    def __str__(self) -> str:
        if self.kind is VerdictKind.CONVERGES_EXACT or self.kind is VerdictKind.CONVERGES_APPROX:
            return f"CONVERGES {gamma.format_gamma(self.limit)}"
        if self.kind is VerdictKind.DIVERGENT_AT_HORIZON:
            return "DIVERGENT"
        return "INCONCLUSIVE"


def _verdict_for_limit(limit: GammaValue) -> Verdict:
    kind = VerdictKind.CONVERGES_EXACT if limit.exact else VerdictKind.CONVERGES_APPROX
    return Verdict(kind, limit)


@dataclass(frozen=True)
class ClosedForm:
    """Exact description of a pairing sequence: values plus tagged limits of
    the odd and even subsequences."""

    value_at: Callable[[int], Fraction]
    odd_limit: GammaValue
    even_limit: GammaValue


@dataclass(frozen=True)
class SequenceReport:
    results: tuple[PairingResult, ...]  # index i holds the pairing at i + 1
    classical_estimate: Fraction | None
    verdict: Verdict
    odd: Verdict
    even: Verdict
    exact: bool  # closed form used; otherwise a horizon heuristic

    @property
    def values(self) -> tuple[GammaValue, ...]:
        return tuple(r.gamma for r in self.results)


def _heuristic_verdict(values: Sequence[Fraction]) -> tuple[Fraction | None, Verdict]:
    """Tail-based classification of a sequence of exact pairing values.

    A sequence of exact points converges to q^o when the values reach q and
    stay at or above it, and to r^- when they approach r strictly from
    below.  At a finite horizon only a constant tail is conclusive evidence
    of the first situation; a shrinking-step tail is Cauchy-like but its
    limit cannot be named exactly, so it stays inconclusive.
    """
    if not values:
        return None, Verdict(VerdictKind.INCONCLUSIVE)
    tail = list(values[-math.ceil(len(values) / 2):])
    if all(v == tail[0] for v in tail):
        return tail[0], _verdict_for_limit(gamma.iota_exact(tail[0]))
    diffs = [abs(b - a) for a, b in zip(tail, tail[1:])]
    shrinking = all(d2 <= d1 for d1, d2 in zip(diffs, diffs[1:])) and diffs[-1] < diffs[0]
    if shrinking:
        return tail[-1], Verdict(VerdictKind.INCONCLUSIVE)
    return None, Verdict(VerdictKind.DIVERGENT_AT_HORIZON)


def _split_verdicts(
    values: Sequence[Fraction],
) -> tuple[Fraction | None, Verdict, Verdict, Verdict]:
    odd_vals = values[0::2]  # indices 1, 3, 5, ... of the 1-based sequence
    even_vals = values[1::2]
    _, odd_v = _heuristic_verdict(odd_vals)
    _, even_v = _heuristic_verdict(even_vals)
    estimate, whole = _heuristic_verdict(values)
    if whole.kind is VerdictKind.DIVERGENT_AT_HORIZON or (
        odd_v.limit is not None and even_v.limit is not None and odd_v.limit != even_v.limit
    ):
        whole = Verdict(VerdictKind.DIVERGENT_AT_HORIZON)
        estimate = None
    return estimate, whole, odd_v, even_v


class StructureFamily:
    """An indexed family of finite structures.

    ``closed_form`` may return exact sequence data for a formula the family
    understands; the default knows none.
    """

    name = "family"

    def structure(self, index: int) -> FiniteStructure:
        raise NotImplementedError

    def closed_form(self, phi: Formula) -> ClosedForm | None:
        return None


class FenceFamily(StructureFamily):
    """The alternating chain family: chains interleaved with chains plus an
    isolated point.  Publishes closed forms for the built-in one-variable
    formula "maximal but not the maximum" and its negation."""

    name = "fence"

    def structure(self, index: int) -> FiniteStructure:
        return fo.gen_example_structure(index)

    def closed_form(self, phi: Formula) -> ClosedForm | None:
        target = fo.alpha_normal(fo.desugar(phi))
        psi = fo.maximal_not_maximum()
        if target == fo.alpha_normal(fo.desugar(psi)):
            return ClosedForm(_fence_psi_value, gamma.ZERO, gamma.ZERO)
        if target == fo.alpha_normal(fo.desugar(fo.Not(psi))):
            return ClosedForm(_fence_not_psi_value, gamma.ONE, gamma.ONE_APPROX)
        return None


def _fence_psi_value(index: int) -> Fraction:
    # Chains have no maximal-but-not-maximum point; a chain with an isolated
    # point has exactly two, out of k + 2 elements at even index 2k.
    if index % 2 == 1:
        return Fraction(0)
    k = index // 2
    return Fraction(2, k + 2)


def _fence_not_psi_value(index: int) -> Fraction:
    return 1 - _fence_psi_value(index)


class DirectoryFamily(StructureFamily):
    """Structures loaded from a directory of files whose stems are indices."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.name = self.path.name

    def structure(self, index: int) -> FiniteStructure:
        matches = [
            p
            for p in self.path.iterdir()
            if p.is_file() and re.fullmatch(r"0*" + str(index), p.stem)
        ]
        if len(matches) != 1:
            raise DomainError(
                f"expected exactly one file for index {index} in {self.path}"
            )
        return fo.parse_structure(matches[0].read_text())


class ConstantFamily(StructureFamily):
    """Every index yields the same structure."""

    name = "constant"

    def __init__(self, A: FiniteStructure):
        self._A = A

    def structure(self, index: int) -> FiniteStructure:
        return self._A


def pairing_sequence(
    family: StructureFamily,
    phi: Formula,
    context: Sequence[str] | None = None,
    horizon: int = 12,
) -> SequenceReport:
    """Pair phi against family members 1..horizon and classify convergence.

    With a closed form the computed values are cross-checked against it and
    the verdicts are taken from its tagged limits; otherwise the heuristic
    tail analysis runs and the verdicts are only as good as the horizon.
    """
    if horizon < 4:
        raise DomainError("horizon must be at least 4")
    ctx = default_context(phi) if context is None else tuple(context)
    results = []
    for index in range(1, horizon + 1):
        try:
            A = family.structure(index)
        except Exception as exc:
            raise DomainError(
                f"family {family.name} failed at index {index}: {exc}"
            ) from exc
        results.append(stone_pairing(A, phi, ctx))
    classical = [r.classical for r in results]
    closed = family.closed_form(phi)
    if closed is not None:
        for index, value in enumerate(classical, start=1):
            if value != closed.value_at(index):
                raise InternalInvariantError(
                    f"closed form disagrees with computed value at index {index}: "
                    f"{closed.value_at(index)} vs {value}"
                )
        odd_v = _verdict_for_limit(closed.odd_limit)
        even_v = _verdict_for_limit(closed.even_limit)
        if closed.odd_limit == closed.even_limit:
            whole = _verdict_for_limit(closed.odd_limit)
            estimate = gamma.gamma_collapse(closed.odd_limit)
        else:
            whole = Verdict(VerdictKind.DIVERGENT_AT_HORIZON)
            estimate = None
        return SequenceReport(tuple(results), estimate, whole, odd_v, even_v, True)
    estimate, whole, odd_v, even_v = _split_verdicts(classical)
    return SequenceReport(tuple(results), estimate, whole, odd_v, even_v, False)

"""Pairing values, padding, distributions, and convergence verdicts."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from conftest import formulas, structures
from stonepair import fo, gamma
from stonepair.errors import DomainError
from stonepair.fo import Not, TRUE, FALSE, gen_example_structure, maximal_not_maximum
from stonepair.gamma import ONE, ONE_APPROX, ZERO, iota_exact
from stonepair.measure import integrate
from stonepair.pairing import (
    ConstantFamily,
    FenceFamily,
    PairingResult,
    VerdictKind,
    assignment_distribution,
    check_padding_invariance,
    default_context,
    padded_context,
    pairing_sequence,
    stone_pairing,
)

PSI = maximal_not_maximum()
FENCE = FenceFamily()


class TestStonePairing:
    def test_running_example(self):
        r = stone_pairing(gen_example_structure(2), PSI)
        assert (r.count, r.total) == (2, 3)
        assert r.classical == F(2, 3)
        assert r.gamma == iota_exact(F(2, 3))

    def test_tautology(self):
        r = stone_pairing(gen_example_structure(3), TRUE, ["x"])
        assert r.classical == 1 and r.gamma == ONE

    def test_negated_example_at_four(self):
        r = stone_pairing(gen_example_structure(4), Not(PSI), ["x"])
        assert (r.count, r.total) == (2, 4)
        assert r.gamma == iota_exact(F(1, 2))

    def test_sentence_uses_empty_context(self):
        A = gen_example_structure(1)
        phi = fo.parse_formula("exists x. exists y. lt(x,y)", fo.POSET_SIGNATURE)
        r = stone_pairing(A, phi)
        assert (r.count, r.total) == (1, 1)

    def test_context_mismatch(self):
        with pytest.raises(DomainError):
            stone_pairing(gen_example_structure(2), PSI, ["y"])

    def test_gamma_always_exact(self):
        for n in range(1, 6):
            r = stone_pairing(gen_example_structure(n), PSI)
            assert r.gamma.exact
            assert gamma.gamma_collapse(r.gamma) == r.classical

    def test_endpoints(self):
        A = gen_example_structure(2)
        assert stone_pairing(A, FALSE, ["x"]).classical == 0
        assert stone_pairing(A, TRUE, ["x"]).classical == 1

    @settings(max_examples=80, deadline=None)
    @given(structures(), formulas())
    def test_denominator_confinement(self, A, phi):
        r = stone_pairing(A, phi, ["x", "y"])
        assert (A.size ** 2) % r.classical.denominator == 0

    @settings(max_examples=80, deadline=None)
    @given(structures(), formulas(), formulas())
    def test_classical_additivity(self, A, phi, psi):
        ctx = ["x", "y"]
        lhs = stone_pairing(A, phi, ctx).classical + stone_pairing(A, psi, ctx).classical
        rhs = (
            stone_pairing(A, fo.Or(phi, psi), ctx).classical
            + stone_pairing(A, fo.And(phi, psi), ctx).classical
        )
        assert lhs == rhs

    @settings(max_examples=80, deadline=None)
    @given(structures(), formulas(), formulas())
    def test_measure_inequalities(self, A, phi, psi):
        ctx = ["x", "y"]
        mu_a = stone_pairing(A, phi, ctx).gamma
        mu_b = stone_pairing(A, psi, ctx).gamma
        lo = stone_pairing(A, fo.And(phi, psi), ctx).gamma
        hi = stone_pairing(A, fo.Or(phi, psi), ctx).gamma
        assert gamma.miss(mu_a, lo) <= gamma.mip(hi, mu_b)
        assert gamma.mip(mu_a, lo) >= gamma.miss(hi, mu_b)

    @settings(max_examples=60, deadline=None)
    @given(structures(), formulas(), formulas())
    def test_pairing_is_a_measure_on_the_formula_lattice(self, A, phi, psi):
        # the free two-generator lattice, with pairing values at each node
        from stonepair.lattice import FiniteLattice
        from stonepair.measure import Measure, validate_measure

        L = FiniteLattice(
            ["bot", "meet", "lhs", "rhs", "join", "top"],
            [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5)],
        )
        ctx = ["x", "y"]
        mu = Measure(
            L,
            (
                stone_pairing(A, fo.FALSE, ctx).gamma,
                stone_pairing(A, fo.And(phi, psi), ctx).gamma,
                stone_pairing(A, phi, ctx).gamma,
                stone_pairing(A, psi, ctx).gamma,
                stone_pairing(A, fo.Or(phi, psi), ctx).gamma,
                stone_pairing(A, fo.TRUE, ctx).gamma,
            ),
        )
        assert validate_measure(mu) == []


class TestContexts:
    def test_default_is_free_vars(self):
        assert default_context(PSI) == ("x",)

    def test_padding_avoids_collisions(self):
        ctx = padded_context(PSI, 3)
        assert ctx[0] == "x" and len(ctx) == 3 and len(set(ctx)) == 3
        assert "y" not in ctx and "z" not in ctx  # bound names stay free for reuse

    def test_too_small(self):
        with pytest.raises(DomainError):
            padded_context(fo.Eq("x", "y"), 1)


class TestDistribution:
    def test_two_points(self):
        f = assignment_distribution(gen_example_structure(1), ["x"])
        assert len(f.points) == 2
        assert set(f.weights) == {iota_exact(F(1, 2))}

    def test_nine_points(self):
        A = fo.FiniteStructure(fo.POSET_SIGNATURE, 3, {"lt": frozenset()})
        f = assignment_distribution(A, ["x", "y"])
        assert len(f.points) == 9
        assert set(f.weights) == {iota_exact(F(1, 9))}

    def test_integral_over_satisfying_set_is_pairing(self):
        for n in range(1, 7):
            A = gen_example_structure(n)
            f = assignment_distribution(A, ["x"])
            sat = fo.satisfying_set(A, PSI, ["x"])
            assert integrate(f, sat) == stone_pairing(A, PSI).gamma


class TestPadding:
    def test_example_structure(self):
        assert check_padding_invariance(gen_example_structure(2), PSI, 1, 3) is None

    def test_sentences(self):
        phi = fo.parse_formula("exists x. exists y. lt(x,y)", fo.POSET_SIGNATURE)
        assert check_padding_invariance(gen_example_structure(2), phi, 0, 2) is None

    @settings(max_examples=60, deadline=None)
    @given(structures(), formulas())
    def test_random_corpus(self, A, phi):
        assert check_padding_invariance(A, phi, 2, 4) is None

    def test_rejects_shrinking(self):
        with pytest.raises(DomainError):
            check_padding_invariance(gen_example_structure(2), PSI, 3, 1)


class TestSequences:
    def test_psi_values(self):
        rep = pairing_sequence(FENCE, PSI, horizon=12)
        expected = [
            F(0), F(2, 3), F(0), F(2, 4), F(0), F(2, 5),
            F(0), F(2, 6), F(0), F(2, 7), F(0), F(2, 8),
        ]
        assert [r.classical for r in rep.results] == expected
        assert all(v.exact for v in rep.values)

    def test_psi_verdict(self):
        rep = pairing_sequence(FENCE, PSI, horizon=12)
        assert rep.exact
        assert rep.verdict.kind is VerdictKind.CONVERGES_EXACT
        assert rep.verdict.limit == ZERO
        assert rep.classical_estimate == 0

    def test_not_psi_values(self):
        rep = pairing_sequence(FENCE, Not(PSI), horizon=12)
        expected = [
            F(1), F(1, 3), F(1), F(2, 4), F(1), F(3, 5),
            F(1), F(4, 6), F(1), F(5, 7), F(1), F(6, 8),
        ]
        assert [r.classical for r in rep.results] == expected

    def test_not_psi_verdict(self):
        rep = pairing_sequence(FENCE, Not(PSI), horizon=12)
        assert rep.exact
        assert rep.verdict.kind is VerdictKind.DIVERGENT_AT_HORIZON
        assert rep.odd.kind is VerdictKind.CONVERGES_EXACT
        assert rep.odd.limit == ONE
        assert rep.even.kind is VerdictKind.CONVERGES_APPROX
        assert rep.even.limit == ONE_APPROX

    def test_closed_form_recognised_up_to_renaming(self):
        text = "(forall w. !lt(x,w)) & (exists u. !lt(u,x) & !(u = x))"
        phi = fo.parse_formula(text, fo.POSET_SIGNATURE)
        rep = pairing_sequence(FENCE, phi, horizon=8)
        assert rep.exact

    def test_constant_family(self):
        rep = pairing_sequence(ConstantFamily(gen_example_structure(2)), PSI, horizon=8)
        assert not rep.exact
        assert rep.verdict.kind is VerdictKind.CONVERGES_EXACT
        assert rep.verdict.limit == iota_exact(F(2, 3))

    def test_heuristic_without_closed_form(self):
        # a formula the fence family has no closed form for
        phi = fo.parse_formula("exists y. lt(x,y)", fo.POSET_SIGNATURE)
        rep = pairing_sequence(FENCE, phi, horizon=12)
        assert not rep.exact
        assert rep.verdict.kind in (
            VerdictKind.DIVERGENT_AT_HORIZON,
            VerdictKind.INCONCLUSIVE,
        )

    def test_horizon_guard(self):
        with pytest.raises(DomainError):
            pairing_sequence(FENCE, PSI, horizon=3)


class TestPairingResult:
    def test_invariants(self):
        r = PairingResult.from_counts(2, 4)
        assert r.classical == F(1, 2)
        assert r.gamma == iota_exact(F(1, 2))
        assert r.gamma.exact

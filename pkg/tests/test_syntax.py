import random
from fractions import Fraction

import pytest

from goedel_omega.embedding import phi_stream, psi_stream
from goedel_omega.numerics import ConvergenceHint, HintKind
from goedel_omega.syntax import (BOTTOM, TOP, Atom, Bottom, Conj, CountConj, CountDisj,
                                 FormulaStream, Implies, RatConst, RealConst, constant_stream,
                                 guaranteed_q_tier, iff, is_finite, is_q_tier, neg, or_,
                                 structural_eq_to_depth, subformulas_to_depth, top)

from formula_gen import finite_formula

p, q = Atom(0), Atom(1)


def ones_minus_tenths():
    return FormulaStream(lambda i: RatConst(1 - Fraction(1, 10**i)),
                         ConvergenceHint.decimal(HintKind.MONOTONE_UP))


class TestDerivedForms:
    def test_negation_and_top(self):
        assert neg(p) == Implies(p, Bottom())
        assert top() == Implies(Bottom(), Bottom())

    def test_iff_shape(self):
        assert iff(p, q) == Conj(Implies(p, q), Implies(q, p))

    def test_or_shape(self):
        expected = Conj(Implies(Implies(p, q), q), Implies(Implies(q, p), p))
        assert structural_eq_to_depth(or_(p, q), expected, 20)

    def test_rational_endpoints_normalize(self):
        assert RatConst(0) == BOTTOM and isinstance(RatConst(Fraction(0)), Bottom)
        assert RatConst(1) == Implies(BOTTOM, BOTTOM) == TOP

    def test_rational_out_of_range(self):
        with pytest.raises(ValueError):
            RatConst(Fraction(3, 2))

    def test_negative_atom_rejected(self):
        with pytest.raises(ValueError):
            Atom(-1)


class TestSubformulas:
    def test_bottom(self):
        assert subformulas_to_depth(BOTTOM, 5) == [BOTTOM]

    def test_implication_at_depth_zero(self):
        phi = Implies(p, q)
        assert subformulas_to_depth(phi, 0) == [phi, p, q]

    def test_stream_prefix(self):
        phi = CountDisj(ones_minus_tenths())
        nodes = subformulas_to_depth(phi, 2)
        assert nodes == [phi, RatConst(0), RatConst(Fraction(9, 10))]

    def test_structural_order(self):
        phi = Conj(Implies(p, q), CountConj(constant_stream(p)))
        nodes = subformulas_to_depth(phi, 2)
        assert nodes[:4] == [phi, Implies(p, q), p, q]
        assert nodes[5:] == [p, p]


class TestStructuralEquality:
    def test_reflexive(self, reals):
        phi = Implies(RealConst(reals["sqrt2over2"]), CountDisj(phi_stream(reals["sqrt5over3"])))
        assert structural_eq_to_depth(phi, phi, 20)

    def test_canonical_rationals(self):
        assert structural_eq_to_depth(RatConst(Fraction(1, 2)), RatConst(Fraction(2, 4)), 3)

    @pytest.mark.parametrize("n", [1, 5, 20])
    def test_phi_vs_psi_differ(self, reals, n):
        d = reals["sqrt2over2"]
        assert not structural_eq_to_depth(CountDisj(phi_stream(d)), CountConj(psi_stream(d)), n)

    def test_distinct_streams_equal_elementwise(self):
        a = CountDisj(ones_minus_tenths())
        b = CountDisj(ones_minus_tenths())
        assert a != b
        assert structural_eq_to_depth(a, b, 20)

    def test_stream_difference_beyond_depth_is_invisible(self):
        a = FormulaStream(lambda i: RatConst(Fraction(1, 2)))
        b = FormulaStream(lambda i: RatConst(Fraction(1, 2)) if i < 5 else p)
        assert structural_eq_to_depth(CountConj(a), CountConj(b), 5)
        assert not structural_eq_to_depth(CountConj(a), CountConj(b), 6)

    def test_real_constants_compare_by_digits(self, reals):
        from goedel_omega.numerics import sqrt_stream
        same = sqrt_stream("1/2", "other")
        assert structural_eq_to_depth(RealConst(reals["sqrt2over2"]), RealConst(same), 20)
        assert not structural_eq_to_depth(RealConst(reals["sqrt2over2"]),
                                          RealConst(reals["sqrt3over2"]), 20)


class TestStreams:
    def test_generate_is_stable(self):
        calls = []

        def gen(i):
            calls.append(i)
            return Conj(p, RatConst(Fraction(1, i + 2)))

        s = FormulaStream(gen)
        first = s.generate(3)
        assert s.generate(3) is first
        assert calls == [3]

    def test_negative_index(self):
        with pytest.raises(IndexError):
            ones_minus_tenths().generate(-1)


class TestQTier:
    def test_real_const_is_not_q_tier(self, reals):
        assert not is_q_tier(Implies(p, RealConst(reals["sqrt2over2"])), 3)

    def test_closed_under_constructors(self):
        rng = random.Random(3)
        for _ in range(200):
            phi = finite_formula(rng, 5)
            assert is_q_tier(phi, 3)
            assert is_q_tier(CountDisj(constant_stream(phi)), 3)
            assert is_q_tier(CountConj(constant_stream(phi)), 3)
            assert is_finite(phi)

    def test_stream_probe_depth(self, reals):
        late_real = FormulaStream(lambda i: RealConst(reals["sqrt2over2"]) if i == 4 else p)
        assert is_q_tier(CountDisj(late_real), 4)
        assert not is_q_tier(CountDisj(late_real), 5)

    def test_flagged_streams_are_trusted(self, reals):
        phi = CountDisj(phi_stream(reals["sqrt2over2"]))
        assert guaranteed_q_tier(phi)
        assert is_q_tier(phi, 50, trust_flags=False)
        assert not guaranteed_q_tier(CountDisj(FormulaStream(lambda i: p)))

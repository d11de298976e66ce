import random
from fractions import Fraction

import pytest

from goedel_omega.embedding import (FragmentReport, Mode, equivalence_check, fragment_report,
                                    ir_axiom, phi_stream, psi_stream, real_const_formula,
                                    translate)
from goedel_omega.semantics import NoCounterexampleFound, Sampler, Valuation, evaluate
from goedel_omega.syntax import (Atom, Conj, CountConj, CountDisj, FormulaStream, Implies,
                                 RatConst, RealConst, is_q_tier, structural_eq_to_depth)

from formula_gen import REAL_NAMES, RTierGenerator, finite_formula
from oracles import oracle_bracket, oracle_digits, oracle_floor

F = Fraction
p = Atom(0)


@pytest.fixture
def root_half(reals):
    return reals["sqrt2over2"]


class TestPhiPsi:
    def test_phi_starts_at_zero(self, root_half):
        assert phi_stream(root_half).generate(0) == RatConst(0)

    def test_phi_third_truncation(self, root_half):
        assert oracle_floor("sqrt2over2", 3) == 707
        assert phi_stream(root_half).generate(3) == RatConst(F(707, 1000))

    def test_psi_elements(self, root_half):
        psi = psi_stream(root_half)
        assert psi.generate(0) == RatConst(1)
        assert psi.generate(1) == RatConst(F(8, 10))
        assert psi.generate(3) == RatConst(F(708, 1000))

    @pytest.mark.parametrize("name", REAL_NAMES)
    def test_truncation_bounds(self, reals, name):
        lo24, hi24 = oracle_bracket(name)
        d = reals[name]
        lower = [e.q if isinstance(e, RatConst) else F(0) for e in phi_stream(d).take(13)]
        upper = [e.q if isinstance(e, RatConst) else F(1) for e in psi_stream(d).take(13)]
        assert all(x <= lo24 for x in lower) and all(hi24 <= y for y in upper)
        assert lower == sorted(lower) and upper == sorted(upper, reverse=True)
        digits = oracle_digits(name, 12)
        for i in range(1, 13):
            # a nonzero digit strictly raises the lower truncation
            assert (lower[i] > lower[i - 1]) == (digits[i - 1] != 0)

    def test_streams_are_shared(self, root_half):
        assert phi_stream(root_half) is phi_stream(root_half)
        assert psi_stream(root_half).name == "Psi(sqrt2over2)"


class TestRealConstFormula:
    def test_plus_depth_seven(self, root_half):
        lo24, hi24 = oracle_bracket("sqrt2over2")
        iv = evaluate(real_const_formula(root_half, Mode.PLUS), Valuation(), 7)
        assert F(707106, 10**6) <= iv.lo and iv.hi <= F(707107, 10**6) + F(1, 10**6)
        assert iv.lo <= lo24 and hi24 <= iv.hi

    def test_minus_depth_seven(self, root_half):
        lo24, hi24 = oracle_bracket("sqrt2over2")
        iv = evaluate(real_const_formula(root_half, Mode.MINUS), Valuation(), 7)
        assert iv.lo <= lo24 and hi24 <= iv.hi

    @pytest.mark.parametrize("name", REAL_NAMES)
    def test_modes_intersect(self, reals, name):
        d = reals[name]
        for n in range(1, 16):
            a = evaluate(real_const_formula(d, Mode.PLUS), Valuation(), n)
            b = evaluate(real_const_formula(d, Mode.MINUS), Valuation(), n)
            assert a.intersects(b)
            assert a.width <= F(1, 10 ** (n - 1)) and b.width <= F(1, 10 ** (n - 1))


class TestIrAxiom:
    def test_shape(self, root_half):
        ax = ir_axiom(root_half, Mode.PLUS)
        assert isinstance(ax, Conj)
        assert isinstance(ax.lhs, Implies) and isinstance(ax.rhs, Implies)
        assert isinstance(ax.lhs.lhs, RealConst) and isinstance(ax.lhs.rhs, CountDisj)

    @pytest.mark.parametrize("mode", list(Mode))
    def test_sides_intersect(self, root_half, mode):
        ax = ir_axiom(root_half, mode)
        for n in range(1, 12):
            left = evaluate(ax.lhs.lhs, Valuation(), n)
            right = evaluate(ax.lhs.rhs, Valuation(), n)
            assert left.intersects(right)

    def test_translation_is_q_tier(self, root_half):
        assert is_q_tier(translate(ir_axiom(root_half, Mode.PLUS), Mode.PLUS), 20,
                         trust_flags=False)


class TestTranslate:
    def test_rational_fixed(self):
        half = RatConst(F(1, 2))
        assert translate(half, Mode.PLUS) == half

    def test_homomorphic_implication(self, root_half):
        out = translate(Implies(p, RealConst(root_half)), Mode.PLUS)
        expected = Implies(p, CountDisj(phi_stream(root_half)))
        assert structural_eq_to_depth(out, expected, 20)

    def test_minus_uses_psi(self, root_half):
        out = translate(RealConst(root_half), Mode.MINUS)
        assert isinstance(out, CountConj) and out.stream is psi_stream(root_half)

    @pytest.mark.parametrize("mode", list(Mode))
    def test_identity_on_q_tier(self, mode):
        rng = random.Random(8)
        for _ in range(100):
            phi = finite_formula(rng, 5)
            assert structural_eq_to_depth(translate(phi, mode), phi, 20)

    def test_streams_translate_lazily(self, root_half):
        calls = []

        def gen(i):
            calls.append(i)
            return Conj(p, RealConst(root_half))

        out = translate(CountDisj(FormulaStream(gen)), Mode.PLUS)
        assert calls == []
        assert isinstance(out.stream.generate(2).rhs, CountDisj)
        assert calls == [2]

    @pytest.mark.parametrize("mode", list(Mode))
    def test_output_has_no_real_constants(self, reals, mode):
        rng = random.Random(30)
        gen = RTierGenerator(reals, seed=30)
        for _ in range(30):
            phi = gen.formula(rng, 4)
            assert is_q_tier(translate(phi, mode), 10, trust_flags=False)


class TestEquivalenceCheck:
    def test_rational(self):
        verdict = equivalence_check(RatConst(F(1, 3)), Mode.PLUS, 4)
        assert isinstance(verdict, NoCounterexampleFound)

    @pytest.mark.parametrize("depth", [1, 2, 5, 9])
    def test_real_constant(self, root_half, depth):
        verdict = equivalence_check(RealConst(root_half), Mode.PLUS, depth)
        assert isinstance(verdict, NoCounterexampleFound)

    @pytest.mark.parametrize("mode", list(Mode))
    def test_random_formulas(self, reals, mode):
        rng = random.Random(40)
        gen = RTierGenerator(reals, seed=40)
        for k in range(10):
            phi = gen.formula(rng, 4)
            verdict = equivalence_check(phi, mode, 5, Sampler(seed=k, sample_count=200,
                                                              grid_limit=200))
            assert isinstance(verdict, NoCounterexampleFound)


class TestFragments:
    def test_plus(self, root_half):
        report = fragment_report(translate(RealConst(root_half), Mode.PLUS), 5)
        assert report == FragmentReport(False, True, False)

    def test_minus(self, root_half):
        report = fragment_report(translate(RealConst(root_half), Mode.MINUS), 5)
        assert report == FragmentReport(True, False, False)

    def test_rational(self):
        assert fragment_report(RatConst(F(1, 2)), 5) == FragmentReport(False, False, False)

    def test_render(self):
        assert str(FragmentReport(False, True, False)) == \
            "count_conj=false count_disj=true real_const=false"


def test_mode_parse():
    assert Mode.parse("+") is Mode.PLUS and Mode.parse("minus") is Mode.MINUS
    with pytest.raises(ValueError):
        Mode.parse("*")

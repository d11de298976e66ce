"""Infinitary propositional Gödel logic over [0, 1] with rational constants.

Real constants are given by decimal digit streams and can be translated
into countable disjunctions or conjunctions of rational constants.
"""

from .embedding import (FragmentReport, Mode, equivalence_check, fragment_report, ir_axiom,
                        phi_stream, psi_stream, real_const_formula, translate)
from .numerics import (DigitStream, DigitStreamError, TruthInterval, complement, file_stream,
                       periodic_stream, sqrt_stream, truncate, upper_truncate)
from .parser import ParseError, StreamRegistry, parse, parse_valuation, print_formula
from .semantics import (Counterexample, EvalConfig, NoCounterexampleFound, Sampler, Valuation,
                        check_entailment, check_tautology, eval_exact, evaluate)
from .syntax import (Atom, Bottom, Conj, CountConj, CountDisj, FormulaStream, Implies, RatConst,
                     RealConst, iff, neg, or_, structural_eq_to_depth, subformulas_to_depth, top)

__version__ = "0.1.0"

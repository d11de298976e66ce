"""Seeded random formula generators shared by the unit and acceptance tests."""

import random
from fractions import Fraction

from goedel_omega.embedding import phi_stream, psi_stream
from goedel_omega.numerics import HINT_NONE
from goedel_omega.syntax import (BOTTOM, Atom, Conj, CountConj, CountDisj, FormulaStream,
                                 Implies, RatConst, RealConst, iff, neg, or_)

REAL_NAMES = ["sqrt2over2", "sqrt3over2", "sqrt5over3", "sqrt2minus1", "goldenratio_conj"]


def random_rational(rng):
    den = rng.randint(1, 12)
    return Fraction(rng.randint(0, den), den)


def finite_formula(rng, depth, atoms=4, derived=True):
    """Random formula without countable connectives or real constants."""
    if depth <= 0 or rng.random() < 0.25:
        k = rng.random()
        if k < 0.6:
            return Atom(rng.randrange(atoms))
        if k < 0.75:
            return BOTTOM
        return RatConst(random_rational(rng))
    ops = ["imp", "conj"] + (["or", "neg", "iff"] if derived else [])
    op = rng.choice(ops)
    if op == "neg":
        return neg(finite_formula(rng, depth - 1, atoms, derived))
    a = finite_formula(rng, depth - 1, atoms, derived)
    b = finite_formula(rng, depth - 1, atoms, derived)
    return {"imp": Implies, "conj": Conj, "or": or_, "iff": iff}[op](a, b)


class RTierGenerator:
    """Random R-tier formulas over registered reals and lazily generated streams.

    ``only`` restricts countable connectives to one kind ("disj" or "conj").
    Streams are registered under fresh names when a registry is given, so the
    output stays printable and re-parseable.
    """

    def __init__(self, reals, seed, registry=None, only=None, atoms=3, real_leaves=True):
        self.real_leaves = real_leaves
        self.reals = reals
        self.seed = seed
        self.registry = registry
        self.only = only
        self.atoms = atoms
        self.counter = 0

    def _stream(self, rng, depth):
        """A random-element stream with no hint; elements are seeded per index."""
        self.counter += 1
        # element content depends only on rng, not on generation order
        tag = f"{self.seed}/{rng.getrandbits(64)}"
        gen = lambda i: self.formula(random.Random(f"{tag}/{i}"), depth)
        stream = FormulaStream(gen, HINT_NONE)
        if self.registry is not None:
            self.registry.add_stream(f"s{self.seed}x{self.counter}", stream)
        return stream

    def _countable(self, rng, depth):
        kinds = {"disj": ["phi", "rand_disj"], "conj": ["psi", "rand_conj"]}
        choices = kinds.get(self.only, kinds["disj"] + kinds["conj"])
        kind = rng.choice(choices)
        if kind == "phi":
            return CountDisj(phi_stream(self.reals[rng.choice(REAL_NAMES)]))
        if kind == "psi":
            return CountConj(psi_stream(self.reals[rng.choice(REAL_NAMES)]))
        stream = self._stream(rng, max(depth - 1, 0))
        return CountDisj(stream) if kind == "rand_disj" else CountConj(stream)

    def formula(self, rng, depth):
        if depth <= 0 or rng.random() < 0.2:
            k = rng.random()
            if k < 0.4:
                return Atom(rng.randrange(self.atoms))
            if k < 0.7 and self.real_leaves:
                return RealConst(self.reals[rng.choice(REAL_NAMES)])
            if k < 0.8:
                return BOTTOM if k >= 0.7 else RatConst(random_rational(rng))
            return RatConst(random_rational(rng))
        k = rng.random()
        if k < 0.2:
            return self._countable(rng, depth)
        a = self.formula(rng, depth - 1)
        b = self.formula(rng, depth - 1)
        return Implies(a, b) if k < 0.6 else Conj(a, b)

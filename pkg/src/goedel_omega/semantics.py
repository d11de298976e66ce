"""Valuations, interval evaluation and sampling-based validity checks.

Infinitary connectives are evaluated by looking at the first ``depth``
stream elements. The result is a :class:`TruthInterval` that encloses the
true value whenever every stream's convergence hint is truthful. Finite
formulas without real constants always evaluate to a point interval.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .numerics import ONE, ZERO, HintKind, TruthInterval, pow10, truncate, unit_rational
from .syntax import (Atom, Bottom, Conj, CountConj, CountDisj, Formula, Implies,
                     RatConst, RealConst, atoms_of, is_finite, iter_subformulas)


@dataclass(frozen=True, eq=True)
class Valuation:
    """Assignment of atoms to truth values; unlisted atoms get ``default``."""

    assignments: Mapping[int, Fraction] = field(default_factory=dict, hash=False)
    default: Fraction = ZERO

    def __post_init__(self):
        object.__setattr__(self, "assignments",
                           {int(k): unit_rational(v) for k, v in self.assignments.items()})
        object.__setattr__(self, "default", unit_rational(self.default))

    def __call__(self, atom_id: int) -> Fraction:
        return self.assignments.get(atom_id, self.default)

    @classmethod
    def constant(cls, value) -> "Valuation":
        return cls({}, value)


@dataclass(frozen=True)
class EvalConfig:
    depth: int = 10

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("truncation depth must be at least 1")


@dataclass(frozen=True)
class Sampler:
    seed: int = 0
    sample_count: int = 1000
    grid_limit: int = 4096

    def __post_init__(self):
        if self.sample_count < 0:
            raise ValueError("sample_count must be nonnegative")


@dataclass(frozen=True)
class NoCounterexampleFound:
    """No refuting valuation among the ones tried. This is not a proof of validity."""

    samples: int
    grid_points: int = 0


@dataclass(frozen=True)
class Counterexample:
    valuation: Valuation
    interval: TruthInterval
    source: str = "grid"
    index: int = 0
    premise_lo: Fraction | None = None

    def __post_init__(self):
        bound = ONE if self.premise_lo is None else self.premise_lo
        if not self.interval.hi < bound:
            raise ValueError("a counterexample needs an interval certainly below the bound")


Verdict = Union[NoCounterexampleFound, Counterexample]


def implies_interval(a: Fraction, b: Fraction, c: Fraction,
                     d: Fraction) -> tuple[Fraction, Fraction]:
    """Enclosure of ``x -> y`` for ``x`` in [a, b] and ``y`` in [c, d]."""
    if b <= c:
        return ONE, ONE
    if a > d:
        return c, d
    return c, ONE


def implies_value(x: Fraction, y: Fraction) -> Fraction:
    return ONE if x <= y else y


class Evaluator:
    """Interval evaluator at a fixed truncation depth.

    Atom-free subformulas are cached by node identity, so repeated evaluation
    of one formula under many valuations only recomputes the parts that
    depend on atoms.
    """

    def __init__(self, depth: int):
        EvalConfig(depth)
        self.depth = depth
        self._closed: dict[int, tuple[Formula, tuple[Fraction, Fraction]]] = {}

    def interval(self, phi: Formula, valuation: Valuation) -> TruthInterval:
        lo, hi, _ = self._eval(phi, valuation)
        return TruthInterval(lo, hi)

    def _eval(self, phi: Formula, val: Valuation) -> tuple[Fraction, Fraction, bool]:
        hit = self._closed.get(id(phi))
        if hit is not None and hit[0] is phi:
            return hit[1][0], hit[1][1], True
        if isinstance(phi, Atom):
            v = val(phi.id)
            return v, v, False
        if isinstance(phi, Bottom):
            lo = hi = ZERO
            closed = True
        elif isinstance(phi, RatConst):
            lo = hi = phi.q
            closed = True
        elif isinstance(phi, RealConst):
            lo = truncate(phi.digits, self.depth)
            hi = lo + pow10(self.depth)
            closed = True
        elif isinstance(phi, Conj):
            a, b, c1 = self._eval(phi.lhs, val)
            c, d, c2 = self._eval(phi.rhs, val)
            lo, hi, closed = min(a, c), min(b, d), c1 and c2
        elif isinstance(phi, Implies):
            a, b, c1 = self._eval(phi.lhs, val)
            c, d, c2 = self._eval(phi.rhs, val)
            (lo, hi), closed = implies_interval(a, b, c, d), c1 and c2
        elif isinstance(phi, (CountConj, CountDisj)):
            lo, hi, closed = self._eval_stream(phi, val)
        else:
            raise TypeError(f"not a formula: {phi!r}")
        if closed:
            self._closed[id(phi)] = (phi, (lo, hi))
        return lo, hi, closed

    def _eval_stream(self, phi, val):
        los, his, closed = [], [], True
        for elem in phi.stream.take(self.depth):
            a, b, c = self._eval(elem, val)
            los.append(a)
            his.append(b)
            closed = closed and c
        hint = phi.stream.hint
        lo, hi = _stream_bounds(isinstance(phi, CountConj), los, his, hint.kind,
                                hint.width_at(self.depth), ZERO, ONE)
        return lo, hi, closed


def _stream_bounds(conj, los, his, kind, width, zero, one):
    # generic over Fractions and scaled integers
    if conj:
        lo, hi = zero, min(his)
        if kind is HintKind.MONOTONE_DOWN:
            lo = max(zero, min(los) - width)
    else:
        lo, hi = max(los), one
        if kind is HintKind.MONOTONE_UP:
            hi = min(one, max(his) + width)
    return lo, hi


class _ScaledPlan:
    """Fixed formulas compiled for repeated evaluation at one depth.

    Every truth value is kept as an integer numerator over a common
    denominator ``scale``. The scale covers all constants and hint widths,
    twice their lcm for grid midpoints, and every denominator up to 64, so
    grid points and random samples need no Fraction arithmetic. Valuations
    outside that lattice fall back to :class:`Evaluator`.
    """

    def __init__(self, formulas: Sequence[Formula], depth: int):
        self.depth = depth
        self._formulas = list(formulas)
        self._fallback = Evaluator(depth)
        self._ir: dict[int, tuple] = {}
        self._keep: list[Formula] = []
        denoms = {1}
        roots = [self._lower(phi, denoms) for phi in self._formulas]
        scale = math.lcm(*range(1, 65), *denoms) * 2
        self.scale = scale
        self._atoms = sorted({p for phi in self._formulas for p in atoms_of(phi, depth)})
        slots = {p: k for k, p in enumerate(self._atoms)}
        built: dict[int, object] = {}
        self._fns = [self._compile(r, scale, slots, built) for r in roots]

    def _lower(self, phi, denoms):
        # ("const", lo, hi) for atom-free nodes, otherwise an op tuple
        key = id(phi)
        hit = self._ir.get(key)
        if hit is not None:
            return hit
        self._keep.append(phi)
        if isinstance(phi, Atom):
            node = ("atom", phi.id)
        elif isinstance(phi, (Bottom, RatConst, RealConst)):
            iv = self._fallback.interval(phi, Valuation())
            node = ("const", iv.lo, iv.hi)
        elif isinstance(phi, (Conj, Implies)):
            l, r = self._lower(phi.lhs, denoms), self._lower(phi.rhs, denoms)
            op = "conj" if isinstance(phi, Conj) else "imp"
            if l[0] == "const" and r[0] == "const":
                if op == "conj":
                    node = ("const", min(l[1], r[1]), min(l[2], r[2]))
                else:
                    node = ("const", *implies_interval(l[1], l[2], r[1], r[2]))
            else:
                node = (op, l, r)
        elif isinstance(phi, (CountConj, CountDisj)):
            kids = [self._lower(e, denoms) for e in phi.stream.take(self.depth)]
            hint = phi.stream.hint
            width = hint.width_at(self.depth)
            denoms.add(Fraction(width).denominator)
            conj = isinstance(phi, CountConj)
            if all(k[0] == "const" for k in kids):
                node = ("const", *_stream_bounds(conj, [k[1] for k in kids],
                                                 [k[2] for k in kids], hint.kind, width,
                                                 ZERO, ONE))
            else:
                node = ("stream", conj, kids, hint.kind, width)
        else:
            raise TypeError(f"not a formula: {phi!r}")
        if node[0] == "const":
            denoms.update((Fraction(node[1]).denominator, Fraction(node[2]).denominator))
        self._ir[key] = node
        return node

    def _compile(self, node, scale, slots, built):
        hit = built.get(id(node))
        if hit is not None:
            return hit
        tag = node[0]
        if tag == "const":
            pair = (int(node[1] * scale), int(node[2] * scale))
            fn = lambda env: pair
        elif tag == "atom":
            k = slots[node[1]]
            fn = lambda env: (env[k], env[k])
        elif tag == "conj":
            f, g = (self._compile(x, scale, slots, built) for x in node[1:])

            def fn(env):
                a, b = f(env)
                c, d = g(env)
                return (a if a < c else c), (b if b < d else d)
        elif tag == "imp":
            f, g = (self._compile(x, scale, slots, built) for x in node[1:])

            def fn(env):
                a, b = f(env)
                c, d = g(env)
                if b <= c:
                    return scale, scale
                return (c, d) if a > d else (c, scale)
        else:
            _, conj, kids, kind, width = node
            fs = [self._compile(k, scale, slots, built) for k in kids]
            w = int(width * scale)

            def fn(env):
                pairs = [f(env) for f in fs]
                return _stream_bounds(conj, [p[0] for p in pairs], [p[1] for p in pairs],
                                      kind, w, 0, scale)
        built[id(node)] = fn
        return fn

    def scaled(self, val: Valuation) -> list[tuple]:
        """``(lo * scale, hi * scale)`` for each formula under ``val``."""
        scale = self.scale
        env = []
        for p in self._atoms:
            v = val(p)
            if scale % v.denominator:
                return [(iv.lo * scale, iv.hi * scale)
                        for iv in (self._fallback.interval(phi, val) for phi in self._formulas)]
            env.append(v.numerator * (scale // v.denominator))
        return [fn(env) for fn in self._fns]

    def interval(self, pair) -> TruthInterval:
        return TruthInterval(Fraction(pair[0], self.scale), Fraction(pair[1], self.scale))


def _depth(cfg: EvalConfig | int) -> int:
    return cfg.depth if isinstance(cfg, EvalConfig) else EvalConfig(cfg).depth


def evaluate(phi: Formula, valuation: Valuation, cfg: EvalConfig | int) -> TruthInterval:
    """Truth interval of ``phi`` under ``valuation`` at the configured depth."""
    return Evaluator(_depth(cfg)).interval(phi, valuation)


def eval_exact(phi: Formula, valuation: Valuation) -> Fraction:
    """Exact truth value of a finite formula (no countable connectives, no reals)."""
    if not is_finite(phi):
        raise ValueError("eval_exact needs a finite formula without real constants")
    return _exact(phi, valuation)


def _exact(phi: Formula, val: Valuation) -> Fraction:
    if isinstance(phi, Atom):
        return val(phi.id)
    if isinstance(phi, Bottom):
        return ZERO
    if isinstance(phi, RatConst):
        return phi.q
    if isinstance(phi, Conj):
        return min(_exact(phi.lhs, val), _exact(phi.rhs, val))
    if isinstance(phi, Implies):
        return implies_value(_exact(phi.lhs, val), _exact(phi.rhs, val))
    raise TypeError(f"not a finite formula: {phi!r}")


def random_unit_rational(rng: random.Random) -> Fraction:
    den = rng.randint(1, 64)
    return Fraction(rng.randint(0, den), den)


def random_valuation(atoms: Iterable[int], seed: int, index: int) -> Valuation:
    """The ``index``-th seeded valuation; independent of how samples are partitioned."""
    rng = random.Random(f"{seed}:{index}")
    return Valuation({p: random_unit_rational(rng) for p in atoms}, ZERO)


def grid_values(formulas: Sequence[Formula], depth: int) -> list[Fraction]:
    """0, 1, then every constant in the formulas and midpoints of adjacent ones."""
    consts = {ZERO, ONE}
    for phi in formulas:
        for node in iter_subformulas(phi, depth):
            if isinstance(node, RatConst):
                consts.add(node.q)
            elif isinstance(node, RealConst):
                q = truncate(node.digits, depth)
                consts.update((q, q + pow10(depth)))
    ordered = sorted(consts)
    mids = {(a + b) / 2 for a, b in zip(ordered, ordered[1:])}
    rest = sorted((consts | mids) - {ZERO, ONE})
    return [ZERO, ONE] + rest


def candidate_valuations(formulas: Sequence[Formula], cfg: EvalConfig | int,
                         sampler: Sampler):
    """Yield ``(source, index, valuation)``: the boundary grid, then random samples."""
    depth = _depth(cfg)
    atoms = sorted({p for phi in formulas for p in atoms_of(phi, depth)})
    values = grid_values(formulas, depth)
    grid = itertools.product(values, repeat=len(atoms))
    for k, point in enumerate(itertools.islice(grid, sampler.grid_limit)):
        yield "grid", k, Valuation(dict(zip(atoms, point)), ZERO)
    for i in range(sampler.sample_count):
        yield "sample", i, random_valuation(atoms, sampler.seed, i)


def check_tautology(phi: Formula, cfg: EvalConfig | int,
                    sampler: Sampler = Sampler()) -> Verdict:
    """Search for a valuation whose interval lies certainly below 1."""
    plan = _ScaledPlan([phi], _depth(cfg))
    tried = grid = 0
    for source, k, val in candidate_valuations([phi], cfg, sampler):
        tried += 1
        grid += source == "grid"
        (pair,) = plan.scaled(val)
        if pair[1] < plan.scale:
            return Counterexample(val, plan.interval(pair), source, k)
    return NoCounterexampleFound(tried, grid)


def check_entailment(premises: Sequence[Formula], phi: Formula, cfg: EvalConfig | int,
                     sampler: Sampler = Sampler()) -> Verdict:
    """Search for a valuation where every premise is certainly above the conclusion."""
    premises = list(premises)
    plan = _ScaledPlan(premises + [phi], _depth(cfg))
    tried = grid = 0
    for source, k, val in candidate_valuations(premises + [phi], cfg, sampler):
        tried += 1
        grid += source == "grid"
        *prem, pair = plan.scaled(val)
        bound = min((lo for lo, _ in prem), default=plan.scale)
        if bound > pair[1]:
            return Counterexample(val, plan.interval(pair), source, k,
                                  premise_lo=Fraction(bound, plan.scale))
    return NoCounterexampleFound(tried, grid)

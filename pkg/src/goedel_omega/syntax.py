"""Formula AST for infinitary propositional Gödel logic with constants.

Primitive nodes are ``Bottom``, ``Atom``, ``Implies``, ``Conj``,
``CountConj``, ``CountDisj``, ``RatConst`` and ``RealConst``. Negation, top,
the biconditional and binary disjunction are constructor functions that
expand into primitives immediately.

Countable connectives take a :class:`FormulaStream`: an indexed generator
``i -> Formula`` over the naturals, memoized and carrying a convergence hint
for the evaluator.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Union

from .numerics import (HINT_NONE, ONE, ZERO, ConvergenceHint, DigitStream,
                       RationalLike, unit_rational)


class FormulaStream:
    """A countably infinite, deterministic sequence of formulas.

    ``q_tier`` is a constructor-level guarantee that no element contains a
    real constant; it cannot be checked on the whole stream.
    """

    def __init__(self, generate: Callable[[int], "Formula"],
                 hint: ConvergenceHint = HINT_NONE, name: str | None = None,
                 q_tier: bool = False):
        self._generate = generate
        self.hint = hint
        self.name = name
        self.q_tier = q_tier
        self._cache: dict[int, Formula] = {}
        self._lock = threading.Lock()

    def generate(self, i: int) -> "Formula":
        if i < 0:
            raise IndexError("stream indices start at 0")
        try:
            return self._cache[i]
        except KeyError:
            pass
        value = self._generate(i)
        with self._lock:
            # first writer wins so repeated queries return the same object
            return self._cache.setdefault(i, value)

    def take(self, n: int) -> list["Formula"]:
        return [self.generate(i) for i in range(n)]

    def __repr__(self):
        return f"FormulaStream({self.name or '<anonymous>'})"


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Atom:
    id: int

    def __post_init__(self):
        if self.id < 0:
            raise ValueError("atom ids are nonnegative")


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Conj:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True, eq=False)
class CountConj:
    stream: FormulaStream


@dataclass(frozen=True, eq=False)
class CountDisj:
    stream: FormulaStream


@dataclass(frozen=True)
class RatConst:
    """Constant formula with a rational value strictly inside (0, 1).

    ``RatConst(0)`` and ``RatConst(1)`` build ``Bottom()`` and
    ``Implies(Bottom(), Bottom())`` instead.
    """

    q: Fraction

    def __new__(cls, q: RationalLike):
        value = unit_rational(q)
        if value == ZERO:
            return BOTTOM
        if value == ONE:
            return TOP
        return super().__new__(cls)

    def __init__(self, q: RationalLike):
        object.__setattr__(self, "q", unit_rational(q))


@dataclass(frozen=True, eq=False)
class RealConst:
    digits: DigitStream


Formula = Union[Bottom, Atom, Implies, Conj, CountConj, CountDisj, RatConst, RealConst]

BOTTOM = Bottom()
TOP = Implies(BOTTOM, BOTTOM)


def neg(phi: Formula) -> Formula:
    return Implies(phi, BOTTOM)


def top() -> Formula:
    return TOP


def iff(phi: Formula, psi: Formula) -> Formula:
    return Conj(Implies(phi, psi), Implies(psi, phi))


def or_(phi: Formula, psi: Formula) -> Formula:
    return Conj(Implies(Implies(phi, psi), psi), Implies(Implies(psi, phi), phi))


def const(q: RationalLike) -> Formula:
    return RatConst(q)


def children(phi: Formula, n: int) -> list[Formula]:
    """Immediate subformulas, taking the first ``n`` elements of a stream."""
    if isinstance(phi, (Implies, Conj)):
        return [phi.lhs, phi.rhs]
    if isinstance(phi, (CountConj, CountDisj)):
        return phi.stream.take(n)
    return []


def iter_subformulas(phi: Formula, n: int) -> Iterator[Formula]:
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node, n)))


def subformulas_to_depth(phi: Formula, n: int) -> list[Formula]:
    """Pre-order list of nodes; each stream contributes its first ``n`` elements."""
    if n < 0:
        raise ValueError("depth must be nonnegative")
    return list(iter_subformulas(phi, n))


def structural_eq_to_depth(phi: Formula, psi: Formula, n: int) -> bool:
    """AST equality comparing streams on their first ``n`` elements."""
    stack = [(phi, psi)]
    while stack:
        a, b = stack.pop()
        if a is b:
            continue
        if type(a) is not type(b):
            return False
        if isinstance(a, Atom):
            if a.id != b.id:
                return False
        elif isinstance(a, RatConst):
            if a.q != b.q:
                return False
        elif isinstance(a, RealConst):
            if a.digits is not b.digits and a.digits.prefix(n) != b.digits.prefix(n):
                return False
        elif isinstance(a, (CountConj, CountDisj)):
            if a.stream is not b.stream:
                stack.extend(zip(a.stream.take(n), b.stream.take(n)))
        elif isinstance(a, (Implies, Conj)):
            stack.append((a.lhs, b.lhs))
            stack.append((a.rhs, b.rhs))
    return True


def is_q_tier(phi: Formula, n: int, trust_flags: bool = True) -> bool:
    """True when no real constant occurs, probing streams to ``n`` elements.

    With ``trust_flags`` set, streams flagged ``q_tier`` are not unfolded.
    """
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, RealConst):
            return False
        if isinstance(node, (CountConj, CountDisj)):
            if trust_flags and node.stream.q_tier:
                continue
        stack.extend(children(node, n))
    return True


def is_finite(phi: Formula) -> bool:
    """No countable connectives and no real constants anywhere."""
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, (CountConj, CountDisj, RealConst)):
            return False
        stack.extend(children(node, 0))
    return True


def atoms_of(phi: Formula, n: int) -> list[int]:
    """Sorted atom ids occurring within the depth-``n`` unfolding."""
    return sorted({node.id for node in iter_subformulas(phi, n) if isinstance(node, Atom)})


def guaranteed_q_tier(phi: Formula) -> bool:
    """Q-tier without probing: every stream inside must carry the ``q_tier`` flag."""
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, RealConst):
            return False
        if isinstance(node, (CountConj, CountDisj)):
            if not node.stream.q_tier:
                return False
            continue
        stack.extend(children(node, 0))
    return True


def constant_stream(phi: Formula, hint: ConvergenceHint = HINT_NONE,
                    name: str | None = None) -> FormulaStream:
    """The stream repeating ``phi`` forever."""
    return FormulaStream(lambda i: phi, hint, name, q_tier=guaranteed_q_tier(phi))

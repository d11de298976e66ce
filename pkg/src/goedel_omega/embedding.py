"""Rational-constant definitions of real constants and the translations t+ / t-.

An irrational ``r`` given by its digit stream is approached from below by
its decimal truncations ``q_i`` and from above by ``q'_i = 1 - k_i`` where
``k_i`` truncates the expansion of ``1 - r``. ``CountDisj`` over the first
sequence and ``CountConj`` over the second both take the value ``r`` under
every valuation; the translations replace each real constant by one of them.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from importlib import resources

from .numerics import (ONE, ConvergenceHint, DigitStream, HintKind, parse_digit_text,
                       sqrt_stream, truncate, upper_truncate)
from .semantics import EvalConfig, Sampler, Verdict, check_tautology
from .syntax import (Atom, Bottom, Conj, CountConj, CountDisj, Formula, FormulaStream,
                     Implies, RatConst, RealConst, iff, iter_subformulas)


class Mode(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        aliases = {"+": cls.PLUS, "plus": cls.PLUS, "-": cls.MINUS, "minus": cls.MINUS,
                   "−": cls.MINUS}
        try:
            return aliases[text.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown mode {text!r}; use + or -") from None


# The n-th examined element has index n - 1, hence the lag of one.
PHI_HINT = ConvergenceHint.decimal(HintKind.MONOTONE_UP, lag=1)
PSI_HINT = ConvergenceHint.decimal(HintKind.MONOTONE_DOWN, lag=1)

_cache_lock = threading.Lock()


def _cached(key: str, d: DigitStream, build) -> FormulaStream:
    # one stream object per digit stream keeps element memoization shared
    with _cache_lock:
        stream = d.derived.get(key)
        if stream is None:
            stream = d.derived[key] = build()
        return stream


def phi_stream(d: DigitStream) -> FormulaStream:
    """Lower truncations ``0, 0.d1, 0.d1d2, ...`` as rational constants."""
    return _cached("phi", d, lambda: FormulaStream(
        lambda i: RatConst(truncate(d, i)), PHI_HINT, f"Phi({d.name})", q_tier=True))


def psi_stream(d: DigitStream) -> FormulaStream:
    """Upper truncations ``1, q_1 + 1/10, q_2 + 1/100, ...`` as rational constants."""
    return _cached("psi", d, lambda: FormulaStream(
        lambda i: RatConst(upper_truncate(d, i) if i else ONE), PSI_HINT,
        f"Psi({d.name})", q_tier=True))


def real_const_formula(d: DigitStream, mode: Mode) -> Formula:
    if mode is Mode.PLUS:
        return CountDisj(phi_stream(d))
    return CountConj(psi_stream(d))


def ir_axiom(d: DigitStream, mode: Mode) -> Formula:
    """Irrational-reduction axiom instance: the real constant iff its definition."""
    return iff(RealConst(d), real_const_formula(d, mode))


def translate(phi: Formula, mode: Mode) -> Formula:
    """Replace every real constant by its rational-constant definition.

    Streams are translated lazily, element by element. Streams that are
    already guaranteed free of real constants are returned unchanged.
    """
    if isinstance(phi, (Bottom, Atom, RatConst)):
        return phi
    if isinstance(phi, RealConst):
        return real_const_formula(phi.digits, mode)
    if isinstance(phi, Implies):
        return Implies(translate(phi.lhs, mode), translate(phi.rhs, mode))
    if isinstance(phi, Conj):
        return Conj(translate(phi.lhs, mode), translate(phi.rhs, mode))
    if isinstance(phi, (CountConj, CountDisj)):
        stream = phi.stream
        if not stream.q_tier:
            source = stream
            stream = FormulaStream(lambda i: translate(source.generate(i), mode),
                                   source.hint, None, q_tier=True)
        return type(phi)(stream)
    raise TypeError(f"not a formula: {phi!r}")


def equivalence_check(phi: Formula, mode: Mode, cfg: EvalConfig | int,
                      sampler: Sampler = Sampler()) -> Verdict:
    """Try to refute ``phi <-> translate(phi, mode)`` by valuation search."""
    return check_tautology(iff(phi, translate(phi, mode)), cfg, sampler)


@dataclass(frozen=True)
class FragmentReport:
    uses_count_conj: bool
    uses_count_disj: bool
    uses_real_const: bool

    def __str__(self):
        flag = lambda b: "true" if b else "false"
        return (f"count_conj={flag(self.uses_count_conj)} "
                f"count_disj={flag(self.uses_count_disj)} "
                f"real_const={flag(self.uses_real_const)}")


def fragment_report(phi: Formula, depth: int) -> FragmentReport:
    conj = disj = real = False
    for node in iter_subformulas(phi, depth):
        conj |= isinstance(node, CountConj)
        disj |= isinstance(node, CountDisj)
        real |= isinstance(node, RealConst)
    return FragmentReport(conj, disj, real)


def builtin_reals() -> dict[str, DigitStream]:
    """The named irrationals available to the parser and CLI."""
    reals = {
        "sqrt2over2": sqrt_stream("1/2", "sqrt2over2"),
        "sqrt3over2": sqrt_stream("3/4", "sqrt3over2"),
        "sqrt5over3": sqrt_stream("5/9", "sqrt5over3"),
    }
    data = resources.files("goedel_omega") / "data"
    for name in ("sqrt2minus1", "goldenratio_conj"):
        digits = parse_digit_text((data / f"{name}.digits").read_text("ascii"), name)
        reals[name] = DigitStream(name, lambda k, ds=digits: ds, irrational=True,
                                  length=len(digits))
    return reals

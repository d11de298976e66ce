"""Concrete syntax: parsing and printing formulas, valuation and formula files.

Grammar, loosest binding first::

    formula := equiv ('->' formula)?          right associative
    equiv   := disj ('<->' disj)*             left associative, derived
    disj    := conj ('|' conj)*               left associative, derived
    conj    := unary ('&' unary)*             left associative
    unary   := '~' unary | primary            derived negation
    primary := 'p'<digits> | '_|_' | '(' formula ')'
             | '#(' int '/' int ')' | '#' int ['.' digits]
             | '#real(' NAME ')'
             | '/\\[' ref ']' | '\\/[' ref ']'
    ref     := NAME | 'Phi(' NAME ')' | 'Psi(' NAME ')'

Derived connectives are expanded while parsing, so printing a parsed
formula shows only ``->``, ``&`` and the primitive leaves.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .embedding import builtin_reals, phi_stream, psi_stream
from .numerics import DigitStream
from .semantics import Valuation
from .syntax import (BOTTOM, Atom, Bottom, Conj, CountConj, CountDisj, Formula,
                     FormulaStream, Implies, RatConst, RealConst, iff, neg, or_)


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.message = message
        self.position = position
        self.text = text
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"parse error{where}: {message}")


class StreamRegistry:
    """Named digit streams and formula streams that the syntax can refer to.

    ``Phi(NAME)`` and ``Psi(NAME)`` are always available for every
    registered digit stream ``NAME``.
    """

    def __init__(self):
        self._reals: dict[str, DigitStream] = {}
        self._streams: dict[str, FormulaStream] = {}

    @classmethod
    def default(cls) -> "StreamRegistry":
        reg = cls()
        for name, d in builtin_reals().items():
            reg.add_real(name, d)
        return reg

    def _check_new(self, name: str):
        if not _NAME_RE.fullmatch(name):
            raise ValueError(f"invalid registry name {name!r}")
        if name in self._reals or name in self._streams:
            raise ValueError(f"name {name!r} is already registered")

    def add_real(self, name: str, d: DigitStream) -> DigitStream:
        self._check_new(name)
        if d.name != name:
            d.name = name
        self._reals[name] = d
        return d

    def add_stream(self, name: str, stream: FormulaStream) -> FormulaStream:
        self._check_new(name)
        if stream.name is None:
            stream.name = name
        elif stream.name != name:
            raise ValueError(f"stream is already named {stream.name!r}")
        self._streams[name] = stream
        return stream

    def real(self, name: str) -> DigitStream:
        try:
            return self._reals[name]
        except KeyError:
            raise KeyError(f"unknown real constant {name!r}") from None

    def stream(self, name: str) -> FormulaStream:
        try:
            return self._streams[name]
        except KeyError:
            raise KeyError(f"unknown formula stream {name!r}") from None

    def real_names(self) -> list[str]:
        return sorted(self._reals)

    def __contains__(self, name: str) -> bool:
        return name in self._reals or name in self._streams


_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_NAME_RE = re.compile(_NAME)

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<bot>_\|_)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<and>&)
  | (?P<or>\|)
  | (?P<not>~)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<lb>\[)
  | (?P<rb>\])
  | (?P<bigand>/\\)
  | (?P<bigor>\\/)
  | (?P<rat>\#\(\s*(?P<num>\d+)\s*/\s*(?P<den>\d+)\s*\))
  | (?P<real>\#real\(\s*(?P<rname>""" + _NAME + r""")\s*\))
  | (?P<dec>\#(?P<int>\d+)(?:\.(?P<frac>\d+))?)
  | (?P<atom>p(?P<aid>\d+)(?![A-Za-z0-9_]))
  | (?P<name>""" + _NAME + r""")
  | (?P<preview><.*)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int
    match: re.Match


def tokenize(text: str) -> Iterator[_Token]:
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        if m.lastgroup != "ws":
            yield _Token(_kind(m), m.group(), pos, m)
        pos = m.end()


def _kind(m: re.Match) -> str:
    # lastgroup would report the innermost named group for composite tokens
    for kind in ("bot", "iff", "imp", "and", "or", "not", "lp", "rp", "lb", "rb",
                 "bigand", "bigor", "rat", "real", "dec", "atom", "name", "preview"):
        if m.group(kind) is not None:
            return kind
    raise AssertionError(m)


def _literal_value(tok: _Token) -> Fraction:
    m = tok.match
    if tok.kind == "rat":
        den = int(m.group("den"))
        if den == 0:
            raise ParseError("zero denominator in rational constant", tok.pos)
        value = Fraction(int(m.group("num")), den)
    else:
        frac = m.group("frac") or ""
        value = Fraction(int(m.group("int") + frac), 10 ** len(frac))
    if value > 1:
        raise ParseError(f"rational constant {value} is outside [0, 1]", tok.pos)
    return value


class _Parser:
    def __init__(self, text: str, registry: StreamRegistry):
        self.text = text
        self.registry = registry
        self.tokens = list(tokenize(text))
        self.i = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        pos = tok.pos if tok is not None else len(self.text)
        return ParseError(message, pos, self.text)

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            found = "end of input" if tok is None else repr(tok.text)
            raise self.error(f"expected {what}, found {found}", tok)
        self.i += 1
        return tok

    def accept(self, kind: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.kind == kind:
            self.i += 1
            return True
        return False

    def parse(self) -> Formula:
        if not self.tokens:
            raise self.error("empty formula")
        phi = self.formula()
        tok = self.peek()
        if tok is not None:
            raise self.error(f"unexpected {tok.text!r}", tok)
        return phi

    def formula(self) -> Formula:
        lhs = self.equiv()
        if self.accept("imp"):
            return Implies(lhs, self.formula())
        return lhs

    def equiv(self) -> Formula:
        phi = self.disj()
        while self.accept("iff"):
            phi = iff(phi, self.disj())
        return phi

    def disj(self) -> Formula:
        phi = self.conj()
        while self.accept("or"):
            phi = or_(phi, self.conj())
        return phi

    def conj(self) -> Formula:
        phi = self.unary()
        while self.accept("and"):
            phi = Conj(phi, self.unary())
        return phi

    def unary(self) -> Formula:
        if self.accept("not"):
            return neg(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        self.i += 1
        kind = tok.kind
        if kind == "atom":
            return Atom(int(tok.match.group("aid")))
        if kind == "bot":
            return BOTTOM
        if kind == "lp":
            phi = self.formula()
            self.expect("rp", "')'")
            return phi
        if kind in ("rat", "dec"):
            return RatConst(_literal_value(tok))
        if kind == "real":
            name = tok.match.group("rname")
            try:
                return RealConst(self.registry.real(name))
            except KeyError:
                raise self.error(f"unknown real constant {name!r}", tok) from None
        if kind in ("bigand", "bigor"):
            self.expect("lb", "'['")
            stream = self.stream_ref()
            self.expect("rb", "']'")
            return CountConj(stream) if kind == "bigand" else CountDisj(stream)
        raise self.error(f"unexpected {tok.text!r}", tok)

    def stream_ref(self) -> FormulaStream:
        tok = self.peek()
        if tok is not None and tok.kind == "preview":
            raise self.error("stream previews are display-only and cannot be parsed", tok)
        tok = self.expect("name", "a stream name")
        if tok.text in ("Phi", "Psi") and self.accept("lp"):
            inner = self.expect("name", "a real constant name")
            self.expect("rp", "')'")
            try:
                d = self.registry.real(inner.text)
            except KeyError:
                raise self.error(f"unknown real constant {inner.text!r}", inner) from None
            return phi_stream(d) if tok.text == "Phi" else psi_stream(d)
        try:
            return self.registry.stream(tok.text)
        except KeyError:
            raise self.error(f"unknown formula stream {tok.text!r}", tok) from None


def parse(text: str, registry: StreamRegistry | None = None) -> Formula:
    """Parse one formula; raises :class:`ParseError` with a character offset."""
    return _Parser(text, registry if registry is not None else StreamRegistry.default()).parse()


_IMP, _CONJ, _LEAF = 0, 1, 2


def print_formula(phi: Formula, depth: int = 3) -> str:
    """Render ``phi`` in the concrete syntax.

    Named streams print as ``/\\[NAME]``; an anonymous stream prints as a
    display-only preview of its first ``depth`` elements,
    ``\\/[<e0, e1, ...; n shown>]``, which :func:`parse` rejects.
    """
    return _render(phi, _IMP, depth)


def _render(phi: Formula, ctx: int, depth: int) -> str:
    if isinstance(phi, Implies):
        s = f"{_render(phi.lhs, _CONJ, depth)} -> {_render(phi.rhs, _IMP, depth)}"
        return f"({s})" if ctx > _IMP else s
    if isinstance(phi, Conj):
        s = f"{_render(phi.lhs, _CONJ, depth)} & {_render(phi.rhs, _LEAF, depth)}"
        return f"({s})" if ctx > _CONJ else s
    if isinstance(phi, Atom):
        return f"p{phi.id}"
    if isinstance(phi, Bottom):
        return "_|_"
    if isinstance(phi, RatConst):
        return f"#({phi.q.numerator}/{phi.q.denominator})"
    if isinstance(phi, RealConst):
        return f"#real({phi.digits.name})"
    if isinstance(phi, (CountConj, CountDisj)):
        op = "/\\" if isinstance(phi, CountConj) else "\\/"
        stream = phi.stream
        if stream.name is not None:
            return f"{op}[{stream.name}]"
        shown = ", ".join(_render(x, _IMP, depth) for x in stream.take(depth))
        return f"{op}[<{shown}, ...; {depth} shown>]"
    raise TypeError(f"not a formula: {phi!r}")


def is_comment(line: str) -> bool:
    """Comment lines start with ``#`` not followed by a constant literal."""
    s = line.strip()
    return not s or (s.startswith("#") and not re.match(r"#(\(|\d|real\()", s))


def read_formula_lines(text: str) -> list[tuple[int, str]]:
    """Non-comment lines of a formula file as ``(line_number, text)``."""
    return [(k, line.strip()) for k, line in enumerate(text.splitlines(), start=1)
            if not is_comment(line)]


_VALUE_RE = re.compile(r"(?P<num>\d+)\s*/\s*(?P<den>\d+)|(?P<dec>\d+(?:\.\d+)?)")
_LHS_RE = re.compile(r"p(?P<id>\d+)|default")


def _parse_value(text: str, lineno: int) -> Fraction:
    m = _VALUE_RE.fullmatch(text.strip())
    if m is None:
        raise ParseError(f"line {lineno}: bad truth value {text.strip()!r}")
    if m.group("dec") is not None:
        value = Fraction(m.group("dec"))
    else:
        if int(m.group("den")) == 0:
            raise ParseError(f"line {lineno}: zero denominator")
        value = Fraction(int(m.group("num")), int(m.group("den")))
    if value > 1:
        raise ParseError(f"line {lineno}: truth value {value} is outside [0, 1]")
    return value


def parse_valuation(text: str) -> Valuation:
    """Read ``p<k> = a/b`` lines plus exactly one ``default = a/b`` line."""
    assignments: dict[int, Fraction] = {}
    default = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, eq, rhs = line.partition("=")
        m = _LHS_RE.fullmatch(lhs.strip())
        if not eq or m is None:
            raise ParseError(f"line {lineno}: expected 'p<k> = value' or 'default = value'")
        value = _parse_value(rhs, lineno)
        if m.group("id") is None:
            if default is not None:
                raise ParseError(f"line {lineno}: duplicate default")
            default = value
        else:
            atom = int(m.group("id"))
            if atom in assignments:
                raise ParseError(f"line {lineno}: p{atom} assigned twice")
            assignments[atom] = value
    if default is None:
        raise ParseError("valuation file needs a 'default = value' line")
    return Valuation(assignments, default)


def format_valuation(val: Valuation) -> str:
    frac = lambda q: f"{q.numerator}/{q.denominator}"
    lines = [f"p{k} = {frac(v)}" for k, v in sorted(val.assignments.items())]
    lines.append(f"default = {frac(val.default)}")
    return "\n".join(lines) + "\n"

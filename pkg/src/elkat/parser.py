"""Text front end for ELK formulas, EL axioms, and ontology/formula files.

Grammar (whitespace-insensitive, ``#`` starts a comment):

    formula   := conj
    conj      := unit { "&&" unit }
    unit      := "!" unit | kax | "(" formula ")"
    kax       := { "K[" AGENT "]" } arg
    arg       := axiom | "(" axiom ")" | "(" elformula ")"
    axiom     := inclusion | assertion
    inclusion := concept "<=" concept
    assertion := NAME "(" NAME ")" | NAME "(" NAME "," NAME ")"
    concept   := cunit { "&" cunit }
    cunit     := "Top" | NAME | "some" NAME "." cunit | "(" concept ")"

``K[i]`` prefixes a single axiom, a further K-prefix, or a parenthesized
EL formula (needed to write multi-literal bodies such as
``K[1] (A <= B && B(a))``; a conjunction directly under K does not
distribute in the negated case).  A ``!`` or ``&&`` may not occur between
epistemic operators: ``K[1] (! K[2] ...)`` is rejected as a fragment error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (And, Conj, ConceptAssertion, ElAxiom, ElFormula,
                     ElkFormula, Exists, FragmentError, Inclusion, KAxiom, KNot, Lit, Name, Not, RoleAssertion, TOP,
                     elk_and_of)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__("%s (line %d, column %d)" % (message, line, column))
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"""
    (?P<WS>\s+)
  | (?P<COMMENT>\#[^\n]*)
  | (?P<ANDAND>&&)
  | (?P<LEQ><=)
  | (?P<NAME>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<NUM>[0-9]+)
  | (?P<SYM>[!&().,\[\]{}])
""", re.VERBOSE)

_KEYWORDS = {"Top", "some", "K"}


def tokenize(text: str) -> list:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError("unexpected character %r" % text[pos], line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind if kind != "SYM" else chunk, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list):
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def accept(self, kind: str):
        if self.peek().kind == kind:
            return self.next()
        return None

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError("expected %s, found %r" % (what, tok.text or "end of input"),
                             tok.line, tok.column)
        return self.next()

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.column)

    # -- ELK formulas -------------------------------------------------------

    def formula(self) -> ElkFormula:
        parts = [self.unit()]
        while self.accept("ANDAND"):
            parts.append(self.unit())
        return elk_and_of(parts)

    def unit(self) -> ElkFormula:
        tok = self.peek()
        if tok.kind == "!":
            self.next()
            return KNot(self.unit())
        if tok.kind == "NAME" and tok.text == "K":
            return self.kax()
        if tok.kind == "(":
            # "(" may open a sub-formula or a parenthesized concept starting
            # an inclusion; try the formula reading first and backtrack.
            save = self.pos
            try:
                self.next()
                inner = self.formula()
                self.expect(")", "')'")
                return inner
            except ParseError:
                self.pos = save
            return self.kax()
        if tok.kind in ("NAME", "{"):
            return self.kax()
        self.fail("expected a formula, found %r" % (tok.text or "end of input"))

    def kax(self) -> ElkFormula:
        prefix = []
        while True:
            tok = self.peek()
            if tok.kind == "NAME" and tok.text == "K" \
                    and self.tokens[self.pos + 1].kind == "[":
                self.next()
                self.next()
                agent = self.peek()
                if agent.kind not in ("NAME", "NUM"):
                    self.fail("expected an agent identifier")
                self.next()
                self.expect("]", "']'")
                prefix.append(agent.text)
                continue
            break
        if prefix and self.peek().kind == "!":
            raise FragmentError(
                "negation under an epistemic operator (line %d, column %d)"
                % (self.peek().line, self.peek().column))
        body = self.k_argument(bool(prefix))
        return KAxiom(tuple(prefix), body)

    def k_argument(self, prefixed: bool) -> ElFormula:
        if self.peek().kind == "(":
            save = self.pos
            try:
                self.next()
                inner = self.el_formula(under_k=prefixed)
                self.expect(")", "')'")
                return inner
            except ParseError:
                self.pos = save
        return Lit(self.axiom())

    def el_formula(self, under_k: bool = False) -> ElFormula:
        parts = [self.el_unit(under_k)]
        while self.accept("ANDAND"):
            parts.append(self.el_unit(under_k))
        acc = parts[0]
        for p in parts[1:]:
            acc = And(acc, p)
        return acc

    def el_unit(self, under_k: bool) -> ElFormula:
        tok = self.peek()
        if tok.kind == "!":
            self.next()
            return Not(self.el_unit(under_k))
        if tok.kind == "NAME" and tok.text == "K" and self.tokens[self.pos + 1].kind == "[":
            if under_k:
                raise FragmentError(
                    "nested epistemic operator inside a parenthesized K body "
                    "(line %d, column %d); chain the prefixes instead" % (tok.line, tok.column))
            self.fail("epistemic operator not allowed inside an EL formula")
        if tok.kind == "(":
            save = self.pos
            try:
                self.next()
                inner = self.el_formula(under_k)
                self.expect(")", "')'")
                return inner
            except ParseError:
                self.pos = save
        return Lit(self.axiom())

    # -- axioms and concepts -------------------------------------------------

    def axiom(self) -> ElAxiom:
        tok = self.peek()
        if tok.kind == "NAME" and tok.text not in _KEYWORDS \
                and self.tokens[self.pos + 1].kind == "(":
            save = self.pos
            try:
                return self.assertion()
            except ParseError:
                self.pos = save
        if tok.kind == "(":
            save = self.pos
            try:
                self.next()
                inner = self.axiom()
                self.expect(")", "')'")
                return inner
            except ParseError:
                self.pos = save
        return self.inclusion()

    def assertion(self) -> ElAxiom:
        pred = self.expect("NAME", "a name")
        self.expect("(", "'('")
        first = self.expect("NAME", "a name")
        if self.accept(","):
            second = self.expect("NAME", "a name")
            self.expect(")", "')'")
            return RoleAssertion(pred.text, first.text, second.text)
        self.expect(")", "')'")
        return ConceptAssertion(pred.text, first.text)

    def inclusion(self) -> Inclusion:
        lhs = self.concept()
        self.expect("LEQ", "'<='")
        rhs = self.concept()
        return Inclusion(lhs, rhs)

    def concept(self):
        acc = self.cunit()
        while self.accept("&"):
            acc = Conj(acc, self.cunit())
        return acc

    def cunit(self):
        tok = self.peek()
        if tok.kind == "{":
            raise FragmentError(
                "nominal concepts are internal-only and not accepted in input "
                "(line %d, column %d)" % (tok.line, tok.column))
        if tok.kind == "NAME":
            if tok.text == "Top":
                self.next()
                return TOP
            if tok.text == "Bottom":
                raise FragmentError(
                    "the Bottom concept is internal-only and not accepted in input "
                    "(line %d, column %d)" % (tok.line, tok.column))
            if tok.text == "some":
                self.next()
                role = self.expect("NAME", "a role name")
                self.expect(".", "'.'")
                return Exists(role.text, self.cunit())
            self.next()
            return Name(tok.text)
        if tok.kind == "(":
            self.next()
            inner = self.concept()
            self.expect(")", "')'")
            return inner
        self.fail("expected a concept, found %r" % (tok.text or "end of input"))


def _run(tokens: list, production):
    parser = _Parser(tokens)
    result = production(parser)
    tok = parser.peek()
    if tok.kind != "EOF":
        raise ParseError("unexpected trailing input %r" % tok.text, tok.line, tok.column)
    return result


def parse_formula(text: str) -> ElkFormula:
    """Parse one ELK formula."""
    return _run(tokenize(text), _Parser.formula)


def parse_el_formula(text: str) -> ElFormula:
    """Parse one epistemic-free EL formula."""
    return _run(tokenize(text), _Parser.el_formula)


def parse_axiom(text: str) -> ElAxiom:
    """Parse one EL axiom (an inclusion or assertion)."""
    return _run(tokenize(text), _Parser.axiom)


def parse_concept(text: str):
    return _run(tokenize(text), _Parser.concept)


def _content_lines(text: str) -> list:
    lines = []
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append(stripped)
    return lines


def parse_formula_file(text: str) -> ElkFormula:
    """One formula, or one conjunct per line joined by an implicit '&&'."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("file contains no formula", 1, 1)
    return elk_and_of([parse_formula(line) for line in lines])


def parse_ontology_file(text: str) -> list:
    """Ontology files carry one EL axiom per line."""
    return [parse_axiom(line) for line in _content_lines(text)]

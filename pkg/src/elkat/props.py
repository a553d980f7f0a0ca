"""Propositional formulas with truth-table entailment.

Backend for the propositional learning frameworks; exact and deliberately
simple.  Entailment enumerates assignments over the occurring variables,
capped at 24 variables (the separation experiment needs 2n+2 <= 10).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

MAX_VARIABLES = 24


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class PNot:
    body: "PropFormula"


@dataclass(frozen=True)
class PAnd:
    left: "PropFormula"
    right: "PropFormula"


@dataclass(frozen=True)
class POr:
    left: "PropFormula"
    right: "PropFormula"


@dataclass(frozen=True)
class PImplies:
    left: "PropFormula"
    right: "PropFormula"


PropFormula = Union[Var, PNot, PAnd, POr, PImplies]


def pand_of(parts) -> PropFormula:
    parts = list(parts)
    acc = parts[0]
    for p in parts[1:]:
        acc = PAnd(acc, p)
    return acc


def prop_vars(f: PropFormula, acc=None) -> tuple:
    if acc is None:
        acc = {}
    if isinstance(f, Var):
        acc.setdefault(f.name, None)
    elif isinstance(f, PNot):
        prop_vars(f.body, acc)
    else:
        prop_vars(f.left, acc)
        prop_vars(f.right, acc)
    return tuple(acc)


def prop_eval(f: PropFormula, true_vars) -> bool:
    if isinstance(f, Var):
        return f.name in true_vars
    if isinstance(f, PNot):
        return not prop_eval(f.body, true_vars)
    if isinstance(f, PAnd):
        return prop_eval(f.left, true_vars) and prop_eval(f.right, true_vars)
    if isinstance(f, POr):
        return prop_eval(f.left, true_vars) or prop_eval(f.right, true_vars)
    if isinstance(f, PImplies):
        return (not prop_eval(f.left, true_vars)) or prop_eval(f.right, true_vars)
    raise TypeError(repr(f))


def prop_entails(theory: Iterable[PropFormula], x: PropFormula) -> bool:
    theory = list(theory)
    names: dict = {}
    for f in theory:
        prop_vars(f, names)
    prop_vars(x, names)
    names = tuple(names)
    if len(names) > MAX_VARIABLES:
        raise ValueError("truth-table entailment capped at %d variables"
                         % MAX_VARIABLES)
    for bits in range(1 << len(names)):
        true_vars = {names[i] for i in range(len(names)) if (bits >> i) & 1}
        if all(prop_eval(f, true_vars) for f in theory) \
                and not prop_eval(x, true_vars):
            return False
    return True


def prop_size(f: PropFormula) -> int:
    if isinstance(f, Var):
        return 1
    if isinstance(f, PNot):
        return 1 + prop_size(f.body)
    return 1 + prop_size(f.left) + prop_size(f.right)


def prop_to_str(f: PropFormula) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, PNot):
        return "!" + _unit(f.body)
    if isinstance(f, PAnd):
        return "%s & %s" % (_unit(f.left), _unit(f.right))
    if isinstance(f, POr):
        return "%s | %s" % (_unit(f.left), _unit(f.right))
    if isinstance(f, PImplies):
        return "%s -> %s" % (_unit(f.left), _unit(f.right))
    raise TypeError(repr(f))


def _unit(f: PropFormula) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, PNot):
        return "!" + _unit(f.body)
    return "(%s)" % prop_to_str(f)


_PROP_TOKEN = re.compile(r"\s*(->|[()&|!]|[A-Za-z_][A-Za-z0-9_]*)")


def parse_prop(text: str) -> PropFormula:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _PROP_TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ValueError("bad propositional syntax at %r" % text[pos:])
            break
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)
    idx = [0]

    def peek():
        return tokens[idx[0]]

    def take(expected=None):
        tok = tokens[idx[0]]
        if expected is not None and tok != expected:
            raise ValueError("expected %r, found %r" % (expected, tok))
        idx[0] += 1
        return tok

    def implication():
        left = disjunction()
        if peek() == "->":
            take()
            return PImplies(left, implication())
        return left

    def disjunction():
        acc = conjunction()
        while peek() == "|":
            take()
            acc = POr(acc, conjunction())
        return acc

    def conjunction():
        acc = unit()
        while peek() == "&":
            take()
            acc = PAnd(acc, unit())
        return acc

    def unit():
        tok = peek()
        if tok == "!":
            take()
            return PNot(unit())
        if tok == "(":
            take()
            inner = implication()
            take(")")
            return inner
        if tok is None or tok in ("&", "|", "->", ")"):
            raise ValueError("expected a variable, found %r" % tok)
        take()
        return Var(tok)

    result = implication()
    if peek() is not None:
        raise ValueError("trailing propositional input %r" % peek())
    return result

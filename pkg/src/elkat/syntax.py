"""Abstract syntax for EL, EL formulas, ELK formulas, and the conjunctive fragment.

All values here are immutable (frozen dataclasses over tuples), so they are
hashable, comparable, and safe to share between threads.  Concepts may contain
the internal-only constructors ``Nominal`` and ``Bottom``; those never appear
in user-facing input (the parser rejects them) and exist only for the EL++
reduction inside the reasoning engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union


class FragmentError(ValueError):
    """Raised when a formula falls outside the syntactic fragment an
    operation is defined on (e.g. modal alternation, non-literal K bodies,
    internal-only concept constructors in user input)."""


# ---------------------------------------------------------------------------
# Concepts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "Top"


@dataclass(frozen=True)
class Name:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Nominal:
    """Internal-only: the singleton concept {a}."""

    individual: str

    def __str__(self) -> str:
        return "{%s}" % self.individual


@dataclass(frozen=True)
class Bottom:
    """Internal-only: the empty concept."""

    def __str__(self) -> str:
        return "Bottom"


@dataclass(frozen=True)
class Conj:
    left: "Concept"
    right: "Concept"

    def __str__(self) -> str:
        return concept_to_str(self)


@dataclass(frozen=True)
class Exists:
    role: str
    filler: "Concept"

    def __str__(self) -> str:
        return concept_to_str(self)


Concept = Union[Top, Name, Nominal, Bottom, Conj, Exists]

TOP = Top()
BOTTOM = Bottom()


def is_basic(c: Concept) -> bool:
    """Concept-name-like: a name, Top, or a nominal."""
    return isinstance(c, (Name, Top, Nominal))


def concept_size(c: Concept) -> int:
    if isinstance(c, Conj):
        return 1 + concept_size(c.left) + concept_size(c.right)
    if isinstance(c, Exists):
        return 1 + concept_size(c.filler)
    return 1


def conj_of(parts: Iterable[Concept]) -> Concept:
    """Left-associated conjunction of the given concepts; Top if empty."""
    parts = list(parts)
    if not parts:
        return TOP
    acc = parts[0]
    for p in parts[1:]:
        acc = Conj(acc, p)
    return acc


def flatten_conj(c: Concept) -> list:
    """Conjuncts of ``c`` in left-to-right order."""
    if isinstance(c, Conj):
        return flatten_conj(c.left) + flatten_conj(c.right)
    return [c]


def subconcepts(c: Concept) -> list:
    """All subterms of ``c`` including itself, pre-order, deduplicated."""
    seen: dict = {}

    def walk(x: Concept) -> None:
        if x not in seen:
            seen[x] = None
            if isinstance(x, Conj):
                walk(x.left)
                walk(x.right)
            elif isinstance(x, Exists):
                walk(x.filler)

    walk(c)
    return list(seen)


# ---------------------------------------------------------------------------
# Axioms and literals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Inclusion:
    lhs: Concept
    rhs: Concept

    def __str__(self) -> str:
        return axiom_to_str(self)


@dataclass(frozen=True)
class ConceptAssertion:
    """A(a) with A a concept *name* (complex assertions are not EL axioms)."""

    concept: str
    individual: str

    def __str__(self) -> str:
        return axiom_to_str(self)


@dataclass(frozen=True)
class RoleAssertion:
    role: str
    subject: str
    target: str

    def __str__(self) -> str:
        return axiom_to_str(self)


ElAxiom = Union[Inclusion, ConceptAssertion, RoleAssertion]


@dataclass(frozen=True)
class ElLiteral:
    axiom: ElAxiom
    positive: bool = True

    def negate(self) -> "ElLiteral":
        return ElLiteral(self.axiom, not self.positive)

    def __str__(self) -> str:
        text = axiom_to_str(self.axiom)
        return text if self.positive else "! " + text


# ---------------------------------------------------------------------------
# EL formulas: boolean combinations of EL axioms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    axiom: ElAxiom


@dataclass(frozen=True)
class Not:
    body: "ElFormula"


@dataclass(frozen=True)
class And:
    left: "ElFormula"
    right: "ElFormula"


ElFormula = Union[Lit, Not, And]


def el_and_of(parts: Iterable[ElFormula]) -> ElFormula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty EL conjunction has no formula representation")
    acc = parts[0]
    for p in parts[1:]:
        acc = And(acc, p)
    return acc


def el_conjuncts(f: ElFormula) -> list:
    if isinstance(f, And):
        return el_conjuncts(f.left) + el_conjuncts(f.right)
    return [f]


def literal_of(f: ElFormula) -> ElLiteral:
    """Read ``f`` as an EL literal; FragmentError if it is not one."""
    if isinstance(f, Lit):
        return ElLiteral(f.axiom, True)
    if isinstance(f, Not) and isinstance(f.body, Lit):
        return ElLiteral(f.body.axiom, False)
    raise FragmentError("not a literal: expected an EL axiom or its negation, got %s" % (f,))


def literals_of_formula(f: ElFormula) -> tuple:
    """Decompose a conjunction of EL literals; FragmentError otherwise."""
    return tuple(literal_of(c) for c in el_conjuncts(f))


def formula_of_literals(lits: Iterable[ElLiteral]) -> ElFormula:
    parts = [Lit(l.axiom) if l.positive else Not(Lit(l.axiom)) for l in lits]
    return el_and_of(parts)


def axioms_of_formula(f: ElFormula) -> list:
    """Distinct EL axioms occurring in ``f``, in first-occurrence order."""
    seen: dict = {}

    def walk(g: ElFormula) -> None:
        if isinstance(g, Lit):
            seen.setdefault(g.axiom, None)
        elif isinstance(g, Not):
            walk(g.body)
        else:
            walk(g.left)
            walk(g.right)

    walk(f)
    return list(seen)


# ---------------------------------------------------------------------------
# ELK formulas
# ---------------------------------------------------------------------------

AgentWord = tuple  # tuple of agent identifiers; () is the internal epsilon


@dataclass(frozen=True)
class KAxiom:
    """K_sigma body.  An empty prefix is a plain EL formula (K_eps w = w)."""

    prefix: AgentWord
    body: ElFormula


@dataclass(frozen=True)
class KNot:
    body: "ElkFormula"


@dataclass(frozen=True)
class KAnd:
    left: "ElkFormula"
    right: "ElkFormula"


ElkFormula = Union[KAxiom, KNot, KAnd]


def elk_and_of(parts: Iterable[ElkFormula]) -> ElkFormula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty ELK conjunction has no formula representation")
    acc = parts[0]
    for p in parts[1:]:
        acc = KAnd(acc, p)
    return acc


def elk_conjuncts(phi: ElkFormula) -> list:
    if isinstance(phi, KAnd):
        return elk_conjuncts(phi.left) + elk_conjuncts(phi.right)
    return [phi]


def elk_to_el(phi: ElkFormula) -> ElFormula:
    """Strip an epistemic-free ELK formula down to its EL formula."""
    if isinstance(phi, KAxiom):
        if phi.prefix:
            raise FragmentError("formula contains an epistemic operator")
        return phi.body
    if isinstance(phi, KNot):
        return Not(elk_to_el(phi.body))
    return And(elk_to_el(phi.left), elk_to_el(phi.right))


# ---------------------------------------------------------------------------
# Conjunctive ELK
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrefixedBody:
    prefix: AgentWord
    body: tuple  # tuple of ElLiteral; empty means Top


@dataclass(frozen=True)
class ConjunctiveElk:
    omega0: tuple = ()
    positives: tuple = ()
    negatives: tuple = ()

    def conjunct_count(self) -> int:
        return len(self.omega0) + len(self.positives) + len(self.negatives)


def to_conjunctive(phi: ElkFormula) -> ConjunctiveElk:
    """Normalize ``phi`` into the conjunctive-ELK triple.

    Raises FragmentError when ``phi`` lies outside the fragment: negation is
    only permitted on EL axioms and on whole K-prefixed literal conjunctions.
    """
    omega0: list = []
    positives: list = []
    negatives: list = []
    for conjunct in elk_conjuncts(phi):
        if isinstance(conjunct, KAxiom):
            lits = literals_of_formula(conjunct.body)
            if conjunct.prefix:
                positives.append(PrefixedBody(conjunct.prefix, lits))
            else:
                omega0.extend(lits)
        elif isinstance(conjunct, KNot):
            inner = conjunct.body
            if isinstance(inner, KNot):
                raise FragmentError("double negation is outside conjunctive ELK")
            if isinstance(inner, KAnd):
                raise FragmentError(
                    "negation of a conjunction of ELK axioms is outside conjunctive ELK")
            lits = literals_of_formula(inner.body)
            if inner.prefix:
                negatives.append(PrefixedBody(inner.prefix, lits))
            else:
                if len(lits) != 1:
                    raise FragmentError(
                        "negated unprefixed conjunction is outside conjunctive ELK")
                omega0.append(lits[0].negate())
        else:  # pragma: no cover - elk_conjuncts never returns KAnd
            raise AssertionError
    return ConjunctiveElk(tuple(omega0), tuple(positives), tuple(negatives))


def render_conjunctive(c: ConjunctiveElk) -> ElkFormula:
    """The ELK formula whose to_conjunctive image is ``c`` again.

    Bodies must be non-empty (the empty body, standing for Top, is an
    algorithm-internal value with no concrete syntax).
    """
    parts: list = []
    for lit in c.omega0:
        body = Lit(lit.axiom) if lit.positive else Not(Lit(lit.axiom))
        if lit.positive:
            parts.append(KAxiom((), body))
        else:
            parts.append(KNot(KAxiom((), Lit(lit.axiom))))
    for pb in c.positives:
        if not pb.body:
            raise ValueError("empty body has no concrete rendering")
        parts.append(KAxiom(pb.prefix, formula_of_literals(pb.body)))
    for pb in c.negatives:
        if not pb.body:
            raise ValueError("empty body has no concrete rendering")
        parts.append(KNot(KAxiom(pb.prefix, formula_of_literals(pb.body))))
    return elk_and_of(parts)


# ---------------------------------------------------------------------------
# Signatures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Signature:
    concepts: tuple = ()
    roles: tuple = ()
    individuals: tuple = ()
    agents: tuple = ()

    def union(self, other: "Signature") -> "Signature":
        merge = lambda a, b: tuple(sorted(set(a) | set(b)))
        return Signature(merge(self.concepts, other.concepts),
                         merge(self.roles, other.roles),
                         merge(self.individuals, other.individuals),
                         merge(self.agents, other.agents))

    def covers(self, other: "Signature") -> bool:
        return (set(other.concepts) <= set(self.concepts)
                and set(other.roles) <= set(self.roles)
                and set(other.individuals) <= set(self.individuals)
                and set(other.agents) <= set(self.agents))


def _collect(x, concepts: set, roles: set, individuals: set, agents: set) -> None:
    if isinstance(x, (Top, Bottom)):
        return
    if isinstance(x, Name):
        concepts.add(x.name)
    elif isinstance(x, Nominal):
        individuals.add(x.individual)
    elif isinstance(x, Conj):
        _collect(x.left, concepts, roles, individuals, agents)
        _collect(x.right, concepts, roles, individuals, agents)
    elif isinstance(x, Exists):
        roles.add(x.role)
        _collect(x.filler, concepts, roles, individuals, agents)
    elif isinstance(x, Inclusion):
        _collect(x.lhs, concepts, roles, individuals, agents)
        _collect(x.rhs, concepts, roles, individuals, agents)
    elif isinstance(x, ConceptAssertion):
        concepts.add(x.concept)
        individuals.add(x.individual)
    elif isinstance(x, RoleAssertion):
        roles.add(x.role)
        individuals.add(x.subject)
        individuals.add(x.target)
    elif isinstance(x, ElLiteral):
        _collect(x.axiom, concepts, roles, individuals, agents)
    elif isinstance(x, Lit):
        _collect(x.axiom, concepts, roles, individuals, agents)
    elif isinstance(x, Not):
        _collect(x.body, concepts, roles, individuals, agents)
    elif isinstance(x, And):
        _collect(x.left, concepts, roles, individuals, agents)
        _collect(x.right, concepts, roles, individuals, agents)
    elif isinstance(x, KAxiom):
        agents.update(x.prefix)
        _collect(x.body, concepts, roles, individuals, agents)
    elif isinstance(x, KNot):
        _collect(x.body, concepts, roles, individuals, agents)
    elif isinstance(x, KAnd):
        _collect(x.left, concepts, roles, individuals, agents)
        _collect(x.right, concepts, roles, individuals, agents)
    elif isinstance(x, PrefixedBody):
        agents.update(x.prefix)
        for lit in x.body:
            _collect(lit, concepts, roles, individuals, agents)
    elif isinstance(x, ConjunctiveElk):
        for lit in x.omega0:
            _collect(lit, concepts, roles, individuals, agents)
        for pb in x.positives + x.negatives:
            _collect(pb, concepts, roles, individuals, agents)
    elif isinstance(x, (list, tuple, set, frozenset)):
        for item in x:
            _collect(item, concepts, roles, individuals, agents)
    else:
        raise TypeError("cannot extract a signature from %r" % (x,))


def signature(x) -> Signature:
    """Exact sets of concept/role/individual names and agents occurring in x."""
    concepts: set = set()
    roles: set = set()
    individuals: set = set()
    agents: set = set()
    _collect(x, concepts, roles, individuals, agents)
    return Signature(tuple(sorted(concepts)), tuple(sorted(roles)),
                     tuple(sorted(individuals)), tuple(sorted(agents)))


# ---------------------------------------------------------------------------
# Printing (the inverse of parser.parse_formula on canonical text)
# ---------------------------------------------------------------------------

def concept_to_str(c: Concept) -> str:
    if isinstance(c, Top):
        return "Top"
    if isinstance(c, Bottom):
        return "Bottom"
    if isinstance(c, Name):
        return c.name
    if isinstance(c, Nominal):
        return "{%s}" % c.individual
    if isinstance(c, Conj):
        left = concept_to_str(c.left)
        right = _cunit_to_str(c.right)
        return "%s & %s" % (left, right)
    if isinstance(c, Exists):
        return "some %s . %s" % (c.role, _cunit_to_str(c.filler))
    raise TypeError(repr(c))


def _cunit_to_str(c: Concept) -> str:
    # conjunctions re-associate to the left when re-parsed, so a right
    # operand or an existential filler that is itself a Conj needs parens
    if isinstance(c, Conj):
        return "(%s)" % concept_to_str(c)
    return concept_to_str(c)


def axiom_to_str(ax: ElAxiom) -> str:
    if isinstance(ax, Inclusion):
        return "%s <= %s" % (concept_to_str(ax.lhs), concept_to_str(ax.rhs))
    if isinstance(ax, ConceptAssertion):
        return "%s(%s)" % (ax.concept, ax.individual)
    if isinstance(ax, RoleAssertion):
        return "%s(%s, %s)" % (ax.role, ax.subject, ax.target)
    raise TypeError(repr(ax))


def el_formula_to_str(f: ElFormula) -> str:
    if isinstance(f, And):
        return "%s && %s" % (el_formula_to_str(f.left), _el_unit_to_str(f.right))
    return _el_unit_to_str(f)


def _el_unit_to_str(f: ElFormula) -> str:
    if isinstance(f, Lit):
        return axiom_to_str(f.axiom)
    if isinstance(f, Not):
        return "! %s" % _el_unit_to_str(f.body)
    if isinstance(f, And):
        return "(%s)" % el_formula_to_str(f)
    raise TypeError(repr(f))


def elk_formula_to_str(phi: ElkFormula) -> str:
    if isinstance(phi, KAnd):
        return "%s && %s" % (elk_formula_to_str(phi.left), _elk_unit_to_str(phi.right))
    return _elk_unit_to_str(phi)


def _elk_unit_to_str(phi: ElkFormula) -> str:
    if isinstance(phi, KAxiom):
        prefix = "".join("K[%s] " % a for a in phi.prefix)
        if isinstance(phi.body, Lit):
            return prefix + axiom_to_str(phi.body.axiom)
        if phi.prefix:
            return prefix + "(%s)" % el_formula_to_str(phi.body)
        return _el_unit_to_str(phi.body)
    if isinstance(phi, KNot):
        return "! %s" % _elk_unit_to_str(phi.body)
    if isinstance(phi, KAnd):
        return "(%s)" % elk_formula_to_str(phi)
    raise TypeError(repr(phi))

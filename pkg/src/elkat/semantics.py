"""Finite EL interpretations, finite Kripke structures, and model checking.

These are the ground-truth semantics: every satisfiability verdict elsewhere
in the package is ultimately certified by ``check_el`` / ``check_elk`` on an
explicit structure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .syntax import (And, Bottom, Concept, Conj, ConceptAssertion, ElAxiom,
                     ElFormula, ElkFormula, Exists, Inclusion, KAnd, KAxiom,
                     KNot, Lit, Name, Nominal, Not, RoleAssertion, Top)


class MalformedStructure(ValueError):
    """An ElkInterpretation whose relations are not equivalence relations."""


@dataclass(frozen=True)
class ElInterpretation:
    domain: tuple
    concept_map: "FrozenDict" = None  # name -> frozenset of elements
    role_map: "FrozenDict" = None     # name -> frozenset of (d, e) pairs
    individual_map: "FrozenDict" = None  # name -> element

    def __post_init__(self):
        object.__setattr__(self, "concept_map", dict(self.concept_map or {}))
        object.__setattr__(self, "role_map", dict(self.role_map or {}))
        object.__setattr__(self, "individual_map", dict(self.individual_map or {}))

    def concept_ext(self, name: str) -> frozenset:
        return frozenset(self.concept_map.get(name, ()))

    def role_ext(self, name: str) -> frozenset:
        return frozenset(self.role_map.get(name, ()))

    def element_of(self, individual: str):
        try:
            return self.individual_map[individual]
        except KeyError:
            raise KeyError("individual %r is not interpreted" % individual) from None

    def to_json_dict(self) -> dict:
        return {
            "domain": sorted(self.domain, key=str),
            "concepts": {a: sorted(ext, key=str)
                         for a, ext in sorted(self.concept_map.items())},
            "roles": {r: sorted([list(p) for p in pairs])
                      for r, pairs in sorted(self.role_map.items())},
            "individuals": {a: d for a, d in sorted(self.individual_map.items())},
        }

    @staticmethod
    def from_json_dict(data: dict) -> "ElInterpretation":
        return ElInterpretation(
            domain=tuple(data["domain"]),
            concept_map={a: frozenset(v) for a, v in data.get("concepts", {}).items()},
            role_map={r: frozenset(tuple(p) for p in v)
                      for r, v in data.get("roles", {}).items()},
            individual_map=dict(data.get("individuals", {})),
        )


def eval_concept(interp: ElInterpretation, concept: Concept) -> frozenset:
    """Extension of ``concept`` in ``interp``; missing names denote the empty set."""
    if isinstance(concept, Top):
        return frozenset(interp.domain)
    if isinstance(concept, Bottom):
        return frozenset()
    if isinstance(concept, Name):
        return interp.concept_ext(concept.name)
    if isinstance(concept, Nominal):
        return frozenset({interp.element_of(concept.individual)})
    if isinstance(concept, Conj):
        return eval_concept(interp, concept.left) & eval_concept(interp, concept.right)
    if isinstance(concept, Exists):
        pairs = interp.role_ext(concept.role)
        filler = eval_concept(interp, concept.filler)
        return frozenset(d for d, e in pairs if e in filler)
    raise TypeError(repr(concept))


def check_el_axiom(interp: ElInterpretation, axiom: ElAxiom) -> bool:
    if isinstance(axiom, Inclusion):
        return eval_concept(interp, axiom.lhs) <= eval_concept(interp, axiom.rhs)
    if isinstance(axiom, ConceptAssertion):
        return interp.element_of(axiom.individual) in interp.concept_ext(axiom.concept)
    if isinstance(axiom, RoleAssertion):
        pair = (interp.element_of(axiom.subject), interp.element_of(axiom.target))
        return pair in interp.role_ext(axiom.role)
    raise TypeError(repr(axiom))


def check_el(interp: ElInterpretation, formula: ElFormula) -> bool:
    if isinstance(formula, Lit):
        return check_el_axiom(interp, formula.axiom)
    if isinstance(formula, Not):
        return not check_el(interp, formula.body)
    if isinstance(formula, And):
        return check_el(interp, formula.left) and check_el(interp, formula.right)
    raise TypeError(repr(formula))


# ---------------------------------------------------------------------------
# Kripke structures over EL interpretations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ElkInterpretation:
    worlds: tuple                      # tuple of ElInterpretation
    relations: dict = field(default_factory=dict)  # agent -> frozenset of (i, j)

    def __post_init__(self):
        object.__setattr__(self, "relations",
                           {a: frozenset(map(tuple, pairs))
                            for a, pairs in dict(self.relations).items()})

    def relation(self, agent: str) -> frozenset:
        rel = self.relations.get(agent)
        if rel is None:
            return frozenset((i, i) for i in range(len(self.worlds)))
        return rel

    def validate(self) -> None:
        n = len(self.worlds)
        for agent, rel in self.relations.items():
            for i, j in rel:
                if not (0 <= i < n and 0 <= j < n):
                    raise MalformedStructure(
                        "relation for agent %r mentions world %r" % (agent, (i, j)))
            for i in range(n):
                if (i, i) not in rel:
                    raise MalformedStructure("relation for agent %r is not reflexive" % agent)
            for i, j in rel:
                if (j, i) not in rel:
                    raise MalformedStructure("relation for agent %r is not symmetric" % agent)
            for i, j in rel:
                for k, l in rel:
                    if j == k and (i, l) not in rel:
                        raise MalformedStructure(
                            "relation for agent %r is not transitive" % agent)

    def to_json_dict(self, point=None) -> dict:
        data = {
            "worlds": [w.to_json_dict() for w in self.worlds],
            "relations": {a: sorted([list(p) for p in rel])
                          for a, rel in sorted(self.relations.items())},
        }
        if point is not None:
            data["point"] = point
        return data

    @staticmethod
    def from_json_dict(data: dict) -> "ElkInterpretation":
        return ElkInterpretation(
            worlds=tuple(ElInterpretation.from_json_dict(w) for w in data["worlds"]),
            relations={a: frozenset(tuple(p) for p in rel)
                       for a, rel in data.get("relations", {}).items()},
        )


@dataclass(frozen=True)
class PointedElk:
    structure: ElkInterpretation
    point: int = 0

    def __post_init__(self):
        if not (0 <= self.point < len(self.structure.worlds)):
            raise ValueError("point %d out of range" % self.point)

    def to_json_dict(self) -> dict:
        return self.structure.to_json_dict(point=self.point)

    @staticmethod
    def from_json_dict(data: dict) -> "PointedElk":
        return PointedElk(ElkInterpretation.from_json_dict(data), data.get("point", 0))


def equivalence_closure(pairs, n_worlds: int) -> frozenset:
    """Smallest equivalence relation on {0..n_worlds-1} containing ``pairs``."""
    parent = list(range(n_worlds))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in pairs:
        if not (0 <= i < n_worlds and 0 <= j < n_worlds):
            raise ValueError("pair %r outside world range" % ((i, j),))
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    blocks: dict = {}
    for i in range(n_worlds):
        blocks.setdefault(find(i), []).append(i)
    closed = set()
    for members in blocks.values():
        for i in members:
            for j in members:
                closed.add((i, j))
    return frozenset(closed)


def compose_relation(structure: ElkInterpretation, sigma) -> frozenset:
    """R_sigma as the left-to-right composition of the agents' relations.

    R_eps is the identity; an agent without a declared relation contributes
    the identity relation as well.
    """
    n = len(structure.worlds)
    current = {i: {i} for i in range(n)}
    for agent in sigma:
        rel = structure.relation(agent)
        succ: dict = {i: set() for i in range(n)}
        for i, j in rel:
            succ[i].add(j)
        current = {i: set().union(*(succ[j] for j in reach)) if reach else set()
                   for i, reach in current.items()}
    return frozenset((i, j) for i, reach in current.items() for j in reach)


def reachable_worlds(structure: ElkInterpretation, start: int, sigma) -> frozenset:
    reach = {start}
    for agent in sigma:
        rel = structure.relation(agent)
        succ: dict = {}
        for i, j in rel:
            succ.setdefault(i, set()).add(j)
        reach = set().union(*(succ.get(i, set()) for i in reach)) if reach else set()
    return frozenset(reach)


def check_elk(pointed: PointedElk, phi: ElkFormula, _validated: bool = False) -> bool:
    """Model checking for pointed ELK formulas; K_sigma unfolds left to right."""
    if not _validated:
        pointed.structure.validate()
    structure, point = pointed.structure, pointed.point
    if isinstance(phi, KAxiom):
        worlds = reachable_worlds(structure, point, phi.prefix)
        return all(check_el(structure.worlds[j], phi.body) for j in sorted(worlds))
    if isinstance(phi, KNot):
        return not check_elk(pointed, phi.body, _validated=True)
    if isinstance(phi, KAnd):
        return (check_elk(pointed, phi.left, _validated=True)
                and check_elk(pointed, phi.right, _validated=True))
    raise TypeError(repr(phi))


def interpretation_to_json(interp: ElInterpretation) -> str:
    return json.dumps(interp.to_json_dict(), sort_keys=True)


def pointed_to_json(pointed: PointedElk) -> str:
    return json.dumps(pointed.to_json_dict(), sort_keys=True)

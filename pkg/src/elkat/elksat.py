"""Satisfiability procedures for ELK.

``conjunctive_sat`` is the PTime decision procedure for the conjunctive
fragment: flatten modal prefixes, then check the two unsatisfiability
conditions (the pooled positive check, and per negated conjunct the
subword-pooled check over each body literal), every check a single
EL-literal-conjunction satisfiability test.

``witness_model`` builds the certifying Kripke structure for a satisfiable
conjunctive formula: a root world satisfying the pooled positives plus, per
negated conjunct, a chain of worlds whose edges follow the agents of its
prefix, closed into per-agent equivalence relations.

``elk_sat`` decides full ELK: enumerate truth assignments over the distinct
(flattened) K-prefixed axioms and test each induced conjunction by the same
two conditions with EL-formula bodies (satisfiability checks lifted from
literal conjunctions to EL formulas).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .abstraction import elk_abstraction, satisfying_assignments
from .engine import (_el_formula_sat_model, canonical_model, literals_sat, witness_el_model)
from .semantics import (ElkInterpretation, PointedElk, check_elk,
                        equivalence_closure)
from .syntax import (ConjunctiveElk, ElFormula, ElkFormula, FragmentError, Not, PrefixedBody, el_and_of,
                     formula_of_literals, signature)


class NotSatisfiable(ValueError):
    """witness_model was called on an unsatisfiable formula."""


@dataclass(frozen=True)
class SatVerdict:
    satisfiable: bool
    witness: Optional[PointedElk] = None
    failing_check: Optional[dict] = None

    def to_json_dict(self) -> dict:
        return {
            "sat": self.satisfiable,
            "witness": self.witness.to_json_dict() if self.witness else None,
            "failing_check": self.failing_check,
        }


@dataclass(frozen=True)
class FlatConjunctiveElk(ConjunctiveElk):
    flattened: bool = True


def flatten_word(sigma) -> tuple:
    """Collapse every adjacent repetition of an agent: a1 a2 a2 a3 a2 becomes
    a1 a2 a3 a2."""
    out: list = []
    for agent in sigma:
        if not out or out[-1] != agent:
            out.append(agent)
    return tuple(out)


def is_subword(short, long) -> bool:
    """Order-preserving subsequence test."""
    it = iter(long)
    return all(agent in it for agent in short)


def flatten(phi: ConjunctiveElk) -> FlatConjunctiveElk:
    """Flatten all prefixes and dedupe syntactically equal conjuncts.

    An empty prefix cannot survive in positives/negatives: epsilon-prefixed
    positives merge into omega0, epsilon-prefixed single-literal negatives
    become negated omega0 literals (anything else is a fragment error).
    """
    omega0 = list(phi.omega0)
    positives: list = []
    negatives: list = []
    for pb in phi.positives:
        word = flatten_word(pb.prefix)
        if word:
            positives.append(PrefixedBody(word, pb.body))
        else:
            omega0.extend(pb.body)
    for pb in phi.negatives:
        word = flatten_word(pb.prefix)
        if word:
            negatives.append(PrefixedBody(word, pb.body))
        elif len(pb.body) == 1:
            omega0.append(pb.body[0].negate())
        else:
            raise FragmentError("negated unprefixed conjunction of several "
                                "literals is outside conjunctive ELK")
    return FlatConjunctiveElk(tuple(dict.fromkeys(omega0)),
                              tuple(dict.fromkeys(positives)),
                              tuple(dict.fromkeys(negatives)))


def _pool(flat: ConjunctiveElk, sigma) -> list:
    """Positive bodies whose prefix has ``sigma`` as a subword."""
    pooled: list = []
    for pb in flat.positives:
        if is_subword(sigma, pb.prefix):
            pooled.extend(pb.body)
    return pooled


def _failing_negative(flat: FlatConjunctiveElk):
    """First negated conjunct whose subword-pooled checks all fail, plus the
    first satisfiable (pool, negated-literal) pair per surviving conjunct."""
    chosen: dict = {}
    for pb in flat.negatives:
        psi = _pool(flat, pb.prefix)
        witness_literal = None
        for beta in pb.body:
            if literals_sat(psi + [beta.negate()]):
                witness_literal = beta
                break
        if witness_literal is None:
            return pb, chosen
        chosen[pb] = witness_literal
    return None, chosen


def conjunctive_sat(phi: ConjunctiveElk, want_witness: bool = False) -> SatVerdict:
    """Decide satisfiability of a conjunctive ELK formula."""
    flat = flatten(phi)
    pool0 = list(flat.omega0)
    for pb in flat.positives:
        pool0.extend(pb.body)
    if not literals_sat(pool0):
        return SatVerdict(False, failing_check={"condition": 1})
    failing, chosen = _failing_negative(flat)
    if failing is not None:
        return SatVerdict(False, failing_check={
            "condition": 2,
            "sigma": list(failing.prefix),
            "body": [str(lit) for lit in failing.body],
        })
    witness = _build_witness(flat, chosen) if want_witness else None
    return SatVerdict(True, witness=witness)


def _world_for_literals(literals, sig):
    """An EL interpretation satisfying the given satisfiable literal set,
    interpreting at least the symbols of ``sig``."""
    lits = list(dict.fromkeys(literals))
    if not lits:
        return canonical_model([], extra_signature=sig)
    alpha = formula_of_literals(lits)
    model = frozenset(l.axiom for l in lits if l.positive)
    return witness_el_model(alpha, model, extra_signature=sig)


def _build_witness(flat: FlatConjunctiveElk, chosen: dict) -> PointedElk:
    sig = signature(flat)
    pool0 = list(flat.omega0)
    for pb in flat.positives:
        pool0.extend(pb.body)
    worlds = [_world_for_literals(pool0, sig)]
    edges: dict = {agent: [] for agent in sig.agents}
    for pb in flat.negatives:
        previous = 0
        k = len(pb.prefix)
        for i, agent in enumerate(pb.prefix, start=1):
            if i < k:
                pool_i = _pool(flat, pb.prefix[:i])
                worlds.append(_world_for_literals(pool_i, sig))
            else:
                psi = _pool(flat, pb.prefix)
                worlds.append(_world_for_literals(psi + [chosen[pb].negate()], sig))
            index = len(worlds) - 1
            edges.setdefault(agent, []).append((previous, index))
            previous = index
    n = len(worlds)
    relations = {agent: equivalence_closure(pairs, n)
                 for agent, pairs in edges.items()}
    structure = ElkInterpretation(worlds=tuple(worlds), relations=relations)
    return PointedElk(structure, 0)


def witness_model(phi: ConjunctiveElk) -> PointedElk:
    """Certifying pointed structure for a satisfiable conjunctive formula."""
    flat = flatten(phi)
    pool0 = list(flat.omega0)
    for pb in flat.positives:
        pool0.extend(pb.body)
    if not literals_sat(pool0):
        raise NotSatisfiable("pooled positive part is unsatisfiable")
    failing, chosen = _failing_negative(flat)
    if failing is not None:
        raise NotSatisfiable("negated conjunct %s is epistemically forced"
                             % (failing,))
    return _build_witness(flat, chosen)


# ---------------------------------------------------------------------------
# Full ELK
# ---------------------------------------------------------------------------

def _conj_or_none(parts: List[ElFormula]) -> Optional[ElFormula]:
    return el_and_of(parts) if parts else None


def elk_sat(phi: ElkFormula, want_witness: bool = False) -> SatVerdict:
    """NP decision procedure for full ELK formulas.

    Enumerates propositional assignments over the distinct flattened
    K_sigma-prefixed axioms (plain EL conjuncts included with the empty
    prefix); an assignment is realizable iff the root pool (all true bodies
    plus signed epsilon bodies) is EL-satisfiable and every false prefixed
    axiom admits a world satisfying its negated body together with the
    subword-pooled true bodies.
    """
    pairs, skeleton = elk_abstraction(phi, word_map=flatten_word)
    for values in satisfying_assignments(skeleton, len(pairs)):
        result = _try_assignment(phi, pairs, values, want_witness)
        if result is not None:
            return SatVerdict(True, witness=result if want_witness else None)
    return SatVerdict(False)


_TRIVIAL = object()


def _try_assignment(phi, pairs, values, want_witness):
    """Check one truth vector; returns a witness (or _TRIVIAL) iff realizable."""
    pool0_parts: List[ElFormula] = []
    true_prefixed: List[Tuple[tuple, ElFormula]] = []
    false_prefixed: List[Tuple[tuple, ElFormula]] = []
    for (prefix, body), value in zip(pairs, values):
        if not prefix:
            pool0_parts.append(body if value else Not(body))
        elif value:
            pool0_parts.append(body)
            true_prefixed.append((prefix, body))
        else:
            false_prefixed.append((prefix, body))

    pool0 = _conj_or_none(pool0_parts)
    model0 = frozenset()
    if pool0 is not None:
        model0 = _el_formula_sat_model(pool0)
        if model0 is None:
            return None

    def subword_pool(sigma) -> List[ElFormula]:
        return [body for prefix, body in true_prefixed if is_subword(sigma, prefix)]

    final_models = []
    for prefix, body in false_prefixed:
        formula = _conj_or_none([Not(body)] + subword_pool(prefix))
        model = _el_formula_sat_model(formula)
        if model is None:
            return None
        final_models.append((prefix, formula, model))

    if not want_witness:
        return _TRIVIAL

    sig = signature(phi)

    def world_for(formula, model):
        if formula is None:
            return canonical_model([], extra_signature=sig)
        return witness_el_model(formula, model, extra_signature=sig)

    worlds = [world_for(pool0, model0)]
    edges: dict = {agent: [] for agent in sig.agents}
    for prefix, formula, model in final_models:
        previous = 0
        k = len(prefix)
        for i, agent in enumerate(prefix, start=1):
            if i < k:
                pool_i = _conj_or_none(subword_pool(prefix[:i]))
                if pool_i is None:
                    model_i = None
                else:
                    # a sub-conjunction of the satisfiable root pool
                    model_i = _el_formula_sat_model(pool_i)
                    assert model_i is not None
                worlds.append(world_for(pool_i, model_i))
            else:
                worlds.append(world_for(formula, model))
            index = len(worlds) - 1
            edges.setdefault(agent, []).append((previous, index))
            previous = index
    n = len(worlds)
    relations = {agent: equivalence_closure(pairs_, n)
                 for agent, pairs_ in edges.items()}
    pointed = PointedElk(ElkInterpretation(tuple(worlds), relations), 0)
    if not check_elk(pointed, phi):
        raise RuntimeError("ELK witness construction failed its model check")
    return pointed

"""Multi-agent learning protocols over a pluggable logic.

Oracles implement the four query types: membership and equivalence (the
exact model), and K-membership and example queries (the epistemic model,
where the oracle tracks per-agent told sets and example queries must return
target-entailed examples not yet epistemically entailed).  Adapters
translate learners between the two models; ``learn_terminology`` is the
name-seeded EL terminology learner driven by K-membership and example
queries; the separation experiment opposes an example-query-only learner to
an adversarial propositional oracle with exponentially many fresh examples.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import props
from .engine import entails
from .syntax import (Conj, ConceptAssertion, Exists, Inclusion, Name,
                     RoleAssertion, Signature, TOP, axiom_to_str,
                     concept_size, signature, subconcepts)

FINISHED = "you finished"


class PoolExhausted(RuntimeError):
    """The bounded candidate pool has no eligible example although the told
    set and the target are not equivalent; signals pool misconfiguration."""


class BudgetExceeded(RuntimeError):
    """A learner ran past its configured query budget."""


# ---------------------------------------------------------------------------
# Logic backends
# ---------------------------------------------------------------------------

class ElBackend:
    """EL entailment backend delegating to the completion-based engine."""

    name = "el"

    def entails(self, theory, example) -> bool:
        return entails(tuple(theory), example)

    def equivalent(self, first, second) -> bool:
        first, second = tuple(first), tuple(second)
        return (all(self.entails(first, x) for x in second)
                and all(self.entails(second, x) for x in first))

    def size(self, example) -> int:
        if isinstance(example, Inclusion):
            return concept_size(example.lhs) + concept_size(example.rhs)
        return 2

    def sort_key(self, example):
        return (self.size(example), axiom_to_str(example))

    def render(self, example) -> str:
        return axiom_to_str(example)

    def candidate_pool(self, target, pool_bound: int = 3) -> list:
        """Target axioms, all signature assertions, and all named-form
        inclusions with concept size up to the bound, sorted smallest-first."""
        sig = signature(tuple(target))
        pool = list(target)
        for concept in sig.concepts:
            for ind in sig.individuals:
                pool.append(ConceptAssertion(concept, ind))
        for role in sig.roles:
            for a, b in itertools.product(sig.individuals, repeat=2):
                pool.append(RoleAssertion(role, a, b))
        concepts = concepts_up_to(sig, pool_bound)
        for name in sig.concepts:
            for c in concepts:
                pool.append(Inclusion(Name(name), c))
                pool.append(Inclusion(c, Name(name)))
        unique = list(dict.fromkeys(pool))
        unique.sort(key=self.sort_key)
        return unique


class PropBackend:
    """Propositional backend with truth-table entailment."""

    name = "prop"

    def entails(self, theory, example) -> bool:
        return props.prop_entails(theory, example)

    def equivalent(self, first, second) -> bool:
        first, second = tuple(first), tuple(second)
        return (all(self.entails(first, x) for x in second)
                and all(self.entails(second, x) for x in first))

    def size(self, example) -> int:
        return props.prop_size(example)

    def sort_key(self, example):
        return (self.size(example), props.prop_to_str(example))

    def render(self, example) -> str:
        return props.prop_to_str(example)

    def candidate_pool(self, target, pool_bound: int = 3) -> list:
        return list(dict.fromkeys(target))


def concepts_up_to(sig: Signature, max_size: int) -> list:
    """All concepts over the signature up to the given size, conjunctions in
    sorted nesting only, deterministic order."""
    by_size: Dict[int, list] = {1: [TOP] + [Name(n) for n in sig.concepts]}
    for size in range(2, max_size + 1):
        layer: list = []
        for role in sig.roles:
            for filler in by_size.get(size - 1, ()):
                layer.append(Exists(role, filler))
        for left_size in range(1, size - 1):
            right_size = size - 1 - left_size
            for left in by_size.get(left_size, ()):
                for right in by_size.get(right_size, ()):
                    if not isinstance(right, Conj) and str(left) <= str(right):
                        layer.append(Conj(left, right))
        by_size[size] = layer
    out: list = []
    for size in range(1, max_size + 1):
        out.extend(by_size.get(size, ()))
    return list(dict.fromkeys(out))


# ---------------------------------------------------------------------------
# Epistemic state and the four query oracles
# ---------------------------------------------------------------------------

@dataclass
class EpistemicState:
    """Oracle-side state: the immutable target plus per-agent told sets
    (the K_j-recorded examples) and the query counter."""

    backend: object
    target: tuple
    told: Dict[str, dict] = field(default_factory=dict)
    k: int = 0

    def told_set(self, agent: str) -> tuple:
        return tuple(self.told.get(agent, ()))


def mem(backend, target, x) -> bool:
    """Membership query: does the target entail x?  Stateless."""
    return backend.entails(tuple(target), x)


def kmem(state: EpistemicState, x, agent: str) -> bool:
    """K-membership query: answers against the original target l^1; a `yes`
    records K_agent x, a `no` leaves the state unchanged (the counter
    advances either way)."""
    state.k += 1
    answer = state.backend.entails(state.target, x)
    if answer:
        state.told.setdefault(agent, {})[x] = None
    return answer


def epistemic_entails_K(state: EpistemicState, agent: str, x) -> bool:
    """Does the current epistemic state entail K_agent x?  Reduces to plain
    entailment from the told set, since the target itself carries no
    epistemic axioms."""
    return state.backend.entails(state.told_set(agent), x)


def ex(state: EpistemicState, agent: str, pool, select) -> object:
    """Example query: some target-entailed pool element not yet epistemically
    known to the agent (recorded on return), FINISHED once the told set is
    equivalent to the target, PoolExhausted otherwise."""
    state.k += 1
    eligible = [x for x in pool
                if state.backend.entails(state.target, x)
                and not epistemic_entails_K(state, agent, x)]
    if eligible:
        choice = select(eligible)
        state.told.setdefault(agent, {})[choice] = None
        return choice
    if state.backend.equivalent(state.told_set(agent), state.target):
        return FINISHED
    raise PoolExhausted("no eligible example in the bounded pool, but the "
                        "told set is not equivalent to the target")


def eq(backend, target, hypothesis, pool, select):
    """Equivalence query: True when equivalent, else a counterexample chosen
    by the strategy among pool and hypothesis elements."""
    target = tuple(target)
    hypothesis = tuple(hypothesis)
    candidates = list(dict.fromkeys(list(pool) + list(hypothesis)))
    counterexamples = []
    for x in candidates:
        in_target = backend.entails(target, x)
        in_hypothesis = backend.entails(hypothesis, x)
        if in_target != in_hypothesis:
            counterexamples.append(x)
    if counterexamples:
        return select(counterexamples)
    if backend.equivalent(hypothesis, target):
        return True
    raise PoolExhausted("hypothesis differs from the target but no "
                        "counterexample exists in the bounded pool")


# ---------------------------------------------------------------------------
# Budgets and transcripts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LearnerBudget:
    """Query bound data: signature size, largest target concept size, the
    exponent 2*|C_O|*|Sigma_O| + 2, and the enforced query cap."""

    sigma_size: int
    largest_concept_size: int
    max_queries: Optional[int] = None

    @property
    def exponent(self) -> int:
        return 2 * self.largest_concept_size * self.sigma_size + 2

    @staticmethod
    def for_target(target, max_queries: Optional[int] = None) -> "LearnerBudget":
        sig = signature(tuple(target))
        sigma = len(sig.concepts) + len(sig.roles) + len(sig.individuals)
        largest = 1
        for ax in target:
            if isinstance(ax, Inclusion):
                largest = max(largest, concept_size(ax.lhs), concept_size(ax.rhs))
        return LearnerBudget(sigma, largest, max_queries)


@dataclass
class Transcript:
    records: List[dict] = field(default_factory=list)
    counts: Dict[str, int] = field(default_factory=dict)
    final_hypothesis: Optional[list] = None

    def log(self, kind: str, **data) -> None:
        self.counts[kind] = self.counts.get(kind, 0) + 1
        self.records.append({"kind": kind, **data})

    def count(self, kind: str) -> int:
        return self.counts.get(kind, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_json_dict(self) -> dict:
        return {"queries": self.records,
                "counts": dict(sorted(self.counts.items())),
                "total_queries": self.total,
                "final_hypothesis": self.final_hypothesis}


class _Budgeted:
    def __init__(self, budget: Optional[LearnerBudget], transcript: Transcript):
        self.budget = budget
        self.transcript = transcript

    def charge(self) -> None:
        if self.budget is not None and self.budget.max_queries is not None \
                and self.transcript.total >= self.budget.max_queries:
            raise BudgetExceeded("query budget of %d exhausted"
                                 % self.budget.max_queries)


def make_strategy(name: str, backend, rng: Optional[random.Random]):
    """Pick among eligible examples: smallest-first, largest-first,
    pool-order (first eligible), or adversarial (seeded random)."""
    if name == "smallest-first":
        return lambda eligible: min(eligible, key=backend.sort_key)
    if name == "largest-first":
        return lambda eligible: max(eligible, key=backend.sort_key)
    if name == "pool-order":
        return lambda eligible: eligible[0]
    if name == "adversarial":
        if rng is None:
            raise ValueError("adversarial strategy needs a seeded rng")
        return lambda eligible: rng.choice(sorted(eligible, key=backend.sort_key))
    raise ValueError("unknown strategy %r" % name)


class EpistemicOracle(_Budgeted):
    """K-membership and example queries over one target, with transcript."""

    def __init__(self, backend, target, pool, strategy: str = "smallest-first",
                 rng: Optional[random.Random] = None,
                 budget: Optional[LearnerBudget] = None,
                 transcript: Optional[Transcript] = None):
        super().__init__(budget, transcript or Transcript())
        self.backend = backend
        self.state = EpistemicState(backend, tuple(target))
        self.pool = list(pool)
        self.select = make_strategy(strategy, backend, rng)
        self._positives = None

    def _positive_pool(self) -> list:
        # pool elements that fail target entailment are never eligible, so
        # pre-filtering once changes nothing observable
        if self._positives is None:
            self._positives = [x for x in self.pool
                               if self.backend.entails(self.state.target, x)]
        return self._positives

    def kmem(self, x, agent: str) -> bool:
        self.charge()
        answer = kmem(self.state, x, agent)
        self.transcript.log("kmem", agent=agent, input=self.backend.render(x),
                            answer="yes" if answer else "no")
        return answer

    def ex(self, agent: str):
        self.charge()
        result = ex(self.state, agent, self._positive_pool(), self.select)
        self.transcript.log("ex", agent=agent, input=None,
                            answer=(FINISHED if result is FINISHED
                                    else self.backend.render(result)))
        return result


class ExactOracle(_Budgeted):
    """Membership and equivalence queries over one target, with transcript."""

    def __init__(self, backend, target, pool, strategy: str = "smallest-first",
                 rng: Optional[random.Random] = None,
                 budget: Optional[LearnerBudget] = None,
                 transcript: Optional[Transcript] = None):
        super().__init__(budget, transcript or Transcript())
        self.backend = backend
        self.target = tuple(target)
        self.pool = list(pool)
        self.select = make_strategy(strategy, backend, rng)

    def mem(self, x) -> bool:
        self.charge()
        answer = mem(self.backend, self.target, x)
        self.transcript.log("mem", input=self.backend.render(x),
                            answer="yes" if answer else "no")
        return answer

    def eq(self, hypothesis):
        self.charge()
        result = eq(self.backend, self.target, hypothesis, self.pool, self.select)
        self.transcript.log(
            "eq",
            input=[self.backend.render(x) for x in hypothesis],
            answer=(True if result is True else self.backend.render(result)))
        return result


# ---------------------------------------------------------------------------
# Adapters (the two reduction constructions)
# ---------------------------------------------------------------------------

class ExactFacade:
    """Exact-learner view of an epistemic oracle: MEM becomes K-MEM, and
    EQ(h) becomes one K-MEM per hypothesis element followed by one example
    query whose outcome is the counterexample (or `yes` on FINISHED)."""

    def __init__(self, oracle: EpistemicOracle, agent: str):
        self.oracle = oracle
        self.agent = agent

    def mem(self, x) -> bool:
        return self.oracle.kmem(x, self.agent)

    def eq(self, hypothesis):
        for x in hypothesis:
            self.oracle.kmem(x, self.agent)
        result = self.oracle.ex(self.agent)
        return True if result is FINISHED else result


class EpistemicFacade:
    """Epistemic-learner view of an exact oracle: the accumulated told set
    s^L is maintained here, every example query becomes EQ(s^L), and a
    K-membership query becomes MEM plus bookkeeping."""

    def __init__(self, oracle: ExactOracle):
        self.oracle = oracle
        self.s_l: dict = {}

    def kmem(self, x, agent: str) -> bool:
        answer = self.oracle.mem(x)
        if answer:
            self.s_l[x] = None
        return answer

    def ex(self, agent: str):
        result = self.oracle.eq(tuple(self.s_l))
        if result is True:
            return FINISHED
        self.s_l[result] = None
        return result


def adapter_exact_to_epistemic(exact_learner):
    """Wrap a MEM/EQ learner so it runs against K-MEM/EX oracles."""

    def epistemic_learner(oracle: EpistemicOracle, agent: str):
        return exact_learner(ExactFacade(oracle, agent))

    return epistemic_learner


def adapter_epistemic_to_exact(epistemic_learner):
    """Wrap a K-MEM/EX learner so it runs against MEM/EQ oracles."""

    def exact_learner(oracle: ExactOracle, agent: str = "learner"):
        return epistemic_learner(EpistemicFacade(oracle), agent)

    return exact_learner


# ---------------------------------------------------------------------------
# Learners
# ---------------------------------------------------------------------------

def ex_only_learner(oracle, agent: str = "learner") -> list:
    """Collect examples until the oracle says FINISHED."""
    hypothesis: dict = {}
    while True:
        result = oracle.ex(agent)
        if result is FINISHED:
            return list(hypothesis)
        hypothesis[result] = None


def eq_only_learner(oracle) -> list:
    """Grow the hypothesis by returned counterexamples until EQ says yes."""
    hypothesis: dict = {}
    while True:
        result = oracle.eq(tuple(hypothesis))
        if result is True:
            return list(hypothesis)
        hypothesis[result] = None


def _assertion_candidates(sigma: Signature) -> list:
    out: list = []
    for concept in sigma.concepts:
        for ind in sigma.individuals:
            out.append(ConceptAssertion(concept, ind))
    for role in sigma.roles:
        for a, b in itertools.product(sigma.individuals, repeat=2):
            out.append(RoleAssertion(role, a, b))
    return out


def learn_terminology(sigma: Signature, oracle, agent: str = "learner") -> list:
    """EL terminology learner over K-membership and example queries.

    Seeds the hypothesis with every signature assertion and atomic inclusion
    confirmed by K-membership, then loops on example queries: each returned
    positive inclusion is refined by probing named-form candidate axioms
    built from the signature's concept names and the example's subconcepts
    (a generalization stand-in for computing essential inclusions), and both
    the confirmed candidates and the raw example join the hypothesis.
    """
    hypothesis: dict = {}
    probed: set = set()
    for candidate in _assertion_candidates(sigma):
        probed.add(candidate)
        if oracle.kmem(candidate, agent):
            hypothesis[candidate] = None
    for left in sigma.concepts:
        for right in sigma.concepts:
            candidate = Inclusion(Name(left), Name(right))
            probed.add(candidate)
            if oracle.kmem(candidate, agent):
                hypothesis[candidate] = None
    while True:
        example = oracle.ex(agent)
        if example is FINISHED:
            return list(hypothesis)
        hypothesis[example] = None
        if not isinstance(example, Inclusion):
            continue
        parts = subconcepts(example.lhs) + subconcepts(example.rhs)
        parts = list(dict.fromkeys(parts))
        candidates: list = []
        for name in sigma.concepts:
            for concept in parts:
                candidates.append(Inclusion(Name(name), concept))
                candidates.append(Inclusion(concept, Name(name)))
        for candidate in dict.fromkeys(candidates):
            if candidate in probed or candidate in hypothesis:
                continue
            probed.add(candidate)
            if oracle.kmem(candidate, agent):
                hypothesis[candidate] = None


# ---------------------------------------------------------------------------
# The separation experiment (exponential example queries vs one EQ)
# ---------------------------------------------------------------------------

def adversarial_prop_pool(n: int) -> tuple:
    """Target [p -> q] and the example pool: the 2^n weakenings
    p & p_1^{b_1} & ... & p_n^{b_n} -> q in binary order, then p -> q."""
    if n < 1:
        raise ValueError("n must be at least 1")
    p, q = props.Var("p"), props.Var("q")
    target = (props.PImplies(p, q),)
    pool: list = []
    for bits in range(1 << n):
        premise = [p]
        for i in range(1, n + 1):
            premise.append(props.Var("p%d_%d" % ((bits >> (i - 1)) & 1, i)))
        pool.append(props.PImplies(props.pand_of(premise), q))
    pool.append(target[0])
    return target, pool


def adversarial_prop_oracle(n: int, budget: Optional[LearnerBudget] = None) -> tuple:
    """Thm-2-style oracle pair: an epistemic oracle whose example strategy
    walks the fresh binary weakenings, and an exact oracle over the same
    target for the one-equivalence-query route."""
    target, pool = adversarial_prop_pool(n)
    backend = PropBackend()
    epistemic = EpistemicOracle(backend, target, pool, strategy="pool-order",
                                budget=budget)
    exact = ExactOracle(backend, target, pool, strategy="pool-order")
    return epistemic, exact


def experiment_thm2(n: int) -> dict:
    """Run both routes; returns {"n", "ex_queries", "eq_queries"}."""
    epistemic, exact = adversarial_prop_oracle(n)
    ex_only_learner(epistemic)
    answer = exact.eq(exact.target)
    assert answer is True
    return {"n": n,
            "ex_queries": epistemic.transcript.count("ex"),
            "eq_queries": exact.transcript.count("eq")}

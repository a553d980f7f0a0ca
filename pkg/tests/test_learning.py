import random

import pytest

from elkat import props
from elkat.learning import (BudgetExceeded, ElBackend, EpistemicOracle,
                            EpistemicState, ExactOracle, FINISHED,
                            LearnerBudget, PoolExhausted, PropBackend,
                            adapter_epistemic_to_exact,
                            adapter_exact_to_epistemic,
                            adversarial_prop_oracle, concepts_up_to, eq,
                            eq_only_learner, epistemic_entails_K,
                            ex_only_learner, experiment_thm2, kmem,
                            learn_terminology, mem)
from elkat.parser import parse_axiom, parse_ontology_file
from elkat.syntax import (Exists, Inclusion, Name,
                          Signature, signature)

import gen

A, B, C = Name("A"), Name("B"), Name("C")
EL = ElBackend()
PROP = PropBackend()


def el_oracle(target, **kw):
    pool = EL.candidate_pool(target, kw.pop("pool_bound", 3))
    return EpistemicOracle(EL, target, pool, **kw)


# ---------------------------------------------------------------------------
# the four query types
# ---------------------------------------------------------------------------

def test_mem_examples():
    p, q, r = props.Var("p"), props.Var("q"), props.Var("r")
    target = (props.PImplies(p, q),)
    weak = props.PImplies(props.PAnd(p, r), q)
    assert mem(PROP, target, weak) is True

    obm = parse_ontology_file(
        "BrazilianSinger(Caetano)\nBossaNova <= BrazilianMusicStyle\n"
        "ViolaBuriti <= some madeFrom . Buriti")
    assert mem(EL, obm, parse_axiom("BossaNova <= BrazilianMusicStyle")) is True

    ofc = parse_ontology_file(
        "FrenchChef(Soyer)\nCrepe <= some contains . Flour\n"
        "Crepe & some contains . Sugar <= Dessert")
    assert mem(EL, ofc, parse_axiom("Crepe <= Dessert")) is False


def test_eq_yes_and_counterexamples():
    target = (Inclusion(A, B),)
    pool = EL.candidate_pool(target, 2)
    select = min
    assert eq(EL, target, target, pool, lambda xs: min(xs, key=EL.sort_key)) is True
    counterexample = eq(EL, target, (), pool, lambda xs: min(xs, key=EL.sort_key))
    assert counterexample == Inclusion(A, B)

    target2 = (Inclusion(A, B), Inclusion(B, C))
    x = eq(EL, target2, (Inclusion(A, B),), EL.candidate_pool(target2, 2),
           lambda xs: min(xs, key=EL.sort_key))
    assert EL.entails(target2, x) and not EL.entails((Inclusion(A, B),), x)


def test_kmem_updates_told_set_per_definition():
    state = EpistemicState(EL, (Inclusion(A, B),))
    assert kmem(state, Inclusion(A, B), "j") is True
    assert state.told_set("j") == (Inclusion(A, B),)
    assert state.k == 1
    assert kmem(state, Inclusion(B, A), "j") is False
    assert state.told_set("j") == (Inclusion(A, B),)       # no on no-answers
    assert state.k == 2
    kmem(state, Inclusion(A, B), "j")                      # idempotent on told
    assert state.told_set("j") == (Inclusion(A, B),)


def test_epistemic_entails_K_reduction():
    state = EpistemicState(EL, (Inclusion(A, B),))
    buriti = parse_ontology_file(
        "Buriti <= BrazilianTree\nViolaBuriti <= some madeFrom . Buriti")
    state.told["j"] = {ax: None for ax in buriti}
    assert epistemic_entails_K(
        state, "j", parse_axiom("ViolaBuriti <= some madeFrom . BrazilianTree"))
    assert not epistemic_entails_K(state, "other", Inclusion(A, B))
    assert epistemic_entails_K(state, "j", buriti[0])


def test_ex_returns_fresh_then_finishes():
    target = (Inclusion(A, B),)
    oracle = el_oracle(target, pool_bound=2)
    got = oracle.ex("j")
    assert got == Inclusion(A, B)
    # everything target-entailed is now epistemically known
    assert oracle.ex("j") is FINISHED


def test_ex_never_returns_epistemically_entailed():
    target = (Inclusion(A, B), Inclusion(B, C), Inclusion(A, C))
    oracle = el_oracle(target, pool_bound=2)
    state = oracle.state
    state.told["j"] = {Inclusion(A, B): None, Inclusion(B, C): None}
    while True:
        got = oracle.ex("j")
        assert got != Inclusion(A, C)
        if got is FINISHED:
            break


def test_pool_exhausted_is_loud():
    target = (Inclusion(A, Exists("r", Exists("r", Exists("r", B)))),)
    oracle = EpistemicOracle(EL, target, pool=[])
    with pytest.raises(PoolExhausted):
        oracle.ex("j")


def test_budget_zero_exceeds_immediately():
    target = (Inclusion(A, B),)
    budget = LearnerBudget.for_target(target, max_queries=0)
    oracle = el_oracle(target, budget=budget)
    with pytest.raises(BudgetExceeded):
        oracle.kmem(Inclusion(A, B), "j")


def test_budget_exponent_formula():
    budget = LearnerBudget(sigma_size=4, largest_concept_size=3)
    assert budget.exponent == 2 * 3 * 4 + 2


# ---------------------------------------------------------------------------
# adapters
# ---------------------------------------------------------------------------

def exact_one_shot(facade):
    answer = facade.eq((Inclusion(A, B),))
    assert answer is True
    return [Inclusion(A, B)]


def test_adapter_exact_to_epistemic_trace():
    oracle = el_oracle((Inclusion(A, B),), pool_bound=2)
    wrapped = adapter_exact_to_epistemic(exact_one_shot)
    hypothesis = wrapped(oracle, "learner")
    kinds = [(r["kind"], r["answer"]) for r in oracle.transcript.records]
    assert kinds == [("kmem", "yes"), ("ex", FINISHED)]
    assert EL.equivalent(hypothesis, (Inclusion(A, B),))


def test_adapter_exact_to_epistemic_counterexample_path():
    oracle = el_oracle((Inclusion(A, B),), pool_bound=2)
    wrapped = adapter_exact_to_epistemic(eq_only_learner)
    hypothesis = wrapped(oracle, "learner")
    assert EL.equivalent(hypothesis, (Inclusion(A, B),))
    # the empty first hypothesis gets the target axiom back as a positive
    # counterexample via the example query
    first_ex = next(r for r in oracle.transcript.records if r["kind"] == "ex")
    assert first_ex["answer"] == "A <= B"


def test_adapter_epistemic_to_exact_trace():
    target = (Inclusion(A, B),)
    oracle = ExactOracle(EL, target, EL.candidate_pool(target, 2))
    wrapped = adapter_epistemic_to_exact(ex_only_learner)
    hypothesis = wrapped(oracle)
    answers = [(r["kind"], r["answer"]) for r in oracle.transcript.records]
    assert answers == [("eq", "A <= B"), ("eq", True)]
    assert EL.equivalent(hypothesis, target)


def test_adapter_epistemic_to_exact_kmem_passthrough():
    target = (Inclusion(A, B),)
    oracle = ExactOracle(EL, target, EL.candidate_pool(target, 2))
    from elkat.learning import EpistemicFacade
    facade = EpistemicFacade(oracle)
    assert facade.kmem(Inclusion(A, B), "learner") is True
    assert facade.kmem(Inclusion(B, A), "learner") is False
    assert list(facade.s_l) == [Inclusion(A, B)]
    assert oracle.transcript.count("mem") == 2


# ---------------------------------------------------------------------------
# the terminology learner
# ---------------------------------------------------------------------------

def test_learner_atomic_target_found_in_phase_one():
    target = (Inclusion(A, B),)
    oracle = el_oracle(target, pool_bound=2)
    hypothesis = learn_terminology(Signature(concepts=("A", "B")), oracle)
    assert Inclusion(A, B) in hypothesis
    ex_answers = [r["answer"] for r in oracle.transcript.records
                  if r["kind"] == "ex"]
    assert ex_answers == [FINISHED]


def test_learner_empty_target():
    oracle = el_oracle((), pool_bound=2)
    hypothesis = learn_terminology(Signature(concepts=("A", "B")), oracle)
    assert all(EL.entails((), ax) for ax in hypothesis)   # tautologies only


def test_learner_end_to_end_viola():
    target = tuple(parse_ontology_file(
        "ViolaBuriti <= some madeFrom . Buriti\nBuriti <= BrazilianTree"))
    oracle = el_oracle(target, pool_bound=3)
    hypothesis = learn_terminology(signature(target), oracle)
    assert EL.equivalent(hypothesis, target)


def test_learner_hypothesis_sound_at_every_step():
    rng = random.Random(71)
    target = tuple(gen.named_form_terminology(rng, max_axioms=5))
    oracle = el_oracle(target, pool_bound=3)
    learn_terminology(signature(target), oracle)
    for record in oracle.transcript.records:
        if record["kind"] == "kmem" and record["answer"] == "yes":
            assert EL.entails(target, parse_axiom(record["input"]))
        if record["kind"] == "ex" and record["answer"] != FINISHED:
            assert EL.entails(target, parse_axiom(record["answer"]))


def test_ex_freshness_no_example_repeats():
    rng = random.Random(73)
    target = tuple(gen.named_form_terminology(rng, max_axioms=6))
    oracle = el_oracle(target, pool_bound=3)
    learn_terminology(signature(target), oracle)
    examples = [r["answer"] for r in oracle.transcript.records
                if r["kind"] == "ex" and r["answer"] != FINISHED]
    assert len(examples) == len(set(examples))


# ---------------------------------------------------------------------------
# adversarial experiment
# ---------------------------------------------------------------------------

def test_adversarial_pool_shape():
    epistemic, exact = adversarial_prop_oracle(2)
    # 4 weak examples before the target appears
    weak = epistemic.pool[:-1]
    assert len(weak) == 4
    assert epistemic.pool[-1] == exact.target[0]
    # told with all weak examples still misses p -> q
    state = epistemic.state
    state.told["j"] = {x: None for x in weak}
    assert not epistemic_entails_K(state, "j", exact.target[0])


def test_experiment_thm2_counts():
    for n in (1, 2, 3):
        result = experiment_thm2(n)
        assert result["ex_queries"] >= 2 ** n
        assert result["eq_queries"] == 1


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def test_concepts_up_to_is_deterministic_and_bounded():
    sig = Signature(concepts=("A", "B"), roles=("r",))
    pool = concepts_up_to(sig, 3)
    assert pool == concepts_up_to(sig, 3)
    from elkat.syntax import concept_size
    assert all(concept_size(c) <= 3 for c in pool)
    assert Name("A") in pool and Exists("r", Name("B")) in pool


def test_prop_parse_and_entails():
    f = props.parse_prop("p & (q -> r) -> !s | t")
    assert props.parse_prop(props.prop_to_str(f)) == f
    assert props.prop_entails([props.parse_prop("p -> q")],
                              props.parse_prop("p & r -> q"))
    assert not props.prop_entails([props.parse_prop("p -> q")],
                                  props.parse_prop("q -> p"))

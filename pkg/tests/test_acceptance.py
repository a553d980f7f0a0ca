"""Acceptance suite: one test per criterion, one PASS line each.

The corpora are fixed-seed and regenerated identically on every run; the
heavyweight artifacts (verdicts over the conjunctive corpus) are shared
between criteria through module-scoped fixtures.
"""

import json
import random
import time

import pytest

from elkat.elksat import conjunctive_sat, elk_sat, flatten, witness_model
from elkat.engine import canonical_model, entails, literals_sat
from elkat.enumeration import (SAT,
                               brute_force_elk_sat, brute_force_literals_model,
                               default_world_bound)
from elkat.learning import (ElBackend, EpistemicOracle, ExactOracle, FINISHED,
                            adapter_epistemic_to_exact,
                            adapter_exact_to_epistemic, eq_only_learner,
                            experiment_thm2, learn_terminology)
from elkat.parser import parse_axiom, parse_ontology_file
from elkat.semantics import check_el_axiom, check_elk
from elkat.sessions import run_session
from elkat.syntax import (Conj, ConceptAssertion, Exists, Inclusion, Name,
                          RoleAssertion, render_conjunctive, signature)

import gen

CORPUS_SEED = 20260810
CORPUS_SIZE = 2000
GENERAL_SIZE = 500
LITERAL_SETS = 1000
CANONICAL_RUNS = 200
TERMINOLOGIES = 20


def report(criterion: str, passed: bool, detail: str = "") -> None:
    line = "ACCEPTANCE %s: %s" % (criterion, "PASS" if passed else "FAIL")
    if detail:
        line += " — " + detail
    print(line)
    assert passed, line


@pytest.fixture(scope="module")
def conjunctive_verdicts():
    """(instance, verdict, oracle_result) for the whole corpus."""
    corpus = gen.conjunctive_corpus(CORPUS_SEED, CORPUS_SIZE)
    start = time.time()
    rows = []
    for instance in corpus:
        verdict = conjunctive_sat(instance)
        bound = 1 + sum(len(pb.prefix) for pb in instance.negatives)
        oracle = brute_force_elk_sat(render_conjunctive(instance),
                                     max_worlds=bound, max_domain=3)
        rows.append((instance, verdict, oracle))
    elapsed = time.time() - start
    return rows, elapsed


def test_criterion_1_differential_conjunctive_sat(conjunctive_verdicts):
    rows, elapsed = conjunctive_verdicts
    disagreements = [
        (instance, verdict.satisfiable, oracle.status)
        for instance, verdict, oracle in rows
        if verdict.satisfiable != (oracle.status == SAT)
    ]
    detail = ("%d instances, %d sat / %d unsat, %d disagreements, %.1fs"
              % (len(rows),
                 sum(1 for _, v, _ in rows if v.satisfiable),
                 sum(1 for _, v, _ in rows if not v.satisfiable),
                 len(disagreements), elapsed))
    report("C1 (differential SAT, n=%d)" % len(rows),
           len(rows) >= 2000 and not disagreements and elapsed < 120.0, detail)


def test_criterion_2_witness_self_certification(conjunctive_verdicts):
    rows, _ = conjunctive_verdicts
    failures = 0
    checked = 0
    for instance, verdict, _oracle in rows:
        if not verdict.satisfiable:
            continue
        checked += 1
        witness = witness_model(instance)
        if not check_elk(witness, render_conjunctive(instance)):
            failures += 1
    report("C2 (witness self-certification)", checked > 0 and failures == 0,
           "%d witnesses checked, %d failures" % (checked, failures))


def test_criterion_3_flattening_equivalence(conjunctive_verdicts):
    rows, _ = conjunctive_verdicts
    mismatches = sum(
        1 for instance, verdict, _ in rows
        if conjunctive_sat(flatten(instance)).satisfiable != verdict.satisfiable)
    report("C3 (flattening equivalence)", mismatches == 0,
           "%d instances, %d mismatches" % (len(rows), mismatches))


def test_criterion_4a_paper_examples():
    ofc = parse_ontology_file(
        "FrenchChef(Soyer)\nCrepe <= some contains . Flour\n"
        "Crepe & some contains . Sugar <= Dessert")
    ok = (entails(ofc, parse_axiom("Crepe <= Dessert")) is False
          and entails(ofc, parse_axiom("Crepe & some contains . Sugar <= Dessert"))
          is True)
    buriti = [parse_axiom("Buriti <= BrazilianTree"),
              parse_axiom("ViolaBuriti <= some madeFrom . Buriti")]
    ok = ok and entails(
        buriti, parse_axiom("ViolaBuriti <= some madeFrom . BrazilianTree"))
    report("C4a (worked examples)", ok)


def test_criterion_4b_brute_force_one_sided():
    failures = 0
    found = 0
    for lits in gen.literal_sets(CORPUS_SEED + 1, LITERAL_SETS):
        model = brute_force_literals_model(lits, max_domain=3)
        if model is None:
            continue
        found += 1
        if literals_sat(lits) is not True:
            failures += 1
    report("C4b (bounded model implies sat, n=%d)" % LITERAL_SETS,
           found > 0 and failures == 0,
           "%d bounded models found, %d failures" % (found, failures))


def test_criterion_4c_canonical_models():
    rng = random.Random(CORPUS_SEED + 2)
    names = [Name("A"), Name("B"), Name("C")]
    failures = 0
    for _ in range(CANONICAL_RUNS):
        axioms = []
        for _ in range(rng.randint(1, 6)):
            shape = rng.choice(["t1", "t2", "t3", "t4", "ca", "ra"])
            x, y, z = (rng.choice(names) for _ in range(3))
            if shape == "t1":
                axioms.append(Inclusion(x, y))
            elif shape == "t2":
                axioms.append(Inclusion(Conj(x, y), z))
            elif shape == "t3":
                axioms.append(Inclusion(x, Exists("r", y)))
            elif shape == "t4":
                axioms.append(Inclusion(Exists("r", x), y))
            elif shape == "ca":
                axioms.append(ConceptAssertion(x.name, rng.choice(["a", "b"])))
            else:
                axioms.append(RoleAssertion("r", rng.choice(["a", "b"]),
                                            rng.choice(["a", "b"])))
        interp = canonical_model(axioms)
        if not all(check_el_axiom(interp, ax) for ax in axioms):
            failures += 1
    report("C4c (canonical models, n=%d)" % CANONICAL_RUNS, failures == 0,
           "%d failures" % failures)


def test_criterion_5_full_elk_sat(conjunctive_verdicts):
    rows, _ = conjunctive_verdicts
    fragment_mismatches = sum(
        1 for instance, verdict, _ in rows
        if elk_sat(render_conjunctive(instance)).satisfiable
        != verdict.satisfiable)
    general = gen.general_corpus(CORPUS_SEED + 3, GENERAL_SIZE)
    general_mismatches = 0
    for phi in general:
        verdict = elk_sat(phi)
        oracle = brute_force_elk_sat(phi, max_worlds=default_world_bound(phi),
                                     max_domain=3)
        if verdict.satisfiable != (oracle.status == SAT):
            general_mismatches += 1
    report("C5 (full ELK SAT)",
           fragment_mismatches == 0 and general_mismatches == 0,
           "conjunctive corpus %d mismatches, %d general instances %d mismatches"
           % (fragment_mismatches, len(general), general_mismatches))


def test_criterion_6_thm2_separation():
    start = time.time()
    rows = [experiment_thm2(n) for n in (1, 2, 3, 4)]
    elapsed = time.time() - start
    ok = all(row["ex_queries"] >= 2 ** row["n"] and row["eq_queries"] == 1
             for row in rows)
    counts = ", ".join("n=%d: ex=%d eq=%d" % (r["n"], r["ex_queries"],
                                              r["eq_queries"]) for r in rows)
    report("C6 (separation experiment)", ok and elapsed < 5.0,
           counts + ", %.2fs" % elapsed)


@pytest.fixture(scope="module")
def learning_targets():
    return [tuple(t) for t in gen.terminologies(CORPUS_SEED + 4, TERMINOLOGIES)]


def _sound_throughout(backend, target, transcript) -> bool:
    for record in transcript.records:
        if record["kind"] == "kmem" and record["answer"] == "yes":
            if not backend.entails(target, parse_axiom(record["input"])):
                return False
        if record["kind"] == "ex" and record["answer"] != FINISHED:
            if not backend.entails(target, parse_axiom(record["answer"])):
                return False
    return True


def test_criterion_7_learning_end_to_end(learning_targets):
    backend = ElBackend()
    failures = []
    for index, target in enumerate(learning_targets):
        pool = backend.candidate_pool(target, 3)
        oracle = EpistemicOracle(backend, target, pool)
        hypothesis = learn_terminology(signature(target), oracle)
        finished = any(r["kind"] == "ex" and r["answer"] == FINISHED
                       for r in oracle.transcript.records)
        equivalent = backend.equivalent(hypothesis, target)
        sound = _sound_throughout(backend, target, oracle.transcript)
        if not (finished and equivalent and sound):
            failures.append(index)
    report("C7 (terminology learning, %d targets)" % len(learning_targets),
           not failures, "failing targets: %s" % failures)


def test_criterion_8_adapter_round_trips(learning_targets):
    backend = ElBackend()
    failures = []
    for index, target in enumerate(learning_targets):
        pool = backend.candidate_pool(target, 3)

        # direct exact run (EQ-driven) vs the same learner wrapped epistemic
        exact_oracle = ExactOracle(backend, target, pool)
        exact_h = eq_only_learner(exact_oracle)
        epistemic_oracle = EpistemicOracle(backend, target, pool)
        wrapped_h = adapter_exact_to_epistemic(eq_only_learner)(
            epistemic_oracle, "learner")
        same = backend.equivalent(exact_h, wrapped_h)

        # Thm-3 arithmetic: wrapped query count is at most quadratic in the
        # exact run's total input size (plus query count)
        exact_inputs = 0
        for record in exact_oracle.transcript.records:
            if record["kind"] == "eq":
                exact_inputs += len(record["input"])
            else:
                exact_inputs += 1
        exact_total = exact_inputs + exact_oracle.transcript.total
        bound_ok = epistemic_oracle.transcript.total <= (exact_total + 1) ** 2

        # epistemic learner (alg3) direct vs wrapped as exact
        direct_oracle = EpistemicOracle(backend, target, pool)
        direct_h = learn_terminology(signature(target), direct_oracle)
        wrapped_exact_oracle = ExactOracle(backend, target, pool)

        def alg3(facade, agent, _target=target):
            return learn_terminology(signature(_target), facade, agent)

        back_h = adapter_epistemic_to_exact(alg3)(wrapped_exact_oracle)
        same_back = backend.equivalent(direct_h, back_h)

        if not (same and bound_ok and same_back
                and backend.equivalent(exact_h, target)
                and backend.equivalent(direct_h, target)):
            failures.append(index)
    report("C8 (adapter round trips, %d targets)" % len(learning_targets),
           not failures, "failing targets: %s" % failures)


def test_criterion_9_determinism(tmp_path, capsys):
    from elkat.cli import main

    target_file = tmp_path / "target.el"
    target_file.write_text(
        "ViolaBuriti <= some madeFrom . Buriti\nBuriti <= BrazilianTree\n")
    config_file = tmp_path / "learn.json"
    config_file.write_text(json.dumps({
        "backend": "el", "target_file": str(target_file), "learner": "alg3",
        "oracle_strategy": "adversarial", "pool_bound": 3, "seed": 13}))
    sat_file = tmp_path / "phi.elk"
    sat_file.write_text("A(a)\nK[1] K[2] (A <= B)\n! K[2] B(a)\n")

    outputs = []
    for _ in range(2):
        assert main(["learn", str(config_file)]) == 0
        learn_out = capsys.readouterr().out
        assert main(["sat", str(sat_file), "--json", "--witness"]) == 0
        sat_out = capsys.readouterr().out
        assert main(["sat", str(sat_file), "--mode", "brute", "--json"]) == 0
        brute_out = capsys.readouterr().out
        assert main(["experiment", "thm2", "--n", "3"]) == 0
        exp_out = capsys.readouterr().out
        outputs.append((learn_out, sat_out, brute_out, exp_out))
    report("C9 (determinism)", outputs[0] == outputs[1],
           "4 commands byte-identical across runs"
           if outputs[0] == outputs[1] else "outputs differ")

"""Learning-session runner: config dict in, transcript dict out.

Config keys: backend ("el" | "prop"), target_file, learner ("alg3" |
"exact-wrapped" | "epistemic-wrapped"), oracle_strategy, pool_bound,
budget (max query count), seed.  The ELKAT_SEED environment variable
overrides the configured seed.
"""

from __future__ import annotations

import os
import random
from typing import Optional

from . import props
from .learning import (ElBackend, EpistemicOracle, ExactOracle, LearnerBudget,
                       PropBackend, adapter_epistemic_to_exact,
                       adapter_exact_to_epistemic, eq_only_learner,
                       ex_only_learner, learn_terminology)
from .parser import parse_ontology_file
from .syntax import signature

AGENT = "learner"


def load_target(backend_name: str, path: str) -> tuple:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    if backend_name == "el":
        return tuple(parse_ontology_file(text))
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    return tuple(props.parse_prop(ln) for ln in lines if ln)


def resolve_seed(config: dict) -> int:
    env = os.environ.get("ELKAT_SEED")
    if env is not None:
        return int(env)
    return int(config.get("seed", 0))


def run_session(config: dict) -> dict:
    backend_name = config.get("backend", "el")
    if backend_name == "el":
        backend = ElBackend()
    elif backend_name == "prop":
        backend = PropBackend()
    else:
        raise ValueError("unknown backend %r" % backend_name)

    target = load_target(backend_name, config["target_file"])
    seed = resolve_seed(config)
    rng = random.Random(seed)
    strategy = config.get("oracle_strategy", "smallest-first")
    pool_bound = int(config.get("pool_bound", 3))
    max_queries = config.get("budget")
    budget = LearnerBudget.for_target(target,
                                      None if max_queries is None else int(max_queries))
    learner_name = config.get("learner", "alg3")
    pool = backend.candidate_pool(target, pool_bound)

    if learner_name == "alg3":
        if backend_name != "el":
            raise ValueError("the terminology learner requires the el backend")
        oracle = EpistemicOracle(backend, target, pool, strategy=strategy,
                                 rng=rng, budget=budget)
        hypothesis = learn_terminology(signature(target), oracle, AGENT)
        transcript = oracle.transcript
        adapter = None
    elif learner_name == "exact-wrapped":
        oracle = EpistemicOracle(backend, target, pool, strategy=strategy,
                                 rng=rng, budget=budget)
        wrapped = adapter_exact_to_epistemic(eq_only_learner)
        hypothesis = wrapped(oracle, AGENT)
        transcript = oracle.transcript
        adapter = "exact MEM/EQ learner run through K-MEM/EX oracles"
    elif learner_name == "epistemic-wrapped":
        oracle = ExactOracle(backend, target, pool, strategy=strategy,
                             rng=rng, budget=budget)
        if backend_name == "el":
            def epistemic(facade, agent):
                return learn_terminology(signature(target), facade, agent)
        else:
            epistemic = ex_only_learner
        wrapped = adapter_epistemic_to_exact(epistemic)
        hypothesis = wrapped(oracle, AGENT)
        transcript = oracle.transcript
        adapter = "epistemic K-MEM/EX learner run through MEM/EQ oracles"
    else:
        raise ValueError("unknown learner %r" % learner_name)

    transcript.final_hypothesis = [backend.render(x) for x in hypothesis]
    target_entails = all(backend.entails(target, x) for x in hypothesis)
    hypothesis_entails = all(backend.entails(tuple(hypothesis), x) for x in target)
    uses_alg3 = learner_name == "alg3" or (learner_name == "epistemic-wrapped"
                                           and backend_name == "el")
    return {
        "backend": backend_name,
        "learner": learner_name,
        "adapter": adapter,
        "refinement": ("named-form subconcept probing, a stand-in for the "
                       "essential-inclusion computation" if uses_alg3 else None),
        "seed": seed,
        "strategy": strategy,
        "pool_bound": pool_bound,
        "pool_size": len(pool),
        "budget": ({"sigma_size": budget.sigma_size,
                    "largest_concept_size": budget.largest_concept_size,
                    "exponent": budget.exponent,
                    "max_queries": budget.max_queries}),
        "transcript": transcript.to_json_dict(),
        "hypothesis": [backend.render(x) for x in hypothesis],
        "equivalence": {
            "target_entails_hypothesis": target_entails,
            "hypothesis_entails_target": hypothesis_entails,
            "equivalent": target_entails and hypothesis_entails,
        },
    }

import random

import pytest

from elkat import _pykernels, kernels
from elkat.enumeration import (InterpSpace, NO_MODEL_WITHIN_BOUNDS, SAT,
                               brute_force_el_model, brute_force_elk_sat,
                               default_world_bound)
from elkat.parser import parse_formula
from elkat.semantics import check_el, check_elk
from elkat.syntax import (And, Conj, ConceptAssertion, Exists, Inclusion,
                          Lit, Name, Not, RoleAssertion, Signature,
                          TOP)

import gen

A, B = Name("A"), Name("B")


def test_space_enumerates_all_interpretations():
    sig = Signature(concepts=("A",), roles=("r",), individuals=("a",))
    space = InterpSpace.get(sig, 2)
    # d=1: 2 concepts maps * 2 role maps * 1 = 4; d=2: 4 * 16 * 2 = 128
    assert space.total == 4 + 128
    seen = set()
    for i in range(space.total):
        interp = space.decode(i)
        key = (len(interp.domain), frozenset(interp.concept_map["A"]),
               frozenset(interp.role_map["r"]), interp.individual_map["a"])
        assert key not in seen
        seen.add(key)


def test_axiom_mask_agrees_with_model_checker():
    sig = Signature(concepts=("A", "B"), roles=("r",), individuals=("a",))
    space = InterpSpace.get(sig, 2)
    rng = random.Random(2)
    axioms = [Inclusion(A, B), Inclusion(Conj(A, B), Exists("r", A)),
              Inclusion(Exists("r", TOP), B), ConceptAssertion("A", "a"),
              RoleAssertion("r", "a", "a"), Inclusion(TOP, Exists("r", B))]
    for axiom in axioms:
        mask = space.axiom_mask(axiom)
        for _ in range(120):
            i = rng.randrange(space.total)
            expected = check_el(space.decode(i), Lit(axiom))
            assert bool((mask >> i) & 1) == expected, (axiom, i)


def test_brute_force_el_model_finds_first_and_none():
    model = brute_force_el_model(Lit(ConceptAssertion("A", "a")), max_domain=2)
    assert model is not None and len(model.domain) == 1
    assert brute_force_el_model(And(Lit(Inclusion(TOP, A)),
                                    Not(Lit(ConceptAssertion("A", "a")))),
                                max_domain=3) is None


def test_partition_enumerations():
    assert kernels.all_partitions(1) == [(0,)]
    assert len(kernels.all_partitions(4)) == 15      # Bell(4)
    assert len(kernels.all_partitions(5)) == 52      # Bell(5)
    # canonical representatives fixing world 0: sum of p(w-k) over block sizes
    assert len(kernels.canonical_point_partitions(4)) == 7
    assert len(kernels.canonical_point_partitions(7)) == 30
    for labels in kernels.canonical_point_partitions(5):
        assert labels[0] == 0


def test_block_masks():
    masks = kernels.block_masks((0, 1, 0))
    assert masks == (0b101, 0b010, 0b101)


# ---------------------------------------------------------------------------
# brute_force_elk_sat
# ---------------------------------------------------------------------------

def test_contradiction_has_no_model_at_any_bound():
    phi = parse_formula("K[1] (A <= B) && ! K[1] (A <= B)")
    for bound in (1, 2, 4):
        result = brute_force_elk_sat(phi, max_worlds=bound)
        assert result.status == NO_MODEL_WITHIN_BOUNDS


def test_two_world_separation():
    phi = parse_formula("K[1] (A <= B) && ! K[2] (A <= B)")
    result = brute_force_elk_sat(phi)
    assert result.status == SAT
    assert len(result.model.structure.worlds) == 2
    assert check_elk(result.model, phi)


def test_plain_el_axiom_one_world():
    phi = parse_formula("A(a)")
    result = brute_force_elk_sat(phi, max_worlds=3)
    assert result.status == SAT
    assert len(result.model.structure.worlds) == 1
    assert len(result.model.structure.worlds[0].domain) == 1


def test_point_is_world_zero():
    phi = parse_formula("A(a) && ! K[1] A(a)")
    result = brute_force_elk_sat(phi)
    assert result.status == SAT
    assert result.model.point == 0


def test_default_world_bound():
    phi = parse_formula("K[1] K[2] (A <= B) && ! K[2] B(a) && ! K[1] A(a)")
    assert default_world_bound(phi) == 1 + 2 + 1 + 1


def test_sat_output_always_model_checks():
    rng = random.Random(17)
    found = 0
    for _ in range(30):
        conj = gen.conjunctive_instance(rng)
        from elkat.syntax import render_conjunctive
        phi = render_conjunctive(conj)
        bound = 1 + sum(len(pb.prefix) for pb in conj.negatives)
        result = brute_force_elk_sat(phi, max_worlds=bound)
        if result.status == SAT:
            assert check_elk(result.model, phi)
            found += 1
    assert found >= 10


def test_determinism_same_witness():
    phi = parse_formula("A(a) && K[1] K[2] (A <= B) && ! K[2] B(a)")
    first = brute_force_elk_sat(phi)
    second = brute_force_elk_sat(phi)
    assert first.model.to_json_dict() == second.model.to_json_dict()


# ---------------------------------------------------------------------------
# kernel parity: pure Python vs selected backend
# ---------------------------------------------------------------------------

def test_axiom_bits_parity_with_pure():
    if kernels.axiom_bits is _pykernels.axiom_bits:
        pytest.skip("compiled kernels not active")
    for d in (1, 2, 3):
        program = (kernels.OP_CONCEPT, 0, kernels.OP_CONCEPT, 1,
                   kernels.OP_AND, kernels.OP_EXISTS, 0, kernels.OP_CONCEPT, 0,
                   kernels.OP_INCLUSION)
        assert kernels.axiom_bits(2, 1, 1, d, program) \
            == _pykernels.axiom_bits(2, 1, 1, d, program)


def test_search_kripke_parity_with_pure():
    if kernels.search_kripke is _pykernels.search_kripke:
        pytest.skip("compiled kernels not active")
    rng = random.Random(4)
    for _ in range(80):
        w = rng.randint(1, 4)
        n_agents = rng.randint(0, 2)
        n_true = rng.randint(0, 2)
        n_false = rng.randint(0, 2)
        pre_t = tuple(tuple(rng.randrange(n_agents)
                            for _ in range(rng.randint(0, 2))) if n_agents else ()
                      for _ in range(n_true))
        pre_f = tuple(tuple(rng.randrange(n_agents)
                            for _ in range(rng.randint(0, 2))) if n_agents else ()
                      for _ in range(n_false))
        table = bytes(rng.randint(0, 1)
                      for _ in range(1 << (n_true + n_false)))
        got = kernels.search_kripke(w, n_agents, pre_t, pre_f, table, n_false)
        want = _pykernels.search_kripke(w, n_agents, pre_t, pre_f, table, n_false)
        assert got == want

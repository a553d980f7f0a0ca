import pytest
from hypothesis import given, settings, strategies as st

from elkat.parser import ParseError, parse_axiom, parse_formula, parse_ontology_file
from elkat.syntax import (And, Conj, ConceptAssertion, ConjunctiveElk, ElLiteral,
                          Exists, FragmentError, Inclusion, KAnd, KAxiom,
                          KNot, Lit, Name, Not, PrefixedBody, RoleAssertion,
                          TOP, concept_size, elk_formula_to_str,
                          render_conjunctive, signature, subconcepts,
                          to_conjunctive)

A, B, C = Name("A"), Name("B"), Name("C")


# ---------------------------------------------------------------------------
# parse_formula examples
# ---------------------------------------------------------------------------

def test_parse_inclusion_with_existential():
    phi = parse_formula("Crepe <= some contains . Flour")
    assert phi == KAxiom((), Lit(Inclusion(Name("Crepe"),
                                           Exists("contains", Name("Flour")))))


def test_parse_k_prefixes():
    phi = parse_formula("K[1] K[2] (A <= B)")
    assert phi == KAxiom(("1", "2"), Lit(Inclusion(A, B)))


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_formula("A <= ")
    assert err.value.line == 1


def test_parse_multi_literal_k_body():
    phi = parse_formula("K[1] (A <= B && B(a))")
    assert phi == KAxiom(("1",), And(
        Lit(Inclusion(A, B)), Lit(ConceptAssertion("B", "a"))))


def test_parse_rejects_modal_alternation():
    with pytest.raises(FragmentError):
        parse_formula("K[1] (! K[2] (A <= B))")


def test_parse_rejects_internal_tokens():
    with pytest.raises(FragmentError):
        parse_formula("Bottom <= A")
    with pytest.raises(FragmentError):
        parse_formula("{a} <= A")


def test_parse_assertions_and_conjunction():
    phi = parse_formula("A(a) && r(a, b) && ! (A <= B)")
    conjuncts = [KAxiom((), Lit(ConceptAssertion("A", "a"))),
                 KAxiom((), Lit(RoleAssertion("r", "a", "b")))]
    assert elk_formula_to_str(phi).startswith("A(a) && r(a, b)")


def test_parse_parenthesized_concepts():
    ax = parse_axiom("(A & B) <= (some r . (A & B))")
    assert ax == Inclusion(Conj(A, B), Exists("r", Conj(A, B)))


def test_ontology_file_lines_and_comments():
    axioms = parse_ontology_file("# comment\nA <= B\n\nB(a)  # trailing\n")
    assert axioms == [Inclusion(A, B), ConceptAssertion("B", "a")]


# ---------------------------------------------------------------------------
# printing round trips (property)
# ---------------------------------------------------------------------------

names = st.sampled_from(["A", "B", "C", "Role1", "x_1"])
agents = st.sampled_from(["1", "2", "Ana"])


def concepts(max_depth=3):
    return st.recursive(
        st.one_of(st.just(TOP), st.builds(Name, names)),
        lambda inner: st.one_of(st.builds(Conj, inner, inner),
                                st.builds(Exists, names, inner)),
        max_leaves=6)


axioms = st.one_of(
    st.builds(Inclusion, concepts(), concepts()),
    st.builds(ConceptAssertion, names, names),
    st.builds(RoleAssertion, names, names, names),
)


def el_formulas():
    return st.recursive(
        st.builds(Lit, axioms),
        lambda inner: st.one_of(st.builds(Not, inner),
                                st.builds(And,
                                          inner, inner)),
        max_leaves=5)


def elk_formulas():
    # parser-canonical ASTs: an empty prefix carries a bare literal (boolean
    # structure is encoded at the ELK level), a non-empty prefix may carry
    # any parenthesizable EL formula
    prefixed = st.builds(KAxiom, st.lists(agents, min_size=1, max_size=3).map(tuple),
                         el_formulas())
    plain = st.builds(KAxiom, st.just(()), st.builds(Lit, axioms))
    return st.recursive(
        st.one_of(plain, prefixed),
        lambda inner: st.one_of(st.builds(KNot, inner),
                                st.builds(KAnd, inner, inner)),
        max_leaves=5)


@settings(max_examples=300, deadline=None)
@given(elk_formulas())
def test_print_parse_round_trip(phi):
    assert parse_formula(elk_formula_to_str(phi)) == phi


# ---------------------------------------------------------------------------
# to_conjunctive
# ---------------------------------------------------------------------------

def test_to_conjunctive_triple():
    phi = parse_formula("A(a) && K[1] (A <= B) && ! K[2] (B <= C)")
    conj = to_conjunctive(phi)
    assert conj == ConjunctiveElk(
        (ElLiteral(ConceptAssertion("A", "a")),),
        (PrefixedBody(("1",), (ElLiteral(Inclusion(A, B)),)),),
        (PrefixedBody(("2",), (ElLiteral(Inclusion(B, C)),)),))


def test_to_conjunctive_lone_negative_literal():
    conj = to_conjunctive(parse_formula("! (A <= B)"))
    assert conj == ConjunctiveElk((ElLiteral(Inclusion(A, B), False),), (), ())


def test_to_conjunctive_rejects_negated_conjunction_of_kaxioms():
    phi = KNot(KAnd(KAxiom(("1",), Lit(Inclusion(A, B))),
                    KAxiom(("1",), Lit(Inclusion(B, C)))))
    with pytest.raises(FragmentError):
        to_conjunctive(phi)


def test_to_conjunctive_rejects_double_negation():
    phi = KNot(KNot(KAxiom(("1",), Lit(Inclusion(A, B)))))
    with pytest.raises(FragmentError):
        to_conjunctive(phi)


def test_to_conjunctive_rejects_non_literal_body():
    phi = KAxiom(("1",), Not(And(
        Lit(Inclusion(A, B)), Lit(Inclusion(B, C)))))
    with pytest.raises(FragmentError):
        to_conjunctive(phi)


def render_strategy():
    lits = st.builds(ElLiteral, axioms, st.booleans())
    bodies = st.lists(lits, min_size=1, max_size=2).map(tuple)
    words = st.lists(agents, min_size=1, max_size=3).map(tuple)
    prefixed = st.builds(PrefixedBody, words, bodies)
    return st.builds(
        ConjunctiveElk,
        st.lists(lits, max_size=2).map(tuple),
        st.lists(prefixed, max_size=2).map(tuple),
        st.lists(prefixed, max_size=2).map(tuple),
    ).filter(lambda c: c.conjunct_count() > 0)


@settings(max_examples=200, deadline=None)
@given(render_strategy())
def test_to_conjunctive_total_on_fragment(conj):
    assert to_conjunctive(render_conjunctive(conj)) == conj


# ---------------------------------------------------------------------------
# signature
# ---------------------------------------------------------------------------

def test_signature_of_top_is_empty():
    sig = signature(TOP)
    assert sig.concepts == () and sig.roles == () and sig.individuals == ()


def test_signature_collects_nominal_individuals():
    from elkat.syntax import Nominal
    sig = signature(Exists("r", Nominal("a")))
    assert sig.roles == ("r",) and sig.individuals == ("a",)


def test_signature_example_ontology():
    axioms = parse_ontology_file(
        "BrazilianSinger(Caetano)\nBossaNova <= BrazilianMusicStyle\n"
        "ViolaBuriti <= some madeFrom . Buriti")
    sig = signature(axioms)
    assert "Caetano" in sig.individuals
    assert "madeFrom" in sig.roles
    assert "BossaNova" in sig.concepts


@settings(max_examples=200, deadline=None)
@given(concepts())
def test_signature_monotone_under_subterms(concept):
    outer = signature(concept)
    for sub in subconcepts(concept):
        assert outer.covers(signature(sub))


def test_concept_size():
    assert concept_size(Conj(A, Exists("r", B))) == 4
    assert concept_size(TOP) == 1

"""EL reasoning core.

Pipeline: conjunctions of EL literals are translated to EL++ CBox axioms
(nominals + Bottom), normalized, and decided by completion-rule saturation.
Entailment, EL-formula satisfiability via propositional abstraction, and the
canonical / witness model constructions are layered on top.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List

from .semantics import ElInterpretation, check_el
from .syntax import (BOTTOM, Bottom, Concept, Conj, ConceptAssertion,
                     ElAxiom, ElFormula, ElLiteral, Exists, Inclusion, Lit,
                     Name, Nominal, Not, RoleAssertion, TOP, Top,
                     axioms_of_formula, flatten_conj, is_basic, signature)


class InvalidWitnessInput(ValueError):
    """The propositional model handed to witness_el_model is not M-consistent."""


# ---------------------------------------------------------------------------
# Fresh-name allocation
# ---------------------------------------------------------------------------

class _FreshNames:
    """Deterministic __N<k> / __f<k> allocator that skips occupied names."""

    def __init__(self, prefix: str, occupied: frozenset):
        self.prefix = prefix
        self.occupied = occupied
        self.counter = 0
        self.allocated: Dict[str, str] = {}

    def fresh(self, origin: str) -> str:
        while True:
            self.counter += 1
            name = "%s%d" % (self.prefix, self.counter)
            if name not in self.occupied:
                break
        self.allocated[name] = origin
        return name


def _occupied_names(items) -> frozenset:
    sig = signature(items)
    return frozenset(sig.concepts) | frozenset(sig.roles) | frozenset(sig.individuals)


# ---------------------------------------------------------------------------
# tau: EL literals -> EL++ CBox axioms
# ---------------------------------------------------------------------------

def _tau(lit: ElLiteral, fresh: _FreshNames) -> tuple:
    ax = lit.axiom
    if isinstance(ax, ConceptAssertion):
        nom = Nominal(ax.individual)
        name = Name(ax.concept)
        if lit.positive:
            return (Inclusion(nom, name),)
        return (Inclusion(Conj(nom, name), BOTTOM),)
    if isinstance(ax, RoleAssertion):
        nom_a = Nominal(ax.subject)
        succ = Exists(ax.role, Nominal(ax.target))
        if lit.positive:
            return (Inclusion(nom_a, succ),)
        return (Inclusion(Conj(nom_a, succ), BOTTOM),)
    if isinstance(ax, Inclusion):
        if lit.positive:
            return (ax,)
        nom = Nominal(fresh.fresh("negated inclusion %s" % (ax,)))
        return (Inclusion(nom, ax.lhs), Inclusion(Conj(nom, ax.rhs), BOTTOM))
    raise TypeError(repr(ax))


def tau(lit: ElLiteral) -> frozenset:
    """The CBox translation of one EL literal (fresh counter scoped here)."""
    fresh = _FreshNames("__f", _occupied_names(lit))
    return frozenset(_tau(lit, fresh))


def tau_set(literals: Iterable[ElLiteral]) -> tuple:
    """Union of the per-literal translations, with pairwise-distinct fresh
    individuals allocated in left-to-right literal order."""
    lits = list(literals)
    fresh = _FreshNames("__f", _occupied_names(lits))
    out: List[Inclusion] = []
    for lit in lits:
        out.extend(_tau(lit, fresh))
    return tuple(dict.fromkeys(out))


# ---------------------------------------------------------------------------
# Normalization to the EL++ normal forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalizedOntology:
    axioms: tuple  # Inclusion values in normal form, deduped, input order
    fresh_map: dict = field(default_factory=dict)

    def axiom_set(self) -> frozenset:
        return frozenset(self.axioms)


def _is_normal(ax: Inclusion) -> bool:
    lhs, rhs = ax.lhs, ax.rhs
    rhs_ok = is_basic(rhs) or isinstance(rhs, Bottom)
    if is_basic(lhs):
        if rhs_ok:
            return True
        return isinstance(rhs, Exists) and is_basic(rhs.filler)
    if isinstance(lhs, Conj):
        return is_basic(lhs.left) and is_basic(lhs.right) and rhs_ok
    if isinstance(lhs, Exists):
        return is_basic(lhs.filler) and rhs_ok
    return False


def _normalize_inclusions(inclusions: Iterable[Inclusion],
                          fresh: _FreshNames) -> List[Inclusion]:
    out: List[Inclusion] = []

    def emit(ax: Inclusion) -> None:
        out.append(ax)

    def norm(lhs: Concept, rhs: Concept) -> None:
        if isinstance(rhs, Conj):
            for part in flatten_conj(rhs):
                norm(lhs, part)
            return
        if isinstance(rhs, Top):
            return
        conjuncts = [c for c in flatten_conj(lhs) if not isinstance(c, Top)]
        if any(isinstance(c, Bottom) for c in conjuncts):
            return
        if not conjuncts:
            conjuncts = [TOP]
        simple: List[Concept] = []
        for c in conjuncts:
            if is_basic(c):
                simple.append(c)
                continue
            assert isinstance(c, Exists)
            filler = c.filler
            if not is_basic(filler):
                n = Name(fresh.fresh("filler of %s" % (c,)))
                norm(filler, n)
                filler = n
            existential = Exists(c.role, filler)
            if len(conjuncts) == 1:
                simple.append(existential)
            else:
                n = Name(fresh.fresh("conjunct %s" % (c,)))
                emit(Inclusion(existential, n))
                simple.append(n)
        while len(simple) > 2:
            n = Name(fresh.fresh("conjunction %s & %s" % (simple[0], simple[1])))
            emit(Inclusion(Conj(simple[0], simple[1]), n))
            simple = [n] + simple[2:]
        lhs_n = simple[0] if len(simple) == 1 else Conj(simple[0], simple[1])
        if is_basic(rhs) or isinstance(rhs, Bottom):
            emit(Inclusion(lhs_n, rhs))
            return
        assert isinstance(rhs, Exists)
        if not is_basic(lhs_n):
            n = Name(fresh.fresh("lhs %s" % (lhs_n,)))
            emit(Inclusion(lhs_n, n))
            lhs_n = n
        filler = rhs.filler
        if isinstance(filler, Bottom):
            emit(Inclusion(lhs_n, BOTTOM))
            return
        if is_basic(filler):
            emit(Inclusion(lhs_n, rhs))
            return
        n = Name(fresh.fresh("filler of %s" % (rhs,)))
        emit(Inclusion(lhs_n, Exists(rhs.role, n)))
        norm(n, filler)

    for ax in inclusions:
        if _is_normal(ax):
            emit(ax)
        else:
            norm(ax.lhs, ax.rhs)
    return out


def normalize(axioms: Iterable) -> NormalizedOntology:
    """Normalize EL axioms / CBox axioms into the four normal forms.

    Assertions are encoded through nominals ({a} <= A and {a} <= some r.{b});
    every output axiom is an Inclusion in normal form.
    """
    items = list(axioms)
    fresh = _FreshNames("__N", _occupied_names(items))
    inclusions: List[Inclusion] = []
    for ax in items:
        if isinstance(ax, ConceptAssertion):
            inclusions.append(Inclusion(Nominal(ax.individual), Name(ax.concept)))
        elif isinstance(ax, RoleAssertion):
            inclusions.append(Inclusion(Nominal(ax.subject),
                                        Exists(ax.role, Nominal(ax.target))))
        elif isinstance(ax, Inclusion):
            inclusions.append(ax)
        else:
            raise TypeError(repr(ax))
    normal = _normalize_inclusions(inclusions, fresh)
    return NormalizedOntology(tuple(dict.fromkeys(normal)), dict(fresh.allocated))


def normalize_named(axioms: Iterable[ElAxiom]) -> list:
    """Named normal form used by the canonical-model construction: assertions
    stay assertions, inclusions are flattened over concept names only."""
    items = list(axioms)
    fresh = _FreshNames("__N", _occupied_names(items))
    assertions = [ax for ax in items if not isinstance(ax, Inclusion)]
    inclusions = [ax for ax in items if isinstance(ax, Inclusion)]
    normal = _normalize_inclusions(inclusions, fresh)
    return assertions + normal


# ---------------------------------------------------------------------------
# Completion-rule saturation
# ---------------------------------------------------------------------------

@dataclass
class CompletionState:
    subsumer_map: dict   # basic concept -> frozenset of basics (+ BOTTOM)
    relation_map: dict   # role -> frozenset of (basic, basic)
    clash: bool


_BOT = -1


def _saturate_ids(n_basics: int, top_id: int, nominal_ids, t1, t2, t3, t4,
                  seed_members=None, seed_edges=None):
    """Worklist saturation over integer-identified basic concepts.

    Returns (S, R, live, clash) where S maps basic id -> set of ids (with
    _BOT for Bottom), R maps role -> set of id pairs.
    """
    S = [set() for _ in range(n_basics)]
    R: Dict[str, set] = {}
    in_edges = [[] for _ in range(n_basics)]
    out_edges = [[] for _ in range(n_basics)]
    live = [False] * n_basics
    flows = [[] for _ in range(n_basics)]  # flows[src] = dsts with S(dst) >= S(src)
    clash = False
    queue = deque()

    def add_member(x: int, d: int) -> None:
        if d in S[x]:
            return
        S[x].add(d)
        queue.append(("m", x, d))

    def add_edge(x: int, r: str, y: int) -> None:
        rel = R.setdefault(r, set())
        if (x, y) in rel:
            return
        rel.add((x, y))
        queue.append(("e", x, r, y))

    def add_live(x: int) -> None:
        if live[x]:
            return
        live[x] = True
        queue.append(("l", x))

    def add_flow(src: int, dst: int) -> None:
        if dst in flows[src] or dst == src:
            return
        flows[src].append(dst)
        for d in list(S[src]):
            add_member(dst, d)

    for x in range(n_basics):
        add_member(x, x)
        add_member(x, top_id)
    add_live(top_id)
    for x in nominal_ids:
        add_live(x)
    for x, d in seed_members or ():
        add_member(x, d)
    for x, r, y in seed_edges or ():
        add_edge(x, r, y)

    nominal_set = set(nominal_ids)
    while queue:
        event = queue.popleft()
        if event[0] == "m":
            _, x, d = event
            if d == _BOT:
                if live[x]:
                    clash = True
                for w, _r in in_edges[x]:
                    add_member(w, _BOT)
                for dst in flows[x]:
                    add_member(dst, _BOT)
                continue
            for e in t1.get(d, ()):
                add_member(x, e)
            for b2, e in t2.get(d, ()):
                if b2 in S[x]:
                    add_member(x, e)
            for r, b2 in t3.get(d, ()):
                add_edge(x, r, b2)
            for w, r in in_edges[x]:
                for e in t4.get((r, d), ()):
                    add_member(w, e)
            if d in nominal_set and d != x:
                add_flow(d, x)          # S(x) grows with everything {a} satisfies
                if live[x]:
                    add_flow(x, d)      # a inhabits x, so x's subsumers bind a
            for dst in flows[x]:
                add_member(dst, d)
        elif event[0] == "e":
            _, x, r, y = event
            in_edges[y].append((x, r))
            out_edges[x].append(y)
            for d in list(S[y]):
                for e in t4.get((r, d), ()):
                    add_member(x, e)
            if _BOT in S[y]:
                add_member(x, _BOT)
            if live[x]:
                add_live(y)
        else:
            _, x = event
            if _BOT in S[x]:
                clash = True
            for y in out_edges[x]:
                add_live(y)
            for d in S[x]:
                if d in nominal_set and d != x:
                    add_flow(x, d)
    return S, R, live, clash


def saturate(onto: NormalizedOntology) -> CompletionState:
    """Saturate the normalized ontology; the result is a fixpoint."""
    basics: Dict[Concept, int] = {}

    def bid(c: Concept) -> int:
        if isinstance(c, Bottom):
            return _BOT
        if c not in basics:
            basics[c] = len(basics)
        return basics[c]

    top_id = bid(TOP)
    t1: Dict[int, list] = {}
    t2: Dict[int, list] = {}
    t3: Dict[int, list] = {}
    t4: Dict[tuple, list] = {}
    for ax in onto.axioms:
        lhs, rhs = ax.lhs, ax.rhs
        if is_basic(lhs):
            if is_basic(rhs) or isinstance(rhs, Bottom):
                t1.setdefault(bid(lhs), []).append(bid(rhs))
            else:
                t3.setdefault(bid(lhs), []).append((rhs.role, bid(rhs.filler)))
        elif isinstance(lhs, Conj):
            b1, b2, d = bid(lhs.left), bid(lhs.right), bid(rhs)
            t2.setdefault(b1, []).append((b2, d))
            if b2 != b1:
                t2.setdefault(b2, []).append((b1, d))
        else:
            t4.setdefault((lhs.role, bid(lhs.filler)), []).append(bid(rhs))

    names = list(basics)
    nominal_ids = [i for c, i in basics.items() if isinstance(c, Nominal)]
    S, R, live, clash = _saturate_ids(len(names), top_id, nominal_ids,
                                      t1, t2, t3, t4)
    subsumers = {}
    for c, i in basics.items():
        subsumers[c] = frozenset(BOTTOM if d == _BOT else names[d] for d in S[i])
    relations = {r: frozenset((names[x], names[y]) for x, y in rel)
                 for r, rel in R.items()}
    return CompletionState(subsumers, relations, clash)


def elpp_consistent(onto: NormalizedOntology) -> bool:
    """True iff the normalized ontology has a model."""
    return not saturate(onto).clash


# ---------------------------------------------------------------------------
# Satisfiability of EL-literal conjunctions; entailment
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1 << 18)
def _literals_sat_cached(lits: frozenset) -> bool:
    ordered = sorted(lits, key=str)
    return elpp_consistent(normalize(tau_set(ordered)))


def literals_sat(literals: Iterable[ElLiteral]) -> bool:
    """Satisfiability of a conjunction of EL literals (empty set: True)."""
    lits = frozenset(literals)
    if not lits:
        return True
    return _literals_sat_cached(lits)


def entails(ontology: Iterable[ElAxiom], axiom: ElAxiom) -> bool:
    """O entails ax iff O plus the negation of ax is unsatisfiable."""
    lits = [ElLiteral(ax) for ax in ontology]
    lits.append(ElLiteral(axiom, positive=False))
    return not literals_sat(lits)


def _entails_member(ontology: Iterable[ElAxiom], concept: Concept,
                    individual: str) -> bool:
    """O entails C(a) for a possibly complex C, via {a} & C <= Bottom."""
    base = tau_set(ElLiteral(ax) for ax in ontology)
    denial = Inclusion(Conj(Nominal(individual), concept), BOTTOM)
    return not elpp_consistent(normalize(base + (denial,)))


# ---------------------------------------------------------------------------
# Propositional abstraction and EL-formula satisfiability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PropAbstraction:
    axioms: tuple           # distinct axioms, first-occurrence order
    skeleton: tuple         # ("var", i) | ("not", s) | ("and", s, s)

    def variable_of(self, axiom: ElAxiom) -> int:
        return self.axioms.index(axiom)

    def eval_partial(self, assignment: dict):
        """Three-valued evaluation; None means undetermined."""

        def ev(node):
            if node[0] == "var":
                return assignment.get(node[1])
            if node[0] == "not":
                inner = ev(node[1])
                return None if inner is None else not inner
            left = ev(node[1])
            if left is False:
                return False
            right = ev(node[2])
            if right is False:
                return False
            if left is True and right is True:
                return True
            return None

        return ev(self.skeleton)


def prop_abstraction(alpha: ElFormula) -> PropAbstraction:
    """Structure-preserving propositional abstraction with a 1:1 map between
    the distinct EL axioms of alpha and variables."""
    axioms = axioms_of_formula(alpha)
    index = {ax: i for i, ax in enumerate(axioms)}

    def build(f: ElFormula):
        if isinstance(f, Lit):
            return ("var", index[f.axiom])
        if isinstance(f, Not):
            return ("not", build(f.body))
        return ("and", build(f.left), build(f.right))

    return PropAbstraction(tuple(axioms), build(alpha))


def _induced_literals(axioms: tuple, model: frozenset) -> list:
    return [ElLiteral(ax, positive=(ax in model)) for ax in axioms]


def m_consistent(model, alpha: ElFormula) -> bool:
    """Is the propositional model M (a set of axioms evaluated true)
    realizable by a single EL interpretation together with the negations of
    all remaining axioms of alpha?"""
    abstraction = prop_abstraction(alpha)
    model = frozenset(model)
    unknown = model - set(abstraction.axioms)
    if unknown:
        raise ValueError("model mentions axioms outside alpha: %s"
                         % sorted(map(str, unknown)))
    return literals_sat(_induced_literals(abstraction.axioms, model))


def _el_formula_sat_model(alpha: ElFormula):
    """First M-consistent propositional model of alpha's abstraction in
    true-first, first-occurrence-order search; None if unsatisfiable."""
    abstraction = prop_abstraction(alpha)
    axioms = abstraction.axioms
    n = len(axioms)
    assignment: dict = {}

    def forced_literals() -> list:
        return [ElLiteral(axioms[i], positive=v) for i, v in assignment.items()]

    def search(i: int):
        status = abstraction.eval_partial(assignment)
        if status is False:
            return None
        if not literals_sat(forced_literals()):
            return None
        if i == n:
            if status is True:
                return frozenset(ax for j, ax in enumerate(axioms) if assignment[j])
            return None
        for value in (True, False):
            assignment[i] = value
            found = search(i + 1)
            if found is not None:
                return found
            del assignment[i]
        return None

    return search(0)


def el_formula_sat(alpha: ElFormula) -> bool:
    """NP check: some propositional model of the abstraction is M-consistent."""
    return _el_formula_sat_model(alpha) is not None


# ---------------------------------------------------------------------------
# Canonical models
# ---------------------------------------------------------------------------

def _rep(name: str) -> str:
    return "~" + name


_TOP_REP = "~Top"


def canonical_model(ontology: Iterable[ElAxiom],
                    extra_signature=None) -> ElInterpretation:
    """The canonical model of a set of EL axioms in named normal form.

    Domain: the individuals of O plus one representative per concept name
    (and one for Top); memberships and edges are exactly the entailed ones.
    ``extra_signature`` widens the interpreted symbols (with empty/default
    extensions) so the model can be evaluated against a larger formula.
    """
    axioms = list(ontology)
    sig = signature(axioms)
    if extra_signature is not None:
        sig = sig.union(extra_signature)
    concepts = list(sig.concepts)
    individuals = list(sig.individuals)
    roles = list(sig.roles)

    reps = {name: _rep(name) for name in concepts}
    reps_all = dict(reps)
    reps_all["Top"] = _TOP_REP
    rep_concepts = {_rep(name): Name(name) for name in concepts}
    rep_concepts[_TOP_REP] = TOP

    domain = tuple(individuals) + tuple(sorted(rep_concepts))
    concept_map: Dict[str, frozenset] = {}
    for a_name in concepts:
        members = set()
        for ind in individuals:
            if entails(axioms, ConceptAssertion(a_name, ind)):
                members.add(ind)
        for rep_el, rep_concept in rep_concepts.items():
            if entails(axioms, Inclusion(rep_concept, Name(a_name))):
                members.add(rep_el)
        concept_map[a_name] = frozenset(members)

    role_map: Dict[str, frozenset] = {}
    asserted = {(ax.role, ax.subject, ax.target)
                for ax in axioms if isinstance(ax, RoleAssertion)}
    for r in roles:
        pairs = set()
        for role, a, b in asserted:
            if role == r:
                pairs.add((a, b))
        for ind in individuals:
            for rep_el, rep_concept in rep_concepts.items():
                if _entails_member(axioms, Exists(r, rep_concept), ind):
                    pairs.add((ind, rep_el))
        for rep_el_a, concept_a in rep_concepts.items():
            for rep_el_b, concept_b in rep_concepts.items():
                if entails(axioms, Inclusion(concept_a, Exists(r, concept_b))):
                    pairs.add((rep_el_a, rep_el_b))
        role_map[r] = frozenset(pairs)

    return ElInterpretation(domain=domain,
                            concept_map=concept_map,
                            role_map=role_map,
                            individual_map={a: a for a in individuals})


def canonical_model_of_concept(concept: Concept,
                               ontology: Iterable[ElAxiom],
                               extra_signature=None):
    """Canonical model of C and O: O extended with A_C <= C, C <= A_C and
    A_C(a_C), normalized; returns (interpretation, root element)."""
    axioms = list(ontology)
    occupied = _occupied_names(axioms + [Inclusion(concept, TOP)])
    fresh = _FreshNames("__AC", occupied)
    a_name = fresh.fresh("concept name for %s" % (concept,))
    ind_fresh = _FreshNames("__aC", occupied)
    a_ind = ind_fresh.fresh("root individual for %s" % (concept,))
    enc = [Inclusion(Name(a_name), concept), Inclusion(concept, Name(a_name)),
           ConceptAssertion(a_name, a_ind)]
    named = normalize_named(axioms + enc)
    interp = canonical_model(named, extra_signature=extra_signature)
    return interp, a_ind


# ---------------------------------------------------------------------------
# Witness models for satisfiable EL formulas
# ---------------------------------------------------------------------------

def _rename(interp: ElInterpretation, tag: str,
            keep_individuals: bool) -> ElInterpretation:
    ren = {d: "%s:%s" % (tag, d) for d in interp.domain}
    return ElInterpretation(
        domain=tuple(ren[d] for d in interp.domain),
        concept_map={a: frozenset(ren[d] for d in ext)
                     for a, ext in interp.concept_map.items()},
        role_map={r: frozenset((ren[d], ren[e]) for d, e in pairs)
                  for r, pairs in interp.role_map.items()},
        individual_map=({a: ren[d] for a, d in interp.individual_map.items()}
                        if keep_individuals else {}),
    )


def disjoint_union(components: List[ElInterpretation]) -> ElInterpretation:
    """Disjoint union; individuals are interpreted in the first component."""
    renamed = [_rename(c, str(i), keep_individuals=(i == 0))
               for i, c in enumerate(components)]
    domain: list = []
    concept_map: Dict[str, set] = {}
    role_map: Dict[str, set] = {}
    individual_map: dict = {}
    for comp in renamed:
        domain.extend(comp.domain)
        for a, ext in comp.concept_map.items():
            concept_map.setdefault(a, set()).update(ext)
        for r, pairs in comp.role_map.items():
            role_map.setdefault(r, set()).update(pairs)
        individual_map.update(comp.individual_map)
    return ElInterpretation(domain=tuple(domain),
                            concept_map={a: frozenset(v) for a, v in concept_map.items()},
                            role_map={r: frozenset(v) for r, v in role_map.items()},
                            individual_map=individual_map)


def witness_el_model(alpha: ElFormula, model,
                     extra_signature=None) -> ElInterpretation:
    """Explicit model of alpha from an M-consistent propositional model:
    the canonical model of the positive part, disjoint-union-ed with one
    concept-canonical component per negated inclusion.  ``extra_signature``
    widens the interpreted symbols beyond alpha's own."""
    abstraction = prop_abstraction(alpha)
    model = frozenset(model)
    if not literals_sat(_induced_literals(abstraction.axioms, model)):
        raise InvalidWitnessInput("propositional model is not M-consistent")
    positives = [ax for ax in abstraction.axioms if ax in model]
    negatives = [ax for ax in abstraction.axioms if ax not in model]
    sig = signature(alpha)
    if extra_signature is not None:
        sig = sig.union(extra_signature)
    named = normalize_named(positives)
    components = [canonical_model(named, extra_signature=sig)]
    for ax in negatives:
        if isinstance(ax, Inclusion):
            comp, _root = canonical_model_of_concept(ax.lhs, positives,
                                                     extra_signature=sig)
            components.append(comp)
    witness = disjoint_union(components)
    if not check_el(witness, alpha):
        raise RuntimeError("witness construction failed to satisfy the formula")
    return witness

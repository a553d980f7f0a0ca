"""Brute-force model enumeration: the ground-truth oracles.

An :class:`InterpSpace` enumerates every EL interpretation of a finite
signature with bounded domain (domain sizes ascending, then concept, role
and individual maps in lexicographic order).  Axiom truth over the whole
space is computed as one bitmask by the axiom-evaluation kernel and cached,
so formula-level questions become integer bit arithmetic.

``brute_force_elk_sat`` searches pointed S5 structures exhaustively within
world/domain bounds.  Worlds are abstracted to their truth profile over the
formula's EL axioms (two interpretations with equal profiles are
interchangeable), per-agent relations range over set partitions with the
first agent's partition canonical up to relabeling of non-point worlds, and
candidate truth vectors for the distinct K-prefixed axioms are enumerated
outermost.  The first structure found in this fixed order is decoded back
into concrete interpretations and re-checked with ``check_elk`` before it is
returned.  These procedures share nothing with the completion-based engine;
they exist to arbitrate it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import kernels
from .abstraction import elk_abstraction, satisfying_assignments
from .semantics import (ElInterpretation, ElkInterpretation, PointedElk,
                        check_el, check_elk)
from .syntax import (And, Concept, Conj, ConceptAssertion, ElFormula,
                     ElkFormula, Exists, Inclusion, Lit, Name, Not,
                     RoleAssertion, Signature, Top, axioms_of_formula,
                     formula_of_literals, signature)

SAT = "SAT"
NO_MODEL_WITHIN_BOUNDS = "NO_MODEL_WITHIN_BOUNDS"


@dataclass(frozen=True)
class OracleResult:
    status: str
    model: Optional[PointedElk]
    max_worlds: int
    max_domain: int

    @property
    def found(self) -> bool:
        return self.status == SAT


# ---------------------------------------------------------------------------
# Interpretation spaces
# ---------------------------------------------------------------------------

_SPACES: Dict[tuple, "InterpSpace"] = {}


class InterpSpace:
    """All interpretations of a signature with domain sizes 1..max_domain."""

    def __init__(self, sig: Signature, max_domain: int):
        if max_domain < 1:
            raise ValueError("max_domain must be at least 1")
        self.concepts = tuple(sig.concepts)
        self.roles = tuple(sig.roles)
        self.individuals = tuple(sig.individuals)
        self.max_domain = max_domain
        self.concept_index = {c: i for i, c in enumerate(self.concepts)}
        self.role_index = {r: i for i, r in enumerate(self.roles)}
        self.individual_index = {a: i for i, a in enumerate(self.individuals)}
        self.counts = []
        self.offsets = []
        offset = 0
        for d in range(1, max_domain + 1):
            n_conc, n_role, n_ind = kernels.interp_counts(
                len(self.concepts), len(self.roles), len(self.individuals), d)
            self.offsets.append(offset)
            self.counts.append((n_conc, n_role, n_ind))
            offset += n_conc * n_role * n_ind
        self.total = offset
        self.full_mask = (1 << offset) - 1
        self._axiom_masks: Dict[object, int] = {}

    @staticmethod
    def get(sig: Signature, max_domain: int) -> "InterpSpace":
        key = (sig.concepts, sig.roles, sig.individuals, max_domain)
        space = _SPACES.get(key)
        if space is None:
            space = InterpSpace(sig, max_domain)
            _SPACES[key] = space
        return space

    # -- axiom truth masks --------------------------------------------------

    def _program(self, axiom) -> tuple:
        ops: List[int] = []

        def concept(c: Concept) -> None:
            if isinstance(c, Top):
                ops.append(kernels.OP_TOP)
            elif isinstance(c, Name):
                ops.extend((kernels.OP_CONCEPT, self.concept_index[c.name]))
            elif isinstance(c, Conj):
                concept(c.left)
                concept(c.right)
                ops.append(kernels.OP_AND)
            elif isinstance(c, Exists):
                concept(c.filler)
                ops.extend((kernels.OP_EXISTS, self.role_index[c.role]))
            else:
                raise ValueError("concept %r has no finite enumeration" % (c,))

        if isinstance(axiom, Inclusion):
            concept(axiom.lhs)
            concept(axiom.rhs)
            ops.append(kernels.OP_INCLUSION)
        elif isinstance(axiom, ConceptAssertion):
            concept(Name(axiom.concept))
            ops.extend((kernels.OP_CASSERT, self.individual_index[axiom.individual]))
        elif isinstance(axiom, RoleAssertion):
            ops.extend((kernels.OP_RASSERT, self.role_index[axiom.role],
                        self.individual_index[axiom.subject],
                        self.individual_index[axiom.target]))
        else:
            raise TypeError(repr(axiom))
        return tuple(ops)

    def axiom_mask(self, axiom) -> int:
        mask = self._axiom_masks.get(axiom)
        if mask is None:
            program = self._program(axiom)
            mask = 0
            for d in range(1, self.max_domain + 1):
                chunk = kernels.axiom_bits(len(self.concepts), len(self.roles),
                                           len(self.individuals), d, program)
                mask |= int.from_bytes(chunk, "little") << self.offsets[d - 1]
            self._axiom_masks[axiom] = mask
        return mask

    def formula_mask(self, formula: ElFormula) -> int:
        if isinstance(formula, Lit):
            return self.axiom_mask(formula.axiom)
        if isinstance(formula, Not):
            return self.full_mask & ~self.formula_mask(formula.body)
        if isinstance(formula, And):
            return self.formula_mask(formula.left) & self.formula_mask(formula.right)
        raise TypeError(repr(formula))

    # -- decoding -----------------------------------------------------------

    def decode(self, index: int) -> ElInterpretation:
        if not (0 <= index < self.total):
            raise IndexError(index)
        d = self.max_domain
        for size in range(1, self.max_domain + 1):
            n_conc, n_role, n_ind = self.counts[size - 1]
            block = n_conc * n_role * n_ind
            if index < self.offsets[size - 1] + block:
                d = size
                index -= self.offsets[size - 1]
                break
        n_conc, n_role, n_ind = self.counts[d - 1]
        ind_combo = index % n_ind
        role_combo = (index // n_ind) % n_role
        conc_combo = index // (n_ind * n_role)
        full = (1 << d) - 1
        concept_map = {}
        for i, name in enumerate(self.concepts):
            mask = (conc_combo >> (d * (len(self.concepts) - 1 - i))) & full
            concept_map[name] = frozenset(x for x in range(d) if (mask >> x) & 1)
        role_map = {}
        for i, role in enumerate(self.roles):
            mask = (role_combo >> (d * d * (len(self.roles) - 1 - i))) & ((1 << (d * d)) - 1)
            role_map[role] = frozenset((x, y) for x in range(d) for y in range(d)
                                       if (mask >> (x * d + y)) & 1)
        individual_map = {}
        for i, ind in enumerate(self.individuals):
            individual_map[ind] = (ind_combo // (d ** (len(self.individuals) - 1 - i))) % d
        return ElInterpretation(domain=tuple(range(d)), concept_map=concept_map,
                                role_map=role_map, individual_map=individual_map)


# ---------------------------------------------------------------------------
# Brute-force EL satisfiability (sound for SAT, bounded for UNSAT)
# ---------------------------------------------------------------------------

def brute_force_el_model(alpha: ElFormula, max_domain: int = 3,
                         extra_signature: Signature = None) -> Optional[ElInterpretation]:
    """First interpretation satisfying alpha with domain size <= max_domain,
    or None if no such bounded model exists."""
    sig = signature(alpha)
    if extra_signature is not None:
        sig = sig.union(extra_signature)
    space = InterpSpace.get(sig, max_domain)
    mask = space.formula_mask(alpha)
    if mask == 0:
        return None
    index = (mask & -mask).bit_length() - 1
    model = space.decode(index)
    assert check_el(model, alpha)
    return model


def brute_force_literals_model(literals, max_domain: int = 3,
                               extra_signature: Signature = None):
    lits = list(literals)
    if not lits:
        space = InterpSpace.get(Signature(), max_domain)
        return space.decode(0)
    return brute_force_el_model(formula_of_literals(lits), max_domain,
                                extra_signature)


# ---------------------------------------------------------------------------
# Brute-force ELK satisfiability
# ---------------------------------------------------------------------------

def _realizable_profiles(space: InterpSpace, axioms) -> list:
    """(profile bits over axioms, least interpretation index) for every
    profile realized in the space, ordered by least index."""
    masks = [space.axiom_mask(ax) for ax in axioms]
    out = []

    def split(i: int, current: int, bits: int) -> None:
        if current == 0:
            return
        if i == len(masks):
            out.append((bits, (current & -current).bit_length() - 1))
            return
        split(i + 1, current & masks[i], bits | (1 << i))
        split(i + 1, current & ~masks[i], bits)

    split(0, space.full_mask, 0)
    out.sort(key=lambda item: item[1])
    return out


def _eval_body(body: ElFormula, truth: dict) -> bool:
    if isinstance(body, Lit):
        return truth[body.axiom]
    if isinstance(body, Not):
        return not _eval_body(body.body, truth)
    return _eval_body(body.left, truth) and _eval_body(body.right, truth)


def default_world_bound(phi: ElkFormula) -> int:
    """1 + total modal depth of the distinct K-prefixed axioms."""
    pairs, _ = elk_abstraction(phi)
    return 1 + sum(len(prefix) for prefix, _body in pairs)


def brute_force_elk_sat(phi: ElkFormula, max_worlds: int = None,
                        max_domain: int = 3) -> OracleResult:
    """Exhaustive bounded search for a pointed model of phi.

    Deterministic order: world count ascending, then candidate truth
    vectors over the distinct (prefix, body) axioms (true-first), then
    relation partitions, then per-world profiles (least interpretation
    first).  The point is world 0.
    """
    pairs, skeleton = elk_abstraction(phi)
    if max_worlds is None:
        max_worlds = default_world_bound(phi)
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")

    sig = signature(phi)
    space = InterpSpace.get(sig, max_domain)
    axioms: List = []
    for _prefix, body in pairs:
        for ax in _axioms_of_body(body):
            if ax not in axioms:
                axioms.append(ax)
    profiles = _realizable_profiles(space, axioms)

    bodies: List[ElFormula] = []
    body_index: Dict[ElFormula, int] = {}
    for _prefix, body in pairs:
        if body not in body_index:
            body_index[body] = len(bodies)
            bodies.append(body)

    # collapse axiom profiles to body profiles, keeping the least witness
    body_profiles: Dict[int, int] = {}
    for bits, least in profiles:
        truth = {ax: bool((bits >> i) & 1) for i, ax in enumerate(axioms)}
        bp = 0
        for j, body in enumerate(bodies):
            if _eval_body(body, truth):
                bp |= 1 << j
        if bp not in body_profiles or least < body_profiles[bp]:
            body_profiles[bp] = least
    bp_list = sorted(body_profiles.items(), key=lambda item: item[1])

    agents = tuple(sig.agents)
    agent_index = {a: i for i, a in enumerate(agents)}

    candidates = []
    for values in satisfying_assignments(skeleton, len(pairs)):
        true_pairs = [pairs[i] for i, v in enumerate(values) if v]
        false_pairs = [pairs[i] for i, v in enumerate(values) if not v]
        t, f = len(true_pairs), len(false_pairs)
        true_bodybits = [1 << body_index[body] for _p, body in true_pairs]
        false_bodybits = [1 << body_index[body] for _p, body in false_pairs]
        table = bytearray(1 << (t + f))
        for o in range(1 << t):
            req_true = 0
            for i in range(t):
                if (o >> i) & 1:
                    req_true |= true_bodybits[i]
            for nmask in range(1 << f):
                req_false = 0
                for j in range(f):
                    if (nmask >> j) & 1:
                        req_false |= false_bodybits[j]
                ok = any(bp & req_true == req_true and bp & req_false == 0
                         for bp, _least in bp_list)
                table[(o << f) | nmask] = 1 if ok else 0
        # world 0 lies on every reach set (reflexivity), so it must jointly
        # satisfy all true bodies; prune vectors that cannot seat it
        if not table[((1 << t) - 1) << f]:
            continue
        prefixes_true = tuple(tuple(agent_index[a] for a in p) for p, _b in true_pairs)
        prefixes_false = tuple(tuple(agent_index[a] for a in p) for p, _b in false_pairs)
        candidates.append((values, true_pairs, false_pairs,
                           prefixes_true, prefixes_false, bytes(table), f))

    for w in range(1, max_worlds + 1):
        for values, true_pairs, false_pairs, pre_t, pre_f, table, f in candidates:
            found = kernels.search_kripke(w, len(agents), pre_t, pre_f, table, f)
            if found is None:
                continue
            labels_per_agent, obligations, covering = found
            model = _decode_structure(space, bp_list, body_index, agents,
                                      labels_per_agent, obligations, covering,
                                      true_pairs, false_pairs, w)
            if not check_elk(model, phi):
                raise RuntimeError("oracle produced a structure that fails "
                                   "its own model check")
            return OracleResult(SAT, model, max_worlds, max_domain)
    return OracleResult(NO_MODEL_WITHIN_BOUNDS, None, max_worlds, max_domain)


def _axioms_of_body(body: ElFormula) -> list:
    return axioms_of_formula(body)


def _decode_structure(space, bp_list, body_index, agents, labels_per_agent,
                      obligations, covering, true_pairs, false_pairs, w):
    falsify = [0] * w
    for j, (_p, body) in enumerate(false_pairs):
        falsify[covering[j]] |= 1 << body_index[body]
    worlds = []
    for x in range(w):
        req_true = 0
        for i, (_p, body) in enumerate(true_pairs):
            if (obligations[x] >> i) & 1:
                req_true |= 1 << body_index[body]
        req_false = falsify[x]
        for bp, least in bp_list:
            if bp & req_true == req_true and bp & req_false == 0:
                worlds.append(space.decode(least))
                break
        else:  # pragma: no cover - search_kripke guarantees feasibility
            raise RuntimeError("infeasible world in decoded structure")
    relations = {}
    for agent, labels in zip(agents, labels_per_agent):
        relations[agent] = frozenset((i, j) for i in range(w) for j in range(w)
                                     if labels[i] == labels[j])
    structure = ElkInterpretation(worlds=tuple(worlds), relations=relations)
    return PointedElk(structure, 0)

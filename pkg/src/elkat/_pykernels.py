"""Pure-Python implementations of the two hot kernels.

``elkat._speedups`` (Cython) mirrors these functions exactly: same
enumeration orders, same results, same first-found witnesses.  Selection
happens in :mod:`elkat.kernels`.

Kernel 1 evaluates one EL axiom over every interpretation of a finite
signature with domain size ``d`` (bitmask output, little-endian bit order
over the canonical interpretation index).

Kernel 2 searches pointed S5 structures of ``w`` worlds: world profiles are
abstracted into a feasibility table, per-agent relations range over set
partitions (the first agent canonically, up to relabeling of the non-point
worlds), and the point is world 0.
"""

from __future__ import annotations

BACKEND = "python"

# axiom program opcodes (shared with the compiled kernel)
OP_TOP = 0
OP_CONCEPT = 2      # operand: concept index
OP_AND = 3
OP_EXISTS = 4       # operand: role index
OP_INCLUSION = 10
OP_CASSERT = 11     # operands: individual index (concept ext on stack)
OP_RASSERT = 12     # operands: role index, subject index, target index


def interp_counts(n_concepts: int, n_roles: int, n_individuals: int, d: int):
    n_conc = 1 << (n_concepts * d)
    n_role = 1 << (n_roles * d * d)
    n_ind = d ** n_individuals
    return n_conc, n_role, n_ind


def _eval_concept_program(program, pos, conc_masks, role_masks, d, full):
    """Evaluate the concept part of a program; returns (extension, next pos)."""
    stack = []
    while True:
        op = program[pos]
        if op == OP_TOP:
            stack.append(full)
            pos += 1
        elif op == OP_CONCEPT:
            stack.append(conc_masks[program[pos + 1]])
            pos += 2
        elif op == OP_AND:
            b = stack.pop()
            stack[-1] &= b
            pos += 1
        elif op == OP_EXISTS:
            role_mask = role_masks[program[pos + 1]]
            filler = stack.pop()
            ext = 0
            for x in range(d):
                if (role_mask >> (x * d)) & filler:
                    ext |= 1 << x
            stack.append(ext)
            pos += 2
        else:
            break
    return stack, pos


def axiom_bits(n_concepts: int, n_roles: int, n_individuals: int, d: int,
               program) -> bytes:
    """Truth bitmask of one axiom over all interpretations of domain size d.

    Interpretation index = (concept_combo * n_role + role_combo) * n_ind +
    ind_combo, each combo in lexicographic map order (first name most
    significant).
    """
    full = (1 << d) - 1
    n_conc, n_role, n_ind = interp_counts(n_concepts, n_roles, n_individuals, d)
    total = n_conc * n_role * n_ind
    out = bytearray((total + 7) // 8)

    conc_shifts = [d * (n_concepts - 1 - i) for i in range(n_concepts)]
    role_shifts = [d * d * (n_roles - 1 - i) for i in range(n_roles)]
    ind_divs = [d ** (n_individuals - 1 - i) for i in range(n_individuals)]

    ind_vals_table = []
    for ind_combo in range(n_ind):
        ind_vals_table.append(tuple((ind_combo // div) % d for div in ind_divs))

    kind = None
    for combo_base in range(n_conc * n_role):
        conc_combo, role_combo = divmod(combo_base, n_role)
        conc_masks = [(conc_combo >> s) & full for s in conc_shifts]
        role_masks = [(role_combo >> s) & ((1 << (d * d)) - 1) for s in role_shifts]
        stack, pos = _eval_concept_program(program, 0, conc_masks, role_masks, d, full)
        kind = program[pos]
        base = combo_base * n_ind
        if kind == OP_INCLUSION:
            rhs = stack.pop()
            lhs = stack.pop()
            if lhs & ~rhs & full == 0:
                for i in range(base, base + n_ind):
                    out[i >> 3] |= 1 << (i & 7)
        elif kind == OP_CASSERT:
            ext = stack.pop()
            which = program[pos + 1]
            for ind_combo in range(n_ind):
                if (ext >> ind_vals_table[ind_combo][which]) & 1:
                    i = base + ind_combo
                    out[i >> 3] |= 1 << (i & 7)
        elif kind == OP_RASSERT:
            role_mask = role_masks[program[pos + 1]]
            subj = program[pos + 2]
            targ = program[pos + 3]
            for ind_combo in range(n_ind):
                vals = ind_vals_table[ind_combo]
                if (role_mask >> (vals[subj] * d + vals[targ])) & 1:
                    i = base + ind_combo
                    out[i >> 3] |= 1 << (i & 7)
        else:
            raise ValueError("bad axiom program")
    return bytes(out)


# ---------------------------------------------------------------------------
# Partition enumeration
# ---------------------------------------------------------------------------

_ALL_PARTITIONS_CACHE: dict = {}
_CANONICAL_CACHE: dict = {}
_BLOCKMASK_CACHE: dict = {}


def all_partitions(w: int):
    """All set partitions of range(w) as restricted-growth label tuples,
    in lexicographic label order."""
    if w in _ALL_PARTITIONS_CACHE:
        return _ALL_PARTITIONS_CACHE[w]
    results = []

    def grow(labels, maxlab):
        if len(labels) == w:
            results.append(tuple(labels))
            return
        for lab in range(maxlab + 2):
            labels.append(lab)
            grow(labels, max(maxlab, lab))
            labels.pop()

    grow([0], 0)
    _ALL_PARTITIONS_CACHE[w] = results
    return results


def _integer_partitions(n: int):
    """Non-increasing integer partitions of n, largest-first order."""
    if n == 0:
        return [()]
    out = []

    def rec(remaining, maximum, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for part in range(min(remaining, maximum), 0, -1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(n, n, [])
    return out


def canonical_point_partitions(w: int):
    """One representative per orbit of partitions of range(w) under
    permutations fixing 0: block of 0 takes the first k labels, remaining
    worlds fill blocks of non-increasing sizes."""
    if w in _CANONICAL_CACHE:
        return _CANONICAL_CACHE[w]
    results = []
    for k in range(1, w + 1):
        for sizes in _integer_partitions(w - k):
            labels = [0] * k
            for block, size in enumerate(sizes, start=1):
                labels.extend([block] * size)
            results.append(tuple(labels))
    _CANONICAL_CACHE[w] = results
    return results


def block_masks(labels):
    """block_masks(labels)[x] = bitmask of worlds sharing x's label."""
    if labels in _BLOCKMASK_CACHE:
        return _BLOCKMASK_CACHE[labels]
    w = len(labels)
    by_label: dict = {}
    for x, lab in enumerate(labels):
        by_label[lab] = by_label.get(lab, 0) | (1 << x)
    masks = tuple(by_label[labels[x]] for x in range(w))
    _BLOCKMASK_CACHE[labels] = masks
    return masks


# ---------------------------------------------------------------------------
# Kernel 2: structure search at fixed world count
# ---------------------------------------------------------------------------

def _reach_from_point(prefix, masks_per_agent):
    cur = 1
    for agent in prefix:
        masks = masks_per_agent[agent]
        nxt = 0
        m = cur
        while m:
            x = (m & -m).bit_length() - 1
            nxt |= masks[x]
            m &= m - 1
        cur = nxt
    return cur


def _try_structure(w, masks_per_agent, prefixes_true, prefixes_false,
                   feas_table, f_bits):
    obligations = [0] * w
    for i, prefix in enumerate(prefixes_true):
        reach = _reach_from_point(prefix, masks_per_agent)
        bit = 1 << i
        m = reach
        while m:
            x = (m & -m).bit_length() - 1
            obligations[x] |= bit
            m &= m - 1
    for x in range(w):
        if not feas_table[obligations[x] << f_bits]:
            return None
    candidates = []
    for j, prefix in enumerate(prefixes_false):
        reach = _reach_from_point(prefix, masks_per_agent)
        cand = []
        m = reach
        while m:
            x = (m & -m).bit_length() - 1
            if feas_table[(obligations[x] << f_bits) | (1 << j)]:
                cand.append(x)
            m &= m - 1
        if not cand:
            return None
        candidates.append(cand)

    n_false = len(prefixes_false)
    assignment = [0] * n_false
    fmask = [0] * w

    def assign(j: int) -> bool:
        if j == n_false:
            return True
        for x in candidates[j]:
            new_mask = fmask[x] | (1 << j)
            if feas_table[(obligations[x] << f_bits) | new_mask]:
                old = fmask[x]
                fmask[x] = new_mask
                assignment[j] = x
                if assign(j + 1):
                    return True
                fmask[x] = old
        return False

    if not assign(0):
        return None
    return obligations, tuple(assignment)


def search_kripke(w, n_agents, prefixes_true, prefixes_false, feas_table, f_bits):
    """First pointed structure of exactly w worlds realizing the given truth
    vector, or None.

    Returns (labels_per_agent, obligations, covering) where labels_per_agent
    is one partition label tuple per agent, obligations[x] is the bitmask of
    true axioms whose reach covers world x, and covering[j] is the world
    witnessing false axiom j.
    """
    if n_agents == 0:
        result = _try_structure(w, (), prefixes_true, prefixes_false,
                                feas_table, f_bits)
        if result is not None:
            obligations, covering = result
            return (), obligations, covering
        return None
    firsts = canonical_point_partitions(w)
    rest = all_partitions(w)

    def loop(agent_labels):
        if len(agent_labels) == n_agents:
            masks = tuple(block_masks(labels) for labels in agent_labels)
            result = _try_structure(w, masks, prefixes_true, prefixes_false,
                                    feas_table, f_bits)
            if result is None:
                return None
            obligations, covering = result
            return tuple(agent_labels), obligations, covering
        source = firsts if not agent_labels else rest
        for labels in source:
            found = loop(agent_labels + [labels])
            if found is not None:
                return found
        return None

    return loop([])

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the hot kernels in ``elkat._pykernels``.

Same enumeration orders, same results, same first-found witnesses; the
parity tests in tests/test_enumeration.py hold the two implementations
together.  Inputs outside the compiled limits (more than two agents, very
wide tables) fall back to the pure implementation.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

from elkat import _pykernels

BACKEND = "c"

OP_TOP = _pykernels.OP_TOP
OP_CONCEPT = _pykernels.OP_CONCEPT
OP_AND = _pykernels.OP_AND
OP_EXISTS = _pykernels.OP_EXISTS
OP_INCLUSION = _pykernels.OP_INCLUSION
OP_CASSERT = _pykernels.OP_CASSERT
OP_RASSERT = _pykernels.OP_RASSERT

DEF MAX_PROG = 128
DEF MAX_STACK = 64
DEF MAX_NAMES = 16
DEF MAX_WORLDS = 31
DEF MAX_PREFIXES = 64
DEF MAX_PREFIX_LEN = 32


def interp_counts(n_concepts, n_roles, n_individuals, d):
    return _pykernels.interp_counts(n_concepts, n_roles, n_individuals, d)


def all_partitions(w):
    return _pykernels.all_partitions(w)


def canonical_point_partitions(w):
    return _pykernels.canonical_point_partitions(w)


def block_masks(labels):
    return _pykernels.block_masks(labels)


def axiom_bits(int n_concepts, int n_roles, int n_individuals, int d, program):
    """Truth bitmask of one axiom over all interpretations of domain size d."""
    if len(program) > MAX_PROG or n_concepts > MAX_NAMES or n_roles > MAX_NAMES \
            or n_individuals > MAX_NAMES or d > 5:
        return _pykernels.axiom_bits(n_concepts, n_roles, n_individuals, d, program)

    cdef int prog[MAX_PROG]
    cdef int prog_len = len(program)
    cdef int i
    for i in range(prog_len):
        prog[i] = program[i]

    cdef unsigned long long full = (1ULL << d) - 1
    cdef unsigned long long role_full = (1ULL << (d * d)) - 1
    cdef long long n_conc = 1LL << (n_concepts * d)
    cdef long long n_role = 1LL << (n_roles * d * d)
    cdef long long n_ind = 1
    for i in range(n_individuals):
        n_ind *= d
    cdef long long total = n_conc * n_role * n_ind

    out = bytearray((total + 7) // 8)
    cdef unsigned char[::1] view = out

    cdef int conc_shift[MAX_NAMES]
    cdef int role_shift[MAX_NAMES]
    for i in range(n_concepts):
        conc_shift[i] = d * (n_concepts - 1 - i)
    for i in range(n_roles):
        role_shift[i] = d * d * (n_roles - 1 - i)

    # individual value table: ind_vals[combo * n_individuals + which]
    cdef int *ind_vals = <int *> malloc(max(n_ind, 1) * max(n_individuals, 1)
                                        * sizeof(int))
    if ind_vals == NULL:
        raise MemoryError()
    cdef long long combo
    cdef long long div
    cdef int which
    for combo in range(n_ind):
        div = 1
        for which in range(n_individuals - 1, -1, -1):
            ind_vals[combo * n_individuals + which] = <int> ((combo // div) % d)
            div *= d

    cdef unsigned long long conc_masks[MAX_NAMES]
    cdef unsigned long long role_masks[MAX_NAMES]
    cdef unsigned long long stack[MAX_STACK]
    cdef int sp, pos, op, x
    cdef long long combo_base, conc_combo, role_combo, base, idx, ind_combo
    cdef unsigned long long lhs, rhs, ext, rmask

    try:
        for combo_base in range(n_conc * n_role):
            conc_combo = combo_base // n_role
            role_combo = combo_base - conc_combo * n_role
            for i in range(n_concepts):
                conc_masks[i] = (conc_combo >> conc_shift[i]) & full
            for i in range(n_roles):
                role_masks[i] = (role_combo >> role_shift[i]) & role_full
            sp = 0
            pos = 0
            while True:
                op = prog[pos]
                if op == 0:      # OP_TOP
                    stack[sp] = full
                    sp += 1
                    pos += 1
                elif op == 2:    # OP_CONCEPT
                    stack[sp] = conc_masks[prog[pos + 1]]
                    sp += 1
                    pos += 2
                elif op == 3:    # OP_AND
                    sp -= 1
                    stack[sp - 1] &= stack[sp]
                    pos += 1
                elif op == 4:    # OP_EXISTS
                    rmask = role_masks[prog[pos + 1]]
                    ext = 0
                    for x in range(d):
                        if (rmask >> (x * d)) & stack[sp - 1]:
                            ext |= 1ULL << x
                    stack[sp - 1] = ext
                    pos += 2
                else:
                    break
            base = combo_base * n_ind
            if op == 10:         # OP_INCLUSION
                rhs = stack[sp - 1]
                lhs = stack[sp - 2]
                if (lhs & ~rhs & full) == 0:
                    for idx in range(base, base + n_ind):
                        view[idx >> 3] |= 1 << (idx & 7)
            elif op == 11:       # OP_CASSERT
                ext = stack[sp - 1]
                which = prog[pos + 1]
                for ind_combo in range(n_ind):
                    if (ext >> ind_vals[ind_combo * n_individuals + which]) & 1:
                        idx = base + ind_combo
                        view[idx >> 3] |= 1 << (idx & 7)
            elif op == 12:       # OP_RASSERT
                rmask = role_masks[prog[pos + 1]]
                for ind_combo in range(n_ind):
                    x = ind_vals[ind_combo * n_individuals + prog[pos + 2]] * d \
                        + ind_vals[ind_combo * n_individuals + prog[pos + 3]]
                    if (rmask >> x) & 1:
                        idx = base + ind_combo
                        view[idx >> 3] |= 1 << (idx & 7)
            else:
                raise ValueError("bad axiom program")
    finally:
        free(ind_vals)
    return bytes(out)


def search_kripke(int w, int n_agents, prefixes_true, prefixes_false,
                  feas_table, int f_bits):
    """First structure of exactly w worlds realizing the truth vector."""
    cdef int n_true = len(prefixes_true)
    cdef int n_false = len(prefixes_false)
    if n_agents > 2 or w > MAX_WORLDS or n_true + n_false > MAX_PREFIXES \
            or n_true > 30 or n_false > 16:
        return _pykernels.search_kripke(w, n_agents, prefixes_true,
                                        prefixes_false, feas_table, f_bits)
    if n_agents == 0:
        return _pykernels.search_kripke(w, n_agents, prefixes_true,
                                        prefixes_false, feas_table, f_bits)

    cdef const unsigned char[::1] table = bytes(feas_table)

    # flatten prefixes
    cdef int pre_t[MAX_PREFIXES][MAX_PREFIX_LEN]
    cdef int len_t[MAX_PREFIXES]
    cdef int pre_f[MAX_PREFIXES][MAX_PREFIX_LEN]
    cdef int len_f[MAX_PREFIXES]
    cdef int i, j
    for i in range(n_true):
        seq = prefixes_true[i]
        if len(seq) > MAX_PREFIX_LEN:
            return _pykernels.search_kripke(w, n_agents, prefixes_true,
                                            prefixes_false, feas_table, f_bits)
        len_t[i] = len(seq)
        for j in range(len(seq)):
            pre_t[i][j] = seq[j]
    for i in range(n_false):
        seq = prefixes_false[i]
        if len(seq) > MAX_PREFIX_LEN:
            return _pykernels.search_kripke(w, n_agents, prefixes_true,
                                            prefixes_false, feas_table, f_bits)
        len_f[i] = len(seq)
        for j in range(len(seq)):
            pre_f[i][j] = seq[j]

    firsts = _pykernels.canonical_point_partitions(w)
    rest = _pykernels.all_partitions(w) if n_agents == 2 else [()]

    # flatten partitions into label arrays and per-partition block masks
    cdef int n_first = len(firsts)
    cdef int n_rest = len(rest)
    cdef unsigned int *masks_first = <unsigned int *> malloc(
        n_first * w * sizeof(unsigned int))
    cdef unsigned int *masks_rest = <unsigned int *> malloc(
        max(n_rest, 1) * w * sizeof(unsigned int))
    if masks_first == NULL or masks_rest == NULL:
        if masks_first != NULL:
            free(masks_first)
        if masks_rest != NULL:
            free(masks_rest)
        raise MemoryError()

    cdef int p, x, y
    for p in range(n_first):
        labels = firsts[p]
        for x in range(w):
            masks_first[p * w + x] = 0
            for y in range(w):
                if labels[y] == labels[x]:
                    masks_first[p * w + x] |= 1u << y
    if n_agents == 2:
        for p in range(n_rest):
            labels = rest[p]
            for x in range(w):
                masks_rest[p * w + x] = 0
                for y in range(w):
                    if labels[y] == labels[x]:
                        masks_rest[p * w + x] |= 1u << y

    cdef unsigned int agent_masks[2][MAX_WORLDS]
    cdef int obligations[MAX_WORLDS]
    cdef int fmask[MAX_WORLDS]
    cdef int cover[MAX_PREFIXES]
    cdef int cand[MAX_PREFIXES][MAX_WORLDS]
    cdef int n_cand[MAX_PREFIXES]
    cdef unsigned int cur, nxt
    cdef int p1, p2, step, agent, depth, found_flag
    cdef int ci
    cdef bint ok, advanced

    try:
        for p1 in range(n_first):
            for x in range(w):
                agent_masks[0][x] = masks_first[p1 * w + x]
            for p2 in range(n_rest):
                if n_agents == 2:
                    for x in range(w):
                        agent_masks[1][x] = masks_rest[p2 * w + x]
                # obligations
                for x in range(w):
                    obligations[x] = 0
                ok = True
                for i in range(n_true):
                    cur = 1
                    for step in range(len_t[i]):
                        agent = pre_t[i][step]
                        nxt = 0
                        for x in range(w):
                            if cur & (1u << x):
                                nxt |= agent_masks[agent][x]
                        cur = nxt
                    for x in range(w):
                        if cur & (1u << x):
                            obligations[x] |= 1 << i
                for x in range(w):
                    if not table[obligations[x] << f_bits]:
                        ok = False
                        break
                if not ok:
                    continue
                # candidate witnesses per false axiom
                for i in range(n_false):
                    cur = 1
                    for step in range(len_f[i]):
                        agent = pre_f[i][step]
                        nxt = 0
                        for x in range(w):
                            if cur & (1u << x):
                                nxt |= agent_masks[agent][x]
                        cur = nxt
                    n_cand[i] = 0
                    for x in range(w):
                        if cur & (1u << x):
                            if table[(obligations[x] << f_bits) | (1 << i)]:
                                cand[i][n_cand[i]] = x
                                n_cand[i] += 1
                    if n_cand[i] == 0:
                        ok = False
                        break
                if not ok:
                    continue
                # covering DFS, iterative
                for x in range(w):
                    fmask[x] = 0
                depth = 0
                for i in range(n_false):
                    cover[i] = -1
                found_flag = 1 if n_false == 0 else 0
                while not found_flag:
                    if cover[depth] >= 0:
                        fmask[cand[depth][cover[depth]]] &= ~(1 << depth)
                    advanced = False
                    ci = cover[depth] + 1
                    while ci < n_cand[depth]:
                        x = cand[depth][ci]
                        if table[(obligations[x] << f_bits)
                                 | fmask[x] | (1 << depth)]:
                            cover[depth] = ci
                            fmask[x] |= 1 << depth
                            advanced = True
                            break
                        ci += 1
                    if advanced:
                        if depth == n_false - 1:
                            found_flag = 1
                        else:
                            depth += 1
                            cover[depth] = -1
                    else:
                        cover[depth] = -1
                        depth -= 1
                        if depth < 0:
                            break
                if found_flag:
                    labels1 = firsts[p1]
                    if n_agents == 2:
                        agent_labels = (labels1, rest[p2])
                    else:
                        agent_labels = (labels1,)
                    return (agent_labels,
                            [obligations[x] for x in range(w)],
                            tuple(cand[i][cover[i]] for i in range(n_false))
                            if n_false else ())
    finally:
        free(masks_first)
        free(masks_rest)
    return None

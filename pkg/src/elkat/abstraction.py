"""Skeleton abstractions shared by the SAT procedures and the brute-force
oracle: formulas reduced to boolean trees over variable indices."""

from __future__ import annotations

from .syntax import ElkFormula, KAnd, KAxiom, KNot


def eval_skeleton(node, assignment):
    """Three-valued evaluation of ("var" i) / ("not" s) / ("and" s s) trees;
    ``assignment`` maps variable index -> bool, None means undetermined."""
    if node[0] == "var":
        return assignment.get(node[1])
    if node[0] == "not":
        inner = eval_skeleton(node[1], assignment)
        return None if inner is None else not inner
    left = eval_skeleton(node[1], assignment)
    if left is False:
        return False
    right = eval_skeleton(node[2], assignment)
    if right is False:
        return False
    if left is True and right is True:
        return True
    return None


def satisfying_assignments(skeleton, n_vars: int):
    """All total satisfying assignments, depth-first in variable order with
    the true branch explored first; yields tuples of bools."""
    assignment: dict = {}

    def search(i: int):
        status = eval_skeleton(skeleton, assignment)
        if status is False:
            return
        if i == n_vars:
            if status is True:
                yield tuple(assignment[j] for j in range(n_vars))
            return
        for value in (True, False):
            assignment[i] = value
            yield from search(i + 1)
            del assignment[i]

    yield from search(0)


def elk_abstraction(phi: ElkFormula, word_map=None):
    """Abstract an ELK formula over its distinct (prefix, body) axioms.

    Returns (pairs, skeleton): ``pairs`` is the tuple of distinct
    (prefix, body) pairs in first-occurrence order (prefixes passed through
    ``word_map`` when given, e.g. to flatten them), ``skeleton`` the boolean
    tree over their indices.
    """
    pairs: dict = {}

    def build(g: ElkFormula):
        if isinstance(g, KAxiom):
            prefix = word_map(g.prefix) if word_map is not None else g.prefix
            key = (prefix, g.body)
            if key not in pairs:
                pairs[key] = len(pairs)
            return ("var", pairs[key])
        if isinstance(g, KNot):
            return ("not", build(g.body))
        if isinstance(g, KAnd):
            return ("and", build(g.left), build(g.right))
        raise TypeError(repr(g))

    skeleton = build(phi)
    return tuple(pairs), skeleton

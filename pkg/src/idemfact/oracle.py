"""Brute-force cross-checks on small algebras.

Nothing here touches the factorization pipeline or the elimination code:
endomorphisms are compared through their full action tables (the image of
every element of the universe), ranks are read off image sizes and spans
are enumerated coefficient by coefficient.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass

from .algebra import SET, VEC, Algebra, Endomorphism
from .errors import BudgetExceededError
from .instances import enumerate_endomorphisms


@dataclass(frozen=True)
class OracleBudget:
    max_universe: int = 1 << 12
    max_endos: int = 1 << 24
    max_bfs_states: int = 1 << 22

    def __post_init__(self):
        if min(self.max_universe, self.max_endos, self.max_bfs_states) <= 0:
            raise ValueError("budget limits must be positive")


DEFAULT_BUDGET = OracleBudget()


class Reach(enum.Enum):
    REACHABLE = "reachable"
    UNREACHABLE = "unreachable"
    INDETERMINATE = "indeterminate"


def _table(a: Endomorphism) -> tuple:
    return tuple(a(x) for x in range(a.algebra.size))


def _table_rank(alg: Algebra, table) -> int:
    size = len(set(table))
    if alg.kind == SET:
        return size
    r = 0
    while alg.p**r < size:
        r += 1
    return r


def _check_universe(alg, budget):
    if alg.size > budget.max_universe:
        raise BudgetExceededError(f"{alg} has {alg.size} elements, budget is {budget.max_universe}")


def span_enumeration_check(alg: Algebra, S, budget: OracleBudget = DEFAULT_BUDGET) -> tuple:
    """Every element of <S>, ascending, by summing all coefficient choices."""
    if alg.kind != VEC:
        raise ValueError("span enumeration applies to vector spaces only")
    _check_universe(alg, budget)
    vecs = [alg.decode(s) for s in S]
    span = set()
    for coeffs in itertools.product(range(alg.p), repeat=len(vecs)):
        acc = [0] * alg.d
        for c, v in zip(coeffs, vecs):
            for j in range(alg.d):
                acc[j] += c * v[j]
        span.add(alg.encode([x % alg.p for x in acc]))
    return tuple(sorted(span))


def _independent(alg, S, budget):
    S = tuple(S)
    if len(set(S)) != len(S):
        return False
    if alg.kind == SET:
        return True
    return len(span_enumeration_check(alg, S, budget)) == alg.p ** len(S)


def enumerate_idempotents(alg: Algebra, r: int, budget: OracleBudget = DEFAULT_BUDGET) -> list:
    """All idempotents of rank exactly ``r``, in enumeration order."""
    _check_universe(alg, budget)
    out = []
    for a in enumerate_endomorphisms(alg, cap=budget.max_endos):
        t = _table(a)
        if all(t[y] == y for y in t) and _table_rank(alg, t) == r:
            out.append(a)
    return out


def idempotent_generated(a: Endomorphism, budget: OracleBudget = DEFAULT_BUDGET) -> Reach:
    """Is ``a`` a product of idempotents of its own rank?

    Breadth-first search over the distinct products, seeded with every
    rank-``l`` idempotent and extended on the right by each of them.  Full
    rank input is reported unreachable: only singular idempotents are
    allowed as factors.
    """
    alg = a.algebra
    try:
        _check_universe(alg, budget)
        target = _table(a)
        l = _table_rank(alg, target)
        if l == alg.rank:
            return Reach.UNREACHABLE
        gens = [_table(e) for e in enumerate_idempotents(alg, l, budget)]
    except BudgetExceededError:
        return Reach.INDETERMINATE

    seen = set()
    queue = deque()
    for g in gens:
        if g not in seen:
            seen.add(g)
            queue.append(g)
    while queue:
        t = queue.popleft()
        if t == target:
            return Reach.REACHABLE
        for g in gens:
            s = tuple(g[y] for y in t)
            if s not in seen:
                if len(seen) >= budget.max_bfs_states:
                    return Reach.INDETERMINATE
                seen.add(s)
                queue.append(s)
    return Reach.UNREACHABLE


def independent_sets(alg: Algebra, l: int, budget: OracleBudget = DEFAULT_BUDGET) -> list:
    """Every independent ``l``-subset of the universe, as sorted tuples."""
    _check_universe(alg, budget)
    return [S for S in itertools.combinations(range(alg.size), l) if _independent(alg, S, budget)]


def shortest_chain_length(alg: Algebra, E, Ea, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Fewest single-element exchanges leading from E to Ea through independent sets."""
    _check_universe(alg, budget)
    start, goal = frozenset(E), frozenset(Ea)
    if len(start) != len(goal) or not _independent(alg, E, budget) or not _independent(alg, Ea, budget):
        raise ValueError("endpoints must be independent sets of equal size")
    dist = {start: 0}
    queue = deque([start])
    while queue:
        B = queue.popleft()
        if B == goal:
            return dist[B]
        for out in sorted(B):
            rest = B - {out}
            for u in range(alg.size):
                if u in B:
                    continue
                C = rest | {u}
                if C in dist or not _independent(alg, C, budget):
                    continue
                if len(dist) >= budget.max_bfs_states:
                    raise BudgetExceededError("chain search exceeded its state budget")
                dist[C] = dist[B] + 1
                queue.append(C)
    raise ValueError(f"{sorted(goal)} is unreachable from {sorted(start)}")

"""Text codec, singularity test and enumeration for the two shipped algebras.

Text format
-----------
Finite set of size n: the image list ``"i0 i1 ... i(n-1)"``.
Vector space: rows separated by ``;``, residues by whitespace, e.g.
``"0 1; 0 0"``.  Row ``i`` is the image of the ``i``-th unit vector.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator

from .algebra import SET, Algebra, Endomorphism, rank_endo
from .errors import BudgetExceededError, MalformedInputError

ENUMERATION_CAP = 1 << 24


def _parse_ints(tokens, bound, offset=0):
    out = []
    for i, tok in enumerate(tokens):
        try:
            v = int(tok)
        except ValueError:
            raise MalformedInputError(f"{tok!r} is not an integer", offset + i) from None
        if not 0 <= v < bound:
            raise MalformedInputError(f"{v} is out of range 0..{bound - 1}", offset + i)
        out.append(v)
    return out


def parse_endo(alg: Algebra, text: str) -> Endomorphism:
    if alg.kind == SET:
        tokens = text.split()
        if len(tokens) != alg.n:
            raise MalformedInputError(f"expected {alg.n} images, got {len(tokens)}")
        return Endomorphism(alg, tuple(_parse_ints(tokens, alg.n)))

    rows = text.split(";")
    if len(rows) != alg.d:
        raise MalformedInputError(f"expected {alg.d} rows, got {len(rows)}")
    matrix = []
    for r, row in enumerate(rows):
        tokens = row.split()
        if len(tokens) != alg.d:
            raise MalformedInputError(f"row {r} has {len(tokens)} entries, expected {alg.d}", r * alg.d)
        matrix.append(tuple(_parse_ints(tokens, alg.p, r * alg.d)))
    return Endomorphism(alg, tuple(matrix))


def format_endo(a: Endomorphism) -> str:
    if a.algebra.kind == SET:
        return " ".join(map(str, a.action))
    return "; ".join(" ".join(map(str, row)) for row in a.action)


def is_singular(a: Endomorphism) -> bool:
    return rank_endo(a) < a.algebra.rank


def gl_order(p: int, d: int) -> int:
    return math.prod(p**d - p**i for i in range(d))


def count_endomorphisms(alg: Algebra) -> int:
    if alg.kind == SET:
        return alg.n**alg.n
    return alg.p ** (alg.d * alg.d)


def count_singular(alg: Algebra) -> int:
    if alg.kind == SET:
        return alg.n**alg.n - math.factorial(alg.n)
    return alg.p ** (alg.d * alg.d) - gl_order(alg.p, alg.d)


def enumerate_endomorphisms(
    alg: Algebra, singular_only: bool = False, cap: int = ENUMERATION_CAP
) -> Iterator[Endomorphism]:
    """Stream every endomorphism once, in lexicographic order of the action."""
    total = count_endomorphisms(alg)
    if total > cap:
        raise BudgetExceededError(f"{alg} has {total} endomorphisms, cap is {cap}")
    if alg.kind == SET:
        tables = itertools.product(range(alg.n), repeat=alg.n)
        maps = (Endomorphism(alg, t) for t in tables)
    else:
        d = alg.d
        entries = itertools.product(range(alg.p), repeat=d * d)
        maps = (Endomorphism(alg, tuple(e[i * d:(i + 1) * d] for i in range(d))) for e in entries)
    for a in maps:
        if not singular_only or is_singular(a):
            yield a

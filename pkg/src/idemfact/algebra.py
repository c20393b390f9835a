"""Independence-algebra core: closure, independence, rank, and endomorphisms.

Two concrete algebras are supported:

* ``Algebra.finite_set(n)``: the set ``{0, ..., n-1}`` with no operations.
  Closure is the identity on subsets, every subset is independent.
* ``Algebra.vector_space(p, d)``: ``GF(p)^d``.  Elements are integer codes,
  the base-``p`` positional encoding of the coordinate tuple with the first
  coordinate most significant, so ``(0, 1) -> 1``, ``(1, 0) -> p``.

Maps act on the right: ``x * (a * b) == (x * a) * b``.  A vector-space
endomorphism is stored as a ``d x d`` matrix whose row ``i`` is the image of
the ``i``-th unit vector, so composing factors left-to-right is the ordinary
matrix product in the same order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    AlgebraError,
    AlgebraMismatchError,
    DomainError,
    InvalidElementError,
    PreconditionError,
)

SET = "set"
VEC = "vec"

DEFAULT_UNIVERSE_CAP = 1 << 20
MAX_PRIME = 251

ElementSet = tuple  # tuple[int, ...], duplicate free


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class Algebra:
    kind: str
    n: int = 0
    p: int = 0
    d: int = 0
    cap: int = field(default=DEFAULT_UNIVERSE_CAP, compare=False, repr=False)

    def __post_init__(self):
        if self.kind == SET:
            if self.n < 2:
                raise AlgebraError(f"finite set needs n >= 2, got {self.n}")
        elif self.kind == VEC:
            if self.d < 2:
                raise AlgebraError(f"vector space needs dimension >= 2, got {self.d}")
            if not _is_prime(self.p) or self.p > MAX_PRIME:
                raise AlgebraError(f"modulus must be a prime <= {MAX_PRIME}, got {self.p}")
        else:
            raise AlgebraError(f"unknown algebra kind {self.kind!r}")
        if self.size > self.cap:
            raise AlgebraError(f"universe of {self.size} elements exceeds cap {self.cap}")

    @classmethod
    def finite_set(cls, n: int, cap: int = DEFAULT_UNIVERSE_CAP) -> "Algebra":
        return cls(SET, n=n, cap=cap)

    @classmethod
    def vector_space(cls, p: int, d: int, cap: int = DEFAULT_UNIVERSE_CAP) -> "Algebra":
        return cls(VEC, p=p, d=d, cap=cap)

    @property
    def is_vector(self) -> bool:
        return self.kind == VEC

    @property
    def size(self) -> int:
        return self.p**self.d if self.kind == VEC else self.n

    @property
    def rank(self) -> int:
        return self.d if self.kind == VEC else self.n

    @cached_property
    def basis(self) -> ElementSet:
        """Canonical basis: all points, or the unit vectors e_0, ..., e_{d-1}."""
        if self.kind == SET:
            return tuple(range(self.n))
        return tuple(self.p ** (self.d - 1 - i) for i in range(self.d))

    def __str__(self):
        if self.kind == SET:
            return f"T({self.n})"
        return f"GF({self.p})^{self.d}"

    # coordinates

    def encode(self, vec: Sequence[int]) -> int:
        if len(vec) != self.d:
            raise InvalidElementError(f"expected {self.d} coordinates, got {len(vec)}")
        code = 0
        for c in vec:
            code = code * self.p + (c % self.p)
        return code

    def decode(self, code: int) -> tuple:
        self.check(code)
        out = [0] * self.d
        for i in range(self.d - 1, -1, -1):
            code, out[i] = divmod(code, self.p)
        return tuple(out)

    def check(self, *xs: int) -> None:
        for x in xs:
            if not isinstance(x, int) or not 0 <= x < self.size:
                raise InvalidElementError(f"{x!r} is not an element of {self}")


class _Echelon:
    """Row echelon form of a span over GF(p), remembering how rows were built.

    ``rows`` is sorted by pivot; every row is normalized to 1 at its pivot
    and zero left of it.  ``combos[i]`` expresses ``rows[i]`` as a
    combination ``{generator index: coefficient}`` of the vectors passed
    to :meth:`add`.
    """

    def __init__(self, p: int, d: int):
        self.p = p
        self.d = d
        self.pivots: list[int] = []
        self.rows: list[list[int]] = []
        self.combos: list[dict[int, int]] = []
        self.count = 0

    def reduce(self, vec):
        """Return ``(residual, combo)`` with ``vec = residual + sum(combo)``."""
        p = self.p
        v = list(vec)
        combo: dict[int, int] = {}
        for piv, row, rc in zip(self.pivots, self.rows, self.combos):
            coef = v[piv]
            if coef:
                for j in range(piv, self.d):
                    v[j] = (v[j] - coef * row[j]) % p
                for g, c in rc.items():
                    combo[g] = (combo.get(g, 0) + coef * c) % p
        return v, combo

    def add(self, vec) -> bool:
        """Append a generator; True iff it enlarged the span."""
        k = self.count
        self.count += 1
        v, combo = self.reduce(vec)
        piv = next((j for j, c in enumerate(v) if c), None)
        if piv is None:
            return False
        p = self.p
        inv = pow(v[piv], -1, p)
        row = [(c * inv) % p for c in v]
        # row = inv * (gen_k - combo)
        rc = {g: (-c * inv) % p for g, c in combo.items() if c}
        rc[k] = inv
        at = next((i for i, q in enumerate(self.pivots) if q > piv), len(self.pivots))
        self.pivots.insert(at, piv)
        self.rows.insert(at, row)
        self.combos.insert(at, rc)
        return True

    def contains(self, vec) -> bool:
        return not any(self.reduce(vec)[0])

    @property
    def rank(self) -> int:
        return len(self.rows)


def _echelon(alg: Algebra, S: Iterable[int]) -> _Echelon:
    ech = _Echelon(alg.p, alg.d)
    for s in S:
        ech.add(alg.decode(s))
    return ech


def in_closure(alg: Algebra, x: int, S: Iterable[int]) -> bool:
    """True iff ``x`` lies in the subalgebra generated by ``S``."""
    S = tuple(S)
    alg.check(x, *S)
    if alg.kind == SET:
        return x in S
    if x == 0:
        return True
    return _echelon(alg, S).contains(alg.decode(x))


def is_independent(alg: Algebra, S: Iterable[int]) -> bool:
    S = tuple(S)
    alg.check(*S)
    if len(set(S)) != len(S):
        return False
    if alg.kind == SET:
        return True
    ech = _Echelon(alg.p, alg.d)
    return all(ech.add(alg.decode(s)) for s in S)


def rank_set(alg: Algebra, S: Iterable[int]) -> int:
    S = tuple(S)
    alg.check(*S)
    if alg.kind == SET:
        return len(set(S))
    return _echelon(alg, S).rank


def same_closure(alg: Algebra, S: Iterable[int], T: Iterable[int]) -> bool:
    S, T = tuple(S), tuple(T)
    r = rank_set(alg, S)
    return r == rank_set(alg, T) == rank_set(alg, S + T)


def _scan_outside(alg: Algebra, S: ElementSet):
    """Yield, ascending, the elements outside the closure of S as S grows.

    The caller may extend ``S`` between steps by sending the new element
    back; used by both greedy basis extension and witness search.
    """
    if alg.kind == SET:
        inside = set(S)
        for x in range(alg.size):
            if x not in inside:
                if (yield x):
                    inside.add(x)
        return
    ech = _echelon(alg, S)
    for x in range(1, alg.size):
        v = alg.decode(x)
        if not ech.contains(v):
            if (yield x):
                ech.add(v)


def extend_to_basis(alg: Algebra, S: Iterable[int]) -> ElementSet:
    """Extend the independent set S to a basis, S first.

    Fill elements are picked greedily: the smallest element not yet in the
    closure of what has been chosen so far.
    """
    S = tuple(S)
    if not is_independent(alg, S):
        raise PreconditionError(f"cannot extend dependent set {S}")
    out = list(S)
    if len(out) == alg.rank:
        return tuple(out)
    scan = _scan_outside(alg, S)
    x = next(scan)
    while True:
        out.append(x)
        if len(out) == alg.rank:
            return tuple(out)
        x = scan.send(True)


def witness_outside(alg: Algebra, S: Iterable[int]):
    """Smallest element outside the closure of S, or None if S spans everything."""
    S = tuple(S)
    alg.check(*S)
    return next(_scan_outside(alg, S), None)


@dataclass(frozen=True)
class Endomorphism:
    """A total endomorphism.

    ``action`` is the image table (finite set) or the matrix as a tuple of
    row tuples (vector space).  Call it on an element code to apply it.
    """

    algebra: Algebra
    action: tuple

    def __post_init__(self):
        alg = self.algebra
        if alg.kind == SET:
            if len(self.action) != alg.n:
                raise InvalidElementError(f"image table needs {alg.n} entries")
            alg.check(*self.action)
        else:
            if len(self.action) != alg.d or any(len(r) != alg.d for r in self.action):
                raise InvalidElementError(f"matrix must be {alg.d}x{alg.d}")
            if any(not 0 <= c < alg.p for r in self.action for c in r):
                raise InvalidElementError(f"matrix entries must be residues mod {alg.p}")

    @classmethod
    def identity(cls, alg: Algebra) -> "Endomorphism":
        if alg.kind == SET:
            return cls(alg, tuple(range(alg.n)))
        return cls(alg, tuple(tuple(int(i == j) for j in range(alg.d)) for i in range(alg.d)))

    @classmethod
    def from_matrix(cls, alg: Algebra, rows) -> "Endomorphism":
        return cls(alg, tuple(tuple(c % alg.p for c in r) for r in rows))

    @classmethod
    def from_basis_images(cls, alg: Algebra, basis, images) -> "Endomorphism":
        """The unique endomorphism sending the basis ``basis`` to ``images``."""
        basis = tuple(basis)
        if len(basis) != alg.rank:
            raise PreconditionError(f"{basis} is not a basis of {alg}")
        pe = PartialEndomorphism(alg, basis, tuple(images))
        if alg.kind == SET:
            return cls(alg, tuple(pe(x) for x in range(alg.n)))
        return cls(alg, tuple(alg.decode(pe(b)) for b in alg.basis))

    def __call__(self, x: int) -> int:
        alg = self.algebra
        if alg.kind == SET:
            return self.action[x]
        v = alg.decode(x)
        p = alg.p
        out = [0] * alg.d
        for vi, row in zip(v, self.action):
            if vi:
                for j, r in enumerate(row):
                    out[j] += vi * r
        return alg.encode([c % p for c in out])

    def __matmul__(self, other: "Endomorphism") -> "Endomorphism":
        return compose(self, other)

    def images(self, S: Iterable[int]) -> ElementSet:
        return tuple(self(x) for x in S)


def compose(first: Endomorphism, second: Endomorphism) -> Endomorphism:
    """The map ``x -> (x * first) * second``."""
    alg = first.algebra
    if second.algebra != alg:
        raise AlgebraMismatchError(f"cannot compose maps of {alg} and {second.algebra}")
    if alg.kind == SET:
        t = second.action
        return Endomorphism(alg, tuple(t[i] for i in first.action))
    p, d = alg.p, alg.d
    B = second.action
    return Endomorphism(
        alg,
        tuple(
            tuple(sum(row[k] * B[k][j] for k in range(d)) % p for j in range(d))
            for row in first.action
        ),
    )


def is_idempotent(a: Endomorphism) -> bool:
    return compose(a, a) == a


def image_basis(a: Endomorphism) -> ElementSet:
    """Canonical basis of the image.

    Finite set: the image points, ascending.  Vector space: images of the
    unit vectors in row order, keeping each one outside the span of the
    rows kept before it.
    """
    alg = a.algebra
    if alg.kind == SET:
        return tuple(sorted(set(a.action)))
    ech = _Echelon(alg.p, alg.d)
    return tuple(alg.encode(row) for row in a.action if ech.add(row))


def rank_endo(a: Endomorphism) -> int:
    return len(image_basis(a))


@dataclass(frozen=True)
class PartialEndomorphism:
    """Homomorphism defined on the closure of an independent ``domain_basis``.

    ``images[i]`` is the image of ``domain_basis[i]``; every other element
    of the domain is mapped by structural extension.
    """

    algebra: Algebra
    domain_basis: ElementSet
    images: ElementSet

    def __post_init__(self):
        alg = self.algebra
        if len(self.domain_basis) != len(self.images):
            raise PreconditionError("domain basis and images differ in length")
        alg.check(*self.images)
        if not is_independent(alg, self.domain_basis):
            raise PreconditionError(f"domain basis {self.domain_basis} is dependent")

    @cached_property
    def _ech(self):
        return _echelon(self.algebra, self.domain_basis)

    def __call__(self, x: int) -> int:
        return apply_partial(self, x)

    def in_domain(self, x: int) -> bool:
        if self.algebra.kind == SET:
            return x in self.domain_basis
        return self._ech.contains(self.algebra.decode(x))

    @cached_property
    def image_basis(self) -> ElementSet:
        alg = self.algebra
        if alg.kind == SET:
            return tuple(sorted(set(self.images)))
        ech = _Echelon(alg.p, alg.d)
        return tuple(y for y in self.images if ech.add(alg.decode(y)))

    @property
    def rank(self) -> int:
        return len(self.image_basis)

    def is_idempotent(self) -> bool:
        """Image inside the domain and fixed pointwise."""
        return all(self.in_domain(y) and self(y) == y for y in self.image_basis)

    def as_dict(self) -> dict:
        return dict(zip(self.domain_basis, self.images))


def apply_partial(pe: PartialEndomorphism, x: int) -> int:
    alg = pe.algebra
    alg.check(x)
    if alg.kind == SET:
        try:
            return pe.images[pe.domain_basis.index(x)]
        except ValueError:
            raise DomainError(f"{x} is outside the domain {pe.domain_basis}") from None
    residual, combo = pe._ech.reduce(alg.decode(x))
    if any(residual):
        raise DomainError(f"{alg.decode(x)} is outside the span of the domain basis")
    p = alg.p
    out = [0] * alg.d
    for g, c in combo.items():
        for j, y in enumerate(alg.decode(pe.images[g])):
            out[j] += c * y
    return alg.encode([v % p for v in out])

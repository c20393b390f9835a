"""Factor a singular endomorphism into idempotents of the same rank.

Pipeline for ``a`` of rank ``l``:

1. ``initial_idempotent``: an idempotent ``e`` with ``e*a == a`` whose image
   is spanned by a set ``E`` on which ``a`` is injective.
2. ``basis_chain`` walks from ``E`` to ``Ea`` one element at a time, and
   ``exchange_idempotents`` turns each step into one or two partial
   idempotents carrying the current set to the next one.
3. The chain lands on ``Ea`` in the wrong order in general; the mismatch is
   a permutation of ``Ea``, split into transpositions, each of which is
   realized by three partial idempotents (``transposition_idempotents``).
4. Every partial idempotent is extended to a total one (``totalize``) and
   the list ``[e, ...]`` multiplies out to ``a``.

Every intermediate guarantee is re-checked as the pipeline runs and any
failure raises :class:`InvariantError` naming the stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebra import (
    SET,
    Algebra,
    ElementSet,
    Endomorphism,
    PartialEndomorphism,
    compose,
    extend_to_basis,
    image_basis,
    in_closure,
    is_idempotent,
    is_independent,
    rank_endo,
    same_closure,
    witness_outside,
    _Echelon,
)
from .errors import (
    AlgebraMismatchError,
    DegenerateRankError,
    InvariantError,
    NotSingularError,
    PreconditionError,
)

RETRACTION = "retraction"
CHAIN = "basis-chain"
EXCHANGE = "exchange"
PERMUTATION = "permutation"
TRANSPOSITION = "transposition-gadget"
TOTALIZE = "totalization"
ASSEMBLY = "assembly"


@dataclass(frozen=True)
class BasisChain:
    sets: tuple

    @property
    def steps(self) -> int:
        return len(self.sets) - 1


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``carrier``; ``images[i]`` is where ``carrier[i]`` goes."""

    carrier: ElementSet
    images: ElementSet

    def __post_init__(self):
        if len(self.carrier) != len(self.images) or set(self.carrier) != set(self.images):
            raise PreconditionError(f"not a permutation of {self.carrier}: {self.images}")
        if len(set(self.carrier)) != len(self.carrier):
            raise PreconditionError(f"carrier {self.carrier} has duplicates")

    @classmethod
    def from_dict(cls, mapping: dict) -> "Permutation":
        carrier = tuple(sorted(mapping))
        return cls(carrier, tuple(mapping[x] for x in carrier))

    def __call__(self, x):
        return self.images[self.carrier.index(x)]

    def is_identity(self) -> bool:
        return self.carrier == self.images


@dataclass(frozen=True)
class Checks:
    product_matches: bool
    all_idempotent: bool
    ranks_equal: bool
    factor_bound_ok: bool

    @property
    def ok(self) -> bool:
        return self.product_matches and self.all_idempotent and self.ranks_equal and self.factor_bound_ok

    def as_dict(self) -> dict:
        return {
            "product_matches": self.product_matches,
            "all_idempotent": self.all_idempotent,
            "ranks_equal": self.ranks_equal,
            "factor_bound_ok": self.factor_bound_ok,
        }


@dataclass(frozen=True)
class FactorizationReport:
    input: Endomorphism
    rank_l: int
    factors: tuple
    chain_length: int
    transposition_count: int
    checks: Checks
    chain: Optional[BasisChain] = None
    permutation: Optional[Permutation] = None
    partials: tuple = field(default=(), repr=False)


def _require(cond, stage, message):
    if not cond:
        raise InvariantError(stage, message)


def initial_idempotent(a: Endomorphism) -> tuple[Endomorphism, ElementSet]:
    """Return ``(e, E)``: an idempotent ``e`` with ``e*a == a`` and image ``<E>``.

    ``E`` is a transversal of ``a``: the smallest preimage of each image
    point (finite set), or the unit vectors whose rows are pivots of the
    matrix (vector space).  ``e`` fixes ``E`` and sends every other basis
    element ``b`` to the unique element of ``<E>`` with the same image.
    """
    alg = a.algebra
    l = rank_endo(a)
    if l == alg.rank:
        raise NotSingularError()
    if l == 0:
        raise DegenerateRankError("the zero map has no retraction of positive rank")

    if alg.kind == SET:
        first = {}
        for x, y in enumerate(a.action):
            first.setdefault(y, x)
        E = tuple(sorted(first.values()))
    else:
        ech = _Echelon(alg.p, alg.d)
        E = tuple(sorted(b for b, row in zip(alg.basis, a.action) if ech.add(row)))

    Ea = a.images(E)
    _require(is_independent(alg, Ea), RETRACTION, f"images {Ea} of transversal {E} are dependent")
    pullback = PartialEndomorphism(alg, Ea, E)
    e = Endomorphism.from_basis_images(alg, alg.basis, [pullback(a(b)) for b in alg.basis])

    _require(is_idempotent(e), RETRACTION, f"retraction {e.action} is not idempotent")
    _require(compose(e, a) == a, RETRACTION, "retraction does not satisfy e*a == a")
    _require(rank_endo(e) == l, RETRACTION, "retraction rank differs from input rank")
    _require(same_closure(alg, image_basis(e), E), RETRACTION, "retraction image is not <E>")
    return e, E


def basis_chain(alg: Algebra, E: ElementSet, Ea: ElementSet) -> BasisChain:
    """Greedy exchange chain from E to Ea.

    Each step removes the smallest ``d`` of the current set not in ``Ea`` and
    adds the smallest ``c`` of ``Ea`` outside the closure of what is left,
    so every step brings exactly one more element of ``Ea`` in.
    """
    E, Ea = tuple(E), tuple(Ea)
    if not (is_independent(alg, E) and is_independent(alg, Ea)):
        raise PreconditionError("chain endpoints must be independent")
    if len(E) != len(Ea) or not E:
        raise PreconditionError("chain endpoints must be nonempty and of equal size")

    target = set(Ea)
    cur = tuple(sorted(E))
    sets = [cur]
    while set(cur) != target:
        d = min(x for x in cur if x not in target)
        rest = tuple(x for x in cur if x != d)
        c = min((y for y in Ea if y not in cur and not in_closure(alg, y, rest)), default=None)
        _require(c is not None, CHAIN, f"no exchange partner for {d} in {cur}")
        cur = tuple(sorted(rest + (c,)))
        sets.append(cur)
    return BasisChain(tuple(sets))


def _partial(alg, mapping: dict) -> PartialEndomorphism:
    dom = tuple(sorted(mapping))
    return PartialEndomorphism(alg, dom, tuple(mapping[x] for x in dom))


def exchange_idempotents(alg: Algebra, Ei: ElementSet, Ei1: ElementSet) -> list:
    """One or two partial idempotents whose product carries Ei onto Ei1.

    With ``D`` the common part, ``x`` the element leaving and ``y`` the
    element entering: if ``y`` is outside ``<D, x>`` a single idempotent on
    ``<D, x, y>`` sends ``x`` to ``y``.  Otherwise pick ``z`` outside
    ``<D, x, y>`` and go ``x -> z`` then ``z -> y``.
    """
    Ei, Ei1 = tuple(Ei), tuple(Ei1)
    if not (is_independent(alg, Ei) and is_independent(alg, Ei1)) or len(Ei) != len(Ei1):
        raise PreconditionError("exchange needs two independent sets of equal size")
    out_ = [v for v in Ei if v not in Ei1]
    in_ = [v for v in Ei1 if v not in Ei]
    if len(out_) != 1:
        raise PreconditionError(f"{Ei} and {Ei1} must differ in exactly one element")
    if len(Ei) >= alg.rank:
        raise PreconditionError("exchange sets must have rank below the algebra's")
    (x,), (y,) = out_, in_
    D = tuple(v for v in Ei if v != x)
    fix = {v: v for v in D}

    if not in_closure(alg, y, D + (x,)):
        factors = [_partial(alg, {**fix, x: y, y: y})]
    else:
        z = witness_outside(alg, D + (x, y))
        _require(z is not None, EXCHANGE, f"no element outside <{D + (x, y)}>")
        factors = [
            _partial(alg, {**fix, x: z, z: z}),
            _partial(alg, {**fix, z: y, y: y}),
        ]

    for pe in factors:
        _require(pe.is_idempotent(), EXCHANGE, f"exchange factor {pe.as_dict()} is not idempotent")
    for first, second in zip(factors, factors[1:]):
        _require(all(second.in_domain(v) for v in first.image_basis), EXCHANGE,
                 "factor image escapes the next factor's domain")
    image = Ei
    for pe in factors:
        image = tuple(pe(v) for v in image)
    _require(set(image) == set(Ei1), EXCHANGE, f"exchange maps {Ei} to {image}, not {Ei1}")
    return factors


def induced_permutation(E: ElementSet, chain_factors: Sequence[PartialEndomorphism],
                        a: Endomorphism) -> Permutation:
    """The permutation ``f`` of ``Ea`` with ``f(h(x)) == a(x)`` for x in E.

    ``h`` is the product of ``chain_factors``.
    """
    h = {}
    for x in E:
        y = x
        for pe in chain_factors:
            y = pe(y)
        h[x] = y
    _require(len(set(h.values())) == len(E), PERMUTATION, f"chain product is not injective on {E}")
    mapping = {h[x]: a(x) for x in E}
    _require(set(mapping) == set(mapping.values()), PERMUTATION,
             f"chain image {sorted(mapping)} differs from Ea {sorted(mapping.values())}")
    return Permutation.from_dict(mapping)


def perm_to_transpositions(f: Permutation) -> list:
    """Split ``f`` into transpositions, to be applied left to right.

    Cycles are taken in order of their smallest member ``c1``; the cycle
    ``c1 -> c2 -> ... -> ck -> c1`` becomes ``(c1 c2), (c1 c3), ..., (c1 ck)``.
    """
    seen = set()
    out = []
    for c in f.carrier:
        if c in seen:
            continue
        seen.add(c)
        nxt = f(c)
        while nxt != c:
            out.append((c, nxt))
            seen.add(nxt)
            nxt = f(nxt)
    return out


def transposition_idempotents(alg: Algebra, Ea: ElementSet, x: int, y: int) -> list:
    """Three partial idempotents whose product swaps ``x`` and ``y`` on ``Ea``.

    With ``z`` the smallest element outside ``<Ea>``, all three live on
    ``<Ea, z>``: first ``x -> z``, then ``y -> x``, then ``z -> y``; every
    other element of ``Ea`` stays put throughout.
    """
    Ea = tuple(Ea)
    if x == y or x not in Ea or y not in Ea:
        raise PreconditionError(f"({x} {y}) is not a transposition of {Ea}")
    if len(Ea) >= alg.rank:
        raise PreconditionError("carrier must have rank below the algebra's")
    z = witness_outside(alg, Ea)
    _require(z is not None, TRANSPOSITION, f"no element outside <{Ea}>")
    fix = {v: v for v in Ea}
    gadgets = [
        _partial(alg, {**fix, x: z, z: z}),
        _partial(alg, {**fix, y: x, z: z}),
        _partial(alg, {**fix, z: y}),
    ]
    for pe in gadgets:
        _require(pe.is_idempotent(), TRANSPOSITION, f"gadget {pe.as_dict()} is not idempotent")
    for v in Ea:
        w = v
        for pe in gadgets:
            w = pe(w)
        want = y if v == x else x if v == y else v
        _require(w == want, TRANSPOSITION, f"gadget sends {v} to {w}, expected {want}")
    return gadgets


def totalize(alg: Algebra, pe: PartialEndomorphism) -> Endomorphism:
    """Extend a partial idempotent to a total one with the same image.

    The domain basis is extended greedily to a basis of the algebra and every
    new basis element is sent to the smallest element of the image basis.
    """
    C0 = pe.image_basis
    if not C0:
        raise DegenerateRankError("partial endomorphism with empty image")
    if not pe.is_idempotent():
        raise PreconditionError(f"{pe.as_dict()} is not idempotent")
    c = min(C0)
    B = extend_to_basis(alg, pe.domain_basis)
    images = pe.images + (c,) * (len(B) - len(pe.domain_basis))
    total = Endomorphism.from_basis_images(alg, B, images)

    _require(is_idempotent(total), TOTALIZE, f"extension {total.action} is not idempotent")
    _require(all(total(b) == pe(b) for b in pe.domain_basis), TOTALIZE,
             "extension disagrees with the partial map on its domain")
    _require(same_closure(alg, image_basis(total), C0), TOTALIZE, "extension changed the image")
    return total


def verify_factorization(a: Endomorphism, factors: Sequence[Endomorphism]) -> Checks:
    """Recompute every certificate check from scratch."""
    alg = a.algebra
    for f in factors:
        if f.algebra != alg:
            raise AlgebraMismatchError(f"factor over {f.algebra}, input over {alg}")
    if factors:
        prod = factors[0]
        for f in factors[1:]:
            prod = compose(prod, f)
        product_matches = prod == a
    else:
        product_matches = False
    l = rank_endo(a)
    return Checks(
        product_matches=product_matches,
        all_idempotent=all(is_idempotent(f) for f in factors),
        ranks_equal=all(rank_endo(f) == l for f in factors),
        factor_bound_ok=len(factors) <= max(1, 5 * l),
    )


def factorize(a: Endomorphism) -> FactorizationReport:
    alg = a.algebra
    l = rank_endo(a)
    if l == alg.rank:
        raise NotSingularError()
    if l == 0:
        checks = verify_factorization(a, [a])
        _require(checks.ok, ASSEMBLY, "zero map failed its own certificate")
        return FactorizationReport(a, 0, (a,), 0, 0, checks)

    e, E = initial_idempotent(a)
    Ea = tuple(sorted(a.images(E)))
    _require(len(Ea) == l and is_independent(alg, Ea), RETRACTION, f"Ea = {Ea} is not a basis of the image")

    chain = basis_chain(alg, E, Ea)
    _require(chain.steps <= l, CHAIN, f"chain of {chain.steps} steps for rank {l}")
    exchange = []
    for Ei, Ei1 in zip(chain.sets, chain.sets[1:]):
        exchange.extend(exchange_idempotents(alg, Ei, Ei1))

    f = induced_permutation(E, exchange, a)
    transpositions = perm_to_transpositions(f)
    gadgets = []
    for x, y in transpositions:
        gadgets.extend(transposition_idempotents(alg, Ea, x, y))
    partials = exchange + gadgets

    # Each factor's image must sit inside the next factor's domain, starting from e.
    prev_image = E
    for i, pe in enumerate(partials):
        stage = EXCHANGE if i < len(exchange) else TRANSPOSITION
        _require(all(pe.in_domain(v) for v in prev_image), stage,
                 f"factor {i + 1} does not contain the previous image in its domain")
        prev_image = pe.image_basis

    factors = [e]
    prefix = e
    current = E  # image of the running product is <current>
    for i, pe in enumerate(partials):
        total = totalize(alg, pe)
        factors.append(total)
        prefix = compose(prefix, total)
        current = tuple(pe(v) for v in current)
        _require(same_closure(alg, image_basis(prefix), current), ASSEMBLY,
                 f"image of the first {i + 2} factors is not spanned by {current}")
        if i == len(exchange) - 1:
            _require(set(current) == set(Ea), CHAIN, "exchange stage does not end on Ea")

    checks = verify_factorization(a, factors)
    _require(checks.product_matches, ASSEMBLY, "product of factors differs from the input")
    _require(checks.ok, ASSEMBLY, f"certificate check failed: {checks}")
    return FactorizationReport(
        input=a,
        rank_l=l,
        factors=tuple(factors),
        chain_length=chain.steps,
        transposition_count=len(transpositions),
        checks=checks,
        chain=chain,
        permutation=f,
        partials=tuple(partials),
    )

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mat, product_table, table, vec
from idemfact.algebra import (
    Algebra,
    Endomorphism,
    PartialEndomorphism,
    compose,
    image_basis,
    is_idempotent,
    is_independent,
    rank_endo,
    same_closure,
)
from idemfact.errors import (
    AlgebraMismatchError,
    DegenerateRankError,
    NotSingularError,
    PreconditionError,
)
from idemfact.factorization import (
    Permutation,
    basis_chain,
    exchange_idempotents,
    factorize,
    induced_permutation,
    initial_idempotent,
    perm_to_transpositions,
    totalize,
    transposition_idempotents,
    verify_factorization,
)
from idemfact.instances import enumerate_endomorphisms, parse_endo


def E(alg, text):
    return parse_endo(alg, text)


# retraction


@pytest.mark.parametrize(
    "text,e,transversal",
    [("1 1 2 2", (0, 0, 2, 2), (0, 2)), ("1 0 0 0", (0, 1, 1, 1), (0, 1))],
)
def test_initial_idempotent_sets(T4, text, e, transversal):
    a = E(T4, text)
    got, got_E = initial_idempotent(a)
    assert got.action == e and got_E == transversal
    assert compose(got, a) == a and is_idempotent(got)


def test_initial_idempotent_vector(V22):
    a = mat(V22, [[0, 1], [0, 0]])
    e, got_E = initial_idempotent(a)
    assert e.action == ((1, 0), (0, 0))
    assert got_E == (vec(V22, 1, 0),)
    assert compose(e, a) == a


def test_initial_idempotent_rejects(T4, V22):
    with pytest.raises(NotSingularError):
        initial_idempotent(Endomorphism.identity(T4))
    with pytest.raises(DegenerateRankError):
        initial_idempotent(mat(V22, [[0, 0], [0, 0]]))


@pytest.mark.parametrize("alg", [Algebra.finite_set(4), Algebra.vector_space(2, 3), Algebra.vector_space(3, 2)],
                         ids=str)
def test_retraction_properties(alg):
    for a in enumerate_endomorphisms(alg, singular_only=True):
        if rank_endo(a) == 0:
            continue
        e, T = initial_idempotent(a)
        l = rank_endo(a)
        Ea = a.images(T)
        assert len(T) == l and is_independent(alg, Ea) and len(set(Ea)) == l
        assert compose(e, a) == a and is_idempotent(e) and rank_endo(e) == l
        assert same_closure(alg, image_basis(e), T)


# chains


def test_basis_chain_examples(T4, V32):
    assert basis_chain(T4, (0, 2), (1, 2)).sets == ((0, 2), (1, 2))
    assert basis_chain(T4, (0, 2), (0, 2)).sets == ((0, 2),)
    x, y = vec(V32, 1, 0), vec(V32, 2, 0)
    assert basis_chain(V32, (x,), (y,)).sets == ((x,), (y,))


def test_basis_chain_preconditions(T4, V32):
    with pytest.raises(PreconditionError):
        basis_chain(T4, (0,), (1, 2))
    with pytest.raises(PreconditionError):
        basis_chain(V32, (vec(V32, 1, 0), vec(V32, 2, 0)), (1, 3))


def test_basis_chain_greedy_choice():
    V = Algebra.vector_space(2, 3)
    # drop (0,1,0) (code 2 < code 4); both (0,0,1) and (1,1,0) lie outside <(1,0,0)>,
    # the smaller code (0,0,1) is taken first
    Ea = (vec(V, 0, 0, 1), vec(V, 1, 1, 0))
    chain = basis_chain(V, (vec(V, 1, 0, 0), vec(V, 0, 1, 0)), Ea)
    assert chain.sets[1] == tuple(sorted((vec(V, 1, 0, 0), vec(V, 0, 0, 1))))
    assert set(chain.sets[-1]) == set(Ea)


# exchanges


def test_exchange_case_one_set(T4):
    (pe,) = exchange_idempotents(T4, (0, 2), (1, 2))
    assert pe.as_dict() == {0: 1, 1: 1, 2: 2}


def test_exchange_case_two(V32):
    x, y, z = vec(V32, 1, 0), vec(V32, 2, 0), vec(V32, 0, 1)
    first, second = exchange_idempotents(V32, (x,), (y,))
    assert first.as_dict() == {x: z, z: z}
    assert second.as_dict() == {y: y, z: y}
    assert second(first(x)) == y


def test_exchange_case_one_vector():
    V = Algebra.vector_space(2, 3)
    factors = exchange_idempotents(V, (vec(V, 1, 0, 0),), (vec(V, 0, 1, 0),))
    assert len(factors) == 1


def test_exchange_preconditions(T4):
    with pytest.raises(PreconditionError):
        exchange_idempotents(T4, (0, 1), (2, 3))
    with pytest.raises(PreconditionError):
        exchange_idempotents(T4, (0, 1), (0, 1))


@pytest.mark.parametrize("alg", [Algebra.finite_set(4), Algebra.vector_space(2, 3), Algebra.vector_space(3, 2)],
                         ids=str)
def test_exchange_properties_exhaustive(alg):
    for l in range(1, alg.rank):
        sets = [S for S in itertools.combinations(range(alg.size), l) if is_independent(alg, S)]
        for A, B in itertools.product(sets, repeat=2):
            if len(set(A) - set(B)) != 1:
                continue
            factors = exchange_idempotents(alg, A, B)
            assert 1 <= len(factors) <= 2
            image = A
            for pe in factors:
                assert pe.is_idempotent() and pe.rank == l
                assert all(pe.in_domain(v) for v in image)
                image = tuple(pe(v) for v in image)
            assert set(image) == set(B)


# permutations


def test_induced_permutation_examples(T4):
    a = E(T4, "1 1 2 2")
    chain = exchange_idempotents(T4, (0, 2), (1, 2))
    assert induced_permutation((0, 2), chain, a).is_identity()
    f = induced_permutation((0, 1), [], E(T4, "1 0 0 0"))
    assert f.carrier == (0, 1) and f.images == (1, 0)


def test_perm_to_transpositions_examples():
    assert perm_to_transpositions(Permutation((1, 2), (1, 2))) == []
    assert perm_to_transpositions(Permutation((0, 1), (1, 0))) == [(0, 1)]
    assert perm_to_transpositions(Permutation((0, 1, 2), (1, 2, 0))) == [(0, 1), (0, 2)]


def _apply_transpositions(ts, u):
    for x, y in ts:
        u = y if u == x else x if u == y else u
    return u


@settings(max_examples=200)
@given(st.integers(1, 9).flatmap(lambda k: st.permutations(range(k))))
def test_perm_to_transpositions_recomposes(images):
    carrier = tuple(range(len(images)))
    f = Permutation(carrier, tuple(images))
    ts = perm_to_transpositions(f)
    assert len(ts) <= max(0, len(carrier) - 1)
    assert all(_apply_transpositions(ts, u) == f(u) for u in carrier)


# transposition gadgets


def test_transposition_gadget_example(T4):
    f1, f2, f3 = transposition_idempotents(T4, (0, 1), 0, 1)
    assert f1.domain_basis == f2.domain_basis == f3.domain_basis == (0, 1, 2)
    assert f1.images == (2, 1, 2)
    assert f2.images == (0, 0, 2)
    assert f3.images == (0, 1, 1)


def test_transposition_gadget_vector():
    V = Algebra.vector_space(3, 3)
    Ea = (vec(V, 1, 0, 0), vec(V, 1, 1, 0))
    gadgets = transposition_idempotents(V, Ea, *Ea)
    for pe in gadgets:
        assert pe.is_idempotent() and pe.rank == 2
        assert same_closure(V, pe.domain_basis, Ea + (vec(V, 0, 0, 1),))
    for u, want in zip(Ea, reversed(Ea)):
        for pe in gadgets:
            u = pe(u)
        assert u == want


def test_transposition_gadget_preconditions(T4, V22):
    with pytest.raises(PreconditionError):
        transposition_idempotents(T4, (0, 1), 0, 0)
    with pytest.raises(PreconditionError):
        transposition_idempotents(T4, (0, 1, 2, 3), 0, 1)
    with pytest.raises(PreconditionError):
        transposition_idempotents(V22, (vec(V22, 1, 0),), vec(V22, 1, 0), vec(V22, 0, 1))


# totalization


@pytest.mark.parametrize("images,total", [((1, 1, 2), (1, 1, 2, 1)), ((2, 1, 2), (2, 1, 2, 1))])
def test_totalize_examples(T4, images, total):
    t = totalize(T4, PartialEndomorphism(T4, (0, 1, 2), images))
    assert t.action == total and is_idempotent(t)


def test_totalize_total_input(V22):
    m = mat(V22, [[0, 1], [0, 1]])
    pe = PartialEndomorphism(V22, V22.basis, m.images(V22.basis))
    assert totalize(V22, pe) == m


def test_totalize_rejects(T4, V22):
    with pytest.raises(PreconditionError):
        totalize(T4, PartialEndomorphism(T4, (0, 1), (1, 0)))
    with pytest.raises(DegenerateRankError):
        totalize(V22, PartialEndomorphism(V22, (vec(V22, 1, 0),), (0,)))


def test_totalize_vector_restriction():
    V = Algebra.vector_space(3, 3)
    x, z = vec(V, 1, 0, 0), vec(V, 0, 1, 0)
    pe = PartialEndomorphism(V, (x, z), (z, z))
    t = totalize(V, pe)
    assert is_idempotent(t) and rank_endo(t) == 1
    for s, u in itertools.product(range(3), repeat=2):
        w = V.encode([s, u, 0])
        assert t(w) == pe(w)


# whole pipeline


def test_factorize_examples(T4, V22):
    r = factorize(E(T4, "1 1 2 2"))
    assert [f.action for f in r.factors] == [(0, 0, 2, 2), (1, 1, 2, 1)]
    assert r.rank_l == 2 and r.chain_length == 1 and r.transposition_count == 0 and r.checks.ok

    r = factorize(E(T4, "1 0 0 0"))
    assert product_table(r.factors) == (1, 0, 0, 0)
    assert r.transposition_count == 1 and len(r.factors) == 4 and r.checks.ok

    r = factorize(mat(V22, [[0, 1], [0, 0]]))
    assert [f.action for f in r.factors] == [((1, 0), (0, 0)), ((0, 1), (0, 1))]

    zero = mat(V22, [[0, 0], [0, 0]])
    r = factorize(zero)
    assert r.factors == (zero,) and r.rank_l == 0 and r.checks.ok


def test_factorize_rejects_automorphisms(T4, V22):
    with pytest.raises(NotSingularError, match="automorphism"):
        factorize(E(T4, "3 2 1 0"))
    with pytest.raises(NotSingularError):
        factorize(mat(V22, [[1, 1], [0, 1]]))


def _prefix_image_law(report):
    """Image of each prefix product is spanned by the tracked image of E."""
    alg = report.input.algebra
    e = report.factors[0]
    current = image_basis(e)
    prefix = e
    for pe, f in zip(report.partials, report.factors[1:]):
        current = tuple(pe(v) for v in current)
        prefix = compose(prefix, f)
        assert same_closure(alg, image_basis(prefix), current)
    return current


@pytest.mark.parametrize("alg", [Algebra.finite_set(4), Algebra.vector_space(2, 3), Algebra.vector_space(3, 2)],
                         ids=str)
def test_prefix_images(alg):
    for a in enumerate_endomorphisms(alg, singular_only=True):
        r = factorize(a)
        if r.rank_l == 0:
            continue
        n_exchange = len(r.partials) - 3 * r.transposition_count
        e = r.factors[0]
        prefix = e
        for f in r.factors[1:n_exchange + 1]:
            prefix = compose(prefix, f)
        Ea = tuple(sorted(set(a.images(r.chain.sets[0]))))
        assert same_closure(alg, image_basis(prefix), Ea)
        assert same_closure(alg, _prefix_image_law(r), image_basis(a))


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=7, max_size=7))
def test_factorize_random_T7(images):
    alg = Algebra.finite_set(7)
    a = Endomorphism(alg, tuple(images))
    if len(set(images)) == 7:
        with pytest.raises(NotSingularError):
            factorize(a)
        return
    r = factorize(a)
    assert product_table(r.factors) == table(a)
    assert all(is_idempotent(f) and rank_endo(f) == r.rank_l for f in r.factors)
    assert len(r.factors) <= 5 * r.rank_l - 2 or r.rank_l == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=9, max_size=9))
def test_factorize_random_GF5_cubed(entries):
    alg = Algebra.vector_space(5, 3)
    a = mat(alg, [entries[0:3], entries[3:6], entries[6:9]])
    if rank_endo(a) == 3:
        return
    r = factorize(a)
    assert r.checks.ok
    assert product_table(r.factors) == table(a)


# certificate checker


def test_verify_examples(T4):
    a = E(T4, "1 1 2 2")
    checks = verify_factorization(a, [E(T4, "0 0 2 2"), E(T4, "1 1 2 1")])
    assert checks.ok
    assert not verify_factorization(a, [E(T4, "0 0 2 2")]).product_matches
    b = E(T4, "1 2 3 3")
    assert not verify_factorization(b, [b]).all_idempotent
    assert not verify_factorization(a, []).product_matches


def test_verify_bound_and_ranks(T4):
    a = E(T4, "0 0 0 0")
    checks = verify_factorization(a, [a] * 6)
    assert checks.product_matches and checks.all_idempotent and checks.ranks_equal
    assert not checks.factor_bound_ok
    checks = verify_factorization(E(T4, "1 1 2 2"), [E(T4, "0 1 2 3"), E(T4, "1 1 2 2")])
    assert checks.product_matches and checks.all_idempotent and not checks.ranks_equal


def test_verify_mismatch(T4):
    with pytest.raises(AlgebraMismatchError):
        verify_factorization(E(T4, "1 1 2 2"), [Endomorphism.identity(Algebra.finite_set(3))])

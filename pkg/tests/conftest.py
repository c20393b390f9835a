import itertools

import pytest

from idemfact.algebra import Algebra, Endomorphism


@pytest.fixture
def T4():
    return Algebra.finite_set(4)


@pytest.fixture
def V22():
    return Algebra.vector_space(2, 2)


@pytest.fixture
def V32():
    return Algebra.vector_space(3, 2)


def vec(alg, *coords):
    return alg.encode(coords)


def brute_span(alg, S):
    """Span of S as a set of coordinate tuples, by direct enumeration."""
    vs = [alg.decode(s) for s in S]
    out = set()
    for cs in itertools.product(range(alg.p), repeat=len(vs)):
        out.add(tuple(sum(c * v[j] for c, v in zip(cs, vs)) % alg.p for j in range(alg.d)))
    return out


def table(a):
    return tuple(a(x) for x in range(a.algebra.size))


def product_table(factors):
    """Left-to-right product computed pointwise over the whole universe."""
    alg = factors[0].algebra
    out = []
    for x in range(alg.size):
        for f in factors:
            x = f(x)
        out.append(x)
    return tuple(out)


def mat(alg, rows):
    return Endomorphism.from_matrix(alg, rows)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)

import pytest

from freemagma import TermStore
from freemagma.sets import (Complement, FiniteSet, Gens, Intersection, Level, Product, T, Union, Z,
                            format_set, in_T, in_Z, max_t_index, member, member_by_signature,
                            parse_set, signature_determined, t_depth)

from helpers import all_terms, naive_T, naive_Z


@pytest.fixture(scope="module")
def store():
    return TermStore()


def test_small_classifications(store):
    p = store.parse
    assert not in_Z(p("x"))
    assert not in_Z(p("(x*x)"))
    assert in_Z(p("(x*(x*x))"))
    assert not in_Z(p("((x*x)*x)"))
    assert t_depth(p("(x*x)")) == 1
    assert t_depth(p("(x*(x*x))")) == 2
    assert t_depth(p("((x*x)*x)")) == 1
    # left factor in Z resets the depth
    assert t_depth(p("((x*(x*x))*x)")) == 0


def test_matches_naive_recursion(store):
    for t in all_terms(store, 8):
        assert in_Z(t) == naive_Z(t), t
        for q in range(9):
            assert in_T(t, q) == naive_T(t, q), (t, q)


def test_t_chain_is_decreasing(store):
    for t in all_terms(store, 7):
        flags = [in_T(t, q) for q in range(9)]
        assert flags == sorted(flags, reverse=True)


def test_z_decomposition(store):
    union = Union(*(Product(Level(q), T(q)) for q in range(1, 9)))
    for t in all_terms(store, 8):
        assert member(t, Z()) == member(t, union)


def test_covering_inclusion(store):
    for n in range(1, 7):
        low = [Product(Level(k), T(k)) for k in range(1, n)]
        tail = Product(Complement(Union(*(Level(k) for k in range(1, n)))), T(n))
        cover = Union(*low, tail)
        for t in all_terms(store, 8):
            if in_Z(t):
                assert member(t, cover)


def test_set_algebra(store):
    t = store.parse("(x*(x*x))")
    assert member(t, Level(3)) and not member(t, Gens())
    assert member(t, Product(Gens(), Level(2)))
    assert member(t, Intersection(Z(), T(2)))
    assert not member(t, Complement(Z()))
    assert member(t, FiniteSet([t])) and t in Z()


def test_parse_and_format(store):
    text = "union(prod(I,T(2)),not(Z),inter(S(3),fin((x*x),x)))"
    A = parse_set(text, store)
    assert isinstance(A, Union)
    assert parse_set(format_set(A), store) == A
    assert max_t_index(A) == 2
    assert not signature_determined(A)
    assert signature_determined(parse_set("union(S(3),not(T(4)),Z)"))


def test_signature_membership_agrees(store):
    sets = [Z(), T(3), Level(4), Complement(T(2)), Intersection(Z(), Level(5)),
            Union(Gens(), T(4))]
    for t in all_terms(store, 7):
        z, d = store.signature(t)
        for A in sets:
            assert member_by_signature(t.size, z, d, A) == member(t, A)


def test_bad_set_syntax(store):
    from freemagma.errors import TermSyntaxError
    with pytest.raises(TermSyntaxError):
        parse_set("prod(Z)", store)
    with pytest.raises(TermSyntaxError):
        parse_set("T(", store)

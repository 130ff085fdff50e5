import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freemagma import TermStore, check_sufficient, is_admissible, point_mass, substitute
from freemagma.measure import from_entries
from freemagma.substitution import IndexSeq, SubstitutionInstance, graft

from helpers import random_mean, random_term


@pytest.fixture(scope="module")
def store():
    return TermStore(max_level=8)


def closed_form(seq, offset=0):
    # unfolding the recursion: the k-th index (0-based) must exceed offset + k
    return all(i - offset >= k + 1 for k, i in enumerate(seq))


def test_examples(store):
    x = store.x
    assert is_admissible(x, [1]) and not is_admissible(x, [0])
    assert is_admissible(store.parse("(x*x)"), [1, 2])
    assert not is_admissible(store.parse("(x*x)"), [1, 1])
    assert is_admissible(store.parse("((x*x)*x)"), [1, 2, 3])
    assert not is_admissible(store.parse("((x*x)*x)"), [1, 2, 2])
    assert is_admissible(store.parse("((x*x)*x)"), [5, 6, 7], offset=4)
    with pytest.raises(ValueError):
        is_admissible(x, [1, 2])


def test_matches_closed_form_exhaustively(store):
    for m in range(1, 6):
        for s in store.enumerate_level(m):
            for seq in itertools.product(range(0, m + 2), repeat=m):
                assert is_admissible(s, seq) == closed_form(seq), (s, seq)


def test_sufficiency(store):
    rng = random.Random(3)
    for m in range(1, 6):
        for _ in range(50):
            i0 = rng.randint(m, m + 10)
            seq = sorted(rng.sample(range(i0 + 1, i0 + 40), m - 1))
            seq = [i0] + seq
            assert check_sufficient(m, seq)
            for s in store.enumerate_level(m):
                assert is_admissible(s, seq)
    with pytest.raises(ValueError):
        check_sufficient(2, [3, 3])


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**32), st.integers(0, 20))
def test_offset_coherence(m, seed, shift):
    store = TermStore()
    rng = random.Random(seed)
    s = random_term(store, rng, m)
    seq = [rng.randint(0, 2 * m) for _ in range(m)]
    base = is_admissible(s, seq)
    assert is_admissible(s, [i + shift for i in seq], offset=shift) == base
    if base:
        # raising every index keeps a sequence admissible
        assert is_admissible(s, [i + shift for i in seq])


def test_grafting_oracle(store):
    rng = random.Random(5)
    for m in range(1, 7):
        for s in store.enumerate_level(m):
            terms = [random_term(store, rng, rng.randint(1, 3)) for _ in range(m)]
            result = substitute(s, [point_mass(t) for t in terms])
            g = graft(s, terms)
            assert result == point_mass(g)
            assert g.size == sum(t.size for t in terms)


def test_level_law(store):
    rng = random.Random(9)
    for m in range(1, 7):
        s = random_term(store, rng, m)
        levels = [rng.randint(1, 3) for _ in range(m)]
        means = [from_entries([(random_term(store, rng, n), Fraction(1))]) for n in levels]
        out = substitute(s, means)
        assert out.level == sum(levels)
        inst = SubstitutionInstance(s, IndexSeq(range(1, m + 1)), means)
        assert inst.result_level == sum(levels)


def test_mixed_level_instance(store):
    rng = random.Random(1)
    mixed = random_mean(store, rng)
    while mixed.level is not None:
        mixed = random_mean(store, rng)
    inst = SubstitutionInstance(store.x, IndexSeq([1]), [mixed])
    assert inst.result_level is None


def test_length_mismatch(store):
    with pytest.raises(ValueError):
        substitute(store.parse("(x*x)"), [point_mass(store.x)])
    with pytest.raises(ValueError):
        SubstitutionInstance(store.x, IndexSeq([1, 2]), [point_mass(store.x)] * 2)

import random
from fractions import Fraction

import pytest

from freemagma import TermStore, uniform_level
from freemagma.measure import convolve, measure_of
from freemagma.profiles import (SymbolicUniform, convolve_laws, convolve_profiles, law_measure,
                                law_of, profile_measure, profile_of, signature_counts, t_count,
                                z_count)
from freemagma.sets import Complement, Level, T, Union, Z, in_T, in_Z, t_depth
from freemagma.substitution import IndexSeq, SubstitutionInstance

from helpers import random_mean, random_term


@pytest.fixture(scope="module")
def store():
    return TermStore()


def test_counts_against_enumeration(store):
    for n in range(1, 11):
        terms = store.enumerate_level(n)
        assert z_count(n) == sum(in_Z(t) for t in terms)
        for p in range(n + 1):
            assert t_count(p, n) == sum(in_T(t, p) for t in terms)
        sig = {}
        for t in terms:
            key = (in_Z(t), t_depth(t))
            sig[key] = sig.get(key, 0) + 1
        assert signature_counts(n) == sig


def test_symbolic_matches_materialized(store):
    for n in range(1, 9):
        sym, real = SymbolicUniform(n, store), uniform_level(n, store)
        assert profile_of(sym, 6) == profile_of(real, 6)
        assert law_of(sym, 6) == law_of(real, 6)


def test_symbolic_beyond_enumeration_cap(store):
    prof = profile_of(SymbolicUniform(60, store), 3)
    assert 0 < prof.z < 1
    assert prof.t[0] == 1 and prof.t[1] > prof.t[2] > prof.t[3]


def _sets(cap):
    return [Z(), Complement(Z()), Level(4), Union(Level(3), Level(5))] + \
        [T(p) for p in range(cap + 1)]


def test_routes_agree_on_random_products(store):
    rng = random.Random(7)
    for _ in range(60):
        mu = random_mean(store, rng, max_support=5, max_level=4)
        nu = random_mean(store, rng, max_support=5, max_level=4)
        direct = convolve(mu, nu)
        cap = 4
        top = max(mu.level_masses())
        prof = convolve_profiles(profile_of(mu, 0), profile_of(nu, max(cap, top)), cap)
        law = convolve_laws(law_of(mu, 0), law_of(nu, max(cap, top)), cap)
        for A in _sets(cap):
            expected = measure_of(direct, A)
            assert profile_measure(prof, A) == expected, A
            assert law_measure(law, A, cap) == expected, A


def test_instance_routes_agree(store):
    rng = random.Random(11)
    for _ in range(40):
        size = rng.randint(1, 4)
        skeleton = random_term(store, rng, size)
        sources = [random_mean(store, rng, max_support=3, max_level=3) for _ in range(size)]
        inst = SubstitutionInstance(skeleton, IndexSeq(range(1, size + 1)), sources)
        for A in _sets(4):
            direct = inst.measure(A, route="direct")
            assert inst.measure(A, route="profile") == direct
            assert inst.measure(A, route="law") == direct
            assert inst.measure(A, route="fubini") == direct


def test_symbolic_sources_in_instances(store):
    skeleton = store.parse("((x*x)*(x*x))")
    sources = [SymbolicUniform(n, store) for n in (1, 2, 3, 4)]
    inst = SubstitutionInstance(skeleton, IndexSeq([1, 2, 3, 4]), sources)
    for A in _sets(5):
        direct = inst.measure(A, route="direct")
        assert inst.measure(A, route="profile") == direct
        assert inst.measure(A, route="law") == direct


def test_profile_cap_is_enforced(store):
    prof = profile_of(uniform_level(6, store), 2)
    assert prof.t_mass(6) == 0
    with pytest.raises(ValueError):
        prof.t_mass(4)
    assert profile_measure(prof, Level(6)) == Fraction(1)

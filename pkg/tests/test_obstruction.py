import json
import random
from fractions import Fraction

import pytest

from freemagma import TermStore, convolve, from_entries, measure_of, point_mass, uniform_level
from freemagma.obstruction import discrepancy_witness, t_recursion, walkthrough, z_via_levels
from freemagma.sets import Z

from helpers import random_mean


@pytest.fixture(scope="module")
def store():
    return TermStore()


def test_point_mass_on_generator(store):
    rep = walkthrough(point_mass(store.x), depth=4)
    assert rep.r == 0 and rep.consistent
    assert rep.discrepancy["gap"] == 1
    hyp = {h["name"]: h["holds"] for h in rep.hypotheses}
    assert hyp["mu(S_1) = mu(I) = 0"] is False


def test_uniform_three(store):
    rep = walkthrough(uniform_level(3, store), depth=5)
    assert rep.r == Fraction(1, 2) and rep.consistent
    assert rep.table[2]["mu_T"] == Fraction(1, 2)
    assert rep.table[2]["square_T"] == Fraction(1, 2)     # (1 - r) * mu(T_1), mu(T_1) = 1
    assert rep.table[3]["square_T"] == Fraction(1, 4)     # (1 - r) * mu(T_2)
    doc = json.loads(rep.to_json())
    assert doc["consistent"] is True and doc["r"] == "1/2"


def test_mixed_mean_gap(store):
    mu = from_entries([(store.x, Fraction(1, 3)), (store.parse("(x*x)"), Fraction(2, 3))])
    A, gap = discrepancy_witness(mu)
    assert gap == Fraction(8, 9)
    assert measure_of(mu, A) - measure_of(convolve(mu, mu), A) == gap


def test_large_support_falls_back(store):
    rep = walkthrough(uniform_level(7, store), depth=4, max_support=1000)   # 132**2 > 1000
    assert rep.consistent
    direct = walkthrough(uniform_level(7, store), depth=4, max_support=20000)
    assert rep.to_dict() == direct.to_dict()


def test_identities_random(store):
    rng = random.Random(4)
    for _ in range(60):
        mu, nu = random_mean(store, rng), random_mean(store, rng)
        assert measure_of(convolve(mu, nu), Z()) == z_via_levels(mu, nu)
        for p in range(7):
            lhs, rhs = t_recursion(mu, nu, p)
            assert lhs == rhs
        A, gap = discrepancy_witness(mu)
        assert gap > 0


def test_bad_depth(store):
    with pytest.raises(ValueError):
        walkthrough(point_mass(store.x), depth=0)

"""Acceptance criteria, one test each.

Each test prints ``PASS``/``FAIL``, the criterion number, a label and the
elapsed time (shown with ``pytest -s``).  Running this file directly runs
all ten and prints the same lines.
"""

from __future__ import annotations

import contextlib
import io
import json
import random
import time
from fractions import Fraction

import pytest

from freemagma import (TermStore, check_sufficient, convolve, fubini_measure, in_T, in_Z,
                       is_admissible, measure_of, point_mass, substitute)
from freemagma.cli import run
from freemagma.measure import from_entries
from freemagma.obstruction import discrepancy_witness, t_recursion, z_via_levels
from freemagma.refutation import check_certificate, get_sequence
from freemagma.sets import Complement, Level, Product, T, Union, Z, member
from freemagma.substitution import IndexSeq, SubstitutionInstance, graft
from freemagma.terms import count_level

from helpers import all_terms, naive_T, naive_Z, random_mean, random_set, random_term

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862]


def _corpus(seed=2024, n=200):
    store = TermStore()
    rng = random.Random(seed)
    pairs = []
    for _ in range(n):
        mu = random_mean(store, rng, max_support=8, max_level=5)
        nu = random_mean(store, rng, max_support=8, max_level=5)
        A, B = random_set(store, rng), random_set(store, rng)
        pairs.append((mu, nu, A, B))
    return pairs


def criterion_1():
    store = TermStore()
    for n in range(1, 11):
        assert count_level(n) == len(store.enumerate_level(n)) == CATALAN[n - 1]


def criterion_2():
    store = TermStore()
    for t in all_terms(store, 8):
        assert in_Z(t) == naive_Z(t)
        for p in range(9):
            assert in_T(t, p) == naive_T(t, p)


def criterion_3():
    store = TermStore()
    decomposition = Union(*(Product(Level(p), T(p)) for p in range(1, 9)))
    covers = []
    for n in range(1, 7):
        below = Union(*(Level(k) for k in range(1, n)))
        covers.append(Union(*(Product(Level(k), T(k)) for k in range(1, n)),
                            Product(Complement(below), T(n))))
    for t in all_terms(store, 8):
        z = member(t, Z())
        assert z == member(t, decomposition)
        if z:
            assert all(member(t, cover) for cover in covers)


def criterion_4():
    for mu, nu, A, B in _corpus():
        assert measure_of(convolve(mu, nu), Product(A, B)) == measure_of(mu, A) * measure_of(nu, B)


def criterion_5():
    for mu, nu, A, B in _corpus():
        square = convolve(mu, nu)
        for X in (A, B, Product(A, B), Union(A, Complement(B)), Z()):
            assert fubini_measure(mu, nu, X) == measure_of(square, X)


def criterion_6():
    for mu, nu, _, _ in _corpus():
        assert measure_of(convolve(mu, nu), Z()) == z_via_levels(mu, nu)
        for p in range(7):
            lhs, rhs = t_recursion(mu, nu, p)
            assert lhs == rhs


def criterion_7():
    store = TermStore()
    rng = random.Random(77)
    for m in range(1, 6):
        terms = store.enumerate_level(m)
        for _ in range(50):
            i0 = rng.randint(m, m + 20)
            seq = [i0] + sorted(rng.sample(range(i0 + 1, i0 + 60), m - 1))
            assert check_sufficient(m, seq)
            for s in terms:
                assert is_admissible(s, seq)
    # offset coherence: shifting indices and offset together changes nothing,
    # and raising every index preserves admissibility
    for _ in range(500):
        m = rng.randint(1, 8)
        s = random_term(store, rng, m)
        seq = [rng.randint(0, 2 * m) for _ in range(m)]
        shift = rng.randint(0, 30)
        base = is_admissible(s, seq)
        assert is_admissible(s, [i + shift for i in seq], shift) == base
        if base:
            assert is_admissible(s, [i + shift for i in seq])


def criterion_8():
    store = TermStore()
    rng = random.Random(88)
    for m in range(1, 7):
        for s in store.enumerate_level(m):
            terms = [random_term(store, rng, rng.randint(1, 3)) for _ in range(m)]
            assert substitute(s, [point_mass(t) for t in terms]) == point_mass(graft(s, terms))
            levels = [rng.randint(1, 3) for _ in range(m)]
            means = [from_entries([(random_term(store, rng, n), Fraction(1, 2)),
                                   (random_term(store, rng, n), Fraction(1, 2))])
                     for n in levels]
            inst = SubstitutionInstance(s, IndexSeq(range(1, m + 1)), means)
            assert inst.result_level == sum(levels)
            assert inst.result().level == sum(levels)


def criterion_9():
    for name in ("uniform-levels", "right-chains"):
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            code = run(["refute", "--epsilon", "2/5", "--seq", name])
        assert code == 0
        doc = json.loads(out.getvalue())
        low = Fraction(doc["low"]["z_value"])
        high = Fraction(doc["high"]["z_value"])
        assert low < Fraction(2, 5) and high > Fraction(3, 5)
        if name == "right-chains":
            assert low == 0 and high == 1
        # independent re-check from the emitted document alone
        checks = check_certificate(doc, get_sequence(name, TermStore()))
        assert "low:signature-law" in checks and "high:signature-law" in checks


def criterion_10():
    store = TermStore()
    rng = random.Random(1010)
    for _ in range(100):
        mu = random_mean(store, rng, max_support=8, max_level=6)
        A, gap = discrepancy_witness(mu)
        assert gap > 0
        assert measure_of(mu, A) - measure_of(convolve(mu, mu), A) == gap


CRITERIA = [
    (1, "level counts match enumeration", criterion_1, 1),
    (2, "classifier agrees with naive recursion", criterion_2, 10),
    (3, "Z decomposition and covering inclusion", criterion_3, 10),
    (4, "product sets factor under convolution", criterion_4, 30),
    (5, "iterated sums equal direct measure", criterion_5, 30),
    (6, "T recursion and Z via levels", criterion_6, 30),
    (7, "admissibility sufficiency and offset coherence", criterion_7, 10),
    (8, "substitution level law and grafting", criterion_8, 10),
    (9, "end-to-end refutation certificates", criterion_9, 60),
    (10, "nonidempotence witnesses", criterion_10, 10),
]


def _run(number, label, fn, limit):
    start = time.perf_counter()
    error = None
    try:
        fn()
    except AssertionError as exc:
        error = exc
    elapsed = time.perf_counter() - start
    ok = error is None and elapsed < limit
    reason = "" if ok else (f" ({elapsed:.2f}s over {limit}s limit)" if error is None
                            else f" ({error!r})")
    print(f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {label} "
          f"[{elapsed:.2f}s / {limit}s]{reason}")
    return ok, error, elapsed


@pytest.mark.parametrize("number,label,fn,limit", CRITERIA, ids=[f"c{c[0]}" for c in CRITERIA])
def test_criterion(number, label, fn, limit):
    ok, error, elapsed = _run(number, label, fn, limit)
    if error is not None:
        raise error
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"


if __name__ == "__main__":
    results = [_run(*c)[0] for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
    raise SystemExit(0 if all(results) else 1)

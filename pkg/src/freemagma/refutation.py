"""Witness constructions against the nonassociative Hindman conjecture.

Colour a mean by its ``Z`` mass.  For a given increasing sequence of level
means, :func:`construct_near_zero` and :func:`construct_near_one` build
admissible substitution instances whose colours are below ``epsilon`` and
above ``1 - epsilon``; no single ``r`` can be within ``epsilon`` of both when
``epsilon < 1/2``.  :func:`refute_hindman` packages the pair, re-verified,
as a :class:`RefutationCertificate`.

The conjecture quantifies over an infinite sequence; here a sequence is an
indexed source with a finite materialized prefix, and the accumulation point
of the colours is replaced by the most frequent colour in a finite window.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import MeanError, PrefixExhausted, VerificationError
from .limits import DEFAULT_MAX_SUPPORT
from .measure import Mean, format_rational, mean_from_records, parse_rational, point_mass
from .profiles import Source, SymbolicUniform, profile_of, source_level_masses
from .sets import SetExpr, T, Z, format_set, parse_set
from .substitution import IndexSeq, SubstitutionInstance, is_admissible
from .terms import Term, TermStore

DEFAULT_PREFIX = 256
DEFAULT_WINDOW = 32


class MeanSequence:
    """Indexed level means ``i -> mu_i`` with levels strictly increasing in i.

    Only indices below ``prefix_bound`` may be used.  With ``strict=False``
    the level check is relaxed to nondecreasing.
    """

    def __init__(self, factory: Callable[[int], Source], prefix_bound: int,
                 name: str = "custom", store: TermStore | None = None, strict: bool = True):
        if prefix_bound < 1:
            raise ValueError("prefix bound must be positive")
        self.factory = factory
        self.prefix_bound = prefix_bound
        self.name = name
        self.strict = strict
        self._items: list[Source] = []
        self._levels: list[int] = []
        self._z: dict[int, Fraction] = {}
        self.store = store

    def __len__(self):
        return self.prefix_bound

    def __repr__(self):
        return f"MeanSequence({self.name!r}, prefix_bound={self.prefix_bound})"

    def __getitem__(self, i: int) -> Source:
        if i < 0:
            raise IndexError(f"negative index {i}")
        if i >= self.prefix_bound:
            raise PrefixExhausted(
                f"index {i} is beyond the materialized prefix of {self.name} "
                f"(prefix bound {self.prefix_bound}); extend the prefix to at least {i + 1}",
                needed=i + 1)
        while len(self._items) <= i:
            k = len(self._items)
            src = self.factory(k)
            levels = source_level_masses(src)
            if len(levels) != 1:
                raise MeanError(f"{self.name}[{k}] is not concentrated on a single level")
            level = next(iter(levels))
            if self._levels:
                prev = self._levels[-1]
                if level < prev or (self.strict and level == prev):
                    raise MeanError(f"{self.name}: level {level} at index {k} does not "
                                    f"increase on level {prev} at index {k - 1}")
            if self.store is None:
                self.store = src.store
            self._items.append(src)
            self._levels.append(level)
        return self._items[i]

    def level(self, i: int) -> int:
        self[i]
        return self._levels[i]

    def z_value(self, i: int) -> Fraction:
        if i not in self._z:
            self._z[i] = profile_of(self[i], 0).z
        return self._z[i]


def uniform_levels(store: TermStore, prefix_bound: int = DEFAULT_PREFIX) -> MeanSequence:
    """mu_i = uniform mean on S_{i+1}."""
    return MeanSequence(lambda i: SymbolicUniform(i + 1, store), prefix_bound,
                        "uniform-levels", store)


def right_chains(store: TermStore, prefix_bound: int = DEFAULT_PREFIX) -> MeanSequence:
    """mu_i = point mass on the right chain with i+1 leaves."""
    return MeanSequence(lambda i: point_mass(store.right_chain(i + 1)), prefix_bound,
                        "right-chains", store)


def from_means(means: list[Mean], name: str = "file", strict: bool = True) -> MeanSequence:
    if not means:
        raise MeanError(f"{name}: empty mean sequence")
    seq = MeanSequence(lambda i: means[i], len(means), name, means[0].store, strict)
    for i in range(len(means)):
        seq[i]
    return seq


BUILTIN_SEQUENCES = {"uniform-levels": uniform_levels, "right-chains": right_chains}


def load_sequence(path, store: TermStore, strict: bool = True) -> MeanSequence:
    """A JSON document ``{"means": [<mean records>, ...]}`` or a bare list of them."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MeanError(f"{path}: not valid JSON ({exc})") from None
    if isinstance(data, dict):
        data = data.get("means")
    if not isinstance(data, list):
        raise MeanError(f"{path}: expected a list of means under 'means'")
    means = [mean_from_records(recs, store, f"{path}: mean {i}") for i, recs in enumerate(data)]
    return from_means(means, str(path), strict)


def get_sequence(source: str, store: TermStore, prefix_bound: int | None = None,
                 strict: bool = True) -> MeanSequence:
    if source in BUILTIN_SEQUENCES:
        return BUILTIN_SEQUENCES[source](store, prefix_bound or DEFAULT_PREFIX)
    seq = load_sequence(source, store, strict)
    if prefix_bound is not None:
        seq.prefix_bound = min(seq.prefix_bound, prefix_bound)
    return seq


# constructions

@dataclass(frozen=True)
class Witness:
    skeleton: Term
    indices: tuple
    offset: int
    levels: tuple
    target: SetExpr
    value: Fraction          # mass of target
    z_value: Fraction        # mass of Z
    instance: SubstitutionInstance = field(repr=False, compare=False)

    @property
    def result_level(self) -> int:
        return sum(self.levels)

    @property
    def result(self) -> SubstitutionInstance:
        return self.instance

    def to_dict(self) -> dict:
        return {
            "skeleton": str(self.skeleton),
            "indices": list(self.indices),
            "offset": self.offset,
            "levels": list(self.levels),
            "result_level": self.result_level,
            "target": format_set(self.target),
            "value": format_rational(self.value),
            "z_value": format_rational(self.z_value),
        }


def make_witness(seq: MeanSequence, skeleton: Term, indices, offset: int,
                 target: SetExpr) -> Witness:
    indices = tuple(indices)
    sources = [seq[i] for i in indices]
    inst = SubstitutionInstance(skeleton, IndexSeq(indices, offset), sources)
    value = inst.measure(target)
    z = value if target == Z() else inst.measure(Z())
    return Witness(skeleton, indices, offset, tuple(seq.level(i) for i in indices),
                   target, value, z, inst)


def r_candidates(seq: MeanSequence, window: int | None = None) -> list[Fraction]:
    """Distinct Z masses of mu_0..mu_{window-1}, most frequent first, ties larger first."""
    if window is None:
        window = min(seq.prefix_bound, DEFAULT_WINDOW)
    if window < 1:
        raise ValueError("empty window")
    if window > seq.prefix_bound:
        raise PrefixExhausted(f"window {window} exceeds prefix bound {seq.prefix_bound}",
                              needed=window)
    counts = Counter(seq.z_value(i) for i in range(window))
    return sorted(counts, key=lambda v: (counts[v], v), reverse=True)


def pick_r(seq: MeanSequence, window: int | None = None) -> Fraction:
    """Most frequent Z mass among mu_0..mu_{window-1}; ties go to the larger value."""
    return r_candidates(seq, window)[0]


def _pow_below(q: Fraction, p: int, eps: Fraction) -> bool:
    """Exact test of q**p < eps for 0 <= q <= 1 without needless huge powers."""
    if p == 0:
        return 1 < eps
    if q <= 0:
        return True
    k, power = 1, q
    while True:
        if power < eps:
            return True
        if 2 * k > p:
            break
        power *= power
        k *= 2
    return q ** p < eps if k < p else False


def chain_length(r: Fraction, eps: Fraction) -> int:
    """Smallest l >= 1 with (1 - r)**l < eps."""
    if not 0 < r <= 1:
        raise ValueError(f"r must lie in (0, 1], got {r}")
    q = 1 - r
    l, power = 1, q
    while not power < eps:
        l += 1
        power *= q
    return l


def construct_near_zero(m: int, epsilon, seq: MeanSequence, r) -> Witness:
    """Skeleton s and indices > m, admissible after shifting by m, with Z mass < epsilon."""
    epsilon, r = Fraction(epsilon), Fraction(r)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    store = seq.store or seq[0].store
    if r == 0:
        i = m + 1
        while not seq.z_value(i) < epsilon:
            i += 1
            if i >= seq.prefix_bound:
                raise PrefixExhausted(
                    f"no index in ({m}, {seq.prefix_bound}) of {seq.name} has Z mass "
                    f"below {epsilon}; extend the prefix", needed=None)
        return make_witness(seq, store.x, [i], m, Z())
    l = chain_length(r, epsilon)
    head = [m + k + 1 for k in range(l)]
    p = sum(seq.level(i) for i in head)
    tail: list[int] = []
    i = m + l + 1
    while len(tail) < p + 1:
        if i >= seq.prefix_bound:
            raise PrefixExhausted(
                f"{seq.name}: picked {len(tail)} of {p + 1} tail indices before reaching "
                f"the prefix bound {seq.prefix_bound}; extend the prefix", needed=None)
        if _pow_below(1 - seq.z_value(i), p, epsilon):
            tail.append(i)
        i += 1
    skeleton = store.right_chain(l) * store.right_chain(p + 1)
    w = make_witness(seq, skeleton, head + tail, m, Z())
    if not w.value < epsilon:
        raise VerificationError(f"near-zero witness has Z mass {w.value} >= {epsilon}")
    return w


def construct_T_concentrated(m: int, p: int, epsilon, seq: MeanSequence, r) -> Witness:
    """Skeleton s and indices > m, admissible after shifting by m, with T(p) mass > 1 - epsilon."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    store = seq.store or seq[0].store
    if p == 0:
        return make_witness(seq, store.x, [m + 1], m, T(0))
    delta = epsilon / 2              # (1 - eps/2)**2 > 1 - eps
    u = construct_near_zero(m, delta, seq, r)
    v = construct_T_concentrated(u.indices[-1], p - 1, delta, seq, r)
    w = make_witness(seq, u.skeleton * v.skeleton, u.indices + v.indices, m, T(p))
    if not w.value > 1 - epsilon:
        raise VerificationError(f"T({p}) witness has mass {w.value} <= 1 - {epsilon}")
    return w


def construct_near_one(epsilon, seq: MeanSequence, r) -> Witness:
    """Skeleton x*t with indices admissible at offset 0 and Z mass > 1 - epsilon.

    The leading index is 1, the smallest value a leaf accepts.
    """
    epsilon = Fraction(epsilon)
    first = 1
    p = seq.level(first)
    t = construct_T_concentrated(first, p, epsilon, seq, r)
    store = seq.store
    w = make_witness(seq, store.x * t.skeleton, (first,) + t.indices, 0, Z())
    if not w.value > 1 - epsilon:
        raise VerificationError(f"near-one witness has Z mass {w.value} <= 1 - {epsilon}")
    return w


def verify_witness(w: Witness, seq: MeanSequence,
                   max_support: int = DEFAULT_MAX_SUPPORT) -> list[str]:
    """Recheck a witness from scratch; returns the names of the checks run."""
    checks = []
    idx = list(w.indices)
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise VerificationError(f"indices {idx} are not strictly increasing")
    if not is_admissible(w.skeleton, idx, w.offset):
        raise VerificationError(f"indices {idx} are not admissible (offset {w.offset})")
    checks.append("admissible")
    if tuple(seq.level(i) for i in idx) != tuple(w.levels):
        raise VerificationError("recorded leaf levels do not match the sequence")
    inst = SubstitutionInstance(w.skeleton, IndexSeq(idx, w.offset), [seq[i] for i in idx])
    if inst.result_level != w.result_level:
        raise VerificationError("result level is not the sum of leaf levels")
    checks.append("levels")
    for target, claimed in ((w.target, w.value), (Z(), w.z_value)):
        got = inst.measure(target, route="law")
        if got != claimed:
            raise VerificationError(f"{target} mass recomputed as {got}, claimed {claimed}")
    checks.append("signature-law")
    if inst.support_size() <= max_support and not w.skeleton.is_leaf:
        for target, claimed in ((w.target, w.value), (Z(), w.z_value)):
            got = inst.measure(target, route="fubini", max_support=max_support)
            if got != claimed:
                raise VerificationError(f"{target} mass by Fubini is {got}, claimed {claimed}")
        checks.append("fubini")
    return checks


@dataclass(frozen=True)
class RefutationCertificate:
    epsilon: Fraction
    r: Fraction
    sequence: str
    low: Witness
    high: Witness
    checks: tuple = ()

    @property
    def verdict(self) -> str:
        return (f"refuted: Z masses {format_rational(self.low.z_value)} < "
                f"{format_rational(self.epsilon)} and {format_rational(self.high.z_value)} > "
                f"1 - {format_rational(self.epsilon)} cannot both lie within "
                f"{format_rational(self.epsilon)} of any r in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "epsilon": format_rational(self.epsilon),
            "r": format_rational(self.r),
            "sequence": self.sequence,
            "low": self.low.to_dict(),
            "high": self.high.to_dict(),
            "checks": list(self.checks),
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def refute_hindman(epsilon, seq: MeanSequence, window: int | None = None,
                   max_support: int = DEFAULT_MAX_SUPPORT) -> RefutationCertificate:
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < Fraction(1, 2):
        raise ValueError(f"epsilon must satisfy 0 < epsilon < 1/2, got {epsilon}")
    # r only steers the chain length; every witness is checked directly, so
    # when one candidate runs the prefix dry the next one is tried.
    failure = None
    for r in r_candidates(seq, window):
        try:
            low = construct_near_zero(0, epsilon, seq, r)
            high = construct_near_one(epsilon, seq, r)
            break
        except PrefixExhausted as exc:
            failure = exc
    else:
        raise failure
    checks = []
    for name, w in (("low", low), ("high", high)):
        if w.offset != 0:
            raise VerificationError(f"{name} witness has offset {w.offset}")
        checks += [f"{name}:{c}" for c in verify_witness(w, seq, max_support)]
    if not (low.z_value < epsilon and high.z_value > 1 - epsilon):
        raise VerificationError("witness Z masses do not straddle the epsilon window")
    return RefutationCertificate(epsilon, r, seq.name, low, high, tuple(checks))


def check_certificate(doc: dict, seq: MeanSequence,
                      max_support: int = DEFAULT_MAX_SUPPORT) -> list[str]:
    """Re-verify a certificate document against ``seq``; returns the checks run."""
    try:
        epsilon = parse_rational(doc["epsilon"])
        parts = {name: doc[name] for name in ("low", "high")}
    except (KeyError, TypeError, ValueError) as exc:
        raise VerificationError(f"malformed certificate: {exc}") from None
    if not 0 < epsilon < Fraction(1, 2):
        raise VerificationError(f"epsilon {epsilon} outside (0, 1/2)")
    store = seq.store or seq[0].store
    checks = []
    witnesses = {}
    for name, part in parts.items():
        try:
            skeleton = store.parse(part["skeleton"])
            target = parse_set(part.get("target", "Z"), store)
            w = Witness(skeleton, tuple(part["indices"]), int(part["offset"]),
                        tuple(part["levels"]), target, parse_rational(part["value"]),
                        parse_rational(part["z_value"]), None)
        except (KeyError, TypeError, ValueError) as exc:
            raise VerificationError(f"malformed {name} witness: {exc}") from None
        if w.offset != 0:
            raise VerificationError(f"{name} witness must have offset 0")
        checks += [f"{name}:{c}" for c in verify_witness(w, seq, max_support)]
        witnesses[name] = w
    if not witnesses["low"].z_value < epsilon:
        raise VerificationError("low witness Z mass is not below epsilon")
    if not witnesses["high"].z_value > 1 - epsilon:
        raise VerificationError("high witness Z mass is not above 1 - epsilon")
    checks.append("straddle")
    return checks

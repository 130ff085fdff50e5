"""Exact summaries of means too large to materialize.

Two independent routes compute the mass a (possibly huge) product of means
gives to ``Z``, ``T(p)`` and the levels:

``Profile``
    marginal masses only (level distribution, ``Z`` mass, ``T(p)`` masses),
    combined through the product identities
    ``(mu*nu)(Z) = sum_q mu(S_q) nu(T_q)`` and
    ``(mu*nu)(T(p+1)) = (1 - mu(Z)) nu(T(p))``.

``law`` (a signature law)
    the joint distribution of ``(size, in Z, T-depth)``, pushed forward
    pairwise through the rule that decides the signature of ``a*b`` from the
    signatures of ``a`` and ``b``.

Both truncate T-depths at a cap chosen by the caller; comparisons below the
cap stay exact.  Uniform means on a level are summarized from counting
recurrences, so levels far beyond the enumeration cap are available.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union as TUnion

from .measure import LevelMean, Mean, uniform_level
from .sets import (Complement, Gens, Level, SetExpr, T, Union, Z, member_by_signature,
                   signature_determined)
from .terms import TermStore, count_level


class SymbolicUniform:
    """The uniform mean on S_n, held by its level only."""

    __slots__ = ("level", "store")

    def __init__(self, level: int, store: TermStore):
        if level < 1:
            raise ValueError(f"level must be >= 1, got {level}")
        self.level = level
        self.store = store

    def __repr__(self):
        return f"SymbolicUniform({self.level})"

    def __eq__(self, other):
        return isinstance(other, SymbolicUniform) and other.level == self.level \
            and other.store is self.store

    def __hash__(self):
        return hash(("uniform", self.level))

    @property
    def support_size(self) -> int:
        return count_level(self.level, len(self.store.generators))

    def materialize(self) -> LevelMean:
        return uniform_level(self.level, self.store)


Source = TUnion[Mean, SymbolicUniform]


def source_level_masses(src: Source) -> dict[int, Fraction]:
    if isinstance(src, SymbolicUniform):
        return {src.level: Fraction(1)}
    return src.level_masses()


def max_level(src: Source) -> int:
    return max(source_level_masses(src))


# Counting tables for the one-generator system.  Labelled generators do not
# change any of the ratios below, since Z and T(p) ignore leaf labels.

class _MarginalCounts:
    """|Z n S_n| and |T(p) n S_n| by the marginal recurrences."""

    def __init__(self):
        self.z = [0, 0]           # index n
        self.t = [[], [1]]        # t[n][p], p < n (and t[n][0] = |S_n|)

    def ensure(self, n):
        for m in range(len(self.z), n + 1):
            s = [0] + [count_level(a) for a in range(1, m)]
            row = [count_level(m)]
            for p in range(1, m):
                row.append(sum((s[a] - self.z[a]) * self.t[m - a][p - 1]
                               for a in range(1, m) if p - 1 < len(self.t[m - a])))
            self.t.append(row)
            self.z.append(sum(s[a] * self.t[m - a][a]
                              for a in range(1, m) if a < len(self.t[m - a])))


class _JointCounts:
    """Number of terms of size n with each (in Z, T-depth) signature."""

    def __init__(self):
        self.rows = [{}, {(False, 0): 1}]

    def ensure(self, n):
        for m in range(len(self.rows), n + 1):
            row: dict = {}
            for a in range(1, m):
                zin = sum(c for (z, _), c in self.rows[a].items() if z)
                zout = sum(c for (z, _), c in self.rows[a].items() if not z)
                for (_, db), cb in self.rows[m - a].items():
                    zz = db >= a
                    if zin:
                        row[(zz, 0)] = row.get((zz, 0), 0) + zin * cb
                    if zout:
                        row[(zz, db + 1)] = row.get((zz, db + 1), 0) + zout * cb
            self.rows.append(row)


_marginal = _MarginalCounts()
_joint = _JointCounts()


def z_count(n: int) -> int:
    _marginal.ensure(n)
    return _marginal.z[n]


def t_count(p: int, n: int) -> int:
    _marginal.ensure(n)
    row = _marginal.t[n]
    return row[p] if p < len(row) else 0


def signature_counts(n: int) -> dict[tuple[bool, int], int]:
    _joint.ensure(n)
    return dict(_joint.rows[n])


# Route 1: marginal profiles

@dataclass(frozen=True)
class Profile:
    levels: dict          # size -> mass
    z: Fraction
    t: tuple              # t[p] = mass of T(p), for p <= cap
    cap: int

    @property
    def max_level(self) -> int:
        return max(self.levels)

    def t_mass(self, p: int) -> Fraction:
        if p < len(self.t):
            return self.t[p]
        if p >= self.max_level:
            return Fraction(0)
        raise ValueError(f"T({p}) is above this profile's depth cap {self.cap}")

    def level_mass(self, n: int) -> Fraction:
        return self.levels.get(n, Fraction(0))


def _t_len(cap, top):
    return min(cap, top - 1) + 1


def profile_of(src: Source, cap: int) -> Profile:
    if isinstance(src, SymbolicUniform):
        n = src.level
        total = count_level(n)
        t = tuple(Fraction(t_count(p, n), total) for p in range(_t_len(cap, n)))
        return Profile({n: Fraction(1)}, Fraction(z_count(n), total), t, cap)
    store = src.store
    levels = src.level_masses()
    top = max(levels)
    t = [Fraction(0)] * _t_len(cap, top)
    z = Fraction(0)
    for term, w in src.items():
        inz, depth = store.signature(term)
        if inz:
            z += w
        for p in range(min(depth, len(t) - 1) + 1):
            t[p] += w
    return Profile(levels, z, tuple(t), cap)


def convolve_profiles(left: Profile, right: Profile, cap: int) -> Profile:
    levels: dict = {}
    for a, wa in left.levels.items():
        for b, wb in right.levels.items():
            levels[a + b] = levels.get(a + b, 0) + wa * wb
    z = sum((wa * right.t_mass(a) for a, wa in left.levels.items()), Fraction(0))
    top = max(levels)
    keep = 1 - left.z
    t = [Fraction(1)]
    for p in range(1, _t_len(cap, top)):
        t.append(keep * right.t_mass(p - 1))
    return Profile(levels, z, tuple(t), cap)


def profile_measure(prof: Profile, A: SetExpr) -> Fraction:
    """Measure of the sets a marginal profile determines."""
    match A:
        case Z():
            return prof.z
        case T(p):
            return prof.t_mass(p)
        case Level(n):
            return prof.level_mass(n)
        case Gens():
            return prof.level_mass(1)
        case Complement(inner):
            return 1 - profile_measure(prof, inner)
        case Union(items) if all(isinstance(B, (Level, Gens)) for B in items):
            ns = {1 if isinstance(B, Gens) else B.n for B in items}
            return sum((prof.level_mass(n) for n in ns), Fraction(0))
    raise ValueError(f"a marginal profile does not determine {A}")


# Route 2: joint signature laws, keyed by (size, in Z, capped T-depth)

def law_of(src: Source, cap: int) -> dict:
    law: dict = {}
    if isinstance(src, SymbolicUniform):
        n = src.level
        total = count_level(n)
        for (z, d), c in signature_counts(n).items():
            key = (n, z, min(d, cap))
            law[key] = law.get(key, 0) + Fraction(c, total)
        return law
    store = src.store
    for term, w in src.items():
        z, d = store.signature(term)
        key = (term.size, z, min(d, cap))
        law[key] = law.get(key, 0) + w
    return law


def convolve_laws(left: dict, right: dict, cap: int) -> dict:
    """Law of a*b for independent a ~ left, b ~ right.

    ``right`` must be capped at least at ``max(cap - 1, largest left size)``
    for the result to be exact up to ``cap``.
    """
    heads: dict = {}
    for (a, za, _), w in left.items():
        heads[(a, za)] = heads.get((a, za), 0) + w
    out: dict = {}
    for (a, za), wa in heads.items():
        for (b, zb, db), wb in right.items():
            key = (a + b, db >= a, 0 if za else min(db + 1, cap))
            out[key] = out.get(key, 0) + wa * wb
    return out


def law_measure(law: dict, A: SetExpr, cap: int | None = None) -> Fraction:
    if not signature_determined(A):
        raise ValueError(f"{A} is not determined by term signatures")
    return sum((w for (n, z, d), w in law.items()
                if member_by_signature(n, z, d, A, cap)), Fraction(0))

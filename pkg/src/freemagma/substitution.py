"""Admissible index sequences and substitution of means into a skeleton term.

``substitute(s, means)`` replaces the k-th leaf of ``s`` (left to right) by
``means[k]`` and evaluates with :func:`convolve`.
:class:`SubstitutionInstance` does the same lazily, so results whose support
would be astronomically large can still be measured exactly through the
summaries in :mod:`freemagma.profiles`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import CapExceeded
from .limits import DEFAULT_MAX_SUPPORT
from .measure import Mean, convolve, fubini_measure, measure_of
from .profiles import (Profile, SymbolicUniform, convolve_laws, convolve_profiles,
                       law_measure, law_of, max_level, profile_measure, profile_of,
                       source_level_masses)
from .sets import SetExpr, max_t_index, signature_determined
from .terms import Term


def is_admissible(s: Term, seq: Sequence[int], offset: int = 0) -> bool:
    """Whether ``seq`` (shifted down by ``offset``) may drive a substitution into s.

    A leaf accepts any single positive value; ``u*v`` with ``size(u) = a``
    accepts the sequence iff its first ``a`` values are admissible for ``u``
    and the remaining values, each lowered by ``a``, are admissible for ``v``.
    """
    if len(seq) != s.size:
        raise ValueError(f"sequence length {len(seq)} != term size {s.size}")
    return _admissible(s, [i - offset for i in seq])


def _admissible(s: Term, seq: list[int]) -> bool:
    parts = s.store.decompose(s)
    if parts is None:
        return seq[0] >= 1
    u, v = parts
    a = u.size
    return _admissible(u, seq[:a]) and _admissible(v, [j - a for j in seq[a:]])


def check_sufficient(m: int, seq: Sequence[int]) -> bool:
    """``seq[0] >= m``: enough for a strictly increasing ``seq`` to be
    admissible for every term of size m."""
    if any(b <= a for a, b in zip(seq, seq[1:])):
        raise ValueError(f"sequence {list(seq)} is not strictly increasing")
    if not seq:
        raise ValueError("empty sequence")
    return seq[0] >= m


def _split(s: Term, items: Sequence):
    parts = s.store.decompose(s)
    a = parts[0].size
    return parts, items[:a], items[a:]


def substitute(s: Term, means: Sequence[Mean], max_support: int = DEFAULT_MAX_SUPPORT) -> Mean:
    if len(means) != s.size:
        raise ValueError(f"{len(means)} means given for a skeleton with {s.size} leaves")
    return _substitute(s, list(means), max_support)


def _substitute(s, means, max_support):
    if s.is_leaf:
        return means[0]
    (u, v), left, right = _split(s, means)
    mu = _substitute(u, left, max_support)
    nu = _substitute(v, right, max_support)
    return convolve(mu, nu, max_support)


def graft(s: Term, terms: Sequence[Term]) -> Term:
    """The term obtained by putting ``terms[k]`` at the k-th leaf of s."""
    if len(terms) != s.size:
        raise ValueError(f"{len(terms)} terms given for a skeleton with {s.size} leaves")
    if s.is_leaf:
        return terms[0]
    (u, v), left, right = _split(s, terms)
    return graft(u, left) * graft(v, right)


@dataclass(frozen=True)
class IndexSeq:
    indices: tuple
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        if not self.indices:
            raise ValueError("index sequence must be nonempty")
        if self.offset < 0:
            raise ValueError("offset must be nonnegative")

    def shifted(self) -> list[int]:
        return [i - self.offset for i in self.indices]

    def __len__(self):
        return len(self.indices)


@dataclass(frozen=True)
class SubstitutionInstance:
    """A skeleton with one source mean per leaf, evaluated on demand."""

    skeleton: Term
    indices: IndexSeq
    sources: tuple
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "sources", tuple(self.sources))
        if len(self.sources) != self.skeleton.size or len(self.indices) != self.skeleton.size:
            raise ValueError("skeleton size, index count and source count must agree")

    @property
    def result_level(self) -> int | None:
        """Sum of the leaf levels when every leaf is single-level, else None."""
        total = 0
        for src in self.sources:
            levels = source_level_masses(src)
            if len(levels) != 1:
                return None
            total += next(iter(levels))
        return total

    def admissible(self) -> bool:
        return is_admissible(self.skeleton, self.indices.indices, self.indices.offset)

    def support_size(self) -> int:
        n = 1
        for src in self.sources:
            n *= src.support_size if isinstance(src, SymbolicUniform) else len(src)
        return n

    def result(self, max_support: int = DEFAULT_MAX_SUPPORT) -> Mean:
        """The materialized mean; CapExceeded when it would be too large."""
        if self.support_size() > max_support:
            raise CapExceeded(f"substitution result support {self.support_size()} "
                              f"exceeds cap {max_support}")
        means = [src.materialize() if isinstance(src, SymbolicUniform) else src
                 for src in self.sources]
        return substitute(self.skeleton, means, max_support)

    def profile(self, cap: int = 0) -> Profile:
        key = ("profile", cap)
        if key not in self._cache:
            self._cache[key] = _tree_profile(self.skeleton, self.sources, cap)
        return self._cache[key]

    def law(self, cap: int = 0) -> dict:
        key = ("law", cap)
        if key not in self._cache:
            self._cache[key] = _tree_law(self.skeleton, self.sources, cap)
        return self._cache[key]

    def measure(self, A: SetExpr, route: str = "profile",
                max_support: int = DEFAULT_MAX_SUPPORT) -> Fraction:
        """Exact mass of A under the result.

        ``route`` is ``"profile"`` (marginal identities), ``"law"`` (joint
        signature pushforward), ``"fubini"`` (materialize both factors of the
        root and sum sections) or ``"direct"`` (materialize the result).
        """
        cap = max_t_index(A)
        if route == "profile":
            return profile_measure(self.profile(cap), A)
        if route == "law":
            if not signature_determined(A):
                raise ValueError(f"{A} is not determined by term signatures")
            return law_measure(self.law(cap), A, cap)
        if route == "direct":
            return measure_of(self.result(max_support), A)
        if route == "fubini":
            if self.skeleton.is_leaf:
                return measure_of(self.result(max_support), A)
            (u, v), left, right = _split(self.skeleton, self.sources)
            lo = SubstitutionInstance(u, IndexSeq(self.indices.indices[:u.size]), left)
            hi = SubstitutionInstance(v, IndexSeq(self.indices.indices[u.size:]), right)
            return fubini_measure(lo.result(max_support), hi.result(max_support), A)
        raise ValueError(f"unknown route {route!r}")


def _tree_max_level(s, sources):
    return sum(max_level(src) for src in sources)


def _tree_profile(s: Term, sources, cap: int) -> Profile:
    if s.is_leaf:
        return profile_of(sources[0], cap)
    (u, v), left, right = _split(s, sources)
    pl = _tree_profile(u, left, 0)
    pr = _tree_profile(v, right, max(cap, _tree_max_level(u, left)))
    return convolve_profiles(pl, pr, cap)


def _tree_law(s: Term, sources, cap: int) -> dict:
    if s.is_leaf:
        return law_of(sources[0], cap)
    (u, v), left, right = _split(s, sources)
    ll = _tree_law(u, left, 0)
    lr = _tree_law(v, right, max(cap, _tree_max_level(u, left)))
    return convolve_laws(ll, lr, cap)

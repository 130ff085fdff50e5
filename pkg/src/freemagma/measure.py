"""Finitely supported means with exact rational weights.

A mean is a probability weighting of finitely many terms.  The product of
two means pushes their product measure through the magma operation; since
the operation is injective, the support of ``convolve(mu, nu)`` is in
bijection with ``supp(mu) x supp(nu)``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import CapExceeded, MeanError, TermSyntaxError
from .limits import DEFAULT_MAX_SUPPORT
from .sets import SetExpr, member
from .terms import Term, TermStore


def parse_rational(text) -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"rational must be a string 'num/den', got {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad rational {text!r}") from None


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


class Mean(Mapping):
    """Immutable term -> weight map; weights positive, total exactly 1."""

    __slots__ = ("store", "_weights", "_hash")

    def __init__(self, weights: Mapping[Term, Fraction], store: TermStore | None = None,
                 *, _trusted=False):
        if not _trusted:
            weights = _validate(weights.items())
        if store is None:
            store = next(iter(weights)).store
        self.store = store
        self._weights = MappingProxyType(dict(weights))
        self._hash = None

    def __getitem__(self, t):
        return self._weights[t]

    def __iter__(self):
        return iter(self._weights)

    def __len__(self):
        return len(self._weights)

    def __eq__(self, other):
        if isinstance(other, Mean):
            return dict(self._weights) == dict(other._weights)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._weights.items()))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{t}: {w}" for t, w in self.sorted_items())
        return f"{type(self).__name__}({{{body}}})"

    def weight(self, t: Term) -> Fraction:
        return self._weights.get(t, Fraction(0))

    @property
    def support(self) -> list[Term]:
        return sorted(self._weights)

    def sorted_items(self):
        return sorted(self._weights.items(), key=lambda kv: (kv[0].size, kv[0].id))

    def level_masses(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for t, w in self._weights.items():
            out[t.size] = out.get(t.size, 0) + w
        return out

    @property
    def level(self) -> int | None:
        """The common size of all support terms, or None if mixed."""
        sizes = {t.size for t in self._weights}
        return sizes.pop() if len(sizes) == 1 else None

    def as_level_mean(self) -> "LevelMean":
        return LevelMean(self._weights, self.store, _trusted=True)


class LevelMean(Mean):
    """A mean concentrated on a single level S_n."""

    __slots__ = ()

    def __init__(self, weights, store=None, *, _trusted=False):
        super().__init__(weights, store, _trusted=_trusted)
        sizes = {t.size for t in self._weights}
        if len(sizes) != 1:
            raise MeanError(f"support spans levels {sorted(sizes)}; expected a single level")

    @property
    def level(self) -> int:
        return next(iter(self._weights)).size


def _validate(items: Iterable[tuple[Term, object]]) -> dict[Term, Fraction]:
    merged: dict[Term, Fraction] = {}
    for i, (t, w) in enumerate(items):
        if not isinstance(t, Term):
            raise MeanError(f"entry {i}: {t!r} is not a term")
        w = Fraction(w)
        if w < 0:
            raise MeanError(f"entry {i} ({t}): negative weight {format_rational(w)}")
        merged[t] = merged.get(t, Fraction(0)) + w
    merged = {t: w for t, w in merged.items() if w}
    total = sum(merged.values(), Fraction(0))
    if total != 1:
        raise MeanError(f"total mass {format_rational(total)} != 1")
    stores = {id(t.store) for t in merged}
    if len(stores) > 1:
        raise MeanError("support terms come from different stores")
    return merged


def from_entries(entries: Iterable[tuple[Term, object]]) -> Mean:
    """Validated mean; duplicates merged, zero weights dropped."""
    weights = _validate(entries)
    mean = Mean(weights, _trusted=True)
    return mean.as_level_mean() if mean.level is not None else mean


def point_mass(t: Term) -> LevelMean:
    return LevelMean({t: Fraction(1)}, t.store, _trusted=True)


def uniform_level(p: int, store: TermStore) -> LevelMean:
    """Equal weight on every term of size p (subject to the enumeration cap)."""
    terms = store.enumerate_level(p)
    w = Fraction(1, len(terms))
    return LevelMean({t: w for t in terms}, store, _trusted=True)


def convolve(mu: Mean, nu: Mean, max_support: int = DEFAULT_MAX_SUPPORT) -> Mean:
    n = len(mu) * len(nu)
    if n > max_support:
        raise CapExceeded(f"convolution support {n} exceeds cap {max_support}")
    store = mu.store
    node = store.node
    weights = {}
    for s, a in mu.sorted_items():
        for t, b in nu.sorted_items():
            weights[node(s, t)] = a * b
    out = Mean(weights, store, _trusted=True)
    if isinstance(mu, LevelMean) and isinstance(nu, LevelMean):
        return out.as_level_mean()
    return out


def measure_of(mu: Mean, A: SetExpr) -> Fraction:
    return sum((w for t, w in mu.items() if member(t, A)), Fraction(0))


def fubini_measure(mu: Mean, nu: Mean, X: SetExpr) -> Fraction:
    """(mu*nu)(X) as the iterated sum over s of mu(s) * nu({t : s*t in X})."""
    node = mu.store.node
    total = Fraction(0)
    for s, a in mu.items():
        section = sum((b for t, b in nu.items() if member(node(s, t), X)), Fraction(0))
        total += a * section
    return total


# Mean documents: a JSON list of {"term": "<term>", "weight": "<num>/<den>"}.

def mean_to_records(mu: Mean) -> list[dict]:
    return [{"term": str(t), "weight": format_rational(w)} for t, w in mu.sorted_items()]


def dumps_mean(mu: Mean) -> str:
    return json.dumps(mean_to_records(mu), indent=2) + "\n"


def mean_from_records(records, store: TermStore, where: str = "mean") -> Mean:
    if isinstance(records, dict) and "mean" in records:
        records = records["mean"]
    if not isinstance(records, list) or not records:
        raise MeanError(f"{where}: expected a nonempty list of records")
    entries = []
    for i, rec in enumerate(records):
        label = f"{where}: record {i}"
        if not isinstance(rec, dict) or set(rec) != {"term", "weight"}:
            raise MeanError(f"{label}: expected keys 'term' and 'weight', got {rec!r}")
        if not isinstance(rec["term"], str):
            raise MeanError(f"{label}: term must be a string, got {rec['term']!r}")
        try:
            t = store.parse(rec["term"])
        except (TermSyntaxError, KeyError) as exc:
            raise MeanError(f"{label} ({rec['term']!r}): {exc}") from None
        try:
            w = parse_rational(rec["weight"])
        except ValueError as exc:
            raise MeanError(f"{label} ({rec['term']}): {exc}") from None
        if w < 0:
            raise MeanError(f"{label} ({rec['term']}): negative weight {rec['weight']}")
        entries.append((t, w))
    try:
        return from_entries(entries)
    except MeanError as exc:
        raise MeanError(f"{where}: {exc}") from None


def loads_mean(text: str, store: TermStore, where: str = "mean") -> Mean:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeanError(f"{where}: not valid JSON ({exc})") from None
    return mean_from_records(data, store, where)


def load_mean(path, store: TermStore) -> Mean:
    with open(path, encoding="utf-8") as fh:
        return loads_mean(fh.read(), store, where=str(path))

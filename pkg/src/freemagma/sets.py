"""Decidable subsets of the free magma and their membership tests.

``Z`` and the ``T(p)`` family are defined by mutual recursion on term size:
every term is in ``T(0)``; ``a*b`` is in ``T(p+1)`` iff ``a`` is outside
``Z`` and ``b`` is in ``T(p)``; ``a*b`` is in ``Z`` iff ``b`` is in
``T(size(a))``.  Because ``T(p+1)`` is contained in ``T(p)``, the whole
family is captured per term by one integer, the largest ``p`` with the term
in ``T(p)``.  The store memoizes that integer (and the ``Z`` flag) per
handle, filling it bottom-up through the kernel.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Tuple

from .errors import TermSyntaxError
from .terms import Term, TermStore


class SetExpr:
    """Base class of the set algebra."""

    def __contains__(self, t: Term) -> bool:
        return member(t, self)

    def __str__(self):
        return format_set(self)


@dataclass(frozen=True)
class Gens(SetExpr):
    pass


@dataclass(frozen=True)
class Level(SetExpr):
    n: int


@dataclass(frozen=True)
class T(SetExpr):
    p: int


@dataclass(frozen=True)
class Z(SetExpr):
    pass


@dataclass(frozen=True)
class Product(SetExpr):
    left: SetExpr
    right: SetExpr


@dataclass(frozen=True)
class Complement(SetExpr):
    inner: SetExpr


@dataclass(frozen=True)
class Union(SetExpr):
    items: Tuple[SetExpr, ...]

    def __init__(self, *items):
        if len(items) == 1 and not isinstance(items[0], SetExpr):
            items = tuple(items[0])
        object.__setattr__(self, "items", tuple(items))


@dataclass(frozen=True)
class Intersection(SetExpr):
    items: Tuple[SetExpr, ...]

    def __init__(self, *items):
        if len(items) == 1 and not isinstance(items[0], SetExpr):
            items = tuple(items[0])
        object.__setattr__(self, "items", tuple(items))


@dataclass(frozen=True)
class FiniteSet(SetExpr):
    terms: frozenset

    def __init__(self, terms):
        object.__setattr__(self, "terms", frozenset(terms))


def in_T(t: Term, p: int) -> bool:
    if p < 0:
        raise ValueError(f"p must be nonnegative, got {p}")
    if p == 0:
        return True
    if t.size <= p:
        return False
    return t.store.signature(t)[1] >= p


def in_Z(t: Term) -> bool:
    return t.store.signature(t)[0]


def t_depth(t: Term) -> int:
    """Largest p with t in T(p)."""
    return t.store.signature(t)[1]


def member(t: Term, A: SetExpr) -> bool:
    match A:
        case Gens():
            return t.is_leaf
        case Level(n):
            return t.size == n
        case T(p):
            return in_T(t, p)
        case Z():
            return in_Z(t)
        case Product(left, right):
            parts = t.store.decompose(t)
            return parts is not None and member(parts[0], left) and member(parts[1], right)
        case Complement(inner):
            return not member(t, inner)
        case Union(items):
            return any(member(t, B) for B in items)
        case Intersection(items):
            return all(member(t, B) for B in items)
        case FiniteSet(terms):
            return t in terms
    raise TypeError(f"not a set expression: {A!r}")


def signature_determined(A: SetExpr) -> bool:
    """True when membership depends only on (size, Z flag, T-depth)."""
    match A:
        case Gens() | Level() | T() | Z():
            return True
        case Complement(inner):
            return signature_determined(inner)
        case Union(items) | Intersection(items):
            return all(signature_determined(B) for B in items)
    return False


def member_by_signature(level: int, z: bool, depth: int, A: SetExpr, depth_cap=None) -> bool:
    """Membership from a term's signature alone.

    ``depth`` may be truncated at ``depth_cap``; asking about ``T(p)`` with
    ``p`` above the cap is an error.
    """
    match A:
        case Gens():
            return level == 1
        case Level(n):
            return level == n
        case T(p):
            if depth_cap is not None and p > depth_cap:
                raise ValueError(f"T({p}) queried above depth cap {depth_cap}")
            return depth >= p
        case Z():
            return z
        case Complement(inner):
            return not member_by_signature(level, z, depth, inner, depth_cap)
        case Union(items):
            return any(member_by_signature(level, z, depth, B, depth_cap) for B in items)
        case Intersection(items):
            return all(member_by_signature(level, z, depth, B, depth_cap) for B in items)
    raise ValueError(f"{format_set(A)} is not determined by term signatures")


def max_t_index(A: SetExpr) -> int:
    """Largest p mentioned as T(p) in A (0 if none)."""
    match A:
        case T(p):
            return p
        case Complement(inner):
            return max_t_index(inner)
        case Union(items) | Intersection(items):
            return max((max_t_index(B) for B in items), default=0)
        case Product(left, right):
            return max(max_t_index(left), max_t_index(right))
    return 0


# text syntax: I, S(n), T(p), Z, prod(A,B), not(A), union(A,...), inter(A,...),
# fin(term, ...)

def format_set(A: SetExpr) -> str:
    match A:
        case Gens():
            return "I"
        case Level(n):
            return f"S({n})"
        case T(p):
            return f"T({p})"
        case Z():
            return "Z"
        case Product(left, right):
            return f"prod({format_set(left)},{format_set(right)})"
        case Complement(inner):
            return f"not({format_set(inner)})"
        case Union(items):
            return "union(" + ",".join(format_set(B) for B in items) + ")"
        case Intersection(items):
            return "inter(" + ",".join(format_set(B) for B in items) + ")"
        case FiniteSet(terms):
            return "fin(" + ",".join(sorted(str(t) for t in terms)) + ")"
    raise TypeError(f"not a set expression: {A!r}")


_SET_TOKEN = re.compile(r"\s*(?:(?P<word>[A-Za-z]+)|(?P<int>\d+)|(?P<sym>[(),]))")


def parse_set(text: str, store: TermStore | None = None) -> SetExpr:
    """Parse the CLI set syntax. ``fin(...)`` needs ``store`` to intern terms."""
    p = _SetParser(text, store)
    expr = p.expr()
    p.skip_ws()
    if p.pos != len(text):
        raise TermSyntaxError(f"trailing input {text[p.pos:]!r}", text, p.pos)
    return expr


class _SetParser:
    def __init__(self, text, store):
        self.text = text
        self.store = store
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def token(self):
        m = _SET_TOKEN.match(self.text, self.pos)
        if m is None:
            self.skip_ws()
            if self.pos >= len(self.text):
                raise TermSyntaxError("unexpected end of input", self.text, self.pos)
            raise TermSyntaxError(f"unexpected character {self.text[self.pos]!r}",
                                  self.text, self.pos)
        start = m.start(m.lastgroup)
        self.pos = m.end()
        return m.lastgroup, m.group(m.lastgroup), start

    def expect(self, sym):
        kind, tok, start = self.token()
        if tok != sym:
            raise TermSyntaxError(f"expected {sym!r}, found {tok!r}", self.text, start)

    def integer(self):
        kind, tok, start = self.token()
        if kind != "int":
            raise TermSyntaxError(f"expected an integer, found {tok!r}", self.text, start)
        return int(tok)

    def args(self):
        self.expect("(")
        items = [self.expr()]
        while True:
            kind, tok, start = self.token()
            if tok == ")":
                return items
            if tok != ",":
                raise TermSyntaxError(f"expected ',' or ')', found {tok!r}", self.text, start)
            items.append(self.expr())

    def expr(self) -> SetExpr:
        kind, tok, start = self.token()
        if tok == "I":
            return Gens()
        if tok == "Z":
            return Z()
        if tok in ("S", "T"):
            self.expect("(")
            n = self.integer()
            self.expect(")")
            if tok == "S":
                if n < 1:
                    raise TermSyntaxError("levels start at 1", self.text, start)
                return Level(n)
            return T(n)
        if tok == "prod":
            items = self.args()
            if len(items) != 2:
                raise TermSyntaxError("prod takes exactly two arguments", self.text, start)
            return Product(*items)
        if tok == "not":
            items = self.args()
            if len(items) != 1:
                raise TermSyntaxError("not takes exactly one argument", self.text, start)
            return Complement(items[0])
        if tok == "union":
            return Union(*self.args())
        if tok == "inter":
            return Intersection(*self.args())
        if tok == "fin":
            return self.finite(start)
        raise TermSyntaxError(f"unknown set constructor {tok!r}", self.text, start)

    def finite(self, start):
        if self.store is None:
            raise TermSyntaxError("fin(...) needs a term store", self.text, start)
        self.expect("(")
        depth, i = 0, self.pos
        chunks, begin = [], i
        while i < len(self.text):
            c = self.text[i]
            if c == "(":
                depth += 1
            elif c == ")":
                if depth == 0:
                    break
                depth -= 1
            elif c == "," and depth == 0:
                chunks.append((begin, self.text[begin:i]))
                begin = i + 1
            i += 1
        else:
            raise TermSyntaxError("unterminated fin(", self.text, start)
        chunks.append((begin, self.text[begin:i]))
        terms = []
        for offset, chunk in chunks:
            if not chunk.strip():
                if len(chunks) == 1:
                    break
                raise TermSyntaxError("empty term in fin(...)", self.text, offset)
            try:
                terms.append(self.store.parse(chunk))
            except TermSyntaxError as exc:
                raise TermSyntaxError(f"bad term in fin(...): {exc}", self.text,
                                      offset + exc.position) from None
        self.pos = i + 1
        return FiniteSet(terms)

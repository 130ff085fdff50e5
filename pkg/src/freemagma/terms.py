"""Interned terms of the free magma over a finite generator set.

Every term lives in a :class:`TermStore` and is identified by an integer
handle; structurally equal terms always share a handle, so equality and
hashing are O(1).  The store is single-writer: concurrent readers are fine,
concurrent calls that may intern new terms must be serialized by the caller.
"""

from __future__ import annotations

import re
from array import array
from functools import lru_cache
from typing import Iterable, Sequence

from . import kernel
from .errors import CapExceeded, TermSyntaxError, UnknownGenerator
from .limits import DEFAULT_MAX_LEVEL


class GeneratorSet:
    """Ordered, duplicate-free generator names."""

    def __init__(self, names: Iterable[str] = ("x",)):
        names = tuple(names)
        if not names:
            raise ValueError("generator set must be nonempty")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for name in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ValueError(f"bad generator name {name!r}")
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}

    @classmethod
    def numbered(cls, k: int) -> "GeneratorSet":
        """``g0, g1, ...``; a single generator is spelled ``x``."""
        if k == 1:
            return cls()
        return cls(f"g{i}" for i in range(k))

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, GeneratorSet) and other.names == self.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"GeneratorSet({list(self.names)!r})"


class Term:
    """Handle to an interned term. Compare and hash by handle."""

    __slots__ = ("store", "id")

    def __init__(self, store: "TermStore", id: int):
        self.store = store
        self.id = id

    @property
    def size(self) -> int:
        return self.store._size[self.id]

    @property
    def is_leaf(self) -> bool:
        return self.store._left[self.id] < 0

    @property
    def left(self) -> "Term | None":
        a = self.store._left[self.id]
        return None if a < 0 else Term(self.store, a)

    @property
    def right(self) -> "Term | None":
        if self.is_leaf:
            return None
        return Term(self.store, self.store._right[self.id])

    @property
    def generator(self) -> int | None:
        return self.store._right[self.id] if self.is_leaf else None

    def __mul__(self, other: "Term") -> "Term":
        return self.store.node(self, other)

    def __eq__(self, other):
        return isinstance(other, Term) and other.id == self.id and other.store is self.store

    def __hash__(self):
        return self.id

    def __lt__(self, other: "Term"):
        return self.id < other.id

    def __str__(self):
        return self.store.format(self)

    def __repr__(self):
        return f"Term({self.store.format(self)!r})"


class TermStore:
    """Hash-consed term table with size, level enumeration and I/O."""

    def __init__(self, generators: GeneratorSet | Sequence[str] | None = None,
                 max_level: int = DEFAULT_MAX_LEVEL, backend=None):
        if generators is None:
            generators = GeneratorSet()
        elif not isinstance(generators, GeneratorSet):
            generators = GeneratorSet(generators)
        self.generators = generators
        self.max_level = max_level
        self.kernel = backend or kernel.active
        self._left = array("q")
        self._right = array("q")
        self._size = array("q")
        self._zflag = array("b")
        self._tdepth = array("q")
        self._nodes: dict[int, int] = {}
        self._levels: dict[int, list[int]] = {}
        for g in range(len(generators)):
            self._left.append(-1)
            self._right.append(g)
            self._size.append(1)
        self._levels[1] = list(range(len(generators)))

    def __len__(self):
        return len(self._left)

    def __repr__(self):
        return f"TermStore({list(self.generators.names)!r}, terms={len(self)})"

    # construction

    def leaf(self, g: int | str = 0) -> Term:
        if isinstance(g, str):
            g = self.generators.index(g)
        if not 0 <= g < len(self.generators):
            raise UnknownGenerator(f"generator index {g} out of range")
        return Term(self, g)

    @property
    def x(self) -> Term:
        return self.leaf(0)

    def node(self, a: Term, b: Term) -> Term:
        if a.store is not self or b.store is not self:
            raise ValueError("terms belong to a different store")
        key = (a.id << 32) | b.id
        h = self._nodes.get(key)
        if h is None:
            h = len(self._left)
            self._nodes[key] = h
            self._left.append(a.id)
            self._right.append(b.id)
            self._size.append(self._size[a.id] + self._size[b.id])
        return Term(self, h)

    def decompose(self, t: Term) -> tuple[Term, Term] | None:
        a = self._left[t.id]
        if a < 0:
            return None
        return Term(self, a), Term(self, self._right[t.id])

    def term(self, h: int) -> Term:
        if not 0 <= h < len(self._left):
            raise IndexError(f"no term with handle {h}")
        return Term(self, h)

    # levels

    def _level_ids(self, n: int) -> list[int]:
        if n < 1:
            raise ValueError(f"level must be >= 1, got {n}")
        if n > self.max_level:
            raise CapExceeded(f"level {n} exceeds the enumeration cap {self.max_level}")
        ids = self._levels.get(n)
        if ids is None:
            ids = []
            for i in range(1, n):
                ids.extend(self.kernel.intern_products(
                    self._nodes, self._left, self._right, self._size,
                    self._level_ids(i), self._level_ids(n - i)))
            self._levels[n] = ids
        return ids

    def enumerate_level(self, n: int) -> list[Term]:
        """All terms of size n, ordered by left-factor level, then left, then right."""
        return [Term(self, h) for h in self._level_ids(n)]

    def count_level(self, n: int) -> int:
        return count_level(n, len(self.generators))

    def right_chain(self, length: int) -> Term:
        """``x*(x*(...*(x*x)))`` with ``length`` leaves."""
        if len(self.generators) != 1:
            raise ValueError("right chains are defined for the one-generator system")
        if length < 1:
            raise ValueError(f"chain length must be >= 1, got {length}")
        x = self.x
        t = x
        for _ in range(length - 1):
            t = self.node(x, t)
        return t

    # classification columns (filled bottom-up by the kernel)

    def signature(self, t: Term) -> tuple[bool, int]:
        """``(t in Z, largest p with t in T_p)``."""
        h = t.id
        if h >= len(self._zflag):
            self.kernel.classify_range(self._left, self._right, self._size,
                                       self._zflag, self._tdepth)
        return bool(self._zflag[h]), self._tdepth[h]

    # text

    def format(self, t: Term) -> str:
        names = self.generators.names
        left, right = self._left, self._right
        out = []
        stack = [t.id]
        while stack:
            item = stack.pop()
            if isinstance(item, str):
                out.append(item)
                continue
            a = left[item]
            if a < 0:
                out.append(names[right[item]])
            else:
                stack.extend((")", right[item], "*", a))
                out.append("(")
        return "".join(out)

    def parse(self, text: str) -> Term:
        return _Parser(self, text).parse()


@lru_cache(maxsize=None)
def _shapes(n: int) -> int:
    if n == 1:
        return 1
    return sum(_shapes(i) * _shapes(n - i) for i in range(1, n))


def count_level(n: int, generators: int = 1) -> int:
    """|S_n| via the product decomposition S_n = U_{i+j=n} S_i * S_j."""
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    for k in range(1, n):  # warm the cache bottom-up; avoids deep recursion
        _shapes(k)
    return _shapes(n) * generators ** n


_TOKEN = re.compile(r"\s*(?:(?P<gen>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[()*]))")


class _Parser:
    def __init__(self, store: TermStore, text: str):
        self.store = store
        self.text = text
        self.tokens = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if m is None:
                rest = text[pos:]
                if rest.strip():
                    col = pos + len(rest) - len(rest.lstrip())
                    raise TermSyntaxError(f"unexpected character {text[col]!r}", text, col)
                break
            start = m.start("gen") if m.group("gen") else m.start("sym")
            self.tokens.append((m.group("gen") or m.group("sym"), start, bool(m.group("gen"))))
            pos = m.end()
        self.i = 0

    def _peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return (None, len(self.text), False)

    def _expect(self, sym):
        tok, pos, _ = self._peek()
        if tok != sym:
            found = "end of input" if tok is None else repr(tok)
            raise TermSyntaxError(f"expected {sym!r}, found {found}", self.text, pos)
        self.i += 1

    def parse(self) -> Term:
        t = self._term()
        tok, pos, _ = self._peek()
        if tok is not None:
            raise TermSyntaxError(f"trailing input {tok!r}", self.text, pos)
        return t

    def _term(self) -> Term:
        # explicit stack: deep right chains would overflow Python recursion
        pending = []  # (left term or None) per open parenthesis
        while True:
            tok, pos, is_gen = self._peek()
            if tok == "(":
                self.i += 1
                pending.append(None)
                continue
            if not is_gen:
                found = "end of input" if tok is None else repr(tok)
                raise TermSyntaxError(f"expected a term, found {found}", self.text, pos)
            try:
                t = self.store.leaf(self.store.generators.index(tok))
            except UnknownGenerator:
                raise UnknownGenerator(f"unknown generator {tok!r} at position {pos}") from None
            self.i += 1
            while True:
                if not pending:
                    return t
                if pending[-1] is None:
                    self._expect("*")
                    pending[-1] = t
                    break
                self._expect(")")
                t = self.store.node(pending.pop(), t)

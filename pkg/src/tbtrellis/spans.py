"""Circular spans (a, l) of Z_n with their partial order.

``l = -1`` is the empty span and ``l = n`` the full span; both ignore ``a``.
For ``0 <= l <= n-1`` the span is the circular interval ``[a, a+l]``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

__all__ = [
    "Span",
    "SpanError",
    "SpanDistribution",
    "all_spans",
    "span_leq",
    "span_lt",
    "immediate_predecessors",
    "strictly_below",
    "spans_of_support",
    "spans_of_word",
    "minimal_spans",
    "minimal_span_of_word",
    "shift_span",
    "parse_span",
]


class SpanError(ValueError):
    pass


@dataclass(frozen=True, order=False)
class Span:
    n: int
    a: int
    l: int

    def __post_init__(self):
        if self.n < 1:
            raise SpanError("span length n must be positive")
        if not -1 <= self.l <= self.n:
            raise SpanError(f"span length {self.l} outside [-1, {self.n}]")
        a = 0 if self.degenerate else self.a % self.n
        object.__setattr__(self, "a", a)

    @classmethod
    def empty(cls, n: int) -> "Span":
        return cls(n, 0, -1)

    @classmethod
    def full(cls, n: int) -> "Span":
        return cls(n, 0, n)

    @property
    def is_empty(self) -> bool:
        return self.l == -1

    @property
    def is_full(self) -> bool:
        return self.l == self.n

    @property
    def degenerate(self) -> bool:
        return self.l in (-1, self.n)

    @property
    def end(self) -> int:
        return (self.a + self.l) % self.n

    def closed(self) -> frozenset[int]:
        """Label positions [a, a+l]."""
        return _closed(self.n, self.a, self.l)

    def half_open(self) -> frozenset[int]:
        """Vertex positions (a, a+l]."""
        return _half_open(self.n, self.a, self.l)

    @property
    def conventional(self) -> bool:
        return span_leq(self, Span(self.n, 0, self.n - 1))

    def sort_key(self) -> tuple[int, int]:
        return (self.l, self.a)

    def __lt__(self, other: "Span") -> bool:
        """Sorting order (l, a); the partial order is ``span_leq``."""
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.is_empty:
            return "empty"
        if self.is_full:
            return "full"
        return f"({self.a},{self.l})"

    __repr__ = __str__


@lru_cache(maxsize=None)
def _closed(n: int, a: int, l: int) -> frozenset[int]:
    if l < 0:
        return frozenset()
    if l >= n:
        return frozenset(range(n))
    return frozenset((a + j) % n for j in range(l + 1))


@lru_cache(maxsize=None)
def _half_open(n: int, a: int, l: int) -> frozenset[int]:
    if l < 0:
        return frozenset()
    if l >= n:
        return frozenset(range(n))
    return frozenset((a + j) % n for j in range(1, l + 1))


def _same_n(s1: Span, s2: Span):
    if s1.n != s2.n:
        raise SpanError(f"spans over different lengths {s1.n} and {s2.n}")


@lru_cache(maxsize=None)
def span_leq(s1: Span, s2: Span) -> bool:
    _same_n(s1, s2)
    n = s1.n
    if s1.l == -1 or s2.l == n:
        return True
    if s2.l == -1 or s1.l == n:
        return False
    if s2.l == n - 1:
        return s1.half_open() <= s2.half_open()
    return s1.l <= s2.l and s1.closed() <= s2.closed()


def span_lt(s1: Span, s2: Span) -> bool:
    return s1 != s2 and span_leq(s1, s2)


@lru_cache(maxsize=None)
def all_spans(n: int) -> tuple[Span, ...]:
    """Every span of Z_n: empty, then (a,l) by increasing l, then full."""
    out = [Span.empty(n)]
    out += [Span(n, a, l) for l in range(n) for a in range(n)]
    out.append(Span.full(n))
    return tuple(out)


@lru_cache(maxsize=None)
def immediate_predecessors(s: Span) -> frozenset[Span]:
    n = s.n
    if s.is_empty:
        return frozenset()
    if s.is_full:
        return frozenset(Span(n, a, n - 1) for a in range(n))
    if s.l == 0:
        return frozenset({Span.empty(n)})
    return frozenset({Span(n, s.a, s.l - 1), Span(n, s.a + 1, s.l - 1)})


@lru_cache(maxsize=None)
def strictly_below(s: Span) -> frozenset[Span]:
    return frozenset(t for t in all_spans(s.n) if t != s and span_leq(t, s))


def spans_of_support(n: int, label_supp: Iterable[int], vertex_supp: Iterable[int] = ()) -> list[Span]:
    """Spans (a,l) with labels inside [a,a+l] and vertices inside (a,a+l]."""
    ls = frozenset(label_supp)
    vs = frozenset(vertex_supp)
    out = []
    if not ls and not vs:
        out.append(Span.empty(n))
    for l in range(n):
        for a in range(n):
            s = Span(n, a, l)
            if ls <= s.closed() and vs <= s.half_open():
                out.append(s)
    out.append(Span.full(n))
    return out


def minimal_spans(spans: Iterable[Span]) -> list[Span]:
    spans = list(spans)
    return sorted(s for s in spans if not any(span_lt(t, s) for t in spans))


def spans_of_word(v) -> list[Span]:
    v = list(v)
    return spans_of_support(len(v), [i for i, x in enumerate(v) if x])


def minimal_span_of_word(v) -> Span | list[Span]:
    """The minimum span of v, or the antichain of its minimal spans."""
    mins = minimal_spans(spans_of_word(v))
    return mins[0] if len(mins) == 1 else mins


def shift_span(s: Span, j: int = 1) -> Span:
    """sigma^j: moves the start point back by j."""
    if s.degenerate:
        return s
    return Span(s.n, s.a - j, s.l)


_SPAN_RE = re.compile(r"^\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")


def parse_span(text: str, n: int) -> Span:
    text = text.strip()
    if text == "empty":
        return Span.empty(n)
    if text == "full":
        return Span.full(n)
    m = _SPAN_RE.match(text)
    if not m:
        raise SpanError(f"cannot parse span {text!r}")
    return Span(n, int(m.group(1)), int(m.group(2)))


class SpanDistribution:
    """Multiset of spans; iteration and printing follow (l, a) order."""

    def __init__(self, n: int, counts: dict[Span, int] | Iterable[Span] = ()):
        self.n = n
        if isinstance(counts, dict):
            c = Counter({s: m for s, m in counts.items() if m})
        else:
            c = Counter(counts)
        for s in c:
            if s.n != n:
                raise SpanError("span over the wrong length in distribution")
            if s.l == 0 and c[s] > 1:
                raise SpanError(f"span {s} of length 0 with multiplicity {c[s]}")
            if c[s] < 0:
                raise SpanError("negative multiplicity")
        self.counts = c

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpanDistribution):
            return NotImplemented
        return self.n == other.n and self.counts == other.counts

    def __hash__(self):
        return hash((self.n, frozenset(self.counts.items())))

    def __iter__(self) -> Iterator[Span]:
        for s in sorted(self.counts):
            for _ in range(self.counts[s]):
                yield s

    def __len__(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, s: Span) -> int:
        return self.counts.get(s, 0)

    def items(self) -> list[tuple[Span, int]]:
        return [(s, self.counts[s]) for s in sorted(self.counts)]

    def support(self) -> list[Span]:
        return sorted(self.counts)

    def positive(self) -> "SpanDistribution":
        """S_+ : the spans of length l > 0."""
        return SpanDistribution(self.n, {s: m for s, m in self.counts.items() if s.l > 0})

    def shifted(self, j: int) -> "SpanDistribution":
        return SpanDistribution(self.n, {shift_span(s, j): m for s, m in self.counts.items()})

    def profile(self) -> list[int]:
        """Vertex dimensions of the product of elementary trellises with these spans."""
        out = [0] * self.n
        for s, m in self.counts.items():
            for i in s.half_open():
                out[i] += m
        return out

    def __str__(self) -> str:
        return "{{" + ",".join(map(str, self)) + "}}"

    __repr__ = __str__

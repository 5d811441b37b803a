"""Brute-force references that only look at explicit vertices and edges."""

from __future__ import annotations

import itertools
import math
from collections import deque

import networkx as nx

from tbtrellis.spans import Span, all_spans, immediate_predecessors
from tbtrellis.trellis_core import RawTrellis, Trellis, to_raw


def _log(x: int, p: int) -> int:
    k = round(math.log(x, p))
    assert p**k == x, (x, p)
    return k


def cycles(T: Trellis) -> list[tuple[tuple, tuple]]:
    return to_raw(T).cycles()


def cycle_vector(verts, labels) -> tuple[int, ...]:
    out = []
    for v, a in zip(verts, labels):
        out += list(v) + [a]
    return tuple(out)


def code(T: Trellis) -> frozenset:
    return frozenset(lab for _, lab in cycles(T))


def _fits(verts, labels, s: Span) -> bool:
    return all(not any(v) or i in s.half_open() for i, v in enumerate(verts)) and all(
        not a or i in s.closed() for i, a in enumerate(labels)
    )


def span_members(T: Trellis, s: Span, cs=None) -> set[tuple]:
    cs = cycles(T) if cs is None else cs
    return {cycle_vector(v, l) for v, l in cs if s.is_full or _fits(v, l, s)}


def _closure(vecs: set[tuple], p: int, length: int) -> set[tuple]:
    out = {tuple([0] * length)}
    for v in vecs:
        new = set(out)
        for x in range(1, p):
            for u in out:
                new.add(tuple((a + x * b) % p for a, b in zip(u, v)))
        out = new
    return out


def span_distribution(T: Trellis) -> dict[Span, int]:
    """m(s) = log|S_s| - log|sum of S_t over immediate predecessors|, by enumeration."""
    p = T.p
    length = sum(T.vdims) + T.n
    cs = cycles(T)
    members = {s: span_members(T, s, cs) for s in all_spans(T.n)}
    out = {}
    for s in all_spans(T.n):
        if s.is_empty:
            continue
        below = set()
        for t in immediate_predecessors(s):
            below |= members[t]
        m = _log(len(members[s]), p) - _log(len(_closure(below, p, length)), p)
        if m:
            out[s] = m
    return out


def is_reduced(T: Trellis) -> bool:
    R = to_raw(T)
    used = set()
    for verts, labels in R.cycles():
        for i in range(R.n):
            used.add((i, verts[i], labels[i], verts[(i + 1) % R.n]))
    return used == set(R.edges)


def raw_digraph(R: RawTrellis) -> nx.MultiDiGraph:
    g = nx.MultiDiGraph()
    for i, vs in enumerate(R.vertices):
        g.add_nodes_from((i, v) for v in vs)
    for (i, v, a, w) in R.edges:
        g.add_edge((i, v), ((i + 1) % R.n, w), label=a)
    return g


def is_connected(T: Trellis) -> bool:
    return nx.is_weakly_connected(raw_digraph(to_raw(T)))


def num_components(T: Trellis) -> int:
    return nx.number_weakly_connected_components(raw_digraph(to_raw(T)))


def paths(R: RawTrellis, i: int, m: int):
    """All length-m paths from V_i as (vertex list, label list)."""
    adj: dict = {}
    for (k, v, a, w) in R.edges:
        adj.setdefault((k, v), []).append((a, w))
    frontier = [([v], []) for v in R.vertices[i % R.n]]
    for step in range(m):
        nxt = []
        for vs, ls in frontier:
            for a, w in adj.get(((i + step) % R.n, vs[-1]), ()):
                nxt.append((vs + [w], ls + [a]))
        frontier = nxt
    return frontier


def fragment_one_to_one(T: Trellis) -> bool:
    R = to_raw(T)
    for i in range(R.n):
        seen = {}
        for vs, ls in paths(R, i, R.n):
            key = tuple(ls)
            if key in seen and seen[key] != vs:
                return False
            seen[key] = vs
    return True


def one_to_one(T: Trellis) -> bool:
    cs = cycles(T)
    return len(cs) == len({l for _, l in cs})


def mergeable(T: Trellis) -> bool:
    """Definition: identifying two vertices of some V_i keeps the code."""
    R = to_raw(T)
    base = frozenset(l for _, l in R.cycles())
    for i, vs in enumerate(R.vertices):
        for v, w in itertools.combinations(vs, 2):
            def f(k, x):
                return v if (k == i and x == w) else x

            edges = frozenset((k, f(k, a), lab, f((k + 1) % R.n, b)) for (k, a, lab, b) in R.edges)
            verts = tuple(tuple(x for x in xs if not (k == i and x == w)) for k, xs in enumerate(R.vertices))
            if frozenset(l for _, l in RawTrellis(R.n, verts, edges).cycles()) == base:
                return True
    return False


def reachable(R: RawTrellis, start: tuple[int, tuple]) -> set:
    """Vertices reachable by directed paths of any length."""
    adj: dict = {}
    for (k, v, a, w) in R.edges:
        adj.setdefault((k, v), set()).add(((k + 1) % R.n, w))
    seen = {start}
    q = deque([start])
    while q:
        u = q.popleft()
        for x in adj.get(u, ()):
            if x not in seen:
                seen.add(x)
                q.append(x)
    return seen


def words_with_span(C_elems, s: Span):
    return [c for c in C_elems if all(not x or i in s.closed() for i, x in enumerate(c))]

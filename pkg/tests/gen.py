"""Seeded random generators for small trellises and codes."""

from __future__ import annotations

import random

import numpy as np

from tbtrellis.field_linalg import Subspace
from tbtrellis.spans import Span
from tbtrellis.trellis_core import (
    DegenerateTrellisError,
    Trellis,
    elementary,
    from_cycle_space,
    product_all,
    relabel,
    trim,
)


def random_word(rng: random.Random, n: int, p: int, density: float = 0.5) -> tuple[int, ...]:
    return tuple(rng.randrange(1, p) if rng.random() < density else 0 for _ in range(n))


def random_span_of(rng: random.Random, word, allow_full: bool = False) -> Span:
    n = len(word)
    options = [Span(n, a, l) for l in range(n) for a in range(n)]
    supp = {i for i, x in enumerate(word) if x}
    options = [s for s in options if supp <= s.closed()]
    if allow_full and rng.random() < 0.1:
        return Span.full(n)
    # favour short spans so that profiles stay small
    options.sort(key=lambda s: s.l)
    cut = max(1, len(options) // 2) if rng.random() < 0.7 else len(options)
    return rng.choice(options[:cut])


def random_factors(rng: random.Random, n: int, p: int, kmax: int = 3, allow_full: bool = False, rmax: int | None = None):
    """Up to kmax factors, at most one (a,0) per a, optional cap on vertex dims."""
    out = []
    zero_at = set()
    prof = [0] * n
    for _ in range(rng.randint(1, kmax)):
        for _attempt in range(20):
            w = random_word(rng, n, p, density=rng.choice([0.2, 0.4, 0.6]))
            if not any(w) and rng.random() < 0.7:
                continue
            s = random_span_of(rng, w, allow_full)
            if s.l == 0 and s.a in zero_at:
                continue
            new = [prof[i] + (1 if i in s.half_open() else 0) for i in range(n)]
            if rmax is not None and max(new) > rmax:
                continue
            if s.l == 0:
                zero_at.add(s.a)
            prof = new
            out.append((w, s))
            break
    if not out:
        w = tuple([0] * n)
        w = (1,) + w[1:]
        out.append((w, Span(n, 0, 0)))
    return out


def random_product(rng: random.Random, n: int, p: int, kmax: int = 3, allow_full: bool = False, rmax: int | None = None) -> Trellis:
    fs = random_factors(rng, n, p, kmax, allow_full, rmax)
    return product_all((elementary(w, s, p) for w, s in fs), n=n, p=p)


def random_invertible(rng: random.Random, r: int, p: int) -> np.ndarray:
    while True:
        m = np.array([[rng.randrange(p) for _ in range(r)] for _ in range(r)], np.int64).reshape(r, r)
        if r == 0 or Subspace.span(m, r, p).dim == r:
            return m


def random_relabel(rng: random.Random, T: Trellis) -> Trellis:
    return relabel(T, [random_invertible(rng, r, T.p) for r in T.vdims])


def random_cycle_trellis(rng: random.Random, n: int, p: int, rmax: int = 2, kmax: int = 3) -> Trellis:
    """T(S) for a random span S of interleaved cycle vectors (always reduced)."""
    vdims = [rng.randint(0, rmax) for _ in range(n)]
    amb = sum(vdims) + n
    k = rng.randint(1, kmax)
    rows = np.array([[rng.randrange(p) for _ in range(amb)] for _ in range(k)], np.int64)
    space = Subspace.span(rows, amb, p)
    return from_cycle_space(space, vdims, p)


def random_trim_trellis(rng: random.Random, n: int, p: int, rmax: int = 2) -> Trellis:
    """Random edge subspaces, trimmed; usually not reduced."""
    while True:
        vdims = [rng.randint(0, rmax) for _ in range(n)]
        edges = []
        for i in range(n):
            amb = vdims[i] + 1 + vdims[(i + 1) % n]
            k = rng.randint(0, amb)
            rows = np.array([[rng.randrange(p) for _ in range(amb)] for _ in range(k)], np.int64).reshape(k, amb)
            edges.append(Subspace.span(rows, amb, p))
        try:
            return trim(Trellis(p, tuple(vdims), tuple(edges)))
        except DegenerateTrellisError:
            continue


def random_code(rng: random.Random, n: int, k: int, p: int) -> Subspace:
    """Random [n,k] code of full support."""
    while True:
        rows = np.array([[rng.randrange(p) for _ in range(n)] for _ in range(k)], np.int64)
        C = Subspace.span(rows, n, p)
        if C.dim == k and all(C.basis[:, j].any() for j in range(n)):
            return C


def random_map_trellis(rng: random.Random, n: int, p: int, r: int) -> Trellis:
    """Each E_i holds the graph of a random map V_i -> V_{i+1} plus up to two
    extra edges out of 0, then trimmed. Often connected yet not reduced."""
    while True:
        edges = []
        for _ in range(n):
            rows = []
            for b in range(r):
                v = [0] * r
                v[b] = 1
                rows.append(v + [rng.randrange(p)] + [rng.randrange(p) for _ in range(r)])
            for _ in range(rng.randint(0, 2)):
                rows.append([0] * r + [rng.randrange(p)] + [rng.randrange(p) for _ in range(r)])
            edges.append(Subspace.span(np.asarray(rows, np.int64).reshape(-1, 2 * r + 1), 2 * r + 1, p))
        try:
            return trim(Trellis(p, tuple([r] * n), tuple(edges)))
        except DegenerateTrellisError:
            continue

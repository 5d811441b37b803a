"""Label codes, span subcodes and product bases.

Cycles are interleaved vectors (v_0, a_0, v_1, a_1, ..., v_{n-1}, a_{n-1}).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .field_linalg import Subspace, solve_kernel, sum_all
from .spans import (
    Span,
    all_spans,
    immediate_predecessors,
    minimal_spans,
    spans_of_support,
)
from .trellis_core import Trellis, TrellisError, cycle_offsets

__all__ = [
    "LabelCode",
    "ProductBasis",
    "NotReducedError",
    "label_code",
    "code_of",
    "span_subcode",
    "sum_below",
    "projected_code",
    "length_subcode",
    "minimum_span",
    "span_length",
    "cycle_spans",
    "is_atomic",
    "product_basis",
    "is_product_basis",
]


class NotReducedError(TrellisError):
    pass


@dataclass(frozen=True, eq=False)
class LabelCode:
    trellis: Trellis
    space: Subspace

    @property
    def offsets(self) -> list[int]:
        return cycle_offsets(self.trellis.vdims)

    def vertex_cols(self, i: int) -> list[int]:
        T = self.trellis
        i %= T.n
        o = self.offsets[i]
        return list(range(o, o + T.vdims[i]))

    def label_col(self, i: int) -> int:
        i %= self.trellis.n
        return self.offsets[i] + self.trellis.vdims[i]

    @property
    def label_cols(self) -> list[int]:
        return [self.label_col(i) for i in range(self.trellis.n)]

    def edge_cols(self, i: int) -> list[int]:
        return self.vertex_cols(i) + [self.label_col(i)] + self.vertex_cols(i + 1)

    @property
    def dim(self) -> int:
        return self.space.dim

    def split(self, lam) -> tuple[list[tuple[int, ...]], tuple[int, ...]]:
        """Vertex tuples and label word of an interleaved cycle."""
        lam = np.asarray(lam, np.int64)
        n = self.trellis.n
        verts = [tuple(lam[self.vertex_cols(i)].tolist()) for i in range(n)]
        labels = tuple(lam[self.label_cols].tolist())
        return verts, labels

    def join(self, verts: Sequence[Sequence[int]], labels: Sequence[int]) -> np.ndarray:
        out = np.zeros(self.space.ambient, np.int64)
        for i in range(self.trellis.n):
            out[self.vertex_cols(i)] = list(verts[i])
            out[self.label_col(i)] = labels[i]
        return out

    def labels_of(self, lam) -> tuple[int, ...]:
        return tuple(np.asarray(lam, np.int64)[self.label_cols].tolist())

    def outside_cols(self, s: Span) -> list[int]:
        T = self.trellis
        lab = s.closed()
        ver = s.half_open()
        cols = []
        for i in range(T.n):
            if i not in ver:
                cols += self.vertex_cols(i)
            if i not in lab:
                cols.append(self.label_col(i))
        return cols

    def shift(self, lam, j: int) -> np.ndarray:
        """beta^j on cycles: block i of the result is block i+j of lam."""
        lam = np.asarray(lam, np.int64)
        T = self.trellis
        parts = []
        for i in range(T.n):
            k = (i + j) % T.n
            parts.append(lam[self.vertex_cols(k) + [self.label_col(k)]])
        return np.concatenate(parts) if parts else lam


@lru_cache(maxsize=512)
def label_code(T: Trellis) -> LabelCode:
    """S(T): solutions of all edge-membership constraints."""
    n, p = T.n, T.p
    offs = cycle_offsets(T.vdims)
    amb = sum(T.vdims) + n
    rows = []
    for i in range(n):
        checks = T.edges[i].perp().basis
        if checks.shape[0] == 0:
            continue
        j = (i + 1) % n
        cols = (
            list(range(offs[i], offs[i] + T.vdims[i]))
            + [offs[i] + T.vdims[i]]
            + list(range(offs[j], offs[j] + T.vdims[j]))
        )
        block = np.zeros((checks.shape[0], amb), np.int64)
        for k, c in enumerate(cols):
            block[:, c] += checks[:, k]
        rows.append(block % p)
    if rows:
        space = solve_kernel(np.vstack(rows), p, ncols=amb)
    else:
        space = Subspace.full(amb, p)
    return LabelCode(T, space)


def code_of(T: Trellis) -> Subspace:
    """C(T): label sequences of all cycles."""
    lc = label_code(T)
    return lc.space.project(lc.label_cols)


@lru_cache(maxsize=20000)
def span_subcode(T: Trellis, s: Span) -> Subspace:
    lc = label_code(T)
    if s.is_full:
        return lc.space
    if s.is_empty:
        return Subspace.zero(lc.space.ambient, T.p)
    return lc.space.vanishing_on(lc.outside_cols(s))


@lru_cache(maxsize=20000)
def sum_below(T: Trellis, s: Span) -> Subspace:
    """S_{<s}: the sum of the subcodes of the immediate predecessors."""
    lc = label_code(T)
    return sum_all((span_subcode(T, t) for t in immediate_predecessors(s)), lc.space.ambient, T.p)


def projected_code(T: Trellis, s: Span) -> Subspace:
    lc = label_code(T)
    return span_subcode(T, s).project(lc.label_cols)


@lru_cache(maxsize=2048)
def length_subcode(T: Trellis, l: int) -> Subspace:
    """S_l: the sum of all span subcodes of length at most l."""
    lc = label_code(T)
    if l < 0:
        return Subspace.zero(lc.space.ambient, T.p)
    if l >= T.n:
        return lc.space
    return sum_all((span_subcode(T, Span(T.n, a, l)) for a in range(T.n)), lc.space.ambient, T.p)


def cycle_spans(T: Trellis, lam) -> list[Span]:
    lc = label_code(T)
    lam = np.asarray(lam, np.int64) % T.p
    vs = [i for i in range(T.n) if lam[lc.vertex_cols(i)].any()]
    ls = [i for i in range(T.n) if lam[lc.label_col(i)]]
    return spans_of_support(T.n, ls, vs)


def minimum_span(T: Trellis, lam) -> Span | list[Span]:
    """[lambda] when it exists, else the antichain of minimal spans."""
    mins = minimal_spans(cycle_spans(T, lam))
    return mins[0] if len(mins) == 1 else mins


def span_length(T: Trellis, lam) -> int:
    return min(s.l for s in cycle_spans(T, lam))


def is_atomic(T: Trellis, lam) -> bool:
    lc = label_code(T)
    lam = np.asarray(lam, np.int64) % T.p
    if not lc.space.contains_vec(lam):
        raise TrellisError("vector is not a cycle of the trellis")
    if not lam.any():
        return False
    ell = span_length(T, lam)
    return not length_subcode(T, ell - 1).contains_vec(lam)


@dataclass(frozen=True)
class ProductBasis:
    trellis: Trellis
    elements: tuple[tuple[tuple[int, ...], Span], ...]

    def vectors(self) -> np.ndarray:
        amb = label_code(self.trellis).space.ambient
        return np.asarray([e for e, _ in self.elements], np.int64).reshape(-1, amb)

    def spans(self) -> list[Span]:
        return [s for _, s in self.elements]

    def factors(self) -> list[tuple[tuple[int, ...], Span]]:
        lc = label_code(self.trellis)
        return [(lc.labels_of(v), s) for v, s in self.elements]

    def __len__(self) -> int:
        return len(self.elements)


def _complement_reps(big: Subspace, small: Subspace) -> list[np.ndarray]:
    """Canonical lifts of a basis of big/small."""
    if big.dim == small.dim:
        return []
    reduced = np.asarray([small.reduce(r) for r in big.basis], np.int64)
    reps = Subspace.span(reduced, big.ambient, big.p)
    return list(reps.basis)


def product_basis(T: Trellis, allow_unreduced: bool = False) -> ProductBasis:
    """Lift bases of S_s/S_{<s} span by span, l ascending then a ascending."""
    if not allow_unreduced:
        from .analysis import is_reduced

        if not is_reduced(T):
            raise NotReducedError("product bases are built for reduced trellises")
    out = []
    for s in all_spans(T.n):
        if s.is_empty:
            continue
        for v in _complement_reps(span_subcode(T, s), sum_below(T, s)):
            ms = minimum_span(T, v)
            if not isinstance(ms, Span) or ms != s:
                raise AssertionError(f"lifted cycle for {s} has minimal spans {ms}")
            out.append((tuple(v.tolist()), s))
    return ProductBasis(T, tuple(out))


def is_product_basis(T: Trellis, vectors) -> bool:
    """Basis whose members with minimum span under s span S_s, for all s."""
    lc = label_code(T)
    vecs = [np.asarray(v, np.int64) % T.p for v in vectors]
    if len(vecs) != lc.dim:
        return False
    amb = lc.space.ambient
    if Subspace.span(np.asarray(vecs).reshape(-1, amb), amb, T.p) != lc.space:
        return False
    mins = []
    for v in vecs:
        m = minimum_span(T, v)
        if not isinstance(m, Span):
            return False
        mins.append(m)
    from .spans import span_leq

    for s in all_spans(T.n):
        sel = [v for v, m in zip(vecs, mins) if span_leq(m, s)]
        got = Subspace.span(np.asarray(sel, np.int64).reshape(-1, amb), amb, T.p)
        if got != span_subcode(T, s):
            return False
    return True

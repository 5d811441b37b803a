"""The linear trellis type and its constructors.

A trellis of length n over GF(p) has vertex spaces V_i = GF(p)^{r_i} and edge
spaces E_i inside GF(p)^{r_i + 1 + r_{i+1}}, written in coordinates
(v, alpha, w).  Vertices are never listed explicitly; everything is answered
by linear algebra on the E_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product as _cartesian
from typing import Iterable, Sequence

import numpy as np

from .field_linalg import LinalgError, Subspace, block_diag, is_prime
from .spans import Span, SpanError

__all__ = [
    "Trellis",
    "RawTrellis",
    "Path",
    "TrellisError",
    "DegenerateTrellisError",
    "elementary",
    "zero_trellis",
    "product",
    "product_all",
    "shift",
    "cover",
    "dual_f2",
    "unlabel",
    "merge",
    "trim",
    "realize_from_labelcode",
    "from_cycle_space",
    "to_raw",
    "relabel",
    "shift_word",
]

RAW_VERTEX_BOUND = 2**12


class TrellisError(ValueError):
    pass


class DegenerateTrellisError(TrellisError):
    pass


@dataclass(frozen=True, eq=False)
class Trellis:
    p: int
    vdims: tuple[int, ...]
    edges: tuple[Subspace, ...]
    _hash: int = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vdims", tuple(int(r) for r in self.vdims))
        object.__setattr__(self, "edges", tuple(self.edges))
        n = len(self.vdims)
        if n < 1:
            raise TrellisError("a trellis needs length at least 1")
        if len(self.edges) != n:
            raise TrellisError("need one edge space per index")
        if not is_prime(self.p):
            raise TrellisError(f"field size {self.p} is not prime")
        for i, e in enumerate(self.edges):
            want = self.vdims[i] + 1 + self.vdims[(i + 1) % n]
            if e.ambient != want or e.p != self.p:
                raise TrellisError(f"edge space {i} lives in dimension {e.ambient}, expected {want}")
        object.__setattr__(self, "_hash", hash((self.p, self.vdims, self.edges)))

    @property
    def n(self) -> int:
        return len(self.vdims)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trellis):
            return NotImplemented
        return self.p == other.p and self.vdims == other.vdims and self.edges == other.edges

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        dims = ",".join(map(str, self.vdims))
        return f"Trellis(p={self.p}, n={self.n}, vdims=[{dims}], |E|=[{','.join(str(e.dim) for e in self.edges)}])"

    # edge-space coordinates ---------------------------------------------
    def r(self, i: int) -> int:
        return self.vdims[i % self.n]

    def vcols(self, i: int) -> list[int]:
        return list(range(self.r(i)))

    def acol(self, i: int) -> int:
        return self.r(i)

    def wcols(self, i: int) -> list[int]:
        base = self.r(i) + 1
        return list(range(base, base + self.r(i + 1)))

    @property
    def state_complexity_profile(self) -> list[int]:
        return [self.p**r for r in self.vdims]

    @property
    def total_vertex_dim(self) -> int:
        return sum(self.vdims)

    def out_space(self, i: int) -> Subspace:
        """Vertices of V_i with an outgoing edge."""
        return self.edges[i % self.n].project(self.vcols(i))

    def in_space(self, i: int) -> Subspace:
        """Vertices of V_i with an incoming edge."""
        j = (i - 1) % self.n
        return self.edges[j].project(self.wcols(j))

    def is_trim(self) -> bool:
        return all(
            self.out_space(i).dim == self.vdims[i] and self.in_space(i).dim == self.vdims[i]
            for i in range(self.n)
        )

    def has_edge(self, i: int, v, alpha: int, w) -> bool:
        vec = np.concatenate([np.asarray(v, np.int64), [alpha], np.asarray(w, np.int64)])
        return self.edges[i % self.n].contains_vec(vec)

    def num_vertices(self) -> int:
        return sum(self.p**r for r in self.vdims)


@dataclass(frozen=True)
class Path:
    start: int
    vertices: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.labels)

    def check(self, T: Trellis) -> bool:
        return len(self.vertices) == self.length + 1 and all(
            T.has_edge(self.start + j, self.vertices[j], self.labels[j], self.vertices[j + 1])
            for j in range(self.length)
        )

    def __str__(self) -> str:
        parts = ["".join(map(str, self.vertices[0])) or "-"]
        for a, v in zip(self.labels, self.vertices[1:]):
            parts.append(f"-{a}->")
            parts.append("".join(map(str, v)) or "-")
        return f"@{self.start}: " + " ".join(parts)


@dataclass(frozen=True)
class RawTrellis:
    """Explicit (possibly nonlinear) trellis: vertex ids and labelled edges."""

    n: int
    vertices: tuple[tuple, ...]
    edges: frozenset  # of (i, v, label, w)

    def out_edges(self, i: int, v) -> list[tuple]:
        return [e for e in self.edges if e[0] == i % self.n and e[1] == v]

    def is_trim(self) -> bool:
        outs = {(e[0], e[1]) for e in self.edges}
        ins = {((e[0] + 1) % self.n, e[3]) for e in self.edges}
        return all((i, v) in outs and (i, v) in ins for i in range(self.n) for v in self.vertices[i])

    def cycles(self) -> list[tuple[tuple, tuple]]:
        """All closed length-n paths as (vertex tuple, label tuple)."""
        adj: dict[tuple[int, object], list[tuple]] = {}
        for (i, v, a, w) in self.edges:
            adj.setdefault((i, v), []).append((a, w))
        out = []

        def walk(i, start, verts, labels):
            if i == self.n:
                if verts[-1] == start:
                    out.append((tuple(verts[:-1]), tuple(labels)))
                return
            for a, w in adj.get((i, verts[-1]), ()):
                walk(i + 1, start, verts + [w], labels + [a])

        for v in self.vertices[0]:
            walk(0, v, [v], [])
        return out


# constructors --------------------------------------------------------------

def zero_trellis(n: int, p: int = 2) -> Trellis:
    return Trellis(p, (0,) * n, tuple(Subspace.zero(1, p) for _ in range(n)))


def _word(alpha, p: int) -> np.ndarray:
    return np.asarray([int(x) for x in alpha], dtype=np.int64) % p


def elementary(alpha, s: Span, p: int = 2) -> Trellis:
    """The elementary trellis alpha|(a,l)."""
    alpha = _word(alpha, p)
    n = len(alpha)
    if s.n != n:
        raise SpanError(f"span over Z_{s.n} for a word of length {n}")
    supp = set(np.flatnonzero(alpha).tolist())
    if s.is_empty:
        if supp:
            raise SpanError("the empty span only fits the zero word")
        return zero_trellis(n, p)
    if not supp <= s.closed():
        raise SpanError(f"{s} is not a span of {''.join(map(str, alpha))}")
    inside = s.half_open()
    vd = tuple(1 if i in inside else 0 for i in range(n))
    edges = []
    for i in range(n):
        row = [1] * vd[i] + [int(alpha[i])] + [1] * vd[(i + 1) % n]
        edges.append(Subspace.span([row], len(row), p))
    return Trellis(p, vd, tuple(edges))


def product(t1: Trellis, t2: Trellis) -> Trellis:
    """Trellis product: vertex spaces concatenate, labels add."""
    if t1.n != t2.n:
        raise TrellisError(f"product of lengths {t1.n} and {t2.n}")
    if t1.p != t2.p:
        raise TrellisError(f"product over GF({t1.p}) and GF({t2.p})")
    n, p = t1.n, t1.p
    vd = tuple(a + b for a, b in zip(t1.vdims, t2.vdims))
    edges = []
    for i in range(n):
        r1, s1 = t1.r(i), t1.r(i + 1)
        r2, s2 = t2.r(i), t2.r(i + 1)
        amb = r1 + r2 + 1 + s1 + s2
        # (v1 v2, a, w1 w2) layout
        cols1 = list(range(r1)) + [r1 + r2] + list(range(r1 + r2 + 1, r1 + r2 + 1 + s1))
        cols2 = list(range(r1, r1 + r2)) + [r1 + r2] + list(range(r1 + r2 + 1 + s1, amb))
        rows = []
        for vec in t1.edges[i].basis:
            row = np.zeros(amb, np.int64)
            row[cols1] = vec
            rows.append(row)
        for vec in t2.edges[i].basis:
            row = np.zeros(amb, np.int64)
            row[cols2] = vec
            rows.append(row)
        edges.append(Subspace.span(np.array(rows, np.int64).reshape(-1, amb), amb, p))
    return Trellis(p, vd, tuple(edges))


def product_all(factors: Iterable[Trellis], n: int | None = None, p: int = 2) -> Trellis:
    out = None
    for t in factors:
        out = t if out is None else product(out, t)
    if out is None:
        if n is None:
            raise TrellisError("empty product needs an explicit length")
        return zero_trellis(n, p)
    return out


def shift(T: Trellis, j: int = 1) -> Trellis:
    """sigma^j(T), with V_i(sigma^j T) = V_{i+j}(T)."""
    n = T.n
    idx = [(i + j) % n for i in range(n)]
    return Trellis(T.p, tuple(T.vdims[k] for k in idx), tuple(T.edges[k] for k in idx))


def shift_word(alpha, j: int = 1) -> tuple[int, ...]:
    """sigma^j on words: (sigma^j alpha)_i = alpha_{i+j}."""
    alpha = list(alpha)
    n = len(alpha)
    return tuple(alpha[(i + j) % n] for i in range(n))


def cover(T: Trellis, i: int) -> Trellis:
    if i < 1:
        raise TrellisError("cover order must be at least 1")
    return Trellis(T.p, T.vdims * i, T.edges * i)


def _restrict_and_recoordinate(T: Trellis, spaces: Sequence[Subspace]) -> Trellis:
    """Keep only vertices in the given subspaces and use pivot coordinates."""
    n, p = T.n, T.p
    edges = []
    for i in range(n):
        e = T.edges[i]
        r, s = T.r(i), T.r(i + 1)
        box = Subspace.span(
            block_diag(spaces[i].basis, np.ones((1, 1), np.int64), spaces[(i + 1) % n].basis),
            r + 1 + s,
            p,
        )
        e = e & box
        keep = list(spaces[i].pivots) + [r] + [r + 1 + c for c in spaces[(i + 1) % n].pivots]
        edges.append(e.project(keep))
    return Trellis(p, tuple(sp.dim for sp in spaces), tuple(edges))


def trim(T):
    """Remove vertices lacking an incoming or outgoing edge, until stable."""
    if isinstance(T, RawTrellis):
        return _trim_raw(T)
    n, p = T.n, T.p
    spaces = [Subspace.full(r, p) for r in T.vdims]
    edges = list(T.edges)
    while True:
        for i in range(n):
            r, s = T.r(i), T.r(i + 1)
            box = Subspace.span(
                block_diag(spaces[i].basis, np.ones((1, 1), np.int64), spaces[(i + 1) % n].basis),
                r + 1 + s,
                p,
            )
            edges[i] = T.edges[i] & box
        new = []
        for i in range(n):
            outs = edges[i].project(T.vcols(i))
            j = (i - 1) % n
            ins = edges[j].project(T.wcols(j))
            new.append(outs & ins)
        if all(a.dim == b.dim for a, b in zip(new, spaces)):
            break
        spaces = new
    return _restrict_and_recoordinate(T, spaces)


def _trim_raw(R: RawTrellis) -> RawTrellis:
    verts = [set(vs) for vs in R.vertices]
    edges = set(R.edges)
    while True:
        edges = {e for e in edges if e[1] in verts[e[0]] and e[3] in verts[(e[0] + 1) % R.n]}
        outs = {(e[0], e[1]) for e in edges}
        ins = {((e[0] + 1) % R.n, e[3]) for e in edges}
        new = [{v for v in verts[i] if (i, v) in outs and (i, v) in ins} for i in range(R.n)]
        if new == verts:
            break
        verts = new
    if not edges:
        raise DegenerateTrellisError("nothing left after trimming")
    vertices = tuple(tuple(v for v in R.vertices[i] if v in verts[i]) for i in range(R.n))
    return RawTrellis(R.n, vertices, frozenset(edges))


def dual_f2(T: Trellis, do_trim: bool = True) -> Trellis:
    """Dual trellis over GF(2): same vertex spaces, E_i replaced by E_i^perp."""
    if T.p != 2:
        raise TrellisError("dual trellises are only constructed over GF(2)")
    d = Trellis(2, T.vdims, tuple(e.perp() for e in T.edges))
    return trim(d) if do_trim else d


def unlabel(T: Trellis) -> Trellis:
    edges = []
    for i, e in enumerate(T.edges):
        m = e.basis.copy()
        m[:, T.acol(i)] = 0
        edges.append(Subspace.span(m, e.ambient, T.p))
    return Trellis(T.p, T.vdims, tuple(edges))


def _quotient_map(d: np.ndarray, p: int) -> np.ndarray:
    """Matrix Q (r x r-1) of v -> coordinates of v mod <d>."""
    r = d.shape[0]
    line = Subspace.span([d], r, p)
    c = line.pivots[0]
    q = np.zeros((r, r - 1), np.int64)
    keep = [j for j in range(r) if j != c]
    for j in range(r):
        e = np.zeros(r, np.int64)
        e[j] = 1
        red = line.reduce(e)
        q[j] = red[keep]
    return q


def merge(T: Trellis, i: int, d) -> Trellis:
    """Quotient V_i by the line <d>, merging each coset into one vertex."""
    n, p = T.n, T.p
    i %= n
    d = np.asarray(d, np.int64) % p
    if d.shape != (T.r(i),) or not d.any():
        raise TrellisError("merge direction must be a nonzero vector of V_i")
    q = _quotient_map(d, p)
    r_new = T.r(i) - 1
    vd = list(T.vdims)
    vd[i] = r_new
    edges = list(T.edges)
    for j in range(n):
        touches_v = j == i
        touches_w = (j + 1) % n == i
        if not (touches_v or touches_w):
            continue
        rv, rw = T.r(j), T.r(j + 1)
        mv = q if touches_v else np.eye(rv, dtype=np.int64)
        mw = q if touches_w else np.eye(rw, dtype=np.int64)
        m = block_diag(mv, np.ones((1, 1), np.int64), mw)
        edges[j] = T.edges[j].image(m)
    return Trellis(p, tuple(vd), tuple(edges))


def relabel(T: Trellis, maps: Sequence[np.ndarray]) -> Trellis:
    """Apply invertible vertex coordinate changes v -> v @ maps[i]."""
    edges = []
    for i, e in enumerate(T.edges):
        m = block_diag(np.asarray(maps[i], np.int64), np.ones((1, 1), np.int64),
                       np.asarray(maps[(i + 1) % T.n], np.int64))
        edges.append(e.image(m))
    return Trellis(T.p, T.vdims, tuple(edges))


# label-code realisations ---------------------------------------------------

def cycle_offsets(vdims: Sequence[int]) -> list[int]:
    """Start of block i in the interleaved layout (v_0, a_0, v_1, a_1, ...)."""
    offs, pos = [], 0
    for r in vdims:
        offs.append(pos)
        pos += r + 1
    return offs


def from_cycle_space(space: Subspace, vdims: Sequence[int], p: int) -> Trellis:
    """T(S): vertex and edge sets are the projections of a cycle space."""
    n = len(vdims)
    offs = cycle_offsets(vdims)
    if space.ambient != sum(vdims) + n:
        raise TrellisError(f"cycle vectors have length {space.ambient}, expected {sum(vdims) + n}")

    def vc(i):
        i %= n
        return list(range(offs[i], offs[i] + vdims[i]))

    vspaces = [space.project(vc(i)) for i in range(n)]
    edges = []
    for i in range(n):
        cols = vc(i) + [offs[i] + vdims[i]] + vc(i + 1)
        e = space.project(cols)
        nxt = vspaces[(i + 1) % n]
        keep = list(vspaces[i].pivots) + [vdims[i]] + [vdims[i] + 1 + c for c in nxt.pivots]
        edges.append(e.project(keep))
    return Trellis(p, tuple(v.dim for v in vspaces), tuple(edges))


def realize_from_labelcode(gens, vdims: Sequence[int], p: int = 2) -> Trellis:
    """The trellis spanned by the given cycles (interleaved vectors)."""
    amb = sum(vdims) + len(vdims)
    gens = list(gens)
    for g in gens:
        if len(g) != amb:
            raise TrellisError(f"cycle of length {len(g)} for vertex dims {list(vdims)}")
    space = Subspace.span(np.asarray(gens, np.int64).reshape(-1, amb), amb, p) if gens else Subspace.zero(amb, p)
    return from_cycle_space(space, vdims, p)


# explicit conversion -------------------------------------------------------

def to_raw(T: Trellis, bound: int = RAW_VERTEX_BOUND) -> RawTrellis:
    for i, r in enumerate(T.vdims):
        if T.p**r > bound:
            raise TrellisError(f"|V_{i}| = {T.p}^{r} exceeds the vertex bound {bound}")
    vertices = tuple(tuple(_cartesian(range(T.p), repeat=r)) for r in T.vdims)
    edges = set()
    for i, e in enumerate(T.edges):
        r = T.r(i)
        for vec in e.elements():
            vals = vec.tolist()
            edges.add((i, tuple(vals[:r]), vals[r], tuple(vals[r + 1 :])))
    return RawTrellis(T.n, vertices, frozenset(edges))

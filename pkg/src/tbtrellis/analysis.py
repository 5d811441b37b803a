"""Structural properties of linear trellises.

Reachability is handled with subspaces: the set of vertices reachable from a
zero vertex is a subspace, and the forward image of a subspace of V_i under
E_i is again a subspace of V_{i+1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import networkx as nx
import numpy as np

from .field_linalg import Subspace, projective_points, solve_kernel
from .label_code import code_of, label_code
from .trellis_core import Path, RawTrellis, Trellis, TrellisError, merge, to_raw

__all__ = [
    "PathSpace",
    "MergeResult",
    "forward",
    "backward",
    "path_space",
    "find_path",
    "is_connected",
    "is_connected_undirected",
    "zero_component",
    "num_components",
    "is_reduced",
    "is_almost_reduced",
    "reduced_by_paths",
    "is_one_to_one",
    "is_biproper",
    "is_pathwise_one_to_one",
    "pathwise_witness",
    "is_fragment_one_to_one",
    "merge_sweep",
    "pair_merge_sweep",
    "raw_code",
    "raw_merge",
    "is_mergeable",
    "is_linearizable",
    "oracle_isomorphic",
    "raw_graph",
]


# one-step images -------------------------------------------------------------

def _box(T: Trellis, i: int, left: Subspace | None, right: Subspace | None) -> Subspace:
    """E_i restricted to v in left and w in right (None = unrestricted)."""
    e = T.edges[i % T.n]
    cols = []
    if left is not None:
        comp = left.perp()
        rows = np.zeros((comp.dim, e.ambient), np.int64)
        rows[:, T.vcols(i)] = comp.basis
        cols.append(rows)
    if right is not None:
        comp = right.perp()
        rows = np.zeros((comp.dim, e.ambient), np.int64)
        rows[:, T.wcols(i)] = comp.basis
        cols.append(rows)
    if not cols:
        return e
    checks = np.vstack(cols)
    if checks.shape[0] == 0:
        return e
    return e & solve_kernel(checks, T.p, ncols=e.ambient)


def forward(T: Trellis, i: int, u: Subspace, zero_labels: bool = False) -> Subspace:
    """Vertices of V_{i+1} reached from u in one step."""
    e = _box(T, i, u, None)
    if zero_labels:
        e = e.vanishing_on([T.acol(i)])
    return e.project(T.wcols(i))


def backward(T: Trellis, i: int, u: Subspace, zero_labels: bool = False) -> Subspace:
    """Vertices of V_i with an edge into u (a subspace of V_{i+1})."""
    e = _box(T, i, None, u)
    if zero_labels:
        e = e.vanishing_on([T.acol(i)])
    return e.project(T.vcols(i))


def _closure(T: Trellis, fwd: bool, bwd: bool) -> list[Subspace]:
    n, p = T.n, T.p
    reach = [Subspace.zero(r, p) for r in T.vdims]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            j = (i + 1) % n
            if fwd:
                new = reach[j] + forward(T, i, reach[i])
                if new.dim != reach[j].dim:
                    reach[j], changed = new, True
            if bwd:
                new = reach[i] + backward(T, i, reach[j])
                if new.dim != reach[i].dim:
                    reach[i], changed = new, True
    return reach


def zero_component(T: Trellis) -> list[Subspace]:
    """Per-index vertices connected (undirected) to the zero vertices."""
    return _closure(T, True, True)


def num_components(T: Trellis, bound: int = 4096) -> int:
    """Components are cosets of the zero component when T is almost reduced.

    Otherwise the vertex graph is searched explicitly.
    """
    if is_almost_reduced(T):
        comp = zero_component(T)
        return T.p ** (T.vdims[0] - comp[0].dim)
    g = nx.Graph()
    R = to_raw(T, bound=bound)
    for i, vs in enumerate(R.vertices):
        g.add_nodes_from((i, v) for v in vs)
    g.add_edges_from(((i, v), ((i + 1) % R.n, w)) for (i, v, _, w) in R.edges)
    return nx.number_connected_components(g)


def is_connected(T: Trellis) -> bool:
    """Directed: every vertex reachable from 0 and reaching 0."""
    fw = _closure(T, True, False)
    bw = _closure(T, False, True)
    return all(a.dim == r and b.dim == r for a, b, r in zip(fw, bw, T.vdims))


def is_connected_undirected(T: Trellis) -> bool:
    return all(c.dim == r for c, r in zip(zero_component(T), T.vdims))


# paths --------------------------------------------------------------------------

@dataclass(frozen=True)
class PathSpace:
    """All paths of length m from V_i, as vectors (v_i, a_i, ..., a_{i+m-1}, v_{i+m})."""

    trellis: Trellis
    start: int
    length: int
    space: Subspace
    offsets: tuple[int, ...]

    def vertex_cols(self, k: int) -> list[int]:
        o = self.offsets[k]
        return list(range(o, o + self.trellis.r(self.start + k)))

    def label_col(self, k: int) -> int:
        return self.offsets[k] + self.trellis.r(self.start + k)

    def to_path(self, vec) -> Path:
        vec = np.asarray(vec, np.int64)
        verts = tuple(tuple(vec[self.vertex_cols(k)].tolist()) for k in range(self.length + 1))
        labels = tuple(int(vec[self.label_col(k)]) for k in range(self.length))
        return Path(self.start % self.trellis.n, verts, labels)


def path_space(T: Trellis, i: int, m: int, zero_labels: bool = False) -> PathSpace:
    offs, pos = [], 0
    for k in range(m + 1):
        offs.append(pos)
        pos += T.r(i + k) + (1 if k < m else 0)
    amb = pos
    rows = []
    for k in range(m):
        checks = T.edges[(i + k) % T.n].perp().basis
        if checks.shape[0]:
            cols = (
                list(range(offs[k], offs[k] + T.r(i + k) + 1))
                + list(range(offs[k + 1], offs[k + 1] + T.r(i + k + 1)))
            )
            block = np.zeros((checks.shape[0], amb), np.int64)
            block[:, cols] = checks
            rows.append(block)
        if zero_labels:
            z = np.zeros((1, amb), np.int64)
            z[0, offs[k] + T.r(i + k)] = 1
            rows.append(z)
    space = solve_kernel(np.vstack(rows), T.p, ncols=amb) if rows else Subspace.full(amb, T.p)
    return PathSpace(T, i, m, space, tuple(offs))


def find_path(T: Trellis, i: int, v, w, m: int) -> Path | None:
    """A path of length m from v in V_i to w in V_{i+m}, if any."""
    ps = path_space(T, i, m)
    cols = ps.vertex_cols(0) + ps.vertex_cols(m)
    vals = list(v) + list(w)
    vec = ps.space.fiber(cols, vals)
    return None if vec is None else ps.to_path(vec)


# reducedness ------------------------------------------------------------------

def is_almost_reduced(T: Trellis) -> bool:
    lc = label_code(T)
    return all(lc.space.project(lc.vertex_cols(i)).dim == T.vdims[i] for i in range(T.n))


def is_reduced(T: Trellis) -> bool:
    lc = label_code(T)
    return all(lc.space.project(lc.edge_cols(i)) == T.edges[i] for i in range(T.n))


def reduced_by_paths(T: Trellis) -> bool:
    """Every vertex reaches 0 and is reached from 0 by paths of length n-1."""
    n, p = T.n, T.p
    for j in range(n):
        u = Subspace.zero(T.r(j), p)
        for k in range(n - 1):
            u = forward(T, j + k, u)
        if u.dim != T.r(j + n - 1):
            return False
        u = Subspace.zero(T.r(j), p)
        for k in range(n - 1):
            u = backward(T, j - k - 1, u)
        if u.dim != T.r(j - n + 1):
            return False
    return True


# one-to-one properties ----------------------------------------------------------

def is_one_to_one(T: Trellis) -> bool:
    return label_code(T).dim == code_of(T).dim


def is_biproper(T: Trellis) -> bool:
    for i, e in enumerate(T.edges):
        if e.vanishing_on(T.vcols(i) + [T.acol(i)]).dim:
            return False
        if e.vanishing_on([T.acol(i)] + T.wcols(i)).dim:
            return False
    return True


def pathwise_witness(T: Trellis, i: int) -> Path | None:
    """A nonzero zero-labelled path of length n from V_i, if one exists."""
    ps = path_space(T, i, T.n, zero_labels=True)
    if ps.space.dim == 0:
        return None
    return ps.to_path(ps.space.basis[-1])


def is_pathwise_one_to_one(T: Trellis, i: int) -> bool:
    return pathwise_witness(T, i) is None


def is_fragment_one_to_one(T: Trellis) -> bool:
    return all(is_pathwise_one_to_one(T, i) for i in range(T.n))


# merging ------------------------------------------------------------------------

@dataclass(frozen=True)
class MergeResult:
    mergeable: bool
    witness: tuple[int, tuple[int, ...]] | None
    method: str

    def __bool__(self) -> bool:
        return self.mergeable


def _directions(r: int, p: int) -> Iterator[np.ndarray]:
    yield from projective_points(r, p)


def merge_sweep(T: Trellis, first_only: bool = False) -> list[tuple[int, tuple[int, ...]]]:
    """All (i, d) whose linear merge leaves the code unchanged."""
    code = code_of(T)
    hits = []
    for i in range(T.n):
        for d in _directions(T.vdims[i], T.p):
            if code_of(merge(T, i, d)) == code:
                hits.append((i, tuple(d.tolist())))
                if first_only:
                    return hits
    return hits


def raw_code(R: RawTrellis) -> frozenset:
    return frozenset(labels for _, labels in R.cycles())


def raw_merge(R: RawTrellis, i: int, v, w) -> RawTrellis:
    """Identify vertex w with v in V_i."""
    i %= R.n

    def fix(k, x):
        return v if (k == i and x == w) else x

    edges = frozenset((k, fix(k, a), lab, fix((k + 1) % R.n, b)) for (k, a, lab, b) in R.edges)
    verts = tuple(tuple(x for x in vs if not (k == i and x == w)) for k, vs in enumerate(R.vertices))
    return RawTrellis(R.n, verts, edges)


def pair_merge_sweep(T: Trellis, first_only: bool = False, bound: int = 64) -> list[tuple[int, tuple, tuple]]:
    """Vertex pairs (i, v, w) whose identification keeps the code."""
    R = to_raw(T, bound=bound)
    code = raw_code(R)
    hits = []
    for i, vs in enumerate(R.vertices):
        for x in range(len(vs)):
            for y in range(x + 1, len(vs)):
                if raw_code(raw_merge(R, i, vs[x], vs[y])) == code:
                    hits.append((i, vs[x], vs[y]))
                    if first_only:
                        return hits
    return hits


def is_mergeable(T: Trellis, want_witness: bool = False) -> MergeResult:
    """Fast criterion on almost reduced one-to-one trellises, pairwise sweep otherwise.

    The witness is a linear merge direction (i, d) in the first case and a
    vertex pair (i, v, w) in the second.
    """
    if is_almost_reduced(T) and is_one_to_one(T):
        ok = is_connected(T) and is_fragment_one_to_one(T)
        wit = None
        if not ok and want_witness:
            found = merge_sweep(T, first_only=True)
            wit = found[0] if found else None
        return MergeResult(not ok, wit, "connected+fragment")
    found = pair_merge_sweep(T, first_only=True)
    return MergeResult(bool(found), found[0] if found else None, "vertex-pair")


# raw trellises --------------------------------------------------------------------

def _is_power(x: int, p: int) -> bool:
    while x > 1 and x % p == 0:
        x //= p
    return x == 1


def is_linearizable(R: RawTrellis, p: int = 2) -> bool:
    """Vertex maps G_i = nu_i o L^{-1} must be compatible with sums and scalars.

    Equivalently, each G_i must have the fibres of a linear map: the words
    sharing the zero word's vertex form a subspace K_i and G_i(c) = G_i(c')
    exactly when c - c' lies in K_i.
    """
    cycles = R.cycles()
    by_label: dict[tuple, tuple] = {}
    for verts, labels in cycles:
        if labels in by_label:
            raise TrellisError("linearizability is decided for one-to-one trellises only")
        by_label[labels] = verts
    words = set(by_label)
    if not _is_power(len(words), p):
        return False
    n = R.n
    zero = (0,) * n
    if zero not in words:
        return False
    for a in words:
        for b in words:
            if tuple((x + y) % p for x, y in zip(a, b)) not in words:
                return False
        for x in range(2, p):
            if tuple((x * y) % p for y in a) not in words:
                return False
    for i in range(n):
        g = {c: by_label[c][i] for c in words}
        kernel = {c for c in words if g[c] == g[zero]}
        for a in words:
            for b in words:
                diff = tuple((x - y) % p for x, y in zip(a, b))
                if (g[a] == g[b]) != (diff in kernel):
                    return False
    return True


def raw_graph(R: RawTrellis, structural: bool = False) -> nx.DiGraph:
    g = nx.DiGraph()
    for i, vs in enumerate(R.vertices):
        for v in vs:
            g.add_node((i, v), idx=i)
    bundle: dict[tuple, list] = {}
    for (i, v, a, w) in R.edges:
        bundle.setdefault(((i, v), ((i + 1) % R.n, w)), []).append(a)
    for (u, w), labels in bundle.items():
        g.add_edge(u, w, tag=len(labels) if structural else tuple(sorted(labels)))
    return g


def oracle_isomorphic(
    R1: RawTrellis, R2: RawTrellis, structural: bool = False, bound: int = 4096
) -> tuple[bool, dict | None]:
    """Brute-force search for per-index vertex bijections preserving edges."""
    if R1.n != R2.n:
        return False, None
    for R in (R1, R2):
        if max(len(vs) for vs in R.vertices) > bound:
            raise TrellisError("vertex bound exceeded for the exhaustive isomorphism search")
    if [len(v) for v in R1.vertices] != [len(v) for v in R2.vertices]:
        return False, None
    if len(R1.edges) != len(R2.edges):
        return False, None
    g1, g2 = raw_graph(R1, structural), raw_graph(R2, structural)
    matcher = nx.algorithms.isomorphism.DiGraphMatcher(
        g1,
        g2,
        node_match=lambda x, y: x["idx"] == y["idx"],
        edge_match=lambda x, y: x["tag"] == y["tag"],
    )
    for mapping in matcher.isomorphisms_iter():
        return True, mapping
    return False, None

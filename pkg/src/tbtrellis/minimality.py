"""Atomic bases, characteristic matrices, KV-trellises and the census of
minimal linear trellises of a code."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product as _cartesian
from typing import Iterable, Sequence

import numpy as np

from .analysis import is_one_to_one, is_reduced
from .field_linalg import Subspace
from .label_code import code_of, label_code, projected_code, sum_below
from .spans import Span, SpanDistribution, immediate_predecessors, shift_span, span_lt
from .trellis_core import Trellis, TrellisError, elementary, product_all, shift_word

__all__ = [
    "AtomicBasis",
    "CharacteristicMatrix",
    "KVTrellis",
    "MinimalShape",
    "CodeError",
    "check_full_support",
    "is_minimal_span_of",
    "atomic_basis",
    "atomic_span_set",
    "minimal_conventional",
    "characteristic_matrix",
    "enumerate_kv_trellises",
    "minimal_shapes",
    "enumerate_minimal_linear",
    "count_minimal_with_shape",
    "shape_is_isolated",
    "kv_shape_classes",
    "count_kv_with_shape",
    "is_kv_trellis",
    "is_minimal_linear",
    "dominates",
]

Row = tuple[tuple[int, ...], Span]

# enumeration guard for "all codewords supported in a span"
REP_ENUM_DIM = 14


class CodeError(TrellisError):
    pass


def check_full_support(C: Subspace):
    if C.dim == 0:
        raise CodeError("the code is zero")
    for j in range(C.ambient):
        if not C.basis[:, j].any():
            raise CodeError(f"the code is identically zero at coordinate {j}")


def _fits(v: Sequence[int], s: Span) -> bool:
    inside = s.closed()
    return all(i in inside for i, x in enumerate(v) if x)


def is_minimal_span_of(v: Sequence[int], s: Span) -> bool:
    """s is a span of v and no immediate predecessor of s is."""
    if not _fits(v, s):
        return False
    return not any(_fits(v, t) for t in immediate_predecessors(s))


def dominates(p1: Sequence[int], p2: Sequence[int]) -> bool:
    """p1 is componentwise at most p2 and strictly smaller somewhere."""
    return all(a <= b for a, b in zip(p1, p2)) and any(a < b for a, b in zip(p1, p2))


# conventional picture -----------------------------------------------------------------

@dataclass(frozen=True)
class AtomicBasis:
    n: int
    p: int
    rows: tuple[Row, ...]

    def spans(self) -> frozenset[Span]:
        return frozenset(s for _, s in self.rows)

    def words(self) -> list[tuple[int, ...]]:
        return [w for w, _ in self.rows]


def _lead(v: np.ndarray) -> int:
    return int(np.flatnonzero(v)[0])


def _tail(v: np.ndarray) -> int:
    return int(np.flatnonzero(v)[-1])


def atomic_basis(C: Subspace) -> AtomicBasis:
    """Minimal-span generator matrix: starts and ends pairwise distinct."""
    check_full_support(C)
    p, n = C.p, C.ambient
    rows = [r.copy() % p for r in C.basis]  # RREF already has distinct starts
    changed = True
    while changed:
        changed = False
        ends: dict[int, int] = {}
        for idx, r in enumerate(rows):
            e = _tail(r)
            if e in ends:
                j = ends[e]
                lo, hi = (idx, j) if _lead(rows[idx]) < _lead(rows[j]) else (j, idx)
                c = (int(rows[lo][e]) * pow(int(rows[hi][e]), -1, p)) % p
                rows[lo] = (rows[lo] - c * rows[hi]) % p
                changed = True
                break
            ends[e] = idx
    out = []
    for r in sorted(rows, key=_lead):
        a, b = _lead(r), _tail(r)
        out.append((tuple(int(x) for x in r), Span(n, a, b - a)))
    return AtomicBasis(n, p, tuple(out))


def atomic_span_set(C: Subspace) -> frozenset[Span]:
    return atomic_basis(C).spans()


def minimal_conventional(C: Subspace) -> Trellis:
    ab = atomic_basis(C)
    return product_all((elementary(w, s, C.p) for w, s in ab.rows), n=C.ambient, p=C.p)


def _shift_code(C: Subspace, j: int) -> Subspace:
    rows = [shift_word(r.tolist(), j) for r in C.basis]
    return Subspace.span(np.asarray(rows, np.int64).reshape(-1, C.ambient), C.ambient, C.p)


# characteristic matrix -------------------------------------------------------------

@dataclass(frozen=True)
class CharacteristicMatrix:
    n: int
    p: int
    rows: tuple[Row, ...]  # sorted by start

    def spans(self) -> list[Span]:
        return [s for _, s in self.rows]

    def word(self, s: Span) -> tuple[int, ...]:
        for w, t in self.rows:
            if t == s:
                return w
        raise KeyError(s)

    def lines(self) -> list[str]:
        from .cli_io import format_factor

        return [format_factor(w, s, self.p) for w, s in self.rows]


def _representative(C: Subspace, s: Span, fallback: tuple[int, ...], rng=None) -> tuple[int, ...]:
    """Lexicographically smallest codeword having s as a minimal span
    (a uniformly random one when ``rng`` is given)."""
    outside = [i for i in range(C.ambient) if i not in s.closed()]
    sub = C.vanishing_on(outside) if outside else C
    if sub.dim > REP_ENUM_DIM:
        return fallback
    valid = []
    for v in sub.elements():
        t = tuple(int(x) for x in v)
        if is_minimal_span_of(t, s):
            valid.append(t)
    if not valid:
        return fallback
    if rng is not None:
        return valid[rng.randrange(len(valid))]
    return min(valid)


def characteristic_matrix(C: Subspace, lexicographic: bool = True, rng=None) -> CharacteristicMatrix:
    """Union over shifts j of sigma^{-j} of the atomic spans of sigma^j(C).

    Representatives are the lexicographically smallest valid codewords, or
    random valid ones when a ``random.Random`` is passed.
    """
    check_full_support(C)
    n, p = C.ambient, C.p
    found: dict[Span, tuple[int, ...]] = {}
    for j in range(n):
        for w, s in atomic_basis(_shift_code(C, j)).rows:
            back = shift_span(s, -j)
            if back not in found:
                found[back] = shift_word(w, -j)
    if lexicographic or rng is not None:
        found = {s: _representative(C, s, w, rng) for s, w in sorted(found.items(), key=lambda r: (r[0].a, r[0].l))}
    rows = tuple((w, s) for s, w in sorted(found.items(), key=lambda r: (r[0].a, r[0].l)))
    starts = {s.a for _, s in rows}
    ends = {s.end for _, s in rows}
    if len(rows) != n or len(starts) != n or len(ends) != n:
        raise AssertionError(f"characteristic span set has {len(rows)} spans for n = {n}")
    for w, s in rows:
        if not is_minimal_span_of(w, s) or not C.contains_vec(w):
            raise AssertionError(f"row {w} does not realize its span {s}")
    return CharacteristicMatrix(n, p, rows)


# KV-trellises ----------------------------------------------------------------------

@dataclass(frozen=True)
class KVTrellis:
    n: int
    p: int
    rows: tuple[Row, ...]

    @property
    def spans(self) -> tuple[Span, ...]:
        return tuple(sorted(s for _, s in self.rows))

    @property
    def profile(self) -> list[int]:
        return SpanDistribution(self.n, list(self.spans)).profile()

    @cached_property
    def trellis(self) -> Trellis:
        return product_all((elementary(w, s, self.p) for w, s in self.rows), n=self.n, p=self.p)

    def lines(self) -> list[str]:
        from .cli_io import format_factor

        return [format_factor(w, s, self.p) for w, s in sorted(self.rows, key=lambda r: (r[1].l, r[1].a, r[0]))]


def _independent(words: Iterable[Sequence[int]], n: int, p: int) -> bool:
    words = list(words)
    if not words:
        return True
    return Subspace.span(np.asarray(words, np.int64), n, p).dim == len(words)


def enumerate_kv_trellises(C: Subspace, chi: CharacteristicMatrix | None = None) -> list[KVTrellis]:
    chi = chi or characteristic_matrix(C)
    k = C.dim
    out = []
    for combo in combinations(chi.rows, k):
        if _independent((w for w, _ in combo), chi.n, chi.p):
            out.append(KVTrellis(chi.n, chi.p, tuple(combo)))
    return out


@dataclass
class MinimalShape:
    spans: tuple[Span, ...]
    profile: list[int]
    trellises: list[KVTrellis] = field(default_factory=list)

    def label(self) -> str:
        return "{" + ",".join(map(str, self.spans)) + "}"


def minimal_shapes(C: Subspace, chi: CharacteristicMatrix | None = None) -> list[KVTrellis]:
    """KV products from one characteristic matrix whose profile is undominated."""
    pool = enumerate_kv_trellises(C, chi)
    profiles = [tuple(t.profile) for t in pool]
    distinct = set(profiles)
    keep = [t for t, pr in zip(pool, profiles) if not any(dominates(o, pr) for o in distinct)]
    return sorted(keep, key=lambda t: [(s.l, s.a) for s in t.spans])


def _sweep_space(chi: CharacteristicMatrix, S: Sequence[Span], s: Span) -> list[tuple[int, ...]]:
    others = [w for w, t in chi.rows if t not in S and span_lt(t, s)]
    n, p = chi.n, chi.p
    if not others:
        return [tuple([0] * n)]
    space = Subspace.span(np.asarray(others, np.int64), n, p)
    return sorted(tuple(int(x) for x in v) for v in space.elements())


def _shape_census(chi: CharacteristicMatrix, S: Sequence[Span]) -> list[KVTrellis]:
    p = chi.p
    per = []
    for s in S:
        base = np.asarray(chi.word(s), np.int64)
        per.append([(tuple(int(x) for x in (base + np.asarray(w)) % p), s) for w in _sweep_space(chi, S, s)])
    return [KVTrellis(chi.n, p, tuple(pick)) for pick in _cartesian(*per)]


def enumerate_minimal_linear(
    C: Subspace, census: bool = True, chi: CharacteristicMatrix | None = None
) -> list[MinimalShape]:
    """Minimal linear trellises of C, grouped by span set."""
    chi = chi or characteristic_matrix(C)
    out = []
    for kv in minimal_shapes(C, chi):
        shape = MinimalShape(kv.spans, kv.profile)
        shape.trellises = _shape_census(chi, kv.spans) if census else [kv]
        out.append(shape)
    return out


def count_minimal_with_shape(C: Subspace, S: Iterable[Span], chi: CharacteristicMatrix | None = None) -> int:
    """q to the number of pairs s' < s with s in S and s' in S(C) outside S."""
    chi = chi or characteristic_matrix(C)
    S = list(S)
    spans = chi.spans()
    if len(S) != C.dim or any(s not in spans for s in S):
        raise CodeError("a shape is a set of k characteristic spans")
    e = sum(1 for s in S for t in spans if t not in S and span_lt(t, s))
    return C.p**e


def shape_is_isolated(C: Subspace, S: Iterable[Span], chi: CharacteristicMatrix | None = None) -> bool:
    """No span of S contains a characteristic span outside S."""
    chi = chi or characteristic_matrix(C)
    S = set(S)
    return not any(span_lt(t, s) for s in S for t in chi.spans() if t not in S)


def kv_shape_classes(C: Subspace, S: Iterable[Span]) -> list[KVTrellis]:
    """Isomorphism classes of KV-trellises with span set S, by brute force.

    Every choice of codewords having the spans of S as minimal spans is
    multiplied out; one representative per isomorphism class is kept.
    """
    from .factorization import isomorphic

    S = sorted(set(S))
    if C.dim > REP_ENUM_DIM:
        raise CodeError("code too large for the brute-force shape sweep")
    words = [tuple(int(x) for x in v) for v in C.elements()]
    per = [[(w, s) for w in words if is_minimal_span_of(w, s)] for s in S]
    reps: list[KVTrellis] = []
    for pick in _cartesian(*per):
        if not _independent((w for w, _ in pick), C.ambient, C.p):
            continue
        kv = KVTrellis(C.ambient, C.p, tuple(pick))
        if code_of(kv.trellis) != C:
            continue
        if not any(isomorphic(kv.trellis, r.trellis) for r in reps):
            reps.append(kv)
    return reps


def count_kv_with_shape(C: Subspace, S: Iterable[Span], assume_remark: bool = False) -> int:
    """Number of KV-trellises for C with span set S, up to isomorphism.

    With ``assume_remark`` an isolated shape is answered with 1 without
    enumeration. The uniqueness claim for KV-trellises is treated as a
    conjecture; the tests compare both routes.
    """
    S = list(S)
    if assume_remark and shape_is_isolated(C, S):
        return 1
    return len(kv_shape_classes(C, S))


# membership tests ------------------------------------------------------------------

def _tight_label(T: Trellis, s: Span) -> tuple[int, ...] | None:
    """A label with minimal span s among the choices for the factor at s."""
    cs = projected_code(T, s)
    ks = sum_below(T, s).project(label_code(T).label_cols)
    if cs.dim > REP_ENUM_DIM:
        raise TrellisError(f"projected code at {s} too large to search")
    best = None
    for v in cs.elements():
        t = tuple(int(x) for x in v)
        if ks.contains_vec(v) or not is_minimal_span_of(t, s):
            continue
        if best is None or t < best:
            best = t
    return best


def is_kv_trellis(T: Trellis, C: Subspace | None = None, strict: bool = False) -> bool:
    from .factorization import isomorphic, span_distribution

    if not is_reduced(T):
        raise TrellisError("the KV test needs a reduced trellis")
    if not is_one_to_one(T):
        return False
    code = code_of(T)
    if C is not None and C != code:
        return False
    chi = characteristic_matrix(code)
    dist = span_distribution(T, check=False)
    if len(dist) != code.dim or any(m != 1 for _, m in dist.items()):
        return False
    allowed = set(chi.spans())
    rows = []
    for s in dist.support():
        if s not in allowed:
            return False
        w = _tight_label(T, s)
        if w is None:
            return False
        rows.append((w, s))
    if not _independent((w for w, _ in rows), T.n, T.p):
        return False
    if strict:
        kv = KVTrellis(T.n, T.p, tuple(rows)).trellis
        if not isomorphic(T, kv):
            raise AssertionError("tight factorization does not multiply back to the trellis")
    return True


def _dominating_subset(chi: CharacteristicMatrix, k: int, target: Sequence[int]) -> tuple[Row, ...] | None:
    """Branch and bound for k independent rows with profile dominating target."""
    n, p = chi.n, chi.p
    rows = list(chi.rows)
    covers = [[1 if i in s.half_open() else 0 for i in range(n)] for _, s in rows]
    goal = sum(target)

    def rec(start, chosen, prof, basis):
        if len(chosen) == k:
            return tuple(rows[j] for j in chosen) if sum(prof) < goal else None
        for j in range(start, len(rows)):
            if len(rows) - j < k - len(chosen):
                return None
            np_ = [a + b for a, b in zip(prof, covers[j])]
            if any(a > b for a, b in zip(np_, target)):
                continue
            w = rows[j][0]
            nb = basis + [w]
            if Subspace.span(np.asarray(nb, np.int64), n, p).dim != len(nb):
                continue
            hit = rec(j + 1, chosen + [j], np_, nb)
            if hit is not None:
                return hit
        return None

    return rec(0, [], [0] * n, [])


def is_minimal_linear(T: Trellis, strict: bool = False) -> bool:
    """No linear trellis for C(T) has a smaller state-complexity profile."""
    if not is_reduced(T) or not is_one_to_one(T):
        return False
    if not is_kv_trellis(T):
        return False
    code = code_of(T)
    chi = characteristic_matrix(code)
    hit = _dominating_subset(chi, code.dim, T.vdims)
    ok = hit is None
    if strict and code.ambient <= 10:
        from .factorization import isomorphic

        members = [kv.trellis for shape in enumerate_minimal_linear(code, chi=chi) for kv in shape.trellises]
        in_census = any(m.vdims == T.vdims and isomorphic(m, T) for m in members)
        if in_census != ok:
            raise AssertionError("profile search and census membership disagree")
    return ok

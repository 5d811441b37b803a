"""Span distributions, elementary factorizations, isomorphism decisions,
multicycle codes and quasi-cyclic structure."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations_with_replacement, product as _cartesian
from typing import Iterable, Sequence

import numpy as np

from .analysis import (
    backward,
    forward,
    is_connected,
    is_fragment_one_to_one,
    is_one_to_one,
    is_reduced,
    num_components,
)
from .field_linalg import Subspace, normalize_scalar, projective_points
from .label_code import (
    NotReducedError,
    ProductBasis,
    code_of,
    is_product_basis,
    label_code,
    product_basis,
    projected_code,
    span_subcode,
    sum_below,
)
from .spans import Span, SpanDistribution, all_spans, shift_span, span_leq
from .trellis_core import (
    Trellis,
    TrellisError,
    cover,
    dual_f2,
    elementary,
    product_all,
    realize_from_labelcode,
    relabel,
    shift,
    shift_word,
    unlabel,
)

__all__ = [
    "ElementaryFactorization",
    "IntersectionProfile",
    "IsoResult",
    "HypothesisError",
    "FactorizationCapExceeded",
    "span_distribution",
    "intersection_profile",
    "span_distribution_graphical",
    "eq5_table",
    "enumerate_factorizations",
    "count_factorizations",
    "closed_form_count",
    "multiply_out",
    "isomorphic",
    "isomorphic_one_to_one",
    "structurally_isomorphic",
    "isomorphism_map",
    "multicycle_code",
    "multicycle_distinguishes",
    "pseudocodewords",
    "is_self_dual",
    "kv_dual_test",
    "is_periodic",
    "periodic_product",
    "periodic_realization",
    "quasicyclic_period",
    "quasicyclic_factorization",
]

DEFAULT_CAP = 10_000


class HypothesisError(TrellisError):
    """An input fails a property the operation requires."""


class FactorizationCapExceeded(TrellisError):
    def __init__(self, count: int, cap: int):
        super().__init__(f"{count} factorizations exceed the enumeration cap {cap}")
        self.count = count
        self.cap = cap


def _require_reduced(*ts: Trellis):
    for T in ts:
        if not is_reduced(T):
            raise NotReducedError("this operation needs a reduced trellis")


def _same_shape(T1: Trellis, T2: Trellis):
    if T1.n != T2.n or T1.p != T2.p:
        raise TrellisError(f"cannot compare trellises of length/field {T1.n}/{T1.p} and {T2.n}/{T2.p}")


# span distributions -----------------------------------------------------------

def span_distribution(T: Trellis, check: bool = True) -> SpanDistribution:
    """m(s) = dim S_s - dim S_{<s} over every nonempty span."""
    if check:
        _require_reduced(T)
    counts = {}
    for s in all_spans(T.n):
        if s.is_empty:
            continue
        m = span_subcode(T, s).dim - sum_below(T, s).dim
        if m:
            counts[s] = m
    return SpanDistribution(T.n, counts)


@dataclass(frozen=True)
class IntersectionProfile:
    n: int
    q: int
    entries: tuple[Counter, ...]  # per start index: meet length -> multiplicity

    def __getitem__(self, a: int) -> Counter:
        return self.entries[a]

    def as_lists(self) -> list[list[float]]:
        return [sorted(c.elements()) for c in self.entries]


def _meet_subspaces(Tb: Trellis, a: int, depth: int) -> list[Subspace]:
    """R_r in V_{a+1}: vertices that reach 0 in V_{a+1+r} in r steps."""
    out = []
    for r in range(depth + 1):
        u = Subspace.zero(Tb.r(a + 1 + r), Tb.p)
        for k in range(r):
            u = backward(Tb, a + r - k, u)
        out.append(u)
    return out


def intersection_profile(T: Trellis, check: bool = True) -> IntersectionProfile:
    """I_a: earliest meeting lengths of paths leaving 0 in V_a along distinct edges."""
    if check:
        _require_reduced(T)
    Tb = unlabel(T)
    q, n = T.p, T.n
    entries = []
    for a in range(n):
        w = forward(Tb, a, Subspace.zero(Tb.r(a), q))
        total = q**w.dim - 1
        seen = 0
        c = Counter()
        for r, rr in enumerate(_meet_subspaces(Tb, a, n - 1)):
            hit = q ** (w & rr).dim - 1
            if hit > seen:
                c[r] = hit - seen
                seen = hit
        if total > seen:
            c[math.inf] = total - seen
        entries.append(c)
    return IntersectionProfile(n, q, tuple(entries))


def _log_q(x: int, q: int) -> int | None:
    k = 0
    while x > 1 and x % q == 0:
        x //= q
        k += 1
    return k if x == 1 else None


def eq5_table(prof: IntersectionProfile, a: int) -> list[tuple[int, int]]:
    """(1 + #entries <= l, exponent) for l = 0..n-1; the left side must be a power of q."""
    rows = []
    acc = 0
    for l in range(prof.n):
        acc += prof[a].get(l, 0)
        lhs = 1 + acc
        e = _log_q(lhs, prof.q)
        if e is None:
            raise TrellisError(f"1 + {acc} is not a power of {prof.q} at start {a}, length {l}")
        rows.append((lhs, e))
    return rows


def span_distribution_graphical(T: Trellis, check: bool = True) -> SpanDistribution:
    """Span distribution from path-meeting data, without span subcodes."""
    if check:
        _require_reduced(T)
    prof = intersection_profile(T, check=False)
    n, q = T.n, T.p
    counts: dict[Span, int] = {}
    for a in range(n):
        if prof[a].get(math.inf):
            raise TrellisError(f"paths from start {a} never meet (infinite entry)")
        prev = 0
        for l, (_, e) in enumerate(eq5_table(prof, a)):
            if e - prev:
                counts[Span(n, a, l)] = e - prev
            prev = e
        e = T.edges[a]
        par = e.vanishing_on(T.vcols(a) + T.wcols(a)).dim
        if par:
            counts[Span(n, a, 0)] = par
    comps = _log_q(num_components(T), q)
    if comps:
        counts[Span.full(n)] = comps
    return SpanDistribution(n, counts)


# factorizations -----------------------------------------------------------------

Factor = tuple[tuple[int, ...], Span]


@dataclass(frozen=True)
class ElementaryFactorization:
    factors: tuple[Factor, ...]

    @classmethod
    def make(cls, factors: Iterable[Factor]) -> "ElementaryFactorization":
        return cls(tuple(sorted(factors, key=lambda f: (f[1].l, f[1].a, f[0]))))

    def spans(self) -> list[Span]:
        return [s for _, s in self.factors]

    def lines(self) -> list[str]:
        from .cli_io import format_factor

        return [format_factor(w, s) for w, s in self.factors]

    def __str__(self) -> str:
        return " x ".join(self.lines())


def multiply_out(factors: Iterable[Factor], n: int, p: int = 2) -> Trellis:
    return product_all((elementary(w, s, p) for w, s in factors), n=n, p=p)


def _span_choices(T: Trellis, s: Span, m: int, cap: int | None) -> list[tuple[tuple[int, ...], ...]]:
    """All multisets of m labels with <labels> + K_s = C_s (up to scalars)."""
    cs = projected_code(T, s)
    lc = label_code(T)
    ks = sum_below(T, s).project(lc.label_cols)
    p = T.p
    cands = [tuple([0] * T.n)]
    for coeff in projective_points(cs.dim, p):
        cands.append(normalize_scalar((coeff @ cs.basis) % p, p))
    cands = sorted(set(cands))
    out = []
    need = cs.dim
    for combo in combinations_with_replacement(cands, m):
        stacked = np.vstack([ks.basis, np.asarray(combo, np.int64)])
        if Subspace.span(stacked, T.n, p).dim == need:
            out.append(combo)
            if cap is not None and len(out) > cap:
                raise FactorizationCapExceeded(len(out), cap)
    return out


def enumerate_factorizations(T: Trellis, cap: int = DEFAULT_CAP) -> list[ElementaryFactorization]:
    _require_reduced(T)
    dist = span_distribution(T, check=False)
    total = count_factorizations(T)
    if total > cap:
        raise FactorizationCapExceeded(total, cap)
    per_span = [[tuple((w, s) for w in combo) for combo in _span_choices(T, s, m, cap)] for s, m in dist.items()]
    out = []
    for pick in _cartesian(*per_span):
        out.append(ElementaryFactorization.make(f for group in pick for f in group))
    return sorted(out, key=lambda f: [(s.l, s.a, w) for w, s in f.factors])


def closed_form_count(T: Trellis) -> int | None:
    """Count for multiplicity-free span distributions; None otherwise."""
    dist = span_distribution(T)
    q = T.p
    total = 1
    lc = label_code(T)
    for s, m in dist.items():
        if m != 1:
            return None
        k = sum_below(T, s).project(lc.label_cols).dim
        if projected_code(T, s).dim == k:
            total *= (q**k + q - 2) // (q - 1)
        else:
            total *= q**k
    return total


def count_factorizations(T: Trellis) -> int:
    _require_reduced(T)
    closed = closed_form_count(T)
    if closed is not None:
        return closed
    total = 1
    for s, m in span_distribution(T, check=False).items():
        total *= len(_span_choices(T, s, m, None))
    return total


def canonical_factorization(T: Trellis) -> ElementaryFactorization:
    pb = product_basis(T)
    return ElementaryFactorization.make((normalize_scalar(w, T.p), s) for w, s in pb.factors())


# isomorphism ----------------------------------------------------------------------

@dataclass(frozen=True)
class IsoResult:
    isomorphic: bool
    witness: Span | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.isomorphic


def isomorphic(T1: Trellis, T2: Trellis, strict: bool = False) -> IsoResult:
    """Equal span-subcode dimensions and projected codes over all spans."""
    _same_shape(T1, T2)
    _require_reduced(T1, T2)
    for s in all_spans(T1.n):
        if span_subcode(T1, s).dim != span_subcode(T2, s).dim:
            res = IsoResult(False, s, "subcode dimension")
            break
        if projected_code(T1, s) != projected_code(T2, s):
            res = IsoResult(False, s, "projected code")
            break
    else:
        res = IsoResult(True)
    if strict and res.isomorphic and isomorphism_map(T1, T2) is None:
        raise AssertionError("span test says isomorphic but no linear isomorphism was built")
    return res


def isomorphic_one_to_one(T1: Trellis, T2: Trellis) -> IsoResult:
    _same_shape(T1, T2)
    _require_reduced(T1, T2)
    if not (is_one_to_one(T1) and is_one_to_one(T2)):
        raise HypothesisError("the projected-code test needs one-to-one trellises")
    for s in all_spans(T1.n):
        if projected_code(T1, s) != projected_code(T2, s):
            return IsoResult(False, s, "projected code")
    return IsoResult(True)


def structurally_isomorphic(T1: Trellis, T2: Trellis) -> bool:
    _same_shape(T1, T2)
    return span_distribution(T1) == span_distribution(T2)


def _match_basis(T2: Trellis, pb: ProductBasis) -> list[np.ndarray] | None:
    """Cycles of T2 carrying the same labels and spans as a product basis of T1."""
    lc1, lc2 = label_code(pb.trellis), label_code(T2)
    chosen: list[np.ndarray] = []
    by_span: dict[Span, list[np.ndarray]] = {}
    for vec, s in pb.elements:
        target = lc1.labels_of(vec)
        sub = span_subcode(T2, s)
        base = sub.fiber(lc2.label_cols, target)
        if base is None:
            return None
        taken = sum_below(T2, s)
        for prev in by_span.get(s, []):
            taken = taken + Subspace.span([prev], taken.ambient, T2.p)
        kernel = sub.vanishing_on(lc2.label_cols)
        pick = None
        for cand in [base] + [(base + k) % T2.p for k in kernel.basis]:
            if not taken.contains_vec(cand):
                pick = cand
                break
        if pick is None:
            return None
        by_span.setdefault(s, []).append(pick)
        chosen.append(pick)
    return chosen


def _maps_from_bases(T1: Trellis, T2: Trellis, b1: Sequence, b2: Sequence) -> list[np.ndarray] | None:
    from .field_linalg import solve_left

    lc1, lc2 = label_code(T1), label_code(T2)
    a1 = np.asarray(b1, np.int64).reshape(-1, lc1.space.ambient)
    a2 = np.asarray(b2, np.int64).reshape(-1, lc2.space.ambient)
    maps = []
    for i in range(T1.n):
        src = a1[:, lc1.vertex_cols(i)]
        dst = a2[:, lc2.vertex_cols(i)]
        r1, r2 = T1.r(i), T2.r(i)
        if r1 != r2:
            return None
        if r1 == 0:
            maps.append(np.zeros((0, 0), np.int64))
            continue
        f = np.zeros((r1, r2), np.int64)
        for j in range(r2):
            col = solve_left(src.T, dst[:, j], T1.p)
            if col is None:
                return None
            f[:, j] = col
        if Subspace.span(f, r2, T1.p).dim != r2:
            return None
        maps.append(f)
    return maps


def isomorphism_map(T1: Trellis, T2: Trellis, period: int | None = None) -> list[np.ndarray] | None:
    """Explicit vertex maps f_i with relabel(T1, f) == T2, or None.

    With ``period`` m both trellises must repeat with period m, and the maps
    are built from orbit-closed product bases so that f_i = f_{i+m}.
    """
    _same_shape(T1, T2)
    pb = product_basis(T1, allow_unreduced=True)
    if period is None:
        b2 = _match_basis(T2, pb)
        if b2 is None:
            return None
        b1 = [np.asarray(v, np.int64) for v, _ in pb.elements]
    else:
        for T in (T1, T2):
            if not is_periodic(T, period):
                raise HypothesisError(f"trellis does not repeat with period {period}")
        seed = ProductBasis(T1, tuple((v, s) for v, s in pb.elements if s.a < period and not s.degenerate))
        if any(s.degenerate for _, s in pb.elements):
            raise HypothesisError("periodic maps need a connected trellis")
        b2seed = _match_basis(T2, seed)
        if b2seed is None:
            return None
        lc1, lc2 = label_code(T1), label_code(T2)
        b1, b2 = [], []
        for j in range(T1.n // period):
            for (v, _), v2 in zip(seed.elements, b2seed):
                b1.append(lc1.shift(v, j * period))
                b2.append(lc2.shift(v2, j * period))
    maps = _maps_from_bases(T1, T2, b1, b2)
    if maps is None or relabel(T1, maps) != T2:
        return None
    return maps


# multicycles --------------------------------------------------------------------

def multicycle_code(T: Trellis, i: int) -> Subspace:
    if i < 1:
        raise TrellisError("multicycle order must be at least 1")
    return code_of(cover(T, i))


def _check_classification_hypotheses(T: Trellis):
    if not is_reduced(T):
        raise HypothesisError("trellis is not reduced")
    if not is_connected(T):
        raise HypothesisError("trellis is not connected")
    if not is_fragment_one_to_one(T):
        raise HypothesisError("trellis is not fragment one-to-one")


def multicycle_distinguishes(T1: Trellis, T2: Trellis, i: int, strict: bool = False) -> bool:
    """Whether C^i(T1) = C^i(T2); under the hypotheses equality forces isomorphism."""
    if i < 2:
        raise TrellisError("use i > 1")
    _same_shape(T1, T2)
    _check_classification_hypotheses(T1)
    _check_classification_hypotheses(T2)
    same = multicycle_code(T1, i) == multicycle_code(T2, i)
    if strict and same and not isomorphic(T1, T2):
        raise AssertionError("equal multicycle codes for non-isomorphic trellises")
    return same


def pseudocodewords(T: Trellis, i: int) -> set[tuple[int, ...]]:
    """Fold the i blocks of each codeword of C^i(T) by integer addition."""
    if T.p != 2:
        raise TrellisError("pseudocodewords are extracted over GF(2) only")
    code = multicycle_code(T, i)
    n = T.n
    out = set()
    for c in code.elements():
        out.add(tuple(c.reshape(i, n).sum(axis=0).tolist()))
    return out


# duality ------------------------------------------------------------------------

def is_self_dual(T: Trellis) -> IsoResult:
    if T.p != 2:
        raise TrellisError("duals are only constructed over GF(2)")
    _require_reduced(T)
    D = dual_f2(T)
    if D.vdims != T.vdims and sorted(D.vdims) != sorted(T.vdims):
        return IsoResult(False, None, "vertex dimensions differ")
    if not is_reduced(D):
        return IsoResult(False, None, "dual is not reduced")
    return isomorphic(T, D)


def kv_dual_test(T: Trellis, T2: Trellis, i: int) -> bool:
    from .minimality import is_kv_trellis

    if i < 2:
        raise TrellisError("use i > 1")
    for t in (T, T2):
        if not is_kv_trellis(t):
            raise HypothesisError("both trellises must be KV-trellises")
    return multicycle_code(T, i).perp() == multicycle_code(T2, i)


# quasi-cyclic structure -------------------------------------------------------------

def is_periodic(T: Trellis, m: int) -> bool:
    if m < 1 or T.n % m:
        return False
    return all(T.vdims[i] == T.vdims[(i + m) % T.n] and T.edges[i] == T.edges[(i + m) % T.n] for i in range(T.n))


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def periodic_product(seed: Sequence[Factor], n: int, m: int, p: int = 2) -> Trellis:
    """The product of sigma^{jm} of the seed factors, coordinatized so that it
    literally repeats with period m."""
    if m < 1 or n % m:
        raise TrellisError(f"period {m} does not divide {n}")
    reps = n // m
    active = []
    for i in range(n):
        keys = sorted(
            (f, (i + j * m) % n)
            for f, (_, s) in enumerate(seed)
            for j in range(reps)
            if (i + j * m) % n in s.half_open()
        )
        active.append(keys)
    vdims = [len(k) for k in active]
    gens = []
    for f, (w, s) in enumerate(seed):
        for j in range(reps):
            word = shift_word(w, j * m)
            verts = []
            for i in range(n):
                v = [0] * vdims[i]
                key = (f, (i + j * m) % n)
                if key[1] in s.half_open():
                    v[active[i].index(key)] = 1
                verts.append(v)
            cyc: list[int] = []
            for i in range(n):
                cyc += verts[i] + [int(word[i]) % p]
            gens.append(cyc)
    return realize_from_labelcode(gens, vdims, p)


def periodic_realization(T: Trellis, m: int) -> Trellis | None:
    """A literally m-periodic trellis isomorphic to T, or None."""
    _require_reduced(T)
    if m < 1 or T.n % m:
        return None
    dist = span_distribution(T, check=False)
    if dist.shifted(m) != dist:
        return None
    seed = [f for f in product_basis(T).factors() if not f[1].degenerate and f[1].a < m]
    if any(f[1].degenerate for f in product_basis(T).factors()):
        raise HypothesisError("periodic realizations need a connected trellis")
    cand = periodic_product(seed, T.n, m, T.p)
    if cand.vdims != T.vdims or not is_reduced(cand):
        return None
    return cand if isomorphic(T, cand) else None


def quasicyclic_period(T: Trellis) -> int:
    """Smallest m dividing n with T isomorphic to an m-periodic trellis."""
    _require_reduced(T)
    if not is_connected(T):
        raise HypothesisError("period detection needs a connected trellis")
    for m in _divisors(T.n):
        if periodic_realization(T, m) is not None:
            return m
    raise AssertionError("every trellis is n-periodic")


def quasicyclic_factorization(T: Trellis, m: int) -> list[list[tuple[tuple[int, ...], Factor]]]:
    """sigma^m-orbits of a product basis, as lists of (cycle, (codeword, span))."""
    if not is_periodic(T, m):
        raise HypothesisError(f"trellis is not literally {m}-periodic; normalise it with periodic_realization first")
    _require_reduced(T)
    if not is_connected(T):
        raise HypothesisError("quasi-cyclic factorization needs a connected trellis")
    lc = label_code(T)
    pb = product_basis(T)
    orbits = []
    for v, s in pb.elements:
        if s.a >= m:
            continue
        orbit = []
        for j in range(T.n // m):
            cyc = lc.shift(v, j * m)
            orbit.append((tuple(cyc.tolist()), (lc.labels_of(cyc), shift_span(s, j * m))))
        orbits.append(orbit)
    return orbits

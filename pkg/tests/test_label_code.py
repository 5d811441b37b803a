import itertools
import random

import numpy as np
import pytest

from gen import random_cycle_trellis, random_product
import oracles
from tbtrellis.catalog import hasse_example, two_cycle_example, two_factorization_example
from tbtrellis.field_linalg import Subspace, sum_all
from tbtrellis.label_code import (
    NotReducedError,
    code_of,
    is_atomic,
    is_product_basis,
    label_code,
    minimum_span,
    product_basis,
    projected_code,
    span_subcode,
    sum_below,
)
from tbtrellis.spans import Span, all_spans, span_leq, strictly_below
from tbtrellis.catalog import swap_connected
from tbtrellis.trellis_core import TrellisError

SEED = 7


def _cases(p, count=30):
    rng = random.Random(SEED + p)
    out = []
    for _ in range(count):
        n = rng.randint(2, 5)
        if rng.random() < 0.5:
            out.append(random_product(rng, n, p, kmax=3, rmax=2))
        else:
            out.append(random_cycle_trellis(rng, n, p, rmax=2))
    return out


@pytest.mark.parametrize("p", [2, 3])
def test_span_subcodes_match_enumeration(p):
    for T in _cases(p):
        for s in all_spans(T.n):
            assert span_subcode(T, s).frozen_elements == oracles.span_members(T, s)


@pytest.mark.parametrize("p", [2, 3])
def test_monotone(p):
    for T in _cases(p, 20):
        sp = all_spans(T.n)
        for s, t in itertools.product(sp, sp):
            if span_leq(s, t):
                assert span_subcode(T, t).contains(span_subcode(T, s))


@pytest.mark.parametrize("p", [2, 3])
def test_intersection_with_incomparable_family(p):
    """S_s meets a sum of subcodes at spans not above s only inside S_{<s}."""
    rng = random.Random(SEED * 11 + p)
    for T in _cases(p, 25):
        sp = [s for s in all_spans(T.n) if not s.is_empty and not s.is_full]
        amb = label_code(T).space.ambient
        for _ in range(10):
            s = rng.choice(sp)
            fam = [t for t in sp if not span_leq(s, t)]
            fam = rng.sample(fam, min(len(fam), rng.randint(1, 3)))
            total = sum_all((span_subcode(T, t) for t in fam), amb, p)
            assert sum_below(T, s).contains(span_subcode(T, s) & total)


def test_sum_below_matches_strict_down_set():
    T = two_factorization_example()
    lc = label_code(T)
    for s in all_spans(T.n):
        if s.is_empty:
            continue
        full = sum_all((span_subcode(T, t) for t in strictly_below(s)), lc.space.ambient, 2)
        assert full == sum_below(T, s)


def test_worked_projected_codes():
    T = two_factorization_example()
    assert projected_code(T, Span(5, 1, 2)) == Subspace.span([[0, 1, 0, 1, 0]], 5, 2)
    w = Subspace.span([[0, 1, 0, 1, 1]], 5, 2)
    assert projected_code(T, Span(5, 3, 3)) == w


def test_hasse_dims():
    T = hasse_example()
    dims = {s: span_subcode(T, s).dim for s in all_spans(3)}
    assert dims[Span(3, 0, 0)] == 1
    assert dims[Span(3, 0, 1)] == 2
    assert dims[Span(3, 1, 1)] == 1
    assert dims[Span.full(3)] == 3


def test_code_of():
    T = two_cycle_example()
    assert code_of(T).frozen_elements == oracles.code(T)


def test_product_basis_property():
    for p in (2, 3):
        for T in _cases(p, 30):
            pb = product_basis(T)
            assert is_product_basis(T, pb.vectors())
            for v, s in pb.elements:
                assert minimum_span(T, v) == s
                assert is_atomic(T, v)


def test_product_basis_needs_reduced():
    with pytest.raises(NotReducedError):
        product_basis(swap_connected())
    T = two_cycle_example()
    with pytest.raises(TrellisError):
        bad = np.zeros(label_code(T).space.ambient, np.int64)
        bad[label_code(T).label_col(0)] = 1
        assert not label_code(T).space.contains_vec(bad)
        is_atomic(T, bad)

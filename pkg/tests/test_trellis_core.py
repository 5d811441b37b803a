import random

import numpy as np
import pytest

from gen import random_factors, random_product, random_trim_trellis
import oracles
from tbtrellis.analysis import is_one_to_one, is_reduced
from tbtrellis.catalog import swap_loop, toy_code, two_factorization_example
from tbtrellis.factorization import isomorphic
from tbtrellis.label_code import code_of
from tbtrellis.minimality import enumerate_minimal_linear
from tbtrellis.spans import Span, SpanError
from tbtrellis.trellis_core import (
    Trellis,
    TrellisError,
    cover,
    dual_f2,
    elementary,
    merge,
    product,
    product_all,
    shift,
    shift_word,
    to_raw,
    trim,
    unlabel,
    zero_trellis,
)

SEED = 20261014


def test_elementary_shape():
    T = elementary("01011", Span(5, 3, 4))
    assert T.vdims == (1, 1, 1, 0, 1)
    assert oracles.code(T) == {(0, 0, 0, 0, 0), (0, 1, 0, 1, 1)}
    with pytest.raises(SpanError):
        elementary("01011", Span(5, 1, 2))


def test_elementary_properties_exhaustive():
    n = 4
    for p in (2, 3):
        rng = random.Random(p)
        for _ in range(60):
            w = tuple(rng.randrange(p) if rng.random() < 0.5 else 0 for _ in range(n))
            supp = {i for i, x in enumerate(w) if x}
            for l in range(n):
                for a in range(n):
                    s = Span(n, a, l)
                    if not supp <= s.closed():
                        continue
                    T = elementary(w, s, p)
                    assert is_reduced(T) and oracles.is_reduced(T)
                    # the zero word on a length-0 span is the trivial trellis
                    expect = bool(supp) or l == 0
                    assert is_one_to_one(T) == expect == oracles.one_to_one(T)


@pytest.mark.parametrize("p", [2, 3])
def test_product_code_is_sum(p):
    rng = random.Random(SEED + p)
    for _ in range(50):
        n = rng.randint(2, 5)
        T1 = random_product(rng, n, p, kmax=2, rmax=2)
        T2 = random_product(rng, n, p, kmax=2, rmax=2)
        assert code_of(product(T1, T2)) == code_of(T1) + code_of(T2)


@pytest.mark.parametrize("p", [2, 3])
def test_product_commutative_associative(p):
    rng = random.Random(SEED * 3 + p)
    for _ in range(40):
        n = rng.randint(2, 5)
        A, B, C = (random_product(rng, n, p, kmax=1, rmax=2) for _ in range(3))
        assert isomorphic(product(A, B), product(B, A))
        assert isomorphic(product(product(A, B), C), product(A, product(B, C)))


def test_double_dual_of_minimal():
    for shape in enumerate_minimal_linear(toy_code()):
        for kv in shape.trellises:
            T = kv.trellis
            assert dual_f2(dual_f2(T)) == T
            D = dual_f2(T)
            assert code_of(D) == code_of(T).perp()


def test_dual_code_random():
    rng = random.Random(SEED)
    for _ in range(60):
        T = random_product(rng, rng.randint(2, 5), 2, kmax=3, rmax=2)
        assert oracles.code(dual_f2(T)) == code_of(T).perp().frozen_elements


def test_shift_and_cover():
    T = two_factorization_example()
    S = shift(T, 2)
    assert S.vdims == T.vdims[2:] + T.vdims[:2]
    assert oracles.code(S) == {shift_word(c, 2) for c in oracles.code(T)}
    C2 = cover(T, 2)
    assert C2.n == 10
    cw = oracles.code(C2)
    assert {c + c for c in oracles.code(T)} <= cw


def test_trim_removes_dead_vertices():
    rng = random.Random(SEED)
    for _ in range(80):
        T = random_trim_trellis(rng, rng.randint(1, 4), rng.choice([2, 3]))
        assert T.is_trim() and to_raw(T).is_trim()
        assert trim(T) == T


def test_unlabel_and_zero():
    T = unlabel(two_factorization_example())
    assert oracles.code(T) == {(0,) * 5}
    Z = zero_trellis(3)
    assert Z.vdims == (0, 0, 0)
    assert len(oracles.cycles(Z)) == 1


def test_merge_identifies_cosets():
    T = swap_loop()
    M = merge(T, 0, [1, 1])
    assert M.vdims == (1,)
    with pytest.raises(TrellisError):
        merge(T, 0, [0, 0])


def test_product_rejects_mismatch():
    with pytest.raises(TrellisError):
        product(elementary("11", Span(2, 0, 1)), elementary("111", Span(3, 0, 2)))
    with pytest.raises(TrellisError):
        product_all([])

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tbtrellis.field_linalg import (
    Field,
    LinalgError,
    Subspace,
    normalize_scalar,
    projective_points,
    rref,
    solve_kernel,
    solve_left,
)


def _elements(rows, n, p):
    """Span by set closure, independent of row reduction."""
    out = {tuple([0] * n)}
    for r in rows:
        out = {tuple((u[j] + c * r[j]) % p for j in range(n)) for u in out for c in range(p)}
    return out


@st.composite
def row_sets(draw, p=None):
    p = p or draw(st.sampled_from([2, 3]))
    n = draw(st.integers(1, 6))
    k = draw(st.integers(0, 4))
    rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=k, max_size=k))
    return p, n, rows


def test_field_inverse():
    F = Field(7)
    assert all(x * F.inv(x) % 7 == 1 for x in range(1, 7))
    with pytest.raises(LinalgError):
        Field(6)


@given(row_sets())
def test_rref_is_canonical(data):
    p, n, rows = data
    S = rref(rows, n, p) if rows else Subspace.zero(n, p)
    assert S.frozen_elements == frozenset(_elements(rows, n, p))
    # any other generating set of the same space reduces to the same form
    rng = random.Random(len(rows) * 31 + n)
    mixed = []
    for _ in range(len(rows) + 2):
        cs = [rng.randrange(p) for _ in rows]
        mixed.append([sum(c * r[j] for c, r in zip(cs, rows)) % p for j in range(n)])
    mixed += rows
    assert rref(mixed, n, p) == S


@given(row_sets(), row_sets())
def test_dimension_formula(d1, d2):
    p, n, r1 = d1
    _, _, r2 = d2
    r2 = [(r + [0] * n)[:n] for r in r2]
    r2 = [[x % p for x in r] for r in r2]
    A = rref(r1, n, p) if r1 else Subspace.zero(n, p)
    B = rref(r2, n, p) if r2 else Subspace.zero(n, p)
    assert (A + B).dim + (A & B).dim == A.dim + B.dim
    assert (A & B).frozen_elements == A.frozen_elements & B.frozen_elements


@given(row_sets())
def test_kernel_annihilates(data):
    p, n, rows = data
    if not rows:
        return
    K = solve_kernel(np.asarray(rows, np.int64), p)
    M = np.asarray(rows, np.int64)
    assert not ((M @ K.basis.T) % p).any()
    assert K.dim == n - rref(rows, n, p).dim


def test_solve_left():
    a = np.array([[1, 0, 1], [0, 1, 1]])
    c = solve_left(a, [1, 1, 0], 2)
    assert (c @ a % 2 == [1, 1, 0]).all()
    assert solve_left(a, [0, 0, 1], 2) is None


def test_perp_and_projection():
    S = Subspace.span([[1, 1, 0, 0], [0, 0, 1, 1]], 4, 3)
    P = S.perp()
    assert P.dim == 2
    assert not ((S.basis @ P.basis.T) % 3).any()
    assert S.project([0, 2]).dim == 2
    assert S.vanishing_on([0]).dim == 1


def test_scalars_and_points():
    pts = list(projective_points(3, 3))
    assert len(pts) == (27 - 1) // 2
    assert len({tuple(v) for v in pts}) == len(pts)
    assert normalize_scalar([0, 2, 1], 3) == (0, 1, 2)


def test_bad_entries_rejected():
    with pytest.raises(LinalgError):
        rref([[0, 5]], 2, 3)

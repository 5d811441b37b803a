import random

import numpy as np
import pytest

from gen import random_product
import oracles
from tbtrellis.analysis import is_reduced
from tbtrellis.catalog import (
    golay_trellis,
    hasse_example,
    meeting_example,
    swap_connected,
    swap_pair,
    two_cycle_example,
    two_factorization_example,
    two_factorization_variant,
)
from tbtrellis.factorization import (
    FactorizationCapExceeded,
    HypothesisError,
    canonical_factorization,
    count_factorizations,
    enumerate_factorizations,
    eq5_table,
    intersection_profile,
    is_periodic,
    isomorphic,
    isomorphism_map,
    multicycle_code,
    multicycle_distinguishes,
    multiply_out,
    periodic_product,
    periodic_realization,
    quasicyclic_factorization,
    quasicyclic_period,
    span_distribution,
    span_distribution_graphical,
    structurally_isomorphic,
)
from tbtrellis.label_code import NotReducedError, is_product_basis, label_code
from tbtrellis.spans import Span, SpanDistribution
from tbtrellis.trellis_core import TrellisError, cover, elementary, product_all, relabel, shift

N5 = 5


def _d(n, *pairs):
    return SpanDistribution(n, [Span(n, a, l) for a, l in pairs])


def test_hasse_distribution():
    T = hasse_example()
    want = _d(3, (0, 0), (0, 1), (1, 1))
    assert span_distribution(T) == want == span_distribution_graphical(T)
    assert span_distribution(T).counts == oracles.span_distribution(T)


def test_two_factorization_example():
    T = two_factorization_example()
    want = _d(5, (1, 2), (3, 3), (3, 4))
    assert span_distribution(T) == want == span_distribution_graphical(T)
    fs = [f.lines() for f in enumerate_factorizations(T)]
    assert fs == [
        ["01010|(1,2)", "01011|(3,3)", "00000|(3,4)"],
        ["01010|(1,2)", "01011|(3,3)", "01011|(3,4)"],
    ]
    assert count_factorizations(T) == 2
    for f in enumerate_factorizations(T):
        assert isomorphic(multiply_out(f.factors, 5), T)
    r = isomorphic(T, two_factorization_variant())
    assert not r and r.witness == Span(5, 3, 3)


def test_intersection_profile_and_identities():
    T = meeting_example()
    prof = intersection_profile(T)
    assert prof.as_lists() == [[], [2], [], [3, 4, 4], []]
    t1 = eq5_table(prof, 1)
    t3 = eq5_table(prof, 3)
    # (1 + q^0 ... ) rows: left side counts, right side exponent
    assert (2, 1) in t1
    assert (4, 2) in t3
    assert span_distribution_graphical(two_factorization_example()) == span_distribution(two_factorization_example())


def test_unique_factorization():
    T = two_cycle_example()
    fs = enumerate_factorizations(T)
    assert [f.lines() for f in fs] == [["000|(0,1)", "011|(1,1)"]]


def test_canonical_factorization_rebuilds():
    T = two_factorization_example()
    f = canonical_factorization(T)
    assert isomorphic(multiply_out(f.factors, 5), T)
    assert f.spans() == sorted(span_distribution(T))


def test_cap():
    with pytest.raises(FactorizationCapExceeded) as e:
        enumerate_factorizations(two_factorization_example(), cap=1)
    assert e.value.count == 2
    assert count_factorizations(golay_trellis()) == 1


def test_not_reduced_rejected():
    with pytest.raises(NotReducedError):
        span_distribution(swap_connected())
    with pytest.raises(NotReducedError):
        enumerate_factorizations(swap_connected())


def test_isomorphism_map_is_an_isomorphism():
    rng = random.Random(5)
    for _ in range(40):
        p = rng.choice([2, 3])
        T = random_product(rng, rng.randint(2, 5), p, kmax=3, rmax=2)
        from gen import random_relabel

        T2 = random_relabel(rng, T)
        f = isomorphism_map(T, T2)
        assert f is not None and relabel(T, f) == T2
    assert isomorphism_map(two_factorization_example(), two_factorization_variant()) is None


def test_structural():
    T, V = two_factorization_example(), two_factorization_variant()
    assert structurally_isomorphic(T, V)
    from tbtrellis.analysis import oracle_isomorphic
    from tbtrellis.trellis_core import to_raw

    assert oracle_isomorphic(to_raw(T), to_raw(V), structural=True)[0]
    assert not oracle_isomorphic(to_raw(T), to_raw(V))[0]


def test_multicycles():
    T, V = two_factorization_example(), two_factorization_variant()
    assert multicycle_code(T, 1) == multicycle_code(V, 1)
    with pytest.raises(TrellisError):
        multicycle_code(T, 0)
    # neither example is fragment one-to-one, so the classification does not apply
    with pytest.raises(HypothesisError):
        multicycle_distinguishes(T, V, 2)


def test_cover_pair_agree():
    T1, T2 = swap_pair()
    C1, C2 = cover(T1, 2), cover(T2, 2)
    assert is_reduced(C1) and is_reduced(C2)
    assert isomorphic(C1, C2)


def test_periodic_structure():
    T = periodic_product([((1, 0, 1, 0, 0, 0), Span(6, 0, 2))], 6, 1)
    assert is_periodic(T, 1)
    assert quasicyclic_period(T) == 1
    orbits = quasicyclic_factorization(T, 1)
    vecs = [np.asarray(c) for orb in orbits for c, _ in orb]
    assert is_product_basis(T, vecs)
    S = product_all(elementary(shift_w, Span(6, -j, 2)) for j, shift_w in enumerate(
        [(1, 0, 1, 0, 0, 0)[j % 6:] + (1, 0, 1, 0, 0, 0)[:j % 6] for j in range(6)]))
    # same trellis up to isomorphism, and the literal period is recovered
    assert isomorphic(S, T)
    P = periodic_realization(S, 1)
    assert P is not None and is_periodic(P, 1)
    f = isomorphism_map(P, T, period=1)
    assert f is not None


def test_quasicyclic_factorization_needs_literal_period():
    T = two_factorization_example()
    with pytest.raises(HypothesisError):
        quasicyclic_factorization(T, 1)


def test_golay_reference():
    T = golay_trellis()
    d = span_distribution(T)
    assert d == SpanDistribution(24, [Span(24, 2 * i, 9) for i in range(12)])
    assert max(T.vdims) == 5


def test_disconnected_factorizations():
    import oracles

    rng = random.Random(9)
    full = 0
    for _ in range(80):
        p = rng.choice([2, 3])
        n = rng.randint(1, 4)
        T = random_product(rng, n, p, kmax=3, allow_full=True, rmax=2)
        d = span_distribution(T)
        full += d[Span.full(n)] > 0
        assert d == span_distribution_graphical(T)
        assert d.counts == oracles.span_distribution(T)
        fs = enumerate_factorizations(T, cap=500)
        assert len(fs) == count_factorizations(T)
        assert all(isomorphic(multiply_out(f.factors, n, p), T) for f in fs)
    assert full >= 15

import itertools

import pytest

from tbtrellis.spans import (
    Span,
    SpanDistribution,
    SpanError,
    all_spans,
    immediate_predecessors,
    minimal_span_of_word,
    minimal_spans,
    parse_span,
    shift_span,
    span_leq,
    strictly_below,
)


@pytest.mark.parametrize("n", range(1, 7))
def test_partial_order(n):
    sp = all_spans(n)
    for s in sp:
        assert span_leq(s, s)
    for s, t in itertools.product(sp, sp):
        if span_leq(s, t) and span_leq(t, s):
            assert s == t
    for s, t, u in itertools.product(sp, sp, sp):
        if span_leq(s, t) and span_leq(t, u):
            assert span_leq(s, u)


def _down(s):
    return {t for t in all_spans(s.n) if span_leq(t, s)}


@pytest.mark.parametrize("n", range(1, 7))
def test_strictly_below_is_union_of_predecessor_closures(n):
    for s in all_spans(n):
        union = set()
        for t in immediate_predecessors(s):
            union |= _down(t)
        assert strictly_below(s) == union


@pytest.mark.parametrize("n", range(1, 6))
def test_minimal_spans_of_words(n):
    for w in itertools.product([0, 1], repeat=n):
        if not any(w):
            continue
        supp = {i for i, x in enumerate(w) if x}
        fits = [s for s in all_spans(n) if not s.is_empty and supp <= s.closed()]
        mins = minimal_spans(fits)
        for a, b in itertools.permutations(mins, 2):
            assert not span_leq(a, b)
        got = minimal_span_of_word(w)
        assert (isinstance(got, Span)) == (len(mins) == 1)


def test_degenerate_normalizes():
    assert Span(5, 3, -1) == Span.empty(5)
    assert Span(5, 2, 5) == Span.full(5)
    assert Span(5, 3, 4) != Span(5, 0, 4)
    assert Span(4, 2, 0).closed() == {2}
    assert Span(4, 3, 2).closed() == {3, 0, 1}
    assert Span(4, 3, 2).half_open() == {0, 1}


def test_order_examples():
    n = 5
    assert span_leq(Span(n, 3, 3), Span(n, 3, 4))
    assert span_leq(Span(n, 1, 2), Span(n, 0, 3))
    assert not span_leq(Span(n, 1, 2), Span(n, 3, 3))


def test_parse_and_shift():
    assert parse_span("(3,4)", 5) == Span(5, 3, 4)
    assert shift_span(Span(5, 3, 1), 1) == Span(5, 2, 1)
    with pytest.raises(SpanError):
        parse_span("3-4", 5)


def test_distribution_rules():
    d = SpanDistribution(5, [Span(5, 3, 3), Span(5, 1, 2), Span(5, 3, 4)])
    assert str(d) == "{{(1,2),(3,3),(3,4)}}"
    assert d.profile() == [2, 2, 2, 1, 2]
    with pytest.raises(SpanError):
        SpanDistribution(3, [Span(3, 0, 0), Span(3, 0, 0)])

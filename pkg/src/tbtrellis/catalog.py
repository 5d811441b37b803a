"""Small named trellises and codes used by the docs, the CLI and the tests."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .field_linalg import Subspace
from .spans import Span
from .trellis_core import Trellis, elementary, product_all, realize_from_labelcode, shift, unlabel

__all__ = [
    "edges_from_rows",
    "interleave",
    "hasse_example",
    "two_cycle_example",
    "two_factorization_example",
    "two_factorization_variant",
    "meeting_example",
    "repetition_mergeable",
    "kv_mergeable",
    "swap_connected",
    "swap_pair",
    "swap_loop",
    "toy_code",
    "golay_factors",
    "golay_trellis",
]


def _bits(s: str) -> list[int]:
    return [int(c) for c in s]


def edges_from_rows(vdims: Sequence[int], rows_per_index: Sequence[Sequence[str]], p: int = 2) -> Trellis:
    """Build a trellis from edge generators written as 'v|a|w' digit strings."""
    n = len(vdims)
    edges = []
    for i, rows in enumerate(rows_per_index):
        amb = vdims[i] + 1 + vdims[(i + 1) % n]
        vecs = [_bits(r.replace("|", "")) for r in rows]
        edges.append(Subspace.span(np.asarray(vecs, np.int64).reshape(-1, amb), amb, p))
    return Trellis(p, tuple(vdims), tuple(edges))


def interleave(verts: Sequence[str], labels: str) -> list[int]:
    out: list[int] = []
    for v, a in zip(verts, labels):
        out += _bits(v) + [int(a)]
    return out


def hasse_example() -> Trellis:
    """Length 3, vertex dims (0,1,1); distribution {(0,0),(0,1),(1,1)}."""
    gens = [
        interleave(["", "0", "0"], "100"),
        interleave(["", "1", "0"], "100"),
        interleave(["", "0", "1"], "011"),
    ]
    return realize_from_labelcode(gens, [0, 1, 1])


def two_cycle_example() -> Trellis:
    """Cycles (010, 000) and (001, 011): a unique factorization."""
    gens = [interleave(["0", "1", "0"], "000"), interleave(["0", "0", "1"], "011")]
    return realize_from_labelcode(gens, [1, 1, 1])


def two_factorization_example() -> Trellis:
    return product_all(
        [
            elementary("01010", Span(5, 1, 2)),
            elementary("01011", Span(5, 3, 3)),
            elementary("01011", Span(5, 3, 4)),
        ]
    )


def two_factorization_variant() -> Trellis:
    """Same code and span distribution, but the (3,3) factor carries the zero word."""
    return product_all(
        [
            elementary("01010", Span(5, 1, 2)),
            elementary("00000", Span(5, 3, 3)),
            elementary("01011", Span(5, 3, 4)),
        ]
    )


def meeting_example() -> Trellis:
    """Unlabeled version of the two-factorization example."""
    return unlabel(two_factorization_example())


def repetition_mergeable() -> Trellis:
    """A one-to-one trellis for <111> that merges at V_0 in direction 11."""
    return edges_from_rows(
        [2, 1, 1],
        [
            ["10|0|1", "01|1|0"],
            ["1|1|1"],
            ["1|0|01", "0|1|10"],
        ],
    )


def kv_mergeable() -> Trellis:
    """Biproper, one-to-one, yet mergeable."""
    return edges_from_rows(
        [1, 1, 2],
        [
            ["1|1|0", "0|1|1"],
            ["1|1|10", "0|1|01"],
            ["01|0|1", "10|1|1"],
        ],
    )


def swap_connected() -> Trellis:
    """Length 2, unlabeled, swap then 'move along 01': connected but not reduced."""
    return edges_from_rows(
        [2, 2],
        [
            ["10|0|01", "01|0|10"],
            ["10|0|10", "01|0|01", "00|0|01"],
        ],
    )


def swap_pair() -> tuple[Trellis, Trellis]:
    """Two unlabeled length-2 trellises whose double covers agree up to isomorphism."""
    swap = ["10|0|01", "01|0|10"]
    ident = ["10|0|10", "01|0|01"]
    return edges_from_rows([2, 2], [swap, ident]), edges_from_rows([2, 2], [ident, ident])


def swap_loop() -> Trellis:
    """Length 1 coordinate swap with zero labels."""
    return edges_from_rows([2], [["10|0|01", "01|0|10"]])


def toy_code() -> Subspace:
    """The length-5 code <01010, 11111>."""
    return Subspace.span([_bits("01010"), _bits("11111")], 5, 2)


_GOLAY_WORDS = (
    ("110111011100000000000000", 0),
    ("001111100111000000000000", 2),
    ("000011011011110000000000", 4),
    ("000000110111011100000000", 6),
)


def golay_factors() -> list[tuple[str, Span]]:
    """Twelve factors: four length-9 spans, repeated at shifts of 8."""
    out = []
    for j in range(3):
        for w, a in _GOLAY_WORDS:
            word = w[-8 * j :] + w[: -8 * j] if j else w
            out.append((word, Span(24, a + 8 * j, 9)))
    return out


def golay_trellis() -> Trellis:
    return product_all(elementary(w, s) for w, s in golay_factors())

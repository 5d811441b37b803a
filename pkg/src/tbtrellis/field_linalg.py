"""Exact linear algebra over prime fields GF(p).

Vectors are 1-D integer numpy arrays (or anything array-like) with entries in
[0, p).  Subspaces are kept in reduced row echelon form, which makes equality
and hashing cheap and gives deterministic output.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as _cartesian
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Field",
    "LinalgError",
    "Subspace",
    "rref",
    "rref_matrix",
    "solve_kernel",
    "intersect",
    "subspace_sum",
    "contains",
    "quotient_dim",
    "solve_left",
    "is_prime",
]


class LinalgError(ValueError):
    """Malformed input to a linear algebra routine."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class Field:
    p: int = 2

    def __post_init__(self):
        if not is_prime(int(self.p)):
            raise LinalgError(f"field size {self.p} is not prime")

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(x, -1, self.p)

    def elements(self) -> range:
        return range(self.p)


def _as_matrix(rows, ncols: int | None = None) -> np.ndarray:
    mat = np.asarray(rows, dtype=np.int64)
    if mat.ndim == 1:
        mat = mat.reshape(1, -1) if mat.size else np.zeros((0, ncols or 0), np.int64)
    if mat.ndim != 2:
        raise LinalgError("expected a 2-D matrix")
    if ncols is not None and mat.shape[1] != ncols:
        if mat.shape[0] == 0:
            return np.zeros((0, ncols), dtype=np.int64)
        raise LinalgError(f"row length {mat.shape[1]} != ambient dimension {ncols}")
    return mat


def rref_matrix(mat, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Row reduce ``mat`` over GF(p); returns (nonzero rows, pivot columns)."""
    m = np.array(mat, dtype=np.int64) % p
    if m.ndim != 2:
        raise LinalgError("expected a 2-D matrix")
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        lead = int(m[r, c])
        if lead != 1:
            m[r] = (m[r] * pow(lead, -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            if p == 2:
                m[hit] ^= m[r]
            else:
                m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r].copy(), tuple(pivots)


class Subspace:
    """A subspace of GF(p)^ambient stored by its canonical RREF basis."""

    __slots__ = ("p", "ambient", "basis", "pivots", "_hash", "__dict__")

    def __init__(self, p: int, ambient: int, basis: np.ndarray, pivots: tuple[int, ...]):
        self.p = p
        self.ambient = ambient
        basis = np.ascontiguousarray(basis, dtype=np.int64)
        basis.setflags(write=False)
        self.basis = basis
        self.pivots = pivots
        self._hash = hash((p, ambient, basis.tobytes()))

    # construction -------------------------------------------------------
    @classmethod
    def span(cls, rows, ambient: int, p: int = 2) -> "Subspace":
        mat = _as_matrix(rows, ambient)
        red, piv = rref_matrix(mat, p) if mat.shape[0] else (mat, ())
        return cls(p, ambient, red, piv)

    @classmethod
    def zero(cls, ambient: int, p: int = 2) -> "Subspace":
        return cls(p, ambient, np.zeros((0, ambient), np.int64), ())

    @classmethod
    def full(cls, ambient: int, p: int = 2) -> "Subspace":
        return cls(p, ambient, np.eye(ambient, dtype=np.int64), tuple(range(ambient)))

    # basic protocol -----------------------------------------------------
    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def field(self) -> Field:
        return Field(self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient == other.ambient
            and self.basis.shape == other.basis.shape
            and bool(np.array_equal(self.basis, other.basis))
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        rows = ", ".join("".join(map(str, r)) for r in self.basis.tolist()) if self.p <= 10 else ""
        return f"Subspace(p={self.p}, n={self.ambient}, dim={self.dim}, <{rows}>)"

    def __len__(self) -> int:
        return self.p**self.dim

    def _check(self, other: "Subspace"):
        if self.p != other.p:
            raise LinalgError(f"mixed field moduli {self.p} and {other.p}")
        if self.ambient != other.ambient:
            raise LinalgError(f"ambient dimensions differ: {self.ambient} vs {other.ambient}")

    # membership ---------------------------------------------------------
    def coords(self, v) -> np.ndarray:
        """Coordinates of v against the RREF basis (valid only for members)."""
        v = np.asarray(v, dtype=np.int64) % self.p
        return v[list(self.pivots)]

    def contains_vec(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64) % self.p
        if v.shape != (self.ambient,):
            raise LinalgError("vector length does not match ambient dimension")
        if self.dim == 0:
            return not v.any()
        return bool(np.array_equal((v[list(self.pivots)] @ self.basis) % self.p, v))

    def __contains__(self, v) -> bool:
        return self.contains_vec(v)

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains_vec(r) for r in other.basis)

    def reduce(self, v) -> np.ndarray:
        """Canonical coset representative of v modulo self."""
        v = np.asarray(v, dtype=np.int64) % self.p
        if self.dim:
            v = (v - v[list(self.pivots)] @ self.basis) % self.p
        return v

    # lattice operations -------------------------------------------------
    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        return Subspace.span(np.vstack([self.basis, other.basis]), self.ambient, self.p)

    def perp(self) -> "Subspace":
        """Orthogonal complement for the standard bilinear form."""
        return solve_kernel(self.basis, self.p, ncols=self.ambient)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient, self.p)
        # x = c A = d B  <=>  [c | -d] [A; B] = 0
        stacked = np.vstack([self.basis, (-other.basis) % self.p])
        ker = solve_kernel(stacked.T, self.p, ncols=stacked.shape[0])
        if ker.dim == 0:
            return Subspace.zero(self.ambient, self.p)
        vecs = (ker.basis[:, : self.dim] @ self.basis) % self.p
        return Subspace.span(vecs, self.ambient, self.p)

    # coordinate operations ----------------------------------------------
    def project(self, cols: Sequence[int]) -> "Subspace":
        cols = list(cols)
        return Subspace.span(self.basis[:, cols], len(cols), self.p)

    def vanishing_on(self, cols: Iterable[int]) -> "Subspace":
        """The subspace of members that are zero on every column in cols."""
        cols = sorted(set(cols))
        if not cols or self.dim == 0:
            return self
        sub = self.basis[:, cols]
        ker = solve_kernel(sub.T, self.p, ncols=self.dim)
        if ker.dim == 0:
            return Subspace.zero(self.ambient, self.p)
        return Subspace.span((ker.basis @ self.basis) % self.p, self.ambient, self.p)

    def embed(self, cols: Sequence[int], ambient: int) -> "Subspace":
        """Place self into a larger space; coordinate j goes to cols[j]."""
        out = np.zeros((self.dim, ambient), dtype=np.int64)
        out[:, list(cols)] = self.basis
        return Subspace.span(out, ambient, self.p)

    def image(self, matrix) -> "Subspace":
        """Image under the linear map x -> x @ matrix."""
        matrix = np.asarray(matrix, dtype=np.int64)
        if self.dim == 0:
            return Subspace.zero(matrix.shape[1], self.p)
        return Subspace.span((self.basis @ matrix) % self.p, matrix.shape[1], self.p)

    def fiber(self, cols: Sequence[int], values) -> np.ndarray | None:
        """Some member whose entries at cols equal values, or None."""
        cols = list(cols)
        values = np.asarray(values, dtype=np.int64) % self.p
        if self.dim == 0:
            return np.zeros(self.ambient, np.int64) if not values.any() else None
        c = solve_left(self.basis[:, cols], values, self.p)
        if c is None:
            return None
        return (c @ self.basis) % self.p

    # enumeration --------------------------------------------------------
    def elements(self) -> Iterator[np.ndarray]:
        if self.dim == 0:
            yield np.zeros(self.ambient, np.int64)
            return
        for coeffs in _cartesian(range(self.p), repeat=self.dim):
            yield (np.asarray(coeffs, np.int64) @ self.basis) % self.p

    def rows(self) -> list[tuple[int, ...]]:
        return [tuple(r) for r in self.basis.tolist()]

    @cached_property
    def frozen_elements(self) -> frozenset[tuple[int, ...]]:
        return frozenset(tuple(e.tolist()) for e in self.elements())


# module-level API ---------------------------------------------------------

def _field_of(rows, p: int | None) -> int:
    if p is not None:
        return p
    ps = {getattr(r, "p", None) for r in rows} - {None}
    if len(ps) > 1:
        raise LinalgError(f"mixed field moduli {sorted(ps)}")
    return ps.pop() if ps else 2


def rref(rows, ambient_dim: int, p: int = 2) -> Subspace:
    """Canonical RREF basis of the row span of ``rows``."""
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        return Subspace.span(rows, ambient_dim, p)
    rows = list(rows)
    for r in rows:
        if len(r) != ambient_dim:
            raise LinalgError(f"row of length {len(r)} in ambient dimension {ambient_dim}")
        if any(not 0 <= int(x) < p for x in r):
            raise LinalgError(f"entry outside [0, {p})")
    if not rows:
        return Subspace.zero(ambient_dim, p)
    return Subspace.span(np.asarray(rows, dtype=np.int64), ambient_dim, p)


def solve_kernel(matrix, p: int = 2, ncols: int | None = None) -> Subspace:
    """Right null space {x : matrix @ x = 0}."""
    mat = _as_matrix(matrix, ncols)
    n = mat.shape[1]
    if mat.shape[0] == 0:
        return Subspace.full(n, p)
    red, piv = rref_matrix(mat, p)
    free = [c for c in range(n) if c not in set(piv)]
    if not free:
        return Subspace.zero(n, p)
    basis = np.zeros((len(free), n), dtype=np.int64)
    piv_idx = list(piv)
    for k, f in enumerate(free):
        basis[k, f] = 1
        if piv_idx:
            basis[k, piv_idx] = (-red[:, f]) % p
    return Subspace.span(basis, n, p)


def solve_left(a, b, p: int = 2) -> np.ndarray | None:
    """Some row vector c with c @ a == b (mod p), or None if inconsistent."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64).reshape(-1) % p
    k, m = a.shape
    aug = np.hstack([a.T, b.reshape(m, 1)])
    red, piv = rref_matrix(aug, p)
    if piv and piv[-1] == k:
        return None
    c = np.zeros(k, dtype=np.int64)
    for row, col in zip(red, piv):
        c[col] = row[k]
    return c


def intersect(a: Subspace, b: Subspace) -> Subspace:
    return a & b


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a + b


def contains(a: Subspace, b: Subspace) -> bool:
    """True when b is a subspace of a."""
    return a.contains(b)


def quotient_dim(a: Subspace, b: Subspace) -> int:
    if not a.contains(b):
        raise LinalgError("quotient_dim needs the second space inside the first")
    return a.dim - b.dim


def sum_all(spaces: Iterable[Subspace], ambient: int, p: int) -> Subspace:
    rows = [s.basis for s in spaces if s.dim]
    if not rows:
        return Subspace.zero(ambient, p)
    return Subspace.span(np.vstack(rows), ambient, p)


def block_diag(*mats: np.ndarray) -> np.ndarray:
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r : r + m.shape[0], c : c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def projective_points(dim: int, p: int) -> Iterator[np.ndarray]:
    """Nonzero vectors of GF(p)^dim whose first nonzero entry is 1."""
    for lead in range(dim):
        for tail in _cartesian(range(p), repeat=dim - lead - 1):
            v = np.zeros(dim, dtype=np.int64)
            v[lead] = 1
            v[lead + 1 :] = tail
            yield v


def normalize_scalar(v, p: int) -> tuple[int, ...]:
    """Scale v so its first nonzero entry is 1 (zero stays zero)."""
    v = np.asarray(v, dtype=np.int64) % p
    nz = np.flatnonzero(v)
    if nz.size == 0:
        return tuple(v.tolist())
    return tuple(((v * pow(int(v[nz[0]]), -1, p)) % p).tolist())

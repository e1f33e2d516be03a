"""Hochschild cochains C^p(A, I) = Hom_k(A^{(x)p}, I) for p <= 3.

A p-cochain is stored as a ``dim I x dim A**p`` matrix whose columns are
indexed by basis tensors ``e_{i1} (x) ... (x) e_{ip}`` in lexicographic order,
leftmost factor most significant.  Equivalently, ``matrix.reshape(m, n, ..., n)``
is the cochain tensor ``phi[u, i1, ..., ip]``.

The coboundary is

    d(phi)(a1, ..., a_{p+1}) = a1 phi(a2, ..., a_{p+1})
        + sum_{i=1..p} (-1)^i phi(a1, ..., a_i a_{i+1}, ..., a_{p+1})
        + (-1)^{p+1} phi(a1, ..., a_p) a_{p+1},

so ``d^0(u)(a) = a u - u a``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, Bimodule
from .exactla import (
    PrimeField,
    QuotientSpace,
    check_size,
    from_integers,
    image_basis,
    integerize,
    kernel_basis,
)

MAX_DEGREE = 3


class DegreeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Cochain:
    algebra: Algebra
    bimodule: Bimodule
    degree: int
    matrix: np.ndarray

    def __post_init__(self):
        if not 0 <= self.degree <= MAX_DEGREE:
            raise DegreeError(f"cochain degree {self.degree} outside 0..{MAX_DEGREE}")
        expected = (self.bimodule.dim, self.algebra.dim ** self.degree)
        if self.matrix.shape != expected:
            raise ValueError(f"cochain matrix of shape {self.matrix.shape}, expected {expected}")
        if self.bimodule.algebra is not self.algebra:
            raise ValueError("bimodule is over a different algebra")

    @property
    def field(self):
        return self.algebra.field

    @property
    def tensor(self) -> np.ndarray:
        return self.matrix.reshape((self.bimodule.dim,) + (self.algebra.dim,) * self.degree)

    def value(self, *args: int) -> np.ndarray:
        """Value on the basis tensor e_{args[0]} (x) ... as a vector in I."""
        return self.tensor[(slice(None),) + tuple(args)]

    def evaluate(self, *vectors) -> np.ndarray:
        """Value on arbitrary elements of A (multilinear extension)."""
        F = self.field
        t = self.tensor
        for v in vectors:
            t = F.tensordot(t, v, axes=([1], [0]))
        return t

    def _check_same(self, other: "Cochain") -> None:
        if (
            other.algebra is not self.algebra
            or other.bimodule is not self.bimodule
            or other.degree != self.degree
        ):
            raise ValueError("cochains live in different complexes")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check_same(other)
        return self.with_matrix(self.field.reduce(self.matrix + other.matrix))

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._check_same(other)
        return self.with_matrix(self.field.reduce(self.matrix - other.matrix))

    def scale(self, c) -> "Cochain":
        return self.with_matrix(self.field.reduce(self.matrix * self.field.coerce(c)))

    def with_matrix(self, matrix) -> "Cochain":
        return Cochain(self.algebra, self.bimodule, self.degree, np.asarray(matrix))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.matrix)

    def same_as(self, other: "Cochain") -> bool:
        self._check_same(other)
        return not np.any(self.matrix != other.matrix)


def zero_cochain(a: Algebra, i: Bimodule, degree: int) -> Cochain:
    return Cochain(a, i, degree, a.field.zeros((i.dim, a.dim ** degree)))


def cochain_from_vector(a: Algebra, i: Bimodule, degree: int, vec) -> Cochain:
    return Cochain(a, i, degree, np.asarray(vec).reshape(i.dim, a.dim ** degree))


def cochain_dim(a: Algebra, i: Bimodule, degree: int) -> int:
    return i.dim * a.dim ** degree


def _coboundary_raw(left, right, mul, phi, p: int) -> np.ndarray:
    # a1 . phi(a2, ...)
    out = np.swapaxes(np.tensordot(left, phi, axes=([2], [0])), 0, 1)
    for k in range(1, p + 1):
        t = np.tensordot(phi, mul, axes=([k], [2]))
        t = np.moveaxis(t, [-2, -1], [k, k + 1])
        out = out + t if k % 2 == 0 else out - t
    last = np.moveaxis(np.tensordot(right, phi, axes=([2], [0])), 0, p + 1)
    return out + last if (p + 1) % 2 == 0 else out - last


def _coboundary(a: Algebra, i: Bimodule, phi: np.ndarray, p: int) -> np.ndarray:
    """Apply d^p to ``phi`` of shape (m, n^p..., *batch)."""
    F = a.field
    if isinstance(F, PrimeField):
        return F.reduce(_coboundary_raw(i.left, i.right, a.mul, phi, p))
    # every term is bilinear in (structure constants, phi): scale both by den
    (left, right, mul, phi_int), den = integerize([i.left, i.right, a.mul, phi])
    return from_integers(_coboundary_raw(left, right, mul, phi_int, p), den * den)


def differential(c: Cochain) -> Cochain:
    if c.degree > MAX_DEGREE - 1:
        raise DegreeError(f"differential of a degree-{c.degree} cochain is not supported")
    a, i = c.algebra, c.bimodule
    out = _coboundary(a, i, c.tensor, c.degree)
    return Cochain(a, i, c.degree + 1, out.reshape(i.dim, a.dim ** (c.degree + 1)))


def differential_matrix(a: Algebra, i: Bimodule, p: int) -> np.ndarray:
    """Matrix of d^p acting on row-major flattened cochains; d^{-1} is the empty map."""
    F = a.field
    m, n = i.dim, a.dim
    if p == -1:
        return F.zeros((m, 0))
    if not 0 <= p <= MAX_DEGREE - 1:
        raise DegreeError(f"d^{p} is not supported (degrees 0..{MAX_DEGREE - 1})")
    rows, cols = m * n ** (p + 1), m * n ** p
    check_size(rows, cols, f"d^{p}")
    batch = F.eye(cols).reshape((m,) + (n,) * p + (cols,))
    return _coboundary(a, i, batch, p).reshape(rows, cols)


@dataclass(frozen=True, eq=False)
class Cohomology:
    degree: int
    cocycles: np.ndarray      # basis columns of ker d^p
    coboundaries: np.ndarray  # basis columns of im d^{p-1}
    representatives: np.ndarray  # coset representatives (columns)

    @property
    def dim(self) -> int:
        return self.representatives.shape[1]


def cohomology(a: Algebra, i: Bimodule, p: int) -> Cohomology:
    """HH^p(A, I) = ker d^p / im d^{p-1} for p in {0, 1, 2}."""
    if not 0 <= p <= 2:
        raise DegreeError("cohomology is computed for degrees 0, 1, 2")
    F = a.field
    Z = kernel_basis(F, differential_matrix(a, i, p))
    B = image_basis(F, differential_matrix(a, i, p - 1))
    q = QuotientSpace.build(F, Z, B)
    return Cohomology(p, Z, B, q.reps)


def representative_cochains(a: Algebra, i: Bimodule, h: Cohomology) -> list[Cochain]:
    return [cochain_from_vector(a, i, h.degree, h.representatives[:, k]) for k in range(h.dim)]

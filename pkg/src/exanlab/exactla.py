"""Exact scalar fields and dense linear algebra over them.

Two kinds of field are supported: the rationals (entries are
:class:`fractions.Fraction` stored in numpy object arrays) and prime fields
``GF(p)`` (residues in ``[0, p)``; int64 arrays for small ``p``, Python ints
otherwise).  Every routine is deterministic: pivots are the first nonzero
entry scanning columns left to right, so bases and representatives are
reproducible across runs.

Matrices are plain numpy arrays.  A "basis" is always returned as a 2-D array
whose *columns* are the basis vectors.
"""

from __future__ import annotations

import functools
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

MAX_ENTRIES = 10**6

_INT_RE = re.compile(r"^[+-]?\d+$")
_RAT_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


class ExactLAError(Exception):
    pass


class DimensionError(ExactLAError, ValueError):
    pass


class SizeGuardError(ExactLAError):
    """A dense matrix would exceed :data:`MAX_ENTRIES` entries."""


class NotInSpanError(ExactLAError, ValueError):
    pass


def check_size(rows: int, cols: int, what: str = "matrix") -> None:
    if rows * cols > MAX_ENTRIES:
        raise SizeGuardError(
            f"{what} would have {rows}x{cols} = {rows * cols} entries "
            f"(limit {MAX_ENTRIES})"
        )


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Field:
    """Base class; use :data:`QQ` or :func:`GF`."""

    name: str
    dtype: object
    characteristic: int

    # -- scalars ---------------------------------------------------------
    def coerce(self, x):
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def random_element(self, rng: random.Random):
        raise NotImplementedError

    def descriptor(self):
        raise NotImplementedError

    # -- arrays ----------------------------------------------------------
    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return arr

    def array(self, data) -> np.ndarray:
        arr = np.array(data, dtype=object)
        flat = [self.coerce(x) for x in arr.reshape(-1)]
        out = np.empty(len(flat), dtype=self.dtype)
        out[:] = flat
        return out.reshape(arr.shape)

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            out.fill(self.coerce(0))
            return out
        return np.zeros(shape, dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.coerce(1)
        return out

    def unit_vector(self, n: int, i: int) -> np.ndarray:
        out = self.zeros(n)
        out[i] = self.coerce(1)
        return out

    def dot(self, a, b) -> np.ndarray:
        return self.reduce(np.dot(a, b))

    def tensordot(self, a, b, axes) -> np.ndarray:
        return self.reduce(np.tensordot(a, b, axes=axes))

    def einsum(self, subscripts: str, *operands) -> np.ndarray:
        return self.reduce(np.einsum(subscripts, *operands))

    def is_zero(self, arr) -> bool:
        return not np.any(np.asarray(arr) != 0)

    def random_array(self, rng: random.Random, shape) -> np.ndarray:
        n = int(np.prod(shape)) if shape else 1
        return self.array([self.random_element(rng) for _ in range(n)]).reshape(shape)

    def __repr__(self) -> str:
        return self.name


class Rationals(Field):
    name = "Q"
    dtype = object
    characteristic = 0

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (bool, float)):
            raise TypeError(f"refusing inexact/boolean scalar {x!r}")
        return Fraction(int(x))

    def parse(self, s: str):
        s = s.strip()
        if not _RAT_RE.match(s):
            raise ValueError(f"not a rational scalar string: {s!r}")
        return Fraction(s)

    def format(self, x) -> str:
        return str(Fraction(x))

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def random_element(self, rng):
        num = rng.randint(-3, 3)
        den = rng.choice((1, 1, 1, 2, 3))
        return Fraction(num, den)

    def descriptor(self):
        return "Q"

    # products go through integer arithmetic on scaled copies
    def dot(self, a, b) -> np.ndarray:
        return _integer_product(np.dot, a, b)

    def tensordot(self, a, b, axes) -> np.ndarray:
        return _integer_product(lambda x, y: np.tensordot(x, y, axes=axes), a, b)

    def einsum(self, subscripts: str, *operands) -> np.ndarray:
        return _integer_product(lambda *xs: np.einsum(subscripts, *xs), *operands)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


class PrimeField(Field):
    # residues stay in int64 while products of three residues cannot overflow
    NATIVE_LIMIT = 4096

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= 2**32:
            raise ValueError("prime fields are limited to p < 2**32")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"
        self.dtype = np.int64 if p < self.NATIVE_LIMIT else object

    def coerce(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        if isinstance(x, (bool, float)):
            raise TypeError(f"refusing inexact/boolean scalar {x!r}")
        return int(x) % self.p

    def parse(self, s: str):
        s = s.strip()
        if not _INT_RE.match(s):
            raise ValueError(f"not a residue string: {s!r}")
        return int(s) % self.p

    def format(self, x) -> str:
        return str(int(x) % self.p)

    def inv(self, x):
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def reduce(self, arr):
        return np.asarray(arr) % self.p

    def random_element(self, rng):
        return rng.randrange(self.p)

    def descriptor(self):
        return {"Fp": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


QQ = Rationals()


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_descriptor(desc) -> Field:
    if desc == "Q":
        return QQ
    if isinstance(desc, dict) and set(desc) == {"Fp"}:
        p = desc["Fp"]
        if isinstance(p, str) and _INT_RE.match(p):
            p = int(p)
        if not isinstance(p, int) or isinstance(p, bool):
            raise ValueError(f"bad prime in field descriptor: {p!r}")
        return GF(p)
    raise ValueError(f"unknown field descriptor {desc!r}")


def as_field_array(field: Field, m) -> np.ndarray:
    """Copy of ``m`` with the field's dtype and reduced entries."""
    if isinstance(m, np.ndarray) and m.dtype == np.dtype(field.dtype) and field.dtype is not object:
        return field.reduce(m.copy())
    return field.array(m)


def _common_denominator(arr: np.ndarray) -> int:
    den = 1
    for x in arr.flat:
        d = x.denominator
        if d != 1:
            den = den * d // math.gcd(den, d)
    return den


def _scaled(arr: np.ndarray, den: int) -> tuple[np.ndarray, int]:
    """``arr * den`` as Python ints, with the largest absolute entry."""
    ints = np.empty(arr.shape, dtype=object)
    ints.flat[:] = [x.numerator * (den // x.denominator) for x in arr.flat]
    return ints, max((abs(x) for x in ints.flat), default=0)


def integerize(arrays) -> tuple[list[np.ndarray], int]:
    """Scale rational arrays by one common denominator; returns integer arrays.

    Integer arrays are int64 when entries are small enough for a few products
    and sums, Python ints otherwise.
    """
    arrays = [np.asarray(a, dtype=object) for a in arrays]
    den = 1
    for arr in arrays:
        d = _common_denominator(arr)
        den = den * d // math.gcd(den, d)
    scaled = [_scaled(arr, den) for arr in arrays]
    out = [ints for ints, _ in scaled]
    if max((big for _, big in scaled), default=0) < 2**20:
        out = [x.astype(np.int64) for x in out]
    return out, den


def _integer_product(op, *arrays) -> np.ndarray:
    """Evaluate a multilinear numpy ``op`` on rational arrays via integers."""
    ints, den, bound = [], 1, 1
    for arr in arrays:
        arr = np.asarray(arr, dtype=object)
        d = _common_denominator(arr)
        x, big = _scaled(arr, d)
        ints.append(x)
        den *= d
        bound *= max(big, 1) * max(arr.size, 1)
    if bound < 2**62:
        ints = [x.astype(np.int64) for x in ints]
    raw = np.asarray(op(*ints))
    if raw.ndim == 0:
        return Fraction(int(raw), den)
    return from_integers(raw, den)


def from_integers(raw: np.ndarray, den: int) -> np.ndarray:
    """Object array of Fractions ``raw / den``."""
    out = np.empty(raw.shape, dtype=object)
    out.fill(Fraction(0))
    idx = np.flatnonzero(raw)
    out.flat[idx] = [Fraction(int(x), den) for x in raw.flat[idx]]
    return out


# ---------------------------------------------------------------------------
# elimination


def _rref_modp(R: np.ndarray, p: int):
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c] != 0)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        inv = pow(int(R[r, c]), -1, p)
        R[r, c:] = (R[r, c:] * inv) % p
        others = np.flatnonzero(R[:, c] != 0)
        others = others[others != r]
        if others.size:
            R[others, c:] = (R[others, c:] - np.outer(R[others, c], R[r, c:])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def _content_reduce(R: np.ndarray, idx) -> None:
    g = np.gcd.reduce(R[idx], axis=1)
    g[g == 0] = 1
    R[idx] = R[idx] // g[:, None]


def _rref_rational(M: np.ndarray):
    # fraction-free Gauss-Jordan on integer rows, divided out at the end
    rows, cols = M.shape
    R = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        row = [Fraction(x) for x in M[i]]
        den = 1
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
        R[i] = [x.numerator * (den // x.denominator) for x in row]
    if rows and cols:
        _content_reduce(R, np.arange(rows))
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c] != 0)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        pv = R[r, c]
        others = np.flatnonzero(R[:, c] != 0)
        others = others[others != r]
        if others.size:
            # rows are rescaled by pv, so the whole row takes part
            R[others] = R[others] * pv - np.outer(R[others, c], R[r])
            _content_reduce(R, others)
        pivots.append(c)
        r += 1
    out = np.empty((rows, cols), dtype=object)
    out.fill(Fraction(0))
    for i, c in enumerate(pivots):
        pv = R[i, c]
        out[i] = [Fraction(x, pv) for x in R[i]]
    return out, pivots


def rref(field: Field, m) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and pivot columns of ``m``."""
    M = as_field_array(field, m)
    if M.ndim != 2:
        raise DimensionError("rref expects a 2-D matrix")
    if isinstance(field, PrimeField):
        return _rref_modp(field.reduce(M).astype(field.dtype), field.p)
    return _rref_rational(M)


def rank(field: Field, m) -> int:
    return len(rref(field, m)[1])


def kernel_basis(field: Field, m) -> np.ndarray:
    """Basis of the right null space, one column per free variable."""
    R, pivots = rref(field, m)
    cols = R.shape[1]
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    K = field.zeros((cols, len(free)))
    one = field.coerce(1)
    for j, f in enumerate(free):
        K[f, j] = one
        for i, pc in enumerate(pivots):
            K[pc, j] = -R[i, f]
    return field.reduce(K)


def image_basis(field: Field, m) -> np.ndarray:
    """Canonical basis of the column space: reduced rows of rref(m^T)."""
    M = np.asarray(m)
    if M.shape[1] == 0:
        return field.zeros((M.shape[0], 0))
    R, pivots = rref(field, M.T)
    return np.ascontiguousarray(R[: len(pivots)].T)


def solve(field: Field, m, b):
    """One solution of ``m @ x = b`` (free variables zero), or None."""
    M = np.asarray(m)
    b = np.asarray(b)
    if b.ndim != 1 or b.shape[0] != M.shape[0]:
        raise DimensionError(f"rhs of length {b.shape} for {M.shape} matrix")
    x = solve_matrix(field, M, b.reshape(-1, 1))
    return None if x is None else x[:, 0]


def solve_matrix(field: Field, m, B):
    """Solve ``m @ X = B`` column by column; None if any column is unsolvable."""
    M = np.asarray(m)
    B = np.asarray(B)
    if B.ndim != 2 or B.shape[0] != M.shape[0]:
        raise DimensionError(f"rhs of shape {B.shape} for {M.shape} matrix")
    n = M.shape[1]
    aug = np.concatenate([as_field_array(field, M), as_field_array(field, B)], axis=1)
    R, pivots = rref(field, aug)
    if pivots and pivots[-1] >= n:
        return None
    X = field.zeros((n, B.shape[1]))
    for i, pc in enumerate(pivots):
        X[pc] = R[i, n:]
    return X


def inverse(field: Field, m) -> np.ndarray:
    M = np.asarray(m)
    n = M.shape[0]
    if M.shape != (n, n):
        raise DimensionError("inverse of a non-square matrix")
    X = solve_matrix(field, M, field.eye(n))
    if X is None:
        raise ExactLAError("matrix is singular")
    return X


def in_span(field: Field, basis, vectors) -> bool:
    basis = np.asarray(basis)
    vectors = np.asarray(vectors)
    if vectors.ndim == 1:
        vectors = vectors.reshape(-1, 1)
    if vectors.shape[1] == 0:
        return True
    if basis.shape[1] == 0:
        return field.is_zero(vectors)
    return rank(field, basis) == rank(field, np.concatenate([basis, vectors], axis=1))


def quotient_dim(field: Field, space_basis, subspace_basis) -> tuple[int, np.ndarray]:
    """Dimension of span(space)/span(sub) and coset representatives.

    Representatives are the columns of ``space_basis`` that become pivots when
    appended after ``subspace_basis``, so they extend the subspace basis.
    """
    S = np.asarray(space_basis)
    W = np.asarray(subspace_basis)
    if S.ndim != 2 or W.ndim != 2 or S.shape[0] != W.shape[0]:
        raise DimensionError("space and subspace must be column matrices of equal height")
    if not in_span(field, S, W):
        raise NotInSpanError("subspace is not contained in the space")
    if S.shape[1] == 0:
        return 0, field.zeros((S.shape[0], 0))
    _, pivots = rref(field, np.concatenate([W, S], axis=1))
    t = W.shape[1]
    chosen = [c - t for c in pivots if c >= t]
    return len(chosen), np.ascontiguousarray(S[:, chosen])


@dataclass(frozen=True, eq=False)
class QuotientSpace:
    """span(space)/span(sub) with fixed representatives and a coordinate map."""

    field: Field
    sub: np.ndarray   # independent columns
    reps: np.ndarray

    @classmethod
    def build(cls, field: Field, space_basis, subspace_basis) -> "QuotientSpace":
        _, reps = quotient_dim(field, space_basis, subspace_basis)
        sub = image_basis(field, subspace_basis)
        return cls(field, sub, reps)

    @property
    def dim(self) -> int:
        return self.reps.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.reps.shape[0]

    def coords(self, vectors) -> np.ndarray:
        """Quotient coordinates of vectors (columns) lying in the space."""
        V = np.asarray(vectors)
        single = V.ndim == 1
        if single:
            V = V.reshape(-1, 1)
        basis = np.concatenate([self.sub, self.reps], axis=1)
        X = solve_matrix(self.field, basis, V)
        if X is None:
            raise NotInSpanError("vector is not in the ambient space of the quotient")
        out = X[self.sub.shape[1]:]
        return out[:, 0] if single else out

    def lift(self, coords) -> np.ndarray:
        return self.field.dot(self.reps, coords)

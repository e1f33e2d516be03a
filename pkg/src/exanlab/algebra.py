"""Finite-dimensional associative unital algebras given by structure constants.

Conventions (fixed throughout the package):

* ``mul[i, j, k]`` is the coefficient of ``e_k`` in ``e_i * e_j``.
* ``unit`` is the coordinate vector of 1; it need not be a basis vector.
* Module actions are stacks of matrices acting on column vectors:
  ``left[i] @ u`` is ``e_i . u`` and ``right[i] @ u`` is ``u . e_i``.
* Maps ``A -> V`` are stored as ``dim V x dim A`` matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from .exactla import (
    Field,
    QuotientSpace,
    image_basis,
    inverse,
    kernel_basis,
    rank,
    solve_matrix,
)


class AlgebraError(Exception):
    pass


class InvalidStructureError(AlgebraError, ValueError):
    """Input violates the axioms of the structure it claims to be."""


class NotCommutativeError(AlgebraError, ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str
    index: tuple
    detail: str = ""

    def as_dict(self) -> dict:
        return {"kind": self.kind, "index": list(self.index), "detail": self.detail}


@dataclass
class ValidationReport:
    violations: list[Violation] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class Algebra:
    field: Field
    mul: np.ndarray
    unit: np.ndarray
    basis_names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        n = self.unit.shape[0]
        if self.mul.shape != (n, n, n):
            raise InvalidStructureError(
                f"structure constants of shape {self.mul.shape} for unit of length {n}"
            )
        if self.basis_names is not None and len(self.basis_names) != n:
            raise InvalidStructureError("basis_names has the wrong length")

    @property
    def dim(self) -> int:
        return self.unit.shape[0]

    @property
    def one(self) -> np.ndarray:
        return self.unit

    def basis(self, i: int) -> np.ndarray:
        return self.field.unit_vector(self.dim, i)

    def product(self, x, y) -> np.ndarray:
        F = self.field
        return F.tensordot(y, F.tensordot(x, self.mul, axes=([0], [0])), axes=([0], [0]))

    @property
    def left_mult(self) -> np.ndarray:
        """Stack ``L[i]`` with ``L[i] @ y = e_i * y``."""
        return np.ascontiguousarray(self.mul.transpose(0, 2, 1))

    @property
    def right_mult(self) -> np.ndarray:
        """Stack ``R[j]`` with ``R[j] @ x = x * e_j``."""
        return np.ascontiguousarray(self.mul.transpose(1, 2, 0))

    def left_matrix(self, x) -> np.ndarray:
        return self.field.tensordot(x, self.left_mult, axes=([0], [0]))

    def right_matrix(self, x) -> np.ndarray:
        return self.field.tensordot(x, self.right_mult, axes=([0], [0]))

    def is_commutative(self) -> bool:
        return not np.any(self.mul != self.mul.transpose(1, 0, 2))

    def require_commutative(self, what: str) -> None:
        if not self.is_commutative():
            raise NotCommutativeError(f"{what} requires a commutative algebra")

    def name(self, i: int) -> str:
        return self.basis_names[i] if self.basis_names else f"e{i}"


def make_algebra(field: Field, mul, unit, basis_names: Sequence[str] | None = None) -> Algebra:
    return Algebra(
        field,
        field.array(mul),
        field.array(unit),
        tuple(basis_names) if basis_names is not None else None,
    )


def validate_algebra(a: Algebra) -> ValidationReport:
    """Every failing associativity triple and unit identity, in index order."""
    F = a.field
    n = a.dim
    report = ValidationReport()
    lhs = F.einsum("ijl,lkm->ijkm", a.mul, a.mul)
    rhs = F.einsum("jkl,ilm->ijkm", a.mul, a.mul)
    bad = np.argwhere(np.any((lhs != rhs).reshape(n, n, n, -1), axis=3)) if n else []
    for i, j, k in bad:
        report.violations.append(
            Violation("associativity", (int(i), int(j), int(k)), "(e_i e_j) e_k != e_i (e_j e_k)")
        )
    eye = F.eye(n)
    left_unit = F.einsum("u,uim->im", a.unit, a.mul)
    right_unit = F.einsum("u,ium->im", a.unit, a.mul)
    for i in range(n):
        if np.any(left_unit[i] != eye[i]):
            report.violations.append(Violation("left_unit", (i,), "1 e_i != e_i"))
        if np.any(right_unit[i] != eye[i]):
            report.violations.append(Violation("right_unit", (i,), "e_i 1 != e_i"))
    return report


# ---------------------------------------------------------------------------
# modules


def _action_violations(a: Algebra, act: np.ndarray, side: str) -> list[Violation]:
    F = a.field
    n = a.dim
    dim = act.shape[1] if act.ndim == 3 else 0
    out = []
    # act(e_i e_j) vs composite
    combined = F.tensordot(a.mul, act, axes=([2], [0]))  # (i, j, dim, dim)
    for i in range(n):
        for j in range(n):
            if side == "left":
                comp = F.dot(act[i], act[j])
            else:
                comp = F.dot(act[j], act[i])
            if np.any(combined[i, j] != comp):
                out.append(Violation(f"{side}_action", (i, j), "action is not multiplicative"))
    unit_act = F.tensordot(a.unit, act, axes=([0], [0]))
    if np.any(unit_act != F.eye(dim)):
        out.append(Violation(f"{side}_unit", (), "1 does not act as the identity"))
    return out


def module_violations(a: Algebra, action: np.ndarray) -> list[Violation]:
    return _action_violations(a, action, "left")


def bimodule_violations(a: Algebra, left: np.ndarray, right: np.ndarray) -> list[Violation]:
    F = a.field
    bad = _action_violations(a, left, "left") + _action_violations(a, right, "right")
    for i in range(a.dim):
        for j in range(a.dim):
            if np.any(F.dot(left[i], right[j]) != F.dot(right[j], left[i])):
                bad.append(Violation("commute", (i, j), "left and right actions do not commute"))
    return bad


@dataclass(frozen=True, eq=False)
class LeftModule:
    algebra: Algebra
    action: np.ndarray

    def __post_init__(self):
        n = self.algebra.dim
        if self.action.ndim != 3 or self.action.shape[0] != n or self.action.shape[1] != self.action.shape[2]:
            raise InvalidStructureError(f"module action of shape {self.action.shape} for algebra of dim {n}")
        bad = _action_violations(self.algebra, self.action, "left")
        if bad:
            raise InvalidStructureError(f"not a left module: {bad[0]}")

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def field(self) -> Field:
        return self.algebra.field

    def act(self, x) -> np.ndarray:
        return self.field.tensordot(x, self.action, axes=([0], [0]))


@dataclass(frozen=True, eq=False)
class Bimodule:
    algebra: Algebra
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        n = self.algebra.dim
        for name, act in (("left", self.left), ("right", self.right)):
            if act.ndim != 3 or act.shape[0] != n or act.shape[1] != act.shape[2]:
                raise InvalidStructureError(f"{name} action of shape {act.shape} for algebra of dim {n}")
        if self.left.shape != self.right.shape:
            raise InvalidStructureError("left and right actions act on spaces of different dimension")
        bad = bimodule_violations(self.algebra, self.left, self.right)
        if bad:
            raise InvalidStructureError(f"not a bimodule: {bad[0]}")

    @property
    def dim(self) -> int:
        return self.left.shape[1]

    @property
    def field(self) -> Field:
        return self.algebra.field

    def act_left(self, x) -> np.ndarray:
        return self.field.tensordot(x, self.left, axes=([0], [0]))

    def act_right(self, x) -> np.ndarray:
        return self.field.tensordot(x, self.right, axes=([0], [0]))

    def left_module(self) -> LeftModule:
        return LeftModule(self.algebra, self.left)


@dataclass(frozen=True, eq=False)
class AlgebraMap:
    source: Algebra
    target: Algebra
    matrix: np.ndarray

    def __call__(self, x) -> np.ndarray:
        return self.target.field.dot(self.matrix, x)

    def violations(self) -> list[Violation]:
        F = self.target.field
        out = []
        M = self.matrix
        for i in range(self.source.dim):
            for j in range(self.source.dim):
                lhs = F.dot(M, self.source.mul[i, j])
                rhs = self.target.product(M[:, i], M[:, j])
                if np.any(lhs != rhs):
                    out.append(Violation("multiplicative", (i, j), "f(e_i e_j) != f(e_i) f(e_j)"))
        if np.any(F.dot(M, self.source.unit) != self.target.unit):
            out.append(Violation("unital", (), "f(1) != 1"))
        return out

    def is_isomorphism(self) -> bool:
        n = self.source.dim
        return (
            self.matrix.shape == (n, n)
            and self.target.dim == n
            and rank(self.target.field, self.matrix) == n
            and not self.violations()
        )


def regular_bimodule(a: Algebra) -> Bimodule:
    return Bimodule(a, a.left_mult, a.right_mult)


def regular_module(a: Algebra) -> LeftModule:
    return LeftModule(a, a.left_mult)


def zero_bimodule(a: Algebra) -> Bimodule:
    z = a.field.zeros((a.dim, 0, 0))
    return Bimodule(a, z, z.copy())


def hom_bimodule(m: LeftModule, n: LeftModule) -> Bimodule:
    """Hom_k(M, N) with (a.f)(x) = a f(x) and (f.a)(x) = f(a x).

    Elements are ``dim N x dim M`` matrices flattened row-major.
    """
    F = m.field
    a = m.algebra
    left = np.stack([np.kron(n.action[i], F.eye(m.dim)) for i in range(a.dim)]) if a.dim else F.zeros((0, 0, 0))
    right = np.stack([np.kron(F.eye(n.dim), m.action[i].T) for i in range(a.dim)]) if a.dim else F.zeros((0, 0, 0))
    return Bimodule(a, F.reduce(left), F.reduce(right))


def end_bimodule(a: Algebra, m: LeftModule) -> Bimodule:
    """End_k(M) as an A-bimodule; elements are flattened ``dim M x dim M`` matrices."""
    if m.algebra is not a:
        raise InvalidStructureError("module is over a different algebra")
    return hom_bimodule(m, m)


def direct_sum_bimodule(b1: Bimodule, b2: Bimodule) -> Bimodule:
    return Bimodule(b1.algebra, _block_diag_stack(b1.field, b1.left, b2.left), _block_diag_stack(b1.field, b1.right, b2.right))


def direct_sum_module(m1: LeftModule, m2: LeftModule) -> LeftModule:
    return LeftModule(m1.algebra, _block_diag_stack(m1.field, m1.action, m2.action))


def _block_diag_stack(F: Field, s1: np.ndarray, s2: np.ndarray) -> np.ndarray:
    n, d1, _ = s1.shape
    d2 = s2.shape[1]
    out = F.zeros((n, d1 + d2, d1 + d2))
    out[:, :d1, :d1] = s1
    out[:, d1:, d1:] = s2
    return out


# ---------------------------------------------------------------------------
# subspaces, submodules and quotients


def span_closure(F: Field, vectors: np.ndarray, operators: Sequence[np.ndarray]) -> np.ndarray:
    """Smallest subspace containing the columns of ``vectors`` stable under ``operators``."""
    W = image_basis(F, vectors)
    while True:
        blocks = [W] + [F.dot(op, W) for op in operators]
        W2 = image_basis(F, np.concatenate(blocks, axis=1))
        if W2.shape[1] == W.shape[1]:
            return W2
        W = W2


def _restrict(F: Field, act: np.ndarray, basis: np.ndarray) -> np.ndarray:
    mats = []
    for op in act:
        X = solve_matrix(F, basis, F.dot(op, basis))
        if X is None:
            raise InvalidStructureError("subspace is not invariant under the action")
        mats.append(X)
    k = basis.shape[1]
    return np.stack(mats) if mats else F.zeros((0, k, k))


def _descend(F: Field, act: np.ndarray, q: QuotientSpace) -> np.ndarray:
    mats = [q.coords(F.dot(op, q.reps)) for op in act]
    return np.stack(mats) if mats else F.zeros((0, q.dim, q.dim))


def submodule(m: LeftModule, basis) -> LeftModule:
    basis = image_basis(m.field, basis)
    return LeftModule(m.algebra, _restrict(m.field, m.action, basis))


def quotient_module(m: LeftModule, sub_basis) -> LeftModule:
    F = m.field
    q = QuotientSpace.build(F, F.eye(m.dim), sub_basis)
    return LeftModule(m.algebra, _descend(F, m.action, q))


def sub_bimodule(b: Bimodule, basis) -> Bimodule:
    F = b.field
    basis = image_basis(F, basis)
    return Bimodule(b.algebra, _restrict(F, b.left, basis), _restrict(F, b.right, basis))


def quotient_bimodule(b: Bimodule, sub_basis) -> Bimodule:
    F = b.field
    q = QuotientSpace.build(F, F.eye(b.dim), sub_basis)
    return Bimodule(b.algebra, _descend(F, b.left, q), _descend(F, b.right, q))


def generated_submodule(m: LeftModule, vectors) -> np.ndarray:
    return span_closure(m.field, np.asarray(vectors).reshape(m.dim, -1), list(m.action))


def generated_sub_bimodule(b: Bimodule, vectors) -> np.ndarray:
    return span_closure(b.field, np.asarray(vectors).reshape(b.dim, -1), list(b.left) + list(b.right))


def quotient_algebra(a: Algebra, ideal_basis) -> tuple[Algebra, QuotientSpace]:
    """A / J for a two-sided ideal J, on the echelon coset representatives."""
    F = a.field
    J = image_basis(F, ideal_basis)
    ops = list(a.left_mult) + list(a.right_mult)
    if span_closure(F, J, ops).shape[1] != J.shape[1]:
        raise InvalidStructureError("subspace is not a two-sided ideal")
    q = QuotientSpace.build(F, F.eye(a.dim), J)
    d = q.dim
    mul = F.zeros((d, d, d))
    for i in range(d):
        for j in range(d):
            mul[i, j] = q.coords(a.product(q.reps[:, i], q.reps[:, j]))
    return Algebra(F, mul, q.coords(a.unit)), q


def change_basis(a: Algebra, T) -> Algebra:
    """The same algebra written in the basis given by the columns of ``T``."""
    F = a.field
    T = np.asarray(T)
    Tinv = inverse(F, T)
    mixed = F.einsum("ia,jb,ijk->abk", T, T, a.mul)
    mul = F.einsum("ck,abk->abc", Tinv, mixed)
    return Algebra(F, mul, F.dot(Tinv, a.unit))


def transport_bimodule(b: Bimodule, new_algebra: Algebra, T, S=None) -> Bimodule:
    """Rewrite ``b`` over ``change_basis(b.algebra, T)``; optional module basis ``S``."""
    F = b.field
    left = F.tensordot(np.asarray(T).T, b.left, axes=([1], [0]))
    right = F.tensordot(np.asarray(T).T, b.right, axes=([1], [0]))
    if S is not None:
        Sinv = inverse(F, S)
        left = F.einsum("ij,ajk,kl->ail", Sinv, left, S)
        right = F.einsum("ij,ajk,kl->ail", Sinv, right, S)
    return Bimodule(new_algebra, left, right)


def transport_module(m: LeftModule, new_algebra: Algebra, T, S=None) -> LeftModule:
    F = m.field
    act = F.tensordot(np.asarray(T).T, m.action, axes=([1], [0]))
    if S is not None:
        Sinv = inverse(F, S)
        act = F.einsum("ij,ajk,kl->ail", Sinv, act, S)
    return LeftModule(new_algebra, act)


def tensor_product_algebra(a: Algebra, b: Algebra) -> Algebra:
    """A (x)_k B with basis e_i (x) f_j at index ``i * dim B + j``."""
    F = a.field
    n1, n2 = a.dim, b.dim
    mul = F.einsum("iks,jlt->ijklst", a.mul, b.mul).reshape(n1 * n2, n1 * n2, n1 * n2)
    return Algebra(F, mul, F.reduce(np.kron(a.unit, b.unit)))


def direct_product_algebra(a: Algebra, b: Algebra) -> Algebra:
    F = a.field
    n1, n2 = a.dim, b.dim
    mul = F.zeros((n1 + n2,) * 3)
    mul[:n1, :n1, :n1] = a.mul
    mul[n1:, n1:, n1:] = b.mul
    return Algebra(F, mul, np.concatenate([a.unit, b.unit]))


# ---------------------------------------------------------------------------
# center, derivations, differential operators


def center(a: Algebra) -> np.ndarray:
    """Basis (columns) of {z : z e_i = e_i z for all i}."""
    F = a.field
    n = a.dim
    # rows (i, k), columns j: coefficient of e_k in e_j e_i - e_i e_j
    eqs = F.reduce(a.mul.transpose(1, 2, 0) - a.mul.transpose(0, 2, 1)).reshape(n * n, n)
    return kernel_basis(F, eqs)


def is_central(a: Algebra, z) -> bool:
    F = a.field
    return not np.any(F.reduce(a.left_matrix(z) - a.right_matrix(z)) != 0)


def derivations(a: Algebra, i: Bimodule) -> np.ndarray:
    """Basis of Der_k(A, I) as a stack of ``dim I x dim A`` matrices (ker d^1)."""
    from .hochschild import differential_matrix

    F = a.field
    K = kernel_basis(F, differential_matrix(a, i, 1))
    return np.ascontiguousarray(K.T.reshape(K.shape[1], i.dim, a.dim))


def is_derivation(a: Algebra, i: Bimodule, delta) -> bool:
    F = a.field
    delta = np.asarray(delta)
    for x in range(a.dim):
        for y in range(a.dim):
            lhs = F.dot(delta, a.mul[x, y])
            rhs = F.reduce(F.dot(i.left[x], delta[:, y]) + F.dot(i.right[y], delta[:, x]))
            if np.any(lhs != rhs):
                return False
    return True


def diff_ops_1(a: Algebra) -> np.ndarray:
    """Basis of D^1(A) = {D in End_k(A) : [D, L_a] is a left multiplication}.

    Returned as a stack of ``n x n`` matrices.  Solved as one kernel in the
    unknowns (D, c_0, ..., c_{n-1}) with [D, L_{e_i}] = L_{c_i}.
    """
    F = a.field
    n = a.dim
    if n == 0:
        return F.zeros((0, 0, 0))
    L = a.left_mult
    eye = F.eye(n)
    V = L.reshape(n, n * n).T  # columns vec(L_k)
    blocks = []
    for i in range(n):
        row = [F.reduce(np.kron(eye, L[i].T) - np.kron(L[i], eye))]
        for j in range(n):
            row.append(F.reduce(-V) if j == i else F.zeros((n * n, n)))
        blocks.append(np.concatenate(row, axis=1))
    K = kernel_basis(F, np.concatenate(blocks, axis=0))
    D = image_basis(F, K[: n * n])
    return np.ascontiguousarray(D.T.reshape(D.shape[1], n, n))


def left_multiplications(a: Algebra) -> np.ndarray:
    return a.left_mult

"""Named algebras and modules used by the tests, fixtures and CLI examples."""

from __future__ import annotations

import numpy as np

from .algebra import (
    Algebra,
    InvalidStructureError,
    LeftModule,
    direct_product_algebra,
    quotient_module,
    regular_module,
    span_closure,
)
from .exactla import Field, image_basis, solve_matrix


def base_field_algebra(F: Field) -> Algebra:
    return Algebra(F, F.array([[[1]]]), F.array([1]), ("1",))


def truncated_polynomial(F: Field, d: int) -> Algebra:
    """k[x]/(x^d) on the basis 1, x, ..., x^(d-1)."""
    mul = F.zeros((d, d, d))
    for i in range(d):
        for j in range(d):
            if i + j < d:
                mul[i, j, i + j] = F.coerce(1)
    names = ["1", "x"] + [f"x^{k}" for k in range(2, d)]
    return Algebra(F, mul, F.unit_vector(d, 0), tuple(names[:d]))


def dual_numbers(F: Field) -> Algebra:
    a = truncated_polynomial(F, 2)
    return Algebra(F, a.mul, a.unit, ("1", "eps"))


def quotient_polynomial(F: Field, coeffs) -> Algebra:
    """k[x]/(f) for monic f = x^d + coeffs[d-1] x^(d-1) + ... + coeffs[0]."""
    d = len(coeffs)
    comp = F.zeros((d, d))
    for i in range(1, d):
        comp[i, i - 1] = F.coerce(1)
    for i in range(d):
        comp[i, d - 1] = F.coerce(-F.coerce(coeffs[i]))
    comp = F.reduce(comp)
    powers = [F.eye(d)]
    for _ in range(1, d):
        powers.append(F.dot(comp, powers[-1]))
    mul = F.zeros((d, d, d))
    for i in range(d):
        for j in range(d):
            mul[i, j] = powers[i][:, j]
    return Algebra(F, mul, F.unit_vector(d, 0))


def algebra_from_matrices(F: Field, mats, names=None) -> Algebra:
    """Structure constants of the matrix algebra spanned by ``mats`` (first must be I)."""
    mats = [F.array(m) if not isinstance(m, np.ndarray) else m for m in mats]
    n = len(mats)
    V = np.stack([m.reshape(-1) for m in mats], axis=1)
    mul = F.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            prod = F.dot(mats[i], mats[j]).reshape(-1, 1)
            x = solve_matrix(F, V, prod)
            if x is None:
                raise InvalidStructureError("span of matrices is not closed under multiplication")
            mul[i, j] = x[:, 0]
    unit = solve_matrix(F, V, F.eye(mats[0].shape[0]).reshape(-1, 1))
    if unit is None:
        raise InvalidStructureError("span of matrices does not contain the identity")
    return Algebra(F, mul, unit[:, 0], tuple(names) if names else None)


def matrix_units(F: Field, r: int) -> list[np.ndarray]:
    out = []
    for u in range(r):
        for v in range(r):
            m = F.zeros((r, r))
            m[u, v] = F.coerce(1)
            out.append(m)
    return out


def matrix_algebra(F: Field, r: int = 2) -> Algebra:
    """M_r(k) on matrix units E_uv (index u*r + v); E_uv E_wz = delta_vw E_uz."""
    n = r * r
    mul = F.zeros((n, n, n))
    for u in range(r):
        for v in range(r):
            for z in range(r):
                mul[u * r + v, v * r + z, u * r + z] = F.coerce(1)
    unit = F.zeros(n)
    for u in range(r):
        unit[u * r + u] = F.coerce(1)
    names = tuple(f"E{u}{v}" for u in range(r) for v in range(r))
    return Algebra(F, mul, unit, names)


def upper_triangular(F: Field) -> Algebra:
    """2x2 upper triangular matrices on E00, E01, E11."""
    units = matrix_units(F, 2)
    return algebra_from_matrices(F, [units[0] + units[3], units[1], units[3]], ("1", "E01", "E11"))


def exterior_algebra_2(F: Field) -> Algebra:
    """Exterior algebra on two generators: 1, x, y, xy with yx = -xy."""
    n = 4
    mul = F.zeros((n, n, n))
    one = F.coerce(1)
    for i in range(n):
        mul[0, i, i] = one
        mul[i, 0, i] = one
    mul[1, 2, 3] = one
    mul[2, 1, 3] = F.coerce(-1)
    return Algebra(F, F.reduce(mul), F.unit_vector(n, 0), ("1", "x", "y", "xy"))


def square_zero_plane(F: Field) -> Algebra:
    """k[x, y]/(x, y)^2."""
    mul = F.zeros((3, 3, 3))
    one = F.coerce(1)
    for i in range(3):
        mul[0, i, i] = one
        mul[i, 0, i] = one
    return Algebra(F, mul, F.unit_vector(3, 0), ("1", "x", "y"))


def two_nilpotents(F: Field) -> Algebra:
    """k[x, y]/(x^2, y^2) on 1, x, y, xy."""
    mul = F.zeros((4, 4, 4))
    one = F.coerce(1)
    for i in range(4):
        mul[0, i, i] = one
        mul[i, 0, i] = one
    mul[1, 2, 3] = one
    mul[2, 1, 3] = one
    return Algebra(F, mul, F.unit_vector(4, 0), ("1", "x", "y", "xy"))


def kronecker_algebra(F: Field) -> Algebra:
    """Path algebra of the Kronecker quiver 1 => 2 (basis e1, e2, a, b)."""
    return algebra_from_matrices(
        F,
        [
            F.array([[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
            F.array([[1, 0, 0], [0, 0, 0], [0, 0, 0]]),
            F.array([[0, 0, 0], [1, 0, 0], [0, 0, 0]]),
            F.array([[0, 0, 0], [0, 0, 0], [1, 0, 0]]),
        ],
        ("1", "e1", "a", "b"),
    )


def product_of_fields(F: Field, k: int) -> Algebra:
    a = base_field_algebra(F)
    for _ in range(k - 1):
        a = direct_product_algebra(a, base_field_algebra(F))
    return a


def catalog(F: Field) -> dict[str, Algebra]:
    """Fixed algebras of dimension <= 4."""
    return {
        "k": base_field_algebra(F),
        "k^2": product_of_fields(F, 2),
        "k^3": product_of_fields(F, 3),
        "dual": dual_numbers(F),
        "k[x]/x^3": truncated_polynomial(F, 3),
        "k[x]/x^4": truncated_polynomial(F, 4),
        "k[x,y]/(x,y)^2": square_zero_plane(F),
        "k[x,y]/(x^2,y^2)": two_nilpotents(F),
        "T2": upper_triangular(F),
        "T2xk": direct_product_algebra(upper_triangular(F), base_field_algebra(F)),
        "M2": matrix_algebra(F, 2),
        "ext2": exterior_algebra_2(F),
        "kronecker": kronecker_algebra(F),
        "dual x k": direct_product_algebra(dual_numbers(F), base_field_algebra(F)),
        "dual x dual": direct_product_algebra(dual_numbers(F), dual_numbers(F)),
    }


def cyclic_quotient(a: Algebra, v) -> LeftModule:
    """A / (A v) as a left module."""
    F = a.field
    v = F.array(v) if not isinstance(v, np.ndarray) else v
    ideal = span_closure(F, v.reshape(-1, 1), list(a.left_mult))
    return quotient_module(regular_module(a), ideal)


def natural_module(a: Algebra, mats) -> LeftModule:
    """Module k^r for an algebra presented by ``algebra_from_matrices(mats)``."""
    return LeftModule(a, np.stack(mats))


def simple_quotient(a: Algebra, ideal_vectors) -> LeftModule:
    F = a.field
    return quotient_module(regular_module(a), image_basis(F, np.asarray(ideal_vectors).reshape(a.dim, -1)))

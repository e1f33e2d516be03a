"""Square-zero extensions 0 -> I -> B -> A -> 0 and their 2-cocycles.

An extension algebra ``B`` is stored with an injection ``i: I -> B``
(``dim B x m``) and a projection ``p: B -> A`` (``n x dim B``).  Algebras
built from a cocycle use the basis (I-part first, A-part second) with

    (u, x)(v, y) = (u y + x v + C(x, y), x y).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import (
    Algebra,
    AlgebraError,
    AlgebraMap,
    Bimodule,
    ValidationReport,
    Violation,
    change_basis,
    is_central,
    quotient_bimodule,
    span_closure,
    validate_algebra,
)
from .exactla import QuotientSpace, in_span, inverse, rank, solve, solve_matrix
from .hochschild import Cochain, cohomology, differential_matrix, zero_cochain


class ExtensionError(AlgebraError, ValueError):
    pass


class NotACocycleError(ExtensionError):
    def __init__(self, triple: tuple[int, int, int], defect=None):
        super().__init__(f"cocycle identity fails on basis triple {triple}")
        self.triple = triple
        self.defect = defect


class SectionError(ExtensionError):
    pass


# ---------------------------------------------------------------------------
# the cocycle identity


@dataclass(frozen=True)
class CocycleCheck:
    ok: bool
    triple: Optional[tuple[int, int, int]] = None
    defect: Optional[np.ndarray] = None  # value in I of the failing identity

    def __bool__(self) -> bool:
        return self.ok


def cocycle_defect(c: Cochain, x: int) -> np.ndarray:
    """x C(y, z) - C(xy, z) + C(x, yz) - C(x, y) z for fixed basis x, as (m, y, z)."""
    a, i = c.algebra, c.bimodule
    F = a.field
    T = c.tensor
    t1 = F.einsum("uv,vyz->uyz", i.left[x], T)
    t2 = F.einsum("yw,uwz->uyz", a.mul[x], T)
    t3 = F.einsum("uw,yzw->uyz", T[:, x, :], a.mul)
    t4 = F.einsum("zuv,vy->uyz", i.right, T[:, x, :])
    return F.reduce(t1 - t2 + t3 - t4)


def is_cocycle(c: Cochain) -> CocycleCheck:
    """Check the cocycle identity on all basis triples, in lexicographic order."""
    if c.degree != 2:
        raise ValueError("the cocycle identity applies to 2-cochains")
    for x in range(c.algebra.dim):
        D = cocycle_defect(c, x)
        bad = np.argwhere(np.any(D != 0, axis=0))
        if len(bad):
            y, z = (int(v) for v in bad[0])
            return CocycleCheck(False, (x, y, z), D[:, y, z])
    return CocycleCheck(True)


@dataclass(frozen=True, eq=False)
class ExanData:
    cocycles: np.ndarray         # basis of exan_k(A, I) = ker d^2 (columns)
    inner: np.ndarray            # basis of the inner cocycles = im d^1
    representatives: np.ndarray  # complement of inner in exan

    @property
    def dim_exan(self) -> int:
        return self.cocycles.shape[1]

    @property
    def dim_inner(self) -> int:
        return self.inner.shape[1]

    @property
    def dim_hh2(self) -> int:
        return self.representatives.shape[1]


def exan_basis(a: Algebra, i: Bimodule) -> ExanData:
    h = cohomology(a, i, 2)
    if not in_span(a.field, h.cocycles, h.coboundaries):
        raise ExtensionError("inner cocycles are not contained in exan (internal error)")
    return ExanData(h.cocycles, h.coboundaries, h.representatives)


def inner_cocycle(a: Algebra, i: Bimodule, phi) -> Cochain:
    """C^phi(x, y) = x phi(y) - phi(xy) + phi(x) y."""
    F = a.field
    phi = np.asarray(phi).reshape(-1)
    vec = F.dot(differential_matrix(a, i, 1), phi)
    return Cochain(a, i, 2, vec.reshape(i.dim, a.dim**2))


# ---------------------------------------------------------------------------
# extension algebras


@dataclass(frozen=True, eq=False)
class ExtensionAlgebra:
    algebra: Algebra
    base: Algebra
    ideal_dim: int
    injection: np.ndarray   # I -> B
    projection: np.ndarray  # B -> A
    cocycle: Optional[Cochain] = None  # provenance, when built from a cocycle

    @property
    def field(self):
        return self.algebra.field

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def ideal_coords(self, vectors) -> np.ndarray:
        """Coordinates in I of vectors of B lying in i(I)."""
        V = np.asarray(vectors)
        X = solve_matrix(self.field, self.injection, V.reshape(self.dim, -1))
        if X is None:
            raise ExtensionError("vector does not lie in the marked ideal")
        return X[:, 0] if V.ndim == 1 else X


def _block_unit(F, m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    inj = F.zeros((m + n, m))
    inj[:m] = F.eye(m)
    proj = F.zeros((n, m + n))
    proj[:, m:] = F.eye(n)
    return inj, proj


def twisted_product_algebra(a: Algebra, i: Bimodule, c: Cochain) -> Algebra:
    """Structure constants of I (+)^C A without checking associativity.

    The unit is (-C(1, 1), 1); for a cocycle C(1, y) = C(1, 1) y and
    C(x, 1) = x C(1, 1), which makes this a two-sided unit.
    """
    F = a.field
    m, n = i.dim, a.dim
    mul = F.zeros((m + n,) * 3)
    for k in range(m):
        for j in range(n):
            mul[k, m + j, :m] = i.right[j][:, k]   # u_k . y
            mul[m + j, k, :m] = i.left[j][:, k]    # x . u_k
    T = c.tensor
    for x in range(n):
        for y in range(n):
            mul[m + x, m + y, :m] = T[:, x, y]
            mul[m + x, m + y, m:] = a.mul[x, y]
    unit = np.concatenate([F.reduce(-c.evaluate(a.unit, a.unit)), a.unit])
    names = None
    if a.basis_names:
        names = tuple(f"u{k}" for k in range(m)) + a.basis_names
    return Algebra(F, mul, unit, names)


def build_extension(a: Algebra, i: Bimodule, c: Cochain) -> ExtensionAlgebra:
    """B^C = I (+)^C A; refuses non-cocycles with the first violating triple."""
    if c.algebra is not a or c.bimodule is not i or c.degree != 2:
        raise ExtensionError("cochain does not belong to C^2(A, I)")
    check = is_cocycle(c)
    if not check:
        raise NotACocycleError(check.triple, check.defect)
    inj, proj = _block_unit(a.field, i.dim, a.dim)
    return ExtensionAlgebra(twisted_product_algebra(a, i, c), a, i.dim, inj, proj, c)


def trivial_extension(a: Algebra, i: Bimodule) -> ExtensionAlgebra:
    return build_extension(a, i, zero_cochain(a, i, 2))


def base_from_projection(b: Algebra, projection) -> Algebra:
    """A = B / ker p on the coordinates of p (assumes p is a surjective algebra map)."""
    F = b.field
    P = np.asarray(projection)
    n = P.shape[0]
    pre = solve_matrix(F, P, F.eye(n))
    if pre is None:
        raise ExtensionError("projection is not surjective")
    mul = F.zeros((n, n, n))
    for x in range(n):
        for y in range(n):
            mul[x, y] = F.dot(P, b.product(pre[:, x], pre[:, y]))
    return Algebra(F, mul, F.dot(P, b.unit))


def make_extension(b: Algebra, ideal_dim: int, injection, projection, cocycle=None) -> ExtensionAlgebra:
    """Extension from raw data; raises ExtensionError if it does not validate."""
    F = b.field
    inj = np.asarray(injection)
    proj = np.asarray(projection)
    n = b.dim - ideal_dim
    if inj.shape != (b.dim, ideal_dim) or proj.shape != (n, b.dim):
        raise ExtensionError(
            f"injection {inj.shape} / projection {proj.shape} do not fit dim B = {b.dim}, dim I = {ideal_dim}"
        )
    if rank(F, proj) != n:
        raise ExtensionError("projection is not surjective")
    ext = ExtensionAlgebra(b, base_from_projection(b, proj), ideal_dim, inj, proj, cocycle)
    report = validate_extension(ext)
    if not report.ok:
        raise ExtensionError(f"invalid extension: {report.violations[0]}")
    return ext


def validate_extension(ext: ExtensionAlgebra) -> ValidationReport:
    """Algebra axioms, exactness, i(I) a square-zero ideal, p an algebra map."""
    B, A = ext.algebra, ext.base
    F = B.field
    report = validate_algebra(B)
    m, n = ext.ideal_dim, A.dim
    inj, proj = ext.injection, ext.projection
    if m + n != B.dim:
        report.violations.append(Violation("dimension", (), "dim I + dim A != dim B"))
        return report
    if rank(F, inj) != m:
        report.violations.append(Violation("injection", (), "i is not injective"))
    if rank(F, proj) != n:
        report.violations.append(Violation("projection", (), "p is not surjective"))
    if not F.is_zero(F.dot(proj, inj)):
        report.violations.append(Violation("exactness", (), "p o i != 0"))
    if not report.ok:
        return report
    left = F.tensordot(B.left_mult, inj, axes=([2], [0]))    # (e, row, k)
    right = F.tensordot(B.right_mult, inj, axes=([2], [0]))
    for side, prods in (("left", left), ("right", right)):
        if m and not in_span(F, inj, np.concatenate(list(prods), axis=1)):
            for e in range(B.dim):
                for k in range(m):
                    if not in_span(F, inj, prods[e][:, k]):
                        report.violations.append(Violation("ideal", (e, k), f"{side} product leaves i(I)"))
    squares = F.einsum("ak,bl,abc->klc", inj, inj, B.mul)
    for k, l in np.argwhere(np.any(squares != 0, axis=2)):
        report.violations.append(Violation("square_zero", (int(k), int(l)), "i(u_k) i(u_l) != 0"))
    report.violations.extend(AlgebraMap(B, A, proj).violations())
    return report


# ---------------------------------------------------------------------------
# sections


@dataclass(frozen=True, eq=False)
class Section:
    extension: ExtensionAlgebra
    matrix: np.ndarray  # A -> B

    def __post_init__(self):
        ext = self.extension
        F = ext.field
        if self.matrix.shape != (ext.dim, ext.base.dim):
            raise SectionError(f"section matrix of shape {self.matrix.shape}")
        if np.any(F.dot(ext.projection, self.matrix) != F.eye(ext.base.dim)):
            raise SectionError("p o s != id")
        if np.any(F.dot(self.matrix, ext.base.unit) != ext.algebra.unit):
            raise SectionError("s(1) != 1")

    def __call__(self, x) -> np.ndarray:
        return self.extension.field.dot(self.matrix, x)


def choose_section(ext: ExtensionAlgebra, column_order=None) -> Section:
    """Deterministic section from echelon preimages, corrected so that s(1) = 1.

    ``column_order`` permutes the coordinates of B before elimination, which
    yields a different (equally deterministic) section.
    """
    F = ext.field
    A = ext.base
    n = A.dim
    order = np.arange(ext.dim) if column_order is None else np.asarray(column_order)
    X = solve_matrix(F, ext.projection[:, order], F.eye(n))
    if X is None:
        raise SectionError("projection is not surjective")
    S0 = F.zeros((ext.dim, n))
    S0[order] = X
    # the discrepancy lies in ker p = i(I); spread it along a functional with eps(1) = 1
    delta = F.reduce(ext.algebra.unit - F.dot(S0, A.unit))
    j = int(np.flatnonzero(A.unit != 0)[0])
    eps = F.zeros(n)
    eps[j] = F.inv(A.unit[j])
    return Section(ext, F.reduce(S0 + np.outer(delta, eps)))


def canonical_section(ext: ExtensionAlgebra) -> Section:
    """x -> (0, x) for extensions built from a normalized cocycle; else choose_section."""
    F = ext.field
    m, n = ext.ideal_dim, ext.base.dim
    S = F.zeros((ext.dim, n))
    S[m:] = F.eye(n)
    try:
        return Section(ext, S)
    except SectionError:
        return choose_section(ext)


def shifted_section(s: Section, phi) -> Section:
    """s + i o phi for a linear phi: A -> I with phi(1) = 0."""
    ext = s.extension
    F = ext.field
    return Section(ext, F.reduce(s.matrix + F.dot(ext.injection, np.asarray(phi))))


def random_section(ext: ExtensionAlgebra, rng: random.Random) -> Section:
    F = ext.field
    s = choose_section(ext)
    m, n = ext.ideal_dim, ext.base.dim
    phi = F.random_array(rng, (m, n))
    # kill phi on 1: subtract phi(1) eps
    j = int(np.flatnonzero(ext.base.unit != 0)[0])
    eps = F.zeros(n)
    eps[j] = F.inv(ext.base.unit[j])
    phi = F.reduce(phi - np.outer(F.dot(phi, ext.base.unit), eps))
    return shifted_section(s, phi)


def induced_bimodule(ext: ExtensionAlgebra, s: Section) -> Bimodule:
    """x u = s(x) u and u x = u s(x) on I."""
    B = ext.algebra
    F = ext.field
    n = ext.base.dim
    inj = ext.injection
    left, right = [], []
    for x in range(n):
        sx = s.matrix[:, x]
        left.append(ext.ideal_coords(F.dot(B.left_matrix(sx), inj)))
        right.append(ext.ideal_coords(F.dot(B.right_matrix(sx), inj)))
    m = ext.ideal_dim
    stack = lambda mats: np.stack(mats) if mats else F.zeros((0, m, m))
    return Bimodule(ext.base, stack(left), stack(right))


def extract_cocycle(ext: ExtensionAlgebra, s: Section) -> tuple[Cochain, Bimodule]:
    """C(x, y) = s(x) s(y) - s(xy) in I-coordinates, with the induced bimodule."""
    if s.extension is not ext:
        raise SectionError("section belongs to a different extension")
    B, A = ext.algebra, ext.base
    F = ext.field
    n = A.dim
    bim = induced_bimodule(ext, s)
    cols = []
    for x in range(n):
        for y in range(n):
            v = F.reduce(B.product(s.matrix[:, x], s.matrix[:, y]) - F.dot(s.matrix, A.mul[x, y]))
            cols.append(v)
    C = ext.ideal_coords(np.stack(cols, axis=1)) if cols else F.zeros((ext.ideal_dim, 0))
    c = Cochain(A, bim, 2, C)
    check = is_cocycle(c)
    if not check:
        raise ExtensionError(f"extracted cochain fails the cocycle identity at {check.triple} (internal error)")
    return c, bim


def rebuild_isomorphism(ext: ExtensionAlgebra, s: Section) -> AlgebraMap:
    """phi(b) = (b - s p(b), p(b)) onto I (+)^C A, verified."""
    F = ext.field
    c, bim = extract_cocycle(ext, s)
    target = build_extension(ext.base, bim, c)
    resid = F.reduce(F.eye(ext.dim) - F.dot(s.matrix, ext.projection))
    phi = np.concatenate([ext.ideal_coords(resid), ext.projection], axis=0)
    f = AlgebraMap(ext.algebra, target.algebra, phi)
    if not f.is_isomorphism():
        raise ExtensionError("rebuilt map is not an algebra isomorphism (internal error)")
    if np.any(F.dot(phi, ext.injection) != target.injection):
        raise ExtensionError("rebuilt map does not restrict to the identity on I (internal error)")
    if np.any(F.dot(target.projection, phi) != ext.projection):
        raise ExtensionError("rebuilt map does not commute with the projections (internal error)")
    return f


def scramble_extension(ext: ExtensionAlgebra, T) -> ExtensionAlgebra:
    """The same extension written in the basis of B given by the columns of T."""
    F = ext.field
    T = np.asarray(T)
    Tinv = inverse(F, T)
    B2 = change_basis(ext.algebra, T)
    return ExtensionAlgebra(B2, ext.base, ext.ideal_dim, F.dot(Tinv, ext.injection), F.dot(ext.projection, T), None)


# ---------------------------------------------------------------------------
# equivalence, central action, quotient


@dataclass(frozen=True, eq=False)
class EquivResult:
    verdict: bool
    mode: str
    witness: Optional[Cochain] = None  # phi with d^1 phi = c1 - c2 (inner mode)

    def __bool__(self) -> bool:
        return self.verdict


def equiv(c1: Cochain, c2: Cochain, mode: str = "inner") -> EquivResult:
    """strict: equal cochains.  inner: c1 - c2 is an inner cocycle."""
    if c1.algebra is not c2.algebra or c1.bimodule is not c2.bimodule or c1.degree != c2.degree:
        raise ExtensionError("cochains live in different complexes")
    if mode == "strict":
        return EquivResult(c1.same_as(c2), mode)
    if mode != "inner":
        raise ValueError(f"unknown equivalence mode {mode!r}")
    a, i = c1.algebra, c1.bimodule
    diff = (c1 - c2).matrix.reshape(-1)
    phi = solve(a.field, differential_matrix(a, i, 1), diff)
    if phi is None:
        return EquivResult(False, mode)
    return EquivResult(True, mode, Cochain(a, i, 1, phi.reshape(i.dim, a.dim)))


def caction(z, c: Cochain, side: str = "left") -> Cochain:
    """(zC)(x, y) = z C(x, y) or (Cz)(x, y) = C(x, y) z for central z."""
    a, i = c.algebra, c.bimodule
    F = a.field
    z = np.asarray(z)
    if not is_central(a, z):
        raise ExtensionError("element is not central")
    if side == "left":
        op = i.act_left(z)
    elif side == "right":
        op = i.act_right(z)
    else:
        raise ValueError(f"unknown side {side!r}")
    out = c.with_matrix(F.dot(op, c.matrix))
    if c.degree == 2 and is_cocycle(c) and not is_cocycle(out):
        raise ExtensionError("central action left exan (internal error)")
    return out


@dataclass(frozen=True, eq=False)
class QuotientExtension:
    extension: ExtensionAlgebra  # D^C on the basis (I/J reps, A)
    ideal: np.ndarray            # basis of J in I-coordinates
    quotient_map: AlgebraMap     # B^C -> D^C

    @property
    def dim_j(self) -> int:
        return self.ideal.shape[1]


def quotient_extension(ext: ExtensionAlgebra) -> QuotientExtension:
    """D^C = B^C / J with J the two-sided ideal generated by Im(C)."""
    c = ext.cocycle
    if c is None:
        raise ExtensionError("extension carries no cocycle")
    B, A = ext.algebra, ext.base
    F = ext.field
    i = c.bimodule
    m = ext.ideal_dim
    gens = F.dot(ext.injection, c.matrix)
    Jb = span_closure(F, gens, list(B.left_mult) + list(B.right_mult))
    J = ext.ideal_coords(Jb) if Jb.shape[1] else F.zeros((m, 0))
    q = QuotientSpace.build(F, F.eye(m), J)
    ibar = quotient_bimodule(i, J)
    D = trivial_extension(A, ibar)
    # (u, x) -> (q(u), x)
    mat = F.zeros((D.dim, B.dim))
    mat[: q.dim, :m] = q.coords(F.eye(m)) if m else F.zeros((q.dim, 0))
    mat[q.dim :, m:] = F.eye(A.dim)
    f = AlgebraMap(B, D.algebra, mat)
    if f.violations():
        raise ExtensionError("B^C -> D^C is not an algebra map (internal error)")
    if np.any(F.dot(D.projection, mat) != ext.projection):
        raise ExtensionError("quotient does not commute with the projections (internal error)")
    return QuotientExtension(D, J, f)

"""First-order jets: I (x)_A E, the jet module Pr^1_I(E), Kaehler differentials
and connections.

Elements of I (x)_k E use the index ``a * dim E + e`` for ``u_a (x) e_e``
(the ``np.kron`` convention).  I (x)_A E is the quotient by the span of
``(u x) (x) e - u (x) (x e)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import (
    Algebra,
    AlgebraMap,
    Bimodule,
    LeftModule,
    derivations,
    is_derivation,
    quotient_algebra,
    tensor_product_algebra,
)
from .exactla import QuotientSpace, image_basis, kernel_basis, rank, solve
from .extensions import ExtensionError, is_cocycle, twisted_product_algebra
from .hochschild import Cochain


# ---------------------------------------------------------------------------
# I (x)_A E


@dataclass(frozen=True, eq=False)
class TensorOverA:
    bimodule: Bimodule
    module: LeftModule
    relations: np.ndarray   # spanning columns inside I (x)_k E
    space: QuotientSpace
    projection: np.ndarray  # I (x)_k E -> I (x)_A E

    @property
    def dim(self) -> int:
        return self.space.dim

    def left_action(self) -> np.ndarray:
        """Stack of x . (w (x) e) = (x w) (x) e on I (x)_A E."""
        F = self.bimodule.field
        r = self.module.dim
        mats = [
            F.dot(self.projection, F.dot(F.reduce(np.kron(lx, F.eye(r))), self.space.reps))
            for lx in self.bimodule.left
        ]
        return np.stack(mats) if mats else F.zeros((0, self.dim, self.dim))

    def pure(self, w, e) -> np.ndarray:
        """Class of w (x) e."""
        F = self.bimodule.field
        return F.dot(self.projection, F.reduce(np.kron(w, e)))


def tensor_over_A(i: Bimodule, e: LeftModule) -> TensorOverA:
    if i.algebra is not e.algebra:
        raise ValueError("bimodule and module are over different algebras")
    F = i.field
    m, r = i.dim, e.dim
    blocks = [F.reduce(np.kron(i.right[x], F.eye(r)) - np.kron(F.eye(m), e.action[x])) for x in range(i.algebra.dim)]
    R = np.concatenate(blocks, axis=1) if blocks else F.zeros((m * r, 0))
    q = QuotientSpace.build(F, F.eye(m * r), R)
    P = q.coords(F.eye(m * r)) if m * r else F.zeros((q.dim, 0))
    if R.size and not F.is_zero(F.dot(P, R)):
        raise ValueError("tensor relations survive in the quotient (internal error)")
    return TensorOverA(i, e, R, q, P)


def derivation_space(a: Algebra, i: Bimodule) -> np.ndarray:
    """Basis of Der_k(A, I) as a stack of ``dim I x dim A`` matrices."""
    return derivations(a, i)


# ---------------------------------------------------------------------------
# the jet module Pr^1_I(E)


@dataclass(frozen=True, eq=False)
class JetModule:
    tensor: TensorOverA
    extension: Algebra        # B^C on the basis (I, A)
    action: np.ndarray        # action[b] on (I (x)_A E) (+) E
    derivation: np.ndarray
    associative: bool
    unital: bool
    criterion: bool           # C(y, x) (x) f = 0 for all y, x, f
    first_failure: Optional[tuple[int, int]] = None  # basis pair of B^C

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def is_module(self) -> bool:
        return self.associative and self.unital

    @property
    def verdicts_agree(self) -> bool:
        return self.is_module == self.criterion


def jet_action(a: Algebra, i: Bimodule, e: LeftModule, c: Cochain, d=None) -> JetModule:
    """(u, x)(w (x) e, f) = (u (x) f + x w (x) e + d(x) (x) f, x f).

    Associativity is tested directly on the action matrices and compared
    with the tensor criterion C(y, x) (x) f = 0.
    """
    F = a.field
    if c.algebra is not a or c.bimodule is not i or c.degree != 2:
        raise ExtensionError("cochain does not belong to C^2(A, I)")
    check = is_cocycle(c)
    if not check:
        raise ExtensionError(f"cochain is not a cocycle (fails at {check.triple})")
    if d is None:
        ders = derivation_space(a, i)
        d = ders[0] if len(ders) else F.zeros((i.dim, a.dim))
    d = np.asarray(d)
    if d.shape != (i.dim, a.dim) or not is_derivation(a, i, d):
        raise ExtensionError("d is not a derivation A -> I")

    T = tensor_over_A(i, e)
    P = T.projection
    m, n, r, t = i.dim, a.dim, e.dim, T.dim
    B = twisted_product_algebra(a, i, c)
    X = T.left_action()
    eye_r = F.eye(r)
    mats = []
    for k in range(m):
        Lam = F.zeros((t + r, t + r))
        Lam[:t, t:] = P[:, k * r:(k + 1) * r]
        mats.append(Lam)
    for x in range(n):
        Lam = F.zeros((t + r, t + r))
        Lam[:t, :t] = X[x]
        Lam[:t, t:] = F.dot(P, F.reduce(np.kron(d[:, x : x + 1], eye_r)))
        Lam[t:, t:] = e.action[x]
        mats.append(Lam)
    action = np.stack(mats)

    combined = F.tensordot(B.mul, action, axes=([2], [0]))
    failure = None
    for p in range(B.dim):
        for q in range(B.dim):
            if np.any(combined[p, q] != F.dot(action[p], action[q])):
                failure = (p, q)
                break
        if failure:
            break
    unital = not np.any(F.tensordot(B.unit, action, axes=([0], [0])) != F.eye(t + r))

    # independent test: P (C (x) id_E) = 0
    crit = F.is_zero(F.dot(P, F.reduce(np.kron(c.matrix, eye_r)))) if t else True
    return JetModule(T, B, action, d, failure is None, unital, crit, failure)


# ---------------------------------------------------------------------------
# Kaehler differentials


@dataclass(frozen=True, eq=False)
class KaehlerData:
    algebra: Algebra
    tensor_square: Algebra      # A (x)_k A
    diagonal: np.ndarray        # basis of I_Delta = ker(mu)
    diagonal_sq: np.ndarray     # basis of I_Delta^2
    omega: QuotientSpace        # I_Delta / I_Delta^2
    omega_bimodule: Bimodule    # a . w = (a (x) 1) w, symmetric
    jets: Algebra               # Pr^1 = A (x) A / I_Delta^2
    jets_space: QuotientSpace
    d: np.ndarray               # universal derivation, dim Omega x dim A
    inclusion: np.ndarray       # Omega -> Pr^1
    projection: np.ndarray      # Pr^1 -> A
    splitting: np.ndarray       # A -> Pr^1, a -> [a (x) 1]
    retraction: np.ndarray      # Pr^1 -> Omega, xi -> xi - s(p(xi))

    @property
    def dim_omega(self) -> int:
        return self.omega.dim

    def split_coords(self, xi) -> tuple[np.ndarray, np.ndarray]:
        """Pr^1 element as (omega, a)."""
        F = self.algebra.field
        return F.dot(self.retraction, xi), F.dot(self.projection, xi)

    def from_split(self, w, a) -> np.ndarray:
        F = self.algebra.field
        return F.reduce(F.dot(self.inclusion, w) + F.dot(self.splitting, a))


def kaehler(a: Algebra) -> KaehlerData:
    a.require_commutative("Kaehler differentials")
    F = a.field
    n = a.dim
    AA = tensor_product_algebra(a, a)
    mu = np.ascontiguousarray(a.mul.reshape(n * n, n).T)
    I = kernel_basis(F, mu)
    k = I.shape[1]
    prods = [AA.product(I[:, p], I[:, q]) for p in range(k) for q in range(k)]
    I2 = image_basis(F, np.stack(prods, axis=1)) if prods else F.zeros((n * n, 0))
    omega = QuotientSpace.build(F, I, I2)
    jets, jq = quotient_algebra(AA, I2)

    one = a.unit
    left_emb = np.stack([F.reduce(np.kron(a.basis(x), one)) for x in range(n)], axis=1)   # a (x) 1
    right_emb = np.stack([F.reduce(np.kron(one, a.basis(x))) for x in range(n)], axis=1)  # 1 (x) a
    d = omega.coords(F.reduce(right_emb - left_emb)) if omega.dim or n else F.zeros((0, n))

    act = []
    for x in range(n):
        Lx = AA.left_matrix(left_emb[:, x])
        act.append(omega.coords(F.dot(Lx, omega.reps)))
    act = np.stack(act)
    omega_bim = Bimodule(a, act, act.copy())

    inclusion = jq.coords(omega.reps) if omega.dim else F.zeros((jets.dim, 0))
    projection = F.dot(mu, jq.reps)
    splitting = jq.coords(left_emb)
    resid = F.reduce(F.eye(jets.dim) - F.dot(splitting, projection))
    retraction = omega.coords(F.dot(jq.reps, resid)) if omega.dim else F.zeros((0, jets.dim))
    # a representative of resid lies in I_Delta only modulo I_Delta^2; coords handles that
    data = KaehlerData(a, AA, I, I2, omega, omega_bim, jets, jq, d, inclusion, projection, splitting, retraction)
    problems = kaehler_problems(data)
    if problems:
        raise ExtensionError(f"Kaehler data failed its checks: {problems[0]} (internal error)")
    return data


def kaehler_problems(k: KaehlerData) -> list[str]:
    """Exactness, splitting and product-formula checks; empty when all hold."""
    a = k.algebra
    F = a.field
    n, w = a.dim, k.dim_omega
    out = []
    if not is_derivation(a, k.omega_bimodule, k.d):
        out.append("d is not a derivation")
    if rank(F, k.inclusion) != w:
        out.append("Omega -> Pr^1 is not injective")
    if rank(F, k.projection) != n:
        out.append("Pr^1 -> A is not surjective")
    if w + n != k.jets.dim:
        out.append("dimensions do not add up")
    if not F.is_zero(F.dot(k.projection, k.inclusion)):
        out.append("p o i != 0")
    if np.any(F.dot(k.projection, k.splitting) != F.eye(n)):
        out.append("p o s != id")
    if np.any(F.dot(k.retraction, k.inclusion) != F.eye(w)):
        out.append("r o i != id")
    if AlgebraMap(a, k.jets, k.splitting).violations():
        out.append("splitting is not an algebra map")
    out.extend(product_formula_failures(k))
    return out


def product_formula_failures(k: KaehlerData, literal: bool = False) -> list[str]:
    """Compare products in Pr^1 with (w, a)(h, b) = (w b + a h, ab) on basis pairs.

    With ``literal=True`` the comparison uses (w a + b h, ab) instead.
    """
    a = k.algebra
    F = a.field
    n, w = a.dim, k.dim_omega
    omega_act = k.omega_bimodule.left
    out = []
    basis = [(F.unit_vector(w, i), F.zeros(n)) for i in range(w)] + [(F.zeros(w), a.basis(x)) for x in range(n)]
    for p, (w1, a1) in enumerate(basis):
        for q, (w2, a2) in enumerate(basis):
            got = k.jets.product(k.from_split(w1, a1), k.from_split(w2, a2))
            if literal:
                wpart = F.reduce(F.dot(F.tensordot(a1, omega_act, axes=([0], [0])), w1) + F.dot(F.tensordot(a2, omega_act, axes=([0], [0])), w2))
            else:
                wpart = F.reduce(F.dot(F.tensordot(a2, omega_act, axes=([0], [0])), w1) + F.dot(F.tensordot(a1, omega_act, axes=([0], [0])), w2))
            want = k.from_split(wpart, a.product(a1, a2))
            if np.any(got != want):
                out.append(f"product formula fails on basis pair {(p, q)}")
    return out


# ---------------------------------------------------------------------------
# connections


@dataclass(frozen=True, eq=False)
class ConnectionResult:
    exists: bool
    tensor: TensorOverA
    matrix: Optional[np.ndarray] = None  # E -> F (x)_A E

    def __bool__(self) -> bool:
        return self.exists


def leibniz_defect(a: Algebra, e: LeftModule, T: TensorOverA, d, nabla) -> list[int]:
    """Basis elements x where nabla(x e) != x nabla(e) + d(x) (x) e."""
    F = a.field
    X = T.left_action()
    r = e.dim
    bad = []
    for x in range(a.dim):
        lhs = F.reduce(F.dot(nabla, e.action[x]) - F.dot(X[x], nabla))
        rhs = F.dot(T.projection, F.reduce(np.kron(np.asarray(d)[:, x : x + 1], F.eye(r))))
        if np.any(lhs != rhs):
            bad.append(x)
    return bad


def connection_exists(a: Algebra, e: LeftModule, f: Bimodule, d) -> ConnectionResult:
    """Solve nabla(x e) = x nabla(e) + d(x) (x) e for nabla: E -> F (x)_A E."""
    F = a.field
    d = np.asarray(d)
    if d.shape != (f.dim, a.dim) or not is_derivation(a, f, d):
        raise ExtensionError("d is not a derivation A -> F")
    T = tensor_over_A(f, e)
    X = T.left_action()
    t, r = T.dim, e.dim
    if t == 0:
        return ConnectionResult(True, T, F.zeros((0, r)))
    # row-major vec: vec(N M) = (I (x) M^T) vec N, vec(X N) = (X (x) I) vec N
    blocks, rhs = [], []
    for x in range(a.dim):
        blocks.append(F.reduce(np.kron(F.eye(t), e.action[x].T) - np.kron(X[x], F.eye(r))))
        rhs.append(F.dot(T.projection, F.reduce(np.kron(d[:, x : x + 1], F.eye(r)))).reshape(-1))
    sol = solve(F, np.concatenate(blocks, axis=0), np.concatenate(rhs))
    if sol is None:
        return ConnectionResult(False, T)
    nabla = sol.reshape(t, r)
    if leibniz_defect(a, e, T, d, nabla):
        raise ExtensionError("solved connection violates the Leibniz rule (internal error)")
    return ConnectionResult(True, T, nabla)

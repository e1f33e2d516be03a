"""The non-commutative Kodaira-Spencer map of a module and its kernel.

For a left A-module M, a first-order differential operator D on A gives the
1-cochain f(D)(a) = [D, a] acting on M, that is a -> lambda_M(D(a) - a D(1)).
On derivations this is a -> lambda_M(delta(a)); its class in
HH^1(A, End_k(M)) is g(delta).  The kernel V_M of g consists of the delta
admitting nabla in End_k(M) with

    nabla(a m) = a nabla(m) + delta(a) m.

End_k(M) is the bimodule (a.phi)(m) = a phi(m), (phi.a)(m) = phi(a m), with
elements flattened row-major, so d^0(phi)(a) = lambda_a phi - phi lambda_a and
a witness is nabla = -phi for d^0(phi) = f(delta).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .algebra import (
    Algebra,
    LeftModule,
    derivations,
    diff_ops_1,
    end_bimodule,
    regular_bimodule,
)
from .exactla import QuotientSpace, image_basis, kernel_basis, solve
from .hochschild import cohomology, differential_matrix


class StaleReportError(ValueError):
    pass


def f_cochain(a: Algebra, m: LeftModule, D) -> np.ndarray:
    """f(D) as a ``dim M^2 x dim A`` matrix (column x is lambda_M(D(e_x) - e_x D(1)) flattened)."""
    F = a.field
    D = np.asarray(D)
    d1 = F.dot(D, a.unit)
    comm = F.reduce(D - a.right_matrix(d1))  # e_x -> D(e_x) - e_x D(1)
    lam = F.tensordot(comm, m.action, axes=([0], [0]))  # (x, r, r)
    return np.ascontiguousarray(lam.reshape(a.dim, -1).T)


def derivation_cochain(a: Algebra, m: LeftModule, delta) -> np.ndarray:
    """a -> lambda_M(delta(a)) as a ``dim M^2 x dim A`` matrix."""
    F = a.field
    lam = F.tensordot(np.asarray(delta), m.action, axes=([0], [0]))
    return np.ascontiguousarray(lam.reshape(a.dim, -1).T)


def leibniz_ok(a: Algebra, m: LeftModule, delta, nabla) -> bool:
    """nabla lambda_x - lambda_x nabla = lambda_{delta(x)} for every basis x."""
    F = a.field
    delta = np.asarray(delta)
    for x in range(a.dim):
        lhs = F.reduce(F.dot(nabla, m.action[x]) - F.dot(m.action[x], nabla))
        if np.any(lhs != m.act(delta[:, x])):
            return False
    return True


@dataclass(frozen=True, eq=False)
class KSReport:
    algebra: Algebra
    module: LeftModule
    d1: np.ndarray          # basis of D^1(A), stack of n x n
    der: np.ndarray         # basis of Der_k(A), stack of n x n
    dim_ext1: int           # dim HH^1(A, End_k(M))
    g: np.ndarray           # dim_ext1 x dim Der, in the HH^1 representative basis
    vm: np.ndarray          # basis of V_M, stack of n x n
    witnesses: np.ndarray   # nabla(delta) for each V_M basis vector, stack of r x r
    f_d1: np.ndarray = dc_field(repr=False)  # f on the D^1 basis, stack of cochain matrices

    @property
    def dim_d1(self) -> int:
        return len(self.d1)

    @property
    def dim_der(self) -> int:
        return len(self.der)

    @property
    def dim_vm(self) -> int:
        return len(self.vm)

    def witness_for(self, delta) -> Optional[np.ndarray]:
        """nabla with the Leibniz rule for delta, or None if delta is not in V_M."""
        return connection_witness(self.algebra, self.module, delta)

    def as_dict(self) -> dict:
        return {
            "dim_D1": self.dim_d1,
            "dim_Der": self.dim_der,
            "dim_Ext1": self.dim_ext1,
            "dim_VM": self.dim_vm,
        }


def connection_witness(a: Algebra, m: LeftModule, delta) -> Optional[np.ndarray]:
    F = a.field
    E = end_bimodule(a, m)
    rhs = derivation_cochain(a, m, delta).reshape(-1)
    phi = solve(F, differential_matrix(a, E, 0), rhs)
    if phi is None:
        return None
    nabla = F.reduce(-phi.reshape(m.dim, m.dim))
    if not leibniz_ok(a, m, delta, nabla):
        raise ArithmeticError("witness fails the Leibniz rule (internal error)")
    return nabla


def ks_map(a: Algebra, m: LeftModule) -> KSReport:
    if m.algebra is not a:
        raise ValueError("module is over a different algebra")
    F = a.field
    n, r = a.dim, m.dim
    E = end_bimodule(a, m)
    d1 = diff_ops_1(a)
    der = derivations(a, regular_bimodule(a))
    h1 = cohomology(a, E, 1)
    q = QuotientSpace.build(F, h1.cocycles, h1.coboundaries)

    f_d1 = np.stack([f_cochain(a, m, D) for D in d1]) if len(d1) else F.zeros((0, r * r, n))
    cols = [derivation_cochain(a, m, delta).reshape(-1) for delta in der]
    k = len(der)
    Z = np.stack(cols, axis=1) if k else F.zeros((r * r * n, 0))
    g = q.coords(Z) if k else F.zeros((q.dim, 0))

    # V_M: alpha with sum alpha_j f(delta_j) in im d^0, via one kernel
    D0 = differential_matrix(a, E, 0)
    K = kernel_basis(F, np.concatenate([Z, F.reduce(-D0)], axis=1))
    alpha = image_basis(F, K[:k]) if k else F.zeros((0, 0))
    vm = [F.tensordot(alpha[:, j], der, axes=([0], [0])) for j in range(alpha.shape[1])]
    vm = np.stack(vm) if vm else F.zeros((0, n, n))
    wits = [connection_witness(a, m, delta) for delta in vm]
    if any(w is None for w in wits):
        raise ArithmeticError("kernel of g contains a derivation without witness (internal error)")
    wits = np.stack(wits) if wits else F.zeros((0, r, r))
    return KSReport(a, m, d1, der, h1.dim, g, vm, wits, f_d1)


def simultaneous_connection(report: KSReport) -> Optional[np.ndarray]:
    """nabla(delta_j) for all V_M basis vectors from one joint solve (k-linear)."""
    a, m = report.algebra, report.module
    F = a.field
    r, n, v = m.dim, a.dim, report.dim_vm
    if v == 0:
        return F.zeros((0, r, r))
    rows, rhs = [], []
    unknowns = v * r * r
    for j, delta in enumerate(report.vm):
        for x in range(n):
            block = F.zeros((r * r, unknowns))
            # vec(N L - L N) = (I (x) L^T - L (x) I) vec N
            block[:, j * r * r:(j + 1) * r * r] = F.reduce(
                np.kron(F.eye(r), m.action[x].T) - np.kron(m.action[x], F.eye(r))
            )
            rows.append(block)
            rhs.append(m.act(delta[:, x]).reshape(-1))
    sol = solve(F, np.concatenate(rows, axis=0), np.concatenate(rhs))
    if sol is None:
        return None
    return sol.reshape(v, r, r)


def _check_report(a: Algebra, m: LeftModule, report: KSReport) -> None:
    if report.algebra is not a or report.module is not m:
        raise StaleReportError("report was computed for a different algebra or module")


def _vm_coords(report: KSReport, delta) -> Optional[np.ndarray]:
    F = report.algebra.field
    if report.dim_vm == 0:
        return None if not F.is_zero(delta) else F.zeros(0)
    basis = np.stack([v.reshape(-1) for v in report.vm], axis=1)
    return solve(F, basis, np.asarray(delta).reshape(-1))


@dataclass(frozen=True, eq=False)
class BracketVerdict:
    closed: bool            # [delta, eta] in V_M for all basis pairs
    witnesses_ok: bool      # [nabla delta, nabla eta] is a witness for [delta, eta]
    module_closed: bool     # a delta in V_M for all basis a, delta
    failures: list = dc_field(default_factory=list)

    def __bool__(self) -> bool:
        return self.closed and self.witnesses_ok


def bracket_closure(a: Algebra, m: LeftModule, report: KSReport) -> BracketVerdict:
    _check_report(a, m, report)
    F = a.field
    closed = wit_ok = mod_ok = True
    failures = []
    v = report.dim_vm
    for j in range(v):
        for l in range(j + 1, v):
            d, e = report.vm[j], report.vm[l]
            br = F.reduce(F.dot(d, e) - F.dot(e, d))
            if _vm_coords(report, br) is None:
                closed = False
                failures.append(("bracket", j, l))
            nj, nl = report.witnesses[j], report.witnesses[l]
            nb = F.reduce(F.dot(nj, nl) - F.dot(nl, nj))
            if not leibniz_ok(a, m, br, nb):
                wit_ok = False
                failures.append(("witness", j, l))
    for x in range(a.dim):
        for j in range(v):
            ad = F.dot(a.left_matrix(a.basis(x)), report.vm[j])
            if _vm_coords(report, ad) is None:
                mod_ok = False
                failures.append(("module", x, j))
    return BracketVerdict(closed, wit_ok, mod_ok, failures)


@dataclass(frozen=True, eq=False)
class TwistCheck:
    nabla: np.ndarray                 # chosen nabla on the V_M basis
    L: Optional[np.ndarray]           # L[x, j] = L(e_x, delta_j), r x r
    a_linear: bool                    # (i) L(a, d) commutes with the A-action
    cocycle_law: bool                 # (ii) L(ab, d) = a L(b, d) + L(a, b d)
    twisted_module: bool              # (iii) a(b z) = (ab) z on End_A(M) + V_M
    splitting_exists: bool            # simultaneous k-linear nabla (one joint solve)
    a_linear_splitting: Optional[np.ndarray] = None  # A-linear V_M-connection, if any

    @property
    def a_linear_splitting_exists(self) -> bool:
        return self.a_linear_splitting is not None

    def __bool__(self) -> bool:
        return self.a_linear and self.cocycle_law and self.twisted_module and self.splitting_exists


def _nabla_of(report: KSReport, nabla: np.ndarray, delta) -> Optional[np.ndarray]:
    F = report.algebra.field
    c = _vm_coords(report, delta)
    if c is None:
        return None
    r = report.module.dim
    if len(c) == 0:
        return F.zeros((r, r))
    return F.tensordot(c, nabla, axes=([0], [0]))


def end_A(a: Algebra, m: LeftModule) -> np.ndarray:
    """Basis of End_A(M) as a stack of r x r matrices."""
    F = a.field
    r = m.dim
    eqs = [F.reduce(np.kron(F.eye(r), act.T) - np.kron(act, F.eye(r))) for act in m.action]
    K = kernel_basis(F, np.concatenate(eqs, axis=0))
    return np.ascontiguousarray(K.T.reshape(K.shape[1], r, r))


def twist_module_check(a: Algebra, m: LeftModule, report: KSReport, nabla=None) -> TwistCheck:
    """Verify the twisted module structure a(phi, d) = (a phi + L(a, d), a d)."""
    _check_report(a, m, report)
    a.require_commutative("the twisted Lie-Rinehart module")
    F = a.field
    n, r, v = a.dim, m.dim, report.dim_vm
    nabla = report.witnesses if nabla is None else np.asarray(nabla)
    joint = simultaneous_connection(report)
    splitting = joint is not None

    lam = m.action
    mult = [a.left_matrix(a.basis(x)) for x in range(n)]
    L = F.zeros((n, v, r, r))
    defined = True
    for x in range(n):
        for j in range(v):
            nd = _nabla_of(report, nabla, F.dot(mult[x], report.vm[j]))
            if nd is None:
                defined = False
                break
            L[x, j] = F.reduce(F.dot(lam[x], nabla[j]) - nd)
    if not defined:
        return TwistCheck(nabla, None, False, False, False, splitting)

    # (i) A-linearity
    a_lin = all(
        not np.any(F.dot(L[x, j], lam[y]) != F.dot(lam[y], L[x, j]))
        for x in range(n) for j in range(v) for y in range(n)
    )

    # L(a, delta) for arbitrary a, delta in V_M coordinates
    def L_of(av, cv):
        return F.einsum("x,j,xjuv->uv", av, cv, L) if v else F.zeros((r, r))

    # (ii) L(xy, d) = x L(y, d) + L(x, y d)
    law = True
    for x in range(n):
        for y in range(n):
            xy = a.mul[x, y]
            for j in range(v):
                ej = F.unit_vector(v, j)
                yd = _vm_coords(report, F.dot(mult[y], report.vm[j]))
                lhs = L_of(xy, ej)
                rhs = F.reduce(F.dot(lam[x], L[y, j]) + L_of(a.basis(x), yd))
                if np.any(lhs != rhs):
                    law = False

    # (iii) the twisted action on End_A(M) (+) V_M as matrices
    twisted = False
    EA = end_A(a, m)
    e = len(EA)
    EAb = np.stack([p.reshape(-1) for p in EA], axis=1) if e else F.zeros((r * r, 0))
    if a_lin:
        acts = []
        for x in range(n):
            Act = F.zeros((e + v, e + v))
            for p in range(e):
                Act[:e, p] = solve(F, EAb, F.dot(lam[x], EA[p]).reshape(-1)) if e else F.zeros(0)
            for j in range(v):
                Act[:e, e + j] = solve(F, EAb, L[x, j].reshape(-1)) if e else F.zeros(0)
                Act[e:, e + j] = _vm_coords(report, F.dot(mult[x], report.vm[j]))
            acts.append(Act)
        acts = np.stack(acts)
        combined = F.tensordot(a.mul, acts, axes=([2], [0]))
        twisted = all(
            not np.any(combined[x, y] != F.dot(acts[x], acts[y])) for x in range(n) for y in range(n)
        ) and not np.any(F.tensordot(a.unit, acts, axes=([0], [0])) != F.eye(e + v))

    return TwistCheck(nabla, L, a_lin, law, twisted, splitting, a_linear_connection(report))


def a_linear_connection(report: KSReport) -> Optional[np.ndarray]:
    """An A-linear V_M-connection: Leibniz for each basis delta_j and nabla(a d) = a nabla(d)."""
    a, m = report.algebra, report.module
    F = a.field
    r, n, v = m.dim, a.dim, report.dim_vm
    if v == 0:
        return F.zeros((0, r, r))
    rr = r * r
    unknowns = v * rr
    rows, rhs = [], []
    for j, delta in enumerate(report.vm):
        for x in range(n):
            block = F.zeros((rr, unknowns))
            block[:, j * rr:(j + 1) * rr] = F.reduce(
                np.kron(F.eye(r), m.action[x].T) - np.kron(m.action[x], F.eye(r))
            )
            rows.append(block)
            rhs.append(m.act(delta[:, x]).reshape(-1))
    for x in range(n):
        for j in range(v):
            c = _vm_coords(report, F.dot(a.left_matrix(a.basis(x)), report.vm[j]))
            if c is None:
                return None
            # sum_l c_l nabla_l - lambda_x nabla_j = 0
            block = F.zeros((rr, unknowns))
            for l in range(v):
                block[:, l * rr:(l + 1) * rr] = F.reduce(block[:, l * rr:(l + 1) * rr] + F.eye(rr) * c[l])
            block[:, j * rr:(j + 1) * rr] = F.reduce(block[:, j * rr:(j + 1) * rr] - np.kron(m.action[x], F.eye(r)))
            rows.append(block)
            rhs.append(F.zeros(rr))
    sol = solve(F, np.concatenate(rows, axis=0), np.concatenate(rhs))
    return None if sol is None else sol.reshape(v, r, r)

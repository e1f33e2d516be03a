"""Random algebras, modules, bimodules and cocycles for property checks.

Algebras are drawn from the catalog (plus random k[x]/(f)) and then written
in a random basis, so structure constants carry no visible pattern.
Modules are built generically from the (scrambled) algebra, so they are valid
by construction.
"""

from __future__ import annotations

import random

import numpy as np

from . import catalog
from .algebra import (
    Algebra,
    Bimodule,
    LeftModule,
    change_basis,
    direct_sum_bimodule,
    direct_sum_module,
    generated_sub_bimodule,
    generated_submodule,
    hom_bimodule,
    quotient_bimodule,
    quotient_module,
    regular_bimodule,
    regular_module,
    sub_bimodule,
    submodule,
)
from .exactla import Field, inverse, rank


def random_invertible(F: Field, n: int, rng: random.Random) -> np.ndarray:
    while True:
        T = F.random_array(rng, (n, n))
        if rank(F, T) == n:
            return T


def random_vector(F: Field, n: int, rng: random.Random, nonzero: bool = False) -> np.ndarray:
    while True:
        v = F.random_array(rng, (n,))
        if not nonzero or not F.is_zero(v):
            return v


def scramble(a: Algebra, rng: random.Random) -> Algebra:
    return change_basis(a, random_invertible(a.field, a.dim, rng))


def random_algebra(
    F: Field,
    rng: random.Random,
    max_dim: int = 4,
    commutative: bool | None = None,
    scrambled: bool = True,
) -> Algebra:
    pool = [a for a in catalog.catalog(F).values() if a.dim <= max_dim]
    for d in range(1, max_dim + 1):
        pool.append(catalog.quotient_polynomial(F, [F.random_element(rng) for _ in range(d)]))
    if commutative is not None:
        pool = [a for a in pool if a.is_commutative() == commutative]
    a = rng.choice(pool)
    return scramble(a, rng) if scrambled else a


def scramble_module(m: LeftModule, rng: random.Random) -> LeftModule:
    F = m.field
    S = random_invertible(F, m.dim, rng)
    Sinv = inverse(F, S)
    return LeftModule(m.algebra, F.einsum("ij,ajk,kl->ail", Sinv, m.action, S))


def scramble_bimodule(b: Bimodule, rng: random.Random) -> Bimodule:
    F = b.field
    S = random_invertible(F, b.dim, rng)
    Sinv = inverse(F, S)
    conj = lambda act: F.einsum("ij,ajk,kl->ail", Sinv, act, S)
    return Bimodule(b.algebra, conj(b.left), conj(b.right))


def _module_candidates(a: Algebra, rng: random.Random) -> list[LeftModule]:
    F = a.field
    reg = regular_module(a)
    v = random_vector(F, a.dim, rng, nonzero=True)
    w = random_vector(F, a.dim, rng, nonzero=True)
    out = [reg, quotient_module(reg, generated_submodule(reg, v)), submodule(reg, generated_submodule(reg, w))]
    small = quotient_module(reg, generated_submodule(reg, random_vector(F, a.dim, rng)))
    out.append(direct_sum_module(small, quotient_module(reg, generated_submodule(reg, v))))
    return [m for m in out if m.dim > 0]


def random_left_module(a: Algebra, rng: random.Random, max_dim: int = 4, min_dim: int = 1) -> LeftModule:
    for _ in range(50):
        cands = [m for m in _module_candidates(a, rng) if min_dim <= m.dim <= max_dim]
        if cands:
            return scramble_module(rng.choice(cands), rng)
    raise RuntimeError("could not find a module in the requested dimension range")


def random_bimodule(a: Algebra, rng: random.Random, max_dim: int = 4, min_dim: int = 1) -> Bimodule:
    F = a.field
    for _ in range(50):
        reg = regular_bimodule(a)
        cands = [reg]
        v = random_vector(F, a.dim, rng, nonzero=True)
        J = generated_sub_bimodule(reg, v)
        cands.append(sub_bimodule(reg, J))
        if J.shape[1] < a.dim:
            cands.append(quotient_bimodule(reg, J))
        mods = _module_candidates(a, rng)
        m1, m2 = rng.choice(mods), rng.choice(mods)
        if m1.dim * m2.dim <= max_dim:
            cands.append(hom_bimodule(m1, m2))
        if a.dim * 2 <= max_dim:
            cands.append(direct_sum_bimodule(reg, reg))
        cands = [b for b in cands if min_dim <= b.dim <= max_dim]
        if cands:
            return scramble_bimodule(rng.choice(cands), rng)
    raise RuntimeError("could not find a bimodule in the requested dimension range")


def random_instance(F: Field, rng: random.Random, max_dim: int = 4, **kw) -> tuple[Algebra, Bimodule]:
    a = random_algebra(F, rng, max_dim=max_dim, **kw)
    return a, random_bimodule(a, rng, max_dim=max_dim)


def random_combination(F: Field, basis: np.ndarray, rng: random.Random) -> np.ndarray:
    """Random element of the column span of ``basis``."""
    coeffs = F.random_array(rng, (basis.shape[1],))
    return F.dot(basis, coeffs) if basis.shape[1] else F.zeros(basis.shape[0])

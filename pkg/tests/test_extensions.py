import random

import numpy as np
import oracles
import pytest

from exanlab import catalog
from exanlab.algebra import Bimodule, regular_bimodule, validate_algebra, zero_bimodule
from exanlab.exactla import GF, QQ, kernel_basis
from exanlab.extensions import (
    ExtensionError,
    NotACocycleError,
    Section,
    SectionError,
    build_extension,
    caction,
    canonical_section,
    choose_section,
    equiv,
    exan_basis,
    extract_cocycle,
    induced_bimodule,
    inner_cocycle,
    is_cocycle,
    make_extension,
    quotient_extension,
    random_section,
    rebuild_isomorphism,
    scramble_extension,
    trivial_extension,
    validate_extension,
)
from exanlab.hochschild import Cochain, differential_matrix, zero_cochain
from exanlab.randgen import random_combination, random_instance, random_invertible

F5 = GF(5)


@pytest.fixture
def dual():
    a = catalog.dual_numbers(QQ)
    return a, regular_bimodule(a)


def hh2_rep(a, i):
    C = QQ.zeros((2, 4))
    C[0, 3] = QQ.coerce(1)  # C(eps, eps) = 1
    return Cochain(a, i, 2, C)


def random_cocycle(F, rng, max_dim=3):
    a, i = random_instance(F, rng, max_dim=max_dim)
    ex = exan_basis(a, i)
    vec = random_combination(F, ex.cocycles, rng)
    return a, i, Cochain(a, i, 2, vec.reshape(i.dim, a.dim**2))


# ---------------------------------------------------------------------------
# cocycles


def test_zero_and_hh2_representative_are_cocycles(dual):
    a, i = dual
    assert is_cocycle(zero_cochain(a, i, 2))
    assert is_cocycle(hh2_rep(a, i))
    for triple in np.ndindex(2, 2, 2):
        assert not any(oracles.eq1_defect(hh2_rep(a, i), *triple))


@pytest.mark.parametrize("seed", range(8))
def test_inner_cocycles_are_cocycles(seed):
    rng = random.Random(seed)
    F = rng.choice([QQ, F5])
    a, i = random_instance(F, rng)
    phi = F.random_array(rng, (i.dim, a.dim))
    assert is_cocycle(inner_cocycle(a, i, phi))


@pytest.mark.parametrize("seed", range(10))
def test_is_cocycle_agrees_with_kernel_of_d2(seed):
    rng = random.Random(100 + seed)
    F = rng.choice([QQ, F5])
    a, i = random_instance(F, rng, max_dim=3)
    D2 = differential_matrix(a, i, 2)
    K = kernel_basis(F, D2)
    near = random_combination(F, K, rng)
    far = F.random_array(rng, (i.dim * a.dim**2,))
    for vec in (near, far):
        c = Cochain(a, i, 2, vec.reshape(i.dim, a.dim**2))
        check = is_cocycle(c)
        assert bool(check) == F.is_zero(F.dot(D2, vec))
        if not check:
            assert any(v != 0 for v in oracles.eq1_defect(c, *check.triple))


@pytest.mark.parametrize(
    "name, hh2",
    [("k", 0), ("dual", 1), ("M2", 0), ("k^2", 0)],
)
def test_exan_dimensions(name, hh2):
    a = catalog.catalog(QQ)[name]
    ex = exan_basis(a, regular_bimodule(a))
    assert ex.dim_hh2 == hh2
    assert ex.dim_exan == ex.dim_inner + ex.dim_hh2


def test_base_field_exan_is_inner_for_any_bimodule():
    k = catalog.base_field_algebra(QQ)
    two = Bimodule(k, QQ.array([np.eye(2, dtype=int)]), QQ.array([np.eye(2, dtype=int)]))
    ex = exan_basis(k, two)
    assert ex.dim_hh2 == 0


# ---------------------------------------------------------------------------
# construction


def test_trivial_extension_product(dual):
    a, i = dual
    ext = trivial_extension(a, i)
    B = ext.algebra
    # basis (u_1, u_eps, 1, eps): (u, x)(v, y) = (u y + x v, x y)
    u_eps, eps = B.basis(1), B.basis(3)
    assert B.product(B.basis(0), eps).tolist() == u_eps.tolist()
    assert QQ.is_zero(B.product(u_eps, B.basis(0)))
    assert B.product(eps, eps).tolist() == [0, 0, 0, 0]
    assert validate_extension(ext).ok


def test_zero_ideal_gives_the_base_algebra(dual):
    a, _ = dual
    ext = trivial_extension(a, zero_bimodule(a))
    assert ext.dim == a.dim
    assert not np.any(ext.algebra.mul != a.mul)


def test_hh2_extension_is_valid(dual):
    a, i = dual
    ext = build_extension(a, i, hh2_rep(a, i))
    assert validate_extension(ext).ok
    B = ext.algebra
    # eps * eps = C(eps, eps) = u_1
    assert B.product(B.basis(3), B.basis(3)).tolist() == [1, 0, 0, 0]


def test_non_normalized_cocycle_uses_shifted_unit(dual):
    a, i = dual
    c = inner_cocycle(a, i, QQ.array([[1, 0], [0, 0]]))  # phi(1) = 1, so C(1, 1) != 0
    assert not QQ.is_zero(c.value(0, 0))
    ext = build_extension(a, i, c)
    assert validate_extension(ext).ok
    assert ext.algebra.unit.tolist() == [-1, 0, 1, 0]


def test_tampered_cocycle_is_refused(dual):
    a, i = dual
    C = hh2_rep(a, i).matrix.copy()
    C[0, 1] = QQ.coerce(1)
    bad = Cochain(a, i, 2, C)
    with pytest.raises(NotACocycleError) as info:
        build_extension(a, i, bad)
    assert any(oracles.eq1_defect(bad, *info.value.triple))


def test_make_extension_checks_structure(dual):
    a, _ = dual
    # (eps) in dual numbers is a square-zero ideal over k
    ext = make_extension(a, 1, QQ.array([[0], [1]]), QQ.array([[1, 0]]))
    assert validate_extension(ext).ok
    # (1) is not square zero
    with pytest.raises(ExtensionError):
        make_extension(a, 1, QQ.array([[1], [0]]), QQ.array([[0, 1]]))


# ---------------------------------------------------------------------------
# sections and round trips


def test_split_extension_section_is_canonical_inclusion(dual):
    a, i = dual
    ext = trivial_extension(a, i)
    s = choose_section(ext)
    assert s.matrix.tolist() == [[0, 0], [0, 0], [1, 0], [0, 1]]


def test_section_must_split_projection(dual):
    a, i = dual
    ext = trivial_extension(a, i)
    with pytest.raises(SectionError):
        Section(ext, QQ.zeros((4, 2)))


def test_canonical_round_trip_reproduces_cocycle(dual):
    a, i = dual
    c = hh2_rep(a, i)
    ext = build_extension(a, i, c)
    got, bim = extract_cocycle(ext, canonical_section(ext))
    assert not np.any(got.matrix != c.matrix)
    assert not np.any(bim.left != i.left) and not np.any(bim.right != i.right)
    triv = trivial_extension(a, i)
    zero, _ = extract_cocycle(triv, canonical_section(triv))
    assert zero.is_zero()


def test_trivial_rebuild_is_identity(dual):
    a, i = dual
    ext = trivial_extension(a, i)
    f = rebuild_isomorphism(ext, choose_section(ext))
    assert not np.any(f.matrix != QQ.eye(4))


def test_dual_numbers_as_extension_of_k():
    a = catalog.dual_numbers(QQ)
    ext = make_extension(a, 1, QQ.array([[0], [1]]), QQ.array([[1, 0]]))
    f = rebuild_isomorphism(ext, choose_section(ext))
    # x + y eps -> (y eps, x)
    assert f.matrix.tolist() == [[0, 1], [1, 0]]


@pytest.mark.parametrize("seed", range(8))
def test_random_sections_over_f5(seed):
    rng = random.Random(200 + seed)
    a, i, c = random_cocycle(F5, rng)
    ext = build_extension(a, i, c)
    s = random_section(ext, rng)
    assert not np.any(F5.dot(ext.projection, s.matrix) != F5.eye(a.dim))
    got, bim = extract_cocycle(ext, s)
    assert is_cocycle(got)
    assert not np.any(bim.left != i.left) and not np.any(bim.right != i.right)
    # the extracted cocycle differs from c by an inner one
    assert equiv(got, Cochain(a, bim, 2, c.matrix), "inner").verdict
    f = rebuild_isomorphism(ext, s)
    assert f.is_isomorphism()


def test_column_order_gives_same_bimodule():
    rng = random.Random(7)
    a, i, c = random_cocycle(F5, rng)
    ext = build_extension(a, i, c)
    T = random_invertible(F5, ext.dim, rng)
    sc = scramble_extension(ext, T)
    s1 = choose_section(sc)
    s2 = choose_section(sc, column_order=list(reversed(range(sc.dim))))
    b1, b2 = induced_bimodule(sc, s1), induced_bimodule(sc, s2)
    assert not np.any(b1.left != b2.left) and not np.any(b1.right != b2.right)


# ---------------------------------------------------------------------------
# equivalence, central action, quotient


def test_equiv_modes(dual):
    a, i = dual
    c = hh2_rep(a, i)
    assert equiv(c, c, "strict").verdict
    phi = QQ.array([[0, 1], [0, 2]])
    shifted = c + inner_cocycle(a, i, phi)
    assert not equiv(shifted, c, "strict").verdict
    res = equiv(shifted, c, "inner")
    assert res.verdict
    # the witness reproduces phi up to ker d^1
    D1 = differential_matrix(a, i, 1)
    assert QQ.is_zero(QQ.dot(D1, QQ.reduce(res.witness.matrix.reshape(-1) - phi.reshape(-1))))
    assert not equiv(c, zero_cochain(a, i, 2), "inner").verdict


def test_caction(dual):
    a, i = dual
    c = hh2_rep(a, i)
    assert caction(a.unit, c).same_as(c)
    assert caction(a.unit, c, side="right").same_as(c)
    assert caction(QQ.zeros(2), c).is_zero()
    eps_c = caction(a.basis(1), c)
    assert is_cocycle(eps_c)
    assert eps_c.value(1, 1).tolist() == [0, 1]


def test_caction_requires_central_element():
    m2 = catalog.matrix_algebra(QQ, 2)
    i = regular_bimodule(m2)
    with pytest.raises(ExtensionError):
        caction(m2.basis(1), zero_cochain(m2, i, 2))


def test_quotient_of_trivial_extension_is_itself(dual):
    a, i = dual
    q = quotient_extension(trivial_extension(a, i))
    assert q.dim_j == 0 and q.extension.dim == 4


def test_quotient_of_hh2_extension(dual):
    a, i = dual
    q = quotient_extension(build_extension(a, i, hh2_rep(a, i)))
    # Im C = span(1) generates all of I = A
    assert q.dim_j == 2
    assert q.extension.dim == a.dim
    assert validate_algebra(q.extension.algebra).ok


def test_quotient_with_surjective_cocycle():
    k = catalog.base_field_algebra(QQ)
    i = regular_bimodule(k)
    c = inner_cocycle(k, i, QQ.array([[1]]))  # C(1, 1) = 1
    q = quotient_extension(build_extension(k, i, c))
    assert q.dim_j == 1 and q.extension.dim == 1

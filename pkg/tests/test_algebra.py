import random

import numpy as np
import pytest

from exanlab import catalog
from exanlab.algebra import (
    Bimodule,
    InvalidStructureError,
    LeftModule,
    NotCommutativeError,
    center,
    derivations,
    diff_ops_1,
    end_bimodule,
    is_central,
    is_derivation,
    make_algebra,
    quotient_algebra,
    regular_bimodule,
    regular_module,
    validate_algebra,
    zero_bimodule,
)
from exanlab.exactla import GF, QQ, in_span
from exanlab.randgen import random_algebra, random_bimodule, random_left_module

import oracles

F2, F5 = GF(2), GF(5)


def tampered(a, i, j, value):
    mul = a.mul.copy()
    mul[i, j] = a.field.array(value)
    return make_algebra(a.field, mul, a.unit)


@pytest.mark.parametrize("name", sorted(catalog.catalog(QQ)))
def test_catalog_algebras_validate(name):
    assert validate_algebra(catalog.catalog(QQ)[name]).ok


def test_dual_with_eps_squared_one_is_still_associative():
    # k[e]/(e^2 - 1) is k x k, so this tamper does not break associativity
    dual = catalog.dual_numbers(QQ)
    assert validate_algebra(tampered(dual, 1, 1, [1, 0])).ok


def test_unit_row_tamper_is_reported():
    dual = catalog.dual_numbers(QQ)
    report = validate_algebra(tampered(dual, 0, 1, [0, 0]))
    assert not report.ok
    assert {v.kind for v in report.violations} >= {"left_unit"}


def test_associativity_tamper_reported_at_first_triple():
    x3 = catalog.truncated_polynomial(QQ, 3)
    report = validate_algebra(tampered(x3, 1, 2, [0, 1, 0]))
    first = report.violations[0]
    assert first.kind == "associativity" and first.index == (1, 1, 1)


@pytest.mark.parametrize(
    "algebra, expected",
    [
        (catalog.matrix_algebra(QQ, 2), 1),
        (catalog.product_of_fields(QQ, 2), 2),
        (catalog.truncated_polynomial(QQ, 3), 3),
        (catalog.upper_triangular(QQ), 1),
        (catalog.exterior_algebra_2(QQ), 2),  # 1 and xy
    ],
)
def test_center_dims(algebra, expected):
    Z = center(algebra)
    assert Z.shape[1] == expected == oracles.naive_center_dim(algebra)
    for j in range(Z.shape[1]):
        assert is_central(algebra, Z[:, j])


def test_center_of_m2_is_identity_span():
    m2 = catalog.matrix_algebra(QQ, 2)
    Z = center(m2)
    assert Z.shape[1] == 1
    assert in_span(QQ, Z, m2.unit)


@pytest.mark.parametrize(
    "algebra, expected",
    [
        (catalog.base_field_algebra(QQ), 0),
        (catalog.dual_numbers(QQ), 1),
        (catalog.truncated_polynomial(QQ, 3), 2),
        (catalog.matrix_algebra(QQ, 2), 3),
    ],
)
def test_derivation_dims(algebra, expected):
    ders = derivations(algebra, regular_bimodule(algebra))
    assert len(ders) == expected == oracles.naive_der_dim(algebra)
    assert all(is_derivation(algebra, regular_bimodule(algebra), d) for d in ders)


def test_derivations_of_base_field_vanish_for_any_bimodule():
    k = catalog.base_field_algebra(QQ)
    two = Bimodule(k, QQ.array([np.eye(2, dtype=int)]), QQ.array([np.eye(2, dtype=int)]))
    assert len(derivations(k, two)) == 0


@pytest.mark.parametrize(
    "F, algebra, expected",
    [
        (QQ, "k", 1),
        # over Q, [D, L_eps] is a left multiplication only for the 3-dim subspace;
        # in characteristic 2 every endomorphism qualifies
        (QQ, "dual", 3),
        (F2, "dual", 4),
        (QQ, "k[x]/x^3", 5),
        (QQ, "M2", 7),
    ],
)
def test_diff_ops_dims(F, algebra, expected):
    a = catalog.catalog(F)[algebra]
    assert len(diff_ops_1(a)) == expected


@pytest.mark.parametrize("name", ["k", "dual", "k[x]/x^3", "k[x,y]/(x,y)^2", "M2", "T2"])
def test_d1_minus_a_is_der(name):
    a = catalog.catalog(QQ)[name]
    assert len(diff_ops_1(a)) - a.dim == len(derivations(a, regular_bimodule(a)))


def test_end_bimodule_dims():
    x3 = catalog.truncated_polynomial(QQ, 3)
    E = end_bimodule(x3, regular_module(x3))
    assert E.dim == 9
    m2 = catalog.matrix_algebra(QQ, 2)
    nat = catalog.natural_module(m2, catalog.matrix_units(QQ, 2))
    E = end_bimodule(m2, nat)  # validated at construction
    assert E.dim == 4


def test_bad_module_rejected():
    dual = catalog.dual_numbers(QQ)
    with pytest.raises(InvalidStructureError):
        LeftModule(dual, QQ.array([[[1]], [[1]]]))  # eps acting invertibly


def test_quotient_algebra():
    x3 = catalog.truncated_polynomial(QQ, 3)
    quo, q = quotient_algebra(x3, QQ.array([[0], [0], [1]]))
    assert quo.dim == 2 and validate_algebra(quo).ok


def test_zero_bimodule_and_require_commutative():
    m2 = catalog.matrix_algebra(QQ, 2)
    assert zero_bimodule(m2).dim == 0
    with pytest.raises(NotCommutativeError):
        m2.require_commutative("test")


@pytest.mark.parametrize("seed", range(10))
def test_random_structures_validate(seed):
    rng = random.Random(seed)
    F = rng.choice([QQ, F5, F2])
    a = random_algebra(F, rng)
    assert validate_algebra(a).ok
    random_bimodule(a, rng)  # validated at construction
    random_left_module(a, rng)

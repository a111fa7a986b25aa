"""Yoneda-product generation checks and their agreement with the matrix
criteria (two independent routes to the same predicates)."""

import numpy as np
import pytest

from k2res.linalg import FieldOps, FieldSpec
from k2res.gradedalg import expand, monomial_presentation, polynomial_presentation
from k2res.resolve import (cyclic_quotient_module, ideal_module,
                           minimal_resolution, quotient_module, trivial_module)
from k2res.koszulk2 import (YonedaCalculator, k1_check, k2_check,
                            yoneda_generation_check)

GF = FieldSpec.gf(32003)


def test_exterior_square_generated_by_degree_one(gf):
    P2 = expand(polynomial_presentation(["x", "y"]), 4, gf)
    v = yoneda_generation_check(P2, trivial_module(P2), 3, 4, generators=1)
    assert v.holds and v.conclusive


def test_e22_always_generated_by_e1(gf, algebra_C):
    """The (2,2) slot is spanned by products of degree-one classes even for
    a non-Koszul base."""
    ops = FieldOps(gf)
    res_k = minimal_resolution(trivial_module(algebra_C), 3, 5)
    calc = YonedaCalculator(res_k, res_k)
    e1 = calc.ext_basis(res_k, 1)
    span = ops.reducer(len(res_k.steps[2].gen_degrees))
    for z1 in e1:
        for z2 in e1:
            span.insert(calc.product(z1, z2).vec)
    degs = res_k.steps[2].gen_degrees
    covered = [i for i, d in enumerate(degs) if d == 2]
    dim22 = len(covered)
    assert ops.rank(span.rows_array[:, covered]) == dim22


def test_agreement_on_module_examples(S6, gf):
    cases = [
        [S6.monomial("abc"), S6.monomial("cde")],
        [S6.monomial("abc"), S6.monomial("cde"), S6.monomial("ae")],
        [S6.monomial("abc"), S6.monomial("def"), S6.monomial("abef")],
        [S6.monomial("ab"), S6.monomial("cd"), S6.monomial("ef")],
    ]
    for gens in cases:
        M = ideal_module(S6, gens)
        res = minimal_resolution(M, 7, 6)
        assert yoneda_generation_check(S6, M, 7, 6, generators=2,
                                       res_M=res).holds == k2_check(res).holds
        assert yoneda_generation_check(S6, M, 7, 6, generators=1,
                                       res_M=res).holds == k1_check(res).holds


def test_agreement_for_quotient_module(S6, gf):
    I = ideal_module(S6, [S6.monomial("abc"), S6.monomial("def"), S6.monomial("abef")])
    J = ideal_module(S6, [S6.monomial("abc"), S6.monomial("abef")])
    Q = quotient_module(I, J)
    res = minimal_resolution(Q, 7, 6)
    vk = k2_check(res)
    vy = yoneda_generation_check(S6, Q, 7, 6, generators=2, res_M=res)
    assert vy.holds == vk.holds == False


def test_agreement_over_quotient_algebra(gf):
    A = expand(monomial_presentation("abcde", [tuple("abc"), tuple("cde"),
                                               tuple("abde")]), 7, gf)
    B = cyclic_quotient_module(A, [A.monomial("c")])
    res = minimal_resolution(B, 4, 7)
    vk = k2_check(res)
    vy = yoneda_generation_check(A, B, 4, 7, generators=2, res_M=res)
    assert vy.holds == vk.holds
    assert vy.witness["internal_degrees_missing"] == [5]

import json

import pytest

from k2res.errors import InputError
from k2res.linalg import FieldSpec
from k2res.series import TruncatedSeries, polynomial_ring_series
from k2res.gradedalg import expand, monomial_presentation, presentation
from k2res.resolve import (component_submodule, cyclic_quotient_module,
                           ideal_module, minimal_resolution, trivial_module)
from k2res.koszulk2 import (Verdict, algebra_k2_check,
                            componentwise_linear_check, froberg_obstruction,
                            k1_check, k2_check, koszul_check,
                            koszul_module_check, lifted_pair,
                            strongly_k2_check, trivial_action_check)

GF = FieldSpec.gf(32003)


def test_k1_examples(S6, S5):
    J = ideal_module(S6, [S6.monomial("abc"), S6.monomial("cde")])
    v = k1_check(minimal_resolution(J, 7, 6))
    assert not v.holds and v.step == 1 and v.conclusive
    res_k = minimal_resolution(trivial_module(S5), 6, 6)
    assert k1_check(res_k).holds  # Koszul complex has linear differentials


def test_k1_noncommutative_conclusive():
    pres = presentation(["x", "y"], [[(1, ("x", "x")), (-1, ("x", "y"))]])
    A = expand(pres, 8, GF)
    J = ideal_module(A, [A.element_from_terms([(1, ("y", "x"))]),
                         A.element_from_terms([(1, ("y", "x", "x"))])])
    v = k1_check(minimal_resolution(J, 4, 8))
    assert v.holds and v.conclusive


def test_k2_module_examples(S6, S5):
    J = ideal_module(S6, [S6.monomial("abc"), S6.monomial("cde")])
    v = k2_check(minimal_resolution(J, 7, 6))
    assert not v.holds and v.step == 0
    I2 = ideal_module(S6, [S6.monomial("abc"), S6.monomial("def"),
                           S6.monomial("abef")])
    v2 = k2_check(minimal_resolution(I2, 7, 6))
    assert v2.holds and v2.conclusive
    I3 = ideal_module(S5, [S5.monomial("abc"), S5.monomial("cde"),
                           S5.monomial("abde")])
    v3 = k2_check(minimal_resolution(I3, 6, 7))
    assert not v3.holds
    # the dependent-row witness is reproducible
    assert v3.witness and "combination" in v3.witness


def test_lifted_pair_structure(S6):
    J = ideal_module(S6, [S6.monomial("abc"), S6.monomial("cde")])
    res = minimal_resolution(J, 7, 6)
    pair = lifted_pair(res, 0)
    assert pair.step == 0 and pair.ess_coords == {}
    lin = pair.linear_part
    assert lin == {}  # the cubic syzygy (degree 5 over degree 3) has no linear part
    pair1 = lifted_pair(res, 1)
    # essential product of the full syzygy row dies: the composite lies in I'
    assert all(not coords.any() for coords in pair1.ess_coords.values())


def test_algebra_k2_examples(gf, algebra_C):
    v = algebra_k2_check(algebra_C, 5, 5)
    assert not v.holds and v.step == 2
    B = expand(monomial_presentation("abde", [tuple("abde")]), 8, gf)
    v2 = algebra_k2_check(B, 5, 8)
    assert v2.holds and not v2.conclusive


def test_koszul_checks(gf):
    S3 = expand(__import__("k2res.gradedalg", fromlist=["polynomial_presentation"])
                .polynomial_presentation(["x", "y", "z"]), 6, gf)
    assert koszul_check(S3, 4, 6).holds
    XY = expand(presentation(["X", "Y"], [[(1, ("X", "Y"))]]), 8, gf)
    vk = koszul_check(XY, 5, 8)
    assert vk.holds and vk.conclusive
    Bp = presentation(["x", "y"], [[(1, ("x", "x")), (-1, ("x", "y"))],
                                   [(1, ("y", "x"))]])
    B = expand(Bp, 8, gf)
    v = koszul_check(B, 5, 8)
    assert not v.holds and v.witness["j"] == 4
    cubic = expand(monomial_presentation("abc", [("a", "b", "c")]), 6, gf)
    vnq = koszul_check(cubic, 3, 6)
    assert vnq.notes  # warned: not quadratic


def test_koszul_module_check(S6):
    ae = ideal_module(S6, [S6.monomial("ae")])
    assert koszul_module_check(ae, 7, 6).holds
    J = ideal_module(S6, [S6.monomial("abc"), S6.monomial("cde")])
    assert not koszul_module_check(J, 7, 6).holds  # K1 fails
    I = ideal_module(S6, [S6.monomial("abc"), S6.monomial("cde"), S6.monomial("ae")])
    v = koszul_module_check(I, 7, 6)
    assert not v.holds and v.step == 0  # generated in two degrees


def test_componentwise_and_strongly_k2(S6):
    I = ideal_module(S6, [S6.monomial("abc"), S6.monomial("cde"), S6.monomial("ae")])
    assert componentwise_linear_check(I, 7, 6).holds
    assert strongly_k2_check(I, 7, 6).holds
    I2 = ideal_module(S6, [S6.monomial("abc"), S6.monomial("def"), S6.monomial("abef")])
    assert not componentwise_linear_check(I2, 7, 6).holds
    vs = strongly_k2_check(I2, 7, 6)
    assert not vs.holds and vs.witness["j"] == 4
    lin = ideal_module(S6, [S6.monomial("ab"), S6.monomial("bc")])
    assert strongly_k2_check(lin, 7, 6).holds


def test_trivial_action(gf, algebra_C):
    v = trivial_action_check(algebra_C, [algebra_C.monomial("abc")], 3, 5)
    assert v.holds and v.conclusive  # commutative shortcut
    pres = presentation(["x", "y"], [[(1, ("x", "x")), (-1, ("x", "y"))]])
    A = expand(pres, 8, gf)
    gens = [A.element_from_terms([(1, ("y", "x"))]),
            A.element_from_terms([(1, ("y", "x", "x"))])]
    v2 = trivial_action_check(A, gens, 3, 8)
    assert not v2.holds
    assert v2.witness["from"]["degree"] == 2 and v2.witness["to"]["degree"] == 3
    assert v2.witness["generator"] == "x"
    # a single-degree ideal with linear resolution acts trivially (bounded)
    XY = expand(presentation(["X", "Y"], [[(1, ("X", "Y"))]]), 8, gf)
    v3 = trivial_action_check(XY, [XY.element_from_terms([(1, ("X", "Y"))])], 3, 8)
    assert v3.holds


def test_trivial_action_inconclusive_branch(gf):
    # left ideal not stable under right multiplication: A<x> with yx outside
    pres = presentation(["x", "y"], [[(1, ("x", "x"))]])
    A = expand(pres, 6, gf)
    v = trivial_action_check(A, [A.element_from_terms([(1, ("x", "y"))])], 3, 6)
    assert v.holds and v.witness == {"inconclusive": True}


def test_froberg_obstruction():
    assert froberg_obstruction(TruncatedSeries((1, 2, 2, 1, 1, 1))) == 4
    assert froberg_obstruction(polynomial_ring_series(4, 8)) is None
    # fires for the two-cubic quotient as well (necessary-only certificate)
    assert froberg_obstruction(TruncatedSeries((1, 5, 15, 33, 60, 97))) == 4


def test_verdict_serialization(S6):
    J = ideal_module(S6, [S6.monomial("abc"), S6.monomial("cde")])
    v = k2_check(minimal_resolution(J, 7, 6))
    blob = v.to_json()
    assert blob["check"] == "k2" and blob["outcome"] == "fails_at"
    assert blob["step"] == 0 and blob["bounds"] == [7, 6]
    json.dumps(blob)  # serializable
    assert "fails_at" in str(v)

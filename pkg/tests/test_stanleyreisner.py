import random

import pytest

from k2res.errors import BoundError, InputError
from k2res.linalg import FieldSpec
from k2res.series import series_inverse
from k2res.simplicial import from_facets, full_simplex, popcount
from k2res.stanleyreisner import (MonomialIdeal, betti_via_hochster,
                                  complex_from_ideal, has_linear_resolution,
                                  hilbert_series_from_f_vector,
                                  hilbert_series_ideal, hilbert_series_quotient,
                                  hochster_ext_table, ideal, ideal_from_complex,
                                  is_componentwise_linear_ideal, parse_ideal,
                                  spec_module_bounds, squarefree_module_bounds)

GF = FieldSpec.gf(32003)


def random_squarefree_ideal(rng, n):
    names = [chr(ord("a") + i) for i in range(n)]
    k = rng.randint(1, 4)
    monos = []
    for _ in range(k):
        size = rng.randint(2, n)
        monos.append([names[i] for i in rng.sample(range(n), size)])
    return ideal(names, monos)


def test_ideal_construction_and_minimality():
    I = ideal("abc", ["ab", "abc"])  # abc divisible by ab: dropped
    assert [I.monomial_name(g) for g in I.gens] == ["ab"]
    with pytest.raises(InputError):
        ideal("abc", ["a"])  # linear generator
    with pytest.raises(InputError):
        ideal("abc", ["aab"])  # not squarefree
    with pytest.raises(InputError):
        MonomialIdeal(("a", "b", "c"), (0b011, 0b111))  # not inclusion-minimal


def test_parse_ideal_round_trip():
    text = "vars: a b c d e\n# comment\nabc\nc d e\n"
    I = parse_ideal(text)
    assert sorted(I.monomial_name(g) for g in I.gens) == ["abc", "cde"]
    assert parse_ideal(I.to_text()) == I


def test_complex_ideal_round_trip_examples():
    tri = from_facets("123", [["1", "2"], ["2", "3"], ["1", "3"]])
    I = ideal_from_complex(tri)
    assert [I.monomial_name(g) for g in I.gens] == ["123"]
    I7 = ideal("abcdefg", ["abc", "bcd", "cde", "def", "efg"])
    D7 = complex_from_ideal(I7)
    assert ideal_from_complex(D7) == I7
    two = complex_from_ideal(ideal("xy", ["xy"]))
    assert two.facets == (0b01, 0b10)
    with pytest.raises(InputError):
        ideal_from_complex(from_facets("abc", [["a", "b"]]))  # c is not a face


def test_round_trip_random():
    rng = random.Random(41)
    for _ in range(30):
        I = random_squarefree_ideal(rng, rng.randint(2, 6))
        delta = complex_from_ideal(I)
        # every generator is a non-face; every non-face is divisible by one
        faces = set(delta.faces())
        for g in I.gens:
            assert g not in faces
        for m in range(1 << I.n):
            if m not in faces:
                assert any((g & m) == g for g in I.gens)
        if all(delta.contains(1 << i) for i in range(I.n)):
            assert ideal_from_complex(delta) == I


def test_hochster_values():
    I7 = ideal("abcdefg", ["abc", "bcd", "cde", "def", "efg"])
    D7 = complex_from_ideal(I7)
    tab = hochster_ext_table(D7, GF)
    assert tab.entries == {(0, 0): 1, (1, 3): 5, (2, 4): 4, (2, 6): 1, (3, 7): 1}
    assert betti_via_hochster(D7, 2, 6, GF) == 1
    assert betti_via_hochster(D7, 1, 4, GF) == 0
    tri = complex_from_ideal(ideal("abc", ["abc"]))
    assert hochster_ext_table(tri, GF).entries == {(0, 0): 1, (1, 3): 1}
    fs = full_simplex("abc")
    assert all(betti_via_hochster(fs, i, j, GF) == 0
               for i in range(1, 4) for j in range(4))


def test_linear_resolution_detection():
    assert has_linear_resolution(ideal("abcdef", ["abc", "bcd", "cde", "def"]), GF)
    assert not has_linear_resolution(ideal("abcdef", ["abc", "cde"]), GF)
    assert has_linear_resolution(ideal("abc", ["abc"]), GF)
    with pytest.raises(InputError):
        has_linear_resolution(ideal("abcd", ["ab", "bcd"]), GF)


def test_componentwise_linear_examples():
    assert is_componentwise_linear_ideal(ideal("abcdef", ["abc", "cde", "ae"]), GF)
    assert not is_componentwise_linear_ideal(ideal("abcdef", ["abc", "def", "abef"]), GF)
    # single quadratic component with CM dual
    assert is_componentwise_linear_ideal(ideal("abcd", ["ab", "bc"]), GF)


def test_eagon_reiner_equivalence_random():
    rng = random.Random(43)
    done = 0
    while done < 15:
        I = random_squarefree_ideal(rng, rng.randint(3, 6))
        if len(set(I.gen_degrees())) != 1:
            continue
        delta = complex_from_ideal(I)
        dual = delta.alexander_dual()
        assert has_linear_resolution(I, GF) == dual.is_cohen_macaulay(GF)
        done += 1


def test_hilbert_series_examples():
    I = ideal("abcde", ["abc", "cde"])
    assert hilbert_series_quotient(I, 5).coeffs == (1, 5, 15, 33, 60, 97)
    assert hilbert_series_ideal(I, 5).coeffs == (0, 0, 0, 2, 10, 29)
    assert series_inverse(hilbert_series_quotient(I, 5)).coeffs == (1, -5, 10, -8, -5, 18)


def test_hilbert_zero_ideal_binomials():
    from k2res.series import binomial
    # the zero ideal is not constructible (gens >= 2), so compare a unit-free
    # quotient against the ambient count minus nothing at low degrees instead
    I = ideal("abcd", ["abcd"])
    H = hilbert_series_quotient(I, 3)
    assert H.coeffs == tuple(binomial(4 + d - 1, d) for d in range(4))


def test_hilbert_consistency_with_f_vector():
    rng = random.Random(47)
    for _ in range(15):
        I = random_squarefree_ideal(rng, rng.randint(2, 6))
        delta = complex_from_ideal(I)
        D = 6
        assert hilbert_series_quotient(I, D) == hilbert_series_from_f_vector(delta, D)


def test_hilbert_generator_cap():
    names = [f"x{i}" for i in range(30)]
    monos = [[names[i], names[i + 1]] for i in range(26)]
    I = ideal(names, monos)
    with pytest.raises(BoundError):
        hilbert_series_quotient(I, 3)


def test_bounds_helpers():
    I = ideal("abcdef", ["abc", "cde"])
    assert spec_module_bounds(I) == (7, 14)
    assert squarefree_module_bounds(6) == (7, 6)

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from k2res.linalg import (ExactMatrix, FieldSpec, FieldOps, kernel_basis,
                          parse_field, rank, rows_independent, rref)
from k2res.errors import InputError


def det_by_expansion(rows):
    """Cofactor-expansion determinant over Q (independent oracle)."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [[r[k] for k in range(n) if k != j] for r in rows[1:]]
        total += (-1) ** j * Fraction(rows[0][j]) * det_by_expansion(minor)
    return total


def rank_by_minors(rows):
    """Largest r with a nonzero r x r minor."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    for r in range(min(m, n), 0, -1):
        for rsel in itertools.combinations(range(m), r):
            for csel in itertools.combinations(range(n), r):
                sub = [[rows[i][j] for j in csel] for i in rsel]
                if det_by_expansion(sub) != 0:
                    return r
    return 0


def test_field_validation():
    FieldSpec.gf(2)
    FieldSpec.gf(32003)
    with pytest.raises(InputError):
        FieldSpec.gf(32004)
    with pytest.raises(InputError):
        FieldSpec("nonsense")
    assert parse_field("q").kind == "rationals"
    assert parse_field("gf:7").p == 7


def test_rref_empty_and_identity():
    q = FieldSpec.rationals()
    m = ExactMatrix.from_rows(q, [])
    assert rref(m) == (0, (), m)
    g7 = FieldSpec.gf(7)
    ident = ExactMatrix.identity(g7, 3)
    r, piv, red = rref(ident)
    assert r == 3 and piv == (0, 1, 2) and red == ident


def test_rank_against_minor_oracle():
    rng = random.Random(7)
    q = FieldSpec.rationals()
    for _ in range(6):
        rows = [[rng.randint(-3, 3) for _ in range(9)] for _ in range(6)]
        m = ExactMatrix.from_rows(q, rows)
        assert rank(m) == rank_by_minors(rows)


def test_rref_idempotent_and_transpose_rank():
    rng = random.Random(11)
    for fld in (FieldSpec.gf(7), FieldSpec.rationals()):
        for _ in range(12):
            rows = [[rng.randint(-4, 4) for _ in range(5)] for _ in range(4)]
            m = ExactMatrix.from_rows(fld, rows)
            r, piv, red = rref(m)
            r2, piv2, red2 = rref(red)
            assert (r2, piv2) == (r, piv) and red2 == red
            assert rank(m) == rank(m.transpose())


def test_kernel_identity_and_forced():
    g7 = FieldSpec.gf(7)
    assert kernel_basis(ExactMatrix.identity(g7, 3)) == []
    g2 = FieldSpec.gf(2)
    m = ExactMatrix.from_rows(g2, [[1, 1]])
    assert kernel_basis(m) == [[1, 1]]


def test_kernel_annihilation_random():
    rng = random.Random(3)
    fld = FieldSpec.gf(32003)
    rows = [[rng.randint(0, 32002) for _ in range(8)] for _ in range(5)]
    m = ExactMatrix.from_rows(fld, rows)
    ker = kernel_basis(m)
    assert len(ker) == 8 - rank(m)
    for v in ker:
        out = m.matvec(list(v))
        assert all(x == 0 for x in out)


def test_rows_independent():
    g7 = FieldSpec.gf(7)
    assert rows_independent(ExactMatrix.identity(g7, 4))
    with_zero = ExactMatrix.from_rows(g7, [[1, 2], [0, 0]])
    assert not rows_independent(with_zero)
    # the two dependent rows from a linearized differential: equal rows
    q = FieldSpec.rationals()
    m = ExactMatrix.from_rows(q, [[0, 0, -1], [0, 0, -1]])
    assert not rows_independent(m)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4),
                min_size=1, max_size=6))
def test_kernel_dimension_formula(rows):
    for fld in (FieldSpec.gf(13), FieldSpec.rationals()):
        m = ExactMatrix.from_rows(fld, rows)
        assert len(kernel_basis(m)) + rank(m) == m.ncols


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=5, max_size=5),
                min_size=2, max_size=5))
def test_gf_and_qq_rank_agree_on_small_integers(rows):
    # entries are small, so rank over GF(32003) equals the rational rank
    rq = rank(ExactMatrix.from_rows(FieldSpec.rationals(), rows))
    rp = rank(ExactMatrix.from_rows(FieldSpec.gf(32003), rows))
    assert rq == rp


def test_row_reducer_matches_rref():
    rng = random.Random(5)
    fld = FieldSpec.gf(101)
    ops = FieldOps(fld)
    rows = np.array([[rng.randint(0, 100) for _ in range(7)] for _ in range(9)],
                    dtype=np.int64)
    red = ops.reducer(7)
    inserted = red.insert_block(rows)
    r, piv, _ = rref(ExactMatrix.from_rows(fld, rows.tolist()))
    assert inserted == r
    assert sorted(red.pivots) == list(piv)
    # express: any row decomposes with zero remainder
    coeffs, rem = red.express(rows[0])
    assert not np.any(rem)


def test_integer_matrix_pivot_relations_over_q():
    # exactness over Q: clearing denominators of the RREF rows yields
    # integer relations satisfied by the original rows
    q = FieldSpec.rationals()
    rows = [[2, 4, 6], [3, 5, 7], [1, 1, 2]]
    m = ExactMatrix.from_rows(q, rows)
    r, piv, red = rref(m)
    assert r == 3 and all(red.entry(i, p) == 1 for i, p in enumerate(piv))
    assert rank_by_minors(rows) == 3

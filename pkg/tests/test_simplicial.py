import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from k2res.errors import InputError
from k2res.linalg import FieldSpec
from k2res.simplicial import (SimplicialComplex, bits, from_facets, full_simplex,
                              irrelevant_complex, parse_complex, popcount,
                              void_complex)

GF = FieldSpec.gf(32003)


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

def oracle_faces(n, facets):
    """All faces by scanning every subset of the vertex set."""
    return sorted(m for m in range(1 << n)
                  if any((m & f) == m for f in facets))


def oracle_dual_faces(n, facets):
    """Faces of the dual: complements of non-faces, by full enumeration."""
    full = (1 << n) - 1
    faces = set(oracle_faces(n, facets))
    return sorted(full ^ m for m in range(1 << n) if m not in faces)


def _modp_rank(rows, p=32003):
    a = np.array(rows, dtype=np.int64) % p
    r = 0
    m, n = a.shape
    for c in range(n):
        nz = [i for i in range(r, m) if a[i, c]]
        if not nz:
            continue
        a[[r, nz[0]]] = a[[nz[0], r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        for i in range(m):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        r += 1
        if r == m:
            break
    return r


def oracle_homology(n, facets):
    """Reduced homology dims over GF(32003) built from the exhaustive face
    list with cofactor signs; independent of the library's boundary code."""
    faces = oracle_faces(n, facets)
    if not faces:
        return {}
    by_card = {}
    for f in faces:
        by_card.setdefault(popcount(f), []).append(f)
    for k in by_card:
        by_card[k].sort()
    dmax = max(by_card) - 1
    ranks, ncols = {}, {}
    for i in range(0, dmax + 2):
        lower = by_card.get(i, [])
        upper = by_card.get(i + 1, [])
        ncols[i] = len(upper)
        if not lower or not upper:
            ranks[i] = 0
            continue
        idx = {f: r for r, f in enumerate(lower)}
        rows = [[0] * len(upper) for _ in lower]
        for c, f in enumerate(upper):
            for j, v in enumerate(sorted(bits(f))):
                rows[idx[f ^ (1 << v)]][c] = (-1) ** j
        ranks[i] = _modp_rank(rows)
    out = {}
    for i in range(-1, dmax + 1):
        nullity = 1 if i == -1 else ncols[i] - ranks[i]
        h = nullity - ranks.get(i + 1, 0)
        if h:
            out[i] = h
    return out


def random_complex(rng, n):
    nfac = rng.randint(1, 5)
    facets = []
    for _ in range(nfac):
        size = rng.randint(1, n)
        facets.append(rng.sample(range(n), size))
    names = [chr(ord("a") + i) for i in range(n)]
    return from_facets(names, [[names[i] for i in f] for f in facets])


# ---------------------------------------------------------------------------
# construction and the text format
# ---------------------------------------------------------------------------

def test_from_facets_maximality():
    sc = from_facets("abc", [["a", "b"], ["a"]])
    assert [sc.names_of(f) for f in sc.facets] == [("a", "b")]
    with pytest.raises(InputError):
        from_facets("ab", [["z"]])


def test_void_vs_irrelevant():
    v = void_complex("ab")
    i = irrelevant_complex("ab")
    assert v.is_void and not v.is_irrelevant
    assert i.is_irrelevant and i.dim == -1
    assert v.reduced_homology(GF) == {}
    assert i.reduced_homology(GF) == {-1: 1}


def test_parse_and_render_round_trip():
    text = "vertices: a b c\n# comment\na b\nb c\na c\n"
    sc = parse_complex(text)
    assert sc.dim == 1
    assert parse_complex(sc.to_text()) == sc
    # canonical output sorts facets by bitmask
    assert sc.facets == tuple(sorted(sc.facets))


def test_dual7_construction():
    names = list("abcdefg")
    sc = from_facets(names, [list("abcd"), list("abcg"), list("abfg"),
                             list("aefg"), list("defg")])
    assert sc.is_pure() and sc.dim == 3
    assert sc.reduced_homology(GF) == {1: 1}


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------

def test_dual_of_full_simplex_is_void():
    fs = full_simplex("abc")
    assert fs.alexander_dual().is_void
    assert fs.alexander_dual().alexander_dual() == fs


def test_dual_matches_exhaustive_oracle():
    rng = random.Random(17)
    for _ in range(25):
        n = rng.randint(2, 6)
        sc = random_complex(rng, n)
        dual = sc.alexander_dual()
        assert sorted(dual.faces()) == oracle_dual_faces(n, sc.facets)
        assert dual.alexander_dual() == sc


# ---------------------------------------------------------------------------
# links and skeleta
# ---------------------------------------------------------------------------

def test_link_of_facet_is_irrelevant():
    sc = from_facets("abc", [["a", "b"], ["b", "c"]])
    lk = sc.link(sc.mask_of(["a", "b"]))
    assert lk.is_irrelevant
    assert lk.reduced_homology(GF) == {-1: 1}


def test_link_examples_from_dual7():
    names = list("abcdefg")
    sc = from_facets(names, [list("abcd"), list("abcg"), list("abfg"),
                             list("aefg"), list("defg")])
    assert sc.link(0) == sc
    lk = sc.link(sc.mask_of(["d"]))
    assert lk.dim == 2
    assert lk.reduced_homology(GF).get(0) == 1  # disconnected
    with pytest.raises(InputError):
        sc.link(sc.mask_of(["c", "e"]))  # not a face


def test_pure_skeleton():
    sc = from_facets("abcd", [["a", "b", "c"], ["c", "d"]])
    sk1 = sc.pure_skeleton(1)
    assert all(popcount(f) == 2 for f in sk1.facets)
    assert sc.pure_skeleton(2).facets == (sc.mask_of(["a", "b", "c"]),)
    assert sc.pure_skeleton(0).facets == tuple(1 << i for i in range(4))
    assert sc.pure_skeleton(3).is_void
    pure = from_facets("abc", [["a", "b"], ["b", "c"]])
    assert pure.pure_skeleton(pure.dim) == pure


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------

def test_homology_basic_shapes():
    tri = from_facets("abc", [["a", "b"], ["b", "c"], ["a", "c"]])
    assert tri.reduced_homology(GF) == {1: 1}
    two = from_facets("ab", [["a"], ["b"]])
    assert two.reduced_homology(GF) == {0: 1}
    assert full_simplex("abcd").reduced_homology(GF) == {}


def test_homology_matches_oracle_on_random_complexes():
    rng = random.Random(23)
    for _ in range(20):
        sc = random_complex(rng, rng.randint(2, 6))
        assert sc.reduced_homology(GF) == oracle_homology(sc.n, sc.facets)


def test_euler_characteristic_identity():
    rng = random.Random(29)
    for _ in range(20):
        sc = random_complex(rng, rng.randint(2, 6))
        h = sc.reduced_homology(GF)
        lhs = sum(((-1) ** i) * v for i, v in h.items())
        fv = sc.f_vector()  # fv[k] = number of (k-1)-dimensional faces
        rhs = sum(((-1) ** (k - 1)) * fv[k] for k in range(len(fv)))
        assert lhs == rhs


# ---------------------------------------------------------------------------
# Cohen-Macaulay family
# ---------------------------------------------------------------------------

def test_cm_verdict_examples():
    assert full_simplex("abcd").is_cohen_macaulay(GF)
    names = list("abcdefg")
    dual7 = from_facets(names, [list("abcd"), list("abcg"), list("abfg"),
                                list("aefg"), list("defg")])
    assert dual7.is_pure()
    assert not dual7.is_buchsbaum(GF)
    assert not dual7.is_cohen_macaulay(GF)
    mixed = from_facets("abc", [["a", "b"], ["c"]])
    assert not mixed.is_pure()


def test_cm_implication_chain_on_random_complexes():
    rng = random.Random(31)
    for _ in range(20):
        sc = random_complex(rng, rng.randint(2, 6))
        cm = sc.is_cohen_macaulay(GF)
        bb = sc.is_buchsbaum(GF)
        if cm:
            assert bb
        if bb:
            assert sc.is_pure()
        if sc.is_pure():
            assert sc.is_sequentially_cm(GF) == cm


@settings(max_examples=20, deadline=None)
@given(st.lists(st.lists(st.integers(0, 4), min_size=1, max_size=4, unique=True),
                min_size=1, max_size=4))
def test_seq_cm_of_pure_cm_holds(facet_lists):
    names = [chr(ord("a") + i) for i in range(5)]
    sc = from_facets(names, [[names[i] for i in f] for f in facet_lists])
    if sc.is_cohen_macaulay(GF):
        assert sc.is_sequentially_cm(GF)

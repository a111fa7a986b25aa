"""Degreewise expansion of presented connected graded algebras.

An algebra is given by degree-1 generators and homogeneous relations of
degree >= 2 (a commutative flag adds all commutators implicitly).  The
expansion computes, for every degree d up to a bound D, a normal-form
basis of A_d, right-multiplication tables, and exact multiplication.

Commutative algebras get a native monomial backend.  Tensor-algebra data
(lifts, the reduction mod I' = V.I + I.V) is always computed with
commutators included among the relations, in first-letter-split
coordinates V (x) A_{d-1} so no n^d space is ever materialized.

Word order is length-then-lex with generators in declaration order; rref
pivots then fix normal forms deterministically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BoundError, InputError
from .linalg import FieldOps, FieldSpec, SparseRowReducer
from .series import TruncatedSeries

# switch a degree to sparse dict-row elimination past this many cells
_DENSE_CELLS = 30_000_000

Word = tuple[int, ...]
Term = tuple[object, Word]  # (coefficient, word)


@dataclass(frozen=True)
class AlgebraPresentation:
    gen_names: tuple[str, ...]
    relations: tuple[tuple[Term, ...], ...]
    commutative: bool = False

    def __post_init__(self):
        n = len(self.gen_names)
        if len(set(self.gen_names)) != n:
            raise InputError("duplicate generator names")
        canon = []
        for rel in self.relations:
            degs = {len(w) for _, w in rel}
            if len(degs) != 1:
                raise InputError("inhomogeneous relation")
            if degs.pop() < 2:
                raise InputError("relations must have degree >= 2")
            merged: dict[Word, object] = {}
            for c, w in rel:
                if any(i < 0 or i >= n for i in w):
                    raise InputError("generator index out of range")
                key = tuple(sorted(w)) if self.commutative else tuple(w)
                merged[key] = merged.get(key, 0) + Fraction(c)
            terms = tuple(sorted(((c, w) for w, c in merged.items() if c != 0),
                                 key=lambda t: t[1]))
            if terms:  # relations that cancel (e.g. commutators handed to a
                canon.append(terms)  # commutative presentation) are implied

        object.__setattr__(self, "relations", tuple(canon))

    @property
    def n(self) -> int:
        return len(self.gen_names)

    def relation_degrees(self) -> list[int]:
        return [len(rel[0][1]) for rel in self.relations]

    def is_quadratic(self) -> bool:
        return all(d == 2 for d in self.relation_degrees())

    def tensor_relations(self) -> list[tuple[Term, ...]]:
        """Relations of A as a quotient of T(V): commutators first (when
        commutative), then the presented relations with words kept sorted."""
        rels: list[tuple[Term, ...]] = []
        if self.commutative:
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    rels.append(((Fraction(1), (i, j)), (Fraction(-1), (j, i))))
        rels.extend(self.relations)
        return rels

    def word_name(self, w: Word) -> str:
        return "*".join(self.gen_names[i] for i in w) if w else "1"


def presentation(gen_names, relations, commutative=False) -> AlgebraPresentation:
    """relations: iterable of term lists [(coeff, word of generator names)]."""
    gen_names = tuple(gen_names)
    idx = {g: i for i, g in enumerate(gen_names)}
    rels = []
    for rel in relations:
        terms = []
        for c, w in rel:
            word = tuple(idx[g] for g in w)
            terms.append((c, word))
        rels.append(tuple(terms))
    return AlgebraPresentation(gen_names, tuple(rels), commutative)


def monomial_presentation(gen_names, monomials, commutative=True) -> AlgebraPresentation:
    return presentation(gen_names, [[(1, tuple(m))] for m in monomials], commutative)


def polynomial_presentation(gen_names) -> AlgebraPresentation:
    return AlgebraPresentation(tuple(gen_names), (), commutative=True)


def face_ring_presentation(I) -> AlgebraPresentation:
    """AlgebraPresentation of k[Delta] = S/I for a squarefree MonomialIdeal."""
    from .simplicial import bits
    monos = [tuple(I.ring_vars[i] for i in bits(g)) for g in sorted(I.gens)]
    return monomial_presentation(I.ring_vars, monos, commutative=True)


# ---------------------------------------------------------------------------
# parsing: 'vars: x y', 'commutative: true', 'rel: x*x - x*y'
# ---------------------------------------------------------------------------

def _parse_term(text: str, names: tuple[str, ...]):
    text = text.strip()
    coeff = 1
    pos = 0
    num = ""
    while pos < len(text) and (text[pos].isdigit()):
        num += text[pos]
        pos += 1
    if num:
        coeff = int(num)
    rest = text[pos:].strip().lstrip("*").strip()
    if not rest:
        return coeff, ()
    parts = [p for chunk in rest.split("*") for p in chunk.split()]
    word: list[str] = []
    for part in parts:
        if part in names:
            word.append(part)
        elif all(ch in names for ch in part):
            word.extend(part)  # juxtaposed single-letter names
        else:
            raise InputError(f"cannot parse term factor {part!r}")
    return coeff, tuple(word)


def _parse_relation(text: str, names: tuple[str, ...]):
    # split into signed terms
    terms = []
    buf = ""
    sign = 1
    for ch in text:
        if ch in "+-":
            if buf.strip():
                c, w = _parse_term(buf, names)
                terms.append((sign * c, w))
            sign = 1 if ch == "+" else -1
            buf = ""
        else:
            buf += ch
    if buf.strip():
        c, w = _parse_term(buf, names)
        terms.append((sign * c, w))
    if not terms:
        raise InputError(f"empty relation {text!r}")
    return terms


def parse_algebra(text: str) -> AlgebraPresentation:
    names = None
    commutative = False
    rel_lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("vars:"):
            names = tuple(line.split(":", 1)[1].replace(",", " ").split())
        elif low.startswith("commutative:"):
            val = line.split(":", 1)[1].strip().lower()
            if val not in ("true", "false"):
                raise InputError(f"commutative must be true|false, got {val!r}")
            commutative = val == "true"
        elif low.startswith("rel:"):
            rel_lines.append(line.split(":", 1)[1])
        else:
            raise InputError(f"cannot parse algebra line {line!r}")
    if names is None:
        raise InputError("missing vars: header")
    rels = [_parse_relation(r, names) for r in rel_lines]
    return presentation(names, rels, commutative)


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

@dataclass
class Element:
    """Homogeneous element of A_d in normal-form coordinates."""

    algebra: "DegreewiseAlgebra"
    degree: int
    vec: np.ndarray

    @property
    def is_zero(self) -> bool:
        return not any(x != 0 for x in self.vec)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return (self.algebra is other.algebra and self.degree == other.degree
                and list(self.vec) == list(other.vec))

    def __repr__(self):
        A = self.algebra
        parts = []
        for i, c in enumerate(self.vec):
            if c != 0:
                w = A.basis(self.degree)[i]
                parts.append(f"{c}*{A.pres.word_name(w)}" if c != 1 or not w
                             else A.pres.word_name(w))
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class TensorElement:
    """Homogeneous element of T(V): exact combination of words."""

    degree: int
    terms: tuple[Term, ...]

    @staticmethod
    def from_dict(degree: int, d: dict) -> "TensorElement":
        return TensorElement(degree, tuple(sorted((c, w) for w, c in d.items() if c != 0)))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def times(self, other: "TensorElement", coerce) -> "TensorElement":
        out: dict[Word, object] = {}
        for c1, w1 in self.terms:
            for c2, w2 in other.terms:
                w = w1 + w2
                out[w] = coerce(out.get(w, 0) + c1 * c2)
        return TensorElement.from_dict(self.degree + other.degree, out)

    def linear_coords(self, n: int):
        """Coefficient vector over V (zero unless degree is 1)."""
        v = [0] * n
        if self.degree == 1:
            for c, w in self.terms:
                v[w[0]] = c
        return v


# ---------------------------------------------------------------------------
# the expansion
# ---------------------------------------------------------------------------

class DegreewiseAlgebra:
    """A = T(V)/I expanded degree by degree up to D."""

    def __init__(self, pres: AlgebraPresentation, D: int, fld: FieldSpec):
        if D < 0:
            raise InputError("D must be >= 0")
        self.pres = pres
        self.D = D
        self.field = fld
        self.ops = FieldOps(fld)
        self.n = pres.n
        self._basis: list[list[Word]] = []
        self._index: list[dict[Word, int]] = []
        self._dims: list[int] = []
        self._dense: list[bool] = []
        # dense tables: _rmul[d] has shape (n, a_d, a_{d+1}); sparse:
        # _rmul_sparse[d][g][i] is a dict {idx: coeff}
        self._rmul: dict[int, np.ndarray] = {}
        self._rmul_sparse: dict[int, list[list[dict[int, int]]]] = {}
        self._pending_reducer: dict[int, object] = {}  # top-degree rank-only data
        self._word_matrix_cache: dict[tuple[int, Word], np.ndarray] = {}
        self._sparse_word_rows_cache: dict[tuple[int, Word], list[dict[int, int]]] = {}
        self._iprime: dict[int, "IprimeReducer"] = {}
        self._minimal_relations: list[tuple[Term, ...]] | None = None
        if pres.commutative:
            self._expand_commutative()
        else:
            self._expand_words()

    # -- basic queries -------------------------------------------------------

    def dims(self, d: int) -> int:
        if d < 0:
            return 0
        if d > self.D:
            raise BoundError(f"degree {d} beyond expansion bound {self.D}")
        return self._dims[d]

    def basis(self, d: int) -> list[Word]:
        if d > self.D:
            raise BoundError(f"degree {d} beyond expansion bound {self.D}")
        return self._basis[d]

    def index(self, d: int) -> dict[Word, int]:
        return self._index[d]

    def hilbert_series(self, D: int | None = None) -> TruncatedSeries:
        D = self.D if D is None else D
        return TruncatedSeries(tuple(self.dims(d) for d in range(D + 1)))

    def zero(self, d: int) -> Element:
        return Element(self, d, self.ops.zeros(self.dims(d)))

    def one(self) -> Element:
        return Element(self, 0, self.ops.unit(1, 0))

    def element_from_terms(self, terms) -> Element:
        """terms: iterable of (coeff, word of generator names)."""
        idx = {g: i for i, g in enumerate(self.pres.gen_names)}
        degs = set()
        items = []
        for c, w in terms:
            word = tuple(idx[g] for g in w)
            degs.add(len(word))
            items.append((c, word))
        if len(degs) != 1:
            raise InputError("inhomogeneous element")
        d = degs.pop()
        v = self.ops.zeros(self.dims(d))
        for c, word in items:
            red = self.reduce_word(word)
            v = self.ops.norm(v + self.ops.coerce(c) * red)
        return Element(self, d, v)

    def monomial(self, text: str) -> Element:
        """Element from a juxtaposed or *-separated product of generators."""
        c, w = _parse_term(text, self.pres.gen_names)
        return self.element_from_terms([(c, w)])

    # -- multiplication ------------------------------------------------------

    def _table_dense(self, d: int) -> np.ndarray:
        self.ensure_tables(d)
        if d in self._rmul:
            return self._rmul[d]
        raise BoundError(f"degree {d} held sparsely; dense table unavailable")

    def has_dense_tables(self, d: int) -> bool:
        return self._dense[d + 1] if d + 1 <= self.D else False

    def ensure_tables(self, d: int) -> None:
        """Tables A_d x V -> A_{d+1}; built lazily for a rank-only top degree."""
        if d < 0 or d + 1 > self.D:
            raise BoundError(f"multiplication into degree {d + 1} beyond bound {self.D}")
        if d in self._rmul or d in self._rmul_sparse:
            return
        red = self._pending_reducer.pop(d + 1, None)
        if red is None:
            raise BoundError(f"no table data at degree {d}")
        self._finish_sparse_degree(d + 1, red)

    def mul_vecdict_gen(self, d: int, vec: dict[int, int], g: int) -> dict[int, int]:
        """(sparse vector over A_d) * x_g, as a sparse vector over A_{d+1}."""
        self.ensure_tables(d)
        p = self.field.p
        out: dict[int, int] = {}
        if d in self._rmul_sparse:
            tab = self._rmul_sparse[d][g]
            for i, c in vec.items():
                for j, v in tab[i].items():
                    out[j] = (out.get(j, 0) + c * v) % p
        else:
            tab = self._rmul[d][g]
            for i, c in vec.items():
                row = tab[i]
                for j in np.nonzero(row)[0]:
                    j = int(j)
                    out[j] = (out.get(j, 0) + c * int(row[j])) % p
        return {j: v for j, v in out.items() if v}

    def mul_vecdict_word(self, d: int, vec: dict[int, int], word: Word) -> dict[int, int]:
        for g in word:
            vec = self.mul_vecdict_gen(d, vec, g)
            d += 1
        return vec

    def sparse_word_rows(self, d: int, word: Word) -> list[dict[int, int]]:
        """Rows of right-multiplication by a word: A_d -> A_{d+|word|}."""
        key = (d, word)
        rows = self._sparse_word_rows_cache.get(key)
        if rows is None:
            rows = [self.mul_vecdict_word(d, {i: 1}, word) for i in range(self.dims(d))]
            self._sparse_word_rows_cache[key] = rows
        return rows

    def right_word_matrix(self, d: int, word: Word) -> np.ndarray:
        """Dense matrix (a_d x a_{d+|word|}) of right multiplication by word."""
        key = (d, word)
        m = self._word_matrix_cache.get(key)
        if m is not None:
            return m
        if not word:
            m = self.ops.array([[self.ops.one if i == j else 0 for j in range(self.dims(d))]
                                for i in range(self.dims(d))]) if self.dims(d) else self.ops.zeros(0, 0)
        else:
            self.ensure_tables(d)
            if d in self._rmul:
                m = self._rmul[d][word[0]]
            else:
                m = self._sparse_to_dense(d, word[0])
            for k, g in enumerate(word[1:], start=1):
                self.ensure_tables(d + k)
                nxt = self._rmul[d + k][g] if d + k in self._rmul else self._sparse_to_dense(d + k, g)
                m = self.ops.matmul(m, nxt)
        self._word_matrix_cache[key] = m
        return m

    def _sparse_to_dense(self, d: int, g: int) -> np.ndarray:
        tab = self._rmul_sparse[d][g]
        m = self.ops.zeros(self.dims(d), self.dims(d + 1))
        for i, row in enumerate(tab):
            for j, v in row.items():
                m[i, j] = v
        return m

    def right_element_matrix(self, d: int, el: Element) -> np.ndarray:
        """Dense matrix of right multiplication by a homogeneous element."""
        out = self.ops.zeros(self.dims(d), self.dims(d + el.degree))
        for j in range(self.dims(el.degree)):
            c = el.vec[j]
            if c != 0:
                out = out + c * self.right_word_matrix(d, self.basis(el.degree)[j])
        return self.ops.norm(out)

    def multiply(self, x: Element, y: Element) -> Element:
        """Bilinear associative product; errors past the expansion bound."""
        d = x.degree + y.degree
        if d > self.D:
            raise BoundError(f"product degree {d} beyond expansion bound {self.D}")
        if y.degree == 0:
            return Element(self, x.degree, self.ops.norm(x.vec * y.vec[0]))
        if x.degree == 0:
            return Element(self, y.degree, self.ops.norm(y.vec * x.vec[0]))
        out = self.ops.zeros(self.dims(d))
        for j in range(self.dims(y.degree)):
            c = y.vec[j]
            if c != 0:
                w = self.basis(y.degree)[j]
                out = out + c * self.ops.norm(x.vec @ self.right_word_matrix(x.degree, w))
        return Element(self, d, self.ops.norm(out))

    def reduce_word(self, word: Word) -> np.ndarray:
        """Normal-form coordinates of a word of generators."""
        d = len(word)
        if d > self.D:
            raise BoundError(f"word degree {d} beyond expansion bound {self.D}")
        if self.pres.commutative:
            return self._reduce_full[d][self._full_index[d][tuple(sorted(word))]]
        v = self.ops.unit(1, 0)
        for k, g in enumerate(word):
            self.ensure_tables(k)
            if k in self._rmul:
                v = self.ops.norm(v @ self._rmul[k][g])
            else:
                dd = {i: int(v[i]) for i in np.nonzero(v)[0]}
                dd = self.mul_vecdict_gen(k, dd, g)
                v = self.ops.zeros(self.dims(k + 1))
                for i, c in dd.items():
                    v[i] = c
        return v

    def reduce_tensor(self, t: TensorElement) -> Element:
        v = self.ops.zeros(self.dims(t.degree))
        for c, w in t.terms:
            v = v + self.ops.coerce(c) * self.reduce_word(w)
        return Element(self, t.degree, self.ops.norm(v))

    def lift_to_tensor(self, x: Element) -> TensorElement:
        """Canonical section: each normal-form basis word maps to itself."""
        terms = {}
        for i, c in enumerate(x.vec):
            if c != 0:
                terms[self.basis(x.degree)[i]] = c
        return TensorElement.from_dict(x.degree, terms)

    # -- commutative backend ---------------------------------------------------

    def _expand_commutative(self):
        ops = self.ops
        n = self.n
        self._full: list[list[Word]] = []
        self._full_index: list[dict[Word, int]] = []
        self._reduce_full: list[np.ndarray] = []
        rel_by_deg: dict[int, list] = {}
        for rel in self.pres.relations:
            rel_by_deg.setdefault(len(rel[0][1]), []).append(rel)
        for d in range(self.D + 1):
            full = list(itertools.combinations_with_replacement(range(n), d))
            fidx = {m: i for i, m in enumerate(full)}
            rows = []
            for e, rels in rel_by_deg.items():
                if e > d:
                    continue
                for rel in rels:
                    for m in itertools.combinations_with_replacement(range(n), d - e):
                        row = ops.zeros(len(full))
                        for c, w in rel:
                            row[fidx[tuple(sorted(m + w))]] += ops.coerce(c)
                        rows.append(ops.norm(row))
            if rows:
                R, pivots = ops.rref(np.vstack(rows) if self.field.is_prime_field
                                     else np.array(rows, dtype=object))
            else:
                R, pivots = None, []
            pivset = set(pivots)
            nonpiv = [i for i in range(len(full)) if i not in pivset]
            basis = [full[i] for i in nonpiv]
            red = ops.zeros(len(full), len(basis))
            for k, i in enumerate(nonpiv):
                red[i, k] = ops.one
            for r, c in enumerate(pivots):
                for k, i in enumerate(nonpiv):
                    if R[r, i] != 0:
                        red[c, k] = -R[r, i] % self.field.p if self.field.p else -R[r, i]
            self._full.append(full)
            self._full_index.append(fidx)
            self._reduce_full.append(red)
            self._basis.append(basis)
            self._index.append({w: i for i, w in enumerate(basis)})
            self._dims.append(len(basis))
            self._dense.append(True)
        for d in range(self.D):
            a, b = self._dims[d], self._dims[d + 1]
            tab = ops.zeros(self.n, a, b)
            for g in range(self.n):
                for i, w in enumerate(self._basis[d]):
                    m = tuple(sorted(w + (g,)))
                    tab[g, i] = self._reduce_full[d + 1][self._full_index[d + 1][m]]
            self._rmul[d] = tab

    # -- noncommutative backend ------------------------------------------------

    def _expand_words(self):
        ops = self.ops
        n = self.n
        self._basis.append([()])
        self._index.append({(): 0})
        self._dims.append(1)
        self._dense.append(True)
        rel_by_deg: dict[int, list] = {}
        for rel in self.pres.relations:
            rel_by_deg.setdefault(len(rel[0][1]), []).append(rel)
        for d in range(1, self.D + 1):
            prev = self._dims[d - 1]
            ncols = prev * n
            nrows = sum(self._dims[d - e] for e, rels in rel_by_deg.items()
                        for _ in rels if e <= d)
            dense = self.field.is_prime_field is False or nrows * ncols <= _DENSE_CELLS
            if not self.field.is_prime_field and nrows * ncols > _DENSE_CELLS:
                raise BoundError("rationals mode supports desk-scale expansions only")
            rows_iter = self._relation_rows(d, rel_by_deg, ncols)
            if dense:
                rows = [r for r in rows_iter]
                if rows:
                    mat = ops.zeros(len(rows), ncols)
                    for i, rd in enumerate(rows):
                        for j, c in rd.items():
                            mat[i, j] = c
                    R, pivots = ops.rref(mat)
                else:
                    R, pivots = None, []
                self._install_degree(d, ncols, R, pivots)
            else:
                red = SparseRowReducer(self.field.p)
                for rd in rows_iter:
                    red.insert(rd)
                pivots = sorted(red.pivots)
                self._install_degree_sparse_basis(d, ncols, pivots)
                self._pending_reducer[d] = red
                if d < self.D:
                    # interior degrees feed the next degree's rows
                    self.ensure_tables(d - 1)

    def _unit_times_word(self, d: int, i: int, word: Word) -> dict[int, object]:
        """Sparse coordinates of basis_i(A_d) * word (any field)."""
        if self.field.is_prime_field:
            return self.mul_vecdict_word(d, {i: 1}, word)
        v = self.ops.unit(self.dims(d), i)
        for k, g in enumerate(word):
            v = v @ self._rmul[d + k][g]
        return {j: v[j] for j in range(len(v)) if v[j] != 0}

    def _relation_rows(self, d, rel_by_deg, ncols):
        """Rows of I_d in (A_{d-1} x V) coordinates, one dict per row."""
        n = self.n
        for e in sorted(rel_by_deg):
            if e > d:
                continue
            for rel in rel_by_deg[e]:
                for u in range(self._dims[d - e]):
                    row: dict[int, object] = {}
                    for c, w in rel:
                        cc = self.ops.coerce(c)
                        pref = self._unit_times_word(d - e, u, w[:-1])
                        for i, v in pref.items():
                            col = i * n + w[-1]
                            row[col] = self.ops.coerce(row.get(col, 0) + cc * v)
                    yield {k: v for k, v in row.items() if v != 0}

    def _install_degree(self, d, ncols, R, pivots):
        n = self.n
        pivset = set(pivots)
        nonpiv = [i for i in range(ncols) if i not in pivset]
        basis = [self._basis[d - 1][c // n] + (c % n,) for c in nonpiv]
        self._basis.append(basis)
        self._index.append({w: i for i, w in enumerate(basis)})
        self._dims.append(len(basis))
        self._dense.append(True)
        # reduction of every candidate column, then slice into per-gen tables
        ops = self.ops
        red = ops.zeros(ncols, len(basis))
        for k, i in enumerate(nonpiv):
            red[i, k] = ops.one
        for r, c in enumerate(pivots):
            for k, i in enumerate(nonpiv):
                if R[r, i] != 0:
                    red[c, k] = -R[r, i] % self.field.p if self.field.p else -R[r, i]
        prev = self._dims[d - 1]
        tab = ops.zeros(n, prev, len(basis))
        for g in range(n):
            for i in range(prev):
                tab[g, i] = red[i * n + g]
        self._rmul[d - 1] = tab

    def _install_degree_sparse_basis(self, d, ncols, pivots):
        n = self.n
        pivset = set(pivots)
        nonpiv = [i for i in range(ncols) if i not in pivset]
        basis = [self._basis[d - 1][c // n] + (c % n,) for c in nonpiv]
        self._basis.append(basis)
        self._index.append({w: i for i, w in enumerate(basis)})
        self._dims.append(len(basis))
        self._dense.append(False)

    def _finish_sparse_degree(self, d, red: SparseRowReducer):
        """Back-substitute the stored elimination and build sparse tables."""
        red.back_substitute()
        n = self.n
        ncols = self._dims[d - 1] * n
        pivset = set(red.pivots)
        nonpiv = [i for i in range(ncols) if i not in pivset]
        colpos = {c: k for k, c in enumerate(nonpiv)}
        prev = self._dims[d - 1]
        tab: list[list[dict[int, int]]] = [[{} for _ in range(prev)] for _ in range(n)]
        p = self.field.p
        for g in range(n):
            for i in range(prev):
                c = i * n + g
                if c in pivset:
                    row = red.pivots[c]
                    tab[g][i] = {colpos[cc]: (-v) % p for cc, v in row.items() if cc != c}
                else:
                    tab[g][i] = {colpos[c]: 1}
        self._rmul_sparse[d - 1] = tab

    # -- tensor-side data ------------------------------------------------------

    def minimal_relations(self) -> list[tuple[Term, ...]]:
        """Inclusion of tensor relations that are minimal generators of I
        (commutators included when commutative), degree-ascending."""
        if self._minimal_relations is None:
            rels = self.tensor_relations_sorted()
            out = []
            reducers: dict[int, object] = {}
            for rel in rels:
                e = len(rel[0][1])
                ip = self.iprime(e)
                red = reducers.get(e)
                if red is None:
                    red = ip.fresh_relation_reducer()
                    reducers[e] = red
                v = ip.project_tensor(TensorElement(e, tuple(rel)))
                if red.insert(v):
                    out.append(rel)
            self._minimal_relations = out
        return self._minimal_relations

    def tensor_relations_sorted(self) -> list[tuple[Term, ...]]:
        return sorted(self.pres.tensor_relations(), key=lambda rel: len(rel[0][1]))

    def iprime(self, d: int) -> "IprimeReducer":
        ip = self._iprime.get(d)
        if ip is None:
            ip = IprimeReducer(self, d)
            self._iprime[d] = ip
        return ip


class IprimeReducer:
    """Coset coordinates of T(V)_d modulo I' = V.I + I.V.

    Works in first-letter-split coordinates V (x) A_{d-1}: the projection
    pi(x.w) = x (x) [w reduced in A] kills V (x) I_{d-1} exactly, and the
    remaining relations pi(r.z) for tensor relations r and words z span
    the rest of I'_d.
    """

    def __init__(self, algebra: DegreewiseAlgebra, d: int):
        if d < 1:
            raise InputError("I' reduction needs degree >= 1")
        if d - 1 > algebra.D:
            raise BoundError(f"I' reduction at degree {d} needs expansion to {d - 1}")
        self.algebra = algebra
        self.d = d
        self.ops = algebra.ops
        n = algebra.n
        a_prev = algebra.dims(d - 1)
        self.ncols = n * a_prev
        rows = []
        for rel in algebra.tensor_relations_sorted():
            e = len(rel[0][1])
            if e >= d:
                continue  # r.z needs |z| >= 1 inside degree d... z of length d-e >= 1
            for z in itertools.product(range(n), repeat=d - e):
                rows.append(self._pi_rel_word(rel, z))
        if rows:
            mat = self.ops.zeros(len(rows), self.ncols)
            for i, rd in enumerate(rows):
                for j, c in rd.items():
                    mat[i, j] = c
            self.R, self.pivots = self.ops.rref(self.ops.norm(mat))
        else:
            self.R, self.pivots = None, []
        pivset = set(self.pivots)
        self.nonpivots = [i for i in range(self.ncols) if i not in pivset]

    @property
    def coset_dim(self) -> int:
        return len(self.nonpivots)

    def _pi_rel_word(self, rel, z: Word) -> dict[int, object]:
        """pi(r * z) in split coordinates."""
        A = self.algebra
        a_prev = A.dims(self.d - 1)
        row: dict[int, object] = {}
        for c, w in rel:
            tail = A.reduce_word(w[1:] + z)
            cc = self.ops.coerce(c)
            base = w[0] * a_prev
            for i in range(a_prev):
                if tail[i] != 0:
                    col = base + i
                    row[col] = self.ops.coerce(row.get(col, 0) + cc * tail[i])
        return {k: v for k, v in row.items() if v != 0}

    def project_tensor(self, t: TensorElement) -> np.ndarray:
        """Split coordinates of a tensor element (before the I.V reduction)."""
        if t.degree != self.d:
            raise InputError("degree mismatch in I' reduction")
        A = self.algebra
        a_prev = A.dims(self.d - 1)
        v = self.ops.zeros(self.ncols)
        for c, w in t.terms:
            tail = A.reduce_word(w[1:])
            v[w[0] * a_prev:(w[0] + 1) * a_prev] = \
                self.ops.norm(v[w[0] * a_prev:(w[0] + 1) * a_prev] + self.ops.coerce(c) * tail)
        return self.ops.norm(v)

    def reduce(self, t: TensorElement) -> np.ndarray:
        """Coset coordinates over the non-pivot split coordinates."""
        v = self.project_tensor(t)
        if self.pivots:
            coeffs = v[list(self.pivots)]
            v = self.ops.norm(v - coeffs @ self.R[: len(self.pivots)])
        return v[self.nonpivots]

    def representative(self, coords) -> TensorElement:
        """A tensor element with the given coset coordinates."""
        A = self.algebra
        a_prev = A.dims(self.d - 1)
        terms: dict[Word, object] = {}
        for k, col in enumerate(self.nonpivots):
            c = coords[k]
            if c != 0:
                g, i = divmod(col, a_prev)
                w = (g,) + A.basis(self.d - 1)[i]
                terms[w] = c
        return TensorElement.from_dict(self.d, terms)

    def fresh_relation_reducer(self):
        """Row reducer seeded with the I' rows, for minimality tests."""
        red = self.ops.reducer(self.ncols)
        if self.R is not None:
            for r in range(len(self.pivots)):
                red.insert(self.R[r])
        return red


def reduce_mod_iprime(algebra: DegreewiseAlgebra, t: TensorElement) -> np.ndarray:
    """Public entry: coset coordinates of t in T(V)_d / I'_d."""
    return algebra.iprime(t.degree).reduce(t)


def expand(pres: AlgebraPresentation, D: int, fld: FieldSpec) -> DegreewiseAlgebra:
    return DegreewiseAlgebra(pres, D, fld)

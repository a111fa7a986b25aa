"""Simplicial complexes: Alexander duality, links, skeleta, reduced homology
over a field, and the Cohen-Macaulay family of verdicts.

Faces are bitmasks over the (ordered) vertex set.  The void complex (no
faces at all) and the irrelevant complex {emptyset} are distinct values:
the void complex has an empty facet list, the irrelevant complex has the
single facet 0.  Reduced homology follows the convention that the
irrelevant complex has H~_{-1} = k and the void complex has none.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InputError
from .linalg import ExactMatrix, FieldSpec, kernel_basis, rank

_EXHAUSTIVE_LIMIT = 20  # duals and face enumeration scan all 2^n subsets


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _maximal(masks) -> tuple[int, ...]:
    masks = sorted(set(masks))
    keep = []
    for m in masks:
        if not any(m != o and (m & o) == m for o in masks):
            keep.append(m)
    return tuple(sorted(keep))


@dataclass(frozen=True)
class SimplicialComplex:
    vertex_names: tuple[str, ...]
    facets: tuple[int, ...]  # sorted bitmasks, inclusion-maximal; () = void

    @property
    def n(self) -> int:
        return len(self.vertex_names)

    @property
    def is_void(self) -> bool:
        return not self.facets

    @property
    def is_irrelevant(self) -> bool:
        return self.facets == (0,)

    @property
    def dim(self) -> int:
        """Dimension; -1 for {emptyset}.  Raises on the void complex."""
        if self.is_void:
            raise InputError("void complex has no dimension")
        return max(popcount(f) for f in self.facets) - 1

    def mask_of(self, names) -> int:
        m = 0
        for nm in names:
            try:
                m |= 1 << self.vertex_names.index(nm)
            except ValueError:
                raise InputError(f"unknown vertex {nm!r}") from None
        return m

    def names_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.vertex_names[i] for i in bits(mask))

    def contains(self, mask: int) -> bool:
        return any((mask & f) == mask for f in self.facets)

    def faces(self) -> tuple[int, ...]:
        """All faces (including 0 unless void), sorted by bitmask."""
        return _faces_cached(self.facets)

    def faces_of_card(self, k: int) -> list[int]:
        return [f for f in self.faces() if popcount(f) == k]

    def f_vector(self) -> list[int]:
        """(f_{-1}, f_0, ..., f_dim) face counts."""
        if self.is_void:
            return []
        fv = [0] * (self.dim + 2)
        for f in self.faces():
            fv[popcount(f)] += 1
        return fv

    # -- constructions ------------------------------------------------------

    def alexander_dual(self) -> "SimplicialComplex":
        """Faces of the dual = complements of non-faces; an involution."""
        if self.n > _EXHAUSTIVE_LIMIT:
            raise InputError(f"alexander_dual limited to {_EXHAUSTIVE_LIMIT} vertices")
        full = (1 << self.n) - 1
        face_set = set(self.faces())
        nonfaces = [m for m in range(full + 1) if m not in face_set]
        return SimplicialComplex(self.vertex_names, _maximal(full ^ m for m in _minimal(nonfaces)))

    def link(self, tau: int) -> "SimplicialComplex":
        """link(tau) on the vertices outside tau.  Requires tau to be a face."""
        if not self.contains(tau):
            raise InputError(f"link of a non-face {self.names_of(tau)}")
        keep = [i for i in range(self.n) if not (tau >> i) & 1]
        names = tuple(self.vertex_names[i] for i in keep)
        newbit = {old: k for k, old in enumerate(keep)}
        lf = []
        for f in self.facets:
            if (f & tau) == tau:
                rest = f & ~tau
                lf.append(sum(1 << newbit[i] for i in bits(rest)))
        return SimplicialComplex(names, _maximal(lf))

    def pure_skeleton(self, q: int) -> "SimplicialComplex":
        """Subcomplex generated by the q-dimensional faces (void if none)."""
        if q < 0:
            raise InputError("pure_skeleton needs q >= 0")
        return SimplicialComplex(self.vertex_names, tuple(sorted(self.faces_of_card(q + 1))))

    # -- homology and verdicts ----------------------------------------------

    def boundary_matrix(self, i: int, fld: FieldSpec) -> ExactMatrix:
        """partial_i : C_i -> C_{i-1}, faces ordered by bitmask, C_{-1} = <0>."""
        lower = self.faces_of_card(i)      # (i-1)-dimensional faces
        upper = self.faces_of_card(i + 1)  # i-dimensional faces
        if not lower:
            if fld.is_prime_field:
                return ExactMatrix(fld, 0, len(upper), _gf=np.zeros((0, len(upper)), dtype=np.int64))
            return ExactMatrix(fld, 0, len(upper), _qq=[])
        idx = {f: r for r, f in enumerate(lower)}
        rows = [[0] * len(upper) for _ in lower]
        for c, f in enumerate(upper):
            for j, v in enumerate(bits(f)):
                rows[idx[f ^ (1 << v)]][c] = -1 if j % 2 else 1
        return ExactMatrix.from_rows(fld, rows)

    def reduced_homology(self, fld: FieldSpec) -> dict[int, int]:
        """dim H~_i over the field, for -1 <= i <= dim; {} for the void complex."""
        if self.is_void:
            return {}
        d = self.dim
        ranks = {}
        ncols = {}
        for i in range(0, d + 2):
            m = self.boundary_matrix(i, fld)
            ncols[i] = m.ncols
            ranks[i] = rank(m) if m.nrows and m.ncols else 0
        out = {}
        for i in range(-1, d + 1):
            if i == -1:
                nullity = 1  # C_{-1} is one-dimensional; partial_{-1} = 0
            else:
                nullity = ncols[i] - ranks[i]
            h = nullity - ranks[i + 1]
            if h:
                out[i] = h
        return out

    def is_pure(self) -> bool:
        return len({popcount(f) for f in self.facets}) <= 1

    def is_cohen_macaulay(self, fld: FieldSpec) -> bool:
        """Reisner criterion: pure + vanishing link homology below top degree."""
        if self.is_void:
            return True
        if not self.is_pure():
            return False
        for tau in self.faces():
            if not self._link_vanishing(tau, fld):
                return False
        return True

    def is_buchsbaum(self, fld: FieldSpec) -> bool:
        """Like Cohen-Macaulay but only over non-empty faces."""
        if self.is_void:
            return True
        if not self.is_pure():
            return False
        for tau in self.faces():
            if tau == 0:
                continue
            if not self._link_vanishing(tau, fld):
                return False
        return True

    def _link_vanishing(self, tau: int, fld: FieldSpec) -> bool:
        lk = self.link(tau)
        d = lk.dim
        if d <= 0:
            # d = -1 ({emptyset}): vacuous.  d = 0: only i = -1 is in range
            # and H~_{-1} = 0 for any complex with a vertex.
            return True
        h = lk.reduced_homology(fld)
        return not any(i < d and v for i, v in h.items())

    def is_sequentially_cm(self, fld: FieldSpec) -> bool:
        """Every pure skeleton (q = 0..dim) is Cohen-Macaulay."""
        if self.is_void or self.is_irrelevant:
            return True
        return all(self.pure_skeleton(q).is_cohen_macaulay(fld) for q in range(self.dim + 1))

    # -- text format ---------------------------------------------------------

    def to_text(self) -> str:
        lines = ["vertices: " + " ".join(self.vertex_names)]
        for f in self.facets:
            lines.append(" ".join(self.names_of(f)) if f else "{}")
        return "\n".join(lines) + "\n"


def _minimal(masks) -> list[int]:
    masks = sorted(set(masks), key=popcount)
    keep = []
    for m in masks:
        if not any((o & m) == o for o in keep):
            keep.append(m)
    return keep


@lru_cache(maxsize=4096)
def _faces_cached(facets: tuple[int, ...]) -> tuple[int, ...]:
    seen = set()
    for f in facets:
        _subsets_into(f, seen)
    return tuple(sorted(seen))


def _subsets_into(mask: int, seen: set) -> None:
    if mask in seen:
        return
    sub = mask
    while True:
        seen.add(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask


def from_facets(vertex_names, facet_vertex_lists) -> SimplicialComplex:
    """Build a complex from named facets; keeps only inclusion-maximal ones."""
    names = tuple(vertex_names)
    if len(set(names)) != len(names):
        raise InputError("duplicate vertex names")
    sc = SimplicialComplex(names, ())
    masks = [sc.mask_of(fl) for fl in facet_vertex_lists]
    return SimplicialComplex(names, _maximal(masks))


def parse_complex(text: str) -> SimplicialComplex:
    """Text format: 'vertices: a b c' header, one facet per line, # comments."""
    names = None
    facet_lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("vertices:"):
            if names is not None:
                raise InputError("duplicate vertices: header")
            names = line.split(":", 1)[1].replace(",", " ").split()
            continue
        if names is None:
            raise InputError("facet line before vertices: header")
        if line == "{}":
            facet_lines.append([])
        else:
            facet_lines.append(line.replace(",", " ").split())
    if names is None:
        raise InputError("missing vertices: header")
    return from_facets(names, facet_lines)


def full_simplex(vertex_names) -> SimplicialComplex:
    names = tuple(vertex_names)
    return SimplicialComplex(names, ((1 << len(names)) - 1,))


def void_complex(vertex_names) -> SimplicialComplex:
    return SimplicialComplex(tuple(vertex_names), ())


def irrelevant_complex(vertex_names) -> SimplicialComplex:
    return SimplicialComplex(tuple(vertex_names), (0,))

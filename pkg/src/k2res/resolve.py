"""Minimal graded free resolutions of left modules over a DegreewiseAlgebra.

Syzygies are computed by degreewise kernels: at step i and internal degree
t, new generators are a basis of ker(d_{i-1})_t modulo A_1 . ker_{t-1}.
Exactness lets the kernel dimensions be bookkept (alternating sums of free
module dimensions), so degrees whose kernel is spanned by earlier
generators cost a rank check and provably-empty degrees cost nothing.
For the trivial module the first two steps come straight from the
presentation: step 1 is the generators, step 2 the minimal relations with
their last letter split off.

Very wide kernel extractions (large free-module coordinates) go through a
seeded counter-based random projection whose result is certified exactly:
dimensions must match the bookkept kernel dimension and every extracted
vector is verified against the unprojected map.  Failure raises; nothing
is ever guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundError, InputError
from .linalg import FieldOps, projection_row
from .gradedalg import DegreewiseAlgebra, Element, Word

_KERNEL_DENSE_CELLS = 20_000_000
_PROJ_SLACK = 64


# ---------------------------------------------------------------------------
# module realizations
# ---------------------------------------------------------------------------

class ModuleRealization:
    """A graded left module given degreewise, with generator-action maps.

    act(g, t) is the matrix of left multiplication by generator g from
    M_t to M_{t+1}, rows indexed by the degree-t basis.
    """

    def __init__(self, algebra: DegreewiseAlgebra, dims: dict[int, int],
                 provenance: str, D: int | None = None):
        self.algebra = algebra
        self.ops: FieldOps = algebra.ops
        self.D = algebra.D if D is None else D
        self.dims_by_deg = {t: d for t, d in dims.items() if d}
        self.provenance = provenance
        self._act: dict[tuple[int, int], np.ndarray] = {}
        self.parent: ModuleRealization | None = None
        self.embed: dict[int, np.ndarray] = {}  # basis rows in parent coords

    @property
    def bottom(self) -> int | None:
        return min(self.dims_by_deg) if self.dims_by_deg else None

    @property
    def is_zero(self) -> bool:
        return not self.dims_by_deg

    def dim(self, t: int) -> int:
        if t > self.D:
            raise BoundError(f"module degree {t} beyond realization bound {self.D}")
        return self.dims_by_deg.get(t, 0)

    def action(self, g: int, t: int) -> np.ndarray:
        m = self._act.get((g, t))
        if m is None:
            m = self.ops.zeros(self.dim(t), self.dim(t + 1))
            self._act[(g, t)] = m
        return m

    def set_action(self, g: int, t: int, mat: np.ndarray) -> None:
        self._act[(g, t)] = mat

    def act_word(self, t: int, vec: np.ndarray, word: Word) -> np.ndarray:
        """(word) . vec with the leftmost letter applied last."""
        for g in reversed(word):
            vec = self.ops.norm(vec @ self.action(g, t))
            t += 1
        return vec

    def act_element(self, el: Element, t: int, vec: np.ndarray) -> np.ndarray:
        out = self.ops.zeros(self.dim(t + el.degree))
        A = self.algebra
        for j in range(len(el.vec)):
            if el.vec[j] != 0:
                out = out + el.vec[j] * self.act_word(t, vec, A.basis(el.degree)[j])
        return self.ops.norm(out)

    def check_associativity(self) -> None:
        """(xy).m = x.(y.m) for generators x, y, spot-checked degreewise."""
        A = self.algebra
        for t in sorted(self.dims_by_deg):
            if t + 2 > self.D:
                break
            for g in range(A.n):
                for h in range(A.n):
                    lhs = self.ops.matmul(self.action(h, t), self.action(g, t + 1))
                    xy = A.multiply(A.element_from_terms([(1, (A.pres.gen_names[g],))]),
                                    A.element_from_terms([(1, (A.pres.gen_names[h],))]))
                    rhs = self.ops.zeros(self.dim(t), self.dim(t + 2))
                    for i in range(self.dim(t)):
                        rhs[i] = self.act_element(xy, t, self.ops.unit(self.dim(t), i))
                    if not _same(lhs, rhs):
                        raise InputError("module action is not associative")


def _same(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and bool(np.all(a == b))


def trivial_module(A: DegreewiseAlgebra) -> ModuleRealization:
    """k = A/A_+: one-dimensional in degree 0, zero action."""
    return ModuleRealization(A, {0: 1}, "trivial")


def algebra_module(A: DegreewiseAlgebra) -> ModuleRealization:
    """A as a left module over itself (one canonical instance per algebra,
    so submodules and quotients built from it share a parent)."""
    amb = _AMBIENTS.get(id(A))
    if amb is not None:
        return amb
    M = ModuleRealization(A, {t: A.dims(t) for t in range(A.D + 1)}, "free(A)")
    for t in range(A.D):
        for g in range(A.n):
            M.set_action(g, t, _left_mult_matrix(A, g, t))
    _AMBIENTS[id(A)] = M
    return M


def _left_mult_matrix(A: DegreewiseAlgebra, g: int, t: int) -> np.ndarray:
    if A.pres.commutative:
        return A.right_word_matrix(t, (g,))
    out = A.ops.zeros(A.dims(t), A.dims(t + 1))
    for i, w in enumerate(A.basis(t)):
        out[i] = A.reduce_word((g,) + w)
    return out


def submodule(parent: ModuleRealization, gens: list[tuple[int, np.ndarray]],
              provenance: str) -> ModuleRealization:
    """Left submodule generated by (degree, vector-in-parent-coords) pairs."""
    A = parent.algebra
    ops = parent.ops
    if not gens:
        return ModuleRealization(A, {}, provenance)
    bottom = min(t for t, _ in gens)
    reducers: dict[int, object] = {}
    images: dict[tuple[int, int], np.ndarray] = {}  # (g, t) -> x_g . basis rows
    dims: dict[int, int] = {}
    for t in range(bottom, parent.D + 1):
        red = ops.reducer(parent.dim(t))
        prev = reducers.get(t - 1)
        if prev is not None and prev.rank:
            for g in range(A.n):
                img = ops.matmul(prev.rows_array, parent.action(g, t - 1))
                images[(g, t - 1)] = img
                red.insert_block(img)
        for td, vec in gens:
            if td == t:
                red.insert(ops.norm(np.array(vec)) if ops.p else vec)
        reducers[t] = red
        if red.rank:
            dims[t] = red.rank
    M = ModuleRealization(A, dims, provenance)
    M.parent = parent
    for t, red in reducers.items():
        if red.rank:
            M.embed[t] = red.rows_array.copy()
    # induced action: the image rows lie in the span of the degree-(t+1)
    # basis by construction, so their coefficients read off at the pivots
    for t in sorted(dims):
        if t + 1 > parent.D:
            break
        red_up = reducers.get(t + 1)
        for g in range(A.n):
            img = images.get((g, t))
            if img is None:
                img = ops.matmul(M.embed[t], parent.action(g, t))
            if red_up is None or red_up.rank == 0:
                if any(x != 0 for x in img.flat):
                    raise InputError("submodule not closed under the action")
                M.set_action(g, t, ops.zeros(dims[t], 0))
                continue
            M.set_action(g, t, img[:, red_up._pivcols] if ops.p else
                         _obj_stack([row[red_up._pivcols] for row in img]))
    return M


def _obj_stack(rows):
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        out[i, :] = r
    return out


def _express(reducer, v, ops):
    """Coordinates of v in the reducer's stored RREF rows plus a remainder."""
    return reducer.express(v)


def ideal_module(A: DegreewiseAlgebra, gens: list[Element]) -> ModuleRealization:
    """Left module generated by homogeneous elements of degree >= 2."""
    for g in gens:
        if g.degree < 2:
            raise InputError("ideal generators must have degree >= 2")
    return left_submodule(A, gens, provenance="ideal")


def left_submodule(A: DegreewiseAlgebra, gens: list[Element],
                   provenance: str = "submodule") -> ModuleRealization:
    parent = _ambient(A)
    pairs = []
    for g in gens:
        if g.degree > A.D:
            raise BoundError("generator degree beyond the expansion bound")
        if not g.is_zero:
            pairs.append((g.degree, g.vec))
    return submodule(parent, pairs, provenance)


_AMBIENTS: dict[int, ModuleRealization] = {}


def _ambient(A: DegreewiseAlgebra) -> ModuleRealization:
    return algebra_module(A)


def cyclic_quotient_module(A: DegreewiseAlgebra, gens: list) -> ModuleRealization:
    """A/(left ideal generated by gens) as a left A-module."""
    return quotient_module(algebra_module(A), left_submodule(A, gens))


def quotient_module(M: ModuleRealization, L: ModuleRealization) -> ModuleRealization:
    """M/L for a degreewise submodule L of M."""
    ops = M.ops
    A = M.algebra
    rows_in_M: dict[int, np.ndarray] = {}
    if L.is_zero:
        pass
    elif L.parent is M:
        rows_in_M = L.embed
    elif L.parent is not None and L.parent is M.parent:
        # express L's rows through M's rows inside the common parent
        for t, rws in L.embed.items():
            redM = ops.reducer(M.parent.dim(t))
            for r in M.embed.get(t, []):
                redM.insert(r)
            out = []
            for v in rws:
                coeffs, rem = redM.express(v)
                if any(x != 0 for x in rem):
                    raise InputError("quotient: L is not contained in M")
                w = ops.zeros(M.dim(t))
                for r, c in coeffs.items():
                    w[r] = c
                out.append(w)
            rows_in_M[t] = np.stack(out) if ops.p else _obj_stack(out)
    else:
        raise InputError("quotient: modules do not share a realization parent")

    reducers: dict[int, object] = {}
    keep: dict[int, list[int]] = {}
    dims: dict[int, int] = {}
    top = M.D
    for t in range(min(M.dims_by_deg, default=0), top + 1):
        md = M.dim(t)
        red = ops.reducer(md)
        for v in rows_in_M.get(t, []):
            red.insert(v)
        piv = set(red.pivots)
        kp = [j for j in range(md) if j not in piv]
        reducers[t] = red
        keep[t] = kp
        if kp:
            dims[t] = len(kp)
    Q = ModuleRealization(A, dims, f"quotient({M.provenance},{L.provenance})")
    Q._quotient_data = (M, reducers, keep)
    for t in sorted(dims):
        if t + 1 > top:
            break
        red_up, kp_up = reducers[t + 1], keep[t + 1]
        lrows_kept = red_up.rows_array[:, kp_up] if red_up.rank else None
        for g in range(A.n):
            rows = M.action(g, t)[keep[t], :] if ops.p else \
                _obj_stack([M.action(g, t)[j] for j in keep[t]])
            if lrows_kept is None:
                Q.set_action(g, t, rows[:, kp_up])
                continue
            # remainder mod L restricted to the kept coordinates
            coeffs = rows[:, red_up._pivcols]
            rem_kept = ops.norm(rows[:, kp_up] - ops.matmul(coeffs, lrows_kept))
            Q.set_action(g, t, rem_kept)
    return Q


def component_submodule(M: ModuleRealization, i: int, j: int) -> ModuleRealization:
    """Submodule generated by the degree slices M_i..M_j."""
    if i > j:
        raise InputError("component_submodule needs i <= j")
    gens = []
    for t in range(i, j + 1):
        for k in range(M.dims_by_deg.get(t, 0)):
            gens.append((t, M.ops.unit(M.dim(t), k)))
    sub = submodule(M, gens, f"component({i},{j})")
    return sub


def presented_module(A: DegreewiseAlgebra, gen_degrees: list[int],
                     rows: list[list[Element | None]]) -> ModuleRealization:
    """Cokernel of a matrix over A (rows = relations over the free gens)."""
    free = free_module(A, gen_degrees)
    gens = []
    for row in rows:
        degs = {gen_degrees[c] + e.degree for c, e in enumerate(row) if e is not None and not e.is_zero}
        if not degs:
            continue
        if len(degs) != 1:
            raise InputError("inhomogeneous presentation row")
        t = degs.pop()
        v = free.ops.zeros(free.dim(t))
        off = _free_offsets(A, gen_degrees, t)
        for c, e in enumerate(row):
            if e is not None and not e.is_zero:
                v[off[c]: off[c] + len(e.vec)] = e.vec
        gens.append((t, v))
    rel = submodule(free, gens, "relations")
    return quotient_module(free, rel)


def free_module(A: DegreewiseAlgebra, gen_degrees: list[int]) -> ModuleRealization:
    dims = {}
    for t in range(A.D + 1):
        d = sum(A.dims(t - dg) for dg in gen_degrees if 0 <= t - dg)
        if d:
            dims[t] = d
    M = ModuleRealization(A, dims, "free")
    for t in range(A.D):
        if not dims.get(t):
            continue
        for g in range(A.n):
            act = A.ops.zeros(dims.get(t, 0), dims.get(t + 1, 0))
            r = c = 0
            for dg in gen_degrees:
                has_src = t - dg >= 0
                has_tgt = t + 1 - dg >= 0
                if has_src:
                    b = _left_mult_matrix(A, g, t - dg)
                    act[r:r + b.shape[0], c:c + b.shape[1]] = b
                    r += b.shape[0]
                if has_tgt:
                    c += A.dims(t + 1 - dg)
            M.set_action(g, t, act)
    return M


def _free_offsets(A, gen_degrees, t):
    off = []
    s = 0
    for dg in gen_degrees:
        off.append(s)
        if t - dg >= 0:
            s += A.dims(t - dg)
    return off


# ---------------------------------------------------------------------------
# Betti tables
# ---------------------------------------------------------------------------

@dataclass
class BettiTable:
    entries: dict[tuple[int, int], int]
    N: int
    D: int
    terminated: bool

    def dim(self, i: int, j: int) -> int:
        return self.entries.get((i, j), 0)

    def complete(self, i: int, j: int) -> bool:
        if self.terminated:
            return j <= self.D
        return i <= self.N and j <= self.D

    def records(self) -> list[dict]:
        return [{"i": i, "j": j, "dim": v, "complete": self.complete(i, j)}
                for (i, j), v in sorted(self.entries.items())]

    def text_grid(self) -> str:
        if not self.entries:
            return "(empty Betti table)"
        imax = max(i for i, _ in self.entries)
        jmax = max(j for _, j in self.entries)
        width = max(len(str(v)) for v in self.entries.values())
        width = max(width, len(str(jmax)), 2)
        head = "i\\j " + " ".join(f"{j:>{width}}" for j in range(jmax + 1))
        lines = [head]
        for i in range(imax + 1):
            cells = " ".join(f"{self.dim(i, j) or '.':>{width}}" for j in range(jmax + 1))
            lines.append(f"{i:>3} " + cells)
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# the resolution engine
# ---------------------------------------------------------------------------

@dataclass
class ResolutionStep:
    gen_degrees: list[int]
    # rows of the differential into the previous step (empty for step 0)
    matrix: list[list[Element | None]]


@dataclass
class MinimalResolution:
    module: ModuleRealization
    algebra: DegreewiseAlgebra
    N: int
    D: int
    steps: list[ResolutionStep]
    aug: list[np.ndarray] = field(default_factory=list)
    terminated: bool = False
    pd_observed: int | None = None

    def gen_degrees(self, i: int) -> list[int]:
        return self.steps[i].gen_degrees if i < len(self.steps) else []

    def matrix(self, i: int) -> list[list[Element | None]]:
        return self.steps[i].matrix

    def betti_table(self) -> BettiTable:
        entries: dict[tuple[int, int], int] = {}
        for i, st in enumerate(self.steps):
            for d in st.gen_degrees:
                entries[(i, d)] = entries.get((i, d), 0) + 1
        return BettiTable(entries, self.N, self.D, self.terminated)


def betti_table(res: MinimalResolution) -> BettiTable:
    return res.betti_table()


class _Resolver:
    def __init__(self, M: ModuleRealization, N: int, D: int,
                 presentation_shortcut: bool = True):
        if D > M.algebra.D:
            raise BoundError(f"resolution bound D={D} beyond algebra expansion {M.algebra.D}")
        if D > M.D:
            raise BoundError(f"resolution bound D={D} beyond module realization {M.D}")
        self.M = M
        self.A = M.algebra
        self.ops = M.ops
        self.N = N
        self.D = D
        self.shortcut = presentation_shortcut and M.provenance == "trivial"
        self.gens: list[list[int]] = []
        self.mats: list[list[list[Element | None]]] = []
        self.aug: list[np.ndarray] = []
        self.terminated = False
        self.pd: int | None = None

    # dimension bookkeeping -------------------------------------------------
    def dimQ(self, s: int, t: int) -> int:
        return sum(self.A.dims(t - d) for d in self.gens[s] if t - d >= 0)

    def dimK(self, s: int, t: int) -> int:
        """dim ker(d_s)_t from exactness; s = 0 is the augmentation."""
        val = 0
        sign = 1
        for u in range(s, -1, -1):
            val += sign * self.dimQ(u, t)
            sign = -sign
        val += sign * (self.M.dims_by_deg.get(t, 0) if t <= self.M.D else 0)
        return val

    # free-module coordinates -------------------------------------------------
    def offsets(self, s: int, t: int) -> list[int]:
        off = []
        x = 0
        for d in self.gens[s]:
            off.append(x)
            if t - d >= 0:
                x += self.A.dims(t - d)
        return off

    # step 0 ------------------------------------------------------------------
    def find_module_gens(self) -> None:
        M = self.M
        ops = self.ops
        gens: list[int] = []
        for t in sorted(M.dims_by_deg):
            if t > self.D:
                break
            red = ops.reducer(M.dim(t))
            if M.dims_by_deg.get(t - 1, 0):
                stacked = [M.action(g, t - 1) for g in range(self.A.n)]
                block = np.vstack(stacked) if ops.p else _obj_stack(
                    [row for m in stacked for row in m])
                R, piv = ops.rref(block)
                red.seed_rref(R, piv)
                if red.rank == M.dim(t):
                    continue
            for k in range(M.dim(t)):
                v = ops.unit(M.dim(t), k)
                if red.insert(v):
                    gens.append(t)
                    self.aug.append(v)
        self.gens.append(gens)
        self.mats.append([])
        if M.dims_by_deg and not gens:
            raise BoundError("no module generators found within the bound")

    # presentation shortcuts for the trivial module ---------------------------
    def step1_from_generators(self) -> None:
        A = self.A
        rows = []
        degs = []
        for g in range(A.n):
            el = Element(A, 1, A.reduce_word((g,)))
            rows.append([el])
            degs.append(1)
        self.gens.append(degs)
        self.mats.append(rows)

    def step2_from_relations(self) -> None:
        A = self.A
        n = A.n
        degs = []
        rows = []
        for rel in A.minimal_relations():
            e = len(rel[0][1])
            if e > self.D:
                continue
            entries: list[Element | None] = [None] * n
            for c, w in rel:
                g = w[-1]
                pref = Element(A, e - 1, self.ops.norm(self.ops.coerce(c) * A.reduce_word(w[:-1])))
                if entries[g] is None:
                    entries[g] = pref
                else:
                    entries[g] = Element(A, e - 1, self.ops.norm(entries[g].vec + pref.vec))
            degs.append(e)
            rows.append(entries)
        self.gens.append(degs)
        self.mats.append(rows)

    # degreewise maps ----------------------------------------------------------
    def _entry(self, s: int, r: int, c: int) -> Element | None:
        return self.mats[s][r][c]

    def assemble_dense(self, s: int, t: int) -> np.ndarray:
        """Matrix of d_s at degree t, shape (target_t, source_t)."""
        A, ops = self.A, self.ops
        src_off = self.offsets(s, t)
        src_dim = self.dimQ(s, t)
        if s == 0:
            tgt_dim = self.M.dims_by_deg.get(t, 0)
            F = ops.zeros(tgt_dim, src_dim)
            for r, d_r in enumerate(self.gens[0]):
                p = t - d_r
                if p < 0:
                    continue
                for ui, w in enumerate(A.basis(p)):
                    col = src_off[r] + ui
                    F[:, col] = self.M.act_word(d_r, self.aug[r], w)
            return F
        tgt_off = self.offsets(s - 1, t)
        tgt_dim = self.dimQ(s - 1, t)
        F = ops.zeros(tgt_dim, src_dim)
        for r, d_r in enumerate(self.gens[s]):
            p = t - d_r
            if p < 0:
                continue
            for c, d_c in enumerate(self.gens[s - 1]):
                e = self._entry(s, r, c)
                if e is None or e.is_zero or t - d_c < 0:
                    continue
                B = A.right_element_matrix(p, e)  # (a_p x a_{t-d_c})
                F[tgt_off[c]: tgt_off[c] + B.shape[1], src_off[r]: src_off[r] + B.shape[0]] = B.T
        return F

    def source_columns_sparse(self, s: int, t: int):
        """Yield (col_index, {target_coord: value}) for d_s at degree t (GF)."""
        A = self.A
        p = self.ops.p
        src_off = self.offsets(s, t)
        tgt_off = self.offsets(s - 1, t)
        for r, d_r in enumerate(self.gens[s]):
            pp = t - d_r
            if pp < 0:
                continue
            ents = []
            for c, d_c in enumerate(self.gens[s - 1]):
                e = self._entry(s, r, c)
                if e is None or e.is_zero:
                    continue
                words = [(int(e.vec[j]), A.basis(e.degree)[j])
                         for j in np.nonzero(e.vec)[0]]
                ents.append((c, words))
            for ui in range(A.dims(pp)):
                col: dict[int, int] = {}
                for c, words in ents:
                    for coeff, w in words:
                        prod = A.mul_vecdict_word(pp, {ui: coeff}, w)
                        base = tgt_off[c]
                        for j, v in prod.items():
                            key = base + j
                            col[key] = (col.get(key, 0) + v) % p
                yield src_off[r] + ui, {k: v for k, v in col.items() if v}

    def kernel_of_map(self, s: int, t: int, expected: int) -> list[np.ndarray]:
        """Kernel vectors of d_s at degree t (source coordinates)."""
        src_dim = self.dimQ(s, t)
        tgt_dim = self.M.dims_by_deg.get(t, 0) if s == 0 else self.dimQ(s - 1, t)
        if src_dim == 0:
            return []
        if s == 0 or not self.ops.p or tgt_dim * src_dim <= _KERNEL_DENSE_CELLS:
            F = self.assemble_dense(s, t)
            ker = self.ops.kernel(F)
            if len(ker) != expected:
                raise InputError(f"kernel dimension {len(ker)} at step {s} degree {t} "
                                 f"disagrees with exactness bookkeeping {expected}")
            return ker
        return self._kernel_projected(s, t, expected, src_dim)

    def _kernel_projected(self, s: int, t: int, expected: int, src_dim: int):
        p = self.ops.p
        rank_hint = src_dim - expected
        cols = list(self.source_columns_sparse(s, t))
        for attempt in range(3):
            width = rank_hint + _PROJ_SLACK * (attempt + 1)
            seed = 0x5EED + 1000 * attempt
            cache: dict[int, np.ndarray] = {}
            G = np.zeros((width, src_dim), dtype=np.int64)
            for ci, coldict in cols:
                acc = np.zeros(width, dtype=np.int64)
                for coord, val in coldict.items():
                    row = cache.get(coord)
                    if row is None:
                        row = projection_row(seed, coord, width, p)
                        cache[coord] = row
                    acc = (acc + val * row) % p
                G[:, ci] = acc
            ker = self.ops.kernel(G)
            if len(ker) != expected:
                continue
            # exact verification against the unprojected sparse columns
            bypos = {ci: coldict for ci, coldict in cols}
            ok = True
            for v in ker:
                acc: dict[int, int] = {}
                for ci in np.nonzero(v)[0]:
                    for coord, val in bypos.get(int(ci), {}).items():
                        acc[coord] = (acc.get(coord, 0) + int(v[ci]) * val) % p
                if any(x % p for x in acc.values()):
                    ok = False
                    break
            if ok:
                return ker
        raise BoundError(f"projected kernel extraction failed at step {s} degree {t}")

    # candidate span of already-found generators --------------------------------
    def insert_candidates(self, s: int, t: int, found: list[tuple[int, np.ndarray]],
                          reducer) -> None:
        """Insert A_{t-t0} . gen for every found step-(s+1) generator."""
        A, ops = self.A, self.ops
        src_dim = self.dimQ(s, t)
        off = self.offsets(s, t)
        use_sparse = self.ops.p and src_dim * max((A.dims(t - t0) for t0, _ in found), default=0) > _KERNEL_DENSE_CELLS
        for t0, vec in found:
            q = t - t0
            if q < 0:
                continue
            if q == 0:
                reducer.insert(vec)
                continue
            if use_sparse:
                self._insert_candidates_sparse(s, t, t0, vec, reducer)
            else:
                off0 = self.offsets(s, t0)
                cand = ops.zeros(A.dims(q), src_dim)
                for c, d_c in enumerate(self.gens[s]):
                    w = A.dims(t0 - d_c) if t0 - d_c >= 0 else 0
                    if w == 0:
                        continue
                    sub = vec[off0[c]: off0[c] + w]
                    nz = np.nonzero(sub)[0] if ops.p else [x for x in range(w) if sub[x] != 0]
                    if len(nz) == 0:
                        continue
                    B = ops.zeros(A.dims(q), A.dims(t - d_c))
                    for j in nz:
                        B = B + sub[int(j)] * A.right_word_matrix(q, A.basis(t0 - d_c)[int(j)])
                    cand[:, off[c]: off[c] + B.shape[1]] = ops.norm(cand[:, off[c]: off[c] + B.shape[1]] + B)
                reducer.insert_block(ops.norm(cand))

    def _insert_candidates_sparse(self, s, t, t0, vec, reducer) -> None:
        A = self.A
        p = self.ops.p
        q = t - t0
        off = self.offsets(s, t)
        off0 = self.offsets(s, t0)
        pieces = []
        for c, d_c in enumerate(self.gens[s]):
            w = A.dims(t0 - d_c) if t0 - d_c >= 0 else 0
            if w == 0:
                continue
            sub = vec[off0[c]: off0[c] + w]
            for j in np.nonzero(sub)[0]:
                pieces.append((off[c], int(sub[int(j)]), A.basis(t0 - d_c)[int(j)]))
        for ui in range(A.dims(q)):
            row: dict[int, int] = {}
            for base, coeff, word in pieces:
                prod = A.mul_vecdict_word(q, {ui: coeff}, word)
                for jj, v in prod.items():
                    key = base + jj
                    row[key] = (row.get(key, 0) + v) % p
            dense = np.zeros(self.dimQ(s, t), dtype=np.int64)
            for k, v in row.items():
                dense[k] = v
            reducer.insert(dense)

    # the step driver -----------------------------------------------------------
    def syzygy_step(self, i: int) -> None:
        """Compute step i: minimal generators of ker(d_{i-1})."""
        prev = self.gens[i - 1]
        if not prev:
            self.gens.append([])
            self.mats.append([])
            return
        found: list[tuple[int, np.ndarray]] = []
        t_lo = min(prev) + 1
        any_kernel = False
        for t in range(t_lo, self.D + 1):
            dk = self.dimK(i - 1, t)
            if dk < 0:
                raise InputError("negative bookkept kernel dimension; "
                                 "exactness accounting violated")
            if dk == 0:
                continue
            any_kernel = True
            reducer = self.ops.reducer(self.dimQ(i - 1, t))
            self.insert_candidates(i - 1, t, found, reducer)
            if reducer.rank > dk:
                raise InputError("candidate span exceeds the kernel")
            if reducer.rank == dk:
                continue
            kers = self.kernel_of_map(i - 1, t, dk)
            new = 0
            for v in kers:
                if reducer.insert(v):
                    found.append((t, v))
                    new += 1
            if reducer.rank != dk:
                raise InputError("kernel extraction incomplete")
        self.gens.append([t for t, _ in found])
        self.mats.append([self.split_vector(i - 1, t, v) for t, v in found])
        if not found and not any_kernel:
            self.terminated = True
            self.pd = i - 1

    def split_vector(self, s: int, t: int, v: np.ndarray) -> list[Element | None]:
        """Turn a kernel vector over (Q^s)_t into a matrix row of elements."""
        A = self.A
        off = self.offsets(s, t)
        row: list[Element | None] = []
        for c, d_c in enumerate(self.gens[s]):
            w = A.dims(t - d_c) if t - d_c >= 0 else 0
            if w == 0:
                row.append(None)
                continue
            sub = np.array(v[off[c]: off[c] + w]) if self.ops.p else v[off[c]: off[c] + w].copy()
            el = Element(A, t - d_c, sub)
            if el.is_zero:
                row.append(None)
            else:
                if t - d_c == 0:
                    raise InputError("minimality violated: scalar differential entry")
                row.append(el)
        return row

    def run(self) -> MinimalResolution:
        self.find_module_gens() if self.M.dims_by_deg else self._empty_step0()
        for i in range(1, self.N + 1):
            if self.terminated:
                self.gens.append([])
                self.mats.append([])
                continue
            if self.shortcut and i == 1:
                self.step1_from_generators()
            elif self.shortcut and i == 2:
                self.step2_from_relations()
            else:
                self.syzygy_step(i)
        res = MinimalResolution(self.M, self.A, self.N, self.D,
                                [ResolutionStep(g, m) for g, m in zip(self.gens, self.mats)],
                                aug=self.aug, terminated=self.terminated,
                                pd_observed=self.pd)
        _verify(res)
        return res

    def _empty_step0(self):
        self.gens.append([])
        self.mats.append([])
        self.terminated = True
        self.pd = -1


def _verify(res: MinimalResolution) -> None:
    """Minimality plus d o d = 0 on the computed window."""
    A = res.algebra
    ops = A.ops
    for i in range(1, len(res.steps)):
        st = res.steps[i]
        for r, row in enumerate(st.matrix):
            for c, e in enumerate(row):
                if e is not None and not e.is_zero and e.degree < 1:
                    raise InputError("minimality violated")
    for i in range(2, len(res.steps)):
        rows_i = res.steps[i].matrix
        rows_prev = res.steps[i - 1].matrix
        for r, row in enumerate(rows_i):
            for c2 in range(len(res.steps[i - 2].gen_degrees)):
                deg = None
                acc = None
                for m, e in enumerate(row):
                    f = rows_prev[m][c2] if e is not None else None
                    if e is None or f is None or e.is_zero or f.is_zero:
                        continue
                    prod = A.multiply(e, f)
                    if acc is None:
                        acc = prod.vec.copy()
                        deg = prod.degree
                    else:
                        acc = ops.norm(acc + prod.vec)
                if acc is not None and any(x != 0 for x in acc):
                    raise InputError(f"d_{i-1} o d_{i} != 0 at row {r}")
    # step 1 against the augmentation
    if len(res.steps) > 1 and res.aug:
        M = res.module
        for r, row in enumerate(res.steps[1].matrix):
            acc = None
            for c, e in enumerate(row):
                if e is None or e.is_zero:
                    continue
                target = M.act_element(e, res.steps[0].gen_degrees[c], res.aug[c])
                acc = target if acc is None else ops.norm(acc + target)
            if acc is not None and any(x != 0 for x in acc):
                raise InputError("d_0 o d_1 != 0")


def minimal_resolution(M: ModuleRealization, N: int, D: int,
                       presentation_shortcut: bool = True) -> MinimalResolution:
    """Minimal graded free resolution of M through homological step N and
    internal degree D."""
    return _Resolver(M, N, D, presentation_shortcut).run()


# ---------------------------------------------------------------------------
# degreewise data of a finished resolution (reused by the homological checks)
# ---------------------------------------------------------------------------

def free_dim(res: MinimalResolution, s: int, t: int) -> int:
    if s < 0 or s >= len(res.steps):
        return 0
    return sum(res.algebra.dims(t - d) for d in res.steps[s].gen_degrees if t - d >= 0)


def free_offsets(res: MinimalResolution, s: int, t: int) -> list[int]:
    off = []
    x = 0
    for d in res.steps[s].gen_degrees:
        off.append(x)
        if t - d >= 0:
            x += res.algebra.dims(t - d)
    return off


def step_matrix(res: MinimalResolution, s: int, t: int) -> np.ndarray:
    """Dense matrix of d_s at internal degree t, shape (target_t, source_t).

    s = 0 is the augmentation into the module."""
    A = res.algebra
    ops = A.ops
    src_off = free_offsets(res, s, t)
    src_dim = free_dim(res, s, t)
    if s == 0:
        tgt = res.module.dims_by_deg.get(t, 0)
        F = ops.zeros(tgt, src_dim)
        for r, d_r in enumerate(res.steps[0].gen_degrees):
            p = t - d_r
            if p < 0:
                continue
            for ui, w in enumerate(A.basis(p)):
                F[:, src_off[r] + ui] = res.module.act_word(d_r, res.aug[r], w)
        return F
    tgt_off = free_offsets(res, s - 1, t)
    F = ops.zeros(free_dim(res, s - 1, t), src_dim)
    for r, d_r in enumerate(res.steps[s].gen_degrees):
        p = t - d_r
        if p < 0:
            continue
        for c, d_c in enumerate(res.steps[s - 1].gen_degrees):
            e = res.steps[s].matrix[r][c]
            if e is None or e.is_zero or t - d_c < 0:
                continue
            B = A.right_element_matrix(p, e)
            F[tgt_off[c]: tgt_off[c] + B.shape[1], src_off[r]: src_off[r] + B.shape[0]] = B.T
    return F


class StepSolver:
    """Cached rref factorizations of the degreewise differentials, for
    chain-map lifting (solves d_s x = rhs at a fixed internal degree)."""

    def __init__(self, res: MinimalResolution):
        self.res = res
        self.ops = res.algebra.ops
        self._mats: dict[tuple[int, int], np.ndarray] = {}

    def matrix(self, s: int, t: int) -> np.ndarray:
        key = (s, t)
        m = self._mats.get(key)
        if m is None:
            m = step_matrix(self.res, s, t)
            self._mats[key] = m
        return m

    def solve(self, s: int, t: int, rhs: np.ndarray) -> np.ndarray | None:
        F = self.matrix(s, t)
        if F.shape[1] == 0:
            return self.ops.zeros(0) if not any(x != 0 for x in rhs) else None
        return self.ops.solve(F, rhs)


def ext_of_quotient_algebra(A: DegreewiseAlgebra, N: int, D: int) -> BettiTable:
    """Betti table of the trivial module = dim Ext_A^{i,j}(k, k)."""
    return minimal_resolution(trivial_module(A), N, D).betti_table()

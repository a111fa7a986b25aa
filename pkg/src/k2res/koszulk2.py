"""Homological decision procedures on minimal resolutions.

The two matrix criteria drive everything: a module is detected as K1 when
every linearized differential L(f_i) has independent rows, and as K2 when
every concatenated matrix [(f_{i+1} f_i)_ess  L(f_{i+1})] does, where the
essential product is the composite of tensor-algebra lifts reduced mod
I' = V.I + I.V.  All verdicts are bounded by (N, D) and say so; a verdict
is conclusive exactly when the resolution terminated inside the window.

The Yoneda-product route (chain-map lifting, span of E^1/E^2 products) is
an independent implementation of the same predicates and is used as a
cross-check, together with the trivial-action test and the inverse
Hilbert series sign obstruction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundError, InputError
from .gradedalg import DegreewiseAlgebra, Element, TensorElement
from .resolve import (MinimalResolution, ModuleRealization, StepSolver,
                      component_submodule, free_dim, free_offsets,
                      minimal_resolution, quotient_module, trivial_module)
from .series import TruncatedSeries, series_inverse


@dataclass
class Verdict:
    check: str
    holds: bool
    conclusive: bool
    bounds: tuple[int, int]
    step: int | None = None
    witness: dict | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def outcome(self) -> str:
        if self.holds:
            return f"holds_up_to(N={self.bounds[0]}, D={self.bounds[1]})"
        return f"fails_at(step={self.step})"

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "outcome": "holds_up_to" if self.holds else "fails_at",
            "conclusive": self.conclusive,
            "step": self.step,
            "witness": self.witness,
            "bounds": list(self.bounds),
            "notes": self.notes,
        }

    def __str__(self):
        tag = "conclusive" if self.conclusive else "bounded"
        return f"{self.check}: {self.outcome} [{tag}]"


@dataclass
class LiftedDifferentialPair:
    """Step data consumed by the K2 criterion: lifts of two consecutive
    differentials, the essential product in coset coordinates, and the
    linear part of the higher one."""

    step: int
    lifted_upper: list[list[TensorElement | None]]  # f_{i+1}
    lifted_lower: list[list[TensorElement | None]]  # f_i
    ess_coords: dict[tuple[int, int], np.ndarray]   # (row, lower-col) -> coset vec
    linear_part: dict[tuple[int, int], list]        # (row, upper-col) -> V coords


def _lift_matrix(res: MinimalResolution, i: int) -> list[list[TensorElement | None]]:
    A = res.algebra
    out = []
    for row in res.steps[i].matrix:
        out.append([None if e is None or e.is_zero else A.lift_to_tensor(e) for e in row])
    return out


def _criterion_range(res: MinimalResolution) -> int:
    """Number of criterion indices to examine: min(N, observed pd)."""
    if res.terminated and res.pd_observed is not None:
        return min(res.N, res.pd_observed)
    return res.N


def lifted_pair(res: MinimalResolution, i: int) -> LiftedDifferentialPair:
    """Assemble the step-i criterion data ((f_{i+1} f_i)_ess and L(f_{i+1}))."""
    A = res.algebra
    upper = _lift_matrix(res, i + 1)
    lower = _lift_matrix(res, i) if i >= 1 else []
    degs_up = res.steps[i + 1].gen_degrees
    degs_mid = res.steps[i].gen_degrees
    degs_low = res.steps[i - 1].gen_degrees if i >= 1 else []
    ess: dict[tuple[int, int], np.ndarray] = {}
    for r in range(len(degs_up)):
        for c in range(len(degs_low)):
            terms: dict = {}
            deg = degs_up[r] - degs_low[c]
            for m in range(len(degs_mid)):
                e = upper[r][m]
                f = lower[m][c]
                if e is None or f is None:
                    continue
                prod = e.times(f, A.ops.coerce)
                for cc, w in prod.terms:
                    terms[w] = A.ops.coerce(terms.get(w, 0) + cc)
            t = TensorElement.from_dict(deg, terms)
            if deg >= 1:
                ess[(r, c)] = A.iprime(deg).reduce(t)
            elif not t.is_zero:
                raise InputError("nonzero essential product in degree < 1")
    lin: dict[tuple[int, int], list] = {}
    for r in range(len(degs_up)):
        for m in range(len(degs_mid)):
            e = upper[r][m]
            if e is not None and degs_up[r] - degs_mid[m] == 1:
                lin[(r, m)] = e.linear_coords(A.n)
    return LiftedDifferentialPair(i, upper, lower, ess, lin)


def _flatten_criterion(res: MinimalResolution, pair: LiftedDifferentialPair,
                       include_ess: bool = True):
    """Rows of [(f_{i+1}f_i)_ess  L(f_{i+1})] over the disjoint union of the
    graded coordinate spaces each column touches."""
    A = res.algebra
    i = pair.step
    degs_up = res.steps[i + 1].gen_degrees
    degs_mid = res.steps[i].gen_degrees
    degs_low = res.steps[i - 1].gen_degrees if i >= 1 else []
    segments: list[tuple] = []
    widths: dict[tuple, int] = {}
    if include_ess:
        for c in range(len(degs_low)):
            degs_here = sorted({degs_up[r] - degs_low[c] for r in range(len(degs_up))
                                if degs_up[r] - degs_low[c] >= 1})
            for d in degs_here:
                key = ("ess", c, d)
                segments.append(key)
                widths[key] = A.iprime(d).coset_dim
    for m in range(len(degs_mid)):
        key = ("lin", m)
        segments.append(key)
        widths[key] = A.n
    offsets = {}
    x = 0
    for key in segments:
        offsets[key] = x
        x += widths[key]
    rows = A.ops.zeros(len(degs_up), x) if x else A.ops.zeros(len(degs_up), 0)
    for r in range(len(degs_up)):
        if include_ess:
            for c in range(len(degs_low)):
                d = degs_up[r] - degs_low[c]
                if d >= 1 and (r, c) in pair.ess_coords:
                    key = ("ess", c, d)
                    v = pair.ess_coords[(r, c)]
                    rows[r, offsets[key]: offsets[key] + widths[key]] = v
        for m in range(len(degs_mid)):
            if (r, m) in pair.linear_part:
                key = ("lin", m)
                v = pair.linear_part[(r, m)]
                for k in range(A.n):
                    rows[r, offsets[key] + k] = A.ops.coerce(v[k])
    return rows


def _dependent_rows_witness(ops, rows: np.ndarray):
    """None when rows are independent, else the first left-kernel vector."""
    nr = rows.shape[0]
    if nr == 0:
        return None
    if rows.shape[1] == 0:
        v = ops.zeros(nr)
        v[0] = ops.one
        return v
    transposed = rows.T.copy() if ops.p else rows.T
    ker = ops.kernel(transposed)
    if not ker:
        return None
    return ker[0]


def _gen_labels(res: MinimalResolution, s: int):
    return [{"step": s, "index": k, "degree": d}
            for k, d in enumerate(res.steps[s].gen_degrees)]


def k1_check(res: MinimalResolution) -> Verdict:
    """K1 test: L(f_i) has independent rows for 1 <= i <= min(N, pd)."""
    A = res.algebra
    top = _criterion_range(res)
    for i in range(1, top + 1):
        pair = lifted_pair(res, i - 1)
        rows = _flatten_criterion(res, pair, include_ess=False)
        wit = _dependent_rows_witness(A.ops, rows)
        if wit is not None:
            return Verdict("k1", False, True, (res.N, res.D), step=i,
                           witness={"combination": [str(x) for x in wit],
                                    "rows": _gen_labels(res, i)})
    return Verdict("k1", True, res.terminated, (res.N, res.D))


def k2_check(res: MinimalResolution) -> Verdict:
    """K2 matrix criterion for 0 <= i < min(N, pd)."""
    A = res.algebra
    top = _criterion_range(res)
    for i in range(0, top):
        pair = lifted_pair(res, i)
        rows = _flatten_criterion(res, pair, include_ess=True)
        wit = _dependent_rows_witness(A.ops, rows)
        if wit is not None:
            return Verdict("k2", False, True, (res.N, res.D), step=i,
                           witness={"combination": [str(x) for x in wit],
                                    "rows": _gen_labels(res, i + 1)})
    return Verdict("k2", True, res.terminated, (res.N, res.D))


def algebra_k2_check(A: DegreewiseAlgebra, N: int, D: int) -> Verdict:
    """A is K2 iff the trivial module is a K2 module (bounded)."""
    res = minimal_resolution(trivial_module(A), N, D)
    v = k2_check(res)
    return Verdict("algebra_k2", v.holds, v.conclusive, (N, D), v.step, v.witness, v.notes)


def koszul_check(A: DegreewiseAlgebra, N: int, D: int) -> Verdict:
    """Purity of the Betti table of k over A within the bounds."""
    res = minimal_resolution(trivial_module(A), N, D)
    notes = []
    if not A.pres.is_quadratic():
        notes.append("algebra is not quadratic, hence not Koszul")
    for (i, j), v in sorted(res.betti_table().entries.items()):
        if i != j and v:
            return Verdict("koszul", False, True, (N, D), step=i,
                           witness={"i": i, "j": j, "dim": v}, notes=notes)
    return Verdict("koszul", True, res.terminated, (N, D), notes=notes)


def koszul_module_check(M: ModuleRealization, N: int, D: int,
                        res: MinimalResolution | None = None) -> Verdict:
    """Koszul module = generated in a single degree + K1."""
    if M.is_zero:
        return Verdict("koszul_module", True, True, (N, D),
                       notes=["zero module"])
    if res is None:
        res = minimal_resolution(M, N, D)
    degs = set(res.steps[0].gen_degrees)
    if len(degs) > 1:
        return Verdict("koszul_module", False, True, (N, D), step=0,
                       witness={"generator_degrees": sorted(degs)},
                       notes=["not generated in a single degree"])
    v = k1_check(res)
    return Verdict("koszul_module", v.holds, v.conclusive, (N, D), v.step, v.witness)


def componentwise_linear_check(M: ModuleRealization, N: int, D: int) -> Verdict:
    """Every component submodule A.M_i (b <= i <= D) is a Koszul module."""
    if M.is_zero:
        return Verdict("componentwise_linear", True, True, (N, D))
    b = M.bottom
    for i in range(b, D + 1):
        if not M.dims_by_deg.get(i):
            continue
        comp = component_submodule(M, i, i)
        v = koszul_module_check(comp, N, D)
        if not v.holds:
            return Verdict("componentwise_linear", False, v.conclusive, (N, D),
                           step=v.step, witness={"component": i, "inner": v.witness})
    return Verdict("componentwise_linear", True, False, (N, D))


def strongly_k2_check(M: ModuleRealization, N: int, D: int) -> Verdict:
    """M_(b,j) is a K2 module for every j up to the top generator degree."""
    if M.is_zero:
        return Verdict("strongly_k2", True, True, (N, D))
    b = M.bottom
    probe = minimal_resolution(M, 0, D)
    gen_top = max(probe.steps[0].gen_degrees)
    notes = []
    if gen_top > D:
        notes.append("generators beyond D; verdict bounded")
    for j in range(b, min(gen_top, D) + 1):
        comp = component_submodule(M, b, j)
        v = k2_check(minimal_resolution(comp, N, D))
        if not v.holds:
            return Verdict("strongly_k2", False, v.conclusive, (N, D), step=v.step,
                           witness={"j": j, "inner": v.witness}, notes=notes)
    return Verdict("strongly_k2", True, False, (N, D),
                   notes=notes + [f"components checked through j={min(gen_top, D)}; "
                                  "M_(b,j) = M beyond its top generator degree"])


# ---------------------------------------------------------------------------
# Yoneda products by chain-map lifting
# ---------------------------------------------------------------------------

class _Functional:
    """Homogeneous functional on the step-s generators of a resolution."""

    __slots__ = ("s", "jdeg", "vec")

    def __init__(self, s: int, jdeg: int, vec: np.ndarray):
        self.s = s
        self.jdeg = jdeg
        self.vec = vec


class YonedaCalculator:
    """Products E^p(A) * Ext^s(M, k) via lifting through the resolution of M
    and evaluating against the resolution of k."""

    def __init__(self, res_k: MinimalResolution, res_M: MinimalResolution):
        self.res_k = res_k
        self.res_M = res_M
        self.A = res_k.algebra
        self.ops = self.A.ops
        self.solver_k = StepSolver(res_k)

    def ext_basis(self, res: MinimalResolution, s: int) -> list[_Functional]:
        out = []
        degs = res.steps[s].gen_degrees if s < len(res.steps) else []
        for k, d in enumerate(degs):
            out.append(_Functional(s, d, self.ops.unit(len(degs), k)))
        return out

    def lift(self, xi: _Functional, p: int) -> list[dict[tuple[int, int], Element]]:
        """Chain maps psi_t : Q_M^{s+t} -> Q_k^t for t <= p."""
        A, ops = self.A, self.ops
        res_M, res_k = self.res_M, self.res_k
        s, q = xi.s, xi.jdeg
        psis: list[dict[tuple[int, int], Element]] = []
        psi0: dict[tuple[int, int], Element] = {}
        for e, d_e in enumerate(res_M.steps[s].gen_degrees):
            if d_e == q and xi.vec[e] != 0:
                one = Element(A, 0, ops.unit(1, 0) * xi.vec[e])
                psi0[(e, 0)] = one
        psis.append(psi0)
        for t in range(p):
            psi = psis[t]
            nxt: dict[tuple[int, int], Element] = {}
            degs_src = res_M.steps[s + t + 1].gen_degrees
            degs_mid = res_M.steps[s + t].gen_degrees
            degs_tgt_prev = res_k.steps[t].gen_degrees
            degs_tgt = res_k.steps[t + 1].gen_degrees
            for e, d_e in enumerate(degs_src):
                deg = d_e - q
                if deg < 0:
                    continue
                tgt_dim = free_dim(res_k, t, deg)
                rhs = ops.zeros(tgt_dim)
                off = free_offsets(res_k, t, deg)
                nonzero = False
                for m in range(len(degs_mid)):
                    em = res_M.steps[s + t + 1].matrix[e][m]
                    if em is None or em.is_zero:
                        continue
                    for f, d_f in enumerate(degs_tgt_prev):
                        pf = psi.get((m, f))
                        if pf is None or pf.is_zero:
                            continue
                        prod = A.multiply(em, pf)
                        if prod.is_zero:
                            continue
                        nonzero = True
                        width = len(prod.vec)
                        rhs[off[f]: off[f] + width] = ops.norm(rhs[off[f]: off[f] + width] + prod.vec)
                if not nonzero:
                    continue
                sol = self.solver_k.solve(t + 1, deg, ops.norm(rhs))
                if sol is None:
                    raise InputError("chain lift failed (resolution not exact?)")
                off2 = free_offsets(res_k, t + 1, deg)
                for f, d_f in enumerate(degs_tgt):
                    w = A.dims(deg - d_f) if deg - d_f >= 0 else 0
                    if w == 0:
                        continue
                    piece = sol[off2[f]: off2[f] + w]
                    if any(x != 0 for x in piece):
                        nxt[(e, f)] = Element(A, deg - d_f, piece)
            psis.append(nxt)
        return psis

    def product(self, zeta: _Functional, xi: _Functional) -> _Functional:
        """(zeta in E^p(A)) star (xi in Ext^s(M,k))."""
        p = zeta.s
        psis = self.lift(xi, p)
        psi_p = psis[p]
        degs = self.res_M.steps[xi.s + p].gen_degrees
        vec = self.ops.zeros(len(degs))
        for (e, f), el in psi_p.items():
            if el.degree == 0 and zeta.vec[f] != 0:
                vec[e] = self.ops.coerce(vec[e] + zeta.vec[f] * el.vec[0])
        return _Functional(xi.s + p, xi.jdeg + zeta.jdeg, self.ops.norm(vec))


def yoneda_generation_check(A: DegreewiseAlgebra, M: ModuleRealization,
                            N: int, D: int, generators: int = 2,
                            res_k: MinimalResolution | None = None,
                            res_M: MinimalResolution | None = None) -> Verdict:
    """Is Ext_A(M,k) generated over D_n(A) by Ext^0?  (n = `generators`.)

    Independent of the matrix criteria: spans of iterated Yoneda products
    are compared against the Betti numbers degree by degree.
    """
    if generators not in (1, 2):
        raise InputError("generators must be 1 or 2")
    if res_k is None:
        res_k = minimal_resolution(trivial_module(A), N, D)
    if res_M is None:
        res_M = minimal_resolution(M, N, D)
    calc = YonedaCalculator(res_k, res_M)
    ops = A.ops
    e_basis: dict[int, list[_Functional]] = {}
    for p in range(1, generators + 1):
        e_basis[p] = calc.ext_basis(res_k, p)
    top = min(_criterion_range(res_M), N)
    spans: dict[int, list[_Functional]] = {0: calc.ext_basis(res_M, 0)}
    check_name = f"yoneda_d{generators}"
    for s in range(1, top + 1):
        degs = res_M.steps[s].gen_degrees
        red = ops.reducer(len(degs)) if degs else None
        basis_here: list[_Functional] = []
        for p in range(1, generators + 1):
            if s - p < 0 or s - p not in spans:
                continue
            for zeta in e_basis[p]:
                for g in spans[s - p]:
                    prod = calc.product(zeta, g)
                    if degs and red.insert(prod.vec):
                        basis_here.append(prod)
        spans[s] = basis_here
        got = len(basis_here)
        want = len(degs)
        if got != want:
            missing = _missing_degrees(degs, basis_here, ops)
            return Verdict(check_name, False, True, (N, D), step=s,
                           witness={"cohomological_degree": s,
                                    "spanned": got, "needed": want,
                                    "internal_degrees_missing": missing})
    return Verdict(check_name, True, res_M.terminated, (N, D))


def _missing_degrees(degs, basis_here, ops):
    red_by_deg: dict[int, object] = {}
    idx_by_deg: dict[int, list[int]] = {}
    for k, d in enumerate(degs):
        idx_by_deg.setdefault(d, []).append(k)
    have: dict[int, int] = {}
    for fn in basis_here:
        have[fn.jdeg] = have.get(fn.jdeg, 0) + 1
    return sorted(d for d, idxs in idx_by_deg.items() if have.get(d, 0) < len(idxs))


# ---------------------------------------------------------------------------
# the trivial-action hypothesis (Theorem on K2 factors of Koszul algebras)
# ---------------------------------------------------------------------------

def trivial_action_check(A: DegreewiseAlgebra, ideal_gens: list[Element],
                         N: int, D: int) -> Verdict:
    """Does B = A/J act trivially on Ext_A(B, k)?

    Commutative algebras short-circuit to true.  Otherwise each algebra
    generator's right-multiplication endomorphism of the A-module B is
    lifted through the minimal resolution of B; the check reports false
    with a witness when some induced map on Ext is nonzero, and
    inconclusive when a right action does not descend degreewise.
    """
    from .resolve import _ambient, left_submodule

    if A.pres.commutative:
        return Verdict("trivial_action", True, True, (N, D),
                       notes=["commutative algebra: action is trivial"])
    amb = _ambient(A)
    L = left_submodule(A, ideal_gens, provenance="ideal")
    # right multiplication must stabilize the left ideal, degree by degree
    for t, rows in sorted(L.embed.items()):
        if t + 1 > A.D:
            break
        red = A.ops.reducer(A.dims(t + 1))
        for r in L.embed.get(t + 1, []):
            red.insert(r)
        for g in range(A.n):
            R = A.right_word_matrix(t, (g,))
            for v in rows:
                w = A.ops.norm(v @ R)
                if any(x != 0 for x in red.reduce(w)):
                    return Verdict("trivial_action", True, False, (N, D),
                                   notes=["inconclusive: right action does not "
                                          f"stabilize the ideal at degree {t}"],
                                   witness={"inconclusive": True})
    B = quotient_module(amb, L)
    res = minimal_resolution(B, N, D)
    solver = StepSolver(res)
    ops = A.ops
    for g in range(A.n):
        phis = _lift_right_multiplication(A, res, solver, g)
        for s, phi in enumerate(phis):
            for (e, f), el in phi.items():
                if el.degree == 0 and any(x != 0 for x in el.vec):
                    d_e = res.steps[s].gen_degrees[e]
                    return Verdict(
                        "trivial_action", False, True, (N, D), step=s,
                        witness={"generator": A.pres.gen_names[g],
                                 "ext_step": s,
                                 "from": {"index": e, "degree": d_e},
                                 "to": {"index": f,
                                        "degree": res.steps[s].gen_degrees[f]}})
    return Verdict("trivial_action", True, False, (N, D))


def _lift_right_multiplication(A, res, solver, g):
    """Chain maps Phi_s : Q^s -> Q^s of internal degree +1 lifting (.x_g)."""
    ops = A.ops
    B = res.module
    phis = []
    phi0: dict[tuple[int, int], Element] = {}
    keepers = B._quotient_data  # (ambient, reducers, keep)
    amb, reducers, keep = keepers
    for e, d_e in enumerate(res.steps[0].gen_degrees):
        # aug_e . x_g as an element of B_{d_e+1}
        lift_vec = ops.zeros(amb.dim(d_e))
        for k, j in enumerate(keep[d_e]):
            if res.aug[e][k] != 0:
                lift_vec[j] = res.aug[e][k]
        w = ops.norm(lift_vec @ A.right_word_matrix(d_e, (g,)))
        _, rem = _express_rows(reducers[d_e + 1], w, ops)
        proj = ops.zeros(B.dim(d_e + 1))
        pos = {j: k for k, j in enumerate(keep[d_e + 1])}
        for j in (np.nonzero(rem)[0] if ops.p else
                  [x for x in range(len(rem)) if rem[x] != 0]):
            proj[pos[int(j)]] = rem[int(j)]
        sol = solver.solve(0, d_e + 1, proj)
        if sol is None:
            raise InputError("right multiplication failed to lift")
        _scatter_solution(A, res, 0, d_e + 1, sol, e, phi0)
    phis.append(phi0)
    for s in range(len(res.steps) - 1):
        phi = phis[s]
        nxt: dict[tuple[int, int], Element] = {}
        for e, d_e in enumerate(res.steps[s + 1].gen_degrees):
            deg = d_e + 1
            if deg > res.D:
                continue  # beyond the bounded window
            tgt_dim = free_dim(res, s, deg)
            rhs = ops.zeros(tgt_dim)
            off = free_offsets(res, s, deg)
            nonzero = False
            for m in range(len(res.steps[s].gen_degrees)):
                em = res.steps[s + 1].matrix[e][m]
                if em is None or em.is_zero:
                    continue
                for f, d_f in enumerate(res.steps[s].gen_degrees):
                    pf = phi.get((m, f))
                    if pf is None or pf.is_zero:
                        continue
                    prod = A.multiply(em, pf)
                    if prod.is_zero:
                        continue
                    nonzero = True
                    width = len(prod.vec)
                    rhs[off[f]: off[f] + width] = ops.norm(rhs[off[f]: off[f] + width] + prod.vec)
            if not nonzero:
                continue
            sol = solver.solve(s + 1, deg, ops.norm(rhs))
            if sol is None:
                raise InputError("right multiplication failed to lift")
            _scatter_solution(A, res, s + 1, deg, sol, e, nxt)
        phis.append(nxt)
    return phis


def _scatter_solution(A, res, s, deg, sol, e, out):
    off = free_offsets(res, s, deg)
    for f, d_f in enumerate(res.steps[s].gen_degrees):
        w = A.dims(deg - d_f) if deg - d_f >= 0 else 0
        if w == 0:
            continue
        piece = sol[off[f]: off[f] + w]
        if any(x != 0 for x in piece):
            out[(e, f)] = Element(A, deg - d_f, piece)


def _express_rows(reducer, v, ops):
    from .resolve import _express
    return _express(reducer, v, ops)


# ---------------------------------------------------------------------------
# Hilbert series sign obstruction
# ---------------------------------------------------------------------------

def froberg_obstruction(H: TruncatedSeries) -> int | None:
    """First degree where the inverse series violates the alternating sign
    pattern (-1)^j [t^j](1/H) >= 0 -- a certificate of non-Koszulity.
    Necessary only: algebras passing this can still fail to be Koszul."""
    P = series_inverse(H)
    for j in range(P.bound + 1):
        if ((-1) ** j) * P[j] < 0:
            return j
    return None

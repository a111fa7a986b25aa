"""Built-in corpus of worked examples, shared by the CLI and the test suite.

Each item computes a batch of labelled values and compares them against the
recorded expectations in corpus_data.json.  Expectations are transcribed
from the source material verbatim; a mismatch means the engine disagrees
with the record, and the runner reports it honestly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .linalg import DEFAULT_PRIME, FieldSpec
from .series import TruncatedSeries, series_inverse
from .simplicial import SimplicialComplex
from .stanleyreisner import (MonomialIdeal, complex_from_ideal,
                             hilbert_series_ideal, hilbert_series_quotient,
                             hochster_ext_table, ideal)
from .gradedalg import (expand, face_ring_presentation, monomial_presentation,
                        polynomial_presentation, presentation)
from .resolve import (cyclic_quotient_module, ext_of_quotient_algebra,
                      ideal_module, minimal_resolution, quotient_module,
                      trivial_module)
from .koszulk2 import (algebra_k2_check, componentwise_linear_check,
                       froberg_obstruction, k1_check, k2_check, koszul_check,
                       strongly_k2_check, trivial_action_check)


@dataclass
class Check:
    item: str
    label: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


def _data() -> dict:
    with resources.files("k2res").joinpath("corpus_data.json").open() as fh:
        return json.load(fh)


def _betti_key(entries: dict) -> dict:
    return {f"{i},{j}": v for (i, j), v in sorted(entries.items())}


def consecutive_triples_ideal(n: int) -> MonomialIdeal:
    """x_i x_{i+1} x_{i+2} for i = 1..n-2, on n vertices."""
    names = [f"x{i}" for i in range(1, n + 1)]
    return ideal(names, [[f"x{i}", f"x{i+1}", f"x{i+2}"] for i in range(1, n - 1)])


def wrapped_triples_ideal(n: int) -> MonomialIdeal:
    """The consecutive triples plus the two wrap-around triples through x_1, x_n."""
    names = [f"x{i}" for i in range(1, n + 1)]
    monos = [[f"x{i}", f"x{i+1}", f"x{i+2}"] for i in range(1, n - 1)]
    monos += [["x1", "x2", f"x{n}"], ["x1", f"x{n-1}", f"x{n}"]]
    return ideal(names, monos)


def _poly(vars_: str, D: int, fld: FieldSpec):
    return expand(polynomial_presentation(list(vars_)), D, fld)


def _ideal_mod(S, monos):
    return ideal_module(S, [S.monomial(m) for m in monos])


# ---------------------------------------------------------------------------
# item runners
# ---------------------------------------------------------------------------

def run_ex71(fld: FieldSpec) -> list[Check]:
    d = _data()["ex7.1"]
    S = _poly(d["vars"], 6, fld)
    out = []
    J = _ideal_mod(S, d["sub_ideal"])
    resJ = minimal_resolution(J, 7, 6)
    out.append(Check("ex7.1", "sub ideal Betti", d["sub_betti"],
                     _betti_key(resJ.betti_table().entries)))
    out.append(Check("ex7.1", "sub ideal K1 fails at", d["sub_k1_fails_at"],
                     k1_check(resJ).step))
    out.append(Check("ex7.1", "sub ideal K2 fails at", d["sub_k2_fails_at"],
                     k2_check(resJ).step))
    I = _ideal_mod(S, d["full_ideal"])
    resI = minimal_resolution(I, 7, 6)
    out.append(Check("ex7.1", "full ideal Betti", d["full_betti"],
                     _betti_key(resI.betti_table().entries)))
    v = k2_check(resI)
    out.append(Check("ex7.1", "full ideal K2 holds", d["full_k2_holds"], v.holds))
    out.append(Check("ex7.1", "full ideal K2 conclusive", d["full_k2_conclusive"],
                     v.conclusive))
    out.append(Check("ex7.1", "componentwise linear", d["full_componentwise_linear"],
                     componentwise_linear_check(I, 7, 6).holds))
    dual = complex_from_ideal(ideal(d["vars"], d["full_ideal"])).alexander_dual()
    out.append(Check("ex7.1", "dual sequentially CM", d["dual_sequentially_cm"],
                     dual.is_sequentially_cm(fld)))
    return out


def run_ex72(fld: FieldSpec) -> list[Check]:
    d = _data()["ex7.2"]
    S = _poly(d["vars"], 6, fld)
    out = []
    I = _ideal_mod(S, d["ideal"])
    resI = minimal_resolution(I, 7, 6)
    out.append(Check("ex7.2", "ideal Betti", d["betti"],
                     _betti_key(resI.betti_table().entries)))
    v = k2_check(resI)
    out.append(Check("ex7.2", "ideal K2 holds", d["k2_holds"], v.holds))
    out.append(Check("ex7.2", "ideal K2 conclusive", d["k2_conclusive"], v.conclusive))
    Jsub = _ideal_mod(S, d["sub_ideal"])
    Q = quotient_module(I, Jsub)
    resQ = minimal_resolution(Q, 7, 6)
    out.append(Check("ex7.2", "factor module Betti", d["quotient_betti"],
                     _betti_key(resQ.betti_table().entries)))
    out.append(Check("ex7.2", "factor module K2 holds", d["quotient_k2_holds"],
                     k2_check(resQ).holds))
    out.append(Check("ex7.2", "strongly K2 holds", d["strongly_k2_holds"],
                     strongly_k2_check(I, 7, 6).holds))
    dual = complex_from_ideal(ideal(d["vars"], d["ideal"])).alexander_dual()
    out.append(Check("ex7.2", "dual sequentially CM", d["dual_sequentially_cm"],
                     dual.is_sequentially_cm(fld)))
    return out


def run_ex73(fld: FieldSpec) -> list[Check]:
    d = _data()["ex7.3"]
    out = []
    S = _poly(d["vars"], 7, fld)
    I = _ideal_mod(S, d["ideal"])
    out.append(Check("ex7.3", "ideal K2 holds", d["ideal_k2_holds"],
                     k2_check(minimal_resolution(I, 6, 7)).holds))
    A = expand(monomial_presentation(d["vars"], [tuple(m) for m in d["ideal"]]), 7, fld)
    B = cyclic_quotient_module(A, [A.monomial(d["quotient_gen"])])
    N, D = d["quotient_bounds"]
    resB = minimal_resolution(B, N, D)
    degs = [sorted(resB.steps[i].gen_degrees) for i in range(4)]
    out.append(Check("ex7.3", "factor module step degrees",
                     d["quotient_step_degrees"], degs))
    out.append(Check("ex7.3", "factor module K2 holds", d["quotient_k2_holds"],
                     k2_check(resB).holds))
    return out


def run_prop74(fld: FieldSpec) -> list[Check]:
    d = _data()["prop7.4"]
    out = []
    I = ideal(d["vars"], d["ideal"])
    H = hilbert_series_quotient(I, 5)
    out.append(Check("prop7.4", "Hilbert series of the quotient",
                     d["hilbert_quotient"], list(H.coeffs)))
    out.append(Check("prop7.4", "Hilbert series of the ideal",
                     d["hilbert_ideal"], list(hilbert_series_ideal(I, 5).coeffs)))
    out.append(Check("prop7.4", "inverse series",
                     d["inverse"], list(series_inverse(H).coeffs)))
    N, D = d["bounds"]
    C = expand(face_ring_presentation(I), D, fld)
    tab = ext_of_quotient_algebra(C, N, D)
    got = {key: tab.dim(*map(int, key.split(","))) for key in d["ext_entries"]}
    out.append(Check("prop7.4", "Ext table entries", d["ext_entries"], got))
    inv = series_inverse(C.hilbert_series())
    euler_ok = True
    for j in range(D + 1):
        total = sum(((-1) ** i) * v for (i, jj), v in tab.entries.items() if jj == j)
        if total != inv[j]:
            euler_ok = False
    out.append(Check("prop7.4", "Euler/Hilbert identity", True, euler_ok))
    out.append(Check("prop7.4", "algebra K2 holds", d["algebra_k2_holds"],
                     algebra_k2_check(C, N, D).holds))
    return out


def build_ex516_algebra(fld: FieldSpec, D: int = 8):
    pres = presentation(["x", "y"], [[(1, ("x", "x")), (-1, ("x", "y"))]],
                        commutative=False)
    return expand(pres, D, fld)


def run_ex516(fld: FieldSpec) -> list[Check]:
    d = _data()["ex5.16"]
    out = []
    A = build_ex516_algebra(fld, 8)
    out.append(Check("ex5.16", "algebra dimensions", d["algebra_dims"],
                     [A.dims(t) for t in range(7)]))
    gens = [A.element_from_terms([(1, ("y", "x"))]),
            A.element_from_terms([(1, ("y", "x", "x"))])]
    J = ideal_module(A, gens)
    resJ = minimal_resolution(J, 4, 8)
    out.append(Check("ex5.16", "ideal generator degrees", d["ideal_gen_degrees"],
                     sorted(resJ.steps[0].gen_degrees)))
    out.append(Check("ex5.16", "ideal syzygy degrees", d["ideal_syzygy_degrees"],
                     sorted(resJ.steps[1].gen_degrees)))
    v = k1_check(resJ)
    out.append(Check("ex5.16", "ideal K1 holds", d["ideal_k1_holds"], v.holds))
    out.append(Check("ex5.16", "ideal K1 conclusive", d["ideal_k1_conclusive"],
                     v.conclusive))
    Bpres = presentation(["x", "y"], [[(1, ("x", "x")), (-1, ("x", "y"))],
                                      [(1, ("y", "x"))]], commutative=False)
    B = expand(Bpres, 8, fld)
    out.append(Check("ex5.16", "factor Hilbert series", d["factor_hilbert"],
                     [B.dims(t) for t in range(6)]))
    inv = series_inverse(TruncatedSeries(tuple(d["factor_hilbert"])))
    out.append(Check("ex5.16", "inverse series prefix", d["factor_inverse_prefix"],
                     list(inv.coeffs[:5])))
    out.append(Check("ex5.16", "sign obstruction degree", d["froberg_violation"],
                     froberg_obstruction(TruncatedSeries(tuple(d["factor_hilbert"])))))
    vk = koszul_check(B, 5, 8)
    out.append(Check("ex5.16", "factor Koszul holds", d["factor_koszul_holds"],
                     vk.holds))
    out.append(Check("ex5.16", "Koszul witness internal degree",
                     d["factor_koszul_witness_degree"],
                     vk.witness["j"] if vk.witness else None))
    va = trivial_action_check(A, gens, 3, 8)
    out.append(Check("ex5.16", "trivial action", d["trivial_action"], va.holds))
    wit = va.witness or {}
    out.append(Check("ex5.16", "action witness degrees",
                     [d["action_witness_from_degree"], d["action_witness_to_degree"]],
                     [wit.get("from", {}).get("degree"), wit.get("to", {}).get("degree")]))
    return out


def build_rem75_presentations():
    names = list("abcdefgh") + ["k"]
    rels = [[(1, ("a", "g"))],
            [(1, ("b", "e")), (-1, ("g", "h"))],
            [(1, ("c", "d")), (-1, ("e", "f"))],
            [(1, ("d", "k"))],
            [(1, ("a", "b", "c"))]]
    full = presentation(names, rels, commutative=False)
    quad = presentation(names, [r for r in rels if len(r[0][1]) == 2],
                        commutative=False)
    return full, quad


def run_rem75(fld: FieldSpec) -> list[Check]:
    d = _data()["rem7.5"]
    N, D = d["bounds"]
    full, quad = build_rem75_presentations()
    out = []
    A = expand(full, D, fld)
    out.append(Check("rem7.5", "algebra K2 holds", d["algebra_k2_holds"],
                     algebra_k2_check(A, N, D).holds))
    qA = expand(quad, D, fld)
    out.append(Check("rem7.5", "quadratic part Koszul holds",
                     d["quadratic_part_koszul_holds"], koszul_check(qA, N, D).holds))
    return out


def run_lem81(fld: FieldSpec) -> list[Check]:
    d = _data()["lem8.1"]
    out = []
    I = ideal(d["vars"], d["ideal"])
    delta = complex_from_ideal(I)
    tab = hochster_ext_table(delta, fld)
    out.append(Check("lem8.1", "Ext table via duality", d["ext_table"],
                     _betti_key(tab.entries)))
    S = _poly(d["vars"], 7, fld)
    SI = cyclic_quotient_module(S, [S.monomial(m) for m in d["ideal"]])
    res = minimal_resolution(SI, 4, 7)
    out.append(Check("lem8.1", "resolution route agrees", d["routes_agree"],
                     _betti_key(res.betti_table().entries) == _betti_key(tab.entries)))
    return out


def run_lem82(fld: FieldSpec) -> list[Check]:
    d = _data()["lem8.2"]
    B = expand(monomial_presentation(d["vars"], [tuple(m) for m in d["base_ideal"]]),
               7, fld)
    K = ideal_module(B, [B.monomial(d["module_gen"])])
    res = minimal_resolution(K, 2, 7)
    return [Check("lem8.2", "module Betti data", d["betti"],
                  _betti_key(res.betti_table().entries))]


def run_kdelta6p(fld: FieldSpec) -> list[Check]:
    d = _data()["kdelta6p"]
    N, D = d["bounds"]
    I = wrapped_triples_ideal(d["n"])
    A = expand(face_ring_presentation(I), D, fld)
    tab = ext_of_quotient_algebra(A, N, D)
    got = {key: tab.dim(*map(int, key.split(","))) for key in d["ext_entries"]}
    out = [Check("kdelta6p", "Ext table entries", d["ext_entries"], got)]
    out.append(Check("kdelta6p", "algebra K2 holds", d["algebra_k2_holds"],
                     algebra_k2_check(A, N, D).holds))
    return out


def run_families(fld: FieldSpec) -> list[Check]:
    d = _data()["families"]
    out = []
    plain_cm = {}
    for n in (3, 4, 5, 6):
        dual = complex_from_ideal(consecutive_triples_ideal(n)).alexander_dual()
        plain_cm[str(n)] = dual.is_cohen_macaulay(fld)
    out.append(Check("families", "plain duals CM", d["plain_cm"], plain_cm))
    wrap_cm = {}
    for n in (3, 4, 5):
        dual = complex_from_ideal(wrapped_triples_ideal(n)).alexander_dual()
        wrap_cm[str(n)] = dual.is_cohen_macaulay(fld)
    out.append(Check("families", "wrapped duals CM", d["wrap_cm"], wrap_cm))
    dual6 = complex_from_ideal(wrapped_triples_ideal(6)).alexander_dual()
    out.append(Check("families", "wrapped n=6 Buchsbaum", d["wrap6_buchsbaum"],
                     dual6.is_buchsbaum(fld)))
    out.append(Check("families", "wrapped n=6 CM", d["wrap6_cm"],
                     dual6.is_cohen_macaulay(fld)))
    dual7 = complex_from_ideal(consecutive_triples_ideal(7)).alexander_dual()
    out.append(Check("families", "plain n=7 dual pure", d["plain7_pure"],
                     dual7.is_pure()))
    out.append(Check("families", "plain n=7 dual Buchsbaum", d["plain7_buchsbaum"],
                     dual7.is_buchsbaum(fld)))
    out.append(Check("families", "plain n=7 dual H~_1", d["plain7_h1"],
                     dual7.reduced_homology(fld).get(1, 0)))
    return out


ITEMS = {
    "ex7.1": run_ex71,
    "ex7.2": run_ex72,
    "ex7.3": run_ex73,
    "prop7.4": run_prop74,
    "ex5.16": run_ex516,
    "rem7.5": run_rem75,
    "lem8.1": run_lem81,
    "lem8.2": run_lem82,
    "kdelta6p": run_kdelta6p,
    "families": run_families,
}


def run_corpus(only: str | None = None,
               fld: FieldSpec | None = None) -> list[Check]:
    fld = fld or FieldSpec.gf(DEFAULT_PRIME)
    out: list[Check] = []
    for key, fn in ITEMS.items():
        if only and only not in key:
            continue
        out.extend(fn(fld))
    return out

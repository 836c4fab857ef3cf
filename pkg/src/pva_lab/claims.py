"""The reproducible claims behind ``pva-lab repro``, one function per claim.

Every function returns a :class:`~pva_lab.exprio.ClaimResult` whose status is
``pass``, ``fail`` or ``inconclusive``; the witness string carries the
evidence (or the first discrepancy) as text.
"""

from __future__ import annotations

import json
import time
from typing import Callable, Dict, List, Optional, Tuple

from .deform import (
    base_bracket, build_ansatz, certify_nontrivial, cohomology_dims, evaluate_functionals,
    hamiltonian_flow, miura_generator, representative, scalar_dims,
)
from .deform.catalog import data_text
from .exprio import ClaimResult, parse_diffpoly, print_diffpoly
from .hydro import builtin, mokhov_check, obstruction_tensors
from .lambdacalc import skew_check
from .obstruct import (
    c_monomial_label, bihamiltonian_check, extension_problem, non_extendability, square_bracket,
    square_monomials, witness_coefficient,
)
from .properties import run_properties
from .pvadiff import d_on_2cochain, d_on_field, jacobiator

__all__ = ["CLAIMS", "OPTIONAL", "run_claim", "EXPECTED_VALUES"]

BASES = ("p1", "p2", "plp")
REPS = {"p1": "h23-p1", "p2": "h23-p2", "plp": "h23-plp"}

EXPECTED_VALUES = {
    "p1": ("-3*c1", "-3*c2", "c1*p + c3/2", "c2*q + c4/2"),
    "p2": ("(c1 - 2*c2)*p/3 + c0", "c1", "c2", "c3", "c4"),
    "plp": ("0", "0", "2*c1*p^2*q^3 + 30*c2*p^3*q^2", "-2*c1*p^2*q^3 - 198*c2*p^3*q^2"),
}
EXPECTED_RANK = {"p1": 4, "p2": 5, "plp": 2}

EXPECTED_SQUARES = {
    "p1": {(1, 1), (2, 2), (1, 3), (2, 4)},
    "p2": {tuple(sorted((a, b))) for a in (1, 2) for b in range(5)} | {(3, 4), (0, 3)},
    "plp": {(1, 1), (1, 2), (2, 2)},
}

# component (0-based), lambda, mu, printed value
P2_WITNESSES = (
    ((0, 0, 1), (0, 5), (0, 1), "2*c1*c4"),
    ((0, 0, 1), (0, 4), (0, 2), "8*c2*c4"),
)

DIMENSION_ROWS = {
    1: (2, 0, 2, 0, 2, 0, 2, 0, 2, 0),
    2: (2, 0, 4, 0, 4, 2, 4, 2, 6, 2),
    3: (0, 0, 2, 0, 2, 4, 2, 4, 6, 6),
}
SCALAR_TABLE = {(1, 0): 1, (1, 1): 1, (1, 2): 0, (2, 1): 1, (2, 2): 0, (2, 3): 2, (3, 2): 0}


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _join(parts: List[str]) -> str:
    return "; ".join(parts)


def claim_poisson_normal_forms() -> Tuple[bool, str]:
    parts, ok = [], True
    for b in BASES:
        P = base_bracket(b)
        j, s = jacobiator(P).is_zero(), skew_check(P).is_zero()
        ok &= j and s
        parts.append(f"{b}: jacobi {'0' if j else 'nonzero'}, skew {'0' if s else 'nonzero'}")
    return ok, _join(parts)


def claim_mokhov() -> Tuple[bool, str]:
    H = builtin("plp")
    r = mokhov_check(H)
    sw = mokhov_check(H.swapped_b())
    failing = sw.failing()
    ok = r.ok and "M3" in failing
    return ok, (f"plp failing families: {r.failing() or 'none'}; swapped-b failing families: "
                f"{failing or 'none'} (M3 required)")


def claim_obstruction_tensors() -> Tuple[bool, str]:
    parts, ok = [], True
    for b in BASES:
        rep = obstruction_tensors(builtin(b))
        good = rep.ok and (rep.t_zero or b == "plp")
        ok &= good
        nz = sorted(k for k, v in rep.residuals.items() if v)
        parts.append(f"{b}: T {'0' if rep.t_zero else 'nonzero'}, gating residuals "
                     f"{'0' if rep.ok else 'nonzero'}, informational nonzero {nz or 'none'}")
    return ok, _join(parts)


def claim_ansatz_counts() -> Tuple[bool, str]:
    n3, n5 = build_ansatz(3).count, build_ansatz(5).count
    return (n3, n5) == (172, 1774), f"degree 3: {n3}; degree 5: {n5}"


def claim_cocycles() -> Tuple[bool, str]:
    parts, ok = [], True
    for b in BASES:
        d = d_on_2cochain(base_bracket(b), representative(REPS[b]).bracket)
        n = sum(1 for _ in d.coefficients())
        ok &= n == 0
        parts.append(f"d_{b}({REPS[b]}): {n} nonzero coefficients")
    return ok, _join(parts)


def claim_coboundary_functionals() -> Tuple[bool, str]:
    X = miura_generator(2)
    parts, ok = [], True
    for b in BASES:
        vals = evaluate_functionals(b, d_on_field(base_bracket(b), X))
        bad = [k for k, v in vals.items() if not v.is_zero()]
        ok &= not bad
        parts.append(f"{b}: {len(vals) - len(bad)}/{len(vals)} vanish")
    return ok, _join(parts)


def claim_functional_values() -> Tuple[bool, str]:
    parts, ok = [], True
    for b in BASES:
        cert = certify_nontrivial(b, REPS[b])
        got = list(cert.values.values())
        want = [parse_diffpoly(t) for t in EXPECTED_VALUES[b]]
        mism = [f"{name}={print_diffpoly(g)} (expected {print_diffpoly(w)})"
                for name, g, w in zip(cert.values, got, want) if g != w]
        rank_ok = cert.rank == EXPECTED_RANK[b]
        ok &= not mism and rank_ok
        parts.append(f"{b}: rank {cert.rank}" + (f", mismatches {', '.join(mism)}" if mism else
                                                 ", values match"))
    return ok, _join(parts)


def claim_schouten_squares() -> Tuple[bool, str]:
    parts, ok = [], True
    for b in BASES:
        got = set(square_monomials(square_bracket(REPS[b])))
        good = got == EXPECTED_SQUARES[b]
        ok &= good
        parts.append(f"{b}: {{{', '.join(c_monomial_label(m) for m in sorted(got))}}}"
                     + ("" if good else " (differs from expected)"))
    return ok, _join(parts)


def _golden_witnesses() -> list:
    return json.loads(data_text("witnesses.json"))["witnesses"]


def claim_extension_witnesses() -> Tuple[bool, str]:
    parts, ok = [], True
    prob = extension_problem("p2")
    for t, L, M, value in P2_WITNESSES:
        w = witness_coefficient(prob, t, (L, M))
        src_ok = w.source == parse_diffpoly(value)
        ok &= src_ok and w.base.is_zero()
        parts.append(f"p2 {tuple(x + 1 for x in t)} l^{L} m^{M}: source {print_diffpoly(w.source)}, "
                     f"base {'0' if w.base.is_zero() else f'{len(w.base.unknowns())} unknowns'}")
    prob = extension_problem("p1")
    for g in _golden_witnesses():
        t = tuple(x - 1 for x in g["component"])
        w = witness_coefficient(prob, t, (g["lambda"], g["mu"]))
        good = w.base.is_zero() and w.source == parse_diffpoly(g["source"])
        ok &= good
        parts.append(f"p1 {tuple(g['component'])} l^{tuple(g['lambda'])} m^{tuple(g['mu'])}: "
                     f"source {print_diffpoly(w.source)}, base "
                     f"{'0' if w.base.is_zero() else 'nonzero'}")
    return ok, _join(parts)


def claim_bihamiltonian() -> Tuple[bool, str]:
    rep = bihamiltonian_check()
    return rep.ok, f"{len(rep.checks)} checks, failing: {rep.failing() or 'none'}"


def claim_example_flow() -> Tuple[bool, str]:
    K = representative("p2-defo3").normalized()
    pt, qt = hamiltonian_flow(K, parse_diffpoly("q"))
    ok = pt.is_zero() and qt == parse_diffpoly("-2*p[0,3]")
    P2 = base_bracket("p2")
    for h in ("p", "q"):
        ok &= all(x.is_zero() for x in hamiltonian_flow(P2, parse_diffpoly(h)))
    return ok, f"p_t = {print_diffpoly(pt)}; q_t = {print_diffpoly(qt)}; Casimirs of p2: p, q"


def claim_dimension_table() -> Tuple[bool, str]:
    dims = cohomology_dims(3, 10)
    sc = scalar_dims(3, 10)
    ok = True
    for p, row in DIMENSION_ROWS.items():
        ok &= tuple(dims[(p, d)] for d in range(1, 11)) == row
    for key, v in SCALAR_TABLE.items():
        ok &= sc[key] == v and dims[key] == 2 * v
    rows = "; ".join(f"p={p}: {','.join(str(dims[(p, d)]) for d in range(1, 11))}"
                     for p in DIMENSION_ROWS)
    return ok, rows


def claim_property_suites(n: int = 1000, seed: int = 0) -> Tuple[bool, str]:
    res = run_properties(n, seed)
    ok = all(bad == 0 for _, bad in res.values())
    return ok, ", ".join(f"{k} {n_ - bad}/{n_}" for k, (n_, bad) in res.items())


def claim_plp_prolongation(order: int = 1) -> Tuple[str, str]:
    v = non_extendability(extension_problem("plp"), order)
    if v.status == "obstructed":
        cons = ", ".join(print_diffpoly(c) for c in v.constraints[:3])
        return "pass", f"inconsistent at order {v.order}: {cons}"
    ranks = ", ".join(f"{s.rank}/{s.augmented_rank}" for s in v.screens)
    return "inconclusive", (f"no inconsistency up to order {order} "
                            f"({v.n_equations} equations; ranks A/[A|b] per order: {ranks})")


CLAIMS: Dict[str, Tuple[str, Callable]] = {
    "normal-forms-poisson": ("Jacobi identity and skewsymmetry of the three normal forms",
                             claim_poisson_normal_forms),
    "mokhov-plp": ("hydrodynamic compatibility conditions for the Lie-Poisson normal form",
                   claim_mokhov),
    "obstruction-tensors": ("obstruction tensor and its linear conditions", claim_obstruction_tensors),
    "ansatz-counts": ("free coefficients of the degree-3 and degree-5 skewsymmetric ansatz",
                      claim_ansatz_counts),
    "cocycles": ("degree-3 cocycle representatives", claim_cocycles),
    "coboundary-functionals": ("functionals vanishing on all degree-3 coboundaries",
                               claim_coboundary_functionals),
    "functional-values": ("functional values and rank on the representatives",
                          claim_functional_values),
    "schouten-squares": ("constant monomials of the Schouten square", claim_schouten_squares),
    "extension-witnesses": ("coefficients witnessing non-extendability", claim_extension_witnesses),
    "bihamiltonian-pairs": ("Poisson classes and bi-Hamiltonian pairs", claim_bihamiltonian),
    "example-flow": ("Hamiltonian flow of the example pencil", claim_example_flow),
    "dimension-table": ("generating-function dimension table", claim_dimension_table),
    "property-suites": ("randomized algebraic identities", claim_property_suites),
    "plp-prolongation": ("bounded-prolongation non-extendability for the Lie-Poisson form",
                         claim_plp_prolongation),
}
OPTIONAL = {"plp-prolongation"}


def run_claim(claim_id: str, prolong: Optional[int] = None) -> ClaimResult:
    anchor, fn = CLAIMS[claim_id]
    t0 = time.perf_counter()
    bound = None
    try:
        if claim_id == "plp-prolongation":
            bound = 1 if prolong is None else prolong
            status, witness = fn(bound)
        else:
            ok, witness = fn()
            status = _status(ok)
    except Exception as exc:  # a crashing claim is a failed claim
        status, witness = "fail", f"{type(exc).__name__}: {exc}"
    ms = (time.perf_counter() - t0) * 1000.0
    return ClaimResult(claim_id, anchor, status, witness, ms, bound, claim_id in OPTIONAL)

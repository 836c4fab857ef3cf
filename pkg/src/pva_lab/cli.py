"""``pva-lab`` command line interface.

Exit codes: 0 on success, 1 when a checked claim fails, 2 on usage errors.
``PVA_LAB_THREADS`` sets the number of worker processes used by ``repro``.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from . import claims as _claims
from .deform import (
    REPRESENTATIVE_NAMES, base_bracket, build_ansatz, certify_nontrivial, cohomology_dims,
    hamiltonian_flow, representative, scalar_dims,
)
from .exprio import ParseError, load_bracket, parse_diffpoly, print_diffpoly, print_lambdapoly, report
from .hydro import BUILTINS, builtin, mokhov_check
from .lambdacalc import master_bracket, skew_check
from .obstruct import (
    DEFAULT_REPRESENTATIVE, c_monomial_label, extension_problem, non_extendability,
    square_bracket, square_monomials, witness_coefficient,
)
from .pvadiff import jacobiator

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _bracket(name: str, normalized: bool = False):
    """A built-in, a catalog name, or a path to a bracket file."""
    key = name.lower()
    if key in BUILTINS:
        return base_bracket(key)
    if key in REPRESENTATIVE_NAMES:
        rep = representative(key)
        return rep.normalized() if normalized else rep.bracket
    if os.path.exists(name):
        try:
            return load_bracket(name)
        except ParseError as exc:
            raise UsageError(f"{name}: {exc}")
    raise UsageError(f"unknown bracket {name!r}: use p1, p2, plp, a catalog name "
                     f"({', '.join(REPRESENTATIVE_NAMES)}) or a file path")


def _expr(text: str):
    try:
        return parse_diffpoly(text)
    except ParseError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}")


def _threads() -> int:
    raw = os.environ.get("PVA_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"PVA_LAB_THREADS must be an integer, got {raw!r}")


# -- subcommands -------------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.what == "mokhov":
        if args.bracket.lower() not in BUILTINS:
            raise UsageError("mokhov checks need a hydrodynamic structure: p1, p2 or plp")
        H = builtin(args.bracket)
        if args.swap_b:
            H = H.swapped_b()
        rep = mokhov_check(H, literal_m6=args.literal_m6)
        for fam, res in rep.residuals.items():
            print(f"{fam}: {len(res)} nonzero residuals")
            for key, v in list(sorted(res.items()))[: args.show]:
                print(f"  {key}: {print_diffpoly(v)}")
        return EXIT_OK if rep.ok else EXIT_FAIL
    P = _bracket(args.bracket)
    if args.what == "skew":
        res = skew_check(P)
        for i in range(2):
            for j in range(2):
                print(f"[{i + 1},{j + 1}] = {print_lambdapoly(res.entries[i][j])}")
        return EXIT_OK if res.is_zero() else EXIT_FAIL
    J = jacobiator(P)
    coeffs = list(J.coefficients())
    print(f"jacobiator: {len(coeffs)} nonzero coefficients")
    for t, key, f in coeffs[: args.show]:
        print(f"  {tuple(x + 1 for x in t)} l^{key[:2]} m^{key[2:]}: {print_diffpoly(f)}")
    return EXIT_OK if not coeffs else EXIT_FAIL


def cmd_certify(args) -> int:
    cert = certify_nontrivial(args.base, DEFAULT_REPRESENTATIVE[args.base])
    print(f"representative: {cert.representative}")
    print(f"cocycle: {'yes' if cert.cocycle else f'no ({cert.cocycle_residual_terms} terms)'}")
    zero = sum(cert.coboundary_zero.values())
    print(f"functionals vanishing on coboundaries: {zero}/{len(cert.coboundary_zero)}")
    for name, v in cert.values.items():
        print(f"  {name} = {print_diffpoly(v)}")
    print(f"rank over the constants: {cert.rank} of {cert.n_constants}")
    return EXIT_OK if cert.ok else EXIT_FAIL


def cmd_obstruction(args) -> int:
    rep = representative(DEFAULT_REPRESENTATIVE[args.base])
    mons = square_monomials(square_bracket(rep))
    print(f"[K, K] constant monomials: {', '.join(c_monomial_label(m) for m in mons)}")
    prob = extension_problem(args.base)
    found = False
    targets = [(w[0], w[1], w[2]) for w in _claims.P2_WITNESSES] if args.base == "p2" else []
    if args.base == "p1":
        targets = [(tuple(x - 1 for x in g["component"]), tuple(g["lambda"]), tuple(g["mu"]))
                   for g in _claims._golden_witnesses()]
    for t, L, M in targets:
        w = witness_coefficient(prob, t, (L, M))
        found |= w.is_witness
        base = "0" if w.base.is_zero() else f"{len(w.base.unknowns())} unknowns"
        print(f"component {tuple(x + 1 for x in t)} l^{L} m^{M}: source "
              f"{print_diffpoly(w.source)}; base contribution {base}")
    order = args.prolong
    if order is None and args.base == "plp":
        print("system consistency not checked (pass --prolong K)")
        return EXIT_OK
    v = non_extendability(prob, order or 0)
    print(f"extension system: {v.n_equations} equations, {v.n_unknowns} unknowns, "
          f"prolongation order {v.order}: {v.status}")
    for c in v.constraints:
        print(f"  requires {print_diffpoly(c)} = 0")
    if v.status == "obstructed" and not v.certificate_verified:
        _err("certificate failed independent verification")
        return EXIT_FAIL
    if v.status == "obstructed" or found or args.base == "plp":
        return EXIT_OK
    return EXIT_FAIL


def cmd_dims(args) -> int:
    if args.p < 0 or args.dmax < 1:
        raise UsageError("--p must be >= 0 and --dmax >= 1")
    table = scalar_dims(args.p, args.dmax) if args.scalar else cohomology_dims(args.p, args.dmax)
    print(",".join(str(table[(args.p, d)]) for d in range(1, args.dmax + 1)))
    return EXIT_OK


def cmd_flow(args) -> int:
    P = _bracket(args.bracket, normalized=not args.symbolic)
    h = _expr(args.hamiltonian)
    pt, qt = hamiltonian_flow(P, h)
    print(f"p_t = {print_diffpoly(pt)}; q_t = {print_diffpoly(qt)}")
    return EXIT_OK


def cmd_count(args) -> int:
    print(build_ansatz(args.degree).count)
    return EXIT_OK


def cmd_eval(args) -> int:
    P = _bracket(args.bracket)
    print(print_lambdapoly(master_bracket(P, _expr(args.f), _expr(args.g))))
    return EXIT_OK


def _run_one(job):
    claim_id, prolong = job
    return _claims.run_claim(claim_id, prolong)


def cmd_repro(args) -> int:
    ids = list(_claims.CLAIMS) if args.target == "all" else [args.target]
    if args.target != "all" and args.target not in _claims.CLAIMS:
        raise UsageError(f"unknown claim {args.target!r}; choose all or one of "
                         f"{', '.join(_claims.CLAIMS)}")
    jobs = [(c, args.prolong) for c in ids]
    n = _threads()
    if n > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    print(report(results))
    for r in results:
        _err(f"{r.claim_id}: {r.status}")
    failed = [r for r in results if r.status == "fail" and not r.optional]
    return EXIT_FAIL if failed else EXIT_OK


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pva-lab",
                                 description="Exact computations with two-dimensional PVA brackets.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="residuals of Jacobi, skewsymmetry or Mokhov conditions")
    v.add_argument("what", choices=["jacobi", "skew", "mokhov"])
    v.add_argument("--bracket", required=True, help="p1, p2, plp, a catalog name or a file")
    v.add_argument("--show", type=int, default=5, help="residual terms to print")
    v.add_argument("--swap-b", action="store_true", help="exchange the x and y b-tensors")
    v.add_argument("--literal-m6", action="store_true", help="use the unmirrored sixth family")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("certify", help="nontriviality certificate for a degree-3 cohomology class")
    c.add_argument("kind", choices=["nontrivial"])
    c.add_argument("--base", required=True, choices=["p1", "p2", "plp"])
    c.set_defaults(func=cmd_certify)

    o = sub.add_parser("obstruction", help="witnesses against extending the deformation")
    o.add_argument("--base", required=True, choices=["p1", "p2", "plp"])
    o.add_argument("--prolong", type=int, default=None, help="prolongation bound K")
    o.set_defaults(func=cmd_obstruction)

    d = sub.add_parser("dims", help="generating-function dimensions of H^p_d")
    d.add_argument("--p", type=int, required=True)
    d.add_argument("--dmax", type=int, required=True)
    d.add_argument("--scalar", action="store_true", help="scalar bracket instead of P1")
    d.set_defaults(func=cmd_dims)

    f = sub.add_parser("flow", help="Hamiltonian equations of motion")
    f.add_argument("--bracket", required=True)
    f.add_argument("--hamiltonian", required=True, help="density, e.g. 'q' or 'p^2/2'")
    f.add_argument("--symbolic", action="store_true", help="keep catalog constants symbolic")
    f.set_defaults(func=cmd_flow)

    n = sub.add_parser("count", help="free coefficients of the skewsymmetric ansatz")
    n.add_argument("--degree", type=int, required=True, choices=[3, 5])
    n.set_defaults(func=cmd_count)

    e = sub.add_parser("eval", help="lambda-bracket of two differential polynomials")
    e.add_argument("--bracket", required=True)
    e.add_argument("--f", required=True)
    e.add_argument("--g", required=True)
    e.set_defaults(func=cmd_eval)

    r = sub.add_parser("repro", help="run the acceptance claims and print a JSON report")
    r.add_argument("target", help="'all' or a claim id")
    r.add_argument("--prolong", type=int, default=None,
                   help="prolongation bound for the optional Lie-Poisson claim (default 1)")
    r.set_defaults(func=cmd_repro)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        _err(f"pva-lab: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

from __future__ import annotations

import pytest

from pva_lab.arena import UnknownSym, unknown
from pva_lab.deform import slot_family, base_bracket, build_ansatz, extract_coefficients, representative
from pva_lab.linsys import (
    Consistent, Inconsistent, LinForm, LinearSystem, collect, consistency, prolong,
    rational_rank, screen_consistency, solve_bounded,
)
from pva_lab.pvadiff import EvoField, TriValue, d_on_2cochain, d_on_field

from conftest import E

F = unknown("F", (0,))
G = unknown("G", (0,))


def _sys(*texts):
    return LinearSystem(tuple(LinForm.from_diffpoly(t) for t in texts))


def test_linform_round_trip_and_parts():
    f = F * E("p^2") + G * E("q") + E("3*c1")
    form = LinForm.from_diffpoly(f)
    assert form.to_diffpoly() == f
    assert form.constant == E("3*c1")
    assert not form.is_homogeneous()
    assert len(form.unknowns()) == 2
    with pytest.raises(ValueError):
        LinForm.from_diffpoly(F * E("p[1,0]"))


def test_linform_derivative_uses_chain_rule_in_p_and_q():
    form = LinForm.from_diffpoly(F * E("p^2"))
    dF = unknown("F", (0,), (1, 0))
    assert form.derive(0).to_diffpoly() == dF * E("p^2") + F * E("2*p")


def test_collect_zero_is_empty():
    assert len(collect(TriValue())) == 0


def test_collect_splits_jet_monomials():
    value = F * E("p[1,0]") + G * E("p[1,0]") + F * E("q[0,1]^2") + E("1")
    sys = collect(value)
    assert len(sys) == 3


def test_prolong_examples():
    assert len(prolong(LinearSystem(), 3)) == 0
    sys = _sys(F)
    out = prolong(sys, 1)
    got = {e.to_diffpoly() for e in out}
    assert got == {F, unknown("F", (0,), (1, 0)), unknown("F", (0,), (0, 1))}
    assert set(sys.equations) <= set(prolong(sys, 2).equations)
    with pytest.raises(ValueError):
        prolong(sys, -1)


def test_formal_constant_equation_is_inconsistent():
    sys = _sys(E("2*c1*c4"))
    res = consistency(sys)
    assert isinstance(res, Inconsistent)
    assert res.verify(sys)
    assert res.constraints == [E("c1*c4")]


def test_homogeneous_systems_are_consistent():
    sys = _sys(F * E("p") + G, F * E("q") - G * E("p"))
    res = consistency(sys)
    assert isinstance(res, Consistent) and res.ok
    assert res.freedom == 0


def test_certificate_combination_of_rows():
    sys = _sys(F * E("p") + G, F * E("p^2") + G * E("p") - E("1"))
    res = consistency(sys)
    assert isinstance(res, Inconsistent)
    assert res.verify(sys)
    forged = Inconsistent({0: E("1")}, E("1"), 2, 2)
    assert not forged.verify(sys)


def test_screen_agrees_with_exact_result():
    cases = [
        _sys(F * E("p") + G, F * E("p^2") + G * E("p") - E("1")),
        _sys(F * E("p") + G, F * E("q") - G * E("p") + E("c1")),
        _sys(E("2*c1*c4")),
    ]
    for sys in cases:
        exact = consistency(sys)
        screen = screen_consistency(sys)
        assert screen.consistent_at_point == isinstance(exact, Consistent)
        assert screen.n_equations == len(sys)


def test_rational_rank():
    assert rational_rank([{"a": 1, "b": 2}, {"a": 2, "b": 4}, {"c": 1}]) == 2
    assert rational_rank([]) == 0


def test_solve_bounded_empty_system():
    sol = solve_bounded(_sys(F - F), ((0, 1), (0, 1)))
    assert sol.consistent


def test_solve_bounded_finds_polynomial_solution():
    # F_p = q, F_q = p  ->  F = p q + const
    Fp, Fq = unknown("F", (0,), (1, 0)), unknown("F", (0,), (0, 1))
    sys = _sys(Fp - E("q"), Fq - E("p"))
    sol = solve_bounded(sys, ((0, 2), (0, 2)))
    assert sol.consistent and sol.dimension == 1
    vals = sol.values()
    assert sys.is_satisfied_by(vals)
    assert vals[UnknownSym("F", (0,))] == E("p*q")
    assert sol.basis == [{UnknownSym("F", (0,)): E("1")}]


def test_solve_bounded_reports_inconsistency():
    Fp = unknown("F", (0,), (1, 0))
    sol = solve_bounded(_sys(Fp - E("p^-1")), ((0, 2), (0, 2)))
    assert not sol.consistent


def test_p1_cocycle_system_contains_catalog_family():
    A = build_ansatz(3)
    sys = collect(d_on_2cochain(base_bracket("p1"), A.structure, check=False))
    assert sys.is_homogeneous()
    C = extract_coefficients(representative("h23-p1").bracket, 3)
    values = {UnknownSym(slot_family(s), tuple(s)): C[s] for s in A.slots}
    assert sys.is_satisfied_by(values)


def test_d_squared_system_is_identically_satisfied():
    X = EvoField(unknown("f", (0,)) * E("p[1,0]") + unknown("f", (1,)) * E("q[0,1]"),
                 unknown("g", (0,)) * E("p[0,1]"))
    P = base_bracket("p1")
    sys = collect(d_on_2cochain(P, d_on_field(P, X), check=False))
    assert len(sys) == 0

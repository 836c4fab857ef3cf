from __future__ import annotations

import json
from functools import lru_cache

import pytest

from pva_lab.arena import UnknownSym
from pva_lab.deform import base_bracket, build_ansatz, representative
from pva_lab.deform.catalog import data_text
from pva_lab.linsys import LinForm
from pva_lab.obstruct import (
    c_monomial_label, bihamiltonian_check, epsilon_parts, extension_problem, non_extendability,
    square_bracket, square_monomials, witness_coefficient,
)
from pva_lab.pvadiff import jacobiator, schouten

from conftest import E


def _jet_free(T):
    out = {}
    for t, key, f in T.coefficients():
        free = {k: v for k, v in f.terms.items() if not k[1]}
        if free:
            out[(t, key)] = free
    return out


def test_square_monomials_p1():
    assert square_monomials(square_bracket("h23-p1")) == [(1, 1), (1, 3), (2, 2), (2, 4)]


def test_square_monomials_p2():
    got = set(square_monomials(square_bracket("h23-p2")))
    expect = {(0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 4),
              (3, 4)}
    assert got == expect


def test_square_monomials_plp():
    assert square_monomials(square_bracket("h23-plp")) == [(1, 1), (1, 2), (2, 2)]


def test_square_vanishes_with_zero_constants():
    T = square_bracket("h23-p2").substitute_constants({k: 0 for k in range(5)})
    assert T.is_zero()


def test_monomial_labels():
    assert c_monomial_label((2, 2)) == "c2^2"
    assert c_monomial_label((1, 4)) == "c1*c4"


def test_p2_witness_sources():
    prob = extension_problem("p2")
    w5 = witness_coefficient(prob, (0, 0, 1), ((0, 5), (0, 1)))
    w4 = witness_coefficient(prob, (0, 0, 1), ((0, 4), (0, 2)))
    assert w5.source == E("2*c1*c4")
    assert w4.source == E("8*c2*c4")


def test_p2_witness_base_depends_on_a_free_diagonal_function():
    # the base part involves the q-derivative of the l2^5 coefficient of the (1,1) entry
    w = witness_coefficient(extension_problem("p2"), (0, 0, 1), ((0, 5), (0, 1)))
    top = UnknownSym("K5", ((0, 5), (), (0, 0)), (0, 1))
    assert w.base.coefficient(top) == E("-1")
    assert not w.is_witness


def test_p1_witnesses_match_stored_values():
    prob = extension_problem("p1")
    stored = json.loads(data_text("witnesses.json"))["witnesses"]
    assert len(stored) == 2
    for g in stored:
        t = tuple(x - 1 for x in g["component"])
        w = witness_coefficient(prob, t, (g["lambda"], g["mu"]))
        assert w.base.is_zero() == g["base_zero"] is True
        assert w.source == E(g["source"])
        assert w.is_witness


def test_witness_requires_degree_six():
    with pytest.raises(ValueError):
        witness_coefficient(extension_problem("p1"), (0, 0, 0), ((0, 4), (0, 1)))


def test_capped_pairing_is_jet_free_part_of_full_pairing():
    P0 = base_bracket("p2")
    N = build_ansatz(3).structure
    full = schouten(P0, N, check=False)
    capped = schouten(P0, N, check=False, cap=0)
    assert _jet_free(full) == {(t, k): f.terms for t, k, f in capped.coefficients()}


def test_capped_source_is_jet_free_part_of_full_source():
    K = representative("h23-p2").bracket
    assert _jet_free(jacobiator(K)) == {(t, k): f.terms
                                        for t, k, f in jacobiator(K, cap=0).coefficients()}


def test_base_part_is_linear_in_the_candidate():
    P0 = base_bracket("p1")
    N = build_ansatz(3).structure
    one = schouten(P0, N, check=False, cap=0)
    two = schouten(P0, N.scale(2), check=False, cap=0)
    assert two == one.scale(2)
    for _, _, f in one.coefficients():
        LinForm.from_diffpoly(f)


def test_epsilon_expansion_parts():
    P0 = base_bracket("p1")
    K = representative("h23-p1").bracket
    parts = epsilon_parts(P0, K)
    assert parts[0].is_zero()
    assert parts[3] == schouten(P0, K).scale(2)
    assert parts[3].is_zero()
    assert parts[6] == square_bracket("h23-p1")


@lru_cache(maxsize=None)
def _verdict(base):
    return non_extendability(extension_problem(base), 0)


# constant monomials (c0..c4 exponents) allowed in the certificate constraints
CONSTRAINT_MONOMIALS = {
    "p1": {(0, 2, 0, 0, 0), (0, 1, 0, 1, 0), (0, 0, 2, 0, 0), (0, 0, 1, 0, 1)},
    "p2": {(0, 1, 0, 0, 1), (0, 0, 1, 0, 1)},
}


@pytest.mark.parametrize("base", ["p1", "p2"])
def test_extension_is_obstructed_without_prolongation(base):
    v = _verdict(base)
    assert v.status == "obstructed" and v.order == 0
    assert v.certificate_verified
    assert v.constraints
    for c in v.constraints:
        assert set(c.split_constants()) <= CONSTRAINT_MONOMIALS[base]
        assert all(not k[1] for k in c.terms)


def test_bihamiltonian_pairs():
    rep = bihamiltonian_check()
    assert rep.ok, rep.failing()
    assert len(rep.checks) == 16


def test_plp_system_is_consistent_at_low_order():
    v = non_extendability(extension_problem("plp"), 0)
    assert v.status == "inconclusive"
    assert v.screens[0].consistent_at_point

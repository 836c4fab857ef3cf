from __future__ import annotations

import random

import pytest

from pva_lab.deform import base_bracket, representative
from pva_lab.hydro import HydroStructure, to_lambda
from pva_lab.lambdacalc import skew_build
from pva_lab.properties import random_field, random_matrix
from pva_lab.pvadiff import (
    EvoField, apply_field, d_on_2cochain, d_on_field, jacobiator, schouten,
)

from conftest import E
import oracle


def test_apply_field_examples():
    X = EvoField(E("q"), E("p[1,0]"))
    assert apply_field(X, E("p*q")) == E("q^2 + p*p[1,0]")
    assert apply_field(X, E("p[0,1]")) == E("q[0,1]")
    assert apply_field(EvoField(E("p[1,0]"), E("q[1,0]")), E("p^2*q[0,1]")) == E("p^2*q[0,1]").dx()


@pytest.mark.parametrize("name", ["p1", "p2", "plp"])
def test_normal_forms_satisfy_jacobi(name):
    assert jacobiator(base_bracket(name)).is_zero()


def test_nonpoisson_structure_has_jacobi_residual():
    H = HydroStructure.build([[[E("p"), 0], [0, 0]], [[0, 0], [0, 1]]])
    P = to_lambda(H)
    J = jacobiator(P, check=False)
    assert not J.is_zero()


def test_jacobiator_matches_independent_oracle():
    rng = random.Random(31)
    cases = [skew_build(random_matrix(rng)), representative("h23-p1").bracket,
             representative("h23-p2").bracket]
    for P in cases:
        ours = oracle.trivalue_to_sympy(jacobiator(P))
        theirs = oracle.jacobi(oracle.structure_to_sympy(P))
        assert oracle.same(ours, theirs)


def test_schouten_matches_independent_oracle():
    A = base_bracket("plp")
    B = skew_build(random_matrix(random.Random(31)))
    ours = oracle.trivalue_to_sympy(schouten(A, B))
    theirs = oracle.schouten(oracle.structure_to_sympy(A), oracle.structure_to_sympy(B))
    assert oracle.same(ours, theirs)


def test_schouten_symmetric_and_square_is_twice_jacobi():
    rng = random.Random(32)
    for _ in range(4):
        A, B = skew_build(random_matrix(rng)), skew_build(random_matrix(rng))
        assert schouten(A, B) == schouten(B, A)
        assert schouten(A, A) == jacobiator(A).scale(2)


def test_differential_on_2cochains_is_the_pairing():
    for base, rep in (("p1", "h23-p1"), ("p2", "h23-p2")):
        P, K = base_bracket(base), representative(rep).bracket
        assert d_on_2cochain(P, K) == schouten(P, K)


def test_translations_are_symmetries():
    X = EvoField(E("p[1,0]"), E("q[1,0]"))
    for name in ("p1", "p2", "plp"):
        assert d_on_field(base_bracket(name), X).is_zero()


def test_d_squared_vanishes():
    rng = random.Random(33)
    for name in ("p1", "p2", "plp"):
        P = base_bracket(name)
        for _ in range(10):
            X = random_field(rng, max_degree=2)
            assert d_on_2cochain(P, d_on_field(P, X), check=False).is_zero()


def test_differential_raises_degree_by_one():
    X = EvoField(E("p[1,0]^2"), E("q*p[0,2]"))
    assert d_on_field(base_bracket("p1"), X).degree() == 3


def test_cap_keeps_only_jet_free_coefficients():
    K = representative("h23-p1").bracket
    full = jacobiator(K)
    capped = jacobiator(K, cap=0)
    assert not capped.is_zero()
    for t, key, f in capped.coefficients():
        assert all(not k[1] for k in f.terms)
    kept = {}
    for t, key, f in full.coefficients():
        free = {k: v for k, v in f.terms.items() if not k[1]}
        if free:
            kept[(t, key)] = free
    assert kept == {(t, key): f.terms for t, key, f in capped.coefficients()}

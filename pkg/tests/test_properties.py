from __future__ import annotations

import random

import pytest

from pva_lab import properties
from pva_lab.arena import partial
from pva_lab.lambdacalc import BracketStructure
from pva_lab.properties import PROPERTIES, run_properties


@pytest.mark.parametrize("name", list(PROPERTIES))
def test_identity_holds_on_fresh_seed(name):
    cases, bad = run_properties(200, seed=7, names=[name])[name]
    assert cases == 200 and bad == 0


def test_streams_are_reproducible():
    a = random.Random(5)
    b = random.Random(5)
    for _ in range(20):
        assert properties.random_diffpoly(a, laurent=True) == properties.random_diffpoly(b, laurent=True)


def test_broken_skew_builder_is_caught(monkeypatch):
    monkeypatch.setattr(properties, "skew_build", lambda m: BracketStructure(m))
    assert run_properties(50, names=["skew_build"])["skew_build"][1] > 0


def test_broken_euler_operator_is_caught(monkeypatch):
    monkeypatch.setattr(properties, "variational_derivative", lambda f, i: partial(f, i))
    assert run_properties(50, names=["euler_kernel"])["euler_kernel"][1] > 0


def test_broken_shift_is_caught(monkeypatch):
    monkeypatch.setattr(properties, "shift_act", lambda h, g: h * g)
    assert run_properties(50, names=["leibniz_left"])["leibniz_left"][1] > 0

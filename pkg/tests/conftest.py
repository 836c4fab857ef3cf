from __future__ import annotations

import pathlib

import pytest
from hypothesis import HealthCheck, settings

from pva_lab.exprio import parse_diffpoly, parse_lambdapoly

DATA = pathlib.Path(__file__).parent / "data"

settings.register_profile(
    "pinned", derandomize=True, deadline=None, max_examples=200,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pinned")


def E(text):
    return parse_diffpoly(text)


def L(text):
    return parse_lambdapoly(text)


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[k])

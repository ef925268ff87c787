"""Shared fixtures: root data and the block collections reused across tests.

Everything here is exact rational arithmetic; session scope keeps the heavier
assemblies (simple quotients plus their Dirac blocks) built once.
"""

import pytest

import _acceptance_report
from superdirac import dirac, modules
from superdirac.uea import Algebra
from superdirac.weights import build_root_datum, parse_weight


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_report.lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_report.lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def d21():
    return build_root_datum(2, 1, 1, 1)


@pytest.fixture(scope="session")
def d23():
    return build_root_datum(2, 3, 1, 1)


@pytest.fixture(scope="session")
def alg21(d21):
    return Algebra(d21)


@pytest.fixture(scope="session")
def alg23(d23):
    return Algebra(d23)


@pytest.fixture(scope="session")
def lam_typical(d21):
    # typical (empty atypicality set), certified unitarizable
    return parse_weight("-2,1|1", 2, 1)


@pytest.fixture(scope="session")
def lam_atypical(d21):
    # atypical along delta1 - eps2, certified unitarizable
    return parse_weight("-1,0|0", 2, 1)


@pytest.fixture(scope="session")
def lam_refuted(d21):
    return parse_weight("0,0|-1", 2, 1)


@pytest.fixture(scope="session")
def mod_typical3(d21, lam_typical):
    return modules.simple_truncation(d21, lam_typical, 3)


@pytest.fixture(scope="session")
def coll_typical3(mod_typical3):
    return dirac.assemble_all(mod_typical3, 3)


@pytest.fixture(scope="session")
def rep_typical3(coll_typical3):
    return dirac.dirac_cohomology(coll_typical3)


@pytest.fixture(scope="session")
def mod_atypical2(d21, lam_atypical):
    return modules.simple_truncation(d21, lam_atypical, 2)


@pytest.fixture(scope="session")
def coll_atypical2(mod_atypical2):
    return dirac.assemble_all(mod_atypical2, 2)


@pytest.fixture(scope="session")
def coll_refuted2(d21, lam_refuted):
    mod = modules.simple_truncation(d21, lam_refuted, 2)
    return dirac.assemble_all(mod, 2)


@pytest.fixture(scope="session")
def coll_trivial21(d21):
    mod = modules.simple_truncation(d21, d21.zero(), 0)
    return dirac.assemble_by_degree(mod, 4)


@pytest.fixture(scope="session")
def coll_trivial23(d23):
    mod = modules.simple_truncation(d23, d23.zero(), 0)
    return dirac.assemble_by_degree(mod, 4)

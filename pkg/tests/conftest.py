import sys

import pytest

from k3lab.isometry import MirrorContext
from k3lab.lattice import hyperbolic_plane, k3_lattice


@pytest.fixture(scope="session")
def ctx():
    return MirrorContext.standard()


@pytest.fixture(scope="session")
def K3():
    return k3_lattice()


@pytest.fixture(scope="session")
def U():
    return hyperbolic_plane()


@pytest.fixture
def e(ctx):
    return ctx.gamma.basis_vector


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(n))

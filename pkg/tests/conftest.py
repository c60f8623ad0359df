import random

import pytest

from shortibs.curve import CurveDescriptor, generate_type_a, shipped_descriptor
from shortibs.schemes import extract, setup

# q < 2^16, q = 3 mod 4, r = 29 divides q + 1
TOY_Q, TOY_R = 65423, 29


@pytest.fixture(scope="session")
def toy_desc():
    return CurveDescriptor(type_tag="a", q=TOY_Q, r=TOY_R, h=(TOY_Q + 1) // TOY_R, a=1, b=0, k=2, name="toy")


@pytest.fixture(scope="session")
def desk_desc():
    """Generated type a parameters with a 64-bit q and 32-bit r."""
    return generate_type_a(32, 64, random.Random(2024))


@pytest.fixture(scope="session")
def a_desc():
    return shipped_descriptor("a")


@pytest.fixture(scope="session")
def desk_params(desk_desc):
    msk, params = setup(desk_desc, random.Random(11))
    return msk, params


@pytest.fixture(scope="session")
def a_params(a_desc):
    return setup(a_desc, random.Random(12))


@pytest.fixture(scope="session")
def desk_alice(desk_params):
    msk, params = desk_params
    return extract(msk, params, b"alice@example.org")


# -- acceptance report -------------------------------------------------------

_acceptance_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    passed = call.excinfo is None
    prev = _acceptance_results.get(number, (title, True))
    _acceptance_results[number] = (title, prev[1] and passed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance_results):
        title, passed = _acceptance_results[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {number}: {title}")

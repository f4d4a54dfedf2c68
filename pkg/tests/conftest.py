import sys

import pytest

from tavorder.catalog import load_catalog
from tavorder.knots import default_knot_table_path, load_knot_table


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def knots():
    return load_knot_table(default_knot_table_path())


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)

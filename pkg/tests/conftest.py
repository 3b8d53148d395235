import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from graverlift import formats  # noqa: E402
from graverlift.exact import IntMatrix  # noqa: E402
from graverlift.lift import base_relation_a34  # noqa: E402
from graverlift.nfold import assemble_mfold  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture
def base():
    return base_relation_a34()


@pytest.fixture
def row111():
    return IntMatrix.from_rows([[1, 1, 1]])


@pytest.fixture
def a3x4(row111):
    return assemble_mfold(row111, 4)


@pytest.fixture(params=formats.GOLDEN)
def golden_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hapdc.config import bundled_config_path, load_config  # noqa: E402


@pytest.fixture(scope="session")
def reference_cfg():
    return load_config(bundled_config_path("reference"))


@pytest.fixture(scope="session")
def profile_cfg():
    return load_config(bundled_config_path("flying_profile"))


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)

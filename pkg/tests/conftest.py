import os

import pytest
from hypothesis import HealthCheck, settings

# derandomized so every run exercises the same examples
settings.register_profile(
    "coxcess",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("coxcess")

EXTENDED = os.environ.get("COXCESS_EXTENDED") == "1"

#: criterion number -> (status, summary), filled by test_acceptance
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_collection_modifyitems(config, items):
    if EXTENDED:
        return
    skip = pytest.mark.skip(reason="extended profile; set COXCESS_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {status:4}  {text}")

import os

import pytest
from hypothesis import HealthCheck, settings

from digitprimes.primes import sieve_primes

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def table7():
    """Primes and prime powers below 10**7."""
    return sieve_primes(10**7)


@pytest.fixture(scope="session")
def table_small():
    return sieve_primes(2**14 + 1)


def pytest_collection_modifyitems(items):
    for item in items:
        if "table7" in getattr(item, "fixturenames", ()):
            item.add_marker(pytest.mark.slow)


_ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    num = title = None
    for key, value in report.user_properties:
        if key == "criterion":
            num, title = value
    if num is None:
        return
    detail = next((v for k, v in report.user_properties if k == "detail"), "")
    _ACCEPTANCE[num] = ("PASS" if report.passed else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        status, title, detail = _ACCEPTANCE[num]
        line = f"[{status}] criterion {num:2d}: {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))

import pytest

from symlfun.hecke_forms import hecke_eigenform


@pytest.fixture(scope="session")
def delta_form():
    return hecke_eigenform(12, 2000)


@pytest.fixture(scope="session")
def weight16_form():
    return hecke_eigenform(16, 2000)


ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def record():
    """Log one acceptance line; the test still asserts on its own."""

    def _record(label: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE.append((label, bool(ok), detail))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in sorted(ACCEPTANCE, key=lambda t: int(t[0].split(".")[0])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")

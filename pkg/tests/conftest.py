import pytest

from chevcarpet.scalars import GF, RationalField

_ACCEPTANCE: list[str] = []


@pytest.fixture
def F1():
    return RationalField(2, 1)


@pytest.fixture
def F2():
    return RationalField(2, 2)


@pytest.fixture
def GF4():
    return GF(4)


@pytest.fixture
def record_criterion():
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def record(number: int, ok: bool, detail: str, seconds: float):
        _ACCEPTANCE.append(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  ({seconds:.1f} s)  {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)

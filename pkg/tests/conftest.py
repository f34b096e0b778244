import pytest

ACCEPTANCE: dict = {}


@pytest.fixture
def criterion(request):
    """Record ``(passed, detail)`` for an acceptance criterion by number."""

    def record(number, title, passed, detail=""):
        ACCEPTANCE[number] = (title, bool(passed), detail)
        print(f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}  {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"{number:>2}  {'PASS' if passed else 'FAIL'}  {title}  {detail}")
    done = sum(p for _, p, _ in ACCEPTANCE.values())
    terminalreporter.write_line(f"{done}/{len(ACCEPTANCE)} criteria passed")

import pytest

# criterion number -> (passed, detail); filled by test_acceptance.py
CRITERIA = {}


@pytest.fixture
def record():
    def _record(number, checks):
        """checks: list of (ok, text).  Stores the summary and fails the test if any check failed."""
        ok = all(c for c, _ in checks)
        detail = "; ".join(f"{'ok' if c else 'FAILED'} {t}" for c, t in checks)
        CRITERIA[number] = (ok, detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
        failed = [t for c, t in checks if not c]
        assert not failed, "; ".join(failed)

    return _record


@pytest.fixture(scope="session")
def p1_search():
    """The p = 1, N = 12 search, shared by the search and upper-bound criteria."""
    import time

    from pwconst.extremal import minimize_norm

    start = time.perf_counter()
    res = minimize_norm(1.0, 12, seed=0)
    return res, time.perf_counter() - start


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
    passed = sum(ok for ok, _ in CRITERIA.values())
    terminalreporter.write_line(f"{passed}/{len(CRITERIA)} criteria pass")

import pytest
from hypothesis import settings

from qes_sextic.boundary import boundary_differences, critical_table
from qes_sextic.richardson import differences_sequence, richardson_step

# reproducible property tests
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")

# criterion number -> list of (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def record(criterion: int, passed: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, []).append((bool(passed), detail))
    print(f"criterion {criterion}: {'PASS' if passed else 'FAIL'} {detail}")


@pytest.fixture(scope="session")
def boundary_table():
    """a_crit(J)^2 for J = 2..20, 16-digit brackets (Sturm route)."""
    return critical_table(range(2, 21), 16)


@pytest.fixture(scope="session")
def differences(boundary_table):
    return differences_sequence(boundary_differences(boundary_table))


@pytest.fixture(scope="session")
def first_extrapolants(differences):
    return richardson_step(differences)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        results = ACCEPTANCE[n]
        failed = [d for ok, d in results if not ok]
        status = "PASS" if not failed else "FAIL"
        if failed:
            detail = f"{len(failed)} of {len(results)} checks failed: " + "; ".join(failed)
        else:
            detail = f"{len(results)} checks"
        terminalreporter.write_line(f"criterion {n}: {status} ({detail})")

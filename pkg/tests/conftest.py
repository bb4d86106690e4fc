import pytest

from boalch.families import FIXTURES, table1, family_bracket_table
from boalch.quiver import boalch_algebra, interval_quiver, triangle_quiver
from boalch.repscheme import default_reps


@pytest.fixture(scope="session")
def triangle():
    return triangle_quiver()


@pytest.fixture(scope="session")
def interval():
    return interval_quiver()


@pytest.fixture(scope="session")
def triangle_fx():
    return FIXTURES["triangle"]()


@pytest.fixture(scope="session")
def interval_fx():
    return FIXTURES["interval"]()


@pytest.fixture(scope="session")
def triangle_algebra(triangle):
    return boalch_algebra(triangle)


@pytest.fixture(scope="session")
def interval_algebra(interval):
    return boalch_algebra(interval)


@pytest.fixture(scope="session")
def triangle_reps(triangle):
    return default_reps(triangle)


@pytest.fixture(scope="session")
def interval_reps(interval):
    return default_reps(interval)


@pytest.fixture(scope="session")
def table1_table():
    return family_bracket_table(3, table1())


# -- acceptance criteria log -------------------------------------------------------

ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def record(request):
    """Store a PASS/FAIL line for an acceptance criterion and print it."""
    results = request.config.stash.setdefault(ACCEPTANCE, {})

    def _record(name, ok, detail=""):
        line = f"{name}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
        results[name] = line
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(ACCEPTANCE, {})
    if results:
        terminalreporter.section("acceptance criteria")
        for name in sorted(results, key=lambda k: int(k[2:])):
            terminalreporter.write_line(results[name])

import pytest

from kpal2d.grid import Grid

SATOR = ["SATOR", "AREPO", "TENET", "OPXRA", "ROTAS"]
NEVER_SEVEN = ["never", "seven"]

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def sator():
    return Grid.from_rows(SATOR)


@pytest.fixture
def never_seven():
    return Grid.from_rows(NEVER_SEVEN)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if not item.module.__name__.endswith("test_acceptance"):
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        label = (item.function.__doc__ or item.name).strip().splitlines()[0]
        status = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
        detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
        line = f"{status}  {label}" + (f"  [{detail}]" if detail else "")
        item.config.stash.setdefault(_ACCEPTANCE, []).append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

import pytest

from btstab.quadext import classify_extensions, make_extension, parse_extension
from btstab.ring import parse_base


@pytest.fixture(scope="session")
def q2():
    return parse_base("q2", 8)


@pytest.fixture(scope="session")
def q2sqrt2():
    return parse_base("q2sqrt2", 12)


@pytest.fixture(scope="session")
def q2_exts(q2):
    return [make_extension(q2, d) for d in classify_extensions(q2)]


@pytest.fixture(scope="session")
def ext_by_spec(q2):
    def build(spec, base=None, precision=None):
        F = base or q2
        return make_extension(F, parse_extension(F, spec), precision)
    return build


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])

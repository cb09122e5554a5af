import pytest

from profsurf.fingroup import GroupAction, cyclic, small_groups

_ACCEPTANCE_LINES = []


def record(criterion, ok, detail=""):
    line = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    _ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)


def wreath_instances(max_a=3, max_g=8):
    """Every ``(A, G, G0, action)`` with ``|A| <= max_a``, ``|G| <= max_g``,
    ``G0`` a subgroup of ``G`` and the action one of ``G0`` on ``A``."""
    for a in range(1, max_a + 1):
        A = cyclic(a)
        for G in small_groups(max_g):
            for G0 in G.subgroups():
                H = G0.as_group()
                for act in GroupAction.all_actions(H, A):
                    yield A, G, G0, act

import pytest

_VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    Use as ``with verdict("3 characteristic language"): ...``; the line is
    printed immediately and repeated in the terminal summary.
    """
    lines = request.config.stash.setdefault(_VERDICTS, [])

    class Recorder:
        def __init__(self, label):
            self.label = label

        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            line = f"{'PASS' if exc_type is None else 'FAIL'}  criterion {self.label}"
            lines.append(line)
            print(line)
            return False

    return Recorder


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)

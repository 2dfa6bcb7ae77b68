import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def acceptance_line(request):
    """Collects one summary line per acceptance criterion for the terminal summary."""
    lines = request.config.__dict__.setdefault("acceptance_lines", {})

    def add(number, line):
        lines[number] = line
    return add


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "acceptance_lines", {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])

import pytest

from abelgraph.corpus import CorpusSpec, generate


@pytest.fixture(scope="session")
def corpus():
    """The property corpus: seed 42, genus 2..5, at most 6 vertices."""
    return list(generate(CorpusSpec(seed=42, genus_min=2, genus_max=5, vertex_max=6, count=200)))


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if config.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in config.acceptance_lines:
            terminalreporter.write_line(line)

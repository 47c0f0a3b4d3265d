import sys

import pytest

from courtcast.ingest import load_dataset
from courtcast.synth import SynthConfig, generate, write_fixture


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance verdict lines after the summary when that module ran."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def manifest_path(tmp_path_factory):
    """A generated two-period game written to disk, exercising the full
    serialize/parse round trip."""
    out = tmp_path_factory.mktemp("fixture")
    return write_fixture(out, SynthConfig())


@pytest.fixture(scope="session")
def dataset(manifest_path):
    return load_dataset(manifest_path)


@pytest.fixture(scope="session")
def grounded_dataset():
    """Single 30 s period where the ball is always held by an onside player,
    so a handler (and every handler-dependent layer) exists at every frame."""
    return generate(SynthConfig(periods=1, period_s=30.0, grounded=True))

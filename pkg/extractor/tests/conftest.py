import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from abxextract import load_encoder


@pytest.fixture(scope="session")
def tiny_encoder():
    """One randomly initialized small encoder for the whole session."""
    return load_encoder("untrained:tiny")


ACCEPTANCE_LABELS = {
    "test_extractor_contract": "emitted files validate downstream; dim 1024; "
                               "frame-count linearity; byte-identical re-extraction",
    "test_sidecar_join": "sidecar CSV metadata round-trips through the manifest loader",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_extract_acceptance.py" not in report.nodeid:
                continue
            name = report.nodeid.split("::")[-1]
            label = ACCEPTANCE_LABELS.get(name, name)
            status = "PASS" if outcome == "passed" else "FAIL"
            lines.append((name, f"ACCEPTANCE {status}: {label}"))
    if lines:
        terminalreporter.section("extractor acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)

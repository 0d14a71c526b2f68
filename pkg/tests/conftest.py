import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "suite", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")

# human-readable names for the end-to-end acceptance checks, keyed by test name
ACCEPTANCE_LABELS = {
    "test_oracle_equivalence": "fast path matches triple-loop oracle exactly (500 cases)",
    "test_chance_level": "i.i.d. populations score 0.5 +/- 0.05 (symmetrized and diagonal)",
    "test_separation": "orthogonal clusters score >= 0.99",
    "test_reverb_sweep_dip": "synthetic-audio wet sweep dips at the matching wet mix",
    "test_scale_invariance": "positive rescaling changes no result field",
    "test_tie_convention": "all-identical vectors score exactly 0.5",
    "test_pooling_properties": "pooling permutation/monotonicity (1000 cases) and 20 s frame count",
    "test_format_fuzzing": "10,000 random byte strings parse safely; 100 exact round-trips",
    "test_performance_budget": "1500x1500 full enumeration within time budget, thread-invariant",
    "test_reverb_properties": "reverb identity, monotone tail energy, bounded output",
    "test_end_to_end_determinism": "scoring twice gives byte-identical JSON/CSV/SVG",
}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance checks")
    config.addinivalue_line(
        "markers", "reference: optional targets needing external corpora"
    )


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" not in report.nodeid:
                continue
            name = report.nodeid.split("::")[-1]
            label = ACCEPTANCE_LABELS.get(name, name)
            status = "PASS" if outcome == "passed" else "FAIL"
            lines.append((name, f"ACCEPTANCE {status}: {label}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)

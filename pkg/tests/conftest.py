import os
import re
from pathlib import Path

import pytest

AIR05_ENV = "MILPSPACE_AIR05"

_CRITERION_RE = re.compile(r"test_criterion_(\d+)_(\w+?)(?:\[|$)")


def air05_path() -> Path | None:
    """Resolve the user-supplied air05.mps (see README); None if absent."""
    candidates = []
    env = os.environ.get(AIR05_ENV)
    if env:
        candidates.append(Path(env))
    here = Path(__file__).parent
    candidates.append(here / "data" / "air05.mps")
    candidates.append(here.parent / "data" / "air05.mps")
    for path in candidates:
        if path.is_file():
            return path
    return None


@pytest.fixture(scope="session")
def air05_file():
    path = air05_path()
    if path is None:
        pytest.skip(
            f"air05.mps not available: set ${AIR05_ENV} or place the file at "
            "tests/data/air05.mps (fetch it from MIPLIB, see README)"
        )
    return path


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes: dict[int, tuple[set, str]] = {}
    for outcome in ("passed", "failed", "skipped", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            match = _CRITERION_RE.search(getattr(report, "nodeid", ""))
            if not match:
                continue
            num = int(match.group(1))
            seen, name = outcomes.get(num, (set(), match.group(2)))
            seen.add(outcome)
            outcomes[num] = (seen, name)
    if not outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(outcomes):
        seen, name = outcomes[num]
        if "failed" in seen or "error" in seen:
            label = "FAIL"
        elif "skipped" in seen:
            label = "SKIP"
        else:
            label = "PASS"
        terminalreporter.write_line(f"criterion {num:2d} [{label}] {name}")

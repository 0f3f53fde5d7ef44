"""The release gate: every numbered criterion runs here, one line per result.

Each test executes one criterion (frozen values, oracle cross-checks,
exhaustive small-index sweeps) and enforces its wall-clock budget; the
printed line carries the measured time and the verifying detail.
"""

import pytest

from volcount.acceptance import CRITERIA, format_line, run_criterion

_IDS = [f"{number}-{name}" for number, name, _, _ in CRITERIA]


@pytest.mark.parametrize("number", [entry[0] for entry in CRITERIA], ids=_IDS)
def test_criterion(number):
    result = run_criterion(number)
    print(format_line(result))
    assert result.passed, format_line(result)
    assert result.seconds < result.budget_seconds

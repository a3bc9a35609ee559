"""Acceptance criteria 1-10 at their stated tolerances.

Each test prints one ``[PASS]``/``[FAIL]`` line, also visible without ``-s``.
Criteria 7 and 8 share a single full 9-cell sweep (a few minutes on one core);
deselect them with ``-m "not slow"``.
"""

import pytest

from torusdipole import checks

SLOW = {7, 8}
CRITERIA = [pytest.param(k, marks=pytest.mark.slow) if k in SLOW else k for k in sorted(checks.CHECKS)]


@pytest.mark.parametrize("number", CRITERIA)
def test_criterion(number, capsys):
    result = checks.run(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()

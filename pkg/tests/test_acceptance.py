"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line."""

import pytest

from rdptwist.suites import CRITERIA, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.ok, result.error or [c.to_json() for c in result.checks if not c.ok]

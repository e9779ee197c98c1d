"""Acceptance gate: every criterion at its stated tolerance, one line each.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion table;
the same suites back `aniso-spectra verify <suite>`.
"""

import pytest

from aniso_spectra.acceptance import SUITES


@pytest.mark.slow
@pytest.mark.parametrize("suite", list(SUITES))
def test_acceptance_suite(suite, capsys):
    rows = SUITES[suite](fast=False)
    assert rows, f"suite {suite} produced no criteria"
    lines = []
    failed = []
    for row in rows:
        status = "PASS" if row.passed else "FAIL"
        line = f"[{status}] {suite}: {row.name}" + (
            f" :: {row.detail}" if row.detail else ""
        )
        lines.append(line)
        if not row.passed:
            failed.append(line)
    with capsys.disabled():
        print()
        for line in lines:
            print(line)
    assert not failed, "\n".join(failed)

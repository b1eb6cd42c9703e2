"""The ten acceptance criteria, one test each.

Every criterion prints a PASS/FAIL line; the lines are repeated in the
terminal summary so they show up without ``-s``.  Runtime bounds are part
of each check.  Criterion 10 replays every certificate collected by
the earlier ones, so the ledger is shared across the module."""

import pytest

from recipcomp import acceptance
from recipcomp.acceptance import Ledger

LINES = []


@pytest.fixture(scope="module")
def ledger():
    return Ledger()


def _run(fn, ledger):
    chk = fn(ledger)
    line = chk.line()
    LINES.append(line)
    print(line)
    return chk


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number, ledger):
    chk = _run(getattr(acceptance, f"criterion_{number}"), ledger)
    assert chk.ok, chk.line()


def test_criterion_10_soundness(ledger):
    assert len(ledger.entries) > 0, "criteria 1-9 must run first"
    chk = _run(acceptance.criterion_10, ledger)
    assert chk.ok, chk.line()


"""Every reproduction criterion at its stated tolerance; one summary line each (run with -s)."""

import pytest

from incdec import reproduce


@pytest.mark.parametrize("name", list(reproduce.CRITERIA))
def test_criterion(name):
    crit = reproduce.run_criterion(name)
    print()
    print(crit.summary())
    for line in crit.lines:
        print("    " + line)
    assert crit.passed, "\n".join(crit.lines)

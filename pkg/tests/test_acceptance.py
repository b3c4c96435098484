"""One test per acceptance criterion.

Each result line is printed as the test runs (visible with ``-s``) and
repeated in the terminal summary.  Criteria 6, 11 and 12 cannot hold as
stated; they are strict xfails so that an unexpected pass is noticed.
"""

import pytest

from matroidkit.acceptance import CRITERIA, run_one

from conftest import ACCEPTANCE_LINES

KNOWN_FAILURES = {
    6: "the normal form admits no three-leg swirl over GF(4): the joints of a GF(4) hyperoval "
       "pairing are concurrent",
    11: "the five-leg free swirl is 5-fractured, so it is not a 5-skeleton",
    12: "U2,4 passes the skeleton test and is a 4-element fan",
}


def _params():
    for number in sorted(CRITERIA):
        marks = []
        if number in KNOWN_FAILURES:
            marks.append(pytest.mark.xfail(strict=True, reason=KNOWN_FAILURES[number]))
        yield pytest.param(number, id=f"criterion{number}", marks=marks)


@pytest.mark.parametrize("number", list(_params()))
def test_criterion(number):
    res = run_one(number, seed=0)
    line = res.line()
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert res.passed, line

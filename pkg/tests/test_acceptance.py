"""The twelve acceptance criteria, one test each.

Each run prints a single pass/fail line per criterion; the lines are also
collected for the terminal summary (see conftest.py).
"""

import pytest

from partcat.acceptance import CRITERIA, run_criterion

RESULTS = []


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA],
                         ids=[f"{n:02d}-{title.replace(' ', '-')}" for n, title, _ in CRITERIA])
def test_criterion(number):
    res = run_criterion(number, seed=0)
    RESULTS.append(res)
    print(res.line())
    assert res.ok, res.line()


if __name__ == "__main__":
    for n, _, _ in CRITERIA:
        print(run_criterion(n).line(), flush=True)

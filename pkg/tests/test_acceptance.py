"""Acceptance criteria as tests, one per criterion, exact comparisons.

The heavy fixture computations are shared through a session-scoped run of the
acceptance suite; each test reports its criterion's pass/fail line.
"""

import pytest

from modrep.acceptance import CRITERIA, SharedState, _run


@pytest.fixture(scope="session")
def acceptance_results():
    state = SharedState()
    results = {}
    for number, name, fn in CRITERIA:
        res = _run(number, name, fn, state)
        print(res.line(), flush=True)
        results[number] = res
    return results


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA])
def test_criterion(acceptance_results, number):
    res = acceptance_results[number]
    print(res.line())
    if res.skipped:
        pytest.skip(res.detail)
    assert res.passed, res.line()

"""The twelve acceptance criteria, one test each.

Every criterion is exact (integer or rational equality); the only numeric
tolerances are the wall-clock ceilings on criteria 1 and 10.
"""
import pytest

from infoshare.experiments import CRITERIA, run_criterion

# seconds; None means no runtime ceiling
RUNTIME_LIMITS = {1: 120.0, 10: 300.0}


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, capsys):
    res = run_criterion(number)
    limit = RUNTIME_LIMITS.get(number)
    in_time = limit is None or res.seconds < limit
    verdict = "PASS" if res.passed and in_time else "FAIL"
    budget = f" (limit {limit:.0f}s)" if limit else ""
    with capsys.disabled():
        print(f"\ncriterion {number:2d}: {verdict} [{res.title}] {res.seconds:.2f}s{budget} :: {res.detail}")
    assert res.passed, res.detail
    assert in_time, f"took {res.seconds:.1f}s, limit {limit}s"

import pytest

from posmc.verify import QUICK, SUITES, run_suites


@pytest.mark.parametrize("suite", SUITES)
def test_quick_profile_passes(suite):
    results = run_suites([suite], QUICK)
    assert results
    failed = [r.line() for r in results if not r.passed]
    assert failed == []
    for r in results:
        assert r.suite == suite and r.checked > 0


def test_all_expands():
    names = {r.suite for r in run_suites(["all"], QUICK)}
    assert names == set(SUITES)


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suites(["nope"], QUICK)


def test_result_serialization():
    r = run_suites(["good-pair"], QUICK)[0]
    d = r.to_dict()
    assert d["passed"] is True and d["suite"] == "good-pair"
    assert r.line(timings=False).startswith("PASS")

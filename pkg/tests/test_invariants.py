import pytest

from backend.errors import PoleError
from backend.invariants import SUITES, CheckResult, _run, run_suite


def test_backend_errors_become_failed_checks():
    def broken():
        raise PoleError("gamma has a pole at z=0")

    result = _run("specfun", "broken", broken)
    assert result == CheckResult("specfun", "broken", False, "PoleError: gamma has a pole at z=0")


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("plots")


def test_suite_names():
    assert list(SUITES) == ["specfun", "kernels", "asymptotics", "theorem"]


@pytest.mark.slow
@pytest.mark.parametrize("suite", ["kernels", "asymptotics", "theorem"])
def test_suite_passes(suite):
    failures = [r for r in run_suite(suite) if not r.passed]
    assert not failures, failures


def test_truth_table_check_counts_unmatched_rows(monkeypatch):
    import pandas as pd

    import backend.invariants as invariants

    table = pd.DataFrame({
        "label": ["0", "0.5H"], "split": ["first", "first"],
        "verdict": ["HUYGENSIAN", "NON_HUYGENSIAN_UNMATCHED"],
        "max_tail": [1e-12, 7e-7], "agrees": [True, True], "matched": [None, False],
    })
    monkeypatch.setattr(invariants, "theorem_truth_table", lambda *args, **kwargs: table)
    passed, detail = invariants.SUITES["theorem"]["truth_table"]()
    assert passed
    assert "0 disagreements, 1 unmatched" in detail
    assert "7.00e-07" in detail

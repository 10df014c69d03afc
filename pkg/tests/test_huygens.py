import math

import numpy as np
import pandas as pd
import pytest

from backend.errors import PreconditionError
from backend.huygens import (HUYGENS_TOL, NON_HUYGENSIAN_FLOOR, TailSplit, Verdict, class_weight,
                             classify_mass, load_theorem_masses, log_tail_regression,
                             nondegeneracy_check, predicted_tail, tail_scan, theorem_truth_table)
from backend.kernels import CosmologyParams, MassClass, MassTag
from backend.reports import write_report
from backend.solver import dirac_tail_first, dirac_tail_second
from backend.wave_core import RadialBump

SHORT_GRID = np.linspace(3.0, 12.0, 6)
FULL_GRID = np.linspace(3.0, 12.0, 20)


def test_massless_scan_is_huygensian(bump):
    report = tail_scan(TailSplit.FIRST, bump, CosmologyParams(1.0), SHORT_GRID)
    assert report.verdict is Verdict.HUYGENSIAN
    assert report.max_tail < HUYGENS_TOL
    assert report.mass_class.tag is MassTag.ZERO
    assert list(report.to_frame().columns) == ["t", "tail_re", "tail_im", "tail_abs",
                                               "predicted_re", "predicted_im", "ratio_dev"]


@pytest.mark.parametrize("m, split", [(1j, TailSplit.FIRST), (1j, TailSplit.SECOND),
                                      (-1j, TailSplit.FIRST), (-1j, TailSplit.SECOND)])
def test_imaginary_hubble_masses_are_huygensian(bump, m, split):
    report = tail_scan(split, bump, CosmologyParams(1.0, m), SHORT_GRID)
    assert report.verdict is Verdict.HUYGENSIAN


def test_scan_rejects_times_inside_the_cone(bump, cp):
    with pytest.raises(PreconditionError):
        tail_scan(TailSplit.FIRST, bump, cp, [0.05, 3.0])


def test_second_split_classifies_the_mirrored_mass(bump):
    report = tail_scan(TailSplit.SECOND, bump, CosmologyParams(1.0, 0.5j), SHORT_GRID[:2])
    assert report.mass_class.tag is MassTag.MINUS_HALF
    first = tail_scan(TailSplit.FIRST, bump, CosmologyParams(1.0, 0.5j), SHORT_GRID[:2])
    assert first.mass_class.tag is MassTag.PLUS_HALF


def test_class_weights(cp):
    assert class_weight(MassClass.from_ell(-1), CosmologyParams(1.0))(0.3) == 1
    np.testing.assert_allclose(class_weight(MassClass(MassTag.GENERIC), cp)(0.3),
                               complex(0.91) ** (-1.0 - cp.mu))
    np.testing.assert_allclose(class_weight(MassClass.from_ell(-5), CosmologyParams(1.0))(0.3),
                               1 - 3 * 0.09)


def test_nondegeneracy_of_the_standard_bump(bump, cp):
    assert nondegeneracy_check(bump, classify_mass(cp), cp) > 1e-8


def test_prediction_tracks_the_tail(bump, cp):
    cls = classify_mass(cp)
    t = 12.0
    np.testing.assert_allclose(dirac_tail_first(bump, cp, t), predicted_tail(cls, bump, cp, t),
                               rtol=0.05)


@pytest.mark.slow
@pytest.mark.parametrize("m", [0.25j, 0.5])
def test_generic_scans_match_the_leading_term(bump, m):
    report = tail_scan(TailSplit.FIRST, bump, CosmologyParams(1.0, m), FULL_GRID)
    assert report.verdict is Verdict.NON_HUYGENSIAN_MATCHED
    assert report.deviations[-1] < 0.05
    assert report.max_tail > NON_HUYGENSIAN_FLOOR


@pytest.mark.slow
def test_logarithmic_tail(bump):
    report = tail_scan(TailSplit.FIRST, bump, CosmologyParams(1.0, -0.5j), np.linspace(6.0, 12.0, 13))
    fit = log_tail_regression(report)
    assert fit.points == 13
    assert fit.rsquared > 0.99


def test_theorem_mass_table_loads():
    masses = load_theorem_masses()
    assert {"label", "m_re", "m_im", "expected_first", "expected_second"} <= set(masses.columns)
    huygensian = masses.loc[masses["expected_first"] == Verdict.HUYGENSIAN.value, "label"]
    assert len(huygensian) == 3


@pytest.mark.slow
def test_truth_table(bump):
    table = theorem_truth_table(load_theorem_masses(), bump, 1.0, FULL_GRID)
    assert table["agrees"].all(), table.loc[~table["agrees"]].to_string()
    non_huygensian = table.loc[table["verdict"] != Verdict.HUYGENSIAN.value]
    assert (non_huygensian["max_tail"] > NON_HUYGENSIAN_FLOOR).all()
    assert non_huygensian["matched"].map(lambda v: isinstance(v, bool)).all()
    assert table.loc[table["verdict"] == Verdict.HUYGENSIAN.value, "matched"].isna().all()


THEOREM_ROWS = [(row.label, complex(row.m_re, row.m_im), split, getattr(row, f"expected_{split.value}"))
                for row in load_theorem_masses().itertuples(index=False) for split in TailSplit]


@pytest.mark.parametrize("label, m, split, expected", THEOREM_ROWS,
                         ids=[f"{label}-{split.value}" for label, _, split, _ in THEOREM_ROWS])
def test_every_theorem_mass_has_a_tail_or_none(bump, label, m, split, expected):
    cp = CosmologyParams(1.0, m)
    measure = dirac_tail_first if split is TailSplit.FIRST else dirac_tail_second
    tails = np.array([measure(bump, cp, t) for t in (3.0, 6.0, 12.0)])
    assert np.all(np.isfinite(tails))
    if expected == Verdict.HUYGENSIAN.value:
        assert np.max(np.abs(tails)) < HUYGENS_TOL
    else:
        assert np.max(np.abs(tails)) > HUYGENS_TOL


def test_scan_rejects_a_bump_wider_than_the_leading_term_radius():
    with pytest.raises(PreconditionError, match="leading-term radius"):
        tail_scan(TailSplit.FIRST, RadialBump(0.2), CosmologyParams(3.0, 0.25j),
                  np.linspace(1.5, 4.0, 6))


def test_scan_rejects_a_bump_too_wide_for_the_hubble_scale():
    with pytest.raises(PreconditionError, match="eps <= 1/2"):
        tail_scan(TailSplit.FIRST, RadialBump(0.6), CosmologyParams(1.0), [3.0, 6.0])


def test_early_times_have_no_prediction(bump, cp, tmp_path):
    report = tail_scan(TailSplit.FIRST, bump, cp, [1.0, 3.0])
    frame = report.to_frame()
    assert math.isnan(frame["predicted_re"][0]) and math.isnan(frame["predicted_im"][0])
    assert np.isfinite(frame["predicted_re"][1]) and np.isfinite(frame["predicted_im"][1])
    path = write_report(report, tmp_path / "early.csv")
    first_row = path.read_text(encoding="utf-8").splitlines()[1].split(",")
    assert first_row[4] == "" and first_row[5] == ""


def test_truth_table_marks_unmatched_rows(bump):
    masses = pd.DataFrame({"label": ["0", "0.25i"], "m_re": [0.0, 0.0], "m_im": [0.0, 0.25],
                           "expected_first": ["HUYGENSIAN", "NON_HUYGENSIAN"],
                           "expected_second": ["HUYGENSIAN", "NON_HUYGENSIAN"]})
    table = theorem_truth_table(masses, bump, 1.0, SHORT_GRID, rate_tol=1e-12)
    assert table["agrees"].all()
    assert table.loc[table["label"] == "0", "matched"].isna().all()
    assert (table.loc[table["label"] == "0.25i", "matched"] == False).all()  # noqa: E712


@pytest.mark.slow
@pytest.mark.parametrize("m, split", [(0.0, TailSplit.FIRST), (1j, TailSplit.FIRST),
                                      (-1j, TailSplit.SECOND), (1j, TailSplit.SECOND)])
def test_huygensian_verdict_survives_a_longer_window(bump, m, split):
    report = tail_scan(split, bump, CosmologyParams(1.0, m), np.linspace(3.0, 21.0, 20),
                       huygens_tol=HUYGENS_TOL / 2)
    assert report.verdict is Verdict.HUYGENSIAN

"""
Writing and validating tail-scan reports (CSV or JSON plus a metadata sidecar).
"""
import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import pandas as pd

from .huygens import TailReport, Verdict

OUT_PATH = "data/output/tail_scan.csv"
FLOAT_FORMAT = "%.17g"
REPORT_COLUMNS = ["t", "tail_re", "tail_im", "tail_abs", "predicted_re", "predicted_im", "ratio_dev"]


def status(message: str):
    """Human-readable progress line; stdout stays reserved for data."""
    print(message, file=sys.stderr)


def _pair(z: complex):
    z = complex(z)
    return {"re": _finite_or_none(z.real), "im": _finite_or_none(z.imag)}


def _finite_or_none(x: float):
    return float(x) if math.isfinite(x) else None


def meta_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def report_metadata(report: TailReport, config=None) -> dict:
    return {
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "mass_class": str(report.mass_class),
        "split": report.split.value,
        "H": report.cp.H,
        "m": _pair(report.cp.m),
        "verdict": report.verdict.value,
        "huygens_tol": report.huygens_tol,
        "rate_tol": report.rate_tol,
        "leading_coefficient": _pair(report.leading_coefficient),
        "fitted_scale": _pair(report.fitted_scale),
        "nondegeneracy": _finite_or_none(report.nondegeneracy),
        "config": dict(config or {}),
    }


def _json_payload(report: TailReport) -> dict:
    rows = []
    for t, tail, pred, dev in zip(report.times, report.tails, report.predicted, report.deviations):
        rows.append({"t": float(t), "tail": _pair(tail), "predicted": _pair(pred),
                     "ratio_dev": _finite_or_none(float(dev))})
    return {
        "mass_class": str(report.mass_class),
        "split": report.split.value,
        "H": report.cp.H,
        "m": _pair(report.cp.m),
        "huygens_tol": report.huygens_tol,
        "rate_tol": report.rate_tol,
        "rows": rows,
        "verdict": report.verdict.value,
    }


def write_report(report: TailReport, path=OUT_PATH, fmt: str = "csv", config=None) -> Path:
    """Write the report and its metadata sidecar; the data file carries no timestamps."""
    path = Path(path)
    os.makedirs(path.parent, exist_ok=True)
    if fmt == "csv":
        body = report.to_frame().to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        footer = (f"# verdict={report.verdict.value}\n"
                  f"# huygens_tol={report.huygens_tol!r}\n"
                  f"# rate_tol={report.rate_tol!r}\n")
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(body + footer)
    elif fmt == "json":
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(_json_payload(report), f, ensure_ascii=False, indent=2)
            f.write("\n")
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    with open(meta_path(path), "w", encoding="utf-8", newline="\n") as f:
        json.dump(report_metadata(report, config), f, ensure_ascii=False, indent=2)
        f.write("\n")
    status(f"📁 Wrote {path}")
    return path


def _read_csv_report(path):
    footer = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.startswith("#") and "=" in line:
                key, value = line[1:].strip().split("=", 1)
                footer[key.strip()] = value.strip()
    frame = pd.read_csv(path, comment="#")
    return frame, footer


def _read_json_report(path):
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)

    def num(x):
        return np.nan if x is None else x

    frame = pd.DataFrame({
        "t": [r["t"] for r in payload["rows"]],
        "tail_re": [num(r["tail"]["re"]) for r in payload["rows"]],
        "tail_im": [num(r["tail"]["im"]) for r in payload["rows"]],
        "ratio_dev": [num(r["ratio_dev"]) for r in payload["rows"]],
    })
    frame["tail_abs"] = np.hypot(frame["tail_re"], frame["tail_im"])
    footer = {k: str(payload[k]) for k in ("verdict", "huygens_tol", "rate_tol") if k in payload}
    return frame, footer


def validate_report(path=OUT_PATH) -> bool:
    """Re-read a written report and check its structure and verdict invariants."""
    status("\n🔍 Validating report...")
    path = Path(path)
    try:
        frame, footer = _read_json_report(path) if path.suffix == ".json" else _read_csv_report(path)
    except Exception as e:
        status(f"❌ Cannot read report: {e}")
        return False

    issues = []
    warnings = []

    if path.suffix != ".json":
        missing = [c for c in REPORT_COLUMNS if c not in frame.columns]
        if missing:
            issues.append(f"missing columns: {', '.join(missing)}")
    if frame.empty:
        issues.append("report has no rows")
    if "verdict" not in footer:
        issues.append("missing verdict footer")
    elif footer["verdict"] not in {v.value for v in Verdict}:
        issues.append(f"unknown verdict {footer['verdict']!r}")

    if not issues:
        times = frame["t"].to_numpy()
        if np.any(np.diff(times) <= 0):
            warnings.append("time grid is not strictly increasing")
        verdict = footer["verdict"]
        huygens_tol = float(footer.get("huygens_tol", "nan"))
        rate_tol = float(footer.get("rate_tol", "nan"))
        max_tail = float(frame["tail_abs"].max())
        if verdict == Verdict.HUYGENSIAN.value and not max_tail < huygens_tol:
            issues.append(f"HUYGENSIAN verdict but max |tail| = {max_tail:.3e} >= {huygens_tol:g}")
        if verdict == Verdict.NON_HUYGENSIAN_MATCHED.value:
            last = float(frame["ratio_dev"].iloc[-1])
            if not last < rate_tol:
                issues.append(f"MATCHED verdict but final |ratio-1| = {last:.3e} >= {rate_tol:g}")
        if verdict != Verdict.HUYGENSIAN.value and frame["ratio_dev"].isna().all():
            warnings.append("no predicted values recorded for a non-huygensian scan")

    if issues:
        status(f"❌ Found {len(issues)} critical issues:")
        for issue in issues[:10]:
            status(f"   • {issue}")
        return False

    if warnings:
        status(f"⚠️  Found {len(warnings)} warnings:")
        for warning in warnings[:10]:
            status(f"   • {warning}")

    status("✅ Report validation complete")
    return True

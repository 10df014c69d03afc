"""
Tail experiments: mass classification, time scans of the origin tail,
comparison with the late-time leading terms, and verdicts.
"""
from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from .errors import PreconditionError
from .kernels import (ASYMPTOTE_TAU_MAX, LATTICE_TOL, NEGATIVE_TAGS, POSITIVE_TAGS, CosmologyParams,
                      MassClass, MassTag, asymptote_radius, combo_asymptote, lattice_index,
                      leading_coefficient, phi_dist)
from .quadrature import integrate_complex
from .solver import dirac_tail_first, dirac_tail_second
from .wave_core import RadialProfile, v_of

logger = logging.getLogger(__name__)

HUYGENS_TOL = 1e-8
NON_HUYGENSIAN_FLOOR = 10 * HUYGENS_TOL    # max |tail| lower bound for tail-carrying masses, eps=0.1
RATE_TOL = 0.05
MONOTONE_POINTS = 5
MONOTONE_SLACK = 1e-9
NONDEGENERACY_FLOOR = 1e-14
THEOREM_MASSES_PATH = Path(__file__).resolve().parent.parent / "data" / "config" / "theorem_masses.csv"


class TailSplit(enum.Enum):
    FIRST = "first"
    SECOND = "second"


class Verdict(enum.Enum):
    HUYGENSIAN = "HUYGENSIAN"
    NON_HUYGENSIAN_MATCHED = "NON_HUYGENSIAN_MATCHED"
    NON_HUYGENSIAN_UNMATCHED = "NON_HUYGENSIAN_UNMATCHED"


@dataclass
class TailReport:
    mass_class: MassClass
    split: TailSplit
    cp: CosmologyParams
    times: np.ndarray
    tails: np.ndarray
    predicted: np.ndarray
    ratios: np.ndarray
    verdict: Verdict
    huygens_tol: float = HUYGENS_TOL
    rate_tol: float = RATE_TOL
    leading_coefficient: complex = 0j
    fitted_scale: complex = complex(math.nan, math.nan)
    nondegeneracy: float = float("nan")
    metadata: dict = field(default_factory=dict)

    @property
    def max_tail(self) -> float:
        return float(np.max(np.abs(self.tails)))

    @property
    def deviations(self) -> np.ndarray:
        return np.abs(self.ratios - 1.0)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "t": self.times,
            "tail_re": self.tails.real,
            "tail_im": self.tails.imag,
            "tail_abs": np.abs(self.tails),
            "predicted_re": self.predicted.real,
            "predicted_im": self.predicted.imag,
            "ratio_dev": self.deviations,
        })


def classify_mass(cp: CosmologyParams, tol: float = LATTICE_TOL) -> MassClass:
    ell = lattice_index(cp, tol)
    if ell is None:
        return MassClass(MassTag.GENERIC)
    return MassClass.from_ell(ell)


def class_weight(cls: MassClass, cp: CosmologyParams) -> Callable[[float], complex]:
    """r-weight multiplying d(r Phi)/dr in the class' leading tail integral."""
    H = cp.H
    if cls.tag is MassTag.GENERIC:
        exponent = -1.0 - cp.mu
        return lambda r: complex(1.0 - (H * r) ** 2) ** exponent
    ell = cls.ell
    if cls.tag is MassTag.ZERO:
        return lambda r: 1.0 + 0j
    if cls.tag in POSITIVE_TAGS or cls.tag is MassTag.PLUS_IH:
        return lambda r: complex((1.0 - (H * r) ** 2) ** (0.5 * (ell - 1)))
    if cls.tag in NEGATIVE_TAGS or cls.tag is MassTag.MINUS_IH:
        return lambda r: complex((1.0 - (H * r) ** 2) ** (-0.5 * (ell + 5))
                                 * (1.0 + (ell + 2) * (H * r) ** 2))
    return lambda r: complex((1.0 - (H * r) ** 2) ** -1.5)


def nondegeneracy_check(phi: RadialProfile, cls: MassClass, cp: CosmologyParams) -> float:
    """|int d(r Phi)/dr * weight(r) dr| over the support."""
    weight = class_weight(cls, cp)
    value = integrate_complex(lambda r: v_of(phi, 0.0, r) * weight(r), 0.0, phi.eps,
                              name=f"nondegeneracy integral ({cls})")
    return abs(value)


def predicted_tail(cls: MassClass, phi: RadialProfile, cp: CosmologyParams, t: float) -> complex:
    """2 e^{-Ht} int d(s Phi)/ds * (leading combination) ds for first-pair data."""
    if cls.huygensian:
        return 0j
    c0 = combo_asymptote(cls, cp, 0.0, t)
    integral = integrate_complex(
        lambda s: v_of(phi, 0.0, s) * (combo_asymptote(cls, cp, s, t) - c0), 0.0, phi.eps,
        name=f"predicted tail ({cls}) at t={t:g}")
    return 2.0 * math.exp(-cp.H * t) * integral


def _measure(split: TailSplit, phi: RadialProfile, cp: CosmologyParams, t: float) -> complex:
    if split is TailSplit.FIRST:
        return dirac_tail_first(phi, cp, t)
    return dirac_tail_second(phi, cp, t)


def _predict(cls: MassClass, phi: RadialProfile, cp: CosmologyParams, t: float) -> complex:
    """predicted_tail, or NaN at times still too early for the leading term."""
    tau = math.exp(-cp.H * t)
    if not cls.huygensian and tau >= ASYMPTOTE_TAU_MAX:
        logger.debug("no prediction at t=%g: e^(-Ht)=%.3g is not below %g", t, tau, ASYMPTOTE_TAU_MAX)
        return complex(math.nan, math.nan)
    return predicted_tail(cls, phi, cp, t)


def _check_support(phi: RadialProfile, cls: MassClass, cp: CosmologyParams):
    fits = getattr(phi, "fits", None)
    if fits is not None and not fits(cp.H):
        raise PreconditionError(f"support radius eps={phi.eps} needs eps <= 1/2 and |H| eps < 1 "
                                f"(H={cp.H:g})")
    if not cls.huygensian:
        r_max = asymptote_radius(cls, cp)
        if phi.eps > r_max:
            raise PreconditionError(f"support radius eps={phi.eps} exceeds the leading-term "
                                    f"radius {r_max:.6g} of {cls}")


def _map(fn, items: Sequence[float], max_workers: Optional[int]):
    if max_workers and max_workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _verdict(tails, deviations, huygens_tol, rate_tol) -> Verdict:
    if np.max(np.abs(tails)) < huygens_tol:
        return Verdict.HUYGENSIAN
    last = deviations[-MONOTONE_POINTS:]
    if (len(last) and np.all(np.isfinite(last)) and last[-1] < rate_tol
            and np.all(np.diff(last) <= MONOTONE_SLACK)):
        return Verdict.NON_HUYGENSIAN_MATCHED
    return Verdict.NON_HUYGENSIAN_UNMATCHED


def _fitted_scale(tails, predicted) -> complex:
    p = predicted[-MONOTONE_POINTS:]
    y = tails[-MONOTONE_POINTS:]
    ok = np.isfinite(p) & (p != 0)
    if not np.any(ok):
        return complex(math.nan, math.nan)
    return complex(np.sum(np.conj(p[ok]) * y[ok]) / np.sum(np.abs(p[ok]) ** 2))


def tail_scan(split: TailSplit, phi: RadialProfile, cp: CosmologyParams, t_grid: Iterable[float],
              huygens_tol: float = HUYGENS_TOL, rate_tol: float = RATE_TOL,
              max_workers: Optional[int] = None) -> TailReport:
    times = np.asarray(list(t_grid), dtype=float)
    inside = [t for t in times if phi_dist(t, cp.H) <= phi.eps]
    if inside:
        raise PreconditionError(
            f"t={inside[0]:g} has phi(t) <= eps={phi.eps}; scans must start beyond the cone")
    effective = cp if split is TailSplit.FIRST else cp.mirrored()
    cls = classify_mass(effective)
    _check_support(phi, cls, effective)
    nondegeneracy = nondegeneracy_check(phi, cls, effective)
    if not cls.huygensian and nondegeneracy < NONDEGENERACY_FLOOR:
        logger.warning("bump does not witness class %s (weighted integral %.3e)", cls, nondegeneracy)
    logger.info("scanning %d times for m=%s (%s split, class %s)", len(times), cp.m, split.value, cls)

    tails = np.array(_map(partial(_measure, split, phi, cp), list(times), max_workers), dtype=complex)
    predicted = np.array([_predict(cls, phi, effective, t) for t in times], dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(np.isfinite(predicted) & (predicted != 0), tails / predicted, np.nan)
    ratios = ratios.astype(complex)
    verdict = _verdict(tails, np.abs(ratios - 1.0), huygens_tol, rate_tol)
    return TailReport(
        mass_class=cls, split=split, cp=cp, times=times, tails=tails, predicted=predicted,
        ratios=ratios, verdict=verdict, huygens_tol=huygens_tol, rate_tol=rate_tol,
        leading_coefficient=leading_coefficient(cls, effective),
        fitted_scale=_fitted_scale(tails, predicted), nondegeneracy=nondegeneracy)


@dataclass(frozen=True)
class LogRegression:
    slope: float
    intercept: float
    rsquared: float
    points: int


def log_tail_regression(report: TailReport, window=(6.0, 12.0)) -> LogRegression:
    """Fit Re(tail) * e^{2Ht} = slope * Ht + intercept over Ht in `window`."""
    H = report.cp.H
    ht = H * report.times
    mask = (ht >= window[0] - 1e-12) & (ht <= window[1] + 1e-12)
    y = report.tails.real[mask] * np.exp(2.0 * ht[mask])
    fit = stats.linregress(ht[mask], y)
    return LogRegression(float(fit.slope), float(fit.intercept), float(fit.rvalue ** 2), int(mask.sum()))


def load_theorem_masses(path=THEOREM_MASSES_PATH) -> pd.DataFrame:
    """Mass list (in units of H) with the expected huygensian verdict per split."""
    frame = pd.read_csv(path, comment="#", dtype={"label": str})
    return frame


def theorem_truth_table(masses: pd.DataFrame, phi: RadialProfile, H: float,
                        t_grid: Sequence[float], huygens_tol: float = HUYGENS_TOL,
                        rate_tol: float = RATE_TOL, max_workers: Optional[int] = None) -> pd.DataFrame:
    rows = []
    for row in masses.itertuples(index=False):
        cp = CosmologyParams(H, complex(row.m_re, row.m_im) * H)
        for split in TailSplit:
            report = tail_scan(split, phi, cp, t_grid, huygens_tol, rate_tol, max_workers)
            expected = getattr(row, f"expected_{split.value}")
            huygensian = report.verdict is Verdict.HUYGENSIAN
            rows.append({
                "label": row.label,
                "split": split.value,
                "mass_class": str(report.mass_class),
                "verdict": report.verdict.value,
                "max_tail": report.max_tail,
                "final_ratio_dev": float(report.deviations[-1]),
                "expected": expected,
                "agrees": huygensian == (expected == Verdict.HUYGENSIAN.value),
                "matched": None if huygensian else report.verdict is Verdict.NON_HUYGENSIAN_MATCHED,
            })
            logger.info("%s / %s -> %s", row.label, split.value, report.verdict.value)
    return pd.DataFrame(rows)

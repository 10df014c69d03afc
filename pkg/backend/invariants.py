"""
Verification suites run by `cli verify`. Each check returns a CheckResult;
numerical failures and backend errors both count as failed checks.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List

import numpy as np

from .errors import DeSitterError
from .huygens import (NON_HUYGENSIAN_FLOOR, TailSplit, Verdict, classify_mass, load_theorem_masses,
                      log_tail_regression, tail_scan, theorem_truth_table)
from .kernels import (CosmologyParams, LightconeCoords, DiracCombo, MassClass, kernel_E,
                      kernel_K0, kernel_K1, phi_dist, script_F, tail_asymptote)
from .solver import SpinorData, dirac_special, k1_transform, k1_transform_closed
from .specfun import Hyp2F1Params, digamma, gamma, hyp2f1, hyp2f1_near_one, hyp2f1_series
from .wave_core import RadialBump

logger = logging.getLogger(__name__)

SEED = 20240607
SCAN_GRID = np.linspace(3.0, 12.0, 20)
BUMP = RadialBump(eps=0.1, amp=1.0)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str

    def to_dict(self):
        return asdict(self)


def _run(suite: str, name: str, check: Callable[[], tuple]) -> CheckResult:
    try:
        passed, detail = check()
    except DeSitterError as e:
        passed, detail = False, f"{type(e).__name__}: {e}"
    logger.info("%s/%s: %s (%s)", suite, name, "pass" if passed else "FAIL", detail)
    return CheckResult(suite, name, bool(passed), detail)


# specfun

def _overlap_consistency():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    draws = 0
    while draws < 100:
        a = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.0, 1.0))
        b = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.0, 1.0))
        c = complex(rng.uniform(0.5, 3.0), rng.uniform(-0.5, 0.5))
        s = c - a - b
        if abs(s - round(s.real)) < 1e-6:
            continue
        p = Hyp2F1Params(a, b, c)
        z = rng.uniform(0.4, 0.6)
        series = hyp2f1_series(p, z)
        worst = max(worst, abs(series - hyp2f1_near_one(p, z)) / abs(series))
        draws += 1
    return worst < 1e-10, f"max relative gap {worst:.2e} over {draws} draws"


def _terminating_identity():
    worst = 0.0
    for n in range(-1, -7, -1):
        f_one = hyp2f1(Hyp2F1Params(n, n, 1), 1.0)
        f_two = hyp2f1(Hyp2F1Params(n + 1, n + 1, 2), 1.0)
        worst = max(worst, abs(2 * n * f_two + f_one) / abs(f_one))
    return worst < 1e-12, f"max relative residual {worst:.2e}"


def _four_over_pi():
    gap = abs(hyp2f1(Hyp2F1Params(0.5, 0.5, 2.0), 1.0) - 4.0 / math.pi)
    return gap < 1e-12, f"|F(1/2,1/2;2;1) - 4/pi| = {gap:.2e}"


def _gamma_reflection():
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(50):
        z = complex(rng.uniform(-6.0, 6.0), rng.uniform(-3.0, 3.0))
        value = gamma(z) * gamma(1.0 - z) * np.sin(np.pi * z) / np.pi
        worst = max(worst, abs(value - 1.0))
    return worst < 1e-11, f"max |Gamma(z)Gamma(1-z)sin(pi z)/pi - 1| = {worst:.2e}"


def _digamma_recurrence():
    worst = 0.0
    for z in (0.5, 2.5, -1.5 + 0.5j, 3.0 + 4.0j, 12.0 - 7.0j):
        worst = max(worst, abs(digamma(z + 1.0) - digamma(z) - 1.0 / z))
    return worst < 1e-12, f"max recurrence residual {worst:.2e}"


def _log_branch_m0():
    p = Hyp2F1Params(0.5, 0.5, 1.0)
    gap = abs(hyp2f1_near_one(p, 0.55) - hyp2f1_series(p, 0.55))
    return gap < 1e-12, f"c=a+b branch vs series gap {gap:.2e}"


# kernels

def _k1_closed_forms():
    H = 1.0
    cp = CosmologyParams(H)
    worst = 0.0
    for A in np.linspace(0.0, 0.9, 20):
        for t in np.linspace(0.0, 3.0, 20):
            r = A / H
            half = 0.5 * math.exp(0.5 * H * t)
            three_half = 0.25 * math.exp(-0.5 * H * t) * ((1 - A * A) * math.exp(2 * H * t) + 1)
            worst = max(worst,
                        abs(kernel_K1(r, t, 0.5 * H, cp) - half),
                        abs(kernel_K1(r, t, -0.5 * H, cp) - half),
                        abs(kernel_K1(r, t, 1.5 * H, cp) - three_half))
    return worst < 1e-11, f"max deviation {worst:.2e} on a 20x20 grid"


def _combo_derivative():
    H = 1.0
    h = 1e-4
    worst = 0.0
    for m in (0.3, 1 + 0.5j, -0.7j):
        cp = CosmologyParams(H, m * H)
        M = cp.M_plus
        for r in np.linspace(0.0, 0.45, 10):
            for t in np.linspace(0.3, 3.0, 10):
                def central(step):
                    return (kernel_K1(r, t + step, M, cp) - kernel_K1(r, t - step, M, cp)) / (2 * step)
                k1 = kernel_K1(r, t, M, cp)
                lhs = (4 * central(h / 2) - central(h)) / 3 - (0.5 * H + 1j * cp.m) * k1
                scale = max(abs(lhs), H * abs(k1))
                worst = max(worst, abs(DiracCombo(cp)(r, t) - lhs) / scale)
    return worst < 1e-6, f"max relative error {worst:.2e}"


def _e_collapse():
    rng = np.random.default_rng(SEED + 2)
    cp = CosmologyParams(1.0)
    worst = 0.0
    for _ in range(20):
        M = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        t = rng.uniform(0.0, 4.0)
        expected = 0.5 * math.exp(cp.H * t)
        worst = max(worst, abs(kernel_E(0.0, t, t, M, cp) - expected) / expected)
    return worst < 1e-12, f"max relative deviation {worst:.2e}"


def _k0_richardson():
    cp = CosmologyParams(1.0, 0.25j)
    worst = 0.0
    for r, t in ((0.0, 0.5), (0.1, 0.5), (0.3, 1.5), (0.05, 3.0)):
        coarse = kernel_K0(r, t, cp.M_plus, cp)
        fine = kernel_K0(r, t, cp.M_plus, cp, h=0.5e-5)
        worst = max(worst, abs(coarse - fine) / abs(fine))
    return worst < 1e-8, f"h vs h/2 relative gap {worst:.2e}"


def _generic_asymptote():
    cp = CosmologyParams(1.0, 0.25j)
    cls = classify_mass(cp)
    combo = DiracCombo(cp)
    t = 12.0
    worst = 0.0
    for r in np.linspace(0.0, 0.3, 7):
        c = LightconeCoords.at(r, t, cp.H)
        worst = max(worst, abs(combo.bracket(c) / tail_asymptote(cls, cp, r, t) - 1.0))
    return worst < 0.02, f"max |bracket/asymptote - 1| = {worst:.2e} at Ht=12"


def _k1_transform_closed():
    cp = CosmologyParams(1.0)
    worst = 0.0
    for M in (0.5, -0.5, 1.5):
        for t in (0.05, 0.2, 1.0):
            direct = k1_transform(BUMP, M, cp, 0.0, t)
            closed = k1_transform_closed(BUMP, M, cp, 0.0, t)
            worst = max(worst, abs(direct - closed))
    return worst < 1e-9, f"max |quadrature - closed form| = {worst:.2e}"


# asymptotics

def _generic_rates():
    details = []
    ok = True
    for m in (0.25j, 0.5):
        report = tail_scan(TailSplit.FIRST, BUMP, CosmologyParams(1.0, m), SCAN_GRID)
        ok &= report.verdict is Verdict.NON_HUYGENSIAN_MATCHED
        details.append(f"m={m}: {report.verdict.value}, final dev {report.deviations[-1]:.2e}")
    return ok, "; ".join(details)


def _lattice_leading_terms():
    tau = math.exp(-12.0)
    cp = CosmologyParams(1.0)
    worst = 0.0
    for ell in (0, 2, 3, 5, -2, -4, -5, -6):
        lattice = cp.with_ell(ell)
        cls = MassClass.from_ell(ell)
        for A in (0.0, 0.1, 0.3):
            exact = script_F(tau, A, ell)
            worst = max(worst, abs(exact / tail_asymptote(cls, lattice, A, 12.0) - 1.0))
    return worst < 1e-3, f"max |F/leading - 1| = {worst:.2e} at Ht=12"


def _logarithmic_case():
    cp = CosmologyParams(1.0, -0.5j)
    report = tail_scan(TailSplit.FIRST, BUMP, cp, np.linspace(6.0, 12.0, 13))
    fit = log_tail_regression(report)
    return (fit.rsquared > 0.99 and abs(fit.slope) > 0,
            f"slope {fit.slope:.4e}, R^2 {fit.rsquared:.6f}")


# theorem

def _truth_table():
    table = theorem_truth_table(load_theorem_masses(), BUMP, 1.0, SCAN_GRID)
    disagreements = table.loc[~table["agrees"], ["label", "split", "verdict"]]
    non_huygensian = table.loc[table["verdict"] != Verdict.HUYGENSIAN.value, "max_tail"]
    weakest = float(non_huygensian.min()) if len(non_huygensian) else float("inf")
    unmatched = int((table["matched"] == False).sum())  # noqa: E712
    ok = disagreements.empty and weakest > NON_HUYGENSIAN_FLOOR
    return ok, (f"{len(disagreements)} disagreements, {unmatched} unmatched, "
                f"weakest non-huygensian tail {weakest:.2e}")


def _strong_huygens():
    rng = np.random.default_rng(SEED + 3)
    H = 1.0
    cases = ((0.0, SpinorData.first(BUMP, BUMP)),
             (1j, SpinorData.first(BUMP, BUMP)),
             (-1j, SpinorData.second(BUMP, BUMP)))
    worst = 0.0
    points = 0
    while points < 50:
        t = rng.uniform(0.0, 4.0)
        r = rng.uniform(0.0, 1.0)
        if abs(r - phi_dist(t, H)) <= BUMP.eps:
            continue
        m, data = cases[points % 3]
        worst = max(worst, float(np.max(np.abs(dirac_special(data, CosmologyParams(H, m), r, t)))))
        points += 1
    return worst < 1e-9, f"max component off the cone {worst:.2e} over {points} points"


SUITES: Dict[str, Dict[str, Callable[[], tuple]]] = {
    "specfun": {
        "overlap_consistency": _overlap_consistency,
        "terminating_identity": _terminating_identity,
        "four_over_pi": _four_over_pi,
        "gamma_reflection": _gamma_reflection,
        "digamma_recurrence": _digamma_recurrence,
        "log_branch_m0": _log_branch_m0,
    },
    "kernels": {
        "k1_closed_forms": _k1_closed_forms,
        "combo_derivative": _combo_derivative,
        "e_collapse": _e_collapse,
        "k0_richardson": _k0_richardson,
        "generic_asymptote": _generic_asymptote,
        "k1_transform_closed": _k1_transform_closed,
    },
    "asymptotics": {
        "generic_rates": _generic_rates,
        "lattice_leading_terms": _lattice_leading_terms,
        "logarithmic_case": _logarithmic_case,
    },
    "theorem": {
        "strong_huygens": _strong_huygens,
        "truth_table": _truth_table,
    },
}


def run_suite(suite: str) -> List[CheckResult]:
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return [_run(suite, name, check) for name, check in SUITES[suite].items()]

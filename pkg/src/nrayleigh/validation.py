"""Acceptance validation suite: every release gate as a runnable check.

Each criterion is a function returning a ``CriterionResult`` with a pass
flag and a details payload; ``build_report`` assembles them into a JSON-
serializable report whose bytes depend only on the scenario configuration
and the master seed - never on worker count, partitioning or wall-clock -
so that determinism can itself be checked by byte comparison.

Several checks are known to fail for structural reasons (the calibrated
closed form for TAS/MRC does not track a unit-power channel simulation,
and the small-threshold power law converges too slowly to match the full
formulas at the probed outage depths).  They are implemented exactly as
specified and report honest failures; see the package README for the
analysis.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import montecarlo, moments, schemes, specfun
from .fading import fading_params
from .montecarlo import SimSettings
from .schemes import ChannelConfig, OutageQuery, Scheme

__all__ = [
    "CriterionResult",
    "ValidationConfig",
    "build_report",
    "report_to_json",
]

_SPECFUN_ABS_TOL = 1e-10
_SPECFUN_TIME_BUDGET_S = 1.0
_MC_MATCH_BAND = (1e-3, 0.5)
_MC_MATCH_REL_TOL = 0.20
_GAP_TARGETS_DB = (5.0, 4.5, 3.9)
_GAP_TOL_DB = 0.5
_LEVEL_TARGETS_DB = (8.0, 13.0, 17.5, 21.4)
_LEVEL_TOL_DB = 1.0
_SLOPE_REL_TOL = 0.05
_ASYMPTOTE_RATIO_BAND = (0.9, 1.1)
_AF_TRADEOFF_REL_TOL = 0.15
_AF_LOWER_BOUND_MARGIN = 1.10
_MOMENT_REL_TOL = 0.25
_MOMENT_FAIL_FRACTION = 0.20
_BASE_CASE_SIGMAS = 4.0


@dataclass(frozen=True)
class CriterionResult:
    cid: str
    name: str
    passed: bool
    details: dict


@dataclass(frozen=True)
class ValidationConfig:
    """Scenario knobs for the validation run.

    ``mrc_omega`` exists mainly as a negative control: corrupting it must
    make the Monte-Carlo consistency checks fail.
    """

    trials: int = 1_000_000
    master_seed: int = 1
    partition_width: int = 65536
    workers: int = 1
    gamma_o: float = 1.0
    mrc_omega: float = 1.176
    sc_omega: float = 1.0
    snr_grid_db: tuple = tuple(float(v) for v in range(0, 31, 2))
    determinism_trials: int = 120_000

    def settings(self, trials: int | None = None) -> SimSettings:
        return SimSettings(
            trials=self.trials if trials is None else trials,
            master_seed=self.master_seed,
            partition_width=self.partition_width,
            workers=self.workers,
        )

    def omega(self, scheme: Scheme) -> float:
        return self.mrc_omega if scheme is Scheme.TAS_MRC else self.sc_omega


def _cfg(
    n: int, n_t: int, n_r: int, mean_snr: float, omega: float | None = None
) -> ChannelConfig:
    return ChannelConfig(
        n=n, n_t=n_t, n_r=n_r, mean_snr=mean_snr, calibration_omega=omega
    )


def _criterion_specfun_accuracy(config: ValidationConfig) -> CriterionResult:
    """Incomplete gamma against the frozen 60-digit series oracle."""
    table = json.loads(
        resources.files("nrayleigh.data")
        .joinpath("reg_lower_gamma_oracle.json")
        .read_text()
    )
    entries = table["entries"]
    pairs = [(e["a"], e["x"]) for e in entries]
    start = time.perf_counter()
    values = [specfun.reg_lower_gamma(a, x) for a, x in pairs]
    elapsed = time.perf_counter() - start
    max_err = max(abs(v - e["p"]) for v, e in zip(values, entries))
    runtime_ok = elapsed < _SPECFUN_TIME_BUDGET_S
    return CriterionResult(
        cid="c01",
        name="incomplete-gamma accuracy vs 60-digit series oracle",
        passed=max_err <= _SPECFUN_ABS_TOL and runtime_ok,
        details={
            "points": len(entries),
            "max_abs_error": max_err,
            "abs_tol": _SPECFUN_ABS_TOL,
            "runtime_under_budget": runtime_ok,
        },
    )


def _criterion_outage_vs_montecarlo(config: ValidationConfig) -> CriterionResult:
    """Analytic outage curves against the channel simulator, per scheme and n.

    Binding wherever the analytic outage is inside the comparison band:
    relative error within 20% or analytic value inside the empirical 95% CI.
    """
    settings = config.settings()
    gamma_o = config.gamma_o
    # Descending SNR gives ascending selection-statistic thresholds.
    points = sorted(
        ((gamma_o / 10.0 ** (db / 10.0), db) for db in config.snr_grid_db)
    )
    thresholds = [t for t, _ in points]
    per_curve = {}
    all_ok = True
    for n in (2, 3, 4, 5):
        # One shared-stream pass per n: the selection statistic is scale
        # free, so P(out at mean snr g) = P(selected power <= gamma_o/g).
        sim_cfg = _cfg(n, 2, 3, 1.0)
        cdfs = montecarlo.empirical_cdf_pair(sim_cfg, settings, thresholds)
        for scheme in Scheme:
            records = []
            worst = 0.0
            for est, (threshold, db) in zip(cdfs[scheme], points):
                g = gamma_o / threshold
                ana = schemes.outage(
                    scheme,
                    OutageQuery(threshold=gamma_o),
                    _cfg(n, 2, 3, g, config.omega(scheme)),
                )
                asym, _ = schemes.outage_asymptotic(
                    scheme, OutageQuery(threshold=gamma_o), _cfg(n, 2, 3, g, 1.0)
                )
                in_band = _MC_MATCH_BAND[0] <= ana <= _MC_MATCH_BAND[1]
                rel = abs(est.value - ana) / ana if ana > 0 else math.inf
                ok = (not in_band) or rel <= _MC_MATCH_REL_TOL or (
                    est.ci95_low <= ana <= est.ci95_high
                )
                if in_band:
                    worst = max(worst, rel)
                    all_ok = all_ok and ok
                records.append(
                    {
                        "scheme": scheme.value,
                        "n": n,
                        "n_t": 2,
                        "n_r": 3,
                        "snr_db": db,
                        "analytic": ana,
                        "asymptotic": asym,
                        "empirical": est.value,
                        "ci_low": est.ci95_low,
                        "ci_high": est.ci95_high,
                        "rel_error": rel if ana > 0 else None,
                        "binding": in_band,
                        "pass": ok,
                    }
                )
            records.sort(key=lambda r: r["snr_db"])
            per_curve[f"{scheme.value},n={n}"] = {
                "worst_binding_rel_error": worst,
                "points": records,
            }
    return CriterionResult(
        cid="c02",
        name="outage curves vs Monte-Carlo (2x3, calibrated)",
        passed=all_ok,
        details={"band": list(_MC_MATCH_BAND), "rel_tol": _MC_MATCH_REL_TOL,
                 "curves": per_curve},
    )


def _criterion_required_snr_gaps(config: ValidationConfig) -> CriterionResult:
    """Required-SNR spacing across cascade orders at outage 1e-4 (TAS/MRC 2x3).

    The gaps are threshold-invariant (required SNR scales linearly with the
    threshold); the absolute levels are defined under the unit-threshold
    assumption, so the whole criterion pins gamma_o = 1 regardless of the
    sweep threshold configured elsewhere.
    """
    query = OutageQuery(threshold=1.0)
    levels_db = []
    for n in (2, 3, 4, 5):
        g = schemes.required_snr(
            Scheme.TAS_MRC, 1e-4, query, _cfg(n, 2, 3, 1.0, config.mrc_omega)
        )
        levels_db.append(10.0 * math.log10(g))
    gaps = [levels_db[i + 1] - levels_db[i] for i in range(3)]
    gap_errors = [abs(g - t) for g, t in zip(gaps, _GAP_TARGETS_DB)]
    gaps_ok = all(e <= _GAP_TOL_DB for e in gap_errors)
    level_errors = [abs(l - t) for l, t in zip(levels_db, _LEVEL_TARGETS_DB)]
    levels_ok = all(e <= _LEVEL_TOL_DB for e in level_errors)
    return CriterionResult(
        cid="c03",
        name="required-SNR gaps across n at outage 1e-4 (TAS/MRC 2x3)",
        passed=gaps_ok,
        details={
            "levels_db": levels_db,
            "gaps_db": gaps,
            "gap_targets_db": list(_GAP_TARGETS_DB),
            "gap_tol_db": _GAP_TOL_DB,
            "gaps_ok": gaps_ok,
            # Absolute levels assume a unit threshold (rate 1 bit/s/Hz);
            # reported alongside but not gating.
            "absolute_levels_assumption": "gamma_o = 1",
            "absolute_level_targets_db": list(_LEVEL_TARGETS_DB),
            "absolute_level_tol_db": _LEVEL_TOL_DB,
            "absolute_levels_ok": levels_ok,
        },
    )


def _fit_slope(scheme: Scheme, base: ChannelConfig, query, snr_points) -> float:
    logs = []
    for g in snr_points:
        p = schemes.outage(scheme, query, base.with_mean_snr(g))
        logs.append(math.log10(p))
    slope = np.polyfit(np.log10(np.asarray(snr_points)), np.asarray(logs), 1)[0]
    return float(slope)


def _criterion_diversity_slope(config: ValidationConfig) -> CriterionResult:
    """Fitted log-log outage slope vs d = mN/n over the outage decade below 1e-6."""
    query = OutageQuery(threshold=config.gamma_o)
    combos = []
    all_ok = True
    for scheme in Scheme:
        for n_t, n_r in ((2, 3), (2, 2)):
            for n in (2, 3, 4):
                base = _cfg(n, n_t, n_r, 1.0, 1.0)
                d = schemes.diversity_order(scheme, base)
                g_lo = schemes.required_snr(scheme, 1e-6, query, base)
                g_hi = schemes.required_snr(scheme, 1e-7, query, base)
                pts = np.logspace(math.log10(g_lo), math.log10(g_hi), 11)
                slope = _fit_slope(scheme, base, query, pts)
                rel = abs(abs(slope) - d) / d
                # Power-law slope of the asymptote must be exact.
                asym_logs = [
                    math.log10(
                        schemes.outage_asymptotic(scheme, query, base.with_mean_snr(g))[0]
                    )
                    for g in pts
                ]
                asym_slope = float(
                    np.polyfit(np.log10(pts), np.asarray(asym_logs), 1)[0]
                )
                asym_rel = abs(abs(asym_slope) - d) / d
                ok = rel <= _SLOPE_REL_TOL and asym_rel <= 1e-9
                all_ok = all_ok and ok
                combos.append(
                    {
                        "scheme": scheme.value,
                        "n": n,
                        "n_t": n_t,
                        "n_r": n_r,
                        "diversity": d,
                        "fitted_slope": abs(slope),
                        "rel_error": rel,
                        "asymptote_slope": abs(asym_slope),
                        "asymptote_rel_error": asym_rel,
                        "pass": ok,
                    }
                )
    return CriterionResult(
        cid="c04",
        name="diversity order from fitted outage slope",
        passed=all_ok,
        details={"rel_tol": _SLOPE_REL_TOL, "combos": combos},
    )


def _criterion_asymptote_consistency(config: ValidationConfig) -> CriterionResult:
    """Power-law/full-formula ratio at the SNR where the full formula is 1e-7."""
    query = OutageQuery(threshold=config.gamma_o)
    rows = []
    all_ok = True
    for scheme in Scheme:
        for n in (2, 3, 4):
            base = _cfg(n, 2, 3, 1.0, 1.0)
            g_star = schemes.required_snr(scheme, 1e-7, query, base)
            full = schemes.outage(scheme, query, base.with_mean_snr(g_star))
            asym, _ = schemes.outage_asymptotic(
                scheme, query, base.with_mean_snr(g_star)
            )
            ratio = asym / full
            ok = _ASYMPTOTE_RATIO_BAND[0] <= ratio <= _ASYMPTOTE_RATIO_BAND[1]
            all_ok = all_ok and ok
            rows.append(
                {"scheme": scheme.value, "n": n, "snr_db": 10 * math.log10(g_star),
                 "ratio": ratio, "pass": ok}
            )
    return CriterionResult(
        cid="c05",
        name="asymptote/full-formula ratio at outage 1e-7",
        passed=all_ok,
        details={"band": list(_ASYMPTOTE_RATIO_BAND), "rows": rows},
    )


def _criterion_af_anchors(config: ValidationConfig) -> CriterionResult:
    """Closed-form AF anchor identities and trade-off approximations."""
    checks = []

    def check(name: str, value: float, target: float, rel_tol: float) -> None:
        rel = abs(value - target) / abs(target)
        checks.append(
            {"check": name, "value": value, "target": target,
             "rel_error": rel, "rel_tol": rel_tol, "pass": rel <= rel_tol}
        )

    m1 = fading_params(1).m
    check("af_siso(1) == 1/m", moments.af_siso(1), 1.0 / m1, 1e-12)
    for n_r in (1, 2, 3):
        check(
            f"af_simo(1,{n_r}) == af_siso(1)/{n_r}",
            moments.af_simo(1, n_r),
            moments.af_siso(1) / n_r,
            1e-12,
        )
    for n_r in (2, 3):
        check(
            f"af_simo(2,{n_r}) ~ af_siso(2)/{n_r}",
            moments.af_simo(2, n_r),
            moments.af_siso(2) / n_r,
            _AF_TRADEOFF_REL_TOL,
        )
        check(
            f"af_simo(2,{n_r}) ~ 2.5^(2/{n_r})-1",
            moments.af_simo(2, n_r),
            2.5 ** (2.0 / n_r) - 1.0,
            _AF_TRADEOFF_REL_TOL,
        )
    # The compact double-cascade form diverges from the gamma-ratio value at
    # a single receive antenna; recorded here, deliberately not asserted.
    excluded = {
        "check": "af_simo(2,1) vs 2.5^2-1 (excluded from gating)",
        "value": moments.af_simo(2, 1),
        "target": 2.5**2 - 1.0,
        "rel_error": abs(moments.af_simo(2, 1) - (2.5**2 - 1.0)) / (2.5**2 - 1.0),
    }
    passed = all(c["pass"] for c in checks)
    return CriterionResult(
        cid="c06",
        name="closed-form AF anchors (SISO/SIMO reductions)",
        passed=passed,
        details={"checks": checks, "excluded": excluded},
    )


def _criterion_af_profile(config: ValidationConfig) -> CriterionResult:
    """AF vs cascade order at 2x2: monotonicity, scheme ordering, bound side."""
    settings = config.settings()
    rows = []
    issues = []
    for n in (2, 3, 4, 5, 6):
        w = moments.default_weights(n)
        cfg = _cfg(n, 2, 2, 10.0, 1.0)
        closed = {}
        mc = {}
        for scheme in Scheme:
            try:
                closed[scheme] = moments.amount_of_fading(scheme, cfg, w)
            except moments.NonPhysicalMomentError as exc:
                closed[scheme] = None
                issues.append(f"closed AF non-physical at n={n} {scheme.value}: {exc}")
            mc[scheme] = montecarlo.estimate_moments_af(scheme, cfg, settings).af
        rows.append({"n": n, "b1": w.b1, "b2": w.b2, "closed": closed, "mc": mc})

    def closed_series(scheme: Scheme) -> list:
        return [r["closed"][scheme] for r in rows]

    def mc_series(scheme: Scheme) -> list:
        return [r["mc"][scheme] for r in rows]

    increasing_ok = True
    for scheme in Scheme:
        cs = closed_series(scheme)
        if any(v is None for v in cs):
            increasing_ok = False
        else:
            increasing_ok = increasing_ok and all(
                cs[i] < cs[i + 1] for i in range(len(cs) - 1)
            )
        ms = [e.value for e in mc_series(scheme)]
        increasing_ok = increasing_ok and all(
            ms[i] < ms[i + 1] for i in range(len(ms) - 1)
        )
    ordering_ok = True
    bound_ok = True
    for r in rows:
        c_mrc, c_sc = r["closed"][Scheme.TAS_MRC], r["closed"][Scheme.TAS_SC]
        e_mrc, e_sc = r["mc"][Scheme.TAS_MRC], r["mc"][Scheme.TAS_SC]
        if c_mrc is None or c_sc is None:
            ordering_ok = False
        else:
            ordering_ok = ordering_ok and c_mrc < c_sc
            bound_ok = bound_ok and c_mrc <= _AF_LOWER_BOUND_MARGIN * e_mrc.value
            bound_ok = bound_ok and c_sc <= _AF_LOWER_BOUND_MARGIN * e_sc.value
        ordering_ok = ordering_ok and e_mrc.value < e_sc.value
        ordering_ok = ordering_ok and e_mrc.ci95_high < e_sc.ci95_low
    serializable_rows = [
        {
            "n": r["n"],
            "b1": r["b1"],
            "b2": r["b2"],
            "af_closed_mrc": r["closed"][Scheme.TAS_MRC],
            "af_closed_sc": r["closed"][Scheme.TAS_SC],
            "af_mc_mrc": r["mc"][Scheme.TAS_MRC].value,
            "af_mc_mrc_ci": [
                r["mc"][Scheme.TAS_MRC].ci95_low, r["mc"][Scheme.TAS_MRC].ci95_high
            ],
            "af_mc_sc": r["mc"][Scheme.TAS_SC].value,
            "af_mc_sc_ci": [
                r["mc"][Scheme.TAS_SC].ci95_low, r["mc"][Scheme.TAS_SC].ci95_high
            ],
        }
        for r in rows
    ]
    return CriterionResult(
        cid="c07",
        name="AF vs n profile at 2x2 (monotone, ordered, bound side)",
        passed=increasing_ok and ordering_ok and bound_ok,
        details={
            "increasing_ok": increasing_ok,
            "ordering_ok": ordering_ok,
            "lower_bound_ok": bound_ok,
            "issues": issues,
            "rows": serializable_rows,
        },
    )


def _criterion_moments_vs_oracle(config: ValidationConfig) -> CriterionResult:
    """Closed-form moments against quadrature of the exact model CDF."""
    rows = []
    exceed = 0
    for n in (2, 3, 4, 5, 6):
        w = moments.default_weights(n)
        cfg = _cfg(n, 2, 2, 10.0, 1.0)
        for scheme in Scheme:
            for order in (1, 2):
                if scheme is Scheme.TAS_MRC:
                    value = moments.moment_tas_mrc(order, cfg, w)
                else:
                    value = moments.moment_tas_sc(order, cfg, w)
                oracle = moments.moment_oracle(order, scheme, cfg)
                rel = abs(value - oracle) / oracle
                ok = rel <= _MOMENT_REL_TOL
                exceed += 0 if ok else 1
                rows.append(
                    {"scheme": scheme.value, "n": n, "order": order,
                     "closed_form": value, "oracle": oracle,
                     "rel_error": rel, "pass": ok}
                )
    allowed = int(_MOMENT_FAIL_FRACTION * len(rows))
    return CriterionResult(
        cid="c08",
        name="closed-form moments vs quadrature oracle (2x2)",
        passed=exceed <= allowed,
        details={
            "rel_tol": _MOMENT_REL_TOL,
            "points": len(rows),
            "points_exceeding": exceed,
            "allowed_exceeding": allowed,
            "rows": rows,
        },
    )


def _criterion_rayleigh_base_case(config: ValidationConfig) -> CriterionResult:
    """Degenerate 1x1, n=1 channel against the exact exponential CDF."""
    settings = config.settings()
    cfg = _cfg(1, 1, 1, 1.0, 1.0)
    grid = np.logspace(math.log10(0.01), math.log10(4.0), 20)
    estimates = montecarlo.empirical_cdf(Scheme.TAS_MRC, cfg, settings, grid)
    rows = []
    all_ok = True
    for g, est in zip(grid, estimates):
        exact = -math.expm1(-g / cfg.mean_snr)
        se = math.sqrt(exact * (1.0 - exact) / settings.trials)
        ok = abs(est.value - exact) <= _BASE_CASE_SIGMAS * se
        all_ok = all_ok and ok
        rows.append(
            {"gamma": float(g), "exact": exact, "empirical": est.value,
             "sigmas": abs(est.value - exact) / se if se > 0 else 0.0, "pass": ok}
        )
    return CriterionResult(
        cid="c09",
        name="Monte-Carlo base case vs exact exponential CDF",
        passed=all_ok,
        details={"sigma_budget": _BASE_CASE_SIGMAS, "rows": rows},
    )


def _criterion_determinism(config: ValidationConfig) -> CriterionResult:
    """Report bytes must not depend on the worker count."""
    probes = []
    for workers in (1, 2):
        probe_config = ValidationConfig(
            trials=config.determinism_trials,
            master_seed=config.master_seed,
            partition_width=config.partition_width,
            workers=workers,
            gamma_o=config.gamma_o,
            mrc_omega=config.mrc_omega,
            sc_omega=config.sc_omega,
            snr_grid_db=config.snr_grid_db,
            determinism_trials=config.determinism_trials,
        )
        probes.append(report_to_json(build_report(probe_config, include_determinism=False)))
    identical = probes[0] == probes[1]
    return CriterionResult(
        cid="c10",
        name="byte-identical reports across worker counts",
        passed=identical,
        details={
            "probe_trials": config.determinism_trials,
            "worker_counts": [1, 2],
            "identical": identical,
        },
    )


_CRITERIA = (
    _criterion_specfun_accuracy,
    _criterion_outage_vs_montecarlo,
    _criterion_required_snr_gaps,
    _criterion_diversity_slope,
    _criterion_asymptote_consistency,
    _criterion_af_anchors,
    _criterion_af_profile,
    _criterion_moments_vs_oracle,
    _criterion_rayleigh_base_case,
)


def build_report(config: ValidationConfig, include_determinism: bool = True) -> dict:
    """Run the validation suite and assemble the report dict.

    The report embeds the resolved scenario configuration but deliberately
    excludes execution knobs (worker count, timings) so that equal seeds
    give byte-identical serializations regardless of parallelism.
    """
    results = [criterion(config) for criterion in _CRITERIA]
    if include_determinism:
        results.append(_criterion_determinism(config))
    passed = sum(1 for r in results if r.passed)
    return {
        "config": {
            "trials": config.trials,
            "master_seed": config.master_seed,
            "gamma_o": config.gamma_o,
            "mrc_omega": config.mrc_omega,
            "sc_omega": config.sc_omega,
            "snr_grid_db": list(config.snr_grid_db),
            "weighting_coefficients": {
                str(n): list(pair) for n, pair in moments.CAPTION_COEFFS.items()
            },
            "determinism_probe_trials": config.determinism_trials,
        },
        "criteria": [
            {"id": r.cid, "name": r.name, "passed": r.passed, "details": r.details}
            for r in results
        ],
        "summary": {
            "criteria_total": len(results),
            "criteria_passed": passed,
            "all_passed": passed == len(results),
        },
    }


def report_to_json(report: dict) -> str:
    """Canonical serialization: sorted keys, round-trip floats."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"

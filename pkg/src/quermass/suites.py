"""Randomized verification suites.

Each suite draws seeded domains or fields, evaluates one family of
checks, and returns {"rows", "columns", "passed", "summary"}; the rows
serialize deterministically to CSV, so identical seeds give identical
bytes.  The command-line `verify` subcommand and the acceptance tests
both run these functions.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from quermass import conjecture, counterexample, cubic, deficits
from quermass.axisym import axial_minkowski_deficit
from quermass.config import thread_count
from quermass.grids import build_grid
from quermass.reporting import DEFICIT_COLUMNS

CUBIC_COLUMNS = ["lemma", "n", "seed", "eps_scale", "lhs", "rhs",
                 "slack_scale", "margin", "ratio"]


def _pmap(fn, items):
    workers = thread_count()
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- curvature-formula agreement (two mean-curvature routes) -------------------


def route_agreement_suite(count: int = 100, eps: float = 0.3, seed: int = 2024,
                          resolution: int = 64, L: int = 6,
                          tolerance: float = 1e-7) -> dict:
    grid = build_grid(3, resolution)

    def one(i):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            K = deficits.random_domain(3, eps, seed=seed + i, L=L, grid=grid)
            b = K.curvatures(check_routes=True)
        e, _ = K.eps_size()
        return {"lemma": "curvature_routes", "n": 3, "seed": seed + i,
                "eps_scale": e, "lhs": float(np.max(np.abs(b.H))),
                "rhs": float(np.max(np.abs(b.H_divergence))),
                "slack_scale": tolerance, "margin": tolerance - b.max_route_disagreement,
                "ratio": b.max_route_disagreement}
    rows = _pmap(one, range(count))
    worst = max(r["ratio"] for r in rows)
    return {"rows": rows, "columns": CUBIC_COLUMNS,
            "passed": worst <= tolerance,
            "summary": {"worst_disagreement": worst, "tolerance": tolerance}}


# -- gradient-vs-normal comparison ----------------------------------------------


def gradient_normal_suite(count: int = 100, eps: float = 0.1, seed: int = 3001,
                          resolution: int = 32) -> dict:
    grid = build_grid(3, resolution)

    def one(i):
        K = deficits.random_domain(3, eps, seed=seed + i, grid=grid)
        rep = K.gradient_normal_report()
        worst = max(v for k, v in rep.items() if k != "within_bound")
        return {"lemma": "grad_vs_normal", "n": 3, "seed": seed + i,
                "eps_scale": eps, "lhs": worst,
                "rhs": K.tol.deviation_ratio_bound, "slack_scale": 0.0,
                "margin": K.tol.deviation_ratio_bound - worst,
                "ratio": worst, "within": rep["within_bound"]}
    rows = _pmap(one, range(count))
    passed = all(r["within"] for r in rows)
    for r in rows:
        del r["within"]
    return {"rows": rows, "columns": CUBIC_COLUMNS, "passed": passed,
            "summary": {"worst_ratio": max(r["ratio"] for r in rows)}}


# -- Hessian eigenvalue interpolation bound --------------------------------------


def eigen_interpolation_suite(count: int = 1000, ns=(3, 4),
                              eps_scale: float = 0.1, seed: int = 4001,
                              resolution: int = 32, L: int = 12,
                              tolerance: float = 1e-7) -> dict:
    grid = build_grid(3, resolution)
    per_n = count // len(ns)
    jobs = [(n, i) for n in ns for i in range(per_n)]

    def one(job):
        n, i = job
        u = cubic.random_c1_field(n, eps_scale, seed=seed + i, L=L,
                                  grid=grid if n == 3 else None)
        rep = cubic.eigenvalue_interpolation_check(u)
        return {"lemma": "eigen_interpolation", "n": n, "seed": seed + i,
                "eps_scale": eps_scale, "lhs": rep["lhs"], "rhs": rep["rhs"],
                "slack_scale": rep["scale"], "margin": rep["margin"],
                "ratio": rep["margin"] / max(rep["scale"], 1e-300)}
    rows = _pmap(one, jobs)
    worst = min(r["margin"] for r in rows)
    return {"rows": rows, "columns": CUBIC_COLUMNS, "passed": worst >= -tolerance,
            "summary": {"worst_margin": worst, "tolerance": tolerance}}


# -- frequency-split slack ladder -------------------------------------------------


def frequency_split_suite(count: int = 300, eps_levels=(0.04, 0.02, 0.01),
                          seed: int = 5001, n: int = 3, lam: float | None = None,
                          resolution: int = 32, L: int = 12) -> dict:
    rows, summaries = [], {}
    passed = True
    for name, pair in (("unit_g", cubic.mean_curvature_pair(n)),
                       ("slope_g", cubic.volumetric_pair(n))):
        out = cubic.slack_ratio_ladder(n, pair, eps_levels=eps_levels,
                                       count=count, seed=seed, lam=lam,
                                       L=L, resolution=resolution)
        for r in out["rows"]:
            r["lemma"] = f"freq_split_{name}"
            rows.append(r)
        summaries[name] = out["mean_abs_ratio"]
        passed = passed and out["monotone"] and all(
            r["margin"] >= -1e-12 * max(1.0, abs(r["lhs"])) for r in out["rows"])
    return {"rows": rows, "columns": CUBIC_COLUMNS, "passed": passed,
            "summary": summaries}


# -- flat radial identity -----------------------------------------------------------


def radial_identity_suite(ns=(3, 4, 5), kappas=(10.0, 40.0),
                          eps_values=(0.1, 0.3), tolerance: float = 1e-10) -> dict:
    rows = []
    passed = True
    for n in ns:
        p = n - 3.0
        a_fn = lambda s, t, p=p: (1.0 + s) ** p / ((1.0 + s) ** 2 + t)
        for kappa in kappas:
            for eps in eps_values:
                bump = counterexample.make_bump(kappa, eps)
                exact = counterexample.radial_cubic_identity_check(bump, n)
                preset = counterexample.radial_cubic_identity_check(bump, n, a_fn)
                ok = abs(exact["difference"]) <= tolerance and preset["margin"] >= 0
                passed = passed and ok
                rows.append({"lemma": "radial_identity", "n": n, "seed": 0,
                             "eps_scale": eps, "lhs": preset["lhs"],
                             "rhs": preset["leading"],
                             "slack_scale": preset["remainder_scale"],
                             "margin": preset["margin"],
                             "ratio": exact["difference"]})
    worst_exact = max(abs(r["ratio"]) for r in rows)
    return {"rows": rows, "columns": CUBIC_COLUMNS, "passed": passed,
            "summary": {"worst_exact_case_residual": worst_exact}}


# -- polar slope estimate --------------------------------------------------------------


def pole_bound_suite(n: int = 3, seed: int = 6001, count: int = 20,
                     eps: float = 0.05) -> dict:
    from quermass.axisym import AxialProfile, pole_gradient_bound
    rows = []
    passed = True

    def record(profile, tag, seed_val):
        nonlocal passed
        rep = pole_gradient_bound(profile)
        c0 = profile.tol.pole_constant
        margin = min(rep["constants"][c0]["north_margin"],
                     rep["constants"][c0]["south_margin"])
        passed = passed and margin >= 0
        rows.append({"lemma": f"pole_bound_{tag}", "n": n, "seed": seed_val,
                     "eps_scale": eps, "lhs": rep["int_H_minus"],
                     "rhs": rep["theta0"], "slack_scale": c0,
                     "margin": margin, "ratio": rep["slack"]})

    record(AxialProfile.from_zonal_coeffs(n, np.zeros(2)), "sphere", 0)
    for i in range(count):
        K = deficits.random_domain(n if n > 3 else 4, eps, seed=seed + i)
        record(K.profile, "random", seed + i)
    bump = counterexample.make_bump(20.0, 0.3)
    dent = AxialProfile.from_callables(
        n, bump.depth, bump.slope, bump.slope_derivative,
        support=bump.radius, breakpoints=bump.breakpoints)
    record(dent, "dent", 0)
    return {"rows": rows, "columns": CUBIC_COLUMNS, "passed": passed,
            "summary": {"worst_margin": min(r["margin"] for r in rows)}}


# -- deficit suites ----------------------------------------------------------------------


def nuclear_deficit_suite(count: int = 200, eps: float = 0.05, seed: int = 7001,
                          ns=(3, 4), resolution: int = 32,
                          tolerance: float = 1e-8) -> dict:
    grid = build_grid(3, resolution)
    per_n = count // len(ns)
    jobs = [(n, i) for n in ns for i in range(per_n)]

    def one(job):
        n, i = job
        K = deficits.random_domain(n, eps, seed=seed + i,
                                   grid=grid if n == 3 else None)
        return deficits.nuclear_minkowski_deficit(K, seed=seed + i).row()
    rows = _pmap(one, jobs)
    worst = min(r["margin"] for r in rows)
    return {"rows": rows, "columns": DEFICIT_COLUMNS, "passed": worst >= -tolerance,
            "summary": {"worst_margin": worst}}


def axial_deficit_suite(count: int = 200, eps: float = 0.05, seed: int = 7501,
                        ns=(3, 4, 5), tolerance: float = 1e-8) -> dict:
    per_n = count // len(ns)
    jobs = [(n, i) for n in ns for i in range(per_n)]

    def one(job):
        n, i = job
        K = deficits.random_domain(n, eps, seed=seed + i, zonal=True)
        return axial_minkowski_deficit(K.profile, seed=seed + i).row()
    rows = _pmap(one, jobs)
    worst = min(r["margin"] for r in rows)
    return {"rows": rows, "columns": DEFICIT_COLUMNS, "passed": worst >= -tolerance,
            "summary": {"worst_margin": worst}}


def stability_suite(count: int = 200, eps: float = 0.05, seed: int = 8001,
                    n: int = 4, tolerance: float = 1e-8) -> dict:
    def one(i):
        K = deficits.random_domain(n, eps, seed=seed + i)
        rep = deficits.volumetric_minkowski_deficit(K, seed=seed + i)
        ratio = deficits.stability_ratio(K)
        row = rep.row()
        row["stability_ratio"] = ratio
        return row
    rows = _pmap(one, range(count))
    worst_margin = min(r["margin"] for r in rows)
    ratios = [r["stability_ratio"] for r in rows if math.isfinite(r["stability_ratio"])]
    min_ratio = min(ratios) if ratios else math.inf
    return {"rows": rows, "columns": DEFICIT_COLUMNS + ["stability_ratio"],
            "passed": worst_margin >= -tolerance and min_ratio > 0,
            "summary": {"worst_margin": worst_margin,
                        "empirical_stability_constant": min_ratio}}


# -- dented-sphere runs ----------------------------------------------------------------


DENT_COLUMNS = ["kappa", "q", "int_H_grid", "int_H_zonal", "eps_size"]
DENT_EXTRA_COLUMNS = DENT_COLUMNS + ["relative_gap", "packing_constant", "c1_norm"]


def dent_sweep_suite(eps: float = 0.3, kappas=(20.0, 40.0, 80.0, 160.0),
                     seed: int = 0, gap_tolerance: float = 1e-2) -> dict:
    recs = counterexample.sweep_total_mean_curvature(3, eps, kappas, seed,
                                                     method="both")
    rows = [{"kappa": r["kappa"], "q": r["count"],
             "int_H_grid": r["int_H_grid"], "int_H_zonal": r["int_H_zonal"],
             "eps_size": r["eps_size"], "relative_gap": r["relative_gap"],
             "packing_constant": r["packing_constant"], "c1_norm": r["c1_norm"]}
            for r in recs]
    fit = counterexample.affine_fit([r["kappa"] for r in rows],
                                    [r["int_H_zonal"] for r in rows])
    passed = (fit["slope"] < 0 and fit["r_squared"] >= 0.9
              and all(r["relative_gap"] <= gap_tolerance for r in rows)
              and all(r["c1_norm"] <= eps for r in rows))
    return {"rows": rows, "columns": DENT_EXTRA_COLUMNS, "passed": passed,
            "summary": {"fit": fit,
                        "worst_gap": max(r["relative_gap"] for r in rows)}}


def negative_total_curvature_suite(eps: float = 0.3, threshold: float = -1.0,
                                   kappa_start: float = 20.0,
                                   kappa_max: float = 1e5, seed: int = 0) -> dict:
    out = counterexample.find_negative_mean_curvature(
        3, eps, threshold=threshold, kappa_start=kappa_start,
        kappa_max=kappa_max, seed=seed)
    rows = [{"kappa": r["kappa"], "q": r["count"], "int_H_grid": "",
             "int_H_zonal": r["int_H_zonal"], "eps_size": r["eps_size"],
             "relative_gap": "", "packing_constant": r["packing_constant"],
             "c1_norm": r["c1_norm"]}
            for r in out["history"]]
    return {"rows": rows, "columns": DENT_EXTRA_COLUMNS, "passed": out["found"],
            "summary": {"kappa_star": out["kappa_star"], "int_H": out["int_H"]}}


# -- conjecture harness -------------------------------------------------------------------


CONJ_COLUMNS = ["n", "seed", "basis_cap", "best_ratio", "constraint_margin",
                "grad_inf", "conjectured_bound"]


def conjecture_suite(n3_cap: int = 12, n3_restarts: int = 12, seed: int = 9001,
                     levels=(8, 16, 32, 64)) -> dict:
    rows = []
    passed = True

    out2 = conjecture.maximize_ratio(2, basis_cap=8, restarts=4, seed=seed,
                                     iterations=120)
    rows.append({"n": 2, "seed": seed, "basis_cap": 8,
                 "best_ratio": out2["best"].ratio,
                 "constraint_margin": out2["best"].constraint_margin,
                 "grad_inf": out2["best"].grad_norm_inf,
                 "conjectured_bound": conjecture.conjectured_bound(2)})
    passed = passed and abs(out2["best"].ratio) <= 1e-8
    passed = passed and out2["best"].meta["gradient_check_max_rel"] <= 1e-5

    out3 = conjecture.maximize_ratio(3, basis_cap=n3_cap, restarts=n3_restarts,
                                     seed=seed + 1)
    best3 = out3["best"]
    rows.append({"n": 3, "seed": seed + 1, "basis_cap": n3_cap,
                 "best_ratio": best3.ratio,
                 "constraint_margin": best3.constraint_margin,
                 "grad_inf": best3.grad_norm_inf,
                 "conjectured_bound": conjecture.conjectured_bound(3)})
    passed = passed and best3.meta["gradient_check_max_rel"] <= 1e-5
    # the trivial bound must hold for every feasible candidate
    backend3 = out3["backend"]
    trivial_ok = all(
        r["ratio"] <= 1.0 + 1e-8 for r in out3["rows"] if r["feasible"])
    passed = passed and trivial_ok
    passed = passed and conjecture.trivial_bound_margin(backend3, best3.coeffs) >= -1e-8

    ladder = conjecture.green_ladder(4, levels=levels)
    for lev, r, g in zip(ladder["levels"], ladder["ratios"], ladder["grad_inf"]):
        rows.append({"n": 4, "seed": seed, "basis_cap": lev, "best_ratio": r,
                     "constraint_margin": 0.0, "grad_inf": g,
                     "conjectured_bound": conjecture.conjectured_bound(4)})
    passed = passed and ladder["min_ratio"] > 0
    passed = passed and ladder["grad_nonincreasing_within_10pct"]

    return {"rows": rows, "columns": CONJ_COLUMNS, "passed": passed,
            "summary": {"n2_best": out2["best"].ratio, "n3_best": best3.ratio,
                        "green_min_ratio": ladder["min_ratio"],
                        "gradient_check_max": max(
                            out2["best"].meta["gradient_check_max_rel"],
                            best3.meta["gradient_check_max_rel"])}}

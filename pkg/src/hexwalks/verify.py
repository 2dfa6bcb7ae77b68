"""Desk-scale invariant suites, used by ``hexwalks verify``."""
from __future__ import annotations

import itertools
import time
from fractions import Fraction

from . import continuum, limits
from .hahn import HahnParams, eval_unnorm, norm_sq, weight
from .kernel import (KernelContext, c_n, gram_matrix, hahn_kernel, kappa_sq,
                     partition_via_kernel, uncorrected_kappa_sq)
from .model import HexagonSpec, lgv_partition, macmahon
from .oracle import EnumerationBudget, enumerate_configurations, kernel_report
from .sampler import SeededRng, one_point_stats, sample, sequential_probability, to_lozenges

SUITES = ("orthogonality", "kernel", "macmahon", "hermite", "limits", "sampler")

KERNEL_SPECS = ((1, 1, 1), (1, 1, 2), (2, 1, 1), (2, 2, 2), (2, 2, 3), (3, 2, 2))


def coefficient_note() -> dict:
    """Regression record for the uncorrected kernel coefficient on the (1,1,1) diagonal."""
    ctx = KernelContext(HexagonSpec(1, 1, 1))
    corrected = hahn_kernel(ctx, 1, 0, 1, 0).value
    uncorrected = hahn_kernel(ctx, 1, 0, 1, 0, coefficient=uncorrected_kappa_sq).value
    return {
        "uncorrected_coefficient_diagonal": uncorrected,
        "corrected_coefficient_diagonal": corrected,
        "enumerated_diagonal": 0.5,
        "note": "uncorrected coefficient carries an extra factor "
                "sqrt((a+b+c-s-1-n)!/(a+b+c-1-n)!); corrected form equals 1 at r=s",
    }


def suite_orthogonality(max_n: int = 15, max_ab: int = 4) -> dict:
    failures = []
    for alpha, beta in itertools.product(range(max_ab + 1), repeat=2):
        for big_n in range(max_n + 1):
            p = HahnParams(alpha, beta, big_n)
            w = [weight(p, x) for x in range(big_n + 1)]
            q = [[eval_unnorm(p, n, x) for x in range(big_n + 1)] for n in range(big_n + 1)]
            for n in range(big_n + 1):
                for m in range(n, big_n + 1):
                    s = sum((q[n][x] * q[m][x] * w[x] for x in range(big_n + 1)), Fraction(0))
                    want = norm_sq(p, n) if n == m else 0
                    if s != want:
                        failures.append([alpha, beta, big_n, n, m])
    return {"passed": not failures, "failures": failures[:20]}


def suite_macmahon(max_enum: int = 4, max_exact: int = 6) -> dict:
    mismatches, enumerated = [], 0
    for a, b, c in itertools.product(range(1, max_exact + 1), repeat=3):
        if c < b:
            continue
        spec = HexagonSpec(a, b, c)
        z = macmahon(a, b, c)
        routes = {"product": z, "lgv": lgv_partition(spec),
                  "kernel": partition_via_kernel(KernelContext(spec))}
        if max(a, b, c) <= max_enum and z <= 10**6:
            routes["enumeration"] = Fraction(enumerate_configurations(spec, EnumerationBudget()))
            enumerated += 1
        if len(set(routes.values())) != 1:
            mismatches.append({"abc": [a, b, c], **{k: str(v) for k, v in routes.items()}})
    return {"passed": not mismatches, "enumerated_specs": enumerated, "mismatches": mismatches}


def gram_failures(max_abc: int = 5) -> list[list[int]]:
    """(a, b, c, r) for which the Gram matrix on line r is not diag(1/C_n)."""
    bad = []
    for a, b, c in itertools.product(range(1, max_abc + 1), repeat=3):
        if c < b:
            continue
        spec = HexagonSpec(a, b, c)
        ctx = KernelContext(spec)
        for r in spec.interior_lines():
            g = gram_matrix(ctx, r)
            if any(g[n][m] != (1 / c_n(ctx, n) if n == m else 0)
                   for n in range(a) for m in range(a)):
                bad.append([a, b, c, r])
    return bad


def suite_kernel(max_points: int = 3, tol: float = 1e-10) -> dict:
    reports, ok = [], True
    for abc in KERNEL_SPECS:
        spec = HexagonSpec(*abc)
        rep = kernel_report(spec, max_points)
        ok &= rep["max_abs_error_hahn"] < tol and rep["generic_exact"]
        ok &= all(kappa_sq(spec, n, r, r) == 1 for n in range(spec.a) for r in spec.interior_lines())
        reports.append(rep)
    gram_bad = gram_failures()
    return {"passed": bool(ok) and not gram_bad, "reports": reports, "gram_failures": gram_bad,
            "coefficient_regression": coefficient_note()}


def suite_hermite(tol: float = 1e-6) -> dict:
    worst = 0.0
    for n, dt, x, y in itertools.product((1, 2, 5), (-1, -0.3, 0, 0.5), (-1, 0, 0.7), (-1, 0, 0.7)):
        v1 = continuum.ext_hermite(n, dt, x, 0.0, y)
        v2 = continuum.ext_hermite_series(n, dt, x, 0.0, y)
        v3 = continuum.ext_hermite_contour(n, dt, x, 0.0, y)
        worst = max(worst, abs(v1 - v2), abs(v1 - v3), abs(v2 - v3))
    worst_bm = 0.0
    for n, tr, ts, x, y in itertools.product((1, 3), (-0.5, 0, 0.8), (-0.5, 0, 0.8),
                                              (-1, 0, 1.3), (-1, 0, 1.3)):
        worst_bm = max(worst_bm, abs(continuum.transformed_kbm(n, 1.0, tr, x, ts, y)
                                     - continuum.ext_hermite(n, tr, x, ts, y)))
    return {"passed": worst < tol and worst_bm < 1e-10,
            "three_way_max_diff": worst, "transformation_max_diff": worst_bm}


def suite_limits() -> dict:
    reps = [limits.hahn_hermite_report(t) for t in (0.0, 0.5)]
    reps += [limits.bm_limit_report(a) for a in (1, 2)]
    ok = all(r.monotone and r.terminal_error < 0.05 for r in reps)
    return {"passed": ok, "reports": [r.__dict__ for r in reps]}


def suite_sampler(n_samples: int = 100_000, seed: int = 7) -> dict:
    from scipy import stats

    spec = HexagonSpec(2, 2, 2)
    z = macmahon(2, 2, 2)
    exact_ok = True

    def visit(cfg):
        nonlocal exact_ok
        exact_ok &= sequential_probability(spec, cfg) == 1 / z
    enumerate_configurations(spec, visitor=visit)

    rng_small, rng_main = SeededRng(seed).split(2)
    small = HexagonSpec(1, 1, 2)
    counts: dict = {}
    for _ in range(n_samples):
        lines = sample(small, rng_small).lines
        counts[lines] = counts.get(lines, 0) + 1
    observed = [counts[k] for k in sorted(counts)]
    observed += [0] * (int(macmahon(1, 1, 2)) - len(observed))
    p_value = float(stats.chisquare(observed).pvalue)

    configs = [sample(spec, rng_main) for _ in range(n_samples)]
    max_z = max(abs(row["z_score"]) for row in one_point_stats(spec, configs))
    lozenge_ok = all(to_lozenges(spec, cfg).counts() == (4, 4, 4) for cfg in configs[:2000])
    return {"passed": exact_ok and p_value > 1e-3 and max_z < 4 and lozenge_ok,
            "sequential_exact": exact_ok, "chi2_p_value": p_value, "max_one_point_z": max_z,
            "lozenge_counts_ok": lozenge_ok}


def run(suite: str) -> dict:
    names = SUITES if suite == "all" else (suite,)
    if any(n not in SUITES for n in names):
        raise KeyError(suite)
    out = {}
    for name in names:
        t0 = time.perf_counter()
        res = globals()[f"suite_{name}"]()
        res["seconds"] = round(time.perf_counter() - t0, 3)
        out[name] = res
    if "kernel" not in out:
        out["coefficient_regression"] = coefficient_note()
    return out

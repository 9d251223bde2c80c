"""Self-contained oracle suites cross-checking the closed-form fusion math
against independent numerical routes (adaptive quadrature, vector
projection, Monte Carlo, grid search)."""

from __future__ import annotations

import math
import time

import numpy as np
from scipy.integrate import quad

from .localization import (BearingEstimate, closest_point_on_line,
                           expected_closest_point, fuse_bearings, oracle_fuse,
                           quadrature_objective, sector_coeffs)


def random_theta_alpha(rng, n):
    theta = rng.uniform(0.0, 2.0 * math.pi, size=n)
    alpha = rng.uniform(1e-3, math.pi / 4.0, size=n)
    return theta, alpha


def check_coeff_quadrature(n_pairs: int = 200, tol: float = 1e-9, seed: int = 7):
    """Closed-form coefficients vs adaptive quadrature of the raw
    projection-weight integrands 1/(1+tan^2), tan/(1+tan^2), tan^2/(1+tan^2)."""
    rng = np.random.default_rng(seed)
    theta, alpha = random_theta_alpha(rng, n_pairs)
    worst = 0.0
    for th, al in zip(theta, alpha):
        f0 = lambda e: 1.0 / (1.0 + math.tan(th + e) ** 2)
        f1 = lambda e: math.tan(th + e) / (1.0 + math.tan(th + e) ** 2)
        f2 = lambda e: math.tan(th + e) ** 2 / (1.0 + math.tan(th + e) ** 2)
        q0 = quad(f0, -al, al, limit=200)[0]
        q1 = quad(f1, -al, al, limit=200)[0]
        q2 = quad(f2, -al, al, limit=200)[0]
        c = sector_coeffs(th, al)
        worst = max(worst, abs(q0 - c.a0), abs(q1 - c.a1), abs(q2 - c.a2))
    return worst < tol, f"max |closed-form - quadrature| = {worst:.3e} over {n_pairs} pairs"


def check_projection(n: int = 2000, tol: float = 1e-12, seed: int = 11):
    """Tangent closed form vs the vector-projection formula."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        anchor = rng.uniform(-100.0, 100.0, size=2)
        target = rng.uniform(-100.0, 100.0, size=2)
        ang = rng.uniform(0.0, 2.0 * math.pi)
        if abs(math.cos(ang)) < 1e-9:
            continue
        got = closest_point_on_line(anchor, ang, target)
        u = np.array([math.cos(ang), math.sin(ang)])
        want = anchor + np.dot(target - anchor, u) * u
        worst = max(worst, float(np.max(np.abs(got - want))))
    return worst < tol, f"max deviation {worst:.3e} m over {n} instances"


def check_expectation_mc(n_instances: int = 10, n_draws: int = 100_000, seed: int = 13):
    """Closed-form expected closest point vs Monte Carlo over the sector."""
    rng = np.random.default_rng(seed)
    failures = 0
    worst_z = 0.0
    for _ in range(n_instances):
        anchor = rng.uniform(-50.0, 50.0, size=2)
        target = rng.uniform(-50.0, 50.0, size=2)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        alpha = rng.uniform(0.01, math.pi / 4.0)
        br = BearingEstimate(x=anchor[0], y=anchor[1], theta=theta, alpha=alpha)
        eps = rng.uniform(-alpha, alpha, size=n_draws)
        a = np.tan(br.theta + eps)
        denom = 1.0 + a * a
        xs = (target[0] + a * target[1] - a * anchor[1] + a * a * anchor[0]) / denom
        ys = (a * target[0] + a * a * target[1] + anchor[1] - a * anchor[0]) / denom
        want = expected_closest_point(target, br)
        for samples, w in ((xs, want[0]), (ys, want[1])):
            se = samples.std(ddof=1) / math.sqrt(n_draws)
            z = abs(samples.mean() - w) / max(se, 1e-15)
            worst_z = max(worst_z, z)
            if z > 3.0:
                failures += 1
    return failures == 0, (f"worst |mean - closed form| = {worst_z:.2f} standard errors "
                           f"({n_instances} instances x {n_draws} draws)")


def random_bearings(rng, n):
    out = []
    for _ in range(n):
        out.append(BearingEstimate(x=float(rng.uniform(-50, 50)),
                                   y=float(rng.uniform(-50, 50)),
                                   theta=float(rng.uniform(0, 2 * math.pi)),
                                   alpha=float(rng.uniform(0.01, math.pi / 4.0))))
    return out


def fd_gradient(point, bearings, h: float = 1e-6):
    gx = (quadrature_objective((point[0] + h, point[1]), bearings)
          - quadrature_objective((point[0] - h, point[1]), bearings)) / (2 * h)
    gy = (quadrature_objective((point[0], point[1] + h), bearings)
          - quadrature_objective((point[0], point[1] - h), bearings)) / (2 * h)
    return math.hypot(gx, gy)


def check_fusion_vs_oracle(n_instances: int = 25, tol: float = 1e-3, seed: int = 17):
    """Closed-form fusion vs grid-plus-refinement minimization, with a
    finite-difference gradient check at the solution."""
    rng = np.random.default_rng(seed)
    worst_gap = 0.0
    worst_grad = 0.0
    for _ in range(n_instances):
        bearings = random_bearings(rng, int(rng.integers(1, 21)))
        solved = fuse_bearings(bearings)
        searched = oracle_fuse(bearings)
        worst_gap = max(worst_gap, float(np.max(np.abs(solved - searched))))
        scale = max(1.0, quadrature_objective(solved, bearings))
        worst_grad = max(worst_grad, fd_gradient(solved, bearings) / scale)
    ok = worst_gap < tol and worst_grad < 1e-6
    return ok, (f"max |solve - search| = {worst_gap:.2e} m, "
                f"max relative FD gradient = {worst_grad:.2e} over {n_instances} instances")


def run_suites(full: bool = False):
    """Run all oracle suites; returns list of (name, passed, detail)."""
    sizes = {
        "coeff_pairs": 1000 if full else 200,
        "projections": 10_000 if full else 2000,
        "mc_instances": 50 if full else 10,
        "mc_draws": 1_000_000 if full else 100_000,
        "fusion_instances": 200 if full else 25,
    }
    suites = [
        ("lemma-coefficient quadrature",
         lambda: check_coeff_quadrature(sizes["coeff_pairs"])),
        ("closest-point projection",
         lambda: check_projection(sizes["projections"])),
        ("expected-point Monte Carlo",
         lambda: check_expectation_mc(sizes["mc_instances"], sizes["mc_draws"])),
        ("fusion vs numerical search",
         lambda: check_fusion_vs_oracle(sizes["fusion_instances"])),
    ]
    results = []
    for name, fn in suites:
        t0 = time.perf_counter()
        ok, detail = fn()
        results.append((name, ok, f"{detail} [{time.perf_counter() - t0:.1f}s]"))
    return results

"""Acceptance criteria, one test each.  Every test prints a single
``ACCEPTANCE <n> PASS|FAIL`` line (shown even under output capture) before
asserting, and checks its own runtime budget."""

import itertools
import math
import time

import numpy as np
import pytest

from hardylab import constants
from hardylab.measure import StepProfile, dominates, hardy_littlewood_bound, pseudo_rearrangement
from hardylab.radial import Domain
from hardylab.special import find_first_zero, sobolev_profile, sobolev_profile_derivative, spectral_constants
from hardylab.symmetrize import radial_field, random_field, symmetrize
from hardylab.varmin import (
    adjudicate_thm1,
    adjudicate_thm4,
    best_constant_search,
    disk_dirichlet_eigenvalue,
    linear_constraint_profile,
    min_linear_constraint,
    min_weighted_rayleigh,
    truncated_extremal_quotient,
)
from hardylab.verify import case_prop_log

B3 = Domain.ball(3)


@pytest.fixture
def announce(capsys):
    def _announce(number, title, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        assert ok, detail

    return _announce


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_01_v0(announce):
    def root():
        return find_first_zero(sobolev_profile, (1.0, 2.0), sobolev_profile_derivative)

    v0 = root()
    # best of several runs, so a cold cache or scheduler hiccup does not count
    elapsed = min(timed(root)[1] for _ in range(20))
    j01 = spectral_constants().j01
    trunc = math.floor(v0 * 1e4) / 1e4
    rel = abs(v0 - j01**2 / 4) / v0
    ok = trunc == 1.4457 and rel <= 1e-12 and elapsed < 1e-3
    announce(1, "V0 root", ok, f"V0={v0:.15f} (4 dp: {trunc}), |V0-j01^2/4|/V0={rel:.1e}, {elapsed * 1e3:.3f} ms")


def test_02_sobolev_reduction(announce):
    def run():
        v0 = spectral_constants().v0
        mu0 = min_weighted_rayleigh(v0, 8192).eigenvalue
        scal = {R: min_weighted_rayleigh(R, 8192).eigenvalue * R for R in (0.5, 1.0, 2.0, 4.0)}
        return v0, mu0, scal

    (v0, mu0, scal), elapsed = timed(run)
    worst = max(abs(x / v0 - 1) for x in scal.values())
    ok = abs(mu0 - 1) <= 1e-3 and worst <= 1e-3 and elapsed < 2.0
    announce(2, "Sobolev reduction", ok, f"mu(V0)-1={mu0 - 1:.2e}, max|mu(R)R/V0-1|={worst:.2e}, {elapsed:.2f} s")


def test_03_brezis_vazquez(announce):
    res, elapsed = timed(lambda: disk_dirichlet_eigenvalue(8192))
    lam = spectral_constants().lambda2
    rel = abs(res.eigenvalue - lam) / lam
    ok = rel <= 1e-3 and abs(lam - 5.7832) < 5e-5 and elapsed < 2.0
    announce(3, "disk eigenvalue", ok, f"lambda={res.eigenvalue:.8f} vs j01^2={lam:.8f}, rel={rel:.2e}, {elapsed:.2f} s")


def test_04_thm2_identities(announce):
    def run():
        worst = {"pointwise": 0.0, "constraint": 0.0, "energy": 0.0}
        for n in (3, 4, 5):
            omega = Domain.ball(n).omega_n
            for p in (1.0, n / (n - 1.0), 2.0):
                res = min_linear_constraint(n, p, 8192)
                exact = linear_constraint_profile(n, p, res.minimizer.grid)
                pw = np.max(np.abs(res.minimizer.values - exact)) / np.max(np.abs(exact))
                target = n * omega / (2 * math.pi)
                worst["pointwise"] = max(worst["pointwise"], pw)
                worst["constraint"] = max(worst["constraint"], abs(res.constraint_value - 1))
                worst["energy"] = max(worst["energy"], abs(res.energy - target) / target)
        return worst

    worst, elapsed = timed(run)
    ok = worst["pointwise"] <= 1e-4 and worst["constraint"] <= 1e-8 and worst["energy"] <= 1e-4 and elapsed < 5
    detail = ", ".join(f"{k}={v:.1e}" for k, v in worst.items())
    announce(4, "constrained minimiser", ok, f"{detail} over 9 (N, p), {elapsed:.2f} s")


def test_05_best_constants(announce):
    def run():
        gaps = {"thm1": best_constant_search("thm1", B3, 8192).rel_gap}
        for p in (1.0, 1.5, 2.0, 4.0):
            gaps[f"thm2 p={p:g}"] = best_constant_search("thm2", B3, 8192, p).rel_gap
        return gaps, adjudicate_thm1(B3, 8192)

    (gaps, adj), elapsed = timed(run)
    ok = max(gaps.values()) <= 1e-2 and adj.winner == "lorentz_reading" and elapsed < 30
    readings = ", ".join(f"{k}={v:.6f}" for k, v in adj.candidates.items())
    announce(5, "variational constants", ok,
             f"max rel gap={max(gaps.values()):.1e}; thm1 computed {adj.computed:.6f} -> {adj.winner} "
             f"(printed readings {readings}), {elapsed:.2f} s")


def test_06_thm4_adjudication(announce):
    adj, elapsed = timed(lambda: adjudicate_thm4(B3, 8192))
    text, stmt = constants.thm4_constants(B3)
    matches = [k for k, e in adj.rel_errors.items() if e <= 1e-2]
    ok = len(matches) == 1 and adj.winner == "thm4_text" and elapsed < 30
    announce(6, "q=1 constant adjudication", ok,
             f"infimum {adj.computed:.6f}; thm4_text={text:.5f} (rel {adj.rel_errors['thm4_text']:.1e}), "
             f"thm4_stmt={stmt:.5f} (rel {adj.rel_errors['thm4_stmt']:.1e}); winner={adj.winner} "
             f"= (1/(4|Omega|))(N/(N-1))^2, {elapsed:.2f} s")


def test_07_log_weight(announce):
    reps, elapsed = timed(lambda: case_prop_log(Domain(3, constants.prop_log_volume(3)), 8192, 1e-6, 0))
    ident, ineq = reps
    ok = ident.passed and ineq.passed and elapsed < 5
    announce(7, "log-weight inequality", ok,
             f"identity defect={ident.computed - 1:.1e}, min normalized gap={ineq.params['lhs']:.3e} "
             f"on 20 profiles, {elapsed:.2f} s")


def test_08_symmetrization(announce):
    def run():
        rng = np.random.default_rng(0)
        dom = Domain(3, 8.0)
        stats = {"dominates": 0, "equimeasurable": 0, "lorentz": 0, "pairing": 0.0, "slack": math.inf}
        for _ in range(50):
            res = symmetrize(random_field(rng, n=64), dom)
            stats["dominates"] += dominates(res.F, res.f0)
            stats["equimeasurable"] += sorted(res.fbar.values.tolist()) == sorted(res.f0.values.tolist())
            stats["lorentz"] += res.lorentz_u <= res.lorentz_ubar
            stats["pairing"] = max(stats["pairing"], res.pairing_rel_err)
            stats["slack"] = min(stats["slack"], res.lorentz_ubar / res.lorentz_u - 1)
        fixed = 0.0
        for u in (lambda r: 1 - r, lambda r: (1 - r) ** 2):
            res = symmetrize(radial_field(u, B3, 256), B3)
            ref = u(res.ubar.grid)
            fixed = max(fixed, float(np.max(np.abs(res.ubar.values - ref)) / np.max(ref)))
        return stats, fixed

    (stats, fixed), elapsed = timed(run)
    ok = (stats["dominates"] == stats["equimeasurable"] == stats["lorentz"] == 50
          and stats["pairing"] <= 1e-6 and fixed <= 1e-3 and elapsed < 10)
    announce(8, "symmetrization pipeline", ok,
             f"50/50 fields: F<f0 {stats['dominates']}, equimeasurable {stats['equimeasurable']}, "
             f"||u||<=||ubar|| {stats['lorentz']} (min slack {stats['slack']:.3f}), "
             f"pairing err {stats['pairing']:.1e}; radial fixed point err {fixed:.1e}, {elapsed:.2f} s")


def test_09_rearrangement_oracles(announce):
    def run():
        rng = np.random.default_rng(9)
        checked = 0
        for n in range(1, 8):
            for _ in range(4):
                # dyadic values keep every sum exact in floating point
                f0 = np.sort(rng.integers(0, 9, n) / 4.0)[::-1]
                psi = rng.integers(-8, 9, n) / 8.0
                brute = max(float(np.dot(perm, psi)) for perm in itertools.permutations(f0))
                fb = pseudo_rearrangement(StepProfile.uniform(f0), StepProfile.uniform(psi))
                hl = hardy_littlewood_bound(StepProfile.uniform(f0), StepProfile.uniform(psi))
                if float(np.dot(fb.values, psi)) != brute or hl != brute:
                    return checked, False
                checked += 1
        return checked, True

    (checked, exact), elapsed = timed(run)
    ok = exact and elapsed < 5
    announce(9, "rearrangement oracles", ok, f"{checked} cases n<=7 equal brute-force maxima exactly, {elapsed:.2f} s")


def test_10_non_attainment(announce):
    res, elapsed = timed(lambda: [truncated_extremal_quotient(3, d, 8192) for d in (1e-2, 1e-3, 1e-4)])
    q = [r.quotient for r in res]
    sharp = res[0].sharp
    ok = all(x > sharp for x in q) and q[0] > q[1] > q[2] and elapsed < 10
    announce(10, "non-attainment trend", ok,
             "quotient/sharp = " + ", ".join(f"{r.quotient / sharp:.4f} (delta={r.delta:g})" for r in res)
             + f", {elapsed:.2f} s")

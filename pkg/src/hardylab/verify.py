"""Named verification cases.  Each returns a list of ``VerificationReport``."""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.integrate import trapezoid

from . import constants, varmin
from .errors import HardylabError, InvalidArgumentError
from .radial import (
    Domain,
    RadialProfile,
    graded_grid,
    hardy_gap,
    log_transform,
    weighted_integral,
)
from .report import VerificationReport
from .special import sobolev_profile, spectral_constants

CASES = ("bv", "hardy", "prop_log", "sobolev_disk", "thm1", "thm2", "thm4", "thm5")

DEFAULT_TOL = {
    "sobolev_disk": 1e-3,
    "bv": 1e-3,
    "thm1": 1e-2,
    "thm2": 1e-4,
    "thm4": 1e-2,
    "thm5": 1e-2,
    "prop_log": 1e-6,
    "hardy": 1e-6,
}
CONSTRAINT_TOL = 1e-8
SEARCH_TOL = 1e-2


def _base(dom: Domain, grid: int) -> dict:
    return {"N": dom.dim, "volume": dom.volume, "grid": grid}


def case_sobolev_disk(dom, grid, tol, seed, p=None):
    v0 = spectral_constants().v0
    eig = varmin.min_weighted_rayleigh(v0, grid)
    out = [VerificationReport.compare("sobolev_disk/mu_at_v0", {"grid": grid, "R": v0}, eig.eigenvalue, 1.0, tol)]
    vec = eig.eigenvector
    ref = sobolev_profile(vec.grid)
    peak = np.max(np.abs(vec.values))
    shape = vec.values / peak * np.sign(vec.values[0])
    err = float(np.max(np.abs(shape - ref / np.max(np.abs(ref)))))
    out.append(VerificationReport.compare(
        "sobolev_disk/eigenvector", {"grid": grid}, 1.0 + err, 1.0, tol, "peak-normalized max deviation from J0(2 sqrt r)"
    ))
    for R in (0.5, 1.0, 2.0, 4.0):
        mu = varmin.min_weighted_rayleigh(R, grid).eigenvalue
        out.append(VerificationReport.compare(f"sobolev_disk/scaling_R={R:g}", {"grid": grid, "R": R}, mu * R, v0, tol))
    return out


def case_bv(dom, grid, tol, seed, p=None):
    lam = spectral_constants().lambda2
    out = [VerificationReport.compare(
        "bv/disk_eigenvalue", {"grid": grid}, varmin.disk_dirichlet_eigenvalue(grid).eigenvalue, lam, tol
    )]
    res = varmin.best_constant_search("brezis_vazquez", dom, grid, seed=seed)
    out.append(VerificationReport.compare(
        "bv/search", _base(dom, grid), res.value, constants.brezis_vazquez(dom), max(tol, SEARCH_TOL),
        "Lambda_2 / R^2",
    ))
    return out


def _thm2_reports(dom, grid, tol, seed, p):
    n = dom.dim
    params = {"N": n, "p": p, "grid": grid}
    tag = f"thm2/N={n},p={p:g}"
    res = varmin.min_linear_constraint(n, p, grid)
    r = res.minimizer.grid
    exact = varmin.linear_constraint_profile(n, p, r)
    err = float(np.max(np.abs(res.minimizer.values - exact)) / np.max(np.abs(exact)))
    target = n * dom.omega_n / (2 * math.pi)
    search = varmin.best_constant_search("thm2", dom, grid, p, seed=seed)
    return [
        VerificationReport.compare(f"{tag}/pointwise", params, 1.0 + err, 1.0, tol, "peak-normalized max deviation"),
        VerificationReport.compare(f"{tag}/constraint", params, res.constraint_value, 1.0, CONSTRAINT_TOL),
        VerificationReport.compare(f"{tag}/energy", params, res.energy, target, tol, "N omega_N / 2 pi"),
        VerificationReport.compare(
            f"{tag}/search", {**params, "volume": dom.volume}, search.value, constants.thm2_constant(dom, p),
            SEARCH_TOL,
        ),
    ]


def case_thm2(dom, grid, tol, seed, p=None):
    n = dom.dim
    ps = [p] if p is not None else [1.0, n / (n - 1.0), 2.0]
    return [rep for q in ps for rep in _thm2_reports(dom, grid, tol, seed, q)]


def case_thm1(dom, grid, tol, seed, p=None):
    res = varmin.best_constant_search("thm1", dom, grid, seed=seed)
    adj = varmin.adjudicate_thm1(dom, grid, tol, seed)
    out = [VerificationReport.compare(
        "thm1/search", _base(dom, grid), res.value, constants.thm1_constant(dom), tol,
        "Lorentz L(2N/(N-1),2) remainder",
    )]
    wres = varmin.best_constant_search("thm1_weighted", dom, grid, seed=seed)
    out.append(VerificationReport.compare(
        "thm1/search_weighted", _base(dom, grid), wres.value, constants.thm1_weighted_constant(dom), tol,
        "remainder ∫u²/|x|",
    ))
    out.append(_adjudication_report("thm1/adjudication", dom, grid, adj, tol))
    return out


def _adjudication_report(case_id, dom, grid, adj, tol):
    nearest = min(adj.rel_errors, key=adj.rel_errors.get)
    name = adj.winner or nearest
    params = {**_base(dom, grid), **{f"candidate_{k}": v for k, v in adj.candidates.items()}}
    if adj.winner is None:
        notes = "no unique match; nearest=" + nearest
        rep = VerificationReport.compare(case_id, params, adj.computed, adj.candidates[name], tol, notes)
        rep.passed = False
        return rep
    return VerificationReport.compare(case_id, params, adj.computed, adj.candidates[name], tol, "winner=" + name)


def case_thm4(dom, grid, tol, seed, p=None):
    adj = varmin.adjudicate_thm4(dom, grid, tol, seed)
    return [_adjudication_report("thm4/adjudication", dom, grid, adj, tol)]


def case_thm5(dom, grid, tol, seed, p=None):
    if p is None:
        lo, hi = constants.thm5_range(dom.dim)
        p = 0.5 * (lo + hi)
    ref = constants.thm5_constant(dom, p)
    res = varmin.best_constant_search("thm5", dom, grid, p, seed=seed)
    return [VerificationReport.compare(
        "thm5/search", {**_base(dom, grid), "p": p, "alpha": constants.lorentz_alpha(dom.dim, p)}, res.value, ref, tol
    )]


def prop_log_family(rng: np.random.Generator, count: int = 20):
    """Admissible profiles v = r^k (1/e - r)(1 + c1 r + c2 r²), k in {1, 2}, with v and v'."""
    e1 = math.exp(-1.0)
    out = []
    for i in range(count):
        k = 1 + i % 2
        c1, c2 = rng.uniform(-1.0, 1.0, 2)

        def v(r, k=k, c1=c1, c2=c2):
            return r**k * (e1 - r) * (1 + c1 * r + c2 * r * r)

        def dv(r, k=k, c1=c1, c2=c2):
            poly = 1 + c1 * r + c2 * r * r
            return (k * r ** (k - 1) * (e1 - r) - r**k) * poly + r**k * (e1 - r) * (c1 + 2 * c2 * r)

        out.append((v, dv))
    return out


def case_prop_log(dom, grid, tol, seed, p=None):
    n = dom.dim
    rng = np.random.default_rng(seed)
    e1 = math.exp(-1.0)
    r = graded_grid(e1, grid, 1e-9)
    ball = Domain.ball(n, e1)
    worst_ident = 0.0
    worst_gap = math.inf
    for v, dv in prop_log_family(rng):
        vr, dvr = v(r), dv(r)
        vr[-1] = 0.0
        lhs = float(trapezoid(vr * dvr * np.log(r), r))
        rhs = -0.5 * float(trapezoid(vr * vr / r, r))
        worst_ident = max(worst_ident, abs(lhs - rhs) / abs(rhs))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            u = log_transform(RadialProfile(r, vr), n)
        w = RadialProfile(r, u.values**2 / np.log(r) ** 2)
        gap = hardy_gap(u, ball) - constants.prop_log_constant() * weighted_integral(w, -2.0, n)
        scale = weighted_integral(RadialProfile(r, np.gradient(u.values, r) ** 2), 0.0, n)
        worst_gap = min(worst_gap, gap / scale)
    params = {"N": n, "grid": grid, "profiles": 20, "volume": ball.volume}
    return [
        VerificationReport.compare("prop_log/identity", params, 1.0 + worst_ident, 1.0, tol,
                                   "max relative defect of ∫vv' log r = -1/2 ∫v²/r"),
        VerificationReport.at_least("prop_log/inequality", params, worst_gap, -tol, 0.0,
                                    "min normalized gap; must be >= -tol"),
    ]


def random_profiles(rng: np.random.Generator, r: np.ndarray, count: int = 50):
    """Smooth radial profiles vanishing at r[-1], not necessarily monotone."""
    R = r[-1]
    for _ in range(count):
        m = rng.uniform(0.5, 4.0, 3)
        c = rng.uniform(-0.5, 1.0, 3)
        c[0] = abs(c[0]) + 0.1
        osc = rng.uniform(0.0, 0.3) * np.sin(rng.uniform(1, 8) * math.pi * r / R)
        vals = sum(ci * (1 - (r / R) ** mi) for ci, mi in zip(c, m)) + osc * (1 - r / R)
        vals[-1] = 0.0
        yield RadialProfile(r, vals, zero_at_outer=True)


def case_hardy(dom, grid, tol, seed, p=None):
    rng = np.random.default_rng(seed)
    r = graded_grid(dom.radius, grid, 1e-6 * dom.radius)
    worst = math.inf
    for u in random_profiles(rng, r):
        gap = hardy_gap(u, dom)
        scale = weighted_integral(RadialProfile(r, u.derivative() ** 2), 0.0, dom.dim)
        worst = min(worst, gap / scale)
    params = {**_base(dom, grid), "profiles": 50, "seed": seed, "constant": constants.hardy_constant(dom.dim)}
    return [VerificationReport.at_least("hardy/gap", params, worst, -tol, 0.0, "min normalized gap; must be >= -tol")]


_CASE_FUNCS = {
    "bv": case_bv,
    "hardy": case_hardy,
    "prop_log": case_prop_log,
    "sobolev_disk": case_sobolev_disk,
    "thm1": case_thm1,
    "thm2": case_thm2,
    "thm4": case_thm4,
    "thm5": case_thm5,
}


def run_case(case: str, dom: Domain, grid: int = 8192, tol: float | None = None, seed: int = 0,
             p: float | None = None) -> list[VerificationReport]:
    """Run one case; solver failures become a failing report instead of raising."""
    if case not in _CASE_FUNCS:
        raise InvalidArgumentError(f"unknown case {case!r}; choose from {', '.join(CASES)}")
    tol = DEFAULT_TOL[case] if tol is None else tol
    try:
        return _CASE_FUNCS[case](dom, grid, tol, seed, p)
    except InvalidArgumentError:
        raise
    except (HardylabError, ArithmeticError, np.linalg.LinAlgError) as exc:
        params = {**_base(dom, grid), "seed": seed}
        return [VerificationReport(case, params, math.nan, math.nan, math.inf, False,
                                   f"{type(exc).__name__}: {exc}", tol)]

"""Step functions on a measure interval [0, V].

A ``StepProfile`` is piecewise constant on consecutive cells.  Everything the
rearrangement calculus needs (distribution functions, partial integrals of
the decreasing rearrangement, sorted pairings) is exact finite combinatorics
on such profiles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainMismatchError, InvalidArgumentError, PreconditionError

REL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class StepProfile:
    widths: np.ndarray
    values: np.ndarray
    total_measure: float

    def __post_init__(self):
        widths = np.array(self.widths, dtype=float).ravel()
        values = np.array(self.values, dtype=float).ravel()
        if widths.size < 1 or widths.size != values.size:
            raise InvalidArgumentError("widths and values must be nonempty and of equal length")
        if np.any(~np.isfinite(widths)) or np.any(widths <= 0):
            raise InvalidArgumentError("every cell width must be positive and finite")
        if np.any(~np.isfinite(values)):
            raise InvalidArgumentError("profile values must be finite")
        total = float(self.total_measure)
        if not total > 0 or abs(widths.sum() - total) > 1e-12 * total * max(1.0, np.sqrt(widths.size) / 10):
            raise InvalidArgumentError(
                f"cell widths sum to {widths.sum()!r}, expected total_measure {total!r}"
            )
        widths.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "widths", widths)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "total_measure", total)

    @classmethod
    def uniform(cls, values, total_measure: float = None) -> "StepProfile":
        values = np.asarray(values, dtype=float).ravel()
        n = values.size
        if total_measure is None:
            total_measure = float(n)
        return cls(np.full(n, total_measure / n), values, total_measure)

    def __len__(self):
        return self.values.size

    @property
    def breakpoints(self) -> np.ndarray:
        b = np.concatenate([[0.0], np.cumsum(self.widths)])
        b[-1] = self.total_measure
        return b

    def integral(self) -> float:
        return float(np.dot(self.values, self.widths))

    def is_decreasing(self, tol: float = 0.0) -> bool:
        scale = max(float(np.max(np.abs(self.values))), 1e-300)
        return bool(np.all(np.diff(self.values) <= tol * scale))

    def __call__(self, s):
        """Evaluate the right-continuous step function at measure coordinates ``s``."""
        idx = np.searchsorted(self.breakpoints[1:-1], np.asarray(s, dtype=float), side="right")
        return self.values[idx]

    def with_values(self, values) -> "StepProfile":
        return StepProfile(self.widths, values, self.total_measure)


@dataclass(frozen=True)
class LorentzIndex:
    r: float
    s: float

    def __post_init__(self):
        if not (0 < self.r < np.inf and 0 < self.s < np.inf):
            raise InvalidArgumentError(f"Lorentz exponents must be positive and finite, got ({self.r}, {self.s})")


def _check_same_measure(f: StepProfile, g: StepProfile):
    tm = max(f.total_measure, g.total_measure)
    if abs(f.total_measure - g.total_measure) > 1e-12 * tm:
        raise DomainMismatchError(
            f"total measures differ: {f.total_measure!r} vs {g.total_measure!r}"
        )


def common_refinement(f: StepProfile, g: StepProfile) -> tuple[StepProfile, StepProfile]:
    """Restate ``f`` and ``g`` on the merged partition of their breakpoints."""
    _check_same_measure(f, g)
    total = f.total_measure
    merged = np.union1d(f.breakpoints, g.breakpoints)
    # drop breakpoints closer than rounding noise
    keep = np.concatenate([[True], np.diff(merged) > 1e-14 * total])
    merged = merged[keep]
    merged[-1] = total
    mids = 0.5 * (merged[:-1] + merged[1:])
    widths = np.diff(merged)
    return (
        StepProfile(widths, f(mids), total),
        StepProfile(widths, g(mids), total),
    )


def decreasing_rearrangement(f: StepProfile) -> StepProfile:
    # stable sort keeps ties in cell order, which makes the result deterministic
    order = np.argsort(-f.values, kind="stable")
    return StepProfile(f.widths[order], f.values[order], f.total_measure)


def distribution_function(f: StepProfile, t) -> np.ndarray:
    """Measure of the superlevel set {f > t}, vectorised over ``t``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return (f.values[None, :] > t[:, None]).astype(float) @ f.widths


def partial_integrals(f: StepProfile, s) -> np.ndarray:
    """s -> integral of f* over [0, s]; piecewise linear in s."""
    fs = decreasing_rearrangement(f)
    cum = np.concatenate([[0.0], np.cumsum(fs.values * fs.widths)])
    return np.interp(np.asarray(s, dtype=float), fs.breakpoints, cum)


def dominates(f: StepProfile, g: StepProfile) -> bool:
    """True when f is dominated by g (f ≺ g).

    Partial integrals of a step rearrangement are piecewise linear, so it is
    enough to compare them at the union of both partitions' breakpoints.
    """
    _check_same_measure(f, g)
    nodes = np.union1d(decreasing_rearrangement(f).breakpoints, decreasing_rearrangement(g).breakpoints)
    pf = partial_integrals(f, nodes)
    pg = partial_integrals(g, nodes)
    scale = max(
        float(np.dot(np.abs(f.values), f.widths)), float(np.dot(np.abs(g.values), g.widths)), 1e-300
    )
    if abs(pf[-1] - pg[-1]) > REL_TOL * scale:
        return False
    return bool(np.all(pf <= pg + REL_TOL * scale))


def pseudo_rearrangement(f0: StepProfile, psi: StepProfile) -> StepProfile:
    """Rearrange decreasing ``f0`` along the level order of ``psi``.

    The k-th largest part of ``f0`` lands where ``psi`` takes its k-th largest
    value (ties in ``psi`` go to the lower cell index first), which maximises
    the pairing with ``psi`` among rearrangements of ``f0``.  On equal-width
    partitions the result is a permutation of ``f0``'s cell values; otherwise
    the cells of ``psi`` are subdivided where ``f0`` jumps.
    """
    _check_same_measure(f0, psi)
    if not f0.is_decreasing(1e-12):
        raise PreconditionError("pseudo_rearrangement expects a decreasing f0")
    total = f0.total_measure
    order = np.argsort(-psi.values, kind="stable")
    starts = psi.breakpoints[:-1]

    if f0.widths.size == psi.widths.size and np.allclose(f0.widths, psi.widths, rtol=0, atol=1e-14 * total):
        if np.allclose(psi.widths, psi.widths[0], rtol=0, atol=1e-14 * total):
            out = np.empty_like(f0.values)
            out[order] = f0.values
            return StepProfile(psi.widths, out, total)

    # general partitions: walk psi's cells in decreasing order, consuming f0
    f_bp = f0.breakpoints
    pieces = []  # (position, width, value)
    cursor = 0.0
    for k in order:
        w = psi.widths[k]
        lo, hi = cursor, cursor + w
        inner = f_bp[(f_bp > lo + 1e-14 * total) & (f_bp < hi - 1e-14 * total)]
        cuts = np.concatenate([[lo], inner, [hi]])
        for a, b in zip(cuts[:-1], cuts[1:]):
            pieces.append((starts[k] + (a - lo), b - a, float(f0(0.5 * (a + b)))))
        cursor = hi
    pieces.sort(key=lambda p: p[0])
    widths = np.array([p[1] for p in pieces])
    values = np.array([p[2] for p in pieces])
    return StepProfile(widths, values, total)


def hardy_littlewood_bound(f: StepProfile, g: StepProfile) -> float:
    """The sorted pairing ∫ f* g*, an upper bound for ∫ f g."""
    fr, gr = common_refinement(decreasing_rearrangement(f), decreasing_rearrangement(g))
    return float(np.sum(fr.values * gr.values * fr.widths))


def pairing(f: StepProfile, g: StepProfile) -> float:
    fr, gr = common_refinement(f, g)
    return float(np.sum(fr.values * gr.values * fr.widths))


def lorentz_norm(u_star: StepProfile, idx: LorentzIndex, dim: int) -> float:
    r"""Lorentz (r, s) norm of a decreasing step profile.

    With sigma = omega_N |x|^N the defining integral over the ball becomes

        ||u||_{r,s} = ( \int_0^{|Omega|} [u*(sigma) sigma^{1/r}]^s dsigma / sigma )^{1/s},

    the omega_N factors cancelling exactly; ``dim`` therefore only enters
    through validation.  On a step profile each cell contributes
    v^s (r/s) (b^{s/r} - a^{s/r}).
    """
    if int(dim) != dim or dim < 3:
        raise InvalidArgumentError(f"dimension must be an integer >= 3, got {dim!r}")
    if not u_star.is_decreasing(1e-12):
        raise PreconditionError("lorentz_norm expects a decreasing rearrangement")
    if np.any(u_star.values < 0):
        raise PreconditionError("lorentz_norm expects a nonnegative profile")
    if not np.any(u_star.values):
        return 0.0
    e = idx.s / idx.r
    bp = u_star.breakpoints
    cell = (bp[1:] ** e - bp[:-1] ** e) / e
    total = float(np.sum(u_star.values ** idx.s * cell))
    return total ** (1.0 / idx.s)

"""Radial functions on balls: grids, weighted quadrature, Hardy functionals,
and the two changes of variable used to reduce N-dimensional radial problems
to problems on an interval.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import lambertw

from .errors import (
    InvalidArgumentError,
    Lim0Warning,
    PreconditionError,
    ResolutionError,
    SingularIntegrandError,
)
from .measure import LorentzIndex, StepProfile, lorentz_norm


def unit_ball_volume(dim: int) -> float:
    return math.pi ** (dim / 2) / math.gamma(dim / 2 + 1)


@dataclass(frozen=True)
class Domain:
    """A bounded set Omega in R^N, represented only through N and |Omega|."""

    dim: int
    volume: float

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 3:
            raise InvalidArgumentError(f"dimension must be an integer >= 3, got {self.dim!r}")
        if not (math.isfinite(self.volume) and self.volume > 0):
            raise InvalidArgumentError(f"volume must be positive and finite, got {self.volume!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "volume", float(self.volume))

    @classmethod
    def ball(cls, dim: int, radius: float = 1.0) -> "Domain":
        return cls(dim, unit_ball_volume(dim) * radius**dim)

    @cached_property
    def omega_n(self) -> float:
        return unit_ball_volume(self.dim)

    @cached_property
    def radius(self) -> float:
        return (self.volume / self.omega_n) ** (1.0 / self.dim)

    @property
    def crit_exp(self) -> float:
        return 2.0 * self.dim / (self.dim - 2)

    @property
    def hardy_exponent(self) -> float:
        """(N - 2) / 2, the power of r in the magical transformation."""
        return 0.5 * (self.dim - 2)


@dataclass(frozen=True, eq=False)
class RadialProfile:
    grid: np.ndarray
    values: np.ndarray
    zero_at_outer: bool = False

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float).ravel()
        values = np.array(self.values, dtype=float).ravel()
        if grid.size < 2 or grid.size != values.size:
            raise InvalidArgumentError("grid and values must have equal length >= 2")
        if grid[0] < 0 or np.any(np.diff(grid) <= 0):
            raise InvalidArgumentError("grid must be nonnegative and strictly increasing")
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError("profile values must be finite")
        if self.zero_at_outer and values[-1] != 0.0:
            raise InvalidArgumentError("zero_at_outer profile must vanish exactly at the outer radius")
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, f, grid, zero_at_outer: bool = True) -> "RadialProfile":
        grid = np.asarray(grid, dtype=float)
        values = np.array(f(grid), dtype=float) * np.ones_like(grid)
        if zero_at_outer:
            values[-1] = 0.0
        return cls(grid, values, zero_at_outer)

    @property
    def inner(self) -> float:
        return float(self.grid[0])

    @property
    def outer(self) -> float:
        return float(self.grid[-1])

    def derivative(self) -> np.ndarray:
        if self.grid.size < 3:
            raise ResolutionError("at least 3 grid points are needed for a derivative")
        return np.gradient(self.values, self.grid, edge_order=2)

    def is_decreasing(self, tol: float = 0.0) -> bool:
        scale = max(float(np.max(np.abs(self.values))), 1e-300)
        return bool(np.all(np.diff(self.values) <= tol * scale))

    def __call__(self, r):
        return np.interp(r, self.grid, self.values)


def uniform_grid(R: float, M: int, delta: float = 0.0) -> np.ndarray:
    return np.linspace(delta, R, M + 1)


def graded_grid(R: float, M: int, delta: float, stretch: float | None = None) -> np.ndarray:
    """M + 1 points on [delta, R]: geometric near the origin, uniform near R.

    Points are equispaced in y = log(r) + c r with c = stretch / R, which is
    inverted in closed form through the Lambert W function.
    """
    if not (0 < delta < R):
        raise InvalidArgumentError(f"need 0 < delta < R, got delta={delta!r}, R={R!r}")
    if stretch is None:
        stretch = max(1.0, math.log(R / delta))
    c = stretch / R
    y = np.linspace(math.log(delta) + c * delta, math.log(R) + c * R, M + 1)
    r = np.real(lambertw(c * np.exp(y))) / c
    r[0], r[-1] = delta, R
    if np.any(np.diff(r) <= 0):
        raise ResolutionError("graded grid is not strictly increasing; reduce M or widen [delta, R]")
    return r


def _check_dim(dim):
    if int(dim) != dim or dim < 3:
        raise InvalidArgumentError(f"dimension must be an integer >= 3, got {dim!r}")
    return int(dim)


def weighted_integral(p: RadialProfile, weight_exponent: float, dim: int) -> float:
    """N omega_N ∫ p(r) r^(w + N - 1) dr by the trapezoid rule, i.e. ∫ p |x|^w dx."""
    dim = _check_dim(dim)
    power = weight_exponent + dim - 1
    if power < 0 and p.inner == 0.0:
        raise SingularIntegrandError(
            f"integrand r^{power} is singular at r = 0; use a grid with an inner cutoff"
        )
    return dim * unit_ball_volume(dim) * float(trapezoid(p.values * p.grid**power, p.grid))


def gradient_energy(u: RadialProfile, dim: int) -> float:
    dim = _check_dim(dim)
    if not u.zero_at_outer:
        raise PreconditionError("gradient_energy expects a profile vanishing at the outer radius")
    du = u.derivative()
    return dim * unit_ball_volume(dim) * float(trapezoid(du * du * u.grid ** (dim - 1), u.grid))


def hardy_gap(u: RadialProfile, dom: Domain) -> float:
    """∫|∇u|² - ((N-2)²/4) ∫u²/|x|² over the ball, origin excised below the inner cutoff."""
    if u.inner <= 0.0:
        raise SingularIntegrandError("hardy_gap needs an inner cutoff delta > 0")
    a = dom.hardy_exponent
    sq = RadialProfile(u.grid, u.values**2)
    return gradient_energy(u, dom.dim) - a * a * weighted_integral(sq, -2.0, dom.dim)


def magical_transform(u: RadialProfile, dim: int) -> RadialProfile:
    """v(r) = u(r) r^((N-2)/2)."""
    a = 0.5 * (_check_dim(dim) - 2)
    return RadialProfile(u.grid, u.values * u.grid**a, u.zero_at_outer)


def inverse_magical_transform(v: RadialProfile, dim: int) -> RadialProfile:
    a = 0.5 * (_check_dim(dim) - 2)
    if v.inner == 0.0:
        raise SingularIntegrandError("inverse transform is singular at r = 0")
    return RadialProfile(v.grid, v.values * v.grid ** (-a), v.zero_at_outer)


def log_transform(v: RadialProfile, dim: int, lim0_tol: float = 1e-3) -> RadialProfile:
    """u(r) = v(r) r^(-(N-2)/2) sqrt(-log r) on (0, 1/e].

    Requires v(1/e) = 0.  The limit condition v(r) log r -> 0 at the origin can
    only be checked at the inner cutoff; a violation emits ``Lim0Warning``.
    """
    dim = _check_dim(dim)
    r_max = math.exp(-1.0)
    if v.inner <= 0.0 or v.outer > r_max * (1 + 1e-12):
        raise InvalidArgumentError("log_transform needs a grid inside (0, 1/e]")
    scale = max(float(np.max(np.abs(v.values))), 1e-300)
    if abs(v.outer - r_max) > 1e-12 or abs(v.values[-1]) > 1e-12 * scale:
        raise PreconditionError("log_transform needs v(1/e) = 0 at the outer grid point")
    lim0 = abs(v.values[0] * math.log(v.inner))
    if lim0 > lim0_tol * scale:
        warnings.warn(
            f"|v(delta) log delta| = {lim0:.3e} exceeds {lim0_tol:g} * max|v|",
            Lim0Warning,
            stacklevel=2,
        )
    a = 0.5 * (dim - 2)
    grid = v.grid
    values = v.values * grid ** (-a) * np.sqrt(-np.log(grid))
    values[-1] = 0.0
    return RadialProfile(grid, values, True)


def to_step_profile(u: RadialProfile, dim: int) -> StepProfile:
    """Measure-coordinate step version of a radial profile, sigma = omega_N r^N.

    Each shell carries the mean of the endpoint values; a profile starting at
    r0 > 0 gets an extra central cell holding u(r0).
    """
    dim = _check_dim(dim)
    omega = unit_ball_volume(dim)
    sigma = omega * u.grid**dim
    values = 0.5 * (u.values[:-1] + u.values[1:])
    widths = np.diff(sigma)
    if sigma[0] > 0:
        widths = np.concatenate([[sigma[0]], widths])
        values = np.concatenate([[u.values[0]], values])
    return StepProfile(widths, values, float(sigma[-1]))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def radial_lorentz_norm(u: RadialProfile, idx: LorentzIndex, dim: int) -> float:
    r"""Lorentz norm of a radially decreasing, piecewise-linear profile.

    Uses ||u||_{r,s}^s = N omega_N^{s/r} \int u^s r^{N s/r - 1} dr, integrated
    shell by shell with 12-point Gauss-Legendre (exact for the (2*, 2) case,
    where the integrand is a polynomial of degree N - 1).
    """
    dim = _check_dim(dim)
    if not u.is_decreasing(1e-12):
        raise PreconditionError("radial_lorentz_norm expects a radially decreasing profile")
    omega = unit_ball_volume(dim)
    power = dim * idx.s / idx.r - 1.0
    a, b = u.grid[:-1], u.grid[1:]
    half = 0.5 * (b - a)
    x = 0.5 * (a + b)[:, None] + half[:, None] * _GL_NODES[None, :]
    t = (x - a[:, None]) / (b - a)[:, None]
    vals = u.values[:-1, None] * (1 - t) + u.values[1:, None] * t
    integral = float(np.sum(half[:, None] * _GL_WEIGHTS[None, :] * np.abs(vals) ** idx.s * x**power))
    if u.inner > 0:
        integral += u.values[0] ** idx.s * u.inner ** (power + 1) / (power + 1)
    return (dim * omega ** (idx.s / idx.r) * integral) ** (1.0 / idx.s)


def gradient_l1_lorentz_identity(u: RadialProfile, dom: Domain) -> tuple[float, float]:
    """Both sides of ∫|∇u| dx = (N-1) omega_N^(1/N) ||u||_{N/(N-1),1}.

    Left: trapezoid quadrature of N omega_N ∫ |u'| r^(N-1) dr.  Right: the
    Lorentz norm of the measure-coordinate step version of ``u``.
    """
    if not u.zero_at_outer:
        raise PreconditionError("identity needs u(R) = 0")
    if not u.is_decreasing(1e-12):
        raise PreconditionError("identity needs a radially decreasing profile")
    n = dom.dim
    omega = unit_ball_volume(n)
    du = u.derivative()
    lhs = n * omega * float(trapezoid(np.abs(du) * u.grid ** (n - 1), u.grid))
    step = to_step_profile(u, n)
    rhs = (n - 1) * omega ** (1.0 / n) * lorentz_norm(step, LorentzIndex(n / (n - 1), 1.0), n)
    return lhs, rhs

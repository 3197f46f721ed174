"""Bessel functions of order zero and one, their first zeros, and the derived
spectral constants.

J0 is summed from its power series up to ``SWITCHOVER`` and from the Hankel
asymptotic expansion beyond it; both branches stay within about 1e-12 absolute
of the true value on [0, 50].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Literal

import numpy as np

from .errors import BracketError, ConvergenceError, InvalidArgumentError

SWITCHOVER = 12.0
SERIES_CUTOFF = 1e-18


@dataclass(frozen=True)
class BesselEval:
    argument: float
    value: float
    method: Literal["series", "asymptotic"]


@dataclass(frozen=True)
class SpectralConstants:
    j01: float
    lambda2: float
    v0: float


def _check_argument(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise InvalidArgumentError(f"Bessel argument must be finite, got {x!r}")
    if x < 0:
        raise InvalidArgumentError(f"Bessel argument must be nonnegative, got {x!r}")
    return x


def _series(x: float, order: int) -> float:
    # sum_k (-1)^k (x/2)^(2k+order) / (k! (k+order)!)
    q = -0.25 * x * x
    term = 1.0 if order == 0 else 0.5 * x
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + order))
        total += term
        if abs(term) < SERIES_CUTOFF and k > 2:
            return total
        if k > 400:  # pragma: no cover - unreachable for x <= SWITCHOVER
            raise ConvergenceError("Bessel series did not converge", {"x": x, "k": k})


def _asymptotic(x: float, order: int) -> float:
    """Hankel expansion, truncated just before the terms start to grow."""
    mu = 4.0 * order * order
    p_sum = 0.0
    q_sum = 0.0
    coeff = 1.0  # a_k(nu) = prod_{j<=k} (mu - (2j-1)^2) / (k! 8^k)
    last = math.inf
    k = 0
    while True:
        even = coeff / x ** (2 * k) * (-1) ** k
        coeff_odd = coeff * (mu - (4 * k + 1) ** 2) / ((2 * k + 1) * 8.0)
        odd = coeff_odd / x ** (2 * k + 1) * (-1) ** k
        if abs(even) > last:
            break
        p_sum += even
        q_sum += odd
        last = abs(even)
        coeff = coeff_odd * (mu - (4 * k + 3) ** 2) / ((2 * k + 2) * 8.0)
        k += 1
        if last == 0.0 or k > 60:
            break
    chi = x - (0.5 * order + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p_sum * math.cos(chi) - q_sum * math.sin(chi))


def bessel_j0_eval(x: float) -> BesselEval:
    x = _check_argument(x)
    if x <= SWITCHOVER:
        return BesselEval(x, _series(x, 0), "series")
    return BesselEval(x, _asymptotic(x, 0), "asymptotic")


def _scalar_j0(x: float) -> float:
    x = _check_argument(x)
    return _series(x, 0) if x <= SWITCHOVER else _asymptotic(x, 0)


def _scalar_j1(x: float) -> float:
    x = _check_argument(x)
    return _series(x, 1) if x <= SWITCHOVER else _asymptotic(x, 1)


def bessel_j0(x):
    """J0(x) for a nonnegative scalar or array argument."""
    if np.ndim(x) == 0:
        return _scalar_j0(x)
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("Bessel argument must be finite")
    return np.array([_scalar_j0(v) for v in arr.ravel()]).reshape(arr.shape)


def bessel_j1(x):
    """J1(x); used as -J0' when polishing zeros."""
    if np.ndim(x) == 0:
        return _scalar_j1(x)
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError("Bessel argument must be finite")
    return np.array([_scalar_j1(v) for v in arr.ravel()]).reshape(arr.shape)


def sobolev_profile(r):
    """V(r) = J0(2 sqrt(r)), the solution of (r V')' + V = 0 with V(0) = 1."""
    if np.ndim(r) == 0:
        return _scalar_j0(2.0 * math.sqrt(r))
    return bessel_j0(2.0 * np.sqrt(np.asarray(r, dtype=float)))


def sobolev_profile_derivative(r: float) -> float:
    if r == 0.0:
        return -1.0
    s = math.sqrt(r)
    return -_scalar_j1(2.0 * s) / s


def find_first_zero(
    f: Callable[[float], float],
    bracket: tuple[float, float],
    fprime: Callable[[float], float] | None = None,
    *,
    scale: float = 1.0,
    width_tol: float = 1e-13,
    max_iter: int = 200,
) -> float:
    """Locate a sign change of ``f`` inside ``bracket``.

    Bisection shrinks the bracket to 1e-10; when ``fprime`` is supplied up to
    five Newton steps polish the estimate, after which a bracket of width
    ``width_tol`` around it is certified by a sign check.  Without a
    derivative (or if certification fails) bisection simply continues down
    to ``width_tol``.
    """
    a, b = float(bracket[0]), float(bracket[1])
    if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise InvalidArgumentError(f"invalid bracket {bracket!r}")
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise BracketError(f"no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}")

    coarse = 1e-10 if fprime is not None else width_tol
    it = 0
    while b - a > coarse:
        it += 1
        if it > max_iter:
            raise ConvergenceError(
                "bisection exceeded max_iter", {"a": a, "b": b, "iterations": it}
            )
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        if fm == 0.0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b, fb = m, fm

    if fprime is not None:
        x = 0.5 * (a + b)
        for _ in range(5):
            d = fprime(x)
            if d == 0.0:
                break
            step = f(x) / d
            x_new = x - step
            if not (a <= x_new <= b):
                break
            x = x_new
            if abs(step) < 1e-16 * max(1.0, abs(x)):
                break
        lo, hi = x - 0.5 * width_tol, x + 0.5 * width_tol
        flo, fhi = f(lo), f(hi)
        if flo == 0.0:
            return lo
        if fhi == 0.0:
            return hi
        if a <= lo and hi <= b and (flo > 0) != (fhi > 0):
            a, b, fa = lo, hi, flo
        # otherwise fall through and finish by bisection

    while b - a > width_tol:
        it += 1
        if it > max_iter:
            raise ConvergenceError(
                "bisection exceeded max_iter", {"a": a, "b": b, "iterations": it}
            )
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        if fm == 0.0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m

    x = 0.5 * (a + b)
    fx = f(x)
    if abs(fx) > 1e-12 * scale:
        raise ConvergenceError(
            "residual above tolerance at termination", {"x": x, "f(x)": fx, "width": b - a}
        )
    return x


@lru_cache(maxsize=None)
def spectral_constants() -> SpectralConstants:
    """First zero of J0, the unit-disk Dirichlet eigenvalue, and V0."""
    j01 = find_first_zero(_scalar_j0, (2.0, 3.0), lambda x: -_scalar_j1(x))
    v0 = find_first_zero(sobolev_profile, (1.0, 2.0), sobolev_profile_derivative)
    lambda2 = j01 * j01
    if abs(v0 - 0.25 * lambda2) > 1e-12 * v0:
        raise ConvergenceError(
            "V0 and j01^2/4 disagree", {"v0": v0, "j01^2/4": 0.25 * lambda2}
        )
    return SpectralConstants(j01=j01, lambda2=lambda2, v0=v0)

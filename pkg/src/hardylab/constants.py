"""Closed-form sharp constants for Hardy inequalities with remainder terms.

Every function takes the ambient set through a ``Domain`` (dimension N and
measure |Omega|); omega_N is the volume of the unit ball in R^N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidArgumentError
from .radial import Domain, unit_ball_volume
from .special import spectral_constants


@dataclass(frozen=True)
class ConstantRecord:
    id: str
    params: dict = field(default_factory=dict)
    value: float = 0.0
    formula_text: str = ""

    def as_dict(self) -> dict:
        return {"id": self.id, "params": dict(self.params), "value": self.value, "formula_text": self.formula_text}


def hardy_constant(N: int) -> float:
    if int(N) != N or N < 3:
        raise InvalidArgumentError(f"Hardy constant needs an integer N >= 3, got {N!r}")
    return (N - 2) ** 2 / 4.0


def thm1_constant(dom: Domain) -> float:
    """Remainder ||u||^2 in L(2N/(N-1), 2): omega_N^(2/N) |Omega|^(-1/N) V0."""
    n = dom.dim
    return dom.omega_n ** (2.0 / n) / dom.volume ** (1.0 / n) * spectral_constants().v0


def thm1_weighted_constant(dom: Domain) -> float:
    """Remainder ∫ u²/|x| dx: (omega_N / |Omega|)^(1/N) V0.

    This is the other printed reading of the same result; the two differ by
    the factor omega_N^(1/N) that converts ∫u²/|x| into the squared Lorentz
    norm, so each is sharp for its own remainder term.
    """
    return (dom.omega_n / dom.volume) ** (1.0 / dom.dim) * spectral_constants().v0


def thm2_range(N: int) -> tuple[float, float]:
    """Half-open interval [1, 2N/(N-2)) of admissible p."""
    return 1.0, 2.0 * N / (N - 2)


def thm2_exponent(N: int, p: float) -> float:
    return N / p - N / 2 + 1


def thm2_constant(dom: Domain, p: float) -> float:
    n = dom.dim
    lo, hi = thm2_range(n)
    if not (lo <= p < hi):
        raise InvalidArgumentError(f"p = {p!r} outside [1, {hi:g}) for N = {n}")
    a = thm2_exponent(n, p)
    return 2 * a**3 / (n * dom.volume ** (2 * a / n)) * dom.omega_n ** (2.0 / n)


def thm4_constants(dom: Domain) -> tuple[float, float]:
    """(value from the derivation, value as stated in the closed form) for the q = 1 gradient remainder.

    The derivation gives (1/(4|Omega|)) (N/(N-1))^2; the alternative form carries an
    extra 1/omega_N.  Their ratio is always omega_N.
    """
    n = dom.dim
    text = (n / (n - 1)) ** 2 / (4.0 * dom.volume)
    return text, text / dom.omega_n


def thm5_range(N: int) -> tuple[float, float]:
    """Open interval (max{2N/(3N-2), N/(N+1)}, 1) of admissible p."""
    return max(2.0 * N / (3 * N - 2), N / (N + 1.0)), 1.0


def _range_label(N: int) -> str:
    lo = max(Fraction(2 * N, 3 * N - 2), Fraction(N, N + 1))
    return f"({lo}, 1)"


def lorentz_alpha(N: int, p: float) -> float:
    """alpha with p = N/(N + alpha): the weight |x|^alpha on |∇u|^# ."""
    return N / p - N


def thm5_formula(N: int, volume: float, p: float) -> float:
    return ((2 - p) / p) ** 3 / (4 * volume ** (2 / p - 1)) * (N * p / (N - p)) ** 2


def thm5_constant(dom: Domain, p: float) -> float:
    n = dom.dim
    lo, hi = thm5_range(n)
    if not (lo < p < hi):
        raise InvalidArgumentError(
            f"p = {p!r} outside the open interval {_range_label(n)} = ({lo:.12g}, {hi:g}) for N = {n}"
        )
    return thm5_formula(n, dom.volume, p)


def brezis_vazquez(dom: Domain) -> float:
    return spectral_constants().lambda2 / dom.radius**2


def prop_log_constant() -> float:
    """Constant of the log-weight remainder, valid when |Omega| = omega_N / e^N."""
    return 0.25


def prop_log_volume(N: int) -> float:
    return unit_ball_volume(N) / math.e**N


def all_constants(dom: Domain, p: float | None = None, q: float = 1.0) -> list[ConstantRecord]:
    """Every closed form applicable to (N, |Omega|, p, q)."""
    n, vol = dom.dim, dom.volume
    base = {"N": n, "volume": vol}
    if not (1.0 <= q < 2.0):
        raise InvalidArgumentError(f"q = {q!r} outside [1, 2)")
    out = [
        ConstantRecord("hardy", dict(base), hardy_constant(n), "(N-2)^2/4"),
        ConstantRecord("brezis_vazquez", dict(base), brezis_vazquez(dom), "Lambda_2 / R_Omega^2"),
        ConstantRecord(
            "thm1", {**base, "remainder": "lorentz_2N/(N-1)_2"}, thm1_constant(dom),
            "omega_N^(2/N) / |Omega|^(1/N) * V0",
        ),
        ConstantRecord(
            "thm1", {**base, "remainder": "weighted_u2_over_abs_x"}, thm1_weighted_constant(dom),
            "(omega_N / |Omega|)^(1/N) * V0",
        ),
    ]
    if q == 1.0:
        text, stmt = thm4_constants(dom)
        out.append(ConstantRecord("thm4_text", {**base, "q": 1.0}, text, "(1/(4|Omega|)) (N/(N-1))^2"))
        out.append(ConstantRecord("thm4_stmt", {**base, "q": 1.0}, stmt, "(1/(4 omega_N |Omega|)) (N/(N-1))^2"))
    if p is not None:
        lo2, hi2 = thm2_range(n)
        lo5, hi5 = thm5_range(n)
        if lo2 <= p < hi2:
            out.append(ConstantRecord(
                "thm2", {**base, "p": p}, thm2_constant(dom, p),
                "2 a^3 / (N |Omega|^(2a/N)) * omega_N^(2/N), a = N/p - N/2 + 1",
            ))
        elif lo5 < p < hi5:
            out.append(ConstantRecord(
                "thm5", {**base, "p": p, "alpha": lorentz_alpha(n, p)}, thm5_constant(dom, p),
                "((2-p)/p)^3 / (4 |Omega|^(2/p-1)) * (N p/(N-p))^2",
            ))
        else:
            raise InvalidArgumentError(
                f"p = {p!r} outside the thm2 range [1, {hi2:g}) and the thm5 range "
                f"{_range_label(n)} = ({lo5:.12g}, 1) for N = {n}"
            )
    out.append(ConstantRecord(
        "prop_log", {"N": n, "volume": prop_log_volume(n)}, prop_log_constant(),
        "1/4 with weight 1/(|x| log|x|)^2 on |Omega| = omega_N/e^N",
    ))
    return out

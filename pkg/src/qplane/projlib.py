"""Representatives of K_0 classes: Bott, Powers-Rieffel and indicator projections."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import expit

from .crossed import CrossedElement, CrossedMatrix, as_matrix, block_diagonal
from .errors import MembershipError
from .funcspace import INF, DEFAULT_DENSITY, Interval, SmoothFunction, StepFunction, bump_phi_h_fn
from .spectral import SpectralSet, as_fraction

DEFAULT_VERIFY_TOL = 1e-9
DEFAULT_VERIFY_WINDOW = 64


@dataclass(frozen=True, eq=False)
class ProjectionSpec:
    kind: str
    params: tuple
    realized: CrossedMatrix
    label: str = ""

    @property
    def size(self) -> int:
        return self.realized.size

    @property
    def ambient(self) -> SpectralSet:
        return self.realized.ambient

    def __str__(self):
        return self.label or f"{self.kind}{self.params}"


def _log_abs(t):
    with np.errstate(divide="ignore"):
        return np.log(t)


def _logistic(log_scale: float, power: int, sign: int = 1):
    """``t -> s t^p / (1 + s t^p)`` (sign=+1) or ``1 / (1 + s t^p)`` (sign=-1)."""

    def fn(t):
        return expit(sign * (log_scale + power * _log_abs(t)))

    return fn


def _sech_half(log_scale: float, power: int):
    """``t -> sqrt(s) t^(p/2) / (1 + s t^p)``, written to survive huge ``t``."""

    def fn(t):
        u = 0.5 * (log_scale + power * _log_abs(t))
        with np.errstate(over="ignore"):
            return 1.0 / (2.0 * np.cosh(u))

    return fn


def bott_entries(n: int, q) -> dict:
    """Coefficient functions of the Bott projection ``P_n`` (n != 0) in ``t = |z|``.

    Returns ``{(i, j): (k, SmoothFunction)}``: entry ``(i, j)`` equals ``f U^k``.
    """
    if n == 0:
        raise ValueError("bott(0) is not a Bott class; n must be nonzero")
    a = abs(n)
    lq = math.log(float(as_fraction(q)))
    log_c = -a * (a - 1) * lq  # q^{-n(n-1)}
    log_d = a * (a + 1) * lq   # q^{n(n+1)}
    p = 2 * a

    def sm(fn, at0, atinf, name):
        return SmoothFunction(fn, at0, atinf, name=name)

    if n > 0:
        return {
            (0, 0): (0, sm(_logistic(log_c, p), 0.0, 1.0, f"P{n}[0,0]")),
            (0, 1): (-a, sm(_sech_half(log_c, p), 0.0, 0.0, f"P{n}[0,1]")),
            (1, 0): (a, sm(_sech_half(log_d, p), 0.0, 0.0, f"P{n}[1,0]")),
            (1, 1): (0, sm(_logistic(log_d, p, -1), 1.0, 0.0, f"P{n}[1,1]")),
        }
    return {
        (0, 0): (0, sm(_logistic(log_d, p), 0.0, 1.0, f"P{n}[0,0]")),
        (0, 1): (a, sm(_sech_half(log_d, p), 0.0, 0.0, f"P{n}[0,1]")),
        (1, 0): (-a, sm(_sech_half(log_c, p), 0.0, 0.0, f"P{n}[1,0]")),
        (1, 1): (0, sm(_logistic(log_c, p, -1), 1.0, 0.0, f"P{n}[1,1]")),
    }


def bott(n: int, X: SpectralSet) -> ProjectionSpec:
    entries = bott_entries(n, X.q)
    rows = tuple(
        tuple(CrossedElement.monomial(entries[i, j][1], entries[i, j][0], X) for j in range(2))
        for i in range(2)
    )
    return ProjectionSpec("bott", (n,), CrossedMatrix(rows), f"P_{n}")


def powers_rieffel_element(n: int, X: SpectralSet) -> CrossedElement:
    """``U^n h + f_n + h U^{-n}`` brought to normal form by multiplication."""
    if n < 1:
        raise ValueError(f"Powers-Rieffel projections need n >= 1, got {n}")
    bumps = bump_phi_h_fn(X.q, n)
    h = CrossedElement.function(bumps.h, X)
    up = CrossedElement.shift(X, n) * h
    down = h * CrossedElement.shift(X, -n)
    return up + CrossedElement.function(bumps.f, X) + down


def powers_rieffel(n: int, X: SpectralSet) -> ProjectionSpec:
    element = powers_rieffel_element(n, X)
    return ProjectionSpec("pr", (n,), CrossedMatrix.from_element(element), f"R_{n}")


def _endpoint_ok(X: SpectralSet, e, closed: bool, is_lo: bool) -> bool:
    if e == INF:
        return True
    if e == 0 and is_lo:
        return closed
    return not X.in_spectrum(e)


def indicator(interval: Interval, X: SpectralSet) -> ProjectionSpec:
    """``chi_I`` as an exact projection; endpoints must avoid ``X``."""
    for e, closed, is_lo in ((interval.lo, interval.lo_closed, True),
                             (interval.hi, interval.hi_closed, False)):
        if not _endpoint_ok(X, e, closed, is_lo):
            raise MembershipError(
                f"discontinuous indicator: endpoint {e} of {interval} lies in the spectrum"
            )
    f = StepFunction(((interval, Fraction(1)),))
    element = CrossedElement.function(f, X)
    return ProjectionSpec("indicator", (interval,), CrossedMatrix.from_element(element),
                          f"chi_{interval}")


def indicator_between(lo, hi, X: SpectralSet, lo_closed=False, hi_closed=False) -> ProjectionSpec:
    return indicator(Interval(lo, hi, lo_closed, hi_closed), X)


def unit(X: SpectralSet) -> ProjectionSpec:
    return ProjectionSpec("unit", (), CrossedMatrix.from_element(CrossedElement.unit(X)), "1")


def complement(p: ProjectionSpec) -> ProjectionSpec:
    """``1 - p`` in the unitization."""
    one = CrossedMatrix.identity(p.size, p.ambient)
    return ProjectionSpec("complement", (p,), one - p.realized, f"1-{p}")


def direct_sum(*specs: ProjectionSpec) -> ProjectionSpec:
    realized = block_diagonal([s.realized for s in specs])
    return ProjectionSpec("sum", tuple(specs), realized, "diag(" + ",".join(map(str, specs)) + ")")


@dataclass
class ProjectionReport:
    sup_err_idem: float
    sup_err_selfadj: float
    exact: bool
    tol: float
    passed: bool = field(init=False)

    def __post_init__(self):
        if self.exact:
            self.passed = self.sup_err_idem == 0 and self.sup_err_selfadj == 0
        else:
            self.passed = self.sup_err_idem <= self.tol and self.sup_err_selfadj <= self.tol

    def to_dict(self) -> dict:
        return {
            "sup_err_idem": self.sup_err_idem,
            "sup_err_selfadj": self.sup_err_selfadj,
            "exact": self.exact,
            "tol": self.tol,
            "passed": self.passed,
        }


def verify_projection(p, tol: float = DEFAULT_VERIFY_TOL, window: int = DEFAULT_VERIFY_WINDOW,
                      density: int = DEFAULT_DENSITY) -> ProjectionReport:
    """Sup-norm sizes of ``p p - p`` and ``p* - p``; reports, never raises."""
    m = as_matrix(p)
    k_range = window + 2 * m.max_power
    idem_err, idem_exact = (m @ m - m).sup_error(k_range, density)
    sa_err, sa_exact = (m.adjoint() - m).sup_error(k_range, density)
    return ProjectionReport(idem_err, sa_err, idem_exact and sa_exact, tol)

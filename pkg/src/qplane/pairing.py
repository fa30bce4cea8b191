"""Index pairings of projections with ``ev_0``, ``ev_inf`` and the Fredholm modules ``F_y``.

The Fredholm pairing is the trace of ``pi_y(p) - (pi_0 + pi_inf)(p)``.  Only
the ``U^0`` coefficients reach the diagonal, so each matrix entry contributes
the series ``sum_k f_0(q^k y) + c - (ev_0 if k > 0 else ev_inf)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.special import expit

from .crossed import CrossedElement, as_matrix, ev0, evinf
from .errors import ConvergenceError, SpectrumError
from .funcspace import INF, SmoothFunction, StepFunction
from .rep import _values, check_witness
from .spectral import GapStructure, SpectralSet, as_fraction, gap_structure

DEFAULT_TOL = 1e-9
DEFAULT_INTEGER_TOL = 1e-6
DEFAULT_INITIAL_WINDOW = 64
DEFAULT_MAX_WINDOW = 8192


class HomKind(Enum):
    EV0 = "ev0"
    EVINF = "evinf"
    FREDHOLM = "F"


@dataclass(frozen=True)
class KHomClass:
    kind: HomKind
    y: Optional[Fraction] = None
    component: Optional[int] = None

    @classmethod
    def ev0(cls) -> "KHomClass":
        return cls(HomKind.EV0)

    @classmethod
    def evinf(cls) -> "KHomClass":
        return cls(HomKind.EVINF)

    @classmethod
    def fredholm(cls, y, component: Optional[int] = None) -> "KHomClass":
        return cls(HomKind.FREDHOLM, as_fraction(y), component)

    @classmethod
    def for_component(cls, G: GapStructure, gamma: int) -> "KHomClass":
        if not 0 <= gamma < G.n:
            raise SpectrumError(f"component index {gamma} out of range 0..{G.n - 1}")
        return cls.fredholm(G.witnesses[gamma], gamma)

    def label(self) -> str:
        if self.kind is HomKind.EV0:
            return "ev0"
        if self.kind is HomKind.EVINF:
            return "evinf"
        if self.component is not None:
            return f"F_{self.component}"
        return f"F_y={self.y}"


def normalize_witness(X: SpectralSet, y) -> Fraction:
    """Move ``y`` along its q-orbit into ``(q, 1]`` and check it lies in ``X``."""
    y = as_fraction(y)
    if y <= 0:
        raise SpectrumError(f"witness must be positive, got {y}")
    w, _ = X.fundamental_representative(y)
    return check_witness(X, w)


@dataclass
class PairingResult:
    raw: float
    rounded: int
    residual: float
    window_used: int
    mode: str  # "exact", "window-exact" or "converged"
    integer_tol: float = DEFAULT_INTEGER_TOL
    exact_value: Optional[Fraction] = None
    hom: str = ""

    @property
    def integral(self) -> bool:
        return self.residual <= self.integer_tol

    def to_dict(self) -> dict:
        return {
            "hom": self.hom,
            "raw": self.raw,
            "rounded": self.rounded,
            "residual": self.residual,
            "window_used": self.window_used,
            "mode": self.mode,
            "integral": self.integral,
            "exact_value": None if self.exact_value is None else str(self.exact_value),
        }


def _result(value, window, mode, integer_tol, hom, exact_value=None) -> PairingResult:
    raw = float(value)
    rounded = int(round(raw))
    residual = float(abs(exact_value - rounded)) if exact_value is not None else abs(raw - rounded)
    return PairingResult(raw, rounded, residual, window, mode, integer_tol, exact_value, hom)


def _trace_exact(values) -> Optional[Fraction]:
    vals = list(values)
    if all(isinstance(v, (Fraction, int)) for v in vals):
        return sum(vals, Fraction(0))
    return None


@dataclass(frozen=True)
class _Series:
    """Diagonal series of one matrix entry under a Fredholm pairing."""

    f0: object
    c: Fraction
    e0: object
    einf: object

    def float_terms(self, q, y, K: int) -> np.ndarray:
        idx = np.arange(-K, K + 1)
        diag = np.zeros(idx.shape) if self.f0 is None else _values(self.f0, q, y, idx)
        return diag + float(self.c) - np.where(idx > 0, float(self.e0), float(self.einf))

    def step_range(self, q, y) -> Optional[tuple[int, int]]:
        """Index range outside which every term is zero, for step coefficients."""
        if self.f0 is not None and not isinstance(self.f0, StepFunction):
            return None
        if not all(isinstance(v, (Fraction, int)) for v in (self.c, self.e0, self.einf)):
            return None
        pts = [b for b in (self.f0.breakpoints() if self.f0 is not None else []) if 0 < b < INF]
        return _index_range(q, y, pts)

    def support_range(self, q, y) -> Optional[tuple[int, int]]:
        """Index range for a compactly supported smooth ``f_0`` with matching limits."""
        if not isinstance(self.f0, SmoothFunction) or self.f0.support is None:
            return None
        lo, hi = self.f0.support
        if not (0 < lo and hi < math.inf):
            return None
        if float(self.e0) != float(self.c) or float(self.einf) != float(self.c):
            return None
        return _index_range(q, y, [lo, hi])

    def exact_sum(self, q, y, k_lo: int, k_hi: int) -> Fraction:
        total = Fraction(0)
        for k in range(k_lo, k_hi + 1):
            v = self.f0.evaluate(y * q ** k) if self.f0 is not None else Fraction(0)
            total += v + self.c - (self.e0 if k > 0 else self.einf)
        return total

    def window_sum(self, q, y, k_lo: int, k_hi: int) -> float:
        idx = np.arange(k_lo, k_hi + 1)
        vals = _values(self.f0, q, y, idx) + float(self.c)
        vals -= np.where(idx > 0, float(self.e0), float(self.einf))
        return math.fsum(vals)


def _index_range(q, y, points) -> tuple[int, int]:
    """Smallest ``[k_lo, k_hi]`` containing 0, 1 and every k with ``q^k y`` near a point."""
    lq = math.log(float(q))
    k_lo, k_hi = 0, 1
    for b in points:
        k = math.log(float(b) / float(y)) / lq
        k_lo = min(k_lo, math.floor(k) - 1)
        k_hi = max(k_hi, math.ceil(k) + 1)
    return k_lo, k_hi


def _series_of(entry: CrossedElement) -> _Series:
    return _Series(entry.coefficients.get(0), entry.unital_part, ev0(entry), evinf(entry))


def fredholm_trace(p, y, tol: float = DEFAULT_TOL, integer_tol: float = DEFAULT_INTEGER_TOL,
                   initial_window: int = DEFAULT_INITIAL_WINDOW,
                   max_window: int = DEFAULT_MAX_WINDOW, hom: str = "") -> PairingResult:
    m = as_matrix(p)
    X = m.ambient
    q = X.q
    y = normalize_witness(X, y)
    series = [_series_of(m[i, i]) for i in range(m.size)]

    exact_total = Fraction(0)
    window_parts: list[float] = []
    open_series: list[_Series] = []
    finite_window = 0
    for s in series:
        rng = s.step_range(q, y)
        if rng is not None:
            exact_total += s.exact_sum(q, y, *rng)
            finite_window = max(finite_window, -rng[0], rng[1])
            continue
        rng = s.support_range(q, y)
        if rng is not None:
            window_parts.append(s.window_sum(q, y, *rng))
            finite_window = max(finite_window, -rng[0], rng[1])
            continue
        open_series.append(s)

    if not open_series and not window_parts:
        return _result(exact_total, finite_window, "exact", integer_tol, hom, exact_total)
    finite = float(exact_total) + math.fsum(window_parts)
    if not open_series:
        return _result(finite, finite_window, "window-exact", integer_tol, hom)

    def trace(K: int) -> float:
        return math.fsum(math.fsum(s.float_terms(q, y, K)) for s in open_series)

    K = initial_window
    values = [trace(K)]
    while 2 * K <= max_window:
        K *= 2
        values.append(trace(K))
        if abs(values[-1] - values[-2]) < tol:
            return _result(finite + values[-1], max(K, finite_window), "converged", integer_tol, hom)
    raise ConvergenceError(
        f"trace did not settle to {tol} by window {K}",
        last_values=tuple(finite + v for v in values[-2:]),
        window=K,
    )


def pair(F: KHomClass, p, tol: float = DEFAULT_TOL, integer_tol: float = DEFAULT_INTEGER_TOL,
         initial_window: int = DEFAULT_INITIAL_WINDOW,
         max_window: int = DEFAULT_MAX_WINDOW) -> PairingResult:
    m = as_matrix(p)
    if F.kind is HomKind.FREDHOLM:
        return fredholm_trace(m, F.y, tol, integer_tol, initial_window, max_window, F.label())
    evaluated = ev0(m) if F.kind is HomKind.EV0 else evinf(m)
    diag = [evaluated[i, i] for i in range(m.size)]
    exact = _trace_exact(diag)
    if exact is not None:
        return _result(exact, 0, "exact", integer_tol, F.label(), exact)
    return _result(math.fsum(float(v) for v in diag), 0, "exact", integer_tol, F.label())


def homology_family(X: SpectralSet, y=None) -> list[KHomClass]:
    """``ev_0``, then ``F_gamma`` top-down (or ``F_y`` for the full spectrum), then ``ev_inf``."""
    if X.is_full:
        return [KHomClass.ev0(), KHomClass.fredholm(y if y is not None else Fraction(7, 10)),
                KHomClass.evinf()]
    G = gap_structure(X)
    return ([KHomClass.ev0()] + [KHomClass.for_component(G, g) for g in range(G.n)]
            + [KHomClass.evinf()])


def pairing_vector(p, X: Optional[SpectralSet] = None, y=None, **options) -> list[PairingResult]:
    m = as_matrix(p)
    X = X or m.ambient
    return [pair(F, m, **options) for F in homology_family(X, y)]


@dataclass
class TelescopingReport:
    n: int
    q: Fraction
    y: Fraction
    K: int
    direct: float
    split: float
    closed: float
    difference: float
    negative_mismatch: float
    tail_bound: float
    limit: int

    @property
    def agrees(self) -> bool:
        return self.difference <= 1e-10

    def to_dict(self) -> dict:
        return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.__dict__.items()}


def _bott_terms(n: int, q: float, y: float, ks: np.ndarray) -> np.ndarray:
    """Diagonal terms of the ``F_y`` series for ``P_n`` (either sign) at indices ``ks``."""
    a = abs(n)
    lq = math.log(q)
    lt = ks * lq + math.log(y)  # log(q^k y)
    u = -a * (a - 1) * lq + 2 * a * lt
    v = a * (a + 1) * lq + 2 * a * lt
    if n > 0:
        top, bottom = expit(u), expit(-v)
    else:
        top, bottom = expit(v), expit(-u)
    return top + bottom - 1.0


def telescoping_check(n: int, y, q, K: int = 64) -> TelescopingReport:
    """Compare three evaluations of ``<F_y, [P_n]>``.

    ``direct`` sums the diagonal terms ``k = -K..K``; ``split`` sums the
    same series regrouped as two one-sided logistic sums; ``closed`` is the
    finite sum left after shifting the index by ``n``.
    """
    if n < 1:
        raise ValueError("telescoping_check needs n >= 1")
    q, y = as_fraction(q), as_fraction(y)
    if not q < y <= 1:
        raise SpectrumError(f"y must lie in (q, 1] = ({q}, 1]")
    qf, yf = float(q), float(y)
    lq, ly = math.log(qf), math.log(yf)
    ks = np.arange(-K, K + 1)
    plus = _bott_terms(n, qf, yf, ks)
    minus = _bott_terms(-n, qf, yf, ks)
    direct = math.fsum(plus)

    def logit_arg(e):
        return e * lq + 2 * n * ly

    kpos = np.arange(0, K + 1)
    kneg = np.arange(1, K + 1)
    split = math.fsum(
        list(expit(logit_arg(-n * n + n + 2 * n * kpos)) - expit(logit_arg(n * n + n + 2 * n * kpos)))
        + list(-expit(-logit_arg(-n * n + n - 2 * n * kneg)) + expit(-logit_arg(n * n + n - 2 * n * kneg)))
    )
    kc = np.arange(0, n)
    xs = logit_arg(-n * n + n + 2 * n * kc)
    closed = math.fsum(list(expit(xs)) + list(expit(-xs)))

    # terms behave like e^{u_k} as k -> +inf and e^{-v_k} as k -> -inf, both with ratio q^{2n}
    ratio = qf ** (2 * n)
    u_next = logit_arg(-n * n + n + 2 * n * (K + 1))
    v_prev = logit_arg(n * n + n - 2 * n * (K + 1))
    tail = (math.exp(u_next) + math.exp(-v_prev)) / (1 - ratio)
    return TelescopingReport(
        n=n, q=q, y=y, K=K, direct=direct, split=split, closed=closed,
        difference=max(abs(direct - closed), abs(split - closed)),
        negative_mismatch=float(np.max(np.abs(plus + minus))),
        tail_bound=tail, limit=n,
    )

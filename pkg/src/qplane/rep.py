"""Finite windows of the representations on l2(Z).

``pi_y(U) e_n = e_{n-1}`` and ``pi_y(f) e_n = f(q^n y) e_n``; the classical
points act by ``ev_0`` on ``span{e_k : k > 0}`` and ``ev_inf`` on
``span{e_k : k <= 0}``.  Windows keep indices ``-K..K``; a shift that leaves
the window drops the amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .crossed import CrossedElement, CrossedMatrix, ev0, evinf
from .errors import SpectrumError
from .funcspace import QFunction
from .spectral import ScaledRational, SpectralSet, as_fraction

DEFAULT_WINDOW = 64
MACHINE_RESIDUAL = 8 * np.finfo(float).eps


def orbit_points(q, y, K: int) -> np.ndarray:
    """Float values of ``q^n y`` for ``n = -K..K``."""
    n = np.arange(-K, K + 1)
    return np.power(float(as_fraction(q)), n) * float(as_fraction(y))


def _values(f: QFunction, q, y, indices: np.ndarray) -> np.ndarray:
    if f.exact:
        qq, yy = as_fraction(q), as_fraction(y)
        return np.array([float(f.evaluate(yy * qq ** int(j))) for j in indices])
    return f.sample(np.power(float(as_fraction(q)), indices) * float(as_fraction(y)))


def check_witness(X: SpectralSet, y) -> Fraction:
    y = as_fraction(y)
    if not (X.q < y <= 1):
        raise SpectrumError(f"pi_y needs y in (q, 1] = ({X.q}, 1], got {y}")
    if not X.in_spectrum(y):
        raise SpectrumError(f"pi_y needs y in the spectrum; {y} is not")
    return y


@dataclass(frozen=True)
class TruncatedRep:
    """``pi_y`` restricted to the window ``span{e_-K, ..., e_K}``."""

    X: SpectralSet
    y: Fraction
    K: int = DEFAULT_WINDOW

    def __post_init__(self):
        object.__setattr__(self, "y", check_witness(self.X, self.y))
        if self.K < 1:
            raise ValueError("window K must be >= 1")

    @property
    def dim(self) -> int:
        return 2 * self.K + 1

    def _element_matrix(self, a: CrossedElement) -> np.ndarray:
        K, q = self.K, self.X.q
        if a.max_power > K:
            raise ValueError(f"U-power {a.max_power} exceeds the window K={K}")
        out = np.zeros((self.dim, self.dim))
        idx = np.arange(-K, K + 1)
        for k, f in a.terms:
            # f U^k sends e_m to f(q^{m-k} y) e_{m-k}
            src = idx[(idx - k >= -K) & (idx - k <= K)]
            dst = src - k
            out[dst + K, src + K] = _values(f, q, self.y, dst)
        if a.unital_part:
            out += float(a.unital_part) * np.eye(self.dim)
        return out

    def matrix(self, a) -> np.ndarray:
        if isinstance(a, CrossedElement):
            return self._element_matrix(a)
        return np.block([[self._element_matrix(e) for e in row] for row in a.entries])

    def diagonal(self, a: CrossedElement) -> np.ndarray:
        """Diagonal of ``pi_y(a)``; only the ``U^0`` coefficient contributes."""
        idx = np.arange(-self.K, self.K + 1)
        f0 = a.coefficients.get(0)
        diag = np.zeros(self.dim) if f0 is None else _values(f0, self.X.q, self.y, idx)
        return diag + float(a.unital_part)


def rep_pi_y(a, y, K: int = DEFAULT_WINDOW, X: SpectralSet | None = None) -> np.ndarray:
    return TruncatedRep(X or a.ambient, y, K).matrix(a)


def classical_diagonal(value_at_zero, value_at_infinity, K: int) -> np.ndarray:
    idx = np.arange(-K, K + 1)
    return np.where(idx > 0, float(value_at_zero), float(value_at_infinity))


def rep_pi0_piinf(a, K: int = DEFAULT_WINDOW) -> np.ndarray:
    """``(pi_0 + pi_inf)(a)``: ``ev_0(a)`` on indices ``k > 0``, ``ev_inf(a)`` on ``k <= 0``."""
    if isinstance(a, CrossedElement):
        return np.diag(classical_diagonal(ev0(a), evinf(a), K))
    return np.block([[rep_pi0_piinf(e, K) for e in row] for row in a.entries])


@dataclass
class ShiftModelReport:
    q: Fraction
    y: Fraction
    K: int
    residual_float: float
    residual_exact: Fraction
    abs_z_diagonal: list
    abs_z_exact: bool

    @property
    def passed(self) -> bool:
        return bool(self.residual_exact == 0 and self.abs_z_exact
                    and self.residual_float <= MACHINE_RESIDUAL)

    def to_dict(self) -> dict:
        return {
            "q": str(self.q),
            "y": str(self.y),
            "K": self.K,
            "residual_float": self.residual_float,
            "residual_exact": str(self.residual_exact),
            "abs_z_exact": self.abs_z_exact,
            "passed": self.passed,
        }


def shift_model_matrix(q, y, K: int) -> np.ndarray:
    """Truncated ``z`` with ``z e_n = q^n y e_{n-1}``."""
    q, y = as_fraction(q), as_fraction(y)
    Z = np.zeros((2 * K + 1, 2 * K + 1))
    for n in range(-K + 1, K + 1):
        Z[n - 1 + K, n + K] = float(y * q ** n)
    return Z


def shift_model_check(y, K: int = DEFAULT_WINDOW, q="1/2") -> ShiftModelReport:
    """Check ``z z* = q^2 z* z`` and ``|z| e_n = q^n y e_n`` on the window interior."""
    if K < 2:
        raise ValueError("shift_model_check needs K >= 2")
    q, y = as_fraction(q), as_fraction(y)
    Z = shift_model_matrix(q, y, K)
    lhs = Z @ Z.T
    rhs = float(q) ** 2 * (Z.T @ Z)
    inner = slice(1, 2 * K)  # indices -K+1 .. K-1
    lhs, rhs = lhs[inner, inner], rhs[inner, inner]
    # relative per entry: the diagonal spans q^{-2K} .. q^{2K}
    size = np.abs(lhs) + np.abs(rhs)
    rel = np.divide(np.abs(lhs - rhs), size, out=np.zeros_like(size), where=size > 0)
    residual_float = float(np.max(rel))

    # exact sparse pass: z is a weighted shift, so both products are diagonal
    weight = {n: ScaledRational(y, n, q) for n in range(-K + 1, K + 1)}  # z e_n = w_n e_{n-1}
    residual_exact = Fraction(0)
    for n in range(-K + 1, K):
        zz_star = weight[n + 1] * weight[n + 1]        # (z z*) e_n = w_{n+1}^2 e_n
        z_star_z = weight[n] * weight[n]               # (z* z) e_n = w_n^2 e_n
        residual_exact = max(residual_exact, abs(zz_star.value - q * q * z_star_z.value))
    diag, exact = [], True
    for n in range(-K + 1, K):
        abs_z = (weight[n] * weight[n]).sqrt()
        diag.append(abs_z)
        exact = exact and abs_z == ScaledRational(y, n, q) and abs_z.m == n
    return ShiftModelReport(q, y, K, residual_float, residual_exact, diag, exact)


@dataclass
class DecayReport:
    windows: list
    sigmas: list
    nonincreasing: bool
    rate: float | None

    def to_dict(self) -> dict:
        return {"windows": self.windows, "sigmas": self.sigmas,
                "nonincreasing": self.nonincreasing, "rate": self.rate}


def compactness_decay(a: CrossedElement, y, K_list: Sequence[int],
                      X: SpectralSet | None = None) -> DecayReport:
    """Largest singular value of ``pi_y(a) - (pi_0 + pi_inf)(a)`` far out in the window."""
    X = X or a.ambient
    sigmas = []
    for K in K_list:
        D = TruncatedRep(X, y, K).matrix(a) - rep_pi0_piinf(a, K)
        idx = np.arange(-K, K + 1)
        far = np.abs(idx) > K / 2
        sub = D[np.ix_(far, far)]
        sigmas.append(float(np.linalg.norm(sub, 2)) if sub.size else 0.0)
    nonincreasing = all(b <= a_ + 1e-15 for a_, b in zip(sigmas, sigmas[1:]))
    rate = None
    pos = [(K, s) for K, s in zip(K_list, sigmas) if s > 0]
    if len(pos) >= 2:
        (k1, s1), (k2, s2) = pos[0], pos[-1]
        rate = float(np.exp((np.log(s2) - np.log(s1)) / ((k2 - k1) / 2)))
    return DecayReport(list(K_list), sigmas, nonincreasing, rate)

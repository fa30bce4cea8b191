"""Exact q-invariant spectral sets.

A spectral set is ``X = {0} u U_n q^n Y`` where ``Y`` is a finite union of
closed rational intervals strictly inside ``(q, 1)``, or the whole half line
``[0, inf)``.  Everything here is exact rational arithmetic.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import SpectrumError

Rational = Union[Fraction, int]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions, rational strings ("3/5", "0.52") and ScaledRationals."""
    if isinstance(x, ScaledRational):
        return x.value
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SpectrumError(f"not a rational number: {x!r}") from exc
    if isinstance(x, float):
        # floats are accepted only when they are exactly representable short decimals
        return Fraction(repr(x))
    raise TypeError(f"cannot interpret {x!r} as a rational")


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class ScaledRational:
    """The exact real number ``r * q**m``.

    Keeping the exponent separate makes multiplication by ``q`` a shift of
    ``m`` and keeps the provenance of points like ``q^n y`` visible.
    """

    r: Fraction
    m: int
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "q", Fraction(self.q))
        if not 0 < self.q < 1:
            raise SpectrumError(f"q must lie in (0, 1), got {self.q}")

    @property
    def value(self) -> Fraction:
        return self.r * self.q ** self.m

    def times_q(self, k: int = 1) -> "ScaledRational":
        return ScaledRational(self.r, self.m + k, self.q)

    def sqrt(self) -> "ScaledRational":
        """Exact square root; requires a square ``r`` and an even exponent."""
        if self.r < 0 or self.m % 2:
            raise ValueError(f"{self} has no exact rational square root")
        num, den = self.r.numerator, self.r.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn != num or rd * rd != den:
            raise ValueError(f"{self} has no exact rational square root")
        return ScaledRational(Fraction(rn, rd), self.m // 2, self.q)

    def __mul__(self, other):
        if isinstance(other, ScaledRational):
            if other.q != self.q:
                raise ValueError("ScaledRationals over different q")
            return ScaledRational(self.r * other.r, self.m + other.m, self.q)
        return ScaledRational(self.r * as_fraction(other), self.m, self.q)

    __rmul__ = __mul__

    def __float__(self):
        return float(self.value)

    def __eq__(self, other):
        try:
            return self.value == as_fraction(other)
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        if isinstance(other, float):
            return self.value < other
        return self.value < as_fraction(other)

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"ScaledRational({self.r}*q^{self.m}, q={self.q})"


class SpectrumKind(Enum):
    FULL = "full"
    GENERIC = "generic"


@dataclass(frozen=True)
class SpectralSet:
    """``X = spec(|z|)`` described by ``q`` and the generator set ``Y``.

    Use :meth:`full` and :meth:`generic` rather than the raw constructor; the
    latter normalizes and validates the interval list.
    """

    q: Fraction
    kind: SpectrumKind
    intervals: tuple[tuple[Fraction, Fraction], ...] = ()

    @classmethod
    def full(cls, q) -> "SpectralSet":
        q = as_fraction(q)
        _check_q(q)
        return cls(q, SpectrumKind.FULL, ())

    @classmethod
    def generic(cls, q, intervals: Iterable[Sequence]) -> "SpectralSet":
        q = as_fraction(q)
        _check_q(q)
        ivs = []
        for iv in intervals:
            if len(iv) != 2:
                raise SpectrumError(f"interval must have two endpoints: {iv!r}")
            a, b = as_fraction(iv[0]), as_fraction(iv[1])
            if a > b:
                raise SpectrumError(f"empty interval [{a}, {b}]")
            ivs.append((a, b))
        if not ivs:
            raise SpectrumError("Y must be non-empty")
        ivs.sort()
        for a, b in ivs:
            if not (q < a and b < 1):
                raise SpectrumError(
                    f"interval [{a}, {b}] is not strictly inside (q, 1) = ({q}, 1)"
                )
        for (_, b1), (a2, _) in zip(ivs, ivs[1:]):
            if not b1 < a2:
                raise SpectrumError(f"intervals overlap or touch at {a2}")
        return cls(q, SpectrumKind.GENERIC, tuple(ivs))

    @property
    def is_full(self) -> bool:
        return self.kind is SpectrumKind.FULL

    @property
    def n_components(self) -> int:
        return len(self.intervals)

    def scaled(self, r, m: int = 0) -> ScaledRational:
        return ScaledRational(as_fraction(r), m, self.q)

    def fundamental_representative(self, t) -> tuple[Fraction, int]:
        """Return ``(w, m)`` with ``t = w * q**m`` and ``w`` in ``(q, 1]``."""
        v = as_fraction(t)
        if v <= 0:
            raise SpectrumError(f"no fundamental representative for {v}")
        w, m = v, 0
        while w > 1:
            w *= self.q
            m -= 1
        while w <= self.q:
            w /= self.q
            m += 1
        return w, m

    def in_spectrum(self, t) -> bool:
        v = as_fraction(t)
        if v < 0:
            raise SpectrumError(f"spectral points are nonnegative, got {v}")
        if v == 0 or self.is_full:
            return True
        w, _ = self.fundamental_representative(v)
        return any(a <= w <= b for a, b in self.intervals)

    def to_config(self) -> dict:
        if self.is_full:
            return {"q": str(self.q), "spectrum": "full"}
        return {
            "q": str(self.q),
            "spectrum": {"intervals": [[str(a), str(b)] for a, b in self.intervals]},
        }


def _check_q(q: Fraction) -> None:
    if not 0 < q < 1:
        raise SpectrumError(f"q must lie in (0, 1), got {q}")


def in_spectrum(X: SpectralSet, t) -> bool:
    return X.in_spectrum(t)


@dataclass(frozen=True)
class GapStructure:
    """Gaps of ``(q, s] \\ Y`` and components of ``Y``, both listed top-down.

    ``gaps[i]`` is the open gap directly below ``components[i]``, so
    ``samples[j] < witnesses[g]`` exactly when ``j >= g``.
    """

    q: Fraction
    s: ScaledRational
    gaps: tuple[tuple[Fraction, Fraction], ...]
    samples: tuple[Fraction, ...]
    components: tuple[tuple[Fraction, Fraction], ...]
    witnesses: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def lowest_gap(self) -> int:
        return len(self.gaps) - 1

    def component_of(self, y) -> int:
        y = as_fraction(y)
        for i, (a, b) in enumerate(self.components):
            if a <= y <= b:
                return i
        raise SpectrumError(f"{y} lies in no component of Y")


def gap_structure(X: SpectralSet) -> GapStructure:
    if X.is_full:
        raise SpectrumError("no gap structure for full spectrum")
    if not X.intervals:
        raise SpectrumError("Y has no components")
    comps = tuple(reversed(X.intervals))
    gaps = []
    for i, (a, _) in enumerate(comps):
        below = comps[i + 1][1] if i + 1 < len(comps) else X.q
        gaps.append((below, a))
    return GapStructure(
        q=X.q,
        s=X.scaled(comps[0][1]),
        gaps=tuple(gaps),
        samples=tuple((lo + hi) / 2 for lo, hi in gaps),
        components=comps,
        witnesses=tuple((a + b) / 2 for a, b in comps),
    )

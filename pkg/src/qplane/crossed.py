"""Finite sums ``c + sum_k f_k U^k`` in the crossed product, and matrices of them.

Normal form keeps every coefficient to the left of its ``U`` power.  The
covariance relation is ``U f U* = alpha_q(f)`` with ``alpha_q(f)(x) = f(qx)``,
so moving ``U^m`` past a function shifts it:

    (f U^m)(g U^n) = f * alpha_q^m(g) * U^(m+n)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import AmbientMismatchError, MembershipError
from .funcspace import (
    DEFAULT_DENSITY,
    QFunction,
    StepFunction,
    _as_qfunction,
    geometric_grid,
)
from .spectral import SpectralSet, as_fraction


def _scalar(c):
    if isinstance(c, float):
        return c
    return as_fraction(c)


@dataclass(frozen=True, eq=False)
class CrossedElement:
    terms: tuple
    ambient: SpectralSet
    unital_part: object = Fraction(0)

    def __post_init__(self):
        merged: dict[int, QFunction] = {}
        for k, f in self.terms:
            f = _as_qfunction(f)
            merged[k] = merged[k] + f if k in merged else f
        terms = tuple(sorted((k, f) for k, f in merged.items() if not f.is_zero()))
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "unital_part", _scalar(self.unital_part))

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_coefficients(cls, coefficients: Mapping[int, QFunction], ambient,
                          unital_part=0) -> "CrossedElement":
        return cls(tuple(coefficients.items()), ambient, unital_part)

    @classmethod
    def function(cls, f, ambient) -> "CrossedElement":
        return cls(((0, f),), ambient)

    @classmethod
    def monomial(cls, f, k: int, ambient) -> "CrossedElement":
        return cls(((k, f),), ambient)

    @classmethod
    def unit(cls, ambient) -> "CrossedElement":
        return cls((), ambient, 1)

    @classmethod
    def zero(cls, ambient) -> "CrossedElement":
        return cls((), ambient, 0)

    @classmethod
    def shift(cls, ambient, k: int = 1) -> "CrossedElement":
        """``U^k`` itself; lives in the crossed product, not in the q-normal algebra."""
        return cls(((k, StepFunction.constant(1)),), ambient)

    # -- structure --------------------------------------------------------

    @property
    def q(self) -> Fraction:
        return self.ambient.q

    @property
    def coefficients(self) -> dict[int, QFunction]:
        return dict(self.terms)

    def coeff(self, k: int) -> QFunction:
        return self.coefficients.get(k, StepFunction())

    @property
    def powers(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.terms)

    @property
    def max_power(self) -> int:
        return max((abs(k) for k in self.powers), default=0)

    @property
    def exact(self) -> bool:
        return all(f.exact for _, f in self.terms) and not isinstance(self.unital_part, float)

    def _check(self, other: "CrossedElement") -> None:
        if self.ambient != other.ambient:
            raise AmbientMismatchError("elements live over different spectral sets")

    # -- algebra ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, CrossedElement):
            return CrossedElement(self.terms, self.ambient, self.unital_part + _scalar(other))
        self._check(other)
        return CrossedElement(self.terms + other.terms, self.ambient,
                              self.unital_part + other.unital_part)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "CrossedElement":
        c = _scalar(c)
        return CrossedElement(tuple((k, c * f) for k, f in self.terms), self.ambient,
                              self.unital_part * c)

    def __mul__(self, other):
        if isinstance(other, CrossedElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __matmul__(self, other):
        return multiply(self, other)

    def adjoint(self) -> "CrossedElement":
        return adjoint(self)

    @property
    def star(self) -> "CrossedElement":
        return adjoint(self)

    # -- comparison -------------------------------------------------------

    def normalized_terms(self) -> dict[int, QFunction]:
        """Coefficients with the unital part folded into ``k = 0`` as a constant."""
        coeffs = self.coefficients
        if self.unital_part:
            coeffs[0] = coeffs.get(0, StepFunction()) + StepFunction.constant(self.unital_part)
        return {k: f for k, f in coeffs.items() if not f.is_zero()}

    def sup_error(self, k_range: int = 64, density: int = DEFAULT_DENSITY) -> tuple[float, bool]:
        """Largest sup-norm over all coefficients, and whether it is exact."""
        err, exact = 0.0, True
        grid = None
        for _, f in self.normalized_terms().items():
            if isinstance(f, StepFunction):
                err = max(err, max(float(abs(v)) for _, v in f.pieces))
                continue
            exact = False
            if grid is None:
                grid = geometric_grid(self.q, -k_range, k_range, density)
            err = max(err, float(np.max(np.abs(f.sample(grid)))))
        return err, exact

    def is_zero(self, tol: float = 1e-10, k_range: int = 64) -> bool:
        err, exact = self.sup_error(k_range)
        return err == 0 if exact else err <= tol

    def equals(self, other: "CrossedElement", tol: float = 1e-10) -> bool:
        return (self - other).is_zero(tol)

    def __eq__(self, other):
        if not isinstance(other, CrossedElement):
            return NotImplemented
        return self.ambient == other.ambient and self.equals(other)

    __hash__ = None

    def __repr__(self):
        parts = []
        if self.unital_part:
            parts.append(f"{self.unital_part}*1")
        parts += [f"{f!r}*U^{k}" for k, f in self.terms]
        return "CrossedElement(" + (" + ".join(parts) or "0") + ")"


def multiply(a: CrossedElement, b: CrossedElement) -> CrossedElement:
    a._check(b)
    q = a.q
    terms = []
    for m, f in a.terms:
        for n, g in b.terms:
            terms.append((m + n, f * g.alpha_shift(m, q)))
        if b.unital_part:
            terms.append((m, b.unital_part * f))
    if a.unital_part:
        terms += [(n, a.unital_part * g) for n, g in b.terms]
    return CrossedElement(tuple(terms), a.ambient, a.unital_part * b.unital_part)


def adjoint(a: CrossedElement) -> CrossedElement:
    """``(f U^n)* = alpha_q^{-n}(conj f) U^{-n}``."""
    q = a.q
    terms = tuple((-n, f.conj().alpha_shift(-n, q)) for n, f in a.terms)
    c = a.unital_part
    return CrossedElement(terms, a.ambient, c.conjugate() if isinstance(c, complex) else c)


def _vanishes(value, tol: float = 0.0) -> bool:
    return value is not None and abs(value) <= tol


def _declared_infinity(f: QFunction):
    try:
        return f.ev_at_infinity()
    except ValueError:
        return None


def is_member(a: CrossedElement, unital: bool = False) -> bool:
    """Membership in the q-normal algebra, or in its unitization.

    Off-diagonal powers must vanish at 0 and at infinity.  The non-unital
    algebra additionally needs ``f_0(inf) = 0`` and no unital part.
    """
    for k, f in a.terms:
        at_inf = _declared_infinity(f)
        if k != 0:
            if not _vanishes(f.ev_at_zero()) or not _vanishes(at_inf):
                return False
        elif at_inf is None:
            return False
        elif not unital and not _vanishes(at_inf):
            return False
    return unital or a.unital_part == 0


def ev0(a):
    """``sum_k f_k(0) + c``; entrywise on matrices."""
    if isinstance(a, CrossedMatrix):
        return a.map_entries(ev0)
    return sum((f.ev_at_zero() for _, f in a.terms), Fraction(0)) + a.unital_part


def evinf(a):
    """``f_0(inf) + c``; entrywise on matrices."""
    if isinstance(a, CrossedMatrix):
        return a.map_entries(evinf)
    for k, f in a.terms:
        if k != 0:
            at_inf = _declared_infinity(f)
            if at_inf is None or at_inf != 0:
                raise MembershipError(
                    f"coefficient of U^{k} does not vanish at infinity; ev_inf is undefined"
                )
    f0 = a.coefficients.get(0)
    if f0 is None:
        return Fraction(0) + a.unital_part
    at_inf = _declared_infinity(f0)
    if at_inf is None:
        raise MembershipError("coefficient of U^0 has no declared limit at infinity")
    return at_inf + a.unital_part


@dataclass(frozen=True, eq=False)
class CrossedMatrix:
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("CrossedMatrix must be square and non-empty")
        ambient = rows[0][0].ambient
        if any(e.ambient != ambient for r in rows for e in r):
            raise AmbientMismatchError("matrix entries live over different spectral sets")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_element(cls, a: CrossedElement) -> "CrossedMatrix":
        return cls(((a,),))

    @classmethod
    def identity(cls, n: int, ambient: SpectralSet) -> "CrossedMatrix":
        unit, zero = CrossedElement.unit(ambient), CrossedElement.zero(ambient)
        return cls(tuple(tuple(unit if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, elements: Sequence[CrossedElement]) -> "CrossedMatrix":
        zero = CrossedElement.zero(elements[0].ambient)
        n = len(elements)
        return cls(tuple(
            tuple(elements[i] if i == j else zero for j in range(n)) for i in range(n)
        ))

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def ambient(self) -> SpectralSet:
        return self.entries[0][0].ambient

    @property
    def max_power(self) -> int:
        return max(e.max_power for r in self.entries for e in r)

    @property
    def exact(self) -> bool:
        return all(e.exact for r in self.entries for e in r)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def map_entries(self, fn) -> np.ndarray:
        out = np.empty((self.size, self.size), dtype=object)
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                out[i, j] = fn(e)
        return out

    def _zip(self, other: "CrossedMatrix", op) -> "CrossedMatrix":
        if other.size != self.size:
            raise ValueError("matrix sizes differ")
        return CrossedMatrix(tuple(
            tuple(op(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)
        ))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __matmul__(self, other: "CrossedMatrix") -> "CrossedMatrix":
        if other.size != self.size:
            raise ValueError("matrix sizes differ")
        n = self.size
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = CrossedElement.zero(self.ambient)
                for k in range(n):
                    acc = acc + multiply(self.entries[i][k], other.entries[k][j])
                row.append(acc)
            rows.append(tuple(row))
        return CrossedMatrix(tuple(rows))

    __mul__ = __matmul__

    def adjoint(self) -> "CrossedMatrix":
        n = self.size
        return CrossedMatrix(tuple(
            tuple(adjoint(self.entries[j][i]) for j in range(n)) for i in range(n)
        ))

    def direct_sum(self, other: "CrossedMatrix") -> "CrossedMatrix":
        zero = CrossedElement.zero(self.ambient)
        n, m = self.size, other.size
        rows = [tuple(self.entries[i]) + (zero,) * m for i in range(n)]
        rows += [(zero,) * n + tuple(other.entries[i]) for i in range(m)]
        return CrossedMatrix(tuple(rows))

    def is_member(self, unital: bool = False) -> bool:
        return all(is_member(e, unital) for r in self.entries for e in r)

    def sup_error(self, k_range: int = 64, density: int = DEFAULT_DENSITY) -> tuple[float, bool]:
        err, exact = 0.0, True
        for r in self.entries:
            for e in r:
                e_err, e_exact = e.sup_error(k_range, density)
                err, exact = max(err, e_err), exact and e_exact
        return err, exact

    def equals(self, other: "CrossedMatrix", tol: float = 1e-10) -> bool:
        err, exact = (self - other).sup_error()
        return err == 0 if exact else err <= tol


def as_matrix(p) -> CrossedMatrix:
    if isinstance(p, CrossedMatrix):
        return p
    if isinstance(p, CrossedElement):
        return CrossedMatrix.from_element(p)
    realized = getattr(p, "realized", None)
    if isinstance(realized, CrossedMatrix):
        return realized
    raise TypeError(f"cannot view {p!r} as a CrossedMatrix")


def block_diagonal(blocks: Iterable) -> CrossedMatrix:
    mats = [as_matrix(b) for b in blocks]
    out = mats[0]
    for m in mats[1:]:
        out = out.direct_sum(m)
    return out

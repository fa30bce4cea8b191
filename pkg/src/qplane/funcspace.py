"""Functions on the spectral set: exact step functions and numeric smooth ones.

Step functions carry rational breakpoints and values, so sums, products and
the shift ``alpha_q`` are exact and equality is decidable.  Smooth functions
are opaque vectorized evaluators plus declared boundary values at 0 and
infinity; they are compared by sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Optional

import numpy as np

from .spectral import as_fraction

INF = math.inf

DEFAULT_DENSITY = 1024
DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class Interval:
    """An interval of ``[0, inf]`` with rational endpoints; ``hi`` may be ``INF``."""

    lo: Fraction
    hi: object
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        if self.hi != INF:
            object.__setattr__(self, "hi", as_fraction(self.hi))
        else:
            object.__setattr__(self, "hi_closed", False)
        if self.lo < 0:
            raise ValueError(f"interval endpoint {self.lo} is negative")
        if self.lo > self.hi:
            raise ValueError(f"interval ({self.lo}, {self.hi}) is reversed")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError(f"degenerate interval at {self.lo} must be closed")

    def contains(self, t) -> bool:
        if t == INF:
            return self.hi == INF
        above = t >= self.lo if self.lo_closed else t > self.lo
        below = t <= self.hi if self.hi_closed else t < self.hi
        return above and below

    def mask(self, t: np.ndarray) -> np.ndarray:
        lo, hi = float(self.lo), float(self.hi)
        above = t >= lo if self.lo_closed else t > lo
        below = t <= hi if self.hi_closed else t < hi
        return above & below

    def scaled(self, factor: Fraction) -> "Interval":
        hi = self.hi if self.hi == INF else self.hi * factor
        return Interval(self.lo * factor, hi, self.lo_closed, self.hi_closed)

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        hi = "inf" if self.hi == INF else str(self.hi)
        return f"{left}{self.lo},{hi}{right}"


class QFunction:
    """Common interface of :class:`StepFunction` and :class:`SmoothFunction`."""

    def sample(self, t) -> np.ndarray:
        raise NotImplementedError

    def evaluate(self, t):
        raise NotImplementedError

    def alpha_shift(self, m: int, q) -> "QFunction":
        raise NotImplementedError

    @property
    def exact(self) -> bool:
        return False

    def ev_at_zero(self):
        return self.evaluate(0)

    def ev_at_infinity(self):
        return self.evaluate(INF)

    def support_bounds(self):
        """Closed ``(lo, hi)`` outside which the function vanishes, or None."""
        return None

    def is_zero(self) -> bool:
        return False

    def conj(self) -> "QFunction":
        return self

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __mul__(self, other):
        return multiply(self, other)

    def __rmul__(self, other):
        return multiply(other, self)

    def __neg__(self):
        return multiply(Fraction(-1), self)

    def __sub__(self, other):
        return add(self, -_as_qfunction(other))

    def __rsub__(self, other):
        return add(other, -self)

    def __call__(self, t):
        return self.evaluate(t)


@dataclass(frozen=True, eq=False)
class StepFunction(QFunction):
    """Finite rational combination of interval indicators, kept canonical.

    The canonical form has disjoint pieces, no zero pieces, and adjacent
    pieces with equal values merged, so ``==`` is exact function equality.
    """

    pieces: tuple = ()

    def __post_init__(self):
        pieces = tuple((iv, as_fraction(v)) for iv, v in self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if not _is_canonical(pieces):
            object.__setattr__(self, "pieces", _canonicalize(pieces))

    @classmethod
    def indicator(cls, lo, hi, lo_closed=False, hi_closed=False) -> "StepFunction":
        return cls(((Interval(lo, hi, lo_closed, hi_closed), Fraction(1)),))

    @classmethod
    def constant(cls, c) -> "StepFunction":
        return cls(((Interval(0, INF, True, False), as_fraction(c)),))

    @property
    def exact(self) -> bool:
        return True

    def breakpoints(self) -> list[Fraction]:
        pts = set()
        for iv, _ in self.pieces:
            pts.add(iv.lo)
            if iv.hi != INF:
                pts.add(iv.hi)
        return sorted(pts)

    def evaluate(self, t):
        if t == INF:
            return self.ev_at_infinity()
        t = as_fraction(t)
        if t < 0:
            raise ValueError(f"functions are defined on [0, inf), got t={t}")
        for iv, v in self.pieces:
            if iv.contains(t):
                return v
        return Fraction(0)

    def ev_at_infinity(self):
        for iv, v in self.pieces:
            if iv.hi == INF:
                return v
        return Fraction(0)

    def sample(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for iv, v in self.pieces:
            out = np.where(iv.mask(t), float(v), out)
        return out

    def alpha_shift(self, m: int, q) -> "StepFunction":
        if m == 0:
            return self
        factor = as_fraction(q) ** (-m)
        return StepFunction(tuple((iv.scaled(factor), v) for iv, v in self.pieces))

    def support_bounds(self):
        if not self.pieces:
            return None
        return self.pieces[0][0].lo, self.pieces[-1][0].hi

    def is_zero(self) -> bool:
        return not self.pieces

    def __eq__(self, other):
        if isinstance(other, StepFunction):
            return self.pieces == other.pieces
        return NotImplemented

    def __hash__(self):
        return hash(self.pieces)

    def __repr__(self):
        if not self.pieces:
            return "StepFunction(0)"
        body = " + ".join(f"{v}*chi{iv}" for iv, v in self.pieces)
        return f"StepFunction({body})"


def _is_canonical(pieces) -> bool:
    if any(v == 0 for _, v in pieces):
        return False
    for (a, va), (b, vb) in zip(pieces, pieces[1:]):
        if a.hi > b.lo or (a.hi == b.lo and a.hi_closed and b.lo_closed):
            return False
        touching = a.hi == b.lo and (a.hi_closed or b.lo_closed)
        if touching and va == vb:
            return False
    return True


def _atoms(breaks: list[Fraction]):
    """Points and open cells of the partition of ``[0, inf)`` by ``breaks``."""
    for i, b in enumerate(breaks):
        yield Interval(b, b, True, True), b
        if i + 1 < len(breaks):
            nxt = breaks[i + 1]
            yield Interval(b, nxt), (b + nxt) / 2
        else:
            yield Interval(b, INF), b + 1


def _from_evaluator(breaks, value_at) -> tuple:
    breaks = sorted(set(breaks) | {Fraction(0)})
    atoms = list(_atoms(breaks))
    return _merge(atoms, [value_at(rep) for _, rep in atoms])


def _merge(atoms, vals) -> tuple:
    merged = []
    for (atom, _), v in zip(atoms, vals):
        if merged and merged[-1][1] == v:
            prev = merged[-1][0]
            merged[-1] = (Interval(prev.lo, atom.hi, prev.lo_closed, atom.hi_closed), v)
        else:
            merged.append((atom, v))
    return tuple((iv, v) for iv, v in merged if v != 0)


def _sweep(pieces, reps) -> list:
    """Values of a canonical step function at ascending points, in one pass."""
    out, i = [], 0
    for t in reps:
        while i < len(pieces) and (pieces[i][0].hi < t
                                   or (pieces[i][0].hi == t and not pieces[i][0].hi_closed)):
            i += 1
        hit = i < len(pieces) and pieces[i][0].contains(t)
        out.append(pieces[i][1] if hit else Fraction(0))
    return out


def _canonicalize(pieces) -> tuple:
    breaks = []
    for iv, _ in pieces:
        breaks.append(iv.lo)
        if iv.hi != INF:
            breaks.append(iv.hi)

    def value_at(t):
        return sum((v for iv, v in pieces if iv.contains(t)), Fraction(0))

    return _from_evaluator(breaks, value_at)


def _combine_steps(f: StepFunction, g: StepFunction, op) -> StepFunction:
    breaks = sorted(set(f.breakpoints()) | set(g.breakpoints()) | {Fraction(0)})
    atoms = list(_atoms(breaks))
    reps = [rep for _, rep in atoms]
    vals = [op(a, b) for a, b in zip(_sweep(f.pieces, reps), _sweep(g.pieces, reps))]
    return StepFunction(_merge(atoms, vals))


@dataclass(frozen=True, eq=False)
class SmoothFunction(QFunction):
    """A numeric function of ``t >= 0`` given by a vectorized evaluator.

    ``shift`` records a pending ``alpha_q**shift``; keeping it symbolic makes
    ``alpha^m o alpha^k = alpha^(m+k)`` hold bit-for-bit.  ``support`` is a
    closed interval outside which the function is identically zero.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    value_at_zero: float
    value_at_infinity: Optional[float]
    support: Optional[tuple[float, float]] = None
    shift: int = 0
    q: Optional[Fraction] = None
    name: str = ""

    def sample(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.shift:
            t = t * float(self.q ** self.shift)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            return np.broadcast_to(np.asarray(self.fn(t), dtype=float), t.shape)

    def evaluate(self, t):
        if t == INF:
            if self.value_at_infinity is None:
                raise ValueError(f"{self!r} has no declared limit at infinity")
            return self.value_at_infinity
        if t == 0:
            return self.value_at_zero
        if t < 0:
            raise ValueError(f"functions are defined on [0, inf), got t={t}")
        return float(self.sample(float(t)))

    def alpha_shift(self, m: int, q) -> "SmoothFunction":
        if m == 0:
            return self
        q = as_fraction(q)
        if self.q is not None and self.shift and self.q != q:
            raise ValueError("alpha shifts over different q")
        support = None
        if self.support is not None:
            factor = float(q ** (-m))
            support = (self.support[0] * factor, self.support[1] * factor)
        return SmoothFunction(
            self.fn, self.value_at_zero, self.value_at_infinity, support,
            self.shift + m, q, self.name,
        )

    def support_bounds(self):
        return self.support

    def conj(self) -> "SmoothFunction":
        return self

    def check_boundary_values(self, q, far: int = 40, tol: float = 1e-8) -> bool:
        """Spot-check the declared boundary values at ``0`` and ``q**-far``."""
        at0 = float(self.sample(0.0))
        if abs(at0 - self.value_at_zero) > tol:
            return False
        if self.value_at_infinity is None:
            return True
        far_t = float(as_fraction(q) ** (-far))
        return abs(float(self.sample(far_t)) - self.value_at_infinity) <= tol

    def __repr__(self):
        tag = self.name or "smooth"
        return f"SmoothFunction({tag}, shift={self.shift})"


def _as_qfunction(x) -> QFunction:
    if isinstance(x, QFunction):
        return x
    return StepFunction.constant(x)


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, float)) and not isinstance(x, bool)


def _opt(op, a, b):
    if a is None or b is None:
        return None
    return op(a, b)


def add(f, g) -> QFunction:
    f, g = _as_qfunction(f), _as_qfunction(g)
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    if isinstance(f, StepFunction) and isinstance(g, StepFunction):
        return _combine_steps(f, g, lambda a, b: a + b)
    sf, sg = f.support_bounds(), g.support_bounds()
    support = None
    if sf is not None and sg is not None and sf[1] != INF and sg[1] != INF:
        support = (float(min(sf[0], sg[0])), float(max(sf[1], sg[1])))
    return SmoothFunction(
        lambda t: f.sample(t) + g.sample(t),
        float(f.ev_at_zero()) + float(g.ev_at_zero()),
        _opt(lambda a, b: float(a) + float(b), _safe_inf(f), _safe_inf(g)),
        support,
        name="sum",
    )


def multiply(f, g) -> QFunction:
    if _is_scalar(f):
        f, g = g, f
    if _is_scalar(g):
        f = _as_qfunction(f)
        if isinstance(f, StepFunction) and not isinstance(g, float):
            c = as_fraction(g)
            return StepFunction(tuple((iv, v * c) for iv, v in f.pieces))
        c = float(g)
        if c == 0:
            return StepFunction()
        return SmoothFunction(
            lambda t: c * f.sample(t),
            c * float(f.ev_at_zero()),
            _opt(lambda a, _: c * float(a), _safe_inf(f), 0.0),
            f.support_bounds(),
            name="scaled",
        )
    f, g = _as_qfunction(f), _as_qfunction(g)
    if f.is_zero():
        return f
    if g.is_zero():
        return g
    if isinstance(f, StepFunction) and isinstance(g, StepFunction):
        return _combine_steps(f, g, lambda a, b: a * b)
    if disjoint_supports(f, g):
        return StepFunction()
    support = _intersect(f.support_bounds(), g.support_bounds())
    return SmoothFunction(
        lambda t: f.sample(t) * g.sample(t),
        float(f.ev_at_zero()) * float(g.ev_at_zero()),
        _opt(lambda a, b: float(a) * float(b), _safe_inf(f), _safe_inf(g)),
        support,
        name="product",
    )


def _safe_inf(f: QFunction):
    try:
        return f.ev_at_infinity()
    except ValueError:
        return None


def _intersect(a, b):
    if a is None:
        return None if b is None else (float(b[0]), float(b[1]))
    if b is None:
        return float(a[0]), float(a[1])
    return float(max(a[0], b[0])), float(min(a[1], b[1]))


def disjoint_supports(f: QFunction, g: QFunction) -> bool:
    """True when the closed supports are disjoint, i.e. ``f*g == 0`` for sure."""
    a, b = f.support_bounds(), g.support_bounds()
    if a is None or b is None:
        return False
    return a[1] < b[0] or b[1] < a[0]


def alpha_shift(f: QFunction, m: int, q) -> QFunction:
    """``x -> f(q**m x)``."""
    return f.alpha_shift(m, q)


def evaluate(f: QFunction, t):
    return f.evaluate(t)


def ev_at_zero(f: QFunction):
    return f.ev_at_zero()


def ev_at_infinity(f: QFunction):
    return f.ev_at_infinity()


def geometric_grid(q, k_lo: int, k_hi: int, density: int = DEFAULT_DENSITY) -> np.ndarray:
    """``{0}`` plus ``density`` log-spaced points in each ``q**k * (q, 1]``."""
    qf = float(as_fraction(q))
    s = np.arange(density) / density
    ks = np.arange(k_lo, k_hi + 1)
    pts = qf ** (ks[:, None] + s[None, :])
    return np.concatenate(([0.0], np.sort(pts.ravel())))


def sup_distance(f: QFunction, g: QFunction, q, k_range: int = 40,
                 density: int = DEFAULT_DENSITY) -> float:
    grid = geometric_grid(q, -k_range, k_range, density)
    return float(np.max(np.abs(f.sample(grid) - g.sample(grid))))


def functions_equal(f: QFunction, g: QFunction, q, tol: float = DEFAULT_TOL,
                    k_range: int = 40, density: int = DEFAULT_DENSITY) -> bool:
    """Exact for two step functions, grid sampling otherwise."""
    if isinstance(f, StepFunction) and isinstance(g, StepFunction):
        return f == g
    fi, gi = _safe_inf(f), _safe_inf(g)
    if (fi is None) != (gi is None):
        return False
    if fi is not None and abs(float(fi) - float(gi)) > tol:
        return False
    return sup_distance(f, g, q, k_range, density) <= tol


class Bumps(NamedTuple):
    phi: SmoothFunction
    h: SmoothFunction
    f: SmoothFunction


def bump_phi_h_fn(q, n: int) -> Bumps:
    """Ramp ``phi``, bump ``h = sqrt(phi(1-phi))`` and the plateau ``f_n``.

    ``phi`` is the linear ramp from 0 at ``q`` to 1 at ``1``, clamped outside
    ``[q, 1]``.
    """
    if n <= 0:
        raise ValueError(f"n must be a positive integer, got {n}")
    qq = as_fraction(q)
    qf = float(qq)
    qn = float(qq ** n)
    c = float(qq ** (1 - n))
    d = float(qq ** (-n))

    def phi(t):
        return np.clip((t - qf) / (1.0 - qf), 0.0, 1.0)

    def h(t):
        p = phi(t)
        return np.sqrt(p * (1.0 - p))

    def fn(t):
        return np.select(
            [(t >= qf) & (t <= 1.0), (t > 1.0) & (t < c), (t >= c) & (t <= d)],
            [phi(t), 1.0, 1.0 - phi(qn * t)],
            default=0.0,
        )

    return Bumps(
        phi=SmoothFunction(phi, 0.0, 1.0, name="phi"),
        h=SmoothFunction(h, 0.0, 0.0, (qf, 1.0), name="h"),
        f=SmoothFunction(fn, 0.0, 0.0, (qf, d), name=f"f_{n}"),
    )

"""K-groups from spectral data and decomposition of classes in the generator basis."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import sympy

from .crossed import as_matrix
from .errors import LatticeError, NonIntegralError
from .funcspace import Interval
from .pairing import PairingResult, homology_family, pair
from .projlib import ProjectionSpec, bott, complement, indicator, powers_rieffel, unit
from .spectral import GapStructure, SpectralSet, gap_structure

COUNTABLY_INFINITE = "countably infinite"
CHI_LOW = "χ_[0,q)"
CHI_LOWEST_GAP = "χ_(q,1)"


def _gap_name(G: GapStructure, j: int) -> str:
    return CHI_LOWEST_GAP if j == G.lowest_gap else f"χ_({G.samples[j]},1)"


@dataclass
class KGroupReport:
    K0_rank: Union[int, str]
    unital: bool
    generators: list = field(default_factory=list)
    K1_rank: int = 0

    def summary(self) -> str:
        k0 = "Z^∞" if self.K0_rank == COUNTABLY_INFINITE else f"Z^{self.K0_rank}"
        tag = "" if self.unital else " (non-unital)"
        return f"K0 = {k0}{tag}, K1 = 0"

    def to_dict(self) -> dict:
        return {"K0_rank": self.K0_rank, "K1_rank": self.K1_rank, "unital": self.unital,
                "generators": self.generators, "summary": self.summary()}


def kgroups(X: Optional[SpectralSet], unital: bool, n_components=None) -> KGroupReport:
    """K-groups of the non-unital algebra or of its unitization.

    ``X=None`` with ``n_components=None`` stands for a ``Y`` with countably
    many components, whose K_0 is free of countably infinite rank.
    """
    if X is None:
        if n_components is None:
            return KGroupReport(COUNTABLY_INFINITE, unital, [])
        gens = [{"name": f"[{CHI_LOW}]", "interval": "[0,q)"}]
        gens += [{"name": f"[χ_(c_{j},1)]", "interval": f"(c_{j},1)"} for j in range(n_components)]
        if unital:
            gens.append({"name": "[1]", "interval": "[0,inf)"})
        return KGroupReport(n_components + 1 + int(unital), unital, gens)
    if X.is_full:
        gens = [{"name": "[R_1]", "alias": "[P_1]-[1]"}]
        if unital:
            gens.append({"name": "[1]", "interval": "[0,inf)"})
        return KGroupReport(1 + int(unital), unital, gens)
    G = gap_structure(X)
    gens = [{"name": f"[{CHI_LOW}]", "interval": f"[0,{X.q})"}]
    for j, c in enumerate(G.samples):
        gens.append({"name": f"[{_gap_name(G, j)}]", "interval": f"({c},1)",
                     "gap": [str(G.gaps[j][0]), str(G.gaps[j][1])]})
    if unital:
        gens.append({"name": "[1]", "interval": "[0,inf)"})
    return KGroupReport(G.n + 1 + int(unital), unital, gens)


@dataclass(frozen=True)
class RankFunction:
    """Integer ranks on the components of ``Y``, lowest component first."""

    ranks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(int(r) for r in self.ranks))
        if not self.ranks:
            raise ValueError("a rank function needs at least one component")
        if any(r < 0 for r in self.ranks):
            raise ValueError(f"ranks must be nonnegative, got {self.ranks}")


def rank_decompose(r: RankFunction) -> tuple[int, ...]:
    """Coefficients on the gap generators, lowest gap first: ``(r_1, r_2 - r_1, ...)``."""
    prev, out = 0, []
    for v in r.ranks:
        out.append(v - prev)
        prev = v
    return tuple(out)


def reconstruct(coefficients: Sequence[int]) -> RankFunction:
    total, ranks = 0, []
    for c in coefficients:
        total += int(c)
        ranks.append(total)
    return RankFunction(tuple(ranks))


@dataclass(frozen=True)
class KClassVector:
    """Coordinates in ``[χ_[0,q)], [χ_(c_j,1)] (top-down), [1]``.

    For the full spectrum ``l`` is None and ``n`` holds the single winding
    number, the coefficient of ``[R_1]``.
    """

    l: Optional[int]
    n: tuple[int, ...]
    m: Optional[int]
    full: bool = False

    def terms(self, G: Optional[GapStructure] = None) -> list[tuple[int, str]]:
        out = []
        if self.m:
            out.append((self.m, "1"))
        if self.full:
            if self.n[0]:
                out.append((self.n[0], "R_1"))
        else:
            for j in reversed(range(len(self.n))):
                if self.n[j]:
                    name = _gap_name(G, j) if G is not None else f"χ_(c_{j},1)"
                    out.append((self.n[j], name))
            if self.l:
                out.append((self.l, CHI_LOW))
        return out

    def expression(self, G: Optional[GapStructure] = None) -> str:
        parts = []
        for coef, name in self.terms(G):
            mag = "" if abs(coef) == 1 else f"{abs(coef)}·"
            sign = "-" if coef < 0 else "+"
            parts.append((sign, f"{mag}[{name}]"))
        if not parts:
            return "0"
        head_sign, head = parts[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_dict(self) -> dict:
        return {"l": self.l, "n": list(self.n), "m": self.m, "full": self.full}


def _integers(vec: Sequence[PairingResult]) -> list[int]:
    for r in vec:
        if not r.integral:
            raise NonIntegralError(f"{r.hom} pairing {r.raw} is not an integer (residual {r.residual})")
    return [r.rounded for r in vec]


@dataclass
class Decomposition:
    vector: KClassVector
    pairings: list
    expression: str

    def to_dict(self) -> dict:
        return {"class": self.vector.to_dict(), "expression": self.expression,
                "pairings": [r.to_dict() for r in self.pairings]}


def predicted_pairings(v: KClassVector) -> list[int]:
    """Pairing vector ``(ev_0, F_0..F_{N-1}, ev_inf)`` of a lattice point."""
    m = v.m or 0
    if v.full:
        return [m, v.n[0], m]
    l = v.l or 0
    fs = [sum(v.n[g:]) for g in range(len(v.n))]
    return [l + m] + fs + [m]


def decompose_class(p, X: Optional[SpectralSet] = None, unital: bool = True, y=None,
                    **options) -> Decomposition:
    spec_x = X or as_matrix(p).ambient
    family = homology_family(spec_x, y)
    results = [pair(F, p, **options) for F in family]
    vals = _integers(results)
    ev_zero, fs, ev_inf = vals[0], vals[1:-1], vals[-1]
    if not unital and ev_inf != 0:
        raise LatticeError("class outside generator lattice: nonzero ev_inf in the non-unital algebra")
    if spec_x.is_full:
        if ev_zero != ev_inf:
            raise LatticeError("class outside generator lattice: ev_0 and ev_inf ranks differ")
        vec = KClassVector(None, (fs[0],), ev_inf if unital else None, full=True)
        G = None
    else:
        G = gap_structure(spec_x)
        n = [0] * len(fs)
        n[-1] = fs[-1]
        for j in range(len(fs) - 2, -1, -1):
            n[j] = fs[j] - fs[j + 1]
        vec = KClassVector(ev_zero - ev_inf, tuple(n), ev_inf if unital else None)
    if predicted_pairings(vec) != vals:
        raise LatticeError(f"class outside generator lattice: pairings {vals}")
    return Decomposition(vec, results, vec.expression(G))


Signed = Union[ProjectionSpec, tuple]


def _signed(items: Sequence[Signed]):
    for it in items:
        if isinstance(it, tuple):
            yield int(it[0]), it[1]
        else:
            yield 1, it


def class_pairings(items: Sequence[Signed], X: SpectralSet, y=None, **options) -> list[int]:
    family = homology_family(X, y)
    total = [0] * len(family)
    for sign, spec in _signed(items):
        vals = _integers([pair(F, spec, **options) for F in family])
        total = [t + sign * v for t, v in zip(total, vals)]
    return total


@dataclass
class IdentityReport:
    labels: list
    lhs: list
    rhs: list

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs

    def rows(self) -> list[dict]:
        return [{"hom": h, "lhs": a, "rhs": b, "match": a == b}
                for h, a, b in zip(self.labels, self.lhs, self.rhs)]

    def to_dict(self) -> dict:
        return {"holds": self.holds, "rows": self.rows()}


def verify_identity(lhs: Sequence[Signed], rhs: Sequence[Signed], X: SpectralSet, y=None,
                    **options) -> tuple[bool, IdentityReport]:
    """Compare the signed sums of pairing vectors of two lists of projections."""
    labels = [F.label() for F in homology_family(X, y)]
    rep = IdentityReport(labels, class_pairings(lhs, X, y, **options),
                         class_pairings(rhs, X, y, **options))
    return rep.holds, rep


def generator_projections(X: SpectralSet, unital: bool = True) -> list[tuple[str, ProjectionSpec]]:
    """Projections representing the K_0 generators, in basis order."""
    if X.is_full:
        gens = [("[R_1]", powers_rieffel(1, X))]
    else:
        G = gap_structure(X)
        gens = [(f"[{CHI_LOW}]", indicator(Interval(Fraction(0), X.q, True, False), X))]
        gens += [(f"[{_gap_name(G, j)}]", indicator(Interval(c, Fraction(1)), X))
                 for j, c in enumerate(G.samples)]
    if unital:
        gens.append(("[1]", unit(X)))
    return gens


@dataclass
class PairingMatrix:
    rows: list
    columns: list
    values: list
    determinant: int

    def to_dict(self) -> dict:
        return {"rows": self.rows, "columns": self.columns, "values": self.values,
                "determinant": self.determinant}


def pairing_matrix(X: SpectralSet, unital: bool = True, y=None, **options) -> PairingMatrix:
    """Integer pairing matrix of generators against the matching K-homology family.

    The non-unital algebra drops ``[1]`` and ``ev_inf``; the full spectrum
    drops ``ev_0``, which carries no information there.
    """
    family = homology_family(X, y)
    if X.is_full:
        family = family[1:]
    if not unital:
        family = family[:-1]
    gens = generator_projections(X, unital)
    values = [_integers([pair(F, spec, **options) for F in family]) for _, spec in gens]
    det = int(sympy.Matrix(values).det(method="bareiss"))
    return PairingMatrix([g for g, _ in gens], [F.label() for F in family], values, det)


def bott_identity_terms(n: int, X: SpectralSet):
    """``[P_n]`` together with ``[1] + [R_n]`` (n > 0) or ``[1 - R_n]`` (n < 0)."""
    if n > 0:
        return [bott(n, X)], [unit(X), powers_rieffel(n, X)]
    return [bott(n, X)], [complement(powers_rieffel(-n, X))]

"""Expected-versus-computed verification tables run by ``qplane verify``."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .config import SpectrumConfig
from .errors import ConfigError
from .funcspace import Interval
from .ktheory import generator_projections, pairing_matrix, verify_identity
from .pairing import KHomClass, pair
from .projlib import bott, complement, indicator, powers_rieffel, unit, verify_projection
from .rep import shift_model_check
from .spectral import gap_structure

SUITES = ("tip", "teo", "corollaries", "algebra")
N_RANGE = range(1, 6)


@dataclass
class SuiteResult:
    name: str
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e["match"] for e in self.entries)

    def mismatches(self) -> list:
        return [e for e in self.entries if not e["match"]]

    def to_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "entries": self.entries}


def _run(tasks: list[Callable[[], dict]], jobs: int) -> list[dict]:
    if jobs <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda t: t(), tasks))


def _pair_entry(label: str, F: KHomClass, p, expected: int, cfg: SpectrumConfig):
    def task() -> dict:
        r = pair(F, p, **cfg.options.pair_kwargs())
        return {"label": label, "expected": expected, "computed": r.rounded,
                "residual": r.residual, "window": r.window_used, "mode": r.mode,
                "match": r.integral and r.rounded == expected}
    return task


def _fredholm_family(cfg: SpectrumConfig) -> list[KHomClass]:
    if cfg.X.is_full:
        return [KHomClass.fredholm(cfg.witness, 0)]
    G = gap_structure(cfg.X)
    return [KHomClass.for_component(G, g) for g in range(G.n)]


def _require_generic(cfg: SpectrumConfig, suite: str) -> None:
    if cfg.X.is_full:
        raise ConfigError(f"suite {suite!r} needs a generic spectrum (intervals), not full")


def suite_tip(cfg: SpectrumConfig, jobs: int = 1) -> SuiteResult:
    X, ev_inf = cfg.X, KHomClass.evinf()
    tasks = []
    for n in N_RANGE:
        classes = [(bott(n, X), 1, n), (bott(-n, X), 1, -n), (powers_rieffel(n, X), 0, n)]
        for p, rank, winding in classes:
            tasks.append(_pair_entry(f"<evinf,[{p}]>", ev_inf, p, rank, cfg))
            for F in _fredholm_family(cfg):
                tasks.append(_pair_entry(f"<{F.label()},[{p}]>", F, p, winding, cfg))
    one = unit(X)
    tasks.append(_pair_entry("<evinf,[1]>", ev_inf, one, 1, cfg))
    for F in _fredholm_family(cfg):
        tasks.append(_pair_entry(f"<{F.label()},[1]>", F, one, 0, cfg))
    return SuiteResult("tip", _run(tasks, jobs))


def suite_teo(cfg: SpectrumConfig, jobs: int = 1) -> SuiteResult:
    """Triangular pairing pattern of the generators plus a unimodular determinant."""
    _require_generic(cfg, "teo")
    X = cfg.X
    G = gap_structure(X)
    family = [KHomClass.ev0()] + _fredholm_family(cfg) + [KHomClass.evinf()]
    tasks = []
    for j, (name, p) in enumerate(generator_projections(X, unital=True)):
        for F in family:
            if name == "[1]":
                expected = 0 if F.kind.value == "F" else 1
            elif j == 0:  # χ_[0,q)
                expected = 1 if F.kind.value == "ev0" else 0
            else:
                gap = j - 1
                expected = int(F.kind.value == "F" and gap >= F.component)
            tasks.append(_pair_entry(f"<{F.label()},{name}>", F, p, expected, cfg))
    entries = _run(tasks, jobs)
    pm = pairing_matrix(X, unital=True, **cfg.options.pair_kwargs())
    entries.append({"label": "det(pairing matrix)", "expected": 1, "computed": abs(pm.determinant),
                    "sign": 1 if pm.determinant >= 0 else -1, "match": abs(pm.determinant) == 1,
                    "components": G.n})
    return SuiteResult("teo", entries)


def _identity_entry(label: str, lhs, rhs, cfg: SpectrumConfig):
    def task() -> dict:
        ok, rep = verify_identity(lhs, rhs, cfg.X, cfg.witness, **cfg.options.pair_kwargs())
        return {"label": label, "expected": rep.rhs, "computed": rep.lhs, "match": ok}
    return task


def suite_corollaries(cfg: SpectrumConfig, jobs: int = 1) -> SuiteResult:
    _require_generic(cfg, "corollaries")
    X = cfg.X
    one = unit(X)
    chi_q = indicator(Interval(X.q, Fraction(1)), X)
    tasks = []
    for n in N_RANGE:
        pn, pm, rn = bott(n, X), bott(-n, X), powers_rieffel(n, X)
        tasks += [
            _identity_entry(f"[P_{n}] = [1] + [R_{n}]", [pn], [one, rn], cfg),
            _identity_entry(f"[P_{n}] = [1] + {n}[χ_(q,1)]", [pn], [one, (n, chi_q)], cfg),
            _identity_entry(f"[P_-{n}] = [1 - R_{n}]", [pm], [complement(rn)], cfg),
            _identity_entry(f"[P_-{n}] = [1] - [R_{n}]", [pm], [one, (-1, rn)], cfg),
            _identity_entry(f"[P_-{n}] = [1] - {n}[χ_(q,1)]", [pm], [one, (-n, chi_q)], cfg),
            _identity_entry(f"[χ_(q^{n},1)] = {n}[χ_(q,1)]",
                            [indicator(Interval(X.q ** n, Fraction(1)), X)], [(n, chi_q)], cfg),
        ]
    return SuiteResult("corollaries", _run(tasks, jobs))


def suite_algebra(cfg: SpectrumConfig, jobs: int = 1) -> SuiteResult:
    X = cfg.X
    shift = shift_model_check(cfg.witness, 64, X.q)
    entries = [{"label": "shift model zz* = q^2 z*z", "expected": True, "computed": shift.passed,
                "residual": shift.residual_float, "match": shift.passed}]
    projections = [bott(s * n, X) for n in N_RANGE for s in (1, -1)]
    projections += [powers_rieffel(n, X) for n in N_RANGE]
    indicators = [] if X.is_full else [p for name, p in generator_projections(X, unital=False)]

    def check(p, need_exact: bool):
        def task() -> dict:
            rep = verify_projection(p, density=cfg.options.grid_density)
            ok = rep.passed and (rep.exact or not need_exact)
            return {"label": f"projection {p}", "expected": True, "computed": ok,
                    "sup_err_idem": rep.sup_err_idem, "sup_err_selfadj": rep.sup_err_selfadj,
                    "exact": rep.exact, "match": ok}
        return task

    tasks = [check(p, False) for p in projections] + [check(p, True) for p in indicators]
    return SuiteResult("algebra", entries + _run(tasks, jobs))


RUNNERS = {"tip": suite_tip, "teo": suite_teo, "corollaries": suite_corollaries,
           "algebra": suite_algebra}


def run_suites(name: str, cfg: SpectrumConfig, jobs: int = 1) -> list[SuiteResult]:
    if name == "all":
        names = [s for s in SUITES if not (cfg.X.is_full and s in ("teo", "corollaries"))]
    elif name in RUNNERS:
        names = [name]
    else:
        raise ConfigError(f"unknown suite {name!r}")
    return [RUNNERS[s](cfg, jobs) for s in names]

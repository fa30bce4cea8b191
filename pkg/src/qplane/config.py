"""Run configuration and the textual class / K-homology specs used by the CLI."""

from __future__ import annotations

import json
import os
import re
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .errors import ConfigError, QPlaneError
from .funcspace import INF, Interval
from .pairing import KHomClass
from .projlib import ProjectionSpec, bott, complement, indicator, powers_rieffel, unit
from .spectral import SpectralSet, as_fraction, gap_structure

MAX_WINDOW_ENV = "QPLANE_MAX_WINDOW"
DEFAULT_FULL_WITNESS = Fraction(7, 10)


@dataclass
class Options:
    tol: float = 1e-9
    integer_tol: float = 1e-6
    initial_window: int = 64
    max_window: int = 8192
    grid_density: int = 1024

    def pair_kwargs(self) -> dict:
        return {"tol": self.tol, "integer_tol": self.integer_tol,
                "initial_window": self.initial_window, "max_window": self.max_window}


@dataclass
class SpectrumConfig:
    X: SpectralSet
    y: Optional[Fraction] = None
    options: Options = field(default_factory=Options)

    @property
    def witness(self) -> Fraction:
        """The ``y`` used for full-spectrum Fredholm pairings."""
        if self.y is not None:
            return self.y
        if self.X.is_full:
            return DEFAULT_FULL_WITNESS
        return gap_structure(self.X).witnesses[0]

    def echo(self) -> dict:
        out = self.X.to_config()
        if self.y is not None:
            out["y"] = str(self.y)
        out["options"] = asdict(self.options)
        return out


DEFAULT_CONFIG = {"q": "1/2", "spectrum": "full"}


def parse_config(raw: dict) -> SpectrumConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - {"q", "spectrum", "y", "options"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "q" not in raw:
        raise ConfigError("config needs q")
    try:
        spectrum = raw.get("spectrum", "full")
        if spectrum == "full":
            X = SpectralSet.full(raw["q"])
        elif isinstance(spectrum, dict) and "intervals" in spectrum:
            X = SpectralSet.generic(raw["q"], spectrum["intervals"])
        else:
            raise ConfigError('spectrum must be "full" or {"intervals": [[lo, hi], ...]}')
        y = as_fraction(raw["y"]) if raw.get("y") is not None else None
    except (QPlaneError, TypeError) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc
    opts = raw.get("options") or {}
    try:
        options = Options(**opts)
    except TypeError as exc:
        raise ConfigError(f"invalid options: {exc}") from exc
    if os.environ.get(MAX_WINDOW_ENV):
        try:
            options.max_window = int(os.environ[MAX_WINDOW_ENV])
        except ValueError as exc:
            raise ConfigError(f"{MAX_WINDOW_ENV} must be an integer") from exc
    if options.initial_window < 1 or options.max_window < options.initial_window:
        raise ConfigError("need 1 <= initial_window <= max_window")
    return SpectrumConfig(X, y, options)


def load_config(path: Optional[str]) -> SpectrumConfig:
    if path is None:
        return parse_config(dict(DEFAULT_CONFIG))
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(raw)


_POWER = re.compile(r"^q(?:\^\(?(-?\d+)\)?)?$")
_INTERVAL = re.compile(r"^([\[(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\])])$")


def parse_endpoint(text: str, q: Fraction):
    text = text.strip()
    if text in ("inf", "∞", "infinity"):
        return INF
    m = _POWER.match(text)
    if m:
        return q ** int(m.group(1) or 1)
    try:
        return as_fraction(text)
    except (QPlaneError, ValueError) as exc:
        raise ConfigError(f"bad endpoint {text!r}") from exc


def parse_interval(text: str, q: Fraction) -> Interval:
    m = _INTERVAL.match(text.strip())
    if not m:
        raise ConfigError(f"bad interval {text!r}; expected e.g. (q^3,1) or [0,q)")
    lo = parse_endpoint(m.group(2), q)
    hi = parse_endpoint(m.group(3), q)
    try:
        return Interval(lo, hi, m.group(1) == "[", m.group(4) == "]")
    except ValueError as exc:
        raise ConfigError(f"bad interval {text!r}: {exc}") from exc


def _int_arg(kind: str, text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"{kind} needs an integer, got {text!r}") from exc


def parse_class(spec: str, X: SpectralSet) -> ProjectionSpec:
    """``bott:n``, ``pr:n``, ``chi:<interval>``, ``unit``, or ``1-`` before any of them."""
    spec = spec.strip()
    if spec.startswith("1-"):
        return complement(parse_class(spec[2:], X))
    if spec == "unit":
        return unit(X)
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise ConfigError(f"unknown class spec {spec!r}")
    if kind == "bott":
        n = _int_arg("bott", arg)
        if n == 0:
            raise ConfigError("bott:n needs n != 0")
        return bott(n, X)
    if kind == "pr":
        n = _int_arg("pr", arg)
        if n < 1:
            raise ConfigError("pr:n needs n >= 1")
        return powers_rieffel(n, X)
    if kind == "chi":
        p = indicator(parse_interval(arg, X.q), X)
        return ProjectionSpec(p.kind, p.params, p.realized, f"χ_{arg.strip()}")
    raise ConfigError(f"unknown class spec {spec!r}")


def parse_hom(spec: str, cfg: SpectrumConfig) -> KHomClass:
    spec = spec.strip()
    if spec == "ev0":
        return KHomClass.ev0()
    if spec == "evinf":
        return KHomClass.evinf()
    if spec.startswith("F:y="):
        try:
            return KHomClass.fredholm(spec[4:])
        except (QPlaneError, TypeError) as exc:
            raise ConfigError(f"bad witness in {spec!r}") from exc
    if spec.startswith("F:"):
        idx = _int_arg("F", spec[2:])
        if cfg.X.is_full:
            if idx != 0:
                raise ConfigError("the full spectrum has one Fredholm class, F:0")
            return KHomClass.fredholm(cfg.witness, 0)
        G = gap_structure(cfg.X)
        if not 0 <= idx < G.n:
            raise ConfigError(f"component index {idx} out of range 0..{G.n - 1}")
        return KHomClass.for_component(G, idx)
    raise ConfigError(f"unknown K-homology spec {spec!r}")

"""``qplane`` command line: K-groups, pairings, verification suites and run diffs.

Exit codes: 0 success, 1 verification mismatch, 2 usage or config error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .config import SpectrumConfig, load_config, parse_class, parse_config, parse_hom
from .errors import ConfigError, ConvergenceError, LatticeError, NonIntegralError, QPlaneError, StoreError
from .ktheory import decompose_class, kgroups
from .pairing import pair
from .store import RunRecord, RunStore, diff_runs, resolve_store_path
from .suites import run_suites

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3

SELFTEST_CONFIGS = (
    {"q": "1/2", "spectrum": "full"},
    {"q": "1/2", "spectrum": {"intervals": [["13/25", "11/20"], ["3/5", "31/50"], ["7/10", "18/25"]]}},
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _emit(args, command: str, cfg: Optional[SpectrumConfig], result: dict, text: str) -> None:
    if args.json:
        report = {"command": command, "config": cfg.echo() if cfg else None,
                  "result": result, "version": __version__}
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(text)


def cmd_kgroups(args) -> int:
    cfg = load_config(args.config)
    rep = kgroups(cfg.X, args.unital)
    lines = [rep.summary(), "generators:"]
    for g in rep.generators:
        where = g.get("interval") or g.get("alias", "")
        lines.append(f"  {g['name']}  {where}")
    _emit(args, "kgroups", cfg, rep.to_dict(), "\n".join(lines))
    return EXIT_OK


def cmd_pair(args) -> int:
    cfg = load_config(args.config)
    p = parse_class(args.class_spec, cfg.X)
    F = parse_hom(args.hom, cfg)
    r = pair(F, p, **cfg.options.pair_kwargs())
    flag = "" if r.integral else "  NON-INTEGRAL"
    text = (f"<{F.label()}, [{p}]> = {r.rounded}  (raw {r.raw!r}, residual {r.residual:.3g}, "
            f"window {r.window_used}, {r.mode}){flag}")
    result = r.to_dict()
    result["class"] = str(p)
    _emit(args, "pair", cfg, result, text)
    return EXIT_OK


def _suite_text(results) -> str:
    lines = []
    for s in results:
        ok = sum(e["match"] for e in s.entries)
        lines.append(f"suite {s.name}: {'PASS' if s.passed else 'FAIL'} ({ok}/{len(s.entries)})")
        for e in s.entries:
            mark = "ok" if e["match"] else "MISMATCH"
            lines.append(f"  {mark:8s} {e['label']}: expected {e['expected']}, got {e['computed']}")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    results = run_suites(args.suite, cfg, args.jobs)
    passed = all(s.passed for s in results)
    payload = {"suites": [s.to_dict() for s in results], "passed": passed}
    if args.record:
        record = RunRecord(args.suite, cfg.echo(), payload, passed, __version__)
        payload["run_id"] = RunStore(resolve_store_path(args.store)).append(record)
    _emit(args, "verify", cfg, payload, _suite_text(results))
    return EXIT_OK if passed else EXIT_MISMATCH


def cmd_decompose(args) -> int:
    cfg = load_config(args.config)
    p = parse_class(args.class_spec, cfg.X)
    d = decompose_class(p, cfg.X, unital=not args.non_unital, y=cfg.witness,
                        **cfg.options.pair_kwargs())
    result = d.to_dict()
    result["identity"] = f"[{p}] = {d.expression}"
    _emit(args, "decompose", cfg, result, result["identity"])
    return EXIT_OK


def cmd_selftest(args) -> int:
    reports, passed = [], True
    for raw in SELFTEST_CONFIGS:
        cfg = parse_config(dict(raw))
        results = run_suites("all", cfg, args.jobs)
        passed = passed and all(s.passed for s in results)
        reports.append({"config": cfg.echo(), "suites": [s.to_dict() for s in results]})
    text = "\n".join(
        f"{r['config']['spectrum'] if isinstance(r['config']['spectrum'], str) else 'generic'}: "
        + ", ".join(f"{s['suite']} {'PASS' if s['passed'] else 'FAIL'}" for s in r["suites"])
        for r in reports
    )
    _emit(args, "selftest", None, {"runs": reports, "passed": passed}, text)
    return EXIT_OK if passed else EXIT_MISMATCH


def cmd_diff(args) -> int:
    d = diff_runs(args.id_a, args.id_b, args.store)
    lines = [f"runs {d.id_a} vs {d.id_b}: status {d.status}"]
    if d.config_mismatch:
        lines.append("  CONFIG MISMATCH")
    if d.suite_mismatch:
        lines.append("  SUITE MISMATCH")
    if d.status == "pass->fail":
        lines.append("  REGRESSION: pass -> fail")
    lines += [f"  {c['key']}: {c['a']} -> {c['b']}" for c in d.changes]
    if d.clean:
        lines.append("  clean")
    _emit(args, "diff", None, d.to_dict(), "\n".join(lines))
    return EXIT_OK if d.clean else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON spectrum config (default: full spectrum, q=1/2)")
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    parser = _Parser(prog="qplane", description="K-theory and index pairings for q-normal operators")
    parser.add_argument("--version", action="version", version=f"qplane {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("kgroups", parents=[common], help="K-groups of the spectral set")
    p.add_argument("--unital", action="store_true", help="report the unitized algebra")
    p.set_defaults(func=cmd_kgroups)

    p = sub.add_parser("pair", parents=[common], help="pair one class with one K-homology class")
    p.add_argument("--class", dest="class_spec", required=True,
                   help="bott:n | pr:n | chi:(lo,hi) | unit, optionally prefixed by 1-")
    p.add_argument("--hom", required=True, help="ev0 | evinf | F:<index> | F:y=<rational>")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", default="all", choices=["tip", "teo", "corollaries", "algebra", "all"])
    p.add_argument("--jobs", type=int, default=1, help="worker threads for pairings")
    p.add_argument("--record", action="store_true", help="append the run to the store")
    p.add_argument("--store", help="run store path (default $QPLANE_STORE or ./qplane-runs.ndjson)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decompose", parents=[common], help="express a class in the generator basis")
    p.add_argument("--class", dest="class_spec", required=True)
    p.add_argument("--non-unital", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("selftest", parents=[common], help="run all suites on built-in spectra")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("diff", parents=[common], help="compare two recorded runs")
    p.add_argument("id_a", type=int)
    p.add_argument("id_b", type=int)
    p.add_argument("--store")
    p.set_defaults(func=cmd_diff)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    except ConvergenceError as exc:
        print(f"error: {exc}; last values {exc.last_values}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (LatticeError, NonIntegralError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except StoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QPlaneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

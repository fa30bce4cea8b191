"""Acceptance criteria, one check per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``; both print one PASS/FAIL line per
criterion.
"""

import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qplane.config import Options, SpectrumConfig  # noqa: E402
from qplane.funcspace import Interval  # noqa: E402
from qplane.ktheory import generator_projections, kgroups, pairing_matrix  # noqa: E402
from qplane.pairing import KHomClass, pair, telescoping_check  # noqa: E402
from qplane.projlib import bott, indicator, powers_rieffel, unit, verify_projection  # noqa: E402
from qplane.rep import MACHINE_RESIDUAL, shift_model_check  # noqa: E402
from qplane.spectral import SpectralSet  # noqa: E402
from qplane.suites import suite_corollaries, suite_teo  # noqa: E402

BANDS = [("0.52", "0.55"), ("0.6", "0.62"), ("0.7", "0.72")]


def generic_three() -> SpectralSet:
    return SpectralSet.generic("1/2", BANDS)


def _fmt(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def criterion_1():
    """Index table on the full spectrum for q = 1/2 and 3/4."""
    start = time.perf_counter()
    F, ev_inf = KHomClass.fredholm(Fraction(7, 10)), KHomClass.evinf()
    results = []
    for q in ("1/2", "3/4"):
        X = SpectralSet.full(q)
        for n in range(1, 6):
            results += [
                (pair(ev_inf, bott(n, X)), 1), (pair(F, bott(n, X)), n),
                (pair(ev_inf, bott(-n, X)), 1), (pair(F, bott(-n, X)), -n),
                (pair(ev_inf, powers_rieffel(n, X)), 0), (pair(F, powers_rieffel(n, X)), n),
            ]
        results += [(pair(ev_inf, unit(X)), 1), (pair(F, unit(X)), 0)]
    elapsed = time.perf_counter() - start
    values_ok = all(r.rounded == e for r, e in results)
    resid = max(r.residual for r, _ in results)
    window = max(r.window_used for r, _ in results)
    ok = values_ok and resid < 1e-6 and window <= 512 and elapsed < 10
    return ok, (f"{len(results)} entries, max residual {resid:.1e}, max window {window}, "
                f"{elapsed:.2f}s")


def criterion_2():
    """Generator pairing pattern and unimodularity on a three-band spectrum."""
    X = generic_three()
    cfg = SpectrumConfig(X, None, Options())
    suite = suite_teo(cfg)
    exact = all(pair(F, p).mode == "exact"
                for _, p in generator_projections(X, unital=True)
                for F in [KHomClass.ev0(), KHomClass.fredholm(Fraction(71, 100)), KHomClass.evinf()])
    det = pairing_matrix(X, unital=True).determinant
    ok = suite.passed and exact and abs(det) == 1
    return ok, f"{len(suite.entries) - 1} pairings match, all exact={exact}, det={det}"


def criterion_3():
    """Class identities between Bott, Powers-Rieffel and indicator projections."""
    cfg = SpectrumConfig(generic_three(), None, Options())
    suite = suite_corollaries(cfg)
    return suite.passed, f"{sum(e['match'] for e in suite.entries)}/{len(suite.entries)} identities"


def criterion_4():
    """Weighted shift relation and exact modulus on the window K = 64."""
    rep = shift_model_check(Fraction(7, 10), 64, Fraction(1, 2))
    ok = rep.residual_exact == 0 and rep.residual_float <= MACHINE_RESIDUAL and rep.abs_z_exact
    return ok, (f"float residual {rep.residual_float:.1e}, exact residual {rep.residual_exact}, "
                f"|z| exact={rep.abs_z_exact}")


def criterion_5():
    """Projection checks for Bott, Powers-Rieffel and indicator generators."""
    worst, count, ok = 0.0, 0, True
    for X in (SpectralSet.full("1/2"), generic_three()):
        for n in range(1, 6):
            for p in (bott(n, X), bott(-n, X), powers_rieffel(n, X)):
                rep = verify_projection(p, tol=1e-9)
                ok &= rep.passed
                worst = max(worst, rep.sup_err_idem, rep.sup_err_selfadj)
                count += 1
    X = generic_three()
    indicators = [p for _, p in generator_projections(X, unital=False)]
    indicators += [indicator(Interval(X.q ** n, 1), X) for n in range(1, 6)]
    for p in indicators:
        rep = verify_projection(p)
        ok &= rep.passed and rep.exact and rep.sup_err_idem == 0 and rep.sup_err_selfadj == 0
        count += 1
    return ok, f"{count} projections, worst smooth sup-error {worst:.1e}, indicators exact"


def _bands(n):
    step = Fraction(1, 2 * n + 1) / 2
    return [(Fraction(1, 2) + (2 * i + 1) * step, Fraction(1, 2) + Fraction(4 * i + 3, 2) * step)
            for i in range(n)]


def criterion_6():
    """K-group ranks for the full spectrum and for 1, 2, 3 and 6 bands."""
    full = SpectralSet.full("1/2")
    ok = kgroups(full, False).K0_rank == 1 and kgroups(full, True).K0_rank == 2
    ok &= kgroups(full, True).K1_rank == 0
    for n in (1, 2, 3, 6):
        X = SpectralSet.generic("1/2", _bands(n))
        ok &= kgroups(X, False).K0_rank == n + 1 and kgroups(X, True).K0_rank == n + 2
        ok &= kgroups(X, False).K1_rank == 0
    return ok, "full 1/2, generic n+1/n+2 for n = 1,2,3,6, K1 = 0"


def criterion_7():
    """Property suites: alpha laws, *-algebra axioms, ev laws, y-invariance, rank round trip."""
    import test_crossed
    import test_funcspace
    import test_ktheory

    X = generic_three()
    checks = {
        "alpha group action": test_funcspace.test_alpha_is_a_group_action,
        "alpha multiplicative": test_funcspace.test_alpha_is_multiplicative_and_additive,
        "*-algebra axioms (200 examples)": test_crossed.test_star_algebra_axioms,
        "ev homomorphisms": test_crossed.test_evaluations_are_homomorphisms,
        "rank round trip": test_ktheory.test_rank_round_trip,
    }
    failed = []
    for name, fn in checks.items():
        try:
            fn()
        except Exception as exc:  # a falsifying example is a failed criterion
            failed.append(f"{name}: {exc}")
    classes = [bott(2, X), bott(-3, X), powers_rieffel(2, X), unit(X),
               indicator(Interval(Fraction(1, 8), 1), X), indicator(Interval(0, X.q, True), X)]
    pairs = [(Fraction(7, 10), Fraction(18, 25)), (Fraction(3, 5), Fraction(31, 50)),
             (Fraction(13, 25), Fraction(11, 20))]
    for p in classes:
        for y1, y2 in pairs:
            if pair(KHomClass.fredholm(y1), p).rounded != pair(KHomClass.fredholm(y2), p).rounded:
                failed.append(f"y-invariance {p} at {y1}, {y2}")
    return not failed, "all property suites hold" if not failed else "; ".join(failed)


def criterion_8():
    """Direct and re-indexed sums of the Bott winding series."""
    reps = [telescoping_check(n, Fraction(7, 10), Fraction(1, 2), 64) for n in range(1, 5)]
    worst = max(r.difference for r in reps)
    ok = worst < 1e-10 and all(abs(r.closed - r.n) < 1e-12 for r in reps)
    return ok, f"max |direct - closed| = {worst:.1e} for n = 1..4"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_criterion(check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print(f"\n[{_fmt(ok)}] {check.__name__}: {check.__doc__.strip()} -- {detail}")
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for check in CRITERIA:
        ok, detail = check()
        failures += not ok
        print(f"[{_fmt(ok)}] {check.__name__}: {check.__doc__.strip()} -- {detail}")
    sys.exit(1 if failures else 0)

from fractions import Fraction

import pytest

from qplane.crossed import CrossedMatrix
from qplane.errors import ConvergenceError, SpectrumError
from qplane.funcspace import Interval
from qplane.pairing import KHomClass, normalize_witness, pair, pairing_vector, telescoping_check
from qplane.projlib import bott, complement, direct_sum, indicator, powers_rieffel, unit
from qplane.spectral import SpectralSet, gap_structure

F = KHomClass.fredholm(Fraction(7, 10))


@pytest.mark.parametrize("n", range(1, 6))
def test_bott_windings(full_half, n):
    plus, minus = pair(F, bott(n, full_half)), pair(F, bott(-n, full_half))
    assert (plus.rounded, minus.rounded) == (n, -n)
    assert plus.integral and plus.residual < 1e-12
    assert plus.mode == "converged" and plus.window_used <= 512
    assert pair(KHomClass.evinf(), bott(n, full_half)).rounded == 1


@pytest.mark.parametrize("n", range(1, 6))
def test_powers_rieffel_is_window_exact(full_half, n):
    r = pair(F, powers_rieffel(n, full_half))
    assert r.rounded == n and r.mode == "window-exact"
    assert r.window_used < 64
    assert pair(KHomClass.evinf(), powers_rieffel(n, full_half)).rounded == 0


@pytest.mark.parametrize("n", range(1, 6))
def test_indicator_pairings_are_exact(three_bands, n):
    X = three_bands
    y = gap_structure(X).witnesses[0]
    r = pair(KHomClass.fredholm(y), indicator(Interval(X.q ** n, 1), X))
    assert r.mode == "exact" and r.exact_value == n


def test_ev_pairings(three_bands):
    X = three_bands
    low = indicator(Interval(0, X.q, True), X)
    assert pair(KHomClass.ev0(), low).exact_value == 1
    assert pair(KHomClass.evinf(), low).exact_value == 0
    assert pair(KHomClass.evinf(), unit(X)).exact_value == 1


def test_pairing_vectors(three_bands):
    X = three_bands
    G = gap_structure(X)
    assert [r.rounded for r in pairing_vector(unit(X))] == [1, 0, 0, 0, 1]
    assert [r.rounded for r in pairing_vector(indicator(Interval(0, X.q, True), X))] == [1, 0, 0, 0, 0]
    for j, c in enumerate(G.samples):
        vec = [r.rounded for r in pairing_vector(indicator(Interval(c, 1), X))]
        assert vec[0] == vec[-1] == 0
        assert vec[1:-1] == [int(y > c) for y in G.witnesses]


def test_additivity(full_half):
    X = full_half
    a, b = bott(2, X), powers_rieffel(3, X)
    total = pair(F, direct_sum(a, b)).raw
    assert total == pytest.approx(pair(F, a).raw + pair(F, b).raw, abs=1e-9)


@pytest.mark.parametrize("cls", [lambda X: bott(3, X), lambda X: bott(-2, X),
                                 lambda X: powers_rieffel(2, X),
                                 lambda X: indicator(Interval(Fraction(1, 8), 1), X)])
def test_y_invariance_within_component(three_bands, cls):
    X = three_bands
    p = cls(X)
    a = pair(KHomClass.fredholm(Fraction(7, 10)), p).rounded
    b = pair(KHomClass.fredholm(Fraction(18, 25)), p).rounded
    assert a == b


def test_witness_normalization():
    X = SpectralSet.full("3/4")
    assert normalize_witness(X, Fraction(7, 10)) == Fraction(14, 15)
    with pytest.raises(SpectrumError):
        normalize_witness(X, 0)


def test_complement_in_unitization(full_half):
    r = pair(F, complement(powers_rieffel(2, full_half)))
    assert r.rounded == -2


def test_non_convergence_reports_last_values(full_half):
    with pytest.raises(ConvergenceError) as info:
        pair(F, bott(1, full_half), tol=0.0, max_window=256)
    assert len(info.value.last_values) == 2
    assert info.value.window == 256


def test_non_integral_results_are_flagged(full_half):
    # half of P_1 is no projection; its winding sum is 1/2
    X = full_half
    p = bott(1, X).realized
    half = p.map_entries(lambda e: e.scale(Fraction(1, 2)))
    r = pair(F, CrossedMatrix(tuple(tuple(row) for row in half)))
    assert not r.integral
    assert r.residual == pytest.approx(0.5)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_telescoping(n):
    rep = telescoping_check(n, "7/10", "1/2", 64)
    assert rep.agrees and rep.difference < 1e-10
    assert rep.closed == pytest.approx(n, abs=1e-12)
    assert rep.negative_mismatch < 1e-12


def test_telescoping_tail_bound():
    rep = telescoping_check(3, "7/10", "1/2", 6)
    assert abs(rep.direct - 3) <= rep.tail_bound
    assert rep.tail_bound < 1e-8

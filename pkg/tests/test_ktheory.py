from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qplane.crossed import CrossedMatrix
from qplane.errors import LatticeError, NonIntegralError
from qplane.funcspace import Interval
from qplane.ktheory import (
    COUNTABLY_INFINITE, KClassVector, RankFunction, bott_identity_terms, decompose_class,
    generator_projections, kgroups, pairing_matrix, predicted_pairings, rank_decompose,
    reconstruct, verify_identity,
)
from qplane.projlib import bott, direct_sum, indicator, powers_rieffel, unit
from qplane.spectral import SpectralSet


def _bands(n):
    """``n`` disjoint rational bands inside (1/2, 1)."""
    step = Fraction(1, 2 * n + 1) / 2
    return [(Fraction(1, 2) + (2 * i + 1) * step, Fraction(1, 2) + Fraction(4 * i + 3, 2) * step)
            for i in range(n)]


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_generic_ranks(n):
    X = SpectralSet.generic("1/2", _bands(n))
    assert kgroups(X, unital=False).K0_rank == n + 1
    assert kgroups(X, unital=True).K0_rank == n + 2
    assert kgroups(X, unital=True).K1_rank == 0


def test_full_ranks(full_half):
    assert kgroups(full_half, unital=False).K0_rank == 1
    rep = kgroups(full_half, unital=True)
    assert rep.K0_rank == 2 and rep.summary() == "K0 = Z^2, K1 = 0"
    assert [g["name"] for g in rep.generators] == ["[R_1]", "[1]"]


def test_infinitely_many_components():
    assert kgroups(None, unital=False).K0_rank == COUNTABLY_INFINITE
    assert kgroups(None, unital=True, n_components=4).K0_rank == 6


@pytest.mark.parametrize("ranks, coeffs", [((2, 2, 2), (2, 0, 0)), ((2, 3), (2, 1)),
                                           ((1, 0), (1, -1))])
def test_rank_decompose_examples(ranks, coeffs):
    assert rank_decompose(RankFunction(ranks)) == coeffs


@given(st.lists(st.integers(0, 9), min_size=1, max_size=6))
def test_rank_round_trip(ranks):
    r = RankFunction(tuple(ranks))
    assert reconstruct(rank_decompose(r)) == r


def test_rank_function_rejects_negative():
    with pytest.raises(ValueError):
        RankFunction((1, -1))


@pytest.mark.parametrize("n", range(1, 6))
def test_decompose_bott_and_powers_rieffel(three_bands, n):
    X = three_bands
    assert decompose_class(bott(n, X)).vector == KClassVector(0, (0, 0, n), 1)
    assert decompose_class(bott(-n, X)).vector == KClassVector(0, (0, 0, -n), 1)
    assert decompose_class(powers_rieffel(n, X)).vector == KClassVector(0, (0, 0, n), 0)


def test_decompose_expression(three_bands):
    assert decompose_class(bott(2, three_bands)).expression == "[1] + 2·[χ_(q,1)]"
    assert decompose_class(bott(-1, three_bands)).expression == "[1] - [χ_(q,1)]"
    assert decompose_class(unit(three_bands)).expression == "[1]"


def test_full_decomposition(full_half):
    d = decompose_class(bott(1, full_half))
    assert d.vector.full and d.vector.n == (1,) and d.vector.m == 1
    assert decompose_class(powers_rieffel(3, full_half)).vector.n == (3,)


@given(st.integers(-3, 3), st.lists(st.integers(0, 2), min_size=3, max_size=3), st.integers(0, 2))
def test_lattice_round_trip(l, ns, m):
    X = SpectralSet.generic("1/2", [("13/25", "11/20"), ("3/5", "31/50"), ("7/10", "18/25")])
    gens = generator_projections(X, unital=True)
    l = abs(l)
    blocks = [gens[0][1]] * l
    for j, k in enumerate(ns):
        blocks += [gens[1 + j][1]] * k
    blocks += [gens[-1][1]] * m
    if not blocks:
        return
    vec = decompose_class(direct_sum(*blocks)).vector
    assert vec == KClassVector(l, tuple(ns), m)


def test_non_unital_rejects_unit(three_bands):
    with pytest.raises(LatticeError, match="outside generator lattice"):
        decompose_class(unit(three_bands), unital=False)


def test_non_integral_class_raises(full_half):
    half = bott(1, full_half).realized.map_entries(lambda e: e.scale(Fraction(1, 2)))
    with pytest.raises(NonIntegralError):
        decompose_class(CrossedMatrix(tuple(tuple(r) for r in half)))


@pytest.mark.parametrize("n", [1, 2, 5])
def test_identities(three_bands, n):
    X = three_bands
    assert verify_identity(*bott_identity_terms(n, X), X)[0]
    assert verify_identity(*bott_identity_terms(-n, X), X)[0]
    chi = indicator(Interval(X.q, 1), X)
    ok, rep = verify_identity([indicator(Interval(X.q ** n, 1), X)], [(n, chi)], X)
    assert ok and all(row["match"] for row in rep.rows())
    assert not verify_identity([bott(n, X)], [unit(X)], X)[0]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_pairing_matrix_is_unimodular(n):
    X = SpectralSet.generic("1/2", _bands(n))
    for unital in (True, False):
        pm = pairing_matrix(X, unital)
        assert abs(pm.determinant) == 1
        assert len(pm.values) == n + 1 + int(unital)


def test_predicted_pairings_inverts_decomposition(three_bands):
    v = KClassVector(2, (1, -1, 3), 1)
    assert predicted_pairings(v) == [3, 3, 2, 3, 1]

import pytest

from pnsurf.invariants import (
    CurveBundleData,
    GenusRange,
    InconsistentData,
    arithmetic_genus,
    au_ra_k2,
    castelnuovo_bound,
    chi_line_bundle,
    chi_multiple,
    clifford_curve_max,
    clifford_index_bundle,
    curve_rr,
    degree,
    delta_genus,
    genus_range_from_h1,
    plane_curve_genus,
    sectional_genus,
)
from pnsurf.surface_models import SurfaceModel, canonical_class, intersect

from conftest import conic_bundle


def test_degree_and_genus_rows(elliptic_e0):
    m, L = elliptic_e0
    assert (degree(m, L), sectional_genus(m, L)) == (9, 4)


@pytest.mark.parametrize("e", range(6))
def test_conic_bundle_rows(e):
    m, L = conic_bundle(e)
    assert (degree(m, L), sectional_genus(m, L)) == (9, 5)


def test_plane_cubic():
    m = SurfaceModel("plane", 10)
    L = m.pullback(3, mults=0)
    assert (degree(m, L), sectional_genus(m, L)) == (9, 1)
    assert chi_line_bundle(SurfaceModel("plane"), SurfaceModel("plane").pullback(3)) == 10


def test_arithmetic_genus(elliptic_e1):
    m, _ = elliptic_e1
    assert arithmetic_genus(m, m.f() - m.E(1)) == 0
    assert arithmetic_genus(m, m.pullback(1, 1, mults=1)) == 1
    assert arithmetic_genus(m, m.zero()) == 1


def test_sectional_genus_two_ways(elliptic_e1):
    m, L = elliptic_e1
    assert sectional_genus(m, L) == arithmetic_genus(m, L)


def test_quadric_count_on_elliptic_blowup(elliptic_e0):
    m, L = elliptic_e0
    assert chi_line_bundle(m, 2 * L) == 21
    assert chi_line_bundle(m, m.zero()) == 0


def test_chi_multiple_matches_lattice(elliptic_e0):
    m, L = elliptic_e0
    LK = intersect(m, L, canonical_class(m))
    for t in range(-3, 4):
        assert chi_multiple(0, 9, LK, t) == chi_line_bundle(m, t * L)


@pytest.mark.parametrize("args,h0", [((9, 4, 0), 6), ((18, 6, 0), 13), ((8, 5, 1), 5)])
def test_curve_rr(args, h0):
    assert curve_rr(*args) == h0


def test_curve_rr_negative():
    with pytest.raises(InconsistentData):
        curve_rr(0, 5, 0)


def test_curve_bundle_data():
    CurveBundleData(9, 4, 6, 0)
    with pytest.raises(InconsistentData):
        CurveBundleData(9, 4, 5, 0)
    with pytest.raises(InconsistentData):
        CurveBundleData(9, 4, 7, 1)


@pytest.mark.parametrize("args,value", [((9, 6), 5), ((9, 11), 0), ((9, 7), 4)])
def test_delta_genus(args, value):
    assert delta_genus(*args) == value


@pytest.mark.parametrize("args,value", [((9, 5), 7), ((9, 4), 12), ((9, 8), 2)])
def test_castelnuovo(args, value):
    assert castelnuovo_bound(*args) == value


def test_castelnuovo_plane_curves():
    # for N = 3 the bound is the genus of a plane curve of degree d
    for d in range(2, 30):
        assert castelnuovo_bound(d, 3) == plane_curve_genus(d)


def test_castelnuovo_monotone_in_N():
    for d in range(3, 25):
        values = [castelnuovo_bound(d, N) for N in range(3, d + 2)]
        assert values == sorted(values, reverse=True)


def test_castelnuovo_errors():
    with pytest.raises(ValueError):
        castelnuovo_bound(9, 2)


def test_clifford():
    assert clifford_index_bundle(3, 2) == 1
    assert clifford_index_bundle(2, 2) == 0
    assert clifford_index_bundle(9, 5) == 1
    assert [clifford_curve_max(g) for g in (5, 7, 1, 0)] == [2, 3, 0, 0]


def test_clifford_theorem_on_special_bundles():
    for g in range(2, 12):
        for d in range(0, 2 * g - 1):
            for h1 in range(1, g + 1):
                try:
                    h0 = curve_rr(d, g, h1)
                except InconsistentData:
                    continue
                if 1 <= h0 <= d / 2 + 1:
                    assert clifford_index_bundle(d, h0) >= 0


def test_serre_duality_on_samples():
    # h1(D) = h0(K - D): feeding the dual values back reproduces the pair
    for g in range(1, 8):
        for d in range(0, 2 * g - 1):
            for h1 in range(0, 3):
                try:
                    h0 = curve_rr(d, g, h1)
                except InconsistentData:
                    continue
                assert curve_rr(2 * g - 2 - d, g, h0) == h1


def test_scroll_delta_over_hyperelliptic_base():
    # h1(E) = 0 gives h0 = d - 2(g - 1) and Delta = 2g
    for g in range(2, 6):
        assert delta_genus(9, 9 - 2 * (g - 1)) == 2 * g


def test_genus_range():
    assert 5 in genus_range_from_h1(0) and 6 not in genus_range_from_h1(0)
    assert genus_range_from_h1(1).values == {6, 7}
    assert genus_range_from_h1(2).values == {7}
    assert genus_range_from_h1(3).describe() == "g in {7}"
    assert "not a scroll" in GenusRange().scope


@pytest.mark.parametrize("args,value", [((6, 1), -1), ((10, 6), 9), ((7, 2), 0)])
def test_au_ra_k2(args, value):
    assert au_ra_k2(*args) == value

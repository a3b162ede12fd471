import json
from importlib import resources

import pytest

from pnsurf.cone_chow import (
    ConeRing,
    ConeRingError,
    VertexConfig,
    admissible_keys,
    c1_restriction_line,
    c1_restriction_point,
    check_associativity,
    check_commutativity,
    chern_exclusion,
    cone_ring,
    cycle_mul,
    dpf_residual,
    enumerate_cone_classes,
    surface_class,
)


@pytest.fixture(params=[4, 5])
def ring(request):
    return cone_ring(request.param)


def test_ring_axioms(ring):
    assert check_commutativity(ring) == []
    assert check_associativity(ring) == []


def test_rank4_named_products():
    R = cone_ring(4)
    g = R.gen
    assert g("tau") * g("P1") == g("p1")
    assert g("tau") * g("P2") == g("p2")
    assert g("tau") * g("F") == g("l")
    assert (g("F") * g("F")).degree() == 0
    assert g("P1") * g("P1") == R.zero(2)


def test_rank4_two_planes_meet_in_F():
    # the two families of 3-planes through the vertex line meet along F
    R = cone_ring(4)
    assert R.gen("P1") * R.gen("P2") == R.gen("F")


def test_rank4_ambiguous_entry_is_marked():
    R = cone_ring(4)
    assert [(e["left"], e["right"]) for e in R.ambiguous] == [("P2", "Q")]
    assert R.gen("P2") * R.gen("Q") == R.gen("l2bar")


def test_rank5_degrees():
    R = cone_ring(5)
    tt = R.tau() * R.tau()
    assert (tt * R.gen("Hbar")).degree() == 2
    assert (tt * R.gen("X")).degree() == 1
    assert R.display("X") == "S[cycle]"


def test_chern_data():
    R4, R5 = cone_ring(4), cone_ring(5)
    assert R4.c1() == 4 * R4.tau() - R4.T()
    assert R4.c2() == R4.cycle(2, {"Q": 3, "p1": 4, "p2": 4})
    assert R5.c1() == 2 * (R5.tau() + R5.gen("Z"))
    Z = R5.gen("Z")
    assert R5.c2() == Z * Z + 6 * (R5.tau() * Z)


@pytest.mark.parametrize("coeffs", [(1, 0, 0, 0), (3, 1, 2, 1), (2, -1, 4, 3), (5, 2, -3, 0)])
def test_rank4_degree_identity(coeffs):
    R = cone_ring(4)
    a, b, g, d = coeffs
    S = surface_class(R, *coeffs)
    assert (R.tau() * R.tau() * S).degree() == 2 * a + b + g + d


@pytest.mark.parametrize("coeffs", [(3, 1, 2, 1), (3, 0, 3, 1), (2, 2, 3, 0)])
def test_rank4_exceptional_restrictions(coeffs):
    R = cone_ring(4)
    a, b, g, d = coeffs
    S = surface_class(R, *coeffs)
    T = R.T()
    assert (T * R.tau() * S).degree() == d
    assert (T * T * S).degree() == d - (b + g)


def test_grade_overflow():
    R = cone_ring(4)
    with pytest.raises(ConeRingError):
        cycle_mul(R.gen("Q"), R.gen("l"))


def test_unsupported_rank():
    with pytest.raises(ConeRingError):
        cone_ring(3)


def test_checksum_guards_transcription():
    doc = json.loads(resources.files("pnsurf").joinpath("data/cone_rank5.json").read_text())
    doc["products"][0]["value"] = {k: v + 1 for k, v in doc["products"][0]["value"].items()}
    with pytest.raises(ConeRingError):
        ConeRing(doc)


def test_enumeration_contains_line():
    sols = enumerate_cone_classes(cone_ring(4), 9, VertexConfig("contains_line"))
    assert admissible_keys(sols) == [(3, 1, 2)]


def test_enumeration_meets():
    sols = enumerate_cone_classes(cone_ring(4), 9, VertexConfig("meets"))
    assert admissible_keys(sols) == [(4, 1), (3, 3), (2, 5)]
    assert all(s.coeffs[3] == 0 for s in sols)


def test_enumeration_disjoint_empty():
    assert enumerate_cone_classes(cone_ring(5), 9, VertexConfig("disjoint")) == []
    assert enumerate_cone_classes(cone_ring(4), 9, VertexConfig("disjoint")) == []


def test_rank5_point_vertex():
    R = cone_ring(5)
    sols = enumerate_cone_classes(R, 9, VertexConfig("meets", 1))
    assert [s.coeffs for s in sols] == [(4, 1)]
    with pytest.raises(ValueError):
        enumerate_cone_classes(R, 9, VertexConfig("contains_line"))


def test_rank5_residual_nonzero():
    R = cone_ring(5)
    S = surface_class(R, 4, 1)
    # L.K = -3, and S' is S blown up at the vertex
    assert dpf_residual(R, S, -4, 4, c1_restriction_point(-3)) == 4


def test_residual_linear_in_surface_data():
    R = cone_ring(4)
    S = surface_class(R, 3, 1, 1, 1)
    c1r = c1_restriction_line(-3, 1)
    base = dpf_residual(R, S, -3, 3, c1r)
    assert dpf_residual(R, S, -2, 3, c1r) == base + 1
    assert dpf_residual(R, S, -3, 4, c1r) == base - 1


def test_residual_vanishes_on_matching_data():
    R = cone_ring(4)
    S = surface_class(R, 3, 1, 1, 1)
    lhs = (R.c2() * S).degree()
    self_int = (S * S).degree()
    # choose c2(S') so that both sides agree
    assert dpf_residual(R, S, 0, lhs - self_int - 5, 5) == 0


def test_contains_line_residuals_nonzero():
    rows = [r for r in chern_exclusion(4, 9, -3, -3, 3) if r.solution.config == "contains_line"]
    assert rows and all(r.residual != 0 for r in rows)


def test_meets_residual_formula():
    # with Case-2 data the residual reduces to a closed form in (alpha, beta, gamma)
    for r in chern_exclusion(4, 9, -3, -3, 3):
        if r.solution.config != "meets":
            continue
        a, b, g, _ = r.solution.coeffs
        s = b + g
        expected = 14 * a + 7 * s - (2 * a * a + 2 * a * s + 2 * b * g + 12 - s + 3 + s + 3 + s)
        assert r.residual == expected

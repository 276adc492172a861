from __future__ import annotations

import pytest
from hypothesis import given

from oracles import cone_points_brute, hilbert_basis_brute, toric_diagrams
from reebscope.cone import (
    InvalidDiagramError,
    PolyCone3,
    cone_over_diagram,
    cone_over_polygon,
    dual_cone,
    hilbert_basis,
    is_good,
    moment_cone,
    reeb_cone,
    simplicial_decomposition,
)
from reebscope.exactmath import dot
from reebscope.polytope import del_pezzo, family_cfo, from_vertices

from conftest import CORPUS

# reference weight matrices, one tuple per column
W_Q1 = [(-1, -1, 1), (-1, 0, 1), (-1, 1, 1), (0, -1, 1), (0, 0, 1), (0, 1, 1), (1, -1, 1), (1, 0, 1), (1, 1, 1)]
W_Q3 = [(-1, -1, 1), (-1, 0, 1), (-1, 1, 1), (-1, 2, 1), (0, -1, 1), (0, 0, 1), (0, 1, 1), (1, -1, 1), (1, 0, 1)]
W_Q4 = [(-1, -1, 1), (-1, 0, 1), (-1, 1, 1), (0, -1, 1), (0, 0, 1), (0, 1, 1), (1, -1, 1), (1, 0, 1)]
W_P3 = list(zip([-1, 1, -4, 0, 2, -3, 1, 3, -2, -1], [0, -1, 1, 0, -1, 1, 0, -1, 1, 1], [1, 2, 1, 1, 2, 1, 1, 2, 1, 1]))
W_P4 = list(
    zip(
        [-1, 1, -5, 0, 1, 2, -4, 3, -3, 4, -2, -1],
        [0, -1, 1, 0, 0, -1, 1, -1, 1, -1, 1, 1],
        [1, 3, 1, 1, 1, 3, 1, 3, 1, 3, 1, 1],
    )
)


def reflect(W):
    return sorted((x, -y, z) for x, y, z in W)


def test_cone_over_q1_and_its_dual():
    C = cone_over_diagram(del_pezzo(1))
    assert C.gorenstein().gamma == (0, 0, 1)
    D = dual_cone(C)
    assert set(D.rays) == {(-1, 1, 1), (-1, -1, 1), (1, -1, 1), (1, 1, 1)}
    assert set(dual_cone(D).rays) == set(C.rays)


@given(toric_diagrams())
def test_duality_pairs_rays_and_normals(P):
    C = cone_over_diagram(P)
    Cs = dual_cone(C)
    assert dual_cone(Cs) == C
    for r in C.rays:
        assert all(dot(r, u) >= 0 for u in Cs.rays)
    assert is_good(Cs).good
    assert C.gorenstein().is_gorenstein


def test_invalid_diagram_is_rejected():
    with pytest.raises(InvalidDiagramError):
        moment_cone(from_vertices([(0, 0), (2, 0), (0, 1)]))


def test_trapezoid_cone_is_not_good():
    T = from_vertices([(0, 0), (3, 0), (2, 1), (1, 1)])
    witness = is_good(dual_cone(cone_over_polygon(T)))
    assert not witness.good and witness.elementary_divisor == 3


def test_from_generators_extracts_extreme_rays():
    cone = PolyCone3.from_generators([(1, 0, 1), (0, 1, 1), (-1, -1, 1), (0, 0, 1), (1, 0, 2)])
    assert set(cone.rays) == {(1, 0, 1), (0, 1, 1), (-1, -1, 1)}


@pytest.mark.parametrize(
    "poly,reference,transform",
    [
        (del_pezzo(1), W_Q1, sorted),
        (del_pezzo(3), W_Q3, sorted),
        (del_pezzo(4), W_Q4, reflect),
        (family_cfo(1, 3), W_P3, sorted),
        (family_cfo(1, 4), W_P4, sorted),
    ],
    ids=["Q1", "Q3", "Q4", "P3", "P4"],
)
def test_hilbert_basis_matches_reference_matrix(poly, reference, transform):
    assert sorted(hilbert_basis(moment_cone(poly)).elements) == transform(reference)


SMALL = ["Q1", "Q2", "Q3", "Q4", "Q5", "P1,2", "P1,3", "Y2,1", "Y3,1", "Y3,2", "Q21a", "Q21b"]


@pytest.mark.parametrize("name", SMALL)
def test_hilbert_basis_matches_brute_force(name):
    C_star = moment_cone(CORPUS[name])
    assert sorted(hilbert_basis(C_star).elements) == hilbert_basis_brute(C_star)


@pytest.mark.parametrize("name", ["Q1", "Q4", "P1,3", "Y3,1", "Q21b"])
def test_half_open_pieces_tile_the_cone(name):
    C_star = moment_cone(CORPUS[name])
    pieces = simplicial_decomposition(C_star)
    grading = tuple(sum(n[k] for n in C_star.facet_normals) for k in range(3))
    for x in cone_points_brute(C_star, grading, 3 * max(dot(grading, r) for r in C_star.rays)):
        assert sum(p.contains(x) for p in pieces) == 1, x
    for p in pieces:
        assert len(p.parallelepiped_points) == p.index


def test_reeb_cone_inequalities():
    W = hilbert_basis(moment_cone(del_pezzo(1)))
    R = reeb_cone(W)
    assert R.contains((0, 0, 3)) and not R.contains((3, 0, 3))
    assert "a + b + c > 0" in R.inequalities()

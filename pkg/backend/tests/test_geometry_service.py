from fractions import Fraction

import pytest
from hypothesis import assume, given
import hypothesis.strategies as st

from app.models.models import BoxRepresentation, CubeRepresentation, Interval
from app.services.geometry_service import geometry_service
from app.services.graph_service import graph_service
from app.services.oracle_service import oracle_service
from app.storage.files import read_text
from app.storage.formats import read_representation
from app.utils.errors import InvalidInputError, VerificationError


@st.composite
def box_reps(draw, max_n=4, max_k=2):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    boxes = []
    for _ in range(n):
        box = []
        for _ in range(k):
            lo = draw(st.integers(0, 6))
            hi = draw(st.integers(lo, 7))
            box.append(Interval(lo=lo, hi=hi))
        boxes.append(tuple(box))
    return BoxRepresentation(k=k, boxes=boxes)


@st.composite
def cube_reps(draw, max_n=5, max_k=2):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    origins = [tuple(Fraction(draw(st.integers(0, 8)), 2) for _ in range(k)) for _ in range(n)]
    return CubeRepresentation(k=k, origins=origins)


def path_rep() -> BoxRepresentation:
    return BoxRepresentation(k=1, boxes=[geometry_service.box([(0, 1)]), geometry_service.box([(1, 2)]),
                                         geometry_service.box([(2, 3)])])


class TestRealize:
    def test_touching_intervals_meet(self):
        assert geometry_service.realize(path_rep()).edges == graph_service.path(3).edges

    def test_unit_cubes_use_sup_norm(self):
        rep = CubeRepresentation(k=2, origins=[(0, 0), (1, 1), (2, 0), (Fraction(1, 2), 2)])
        g = geometry_service.realize_cubes(rep)
        assert g.sorted_edges() == [(0, 1), (1, 2), (1, 3)]

    def test_zero_dimensions_realize_complete(self):
        rep = BoxRepresentation(k=0, boxes=[()] * 4)
        assert geometry_service.realize(rep).is_complete()

    @given(cube_reps())
    def test_cubes_to_boxes_keeps_graph(self, rep):
        assert geometry_service.realize(geometry_service.cubes_to_boxes(rep)).edges == \
            geometry_service.realize_cubes(rep).edges

    @given(box_reps(max_n=5, max_k=3))
    def test_realize_is_intersection_of_projections(self, rep):
        projections = [geometry_service.project(rep, t) for t in range(rep.k)]
        assert geometry_service.intersect_graphs(projections).edges == geometry_service.realize(rep).edges

    def test_project_range(self):
        with pytest.raises(InvalidInputError):
            geometry_service.project(path_rep(), 1)


class TestVerify:
    def test_ok(self):
        report = geometry_service.verify(graph_service.path(3), path_rep())
        assert report.ok and report.violations == ()

    def test_violation_kinds(self):
        report = geometry_service.verify(graph_service.cycle(3), path_rep())
        assert not report.ok
        assert [(v.u, v.v, v.kind) for v in report.violations] == [(0, 2, "missing-edge")]
        report = geometry_service.verify(graph_service.star(2), path_rep())
        kinds = {(v.u, v.v): v.kind for v in report.violations}
        assert kinds == {(0, 2): "missing-edge", (1, 2): "spurious-edge"}

    def test_size_mismatch(self):
        with pytest.raises(InvalidInputError):
            geometry_service.verify(graph_service.path(4), path_rep())

    def test_require_verified_names_pair(self):
        with pytest.raises(VerificationError) as info:
            geometry_service.require_verified(graph_service.cycle(3), path_rep())
        assert info.value.witness == (0, 2, "missing-edge")

    def test_two_dimensional_strong_product(self, fixture_path, c4_strong_p3):
        rep = read_representation(read_text(fixture_path("c4_strong_p3_plane.txt")))
        assert rep.k == 2
        assert geometry_service.verify(c4_strong_p3, rep).ok
        for t in range(2):
            projection = geometry_service.project(rep, t)
            assert c4_strong_p3.edges <= projection.edges
            assert oracle_service.interval_recognition(projection)[0]


class TestAssemblyLaws:
    @given(box_reps(), box_reps())
    def test_strong_product_rep(self, rep1, rep2):
        g1, g2 = geometry_service.realize(rep1), geometry_service.realize(rep2)
        rep = geometry_service.strong_product_rep(g1, rep1, g2, rep2)
        assert rep.k == rep1.k + rep2.k
        assert geometry_service.realize(rep).edges == graph_service.product(g1, g2, "strong").edges

    @given(cube_reps(max_n=4), cube_reps(max_n=4))
    def test_strong_product_of_cubes_stays_cubes(self, rep1, rep2):
        g1, g2 = geometry_service.realize(rep1), geometry_service.realize(rep2)
        rep = geometry_service.strong_product_rep(g1, rep1, g2, rep2)
        assert isinstance(rep, CubeRepresentation)
        assert geometry_service.verify(graph_service.product(g1, g2, "strong"), rep).ok

    def test_strong_product_rep_checks_inputs(self):
        with pytest.raises(VerificationError):
            geometry_service.strong_product_rep(graph_service.cycle(3), path_rep(),
                                                graph_service.path(3), path_rep())

    @given(box_reps(max_n=5, max_k=3))
    def test_normalize(self, rep):
        normal = geometry_service.normalize(rep)
        assert geometry_service.realize(normal).edges == geometry_service.realize(rep).edges
        for box in normal.boxes:
            for interval in box:
                assert interval.lo.denominator == 1 and 0 <= interval.lo <= interval.hi < 2 * rep.n

    @given(box_reps(), box_reps())
    def test_concat_is_intersection(self, rep1, rep2):
        assume(rep1.n == rep2.n)
        joined = geometry_service.concat_reps([rep1, rep2])
        expected = geometry_service.intersect_graphs([geometry_service.realize(rep1),
                                                      geometry_service.realize(rep2)])
        assert geometry_service.realize(joined).edges == expected.edges

    @given(box_reps(), st.sets(st.integers(0, 3)))
    def test_restrict_is_induced(self, rep, chosen):
        chosen = {v for v in chosen if v < rep.n}
        g = geometry_service.realize(rep)
        restricted = geometry_service.restrict(rep, chosen)
        assert geometry_service.realize(restricted).edges == graph_service.induced(g, chosen).edges

    def test_disjoint_union_of_complete_parts_needs_a_dimension(self):
        k2 = BoxRepresentation(k=0, boxes=[()] * 2)
        rep = geometry_service.disjoint_union_reps([k2, k2])
        assert rep.k == 1
        expected = graph_service.disjoint_union(graph_service.complete(2), graph_service.complete(2))
        assert geometry_service.realize(rep).edges == expected.edges

    @given(box_reps(), box_reps())
    def test_disjoint_union(self, rep1, rep2):
        g1, g2 = geometry_service.realize(rep1), geometry_service.realize(rep2)
        rep = geometry_service.disjoint_union_reps([rep1, rep2])
        assert rep.k == max(rep1.k, rep2.k, 1)
        assert geometry_service.realize(rep).edges == graph_service.disjoint_union(g1, g2).edges

    @given(box_reps(), st.integers(0, 3))
    def test_add_universal(self, rep, m):
        g = geometry_service.realize(rep)
        extended = geometry_service.add_universal_rep(rep, m)
        assert extended.k == rep.k
        assert geometry_service.realize(extended).edges == graph_service.add_universal(g, m).edges


class TestVertexStar:
    @pytest.mark.parametrize("g", [
        graph_service.cycle(5),
        graph_service.crown(3),
        graph_service.hypercube(3),
        graph_service.hamming(3, 2),
        graph_service.complete(3),
    ])
    @pytest.mark.parametrize("mode", ["box", "cube"])
    def test_verifies(self, g, mode):
        rep = geometry_service.vertex_star_rep(g, mode)
        assert geometry_service.verify(g, rep).ok
        assert rep.k == len(geometry_service.complement_cover(g))

    def test_cover_hits_every_non_edge(self):
        g = graph_service.crown(4)
        cover = set(geometry_service.complement_cover(g))
        assert all(u in cover or v in cover for u, v in g.non_edges())

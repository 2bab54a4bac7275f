import pytest
from hypothesis import given
import hypothesis.strategies as st

from app.models.models import CubeRepresentation, Graph
from app.services.geometry_service import geometry_service
from app.services.graph_service import graph_service
from app.services.oracle_service import oracle_service
from app.utils.errors import SizeLimitError
from app.utils.utils import ceil_log2


@st.composite
def random_graphs(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n=n, edges=edges)


def boxicity(g: Graph) -> int:
    return oracle_service.exact_boxicity(g).value


class TestRecognition:
    @pytest.mark.parametrize("g", [
        graph_service.path(5), graph_service.star(4), graph_service.complete(4),
        graph_service.from_expression("strong(P3,K2)"),
    ])
    def test_interval_graphs(self, g):
        found, rep = oracle_service.interval_recognition(g)
        assert found and rep.k == 1
        assert geometry_service.verify(g, rep).ok

    @pytest.mark.parametrize("g", [graph_service.cycle(4), graph_service.cycle(5), graph_service.crown(3)])
    def test_chordless_cycles_are_not_interval(self, g):
        assert oracle_service.interval_recognition(g) == (False, None)

    def test_unit_interval(self):
        found, rep = oracle_service.unit_interval_recognition(graph_service.path(6))
        assert found and isinstance(rep, CubeRepresentation)
        assert oracle_service.unit_interval_recognition(graph_service.star(3)) == (False, None)


class TestExactBoxicity:
    @pytest.mark.parametrize("q", range(1, 9))
    def test_complete_graphs(self, q):
        result = oracle_service.exact_boxicity(graph_service.complete(q))
        assert result.value == 0 and result.witness.k == 0

    @pytest.mark.parametrize("g, expected", [
        (graph_service.cycle(4), 2),
        (graph_service.crown(3), 2),
        (graph_service.crown(4), 2),
        (graph_service.star(5), 1),
        (graph_service.from_expression("direct(K2,K2)"), 1),
        (graph_service.from_expression("strong(S2,S2)"), 2),
    ])
    def test_known_values(self, g, expected):
        result = oracle_service.exact_boxicity(g)
        assert result.value == expected and result.optimal
        assert geometry_service.verify(g, result.witness).ok

    def test_hamming_3_2_is_at_least_log_q(self):
        result = oracle_service.exact_boxicity(graph_service.hamming(3, 2))
        assert result.value >= ceil_log2(3)
        assert geometry_service.verify(graph_service.hamming(3, 2), result.witness).ok

    def test_exceeded(self):
        result = oracle_service.exact_boxicity(graph_service.cycle(4), kmax=1)
        assert result.exceeded and result.value is None and result.witness is None

    def test_size_limit(self):
        with pytest.raises(SizeLimitError):
            oracle_service.exact_boxicity(graph_service.path(13))
        assert oracle_service.exact_boxicity(graph_service.path(13), limit=13).value == 1


class TestExactCubicity:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_stars(self, n):
        result = oracle_service.exact_cubicity(graph_service.star(n))
        assert result.value == ceil_log2(n)
        assert geometry_service.verify(graph_service.star(n), result.witness).ok

    def test_perfect_matching(self):
        assert oracle_service.exact_cubicity(graph_service.from_expression("direct(K2,K2)")).value == 1

    def test_cycle(self):
        result = oracle_service.exact_cubicity(graph_service.cycle(4))
        assert result.value == 2
        assert isinstance(result.witness, CubeRepresentation)

    def test_size_limit(self):
        with pytest.raises(SizeLimitError):
            oracle_service.exact_cubicity(graph_service.path(11))


class TestOtherOracles:
    def test_chromatic(self):
        assert oracle_service.chromatic_number(graph_service.cycle(7)) == 3
        with pytest.raises(SizeLimitError):
            oracle_service.chromatic_number(graph_service.path(6), limit=5)

    def test_hypercube_boxicity_within_layer_bound(self):
        result = oracle_service.exact_boxicity(graph_service.hypercube(3))
        assert 1 <= result.value <= 6 * 3


class TestAssemblyLaws:
    @given(random_graphs(max_n=3), random_graphs(max_n=4))
    def test_disjoint_union_takes_the_larger_part(self, g1, g2):
        # two complete parts still need one dimension to separate them
        assert boxicity(graph_service.disjoint_union(g1, g2)) == max(boxicity(g1), boxicity(g2), 1)

    @given(random_graphs(max_n=3), random_graphs(max_n=4))
    def test_join_adds(self, g1, g2):
        assert boxicity(graph_service.join(g1, g2)) == boxicity(g1) + boxicity(g2)

    @given(random_graphs(max_n=5), st.integers(0, 2))
    def test_universal_vertices_change_nothing(self, g, m):
        assert boxicity(graph_service.add_universal(g, m)) == boxicity(g)


class TestMonotonicity:
    @given(random_graphs(max_n=6), st.data())
    def test_induced_subgraphs_never_need_more(self, g, data):
        chosen = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
        sub = graph_service.induced(g, chosen)
        assert boxicity(sub) <= boxicity(g)

    @given(random_graphs(max_n=5), st.data())
    def test_induced_cubicity(self, g, data):
        chosen = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
        sub = graph_service.induced(g, chosen)
        assert oracle_service.exact_cubicity(sub).value <= oracle_service.exact_cubicity(g).value

    @given(random_graphs(max_n=5))
    def test_boxicity_at_most_cubicity(self, g):
        assert boxicity(g) <= oracle_service.exact_cubicity(g).value

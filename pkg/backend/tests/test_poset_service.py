import pytest
from hypothesis import given
import hypothesis.strategies as st
from pydantic import ValidationError

from app.models.models import LinearExtension, Poset, Realizer
from app.services.geometry_service import geometry_service
from app.services.oracle_service import oracle_service
from app.services.poset_service import poset_service
from app.utils.errors import InvalidInputError, SizeLimitError


@st.composite
def height_two_posets(draw):
    lower = draw(st.integers(1, 4))
    upper = draw(st.integers(1, 4))
    pairs = [(a, lower + b) for a in range(lower) for b in range(upper)]
    below = draw(st.sets(st.sampled_from(pairs)))
    return Poset(size=lower + upper, below=below)


class TestPosets:
    def test_transitive_closure(self):
        poset = Poset(size=3, below=[(0, 1), (1, 2)])
        assert poset.less(0, 2)
        assert poset.height() == 3

    def test_cycle_rejected(self):
        with pytest.raises(ValidationError):
            Poset(size=3, below=[(0, 1), (1, 2), (2, 0)])

    def test_boolean_layers(self):
        poset, graph = poset_service.boolean_layer_poset(3, 1, 2)
        assert poset.size == 6
        assert len(poset.below) == 6
        assert poset.labels[0] == (0, 0, 1)
        assert graph.m == 6 and all(graph.degree(v) == 2 for v in range(6))

    def test_boolean_layers_reject_bad_layers(self):
        with pytest.raises(InvalidInputError):
            poset_service.boolean_layer_poset(3, 2, 2)
        with pytest.raises(InvalidInputError):
            poset_service.boolean_layer_poset(3, 1, 4)

    def test_critical_pairs_of_antichain(self):
        assert poset_service.critical_pairs(Poset(size=2)) == [(0, 1), (1, 0)]

    def test_linear_extension(self):
        chain = poset_service.chain(3)
        assert poset_service.is_linear_extension(chain, LinearExtension(order=[0, 1, 2]))
        assert not poset_service.is_linear_extension(chain, LinearExtension(order=[1, 0, 2]))


class TestExactDimension:
    @pytest.mark.parametrize("d, i, j, expected", [(3, 1, 2, 3), (2, 0, 1, 2), (3, 0, 1, 2), (4, 1, 2, 3)])
    def test_boolean_layers(self, d, i, j, expected):
        poset, _ = poset_service.boolean_layer_poset(d, i, j)
        result = poset_service.exact_pdim(poset)
        assert result.value == expected
        assert result.exhausted and not result.exceeded
        assert poset_service.verify_realizer(poset, result.realizer)

    def test_chain_has_dimension_one(self):
        result = poset_service.exact_pdim(poset_service.chain(5))
        assert result.value == 1

    def test_exceeded(self):
        poset, _ = poset_service.boolean_layer_poset(3, 1, 2)
        result = poset_service.exact_pdim(poset, kmax=2)
        assert result.exceeded and result.value is None and result.realizer is None

    def test_size_limit(self):
        poset, _ = poset_service.boolean_layer_poset(5, 2, 3)
        with pytest.raises(SizeLimitError):
            poset_service.exact_pdim(poset, limit=10)

    def test_single_extension_is_not_a_realizer(self):
        poset, _ = poset_service.boolean_layer_poset(3, 1, 2)
        realizer = Realizer(extensions=[poset_service.default_extension(poset)])
        assert not poset_service.verify_realizer(poset, realizer)

    @given(height_two_posets())
    def test_realizer_and_box(self, poset):
        result = poset_service.exact_pdim(poset, kmax=poset.size)
        assert poset_service.verify_realizer(poset, result.realizer)
        rep = poset_service.realizer_to_box(result.realizer, poset)
        assert rep.k == 2 * result.value
        assert geometry_service.verify(poset_service.comparability_graph(poset), rep).ok


class TestRealizerToBox:
    def test_boolean_layers(self):
        poset, graph = poset_service.boolean_layer_poset(3, 1, 2)
        realizer = poset_service.exact_pdim(poset).realizer
        rep = poset_service.realizer_to_box(realizer, poset)
        assert rep.k == 6
        assert geometry_service.verify(graph, rep).ok

    def test_boxicity_is_at_least_half_the_dimension(self):
        poset, graph = poset_service.boolean_layer_poset(3, 1, 2)
        pdim = poset_service.exact_pdim(poset).value
        assert oracle_service.exact_boxicity(graph).value >= -(-pdim // 2)

    def test_rejects_tall_posets(self):
        chain = poset_service.chain(3)
        realizer = poset_service.exact_pdim(chain).realizer
        with pytest.raises(InvalidInputError):
            poset_service.realizer_to_box(realizer, chain)

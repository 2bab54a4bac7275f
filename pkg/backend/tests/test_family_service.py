from itertools import combinations

import pytest
from hypothesis import given
import hypothesis.strategies as st

from app.models.models import SetFamily, WeakHomFamily
from app.services.family_service import family_service
from app.services.geometry_service import geometry_service
from app.services.graph_service import graph_service
from app.services.oracle_service import oracle_service
from app.utils.errors import InvalidInputError, NotFoundError, VerificationError
from app.utils.utils import family_size_bound


def brute_force_double_distinguishing(family: SetFamily) -> bool:
    pairs = list(combinations(range(family.q), 2))
    return all(
        (family.sets[i] ^ family.sets[i2]) & (family.sets[j] ^ family.sets[j2])
        for i, i2 in pairs
        for j, j2 in pairs
    )


@st.composite
def small_families(draw):
    n = draw(st.integers(1, 5))
    sets = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=1, max_size=5))
    return SetFamily(n=n, sets=sets)


class TestDoubleDistinguishing:
    def test_members_are_one_based(self):
        family = family_service.from_members(4, [[1, 3], [], [4]])
        assert family.sets == (0b0101, 0, 0b1000)
        assert family.members(0) == [1, 3]

    def test_from_members_checks_universe(self):
        with pytest.raises(InvalidInputError):
            family_service.from_members(3, [[4]])

    def test_known_family(self):
        family = family_service.from_members(3, [[], [1, 2], [1, 3]])
        assert family_service.verify_double_distinguishing(family).ok

    def test_repeated_set_fails_with_witness(self):
        family = family_service.from_members(3, [[1], [1], [2]])
        check = family_service.verify_double_distinguishing(family)
        assert not check.ok
        assert check.witness == (0, 1, 0, 1)

    def test_disjoint_differences_fail(self):
        # {1} xor {} = {1} and {2} xor {} = {2} never meet
        family = family_service.from_members(2, [[], [1], [2]])
        check = family_service.verify_double_distinguishing(family)
        assert not check.ok
        assert check.witness == (0, 1, 0, 2)

    @given(small_families())
    def test_matches_brute_force(self, family):
        assert family_service.verify_double_distinguishing(family).ok == brute_force_double_distinguishing(family)


class TestRandomFamilies:
    def test_seeded_and_verified(self):
        first = family_service.random_double_distinguishing(20, 4, seed=7)
        second = family_service.random_double_distinguishing(20, 4, seed=7)
        assert first == second
        assert brute_force_double_distinguishing(first)

    @pytest.mark.parametrize("n", [8, 12, 16, 20])
    def test_size_law(self, n):
        q = family_size_bound(n)
        successes = 0
        for seed in range(10):
            try:
                family = family_service.random_double_distinguishing(n, q, seed=seed, retries=64,
                                                                     exhaustive_limit=0)
            except NotFoundError:
                continue
            assert brute_force_double_distinguishing(family)
            successes += 1
        assert successes >= 9

    def test_exhaustive_fallback(self):
        family = family_service.random_double_distinguishing(3, 3, seed=0, retries=1)
        assert family.q == 3
        assert family_service.verify_double_distinguishing(family).ok

    def test_impossible_family(self):
        with pytest.raises(NotFoundError) as info:
            family_service.random_double_distinguishing(1, 3, retries=4)
        assert info.value.attempts == 4

    def test_universe_for(self):
        assert family_service.universe_for(3) == 16


class TestWeakHomomorphisms:
    def test_hamming_realizer(self):
        family = family_service.random_double_distinguishing(16, 3, seed=1)
        realizer = family_service.hamming_realizer(3, 2, family)
        assert len(realizer.maps) == 16
        assert realizer.target.n == 4
        assert family_service.verify_realizer(realizer).ok

    def test_compose(self):
        family = family_service.random_double_distinguishing(16, 3, seed=1)
        realizer = family_service.hamming_realizer(3, 2, family)
        c4 = oracle_service.exact_boxicity(graph_service.hypercube(2)).witness
        rep = family_service.compose_realizer(realizer, c4)
        assert rep.k == 16 * c4.k
        assert geometry_service.verify(graph_service.hamming(3, 2), rep).ok

    def test_compose_cubes(self):
        family = family_service.random_double_distinguishing(16, 3, seed=1)
        realizer = family_service.hamming_realizer(3, 2, family)
        c4 = oracle_service.exact_cubicity(graph_service.hypercube(2)).witness
        rep = family_service.compose_realizer(realizer, c4)
        assert geometry_service.verify(graph_service.hamming(3, 2), rep).ok

    def test_identity_on_complete_graph(self):
        check = family_service.verify_realizer(family_service.identity_family(graph_service.complete(3)))
        assert check.ok

    def test_single_map_from_k2_squared_is_an_isomorphism(self):
        family = family_service.from_members(1, [[], [1]])
        realizer = family_service.hamming_realizer(2, 2, family)
        assert family_service.verify_realizer(realizer).ok

    def test_constant_map_leaves_non_edges(self):
        source, target = graph_service.hamming(3, 2), graph_service.hypercube(2)
        check = family_service.verify_realizer(WeakHomFamily(source=source, target=target, maps=[(0,) * 9]))
        assert not check.ok and check.kind == "unkilled-non-edge"
        assert (check.u, check.v) == (0, 4)

    def test_map_breaking_an_edge(self):
        source, target = graph_service.hamming(3, 2), graph_service.hypercube(2)
        table = (0, 3, 0, 0, 0, 0, 0, 0, 0)
        check = family_service.verify_realizer(WeakHomFamily(source=source, target=target, maps=[table]))
        assert check.kind == "not-weak-homomorphism"
        assert (check.map_index, check.u, check.v) == (0, 0, 1)
        with pytest.raises(VerificationError):
            family_service.compose_realizer(WeakHomFamily(source=source, target=target, maps=[table]),
                                            geometry_service.vertex_star_rep(target))

    def test_realizer_needs_enough_sets(self):
        family = family_service.from_members(3, [[], [1, 2]])
        with pytest.raises(InvalidInputError):
            family_service.hamming_realizer(3, 2, family)

    def test_realizer_needs_double_distinguishing_family(self):
        family = family_service.from_members(2, [[], [1], [2]])
        with pytest.raises(VerificationError):
            family_service.hamming_realizer(3, 2, family)

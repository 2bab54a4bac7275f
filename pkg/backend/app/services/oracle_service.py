import logging
from fractions import Fraction
from functools import lru_cache
from typing import List, Literal, Optional, Tuple

import networkx as nx

from ..config import DEFAULT_KMAX, ORACLE_BOX_LIMIT, ORACLE_CUBE_LIMIT
from ..models.models import (
    BoxRepresentation,
    CubeRepresentation,
    Graph,
    Interval,
    OracleResult,
    PdimResult,
    Poset,
)
from ..services.geometry_service import geometry_service
from ..services.graph_service import graph_service
from ..services.poset_service import poset_service
from ..utils.errors import InvalidInputError, SizeLimitError, VerificationError
from ..utils.utils import iter_bits

logger = logging.getLogger(__name__)

Masks = Tuple[int, ...]
ClassModel = List[Tuple[Fraction, Fraction]]


def _as_networkx(adj: Masks) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(len(adj)))
    g.add_edges_from((u, v) for u in range(len(adj)) for v in iter_bits(adj[u]) if u < v)
    return g


def _maximal_cliques(g: nx.Graph) -> List[int]:
    """Maximal cliques as sorted bitmasks."""
    return sorted(sum(1 << v for v in clique) for clique in nx.find_cliques(g))


@lru_cache(maxsize=1 << 16)
def _interval_model(adj: Masks) -> Optional[Tuple[Tuple[int, int], ...]]:
    """
    Consecutive arrangement of the maximal cliques, or None.

    A vertex that already appeared but is missing from the last placed clique
    can never reappear. Failed (placed set, last clique) states are remembered.
    """
    n = len(adj)
    if n == 0:
        return ()
    g = _as_networkx(adj)
    # interval graphs are chordal
    if not nx.is_chordal(g):
        return None
    cliques = _maximal_cliques(g)
    count = len(cliques)
    failed = set()
    order: List[int] = []

    def place(used: int, seen: int, last: int) -> bool:
        if len(order) == count:
            return True
        if (used, last) in failed:
            return False
        for c in range(count):
            if used >> c & 1:
                continue
            clique = cliques[c]
            if last >= 0 and clique & seen & ~cliques[last]:
                continue
            order.append(c)
            if place(used | 1 << c, seen | clique, c):
                return True
            order.pop()
        failed.add((used, last))
        return False

    if not place(0, 0, -1):
        return None
    first = [-1] * n
    final = [-1] * n
    for position, c in enumerate(order):
        for v in iter_bits(cliques[c]):
            if first[v] < 0:
                first[v] = position
            final[v] = position
    return tuple(zip(first, final))


def _has_claw(adj: Masks) -> bool:
    for center in range(len(adj)):
        leaves = list(iter_bits(adj[center]))
        for a_index, a in enumerate(leaves):
            for b_index in range(a_index + 1, len(leaves)):
                b = leaves[b_index]
                if adj[a] >> b & 1:
                    continue
                for c in leaves[b_index + 1:]:
                    if not adj[a] >> c & 1 and not adj[b] >> c & 1:
                        return True
    return False


def _bellman_ford(n: int, arcs: List[Tuple[int, int, Fraction]]) -> Optional[List[Fraction]]:
    """Shortest distances from a virtual source joined to every node by weight 0."""
    dist = [Fraction(0)] * n
    for _ in range(n):
        changed = False
        for a, b, w in arcs:
            if dist[a] + w < dist[b]:
                dist[b] = dist[a] + w
                changed = True
        if not changed:
            return dist
    return None


@lru_cache(maxsize=1 << 16)
def _unit_model(adj: Masks) -> Optional[Tuple[Fraction, ...]]:
    """
    Origins of a unit interval model, or None when the graph is not unit interval.

    Claw-free interval graphs admit no strictly nested clique intervals, so
    sorting by (first clique, last clique) is an umbrella ordering. Positions
    then solve x_i <= x_{i+1}, x_r(i) - x_i <= 1 and x_{r(i)+1} - x_i >= 1 + eps,
    where r(i) is the last neighbour of i in the ordering.
    """
    n = len(adj)
    model = _interval_model(adj)
    if model is None or _has_claw(adj):
        return None
    if n == 0:
        return ()
    order = sorted(range(n), key=lambda v: (model[v][0], model[v][1], v))
    eps = Fraction(1, 1 << n.bit_length())
    arcs: List[Tuple[int, int, Fraction]] = []
    for i in range(n):
        if i + 1 < n:
            arcs.append((i + 1, i, Fraction(0)))
        r = i
        while r + 1 < n and adj[order[i]] >> order[r + 1] & 1:
            r += 1
        if r > i:
            arcs.append((i, r, Fraction(1)))
        if r + 1 < n:
            arcs.append((r + 1, i, -(1 + eps)))
    dist = _bellman_ford(n, arcs)
    if dist is None:
        raise VerificationError("umbrella ordering has no unit model")
    low = min(dist)
    origins = [Fraction(0)] * n
    for position, v in enumerate(order):
        origins[v] = dist[position] - low
    return tuple(origins)


def _masks(g: Graph) -> Masks:
    return tuple(g.adjacency(u) for u in range(g.n))


def _induced_masks(adj: Masks, vertices: List[int]) -> Masks:
    index = {v: i for i, v in enumerate(vertices)}
    result = []
    for v in vertices:
        mask = 0
        for w in iter_bits(adj[v]):
            if w in index:
                mask |= 1 << index[w]
        result.append(mask)
    return tuple(result)


def _smallest_last_order(g: Graph) -> List[int]:
    """Reverse of the min-degree removal order, so high-degree vertices come first."""
    remaining = g.all_mask
    order = []
    while remaining:
        v = min(iter_bits(remaining), key=lambda u: (bin(g.adjacency(u) & remaining).count("1"), u))
        order.append(v)
        remaining &= ~(1 << v)
    return order[::-1]


class OracleService:
    """
    Service for exact boxicity and cubicity at desk scale.
    Searches covers of the non-edges by k classes such that each class leaves an
    (unit) interval supergraph, and assembles the witness from interval models.
    """

    @staticmethod
    def interval_recognition(g: Graph) -> Tuple[bool, Optional[BoxRepresentation]]:
        """
        Exact interval graph recognition.

        Args:
            g (Graph): Graph to test

        Returns:
            Tuple[bool, Optional[BoxRepresentation]]: Result and a 1-dimensional model
        """
        model = _interval_model(_masks(g))
        if model is None:
            return False, None
        rep = BoxRepresentation(k=1, boxes=[(Interval(lo=first, hi=last),) for first, last in model])
        return True, rep

    @staticmethod
    def unit_interval_recognition(g: Graph) -> Tuple[bool, Optional[CubeRepresentation]]:
        """Interval and claw-free; the model is returned as 1-dimensional cube origins."""
        origins = _unit_model(_masks(g))
        if origins is None:
            return False, None
        rep = CubeRepresentation(k=1, origins=[(o,) for o in origins])
        geometry_service.require_verified(g, rep, "unit interval model")
        return True, rep

    @staticmethod
    def _cover_search(g: Graph, k: int, unit: bool) -> Optional[List[ClassModel]]:
        """
        Split the non-edges over k classes, each non-edge into a nonempty set of them.

        Vertices are relabeled in smallest-last order and non-edges (u, v), u < v, are
        decided in (v, u) order, so after each decision the subgraph on
        {0..u} + {v} is fully decided in every class and is recognized there.
        Unused classes are interchangeable, so new classes open in order.
        """
        recognize = _unit_model if unit else _interval_model
        order = _smallest_last_order(g)
        relabel = {v: i for i, v in enumerate(order)}
        n = g.n
        adj = [0] * n
        for v in range(n):
            for w in iter_bits(g.adjacency(v)):
                adj[relabel[v]] |= 1 << relabel[w]
        full = (1 << n) - 1
        non_edges = sorted(
            ((u, v) for u in range(n) for v in range(u + 1, n) if not adj[u] >> v & 1),
            key=lambda pair: (pair[1], pair[0]),
        )
        # supergraph adjacency per class: every undecided pair counts as an edge
        start = tuple((full & ~(1 << v)) for v in range(n))
        choices = []
        for size in range(1, k + 1):
            choices.extend(mask for mask in range(1, 1 << k) if bin(mask).count("1") == size)
        nodes = 0

        def consistent(classes: List[Masks], u: int, v: int) -> bool:
            vertices = list(range(u + 1)) + [v]
            return all(recognize(_induced_masks(cls, vertices)) is not None for cls in classes)

        def extend(index: int, classes: List[Masks], opened: int) -> Optional[List[Masks]]:
            nonlocal nodes
            nodes += 1
            if index == len(non_edges):
                if all(recognize(cls) is not None for cls in classes):
                    return classes
                return None
            u, v = non_edges[index]
            for chosen in choices:
                new_classes = chosen & ~((1 << opened) - 1)
                # new classes must be the next unopened ones, contiguously
                if new_classes and new_classes != ((1 << bin(new_classes).count("1")) - 1) << opened:
                    continue
                updated = []
                for t, cls in enumerate(classes):
                    if chosen >> t & 1:
                        cls = list(cls)
                        cls[u] &= ~(1 << v)
                        cls[v] &= ~(1 << u)
                        cls = tuple(cls)
                    updated.append(cls)
                if not consistent(updated, u, v):
                    continue
                found = extend(index + 1, updated, max(opened, chosen.bit_length()))
                if found is not None:
                    return found
            return None

        result = extend(0, [start] * k, 0)
        logger.debug(f"cover search k={k} unit={unit} visited {nodes} nodes")
        if result is None:
            return None
        models = []
        for cls in result:
            if unit:
                origins = _unit_model(cls)
                models.append([(origins[relabel[v]], origins[relabel[v]] + 1) for v in range(n)])
            else:
                model = _interval_model(cls)
                models.append([tuple(map(Fraction, model[relabel[v]])) for v in range(n)])
        return models

    @staticmethod
    def _exact(g: Graph, parameter: Literal["boxicity", "cubicity"], kmax: int, limit: int) -> OracleResult:
        unit = parameter == "cubicity"
        if g.n > limit:
            raise SizeLimitError(f"{parameter} oracle input", g.n, limit)
        if kmax < 0:
            raise InvalidInputError(f"kmax must be non-negative, got {kmax}")

        if g.is_complete():
            if unit:
                witness = CubeRepresentation(k=0, origins=[()] * g.n)
            else:
                witness = BoxRepresentation(k=0, boxes=[()] * g.n)
            return OracleResult(parameter=parameter, value=0, witness=witness, optimal=True, kmax=kmax)
        if kmax < 1:
            return OracleResult(parameter=parameter, exceeded=True, kmax=kmax)

        if unit:
            found, one = OracleService.unit_interval_recognition(g)
        else:
            found, one = OracleService.interval_recognition(g)
        if found:
            return OracleResult(parameter=parameter, value=1, witness=one, optimal=True, kmax=kmax)

        for k in range(2, kmax + 1):
            models = OracleService._cover_search(g, k, unit)
            if models is None:
                logger.debug(f"{parameter} of the {g.n}-vertex graph exceeds {k}")
                continue
            if unit:
                witness = CubeRepresentation(
                    k=k, origins=[tuple(models[t][v][0] for t in range(k)) for v in range(g.n)])
            else:
                witness = BoxRepresentation(
                    k=k, boxes=[tuple(Interval(lo=models[t][v][0], hi=models[t][v][1]) for t in range(k))
                                for v in range(g.n)])
            witness = geometry_service.normalize(witness)
            geometry_service.require_verified(g, witness, f"{parameter} witness")
            logger.info(f"{parameter} of the {g.n}-vertex graph is {k}")
            return OracleResult(parameter=parameter, value=k, witness=witness, optimal=True, kmax=kmax)

        logger.info(f"{parameter} of the {g.n}-vertex graph exceeds kmax={kmax}")
        return OracleResult(parameter=parameter, exceeded=True, kmax=kmax)

    @staticmethod
    def exact_boxicity(g: Graph, kmax: int = DEFAULT_KMAX, limit: int = ORACLE_BOX_LIMIT) -> OracleResult:
        return OracleService._exact(g, "boxicity", kmax, limit)

    @staticmethod
    def exact_cubicity(g: Graph, kmax: int = DEFAULT_KMAX, limit: int = ORACLE_CUBE_LIMIT) -> OracleResult:
        return OracleService._exact(g, "cubicity", kmax, limit)

    @staticmethod
    def chromatic_number(g: Graph, limit: Optional[int] = None) -> int:
        if limit is None:
            return graph_service.coloring(g, "exact").k
        return graph_service.coloring(g, "exact", limit=limit).k

    @staticmethod
    def pdim(poset: Poset, kmax: int = DEFAULT_KMAX, limit: Optional[int] = None) -> PdimResult:
        if limit is None:
            return poset_service.exact_pdim(poset, kmax=kmax)
        return poset_service.exact_pdim(poset, kmax=kmax, limit=limit)


# Create a singleton instance
oracle_service = OracleService()

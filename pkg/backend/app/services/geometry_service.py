import logging
from fractions import Fraction
from typing import Iterable, List, Literal, Sequence, Tuple, Union

import numpy as np

from ..models.models import (
    BoxRepresentation,
    CubeRepresentation,
    Graph,
    Interval,
    Representation,
    VerificationReport,
    Violation,
)
from ..utils.errors import InvalidInputError, VerificationError

logger = logging.getLogger(__name__)


def _as_boxes(rep: Representation) -> BoxRepresentation:
    if isinstance(rep, CubeRepresentation):
        return GeometryService.cubes_to_boxes(rep)
    return rep


def _rank_arrays(rep: BoxRepresentation) -> Tuple[np.ndarray, np.ndarray]:
    """
    Integer (n, k) arrays of endpoint ranks.

    Ranks are taken per dimension over the distinct endpoint values, so every
    comparison between endpoints is preserved exactly.
    """
    lo = np.zeros((rep.n, rep.k), dtype=np.int64)
    hi = np.zeros((rep.n, rep.k), dtype=np.int64)
    for t in range(rep.k):
        values = sorted({x for box in rep.boxes for x in (box[t].lo, box[t].hi)})
        rank = {value: index for index, value in enumerate(values)}
        for v, box in enumerate(rep.boxes):
            lo[v, t] = rank[box[t].lo]
            hi[v, t] = rank[box[t].hi]
    return lo, hi


def _graph_from_matrix(adjacency: np.ndarray) -> Graph:
    n = adjacency.shape[0]
    us, vs = np.nonzero(np.triu(adjacency, k=1))
    return Graph(n=n, edges=list(zip(us.tolist(), vs.tolist())))


def _dimension_matrix(lo: np.ndarray, hi: np.ndarray, t: int) -> np.ndarray:
    return (lo[:, None, t] <= hi[None, :, t]) & (lo[None, :, t] <= hi[:, None, t])


class GeometryService:
    """
    Service for box and cube representations.
    Realizes representations as graphs, verifies them against a target and
    assembles new representations from old ones.
    """

    @staticmethod
    def box(intervals: Iterable[Tuple]) -> Tuple[Interval, ...]:
        """Build one vertex's box from (lo, hi) pairs."""
        return tuple(Interval(lo=lo, hi=hi) for lo, hi in intervals)

    @staticmethod
    def realize(rep: Representation) -> Graph:
        """
        Intersection graph of a representation.

        Args:
            rep: Box or cube representation

        Returns:
            Graph: uv is an edge iff the boxes of u and v meet in every dimension
        """
        boxes = _as_boxes(rep)
        adjacency = np.ones((boxes.n, boxes.n), dtype=bool)
        lo, hi = _rank_arrays(boxes)
        for t in range(boxes.k):
            adjacency &= _dimension_matrix(lo, hi, t)
        return _graph_from_matrix(adjacency)

    @staticmethod
    def realize_cubes(rep: CubeRepresentation) -> Graph:
        """uv is an edge iff the sup-norm distance of the origins is at most 1."""
        return GeometryService.realize(GeometryService.cubes_to_boxes(rep))

    @staticmethod
    def verify(g: Graph, rep: Representation) -> VerificationReport:
        if rep.n != g.n:
            raise InvalidInputError(f"representation has {rep.n} vertices, graph has {g.n}")
        realized = GeometryService.realize(rep)
        violations = [
            Violation(u=u, v=v, kind="missing-edge") if g.has_edge(u, v)
            else Violation(u=u, v=v, kind="spurious-edge")
            for u, v in sorted(g.edges ^ realized.edges)
        ]
        if violations:
            logger.debug(f"verification found {len(violations)} violations, first {violations[0]}")
        return VerificationReport(ok=not violations, violations=violations)

    @staticmethod
    def require_verified(g: Graph, rep: Representation, what: str = "representation") -> VerificationReport:
        """Verify and raise VerificationError naming the first violating pair."""
        report = GeometryService.verify(g, rep)
        if not report.ok:
            first = report.violations[0]
            raise VerificationError(
                f"{what} fails: {first.kind} ({first.u}, {first.v})",
                witness=(first.u, first.v, first.kind),
            )
        return report

    @staticmethod
    def project(rep: Representation, t: int) -> Graph:
        """Interval graph of dimension t."""
        boxes = _as_boxes(rep)
        if not 0 <= t < boxes.k:
            raise InvalidInputError(f"dimension {t} outside 0..{boxes.k - 1}")
        lo, hi = _rank_arrays(boxes)
        return _graph_from_matrix(_dimension_matrix(lo, hi, t))

    @staticmethod
    def intersect_graphs(graphs: Sequence[Graph]) -> Graph:
        if not graphs:
            raise InvalidInputError("nothing to intersect")
        n = graphs[0].n
        if any(g.n != n for g in graphs):
            raise InvalidInputError("graphs are on different vertex sets")
        edges = frozenset.intersection(*(g.edges for g in graphs))
        return Graph(n=n, edges=edges)

    @staticmethod
    def concat_reps(reps: Sequence[Representation]) -> Representation:
        """Stack dimensions: the realized graph is the intersection of the parts."""
        if not reps:
            raise InvalidInputError("nothing to concatenate")
        n = reps[0].n
        if any(rep.n != n for rep in reps):
            raise InvalidInputError("representations cover different vertex counts")
        if all(isinstance(rep, CubeRepresentation) for rep in reps):
            origins = [sum((rep.origins[v] for rep in reps), ()) for v in range(n)]
            return CubeRepresentation(k=sum(rep.k for rep in reps), origins=origins)
        parts = [_as_boxes(rep) for rep in reps]
        boxes = [sum((part.boxes[v] for part in parts), ()) for v in range(n)]
        return BoxRepresentation(k=sum(part.k for part in parts), boxes=boxes)

    @staticmethod
    def strong_product_rep(g1: Graph, rep1: Representation, g2: Graph, rep2: Representation) -> Representation:
        """
        Representation of the strong product: vertex (v1, v2) gets f1(v1) x f2(v2).

        Both inputs are verified first. Vertex order matches graph_service.product.
        """
        GeometryService.require_verified(g1, rep1, "first factor representation")
        GeometryService.require_verified(g2, rep2, "second factor representation")
        if isinstance(rep1, CubeRepresentation) and isinstance(rep2, CubeRepresentation):
            origins = [o1 + o2 for o1 in rep1.origins for o2 in rep2.origins]
            return CubeRepresentation(k=rep1.k + rep2.k, origins=origins)
        b1, b2 = _as_boxes(rep1), _as_boxes(rep2)
        boxes = [x1 + x2 for x1 in b1.boxes for x2 in b2.boxes]
        return BoxRepresentation(k=b1.k + b2.k, boxes=boxes)

    @staticmethod
    def normalize(rep: Representation) -> Representation:
        """
        Canonical form preserving the realized graph.

        Box endpoints become their per-dimension ranks, integers in [0, 2n).
        Cube origins are translated so each dimension starts at 0.
        """
        if isinstance(rep, CubeRepresentation):
            if rep.n == 0:
                return rep
            shifts = [min(origin[t] for origin in rep.origins) for t in range(rep.k)]
            origins = [tuple(o - s for o, s in zip(origin, shifts)) for origin in rep.origins]
            return CubeRepresentation(k=rep.k, origins=origins)
        lo, hi = _rank_arrays(rep)
        boxes = [
            tuple(Interval(lo=int(lo[v, t]), hi=int(hi[v, t])) for t in range(rep.k))
            for v in range(rep.n)
        ]
        return BoxRepresentation(k=rep.k, boxes=boxes)

    @staticmethod
    def cubes_to_boxes(rep: CubeRepresentation) -> BoxRepresentation:
        boxes = [tuple(Interval(lo=o, hi=o + 1) for o in origin) for origin in rep.origins]
        return BoxRepresentation(k=rep.k, boxes=boxes)

    @staticmethod
    def restrict(rep: Representation, vertices: Iterable[int]) -> Representation:
        """Representation of the induced subgraph on S (vertex order as graph_service.induced)."""
        chosen = sorted(set(vertices))
        if any(not 0 <= v < rep.n for v in chosen):
            raise InvalidInputError("restriction set is not a subset of the vertices")
        if isinstance(rep, CubeRepresentation):
            return CubeRepresentation(k=rep.k, origins=[rep.origins[v] for v in chosen])
        return BoxRepresentation(k=rep.k, boxes=[rep.boxes[v] for v in chosen])

    @staticmethod
    def disjoint_union_reps(reps: Sequence[BoxRepresentation]) -> BoxRepresentation:
        """
        Box representation of the disjoint union of the represented graphs.

        Components are normalized, then component c is placed in window
        [2cW, 2cW + W] of dimension 0 (W the largest normalized span). Missing
        dimensions are padded with a common interval. Two or more nonempty
        components need at least one dimension even when each is complete.
        """
        parts = [GeometryService.normalize(_as_boxes(rep)) for rep in reps]
        nonempty = [part for part in parts if part.n > 0]
        k = max((part.k for part in parts), default=0)
        if len(nonempty) >= 2:
            k = max(k, 1)
        width = 1 + max((2 * part.n for part in parts), default=0)

        boxes: List[Tuple[Interval, ...]] = []
        window = 0
        for part in parts:
            if part.n == 0:
                continue
            offset = 2 * window * width
            window += 1
            for box in part.boxes:
                row = []
                for t in range(k):
                    if t < part.k:
                        lo, hi = box[t].lo, box[t].hi
                    else:
                        lo, hi = 0, width - 1
                    if t == 0:
                        lo, hi = lo + offset, hi + offset
                    row.append(Interval(lo=lo, hi=hi))
                boxes.append(tuple(row))
        return BoxRepresentation(k=k, boxes=boxes)

    @staticmethod
    def add_universal_rep(rep: BoxRepresentation, m: int) -> BoxRepresentation:
        """Append m vertices whose intervals span every dimension."""
        if m < 0:
            raise InvalidInputError(f"cannot add {m} universal vertices")
        rep = GeometryService.normalize(_as_boxes(rep))
        span = []
        for t in range(rep.k):
            if rep.n:
                span.append(Interval(lo=min(b[t].lo for b in rep.boxes), hi=max(b[t].hi for b in rep.boxes)))
            else:
                span.append(Interval(lo=0, hi=0))
        return BoxRepresentation(k=rep.k, boxes=list(rep.boxes) + [tuple(span)] * m)

    @staticmethod
    def complement_cover(g: Graph) -> List[int]:
        """Greedy vertex cover of the complement, largest non-degree first, ties by index."""
        missing = [(~g.adjacency(u)) & g.all_mask & ~(1 << u) for u in range(g.n)]
        cover = []
        while any(missing):
            u = max(range(g.n), key=lambda x: (bin(missing[x]).count("1"), -x))
            cover.append(u)
            for v in range(g.n):
                missing[v] &= ~(1 << u)
            missing[u] = 0
        return sorted(cover)

    @staticmethod
    def vertex_star_rep(g: Graph, mode: Literal["box", "cube"] = "box") -> Representation:
        """
        Unit-interval representation with one dimension per vertex of a cover of
        the complement: u sits at [0,1], its non-neighbours at [2,3], the rest at
        [1,2]. Works for every graph, so it backs factors too large for the oracle.
        """
        cover = GeometryService.complement_cover(g)
        origins = []
        for v in range(g.n):
            row = []
            for u in cover:
                if v == u:
                    row.append(Fraction(0))
                elif not g.has_edge(u, v):
                    row.append(Fraction(2))
                else:
                    row.append(Fraction(1))
            origins.append(tuple(row))
        rep: Union[BoxRepresentation, CubeRepresentation] = CubeRepresentation(k=len(cover), origins=origins)
        if mode == "box":
            rep = GeometryService.cubes_to_boxes(rep)
        elif mode != "cube":
            raise InvalidInputError(f"unknown representation mode {mode!r}")
        GeometryService.require_verified(g, rep, "vertex-star representation")
        return rep


# Create a singleton instance
geometry_service = GeometryService()

import logging
from fractions import Fraction
from itertools import product as cartesian_tuples
from typing import List, Optional, Sequence, Tuple

from ..config import DEFAULT_KMAX, PDIM_LIMIT
from ..models.models import (
    BoxRepresentation,
    Graph,
    Interval,
    LinearExtension,
    PdimResult,
    Poset,
    Realizer,
)
from ..utils.errors import InvalidInputError, SizeLimitError, VerificationError

logger = logging.getLogger(__name__)


def _extension_from_down_sets(down: Sequence[int]) -> LinearExtension:
    """Kahn's algorithm on down-set masks, always taking the smallest available element."""
    size = len(down)
    placed = 0
    order: List[int] = []
    while len(order) < size:
        for x in range(size):
            if not placed >> x & 1 and down[x] & ~placed == 0:
                order.append(x)
                placed |= 1 << x
                break
        else:
            raise InvalidInputError("relation is cyclic, no linear extension exists")
    return LinearExtension(order=order)


def _add_reversal(down: List[int], low: int, high: int) -> Optional[List[int]]:
    """
    Force low below high in a transitively closed down-set table.

    Returns the new table, or None when high is already at or below low.
    """
    if low == high or down[low] >> high & 1:
        return None
    if down[high] >> low & 1:
        return down
    lower = down[low] | (1 << low)
    new = list(down)
    for z in range(len(down)):
        if z == high or down[z] >> high & 1:
            new[z] |= lower
    return new


class PosetService:
    """
    Service for finite posets.
    Builds Boolean layer posets, checks linear extensions and realizers, finds
    minimum realizers and turns a realizer into a box representation.
    """

    @staticmethod
    def chain(n: int) -> Poset:
        return Poset(size=n, below=[(i, i + 1) for i in range(n - 1)])

    @staticmethod
    def boolean_layer_poset(d: int, i: int, j: int) -> Tuple[Poset, Graph]:
        """
        Subposet of the Boolean lattice B_d on layers i < j.

        Elements are the 0/1 vectors of weight i followed by those of weight j,
        each layer in lexicographic order; u is below v iff u <= v coordinatewise.

        Args:
            d (int): Dimension of the lattice
            i (int): Lower layer
            j (int): Upper layer

        Returns:
            Tuple[Poset, Graph]: The poset and its bipartite comparability graph
        """
        if not 0 <= i < j <= d:
            raise InvalidInputError(f"layers must satisfy 0 <= i < j <= d, got i={i}, j={j}, d={d}")
        vectors = list(cartesian_tuples((0, 1), repeat=d))
        lower = [v for v in vectors if sum(v) == i]
        upper = [v for v in vectors if sum(v) == j]
        elements = lower + upper
        relation = [
            (a, len(lower) + b)
            for a, u in enumerate(lower)
            for b, v in enumerate(upper)
            if all(x <= y for x, y in zip(u, v))
        ]
        poset = Poset(size=len(elements), below=relation, labels=elements)
        return poset, PosetService.comparability_graph(poset)

    @staticmethod
    def comparability_graph(poset: Poset) -> Graph:
        return Graph(n=poset.size, edges=poset.below, labels=poset.labels)

    @staticmethod
    def default_extension(poset: Poset) -> LinearExtension:
        return _extension_from_down_sets([poset.down_set(x) for x in range(poset.size)])

    @staticmethod
    def is_linear_extension(poset: Poset, extension: LinearExtension) -> bool:
        if len(extension.order) != poset.size:
            return False
        return all(extension.before(x, y) for x, y in poset.below)

    @staticmethod
    def verify_realizer(poset: Poset, realizer: Realizer) -> bool:
        """True iff the intersection of the extension orders is exactly the poset order."""
        if any(not PosetService.is_linear_extension(poset, ext) for ext in realizer.extensions):
            return False
        for x, y in poset.incomparable_pairs():
            forward = any(ext.before(x, y) for ext in realizer.extensions)
            backward = any(ext.before(y, x) for ext in realizer.extensions)
            if not (forward and backward):
                return False
        return True

    @staticmethod
    def critical_pairs(poset: Poset) -> List[Tuple[int, int]]:
        """
        Ordered incomparable pairs (x, y) with D(x) within D(y) and U(y) within U(x).

        A family of linear extensions is a realizer iff, for every critical pair
        (x, y), some extension places y before x.
        """
        pairs = []
        for x in range(poset.size):
            for y in range(poset.size):
                if x == y or poset.comparable(x, y):
                    continue
                if poset.down_set(x) & ~poset.down_set(y) == 0 and poset.up_set(y) & ~poset.up_set(x) == 0:
                    pairs.append((x, y))
        return pairs

    @staticmethod
    def _search(poset: Poset, pairs: List[Tuple[int, int]], k: int) -> Optional[List[List[int]]]:
        """Assign every critical pair to one of k reversal classes; classes open in order."""
        base = [poset.down_set(x) for x in range(poset.size)]
        nodes = 0

        def extend(index: int, classes: List[List[int]]) -> Optional[List[List[int]]]:
            nonlocal nodes
            nodes += 1
            while index < len(pairs):
                x, y = pairs[index]
                if any(down[x] >> y & 1 for down in classes):
                    index += 1
                    continue
                break
            if index == len(pairs):
                return classes

            x, y = pairs[index]
            for c, down in enumerate(classes):
                updated = _add_reversal(down, y, x)
                if updated is None:
                    continue
                found = extend(index + 1, classes[:c] + [updated] + classes[c + 1:])
                if found is not None:
                    return found
            if len(classes) < k:
                updated = _add_reversal(base, y, x)
                if updated is not None:
                    return extend(index + 1, classes + [updated])
            return None

        result = extend(0, [])
        logger.debug(f"realizer search with k={k} visited {nodes} nodes")
        return result

    @staticmethod
    def exact_pdim(poset: Poset, kmax: int = DEFAULT_KMAX, limit: int = PDIM_LIMIT) -> PdimResult:
        """
        Minimum realizer by iterative deepening on the number of extensions.

        Each extension is grown as a class of reversed critical pairs; a class stays
        consistent while its closure is acyclic. Reaching k means every search
        with fewer classes was exhausted.

        Args:
            poset (Poset): Poset with at most ``limit`` elements
            kmax (int): Largest dimension to try

        Returns:
            PdimResult: Value and verified realizer, or exceeded when pdim > kmax
        """
        if poset.size > limit:
            raise SizeLimitError("poset", poset.size, limit)
        if kmax < 1:
            raise InvalidInputError(f"kmax must be at least 1, got {kmax}")

        pairs = PosetService.critical_pairs(poset)
        if not pairs:
            realizer = Realizer(extensions=[PosetService.default_extension(poset)])
            return PdimResult(value=1, realizer=realizer, exhausted=True, kmax=kmax)

        for k in range(2, kmax + 1):
            classes = PosetService._search(poset, pairs, k)
            if classes is None:
                continue
            realizer = Realizer(extensions=[_extension_from_down_sets(down) for down in classes])
            if not PosetService.verify_realizer(poset, realizer):
                raise VerificationError(f"realizer search produced an invalid realizer of size {k}")
            logger.info(f"poset on {poset.size} elements has dimension {realizer.size}")
            return PdimResult(value=realizer.size, realizer=realizer, exhausted=True, kmax=kmax)

        logger.info(f"poset on {poset.size} elements has dimension above {kmax}")
        return PdimResult(exceeded=True, exhausted=True, kmax=kmax)

    @staticmethod
    def realizer_to_box(realizer: Realizer, poset: Poset) -> BoxRepresentation:
        """
        Box representation of the comparability graph of a height-2 poset.

        Each extension L contributes two dimensions, with 1-based positions p:
        in the down dimension a minimal element a is the point [p(a), p(a)] and
        any other element b is [0, p(b)]; in the up dimension b is the point
        [p(b), p(b)] and a is [p(a), |P| + 1].

        Args:
            realizer (Realizer): Valid realizer of the poset
            poset (Poset): Poset of height at most 2

        Returns:
            BoxRepresentation: Representation of dimension 2 |R|
        """
        if poset.height() > 2:
            raise InvalidInputError(f"poset has height {poset.height()}, expected at most 2")
        if len(realizer.extensions[0].order) != poset.size:
            raise InvalidInputError("realizer and poset have different sizes")
        if not PosetService.verify_realizer(poset, realizer):
            raise VerificationError("realizer does not realize the poset")

        minimal = set(poset.minimal_elements())
        top = Fraction(poset.size + 1)
        boxes: List[List[Interval]] = [[] for _ in range(poset.size)]
        for ext in realizer.extensions:
            for x in range(poset.size):
                p = Fraction(ext.position(x) + 1)
                if x in minimal:
                    boxes[x].append(Interval(lo=p, hi=p))
                else:
                    boxes[x].append(Interval(lo=0, hi=p))
            for x in range(poset.size):
                p = Fraction(ext.position(x) + 1)
                if x in minimal:
                    boxes[x].append(Interval(lo=p, hi=top))
                else:
                    boxes[x].append(Interval(lo=p, hi=p))
        return BoxRepresentation(k=2 * realizer.size, boxes=[tuple(b) for b in boxes])


# Create a singleton instance
poset_service = PosetService()

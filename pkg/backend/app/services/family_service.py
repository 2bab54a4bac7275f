import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import FAMILY_EXHAUSTIVE_LIMIT, FAMILY_RETRIES
from ..models.models import (
    DoubleDistinguishingCheck,
    Graph,
    Representation,
    BoxRepresentation,
    CubeRepresentation,
    RealizerCheck,
    SetFamily,
    WeakHomFamily,
)
from ..services.geometry_service import geometry_service
from ..services.graph_service import graph_service
from ..utils.errors import InvalidInputError, NotFoundError, VerificationError
from ..utils.utils import ceil_ten_log2

logger = logging.getLogger(__name__)

# Rows of the pair-by-pair intersection matrix checked per numpy block
_BLOCK_ROWS = 512


def _pair_index(q: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(q) for j in range(i + 1, q)]


class FamilyService:
    """
    Service for double distinguishing set families and the weak-homomorphism
    realizers of Hamming graphs built from them.
    """

    @staticmethod
    def from_members(n: int, members: Sequence[Sequence[int]]) -> SetFamily:
        """Build a family from 1-based member lists."""
        masks = []
        for index, elements in enumerate(members):
            mask = 0
            for u in elements:
                if not 1 <= u <= n:
                    raise InvalidInputError(f"set {index} has element {u} outside 1..{n}")
                mask |= 1 << (u - 1)
            masks.append(mask)
        return SetFamily(n=n, sets=masks)

    @staticmethod
    def universe_for(q: int) -> int:
        """Universe size ceil(10 log2 q) used for alphabet size q."""
        return ceil_ten_log2(q)

    @staticmethod
    def verify_double_distinguishing(family: SetFamily) -> DoubleDistinguishingCheck:
        """
        Check that (A xor A') and (B xor B') meet for all index pairs i < i', j < j'.

        Args:
            family (SetFamily): Family to check

        Returns:
            DoubleDistinguishingCheck: ok, or the lexicographically first failing (i, i', j, j')
        """
        pairs = _pair_index(family.q)
        if not pairs:
            return DoubleDistinguishingCheck(ok=True)
        sets = family.sets
        deltas = np.array([sets[i] ^ sets[j] for i, j in pairs], dtype=np.uint64)
        for start in range(0, len(pairs), _BLOCK_ROWS):
            block = np.bitwise_and.outer(deltas[start:start + _BLOCK_ROWS], deltas)
            failures = np.argwhere(block == 0)
            if len(failures):
                row, col = failures[0]
                first, second = pairs[start + int(row)], pairs[int(col)]
                return DoubleDistinguishingCheck(ok=False, witness=first + second)
        return DoubleDistinguishingCheck(ok=True)

    @staticmethod
    def _sample(n: int, q: int, seed: int) -> SetFamily:
        rng = np.random.default_rng(seed)
        bits = rng.integers(0, 2, size=(q, n), dtype=np.uint64)
        weights = np.left_shift(np.uint64(1), np.arange(n, dtype=np.uint64))
        masks = (bits * weights).sum(axis=1, dtype=np.uint64)
        return SetFamily(n=n, sets=[int(mask) for mask in masks])

    @staticmethod
    def _exhaustive(n: int, q: int) -> Optional[SetFamily]:
        """
        Deterministic search with the first set fixed to the empty set.

        XOR-translating every set by S_0 keeps all symmetric differences, so the
        normalization loses nothing; later sets are increasing masks.
        """
        chosen = [0]
        deltas: List[int] = []

        def extend(start: int) -> bool:
            if len(chosen) == q:
                return True
            for mask in range(start, 1 << n):
                new = [mask ^ s for s in chosen]
                if any(x == 0 for x in new):
                    continue
                if any(x & y == 0 for x in new for y in deltas):
                    continue
                if any(new[a] & new[b] == 0 for a in range(len(new)) for b in range(a + 1, len(new))):
                    continue
                chosen.append(mask)
                deltas.extend(new)
                if extend(mask + 1):
                    return True
                chosen.pop()
                del deltas[len(deltas) - len(new):]
            return False

        if q == 1 or extend(1):
            return SetFamily(n=n, sets=chosen)
        return None

    @staticmethod
    def random_double_distinguishing(n: int, q: int, seed: int = 0, retries: int = FAMILY_RETRIES,
                                     exhaustive_limit: int = FAMILY_EXHAUSTIVE_LIMIT) -> SetFamily:
        """
        Random family where each element joins each set with probability 1/2.

        Retry r samples with seed + r. When every retry fails and n is small
        enough, a deterministic exhaustive search runs instead.

        Args:
            n (int): Universe size, 1..64
            q (int): Number of sets
            seed (int): Base seed
            retries (int): Number of random attempts

        Returns:
            SetFamily: A family that passed verify_double_distinguishing
        """
        if q < 1 or not 1 <= n <= 64 or retries < 1:
            raise InvalidInputError(f"need q >= 1, 1 <= n <= 64 and retries >= 1, got q={q}, n={n}, retries={retries}")
        for attempt in range(retries):
            family = FamilyService._sample(n, q, seed + attempt)
            if FamilyService.verify_double_distinguishing(family).ok:
                logger.info(f"double distinguishing family n={n} q={q} found at seed {seed + attempt}")
                return family
        logger.debug(f"{retries} random attempts failed for n={n} q={q}")

        if n <= exhaustive_limit:
            family = FamilyService._exhaustive(n, q)
            if family is not None and FamilyService.verify_double_distinguishing(family).ok:
                logger.info(f"double distinguishing family n={n} q={q} found by exhaustive search")
                return family
            raise NotFoundError(
                f"no double distinguishing family with n={n}, q={q} after {retries} attempts and exhaustive search",
                attempts=retries,
            )
        raise NotFoundError(f"no double distinguishing family with n={n}, q={q} after {retries} attempts",
                            attempts=retries)

    @staticmethod
    def hamming_realizer(q: int, d: int, family: SetFamily) -> WeakHomFamily:
        """
        Maps K_q^d -> K_2^d, one per universe element u.

        Letter a goes to 0 when u is in S_a and to 1 otherwise, applied
        coordinatewise. Only the first q sets are used.
        """
        if family.q < q:
            raise InvalidInputError(f"family has {family.q} sets, need at least {q}")
        check = FamilyService.verify_double_distinguishing(family)
        if not check.ok:
            raise VerificationError(f"family is not double distinguishing, witness {check.witness}",
                                    witness=check.witness)
        source = graph_service.hamming(q, d)
        target = graph_service.hypercube(d)
        maps = []
        for bit in range(family.n):
            letter = [0 if family.sets[a] >> bit & 1 else 1 for a in range(q)]
            table = []
            for word in source.labels:
                index = 0
                for a in word:
                    index = 2 * index + letter[a]
                table.append(index)
            maps.append(tuple(table))
        return WeakHomFamily(source=source, target=target, maps=maps)

    @staticmethod
    def verify_realizer(family: WeakHomFamily) -> RealizerCheck:
        """Every map must be a weak homomorphism and every non-edge needs a killing map."""
        target = family.target
        for index, table in enumerate(family.maps):
            for u, v in family.source.sorted_edges():
                a, b = table[u], table[v]
                if a != b and not target.has_edge(a, b):
                    return RealizerCheck(ok=False, kind="not-weak-homomorphism", map_index=index, u=u, v=v)
        for u, v in family.source.non_edges():
            killed = any(
                table[u] != table[v] and not target.has_edge(table[u], table[v])
                for table in family.maps
            )
            if not killed:
                return RealizerCheck(ok=False, kind="unkilled-non-edge", u=u, v=v)
        return RealizerCheck(ok=True)

    @staticmethod
    def compose_realizer(family: WeakHomFamily, rep_h: Representation) -> Representation:
        """
        Representation of the source graph of dimension |family| * dim(rep_h).

        Block u, dimension t gives vertex x the interval (or origin) of dimension t
        of rep_h at F_u(x).
        """
        check = FamilyService.verify_realizer(family)
        if not check.ok:
            raise VerificationError(f"not a realizer: {check.describe()}", witness=(check.u, check.v))
        geometry_service.require_verified(family.target, rep_h, "target representation")

        n = family.source.n
        if isinstance(rep_h, CubeRepresentation):
            origins = [
                tuple(rep_h.origins[table[x]][t] for table in family.maps for t in range(rep_h.k))
                for x in range(n)
            ]
            rep: Representation = CubeRepresentation(k=len(family.maps) * rep_h.k, origins=origins)
        else:
            boxes = [
                tuple(rep_h.boxes[table[x]][t] for table in family.maps for t in range(rep_h.k))
                for x in range(n)
            ]
            rep = BoxRepresentation(k=len(family.maps) * rep_h.k, boxes=boxes)
        geometry_service.require_verified(family.source, rep, "composed representation")
        return rep

    @staticmethod
    def identity_family(g: Graph) -> WeakHomFamily:
        return WeakHomFamily(source=g, target=g, maps=[tuple(range(g.n))])


# Create a singleton instance
family_service = FamilyService()

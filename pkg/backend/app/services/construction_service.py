import logging
from fractions import Fraction
from itertools import product as cartesian_tuples
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from ..config import (
    COLORING_EXACT_LIMIT,
    FAMILY_RETRIES,
    HYPERCUBE_LIMIT,
    MAX_VERTICES,
    ORACLE_BOX_LIMIT,
    ORACLE_CUBE_LIMIT,
)
from ..models.models import (
    BoxRepresentation,
    Certificate,
    CubeRepresentation,
    Graph,
    Interval,
    LedgerEntry,
    NonEdgeAudit,
    Representation,
)
from ..services.family_service import family_service
from ..services.geometry_service import geometry_service
from ..services.graph_service import graph_service
from ..services.oracle_service import oracle_service
from ..services.poset_service import poset_service
from ..utils.errors import InvalidInputError, SizeLimitError, VerificationError
from ..utils.utils import ceil_log2

logger = logging.getLogger(__name__)

Mode = Literal["box", "cube"]
HypercubeSource = Literal["auto", "oracle", "thm4", "star"]


def _check_mode(mode: str) -> None:
    if mode not in ("box", "cube"):
        raise InvalidInputError(f"unknown representation mode {mode!r}")


def _word_index(word: Sequence[int], q: int) -> int:
    index = 0
    for letter in word:
        index = index * q + letter
    return index


def _pullback(rep: Representation, images: Sequence[int]) -> Representation:
    """Representation in which vertex v copies the box (or origin) of vertex images[v]."""
    if isinstance(rep, CubeRepresentation):
        return CubeRepresentation(k=rep.k, origins=[rep.origins[i] for i in images])
    return BoxRepresentation(k=rep.k, boxes=[rep.boxes[i] for i in images])


def _in_mode(rep: Representation, mode: Mode) -> Representation:
    if mode == "box" and isinstance(rep, CubeRepresentation):
        return geometry_service.cubes_to_boxes(rep)
    if mode == "cube" and isinstance(rep, BoxRepresentation):
        raise InvalidInputError("a box representation cannot serve as a cube representation")
    return rep


def _empty_rep(n: int, mode: Mode) -> Representation:
    if mode == "cube":
        return CubeRepresentation(k=0, origins=[()] * n)
    return BoxRepresentation(k=0, boxes=[()] * n)


def _name(index: int) -> str:
    return f"G{index + 1}"


def _coordinates(graphs: Sequence[Graph]) -> List[Tuple[int, ...]]:
    """Factor coordinates of every product vertex, in product index order."""
    return list(cartesian_tuples(*(range(g.n) for g in graphs)))


class ConstructionService:
    """
    Service for certified product representations.
    Every pipeline builds a representation stage by stage, re-verifies the
    result against the target product and returns a Certificate whose ledger
    records the dimension contributed by each stage.
    """

    @staticmethod
    def certify(target: Graph, rep: Representation, theorem: str, ledger: List[LedgerEntry],
                seed: Optional[int] = None, audit: Optional[NonEdgeAudit] = None) -> Certificate:
        report = geometry_service.require_verified(target, rep, f"{theorem} certificate")
        certificate = Certificate(target=target, rep=rep, report=report, theorem=theorem,
                                  ledger=ledger, seed=seed, audit=audit)
        logger.info(f"{theorem}: certified dimension {rep.k} for a {target.n}-vertex target")
        return certificate

    @staticmethod
    def factor_rep(g: Graph, mode: Mode = "box", supplied: Optional[Representation] = None) -> Representation:
        """
        Representation of a factor: the supplied one (verified), the oracle
        witness when the factor is small, otherwise the vertex-star construction.
        """
        _check_mode(mode)
        if supplied is not None:
            rep = _in_mode(supplied, mode)
            geometry_service.require_verified(g, rep, "supplied factor representation")
            return rep
        limit = ORACLE_CUBE_LIMIT if mode == "cube" else ORACLE_BOX_LIMIT
        if g.n <= limit:
            if mode == "cube":
                result = oracle_service.exact_cubicity(g, kmax=max(g.n, 1))
            else:
                result = oracle_service.exact_boxicity(g, kmax=max(g.n, 1))
            if not result.exceeded:
                return result.witness
        logger.info(f"factor with {g.n} vertices is above the oracle limit, using the vertex-star representation")
        return geometry_service.vertex_star_rep(g, mode)

    @staticmethod
    def _factor_reps(graphs: Sequence[Graph], mode: Mode,
                     factor_reps: Optional[Sequence[Optional[Representation]]]) -> List[Representation]:
        if not graphs:
            raise InvalidInputError("at least one factor is needed")
        if factor_reps is not None and len(factor_reps) != len(graphs):
            raise InvalidInputError(f"{len(factor_reps)} factor representations for {len(graphs)} factors")
        supplied = list(factor_reps) if factor_reps is not None else [None] * len(graphs)
        return [ConstructionService.factor_rep(g, mode, rep) for g, rep in zip(graphs, supplied)]

    @staticmethod
    def _strong_rep(graphs: Sequence[Graph], reps: Sequence[Representation],
                    max_vertices: int) -> Tuple[Graph, Representation]:
        g, rep = graphs[0], reps[0]
        for other, other_rep in zip(graphs[1:], reps[1:]):
            rep = geometry_service.strong_product_rep(g, rep, other, other_rep)
            g = graph_service.product(g, other, "strong", max_vertices=max_vertices)
        return g, rep

    @staticmethod
    def thm1_strong(graphs: Sequence[Graph], factor_reps: Optional[Sequence[Optional[Representation]]] = None,
                    mode: Mode = "box", max_vertices: int = MAX_VERTICES) -> Certificate:
        """
        Strong product: vertex (v_1, ..., v_d) gets f_1(v_1) x ... x f_d(v_d).

        Args:
            graphs: Factors
            factor_reps: Optional representation per factor (None entries use the oracle)
            mode (str): box or cube

        Returns:
            Certificate: Dimension is the sum of the factor dimensions
        """
        reps = ConstructionService._factor_reps(graphs, mode, factor_reps)
        target = graph_service.product_all(graphs, "strong", max_vertices=max_vertices)
        _, rep = ConstructionService._strong_rep(graphs, reps, max_vertices)
        ledger = [LedgerEntry(stage=f"{mode}({_name(i)})", dim=r.k) for i, (g, r) in enumerate(zip(graphs, reps))]
        return ConstructionService.certify(target, rep, "thm1", ledger)

    @staticmethod
    def hypercube_rep(d: int, mode: Mode = "box", source: HypercubeSource = "auto") -> Tuple[Representation, str]:
        """
        Representation of K_2^d and the name of the stage that produced it.

        auto takes the oracle witness when 2^d fits the oracle, otherwise the
        layer pipeline (box) or the vertex-star construction (cube).
        """
        _check_mode(mode)
        cube = graph_service.hypercube(d)
        limit = ORACLE_CUBE_LIMIT if mode == "cube" else ORACLE_BOX_LIMIT
        if source == "auto":
            if cube.n <= limit:
                source = "oracle"
            elif mode == "box" and d <= HYPERCUBE_LIMIT:
                source = "thm4"
            else:
                source = "star"
        if source == "oracle":
            result = (oracle_service.exact_cubicity if mode == "cube" else oracle_service.exact_boxicity)(
                cube, kmax=max(cube.n, 1))
            return result.witness, "oracle"
        if source == "thm4":
            if mode == "cube":
                raise InvalidInputError("the layer pipeline builds box representations only")
            return ConstructionService.thm4_hypercube(d).rep, "thm4"
        if source == "star":
            return geometry_service.vertex_star_rep(cube, mode), "vertex-star"
        raise InvalidInputError(f"unknown hypercube source {source!r}")

    @staticmethod
    def thm6_hamming(q: int, d: int, mode: Mode = "box", seed: int = 0, retries: int = FAMILY_RETRIES,
                     hypercube_source: HypercubeSource = "auto") -> Certificate:
        """
        Hamming graph K_q^d from a hypercube representation.

        A double distinguishing family over ceil(10 log2 q) elements gives one
        weak homomorphism K_q^d -> K_2^d per element; composing them with the
        hypercube representation multiplies its dimension by the family size.
        """
        _check_mode(mode)
        if q < 2 or d < 1:
            raise InvalidInputError(f"hamming pipeline needs q >= 2 and d >= 1, got q={q}, d={d}")
        target = graph_service.hamming(q, d)
        hyper, source = ConstructionService.hypercube_rep(d, mode, hypercube_source)
        if q == 2:
            ledger = [LedgerEntry(stage=f"{mode}(K_2^{d}) [{source}]", dim=hyper.k)]
            return ConstructionService.certify(target, hyper, "thm6", ledger, seed=seed)

        n = family_service.universe_for(q)
        family = family_service.random_double_distinguishing(n, q, seed=seed, retries=retries)
        realizer = family_service.hamming_realizer(q, d, family)
        rep = family_service.compose_realizer(realizer, hyper)
        ledger = [LedgerEntry(stage=f"realizer({n}) x {mode}(K_2^{d}) [{source}]", dim=rep.k)]
        return ConstructionService.certify(target, rep, "thm6", ledger, seed=seed)

    @staticmethod
    def _complete_cartesian_rep(alphabets: Sequence[int], words: Sequence[Tuple[int, ...]], mode: Mode,
                                seed: int, retries: int, hypercube_source: HypercubeSource) -> Representation:
        """
        Pull back a representation of the Cartesian product of K_{q_i} along ``words``.

        The uniform K_q^d certificate (q the largest alphabet) is restricted to
        the sub-product and re-verified there.
        """
        q, d = max(alphabets), len(alphabets)
        if q == 1:
            return _empty_rep(len(words), mode)
        uniform = ConstructionService.thm6_hamming(q, d, mode, seed=seed, retries=retries,
                                                   hypercube_source=hypercube_source)
        keep = [
            v for v, word in enumerate(uniform.target.labels)
            if all(letter < size for letter, size in zip(word, alphabets))
        ]
        restricted = geometry_service.restrict(uniform.rep, keep)
        sub_product = graph_service.product_all([graph_service.complete(size) for size in alphabets], "cartesian")
        geometry_service.require_verified(sub_product, restricted, "restricted Hamming representation")
        return _pullback(restricted, [_sub_index(word, alphabets) for word in words])

    @staticmethod
    def thm2_cartesian_via_strong(graphs: Sequence[Graph], mode: Mode = "box", seed: int = 0,
                                  factor_reps: Optional[Sequence[Optional[Representation]]] = None,
                                  retries: int = FAMILY_RETRIES, hypercube_source: HypercubeSource = "auto",
                                  max_vertices: int = MAX_VERTICES) -> Certificate:
        """
        Cartesian product as the strong product intersected with the pullback of
        the Cartesian product of K_{chi_i} along the factor colorings.
        """
        reps = ConstructionService._factor_reps(graphs, mode, factor_reps)
        target = graph_service.product_all(graphs, "cartesian", max_vertices=max_vertices)
        _, strong = ConstructionService._strong_rep(graphs, reps, max_vertices)
        colorings = [graph_service.coloring(g, "exact" if g.n <= COLORING_EXACT_LIMIT else "greedy") for g in graphs]
        chis = [c.k for c in colorings]
        words = [tuple(colorings[t].colors[v] for t, v in enumerate(coords)) for coords in _coordinates(graphs)]
        colored = ConstructionService._complete_cartesian_rep(chis, words, mode, seed, retries, hypercube_source)
        rep = geometry_service.concat_reps([strong, colored])
        ledger = [LedgerEntry(stage=f"{mode}({_name(i)})", dim=r.k) for i, (g, r) in enumerate(zip(graphs, reps))]
        ledger.append(LedgerEntry(stage=f"cartesian(K_chi) chi={','.join(map(str, chis))}", dim=colored.k))
        return ConstructionService.certify(target, rep, "thm2", ledger, seed=seed)

    @staticmethod
    def thm3_cartesian_via_cubes(graphs: Sequence[Graph], mode: Mode = "box", seed: int = 0,
                                 factor_reps: Optional[Sequence[Optional[CubeRepresentation]]] = None,
                                 retries: int = FAMILY_RETRIES, hypercube_source: HypercubeSource = "auto",
                                 max_vertices: int = MAX_VERTICES) -> Certificate:
        """
        Cartesian product from cube embeddings of the factors.

        The factor origins, padded with zeros to a common dimension c, are summed
        coordinatewise; the resulting cubes H kill every layer non-edge. The
        pullback K of the Cartesian product of K_{n_i} kills every cross non-edge.

        Args:
            graphs: Factors
            mode (str): box or cube
            seed (int): Seed for the double distinguishing family

        Returns:
            Certificate: Dimension c plus the dimension of K, with a non-edge audit
        """
        _check_mode(mode)
        cubes = ConstructionService._factor_reps(graphs, "cube", factor_reps)
        target = graph_service.product_all(graphs, "cartesian", max_vertices=max_vertices)
        c = max(rep.k for rep in cubes)
        padded = [[tuple(origin) + (Fraction(0),) * (c - rep.k) for origin in rep.origins] for rep in cubes]
        origins = []
        coordinates = _coordinates(graphs)
        for label in coordinates:
            total = [Fraction(0)] * c
            for t, v in enumerate(label):
                total = [a + b for a, b in zip(total, padded[t][v])]
            origins.append(tuple(total))
        h_rep = CubeRepresentation(k=c, origins=origins)
        k_rep = ConstructionService._complete_cartesian_rep([g.n for g in graphs], coordinates, mode,
                                                            seed, retries, hypercube_source)

        audit = ConstructionService.audit_non_edges(target, coordinates, h_rep, k_rep)
        if not audit.ok:
            raise VerificationError(f"non-edge audit failed: {audit}")
        rep = geometry_service.concat_reps([_in_mode(h_rep, mode), k_rep])
        ledger = [
            LedgerEntry(stage="cube-sum c=max cub(G_i)", dim=c),
            LedgerEntry(stage=f"cartesian(K_n) n={','.join(str(g.n) for g in graphs)}", dim=k_rep.k),
        ]
        return ConstructionService.certify(target, rep, "thm3", ledger, seed=seed, audit=audit)

    @staticmethod
    def audit_non_edges(target: Graph, coordinates: Sequence[Tuple[int, ...]], h_rep: Representation,
                        k_rep: Representation) -> NonEdgeAudit:
        """Count layer non-edges killed by H and cross non-edges killed by K."""
        h_graph = geometry_service.realize(h_rep)
        k_graph = geometry_service.realize(k_rep)
        counts = {"layer_total": 0, "cross_total": 0, "layer_killed_by_h": 0, "cross_killed_by_k": 0}
        for u, v in target.non_edges():
            differing = sum(1 for a, b in zip(coordinates[u], coordinates[v]) if a != b)
            if differing == 1:
                counts["layer_total"] += 1
                counts["layer_killed_by_h"] += not h_graph.has_edge(u, v)
            else:
                counts["cross_total"] += 1
                counts["cross_killed_by_k"] += not k_graph.has_edge(u, v)
        return NonEdgeAudit(**counts)

    @staticmethod
    def thm4_hypercube(d: int, limit: int = HYPERCUBE_LIMIT) -> Certificate:
        """
        Box representation of K_2^d from the Boolean layer posets.

        For each residue k mod 3 the vertices of weight k mod 3 become universal
        and the rest of the cube splits into layer graphs B_d(w, w+1) with
        w = k+1 mod 3 and isolated extreme layers. Each layer graph is boxed
        through a minimum realizer; the components are put side by side in
        dimension 0. The three blocks are concatenated.

        Args:
            d (int): Dimension of the hypercube
            limit (int): Largest d accepted

        Returns:
            Certificate: Ledger holds one entry per residue block
        """
        if d < 1:
            raise InvalidInputError(f"hypercube pipeline needs d >= 1, got {d}")
        if d > limit:
            raise SizeLimitError("hypercube dimension", d, limit)
        target = graph_service.hypercube(d)
        weight = [sum(label) for label in target.labels]
        layer_reps: Dict[int, Tuple[List[int], BoxRepresentation, int]] = {}
        b_d = 0
        for w in range(d):
            poset, graph = poset_service.boolean_layer_poset(d, w, w + 1)
            result = poset_service.exact_pdim(poset, kmax=max(2, d))
            if result.exceeded:
                raise SizeLimitError(f"dimension search for layers ({w}, {w + 1})", d, limit)
            b_d = max(b_d, result.value)
            rep = poset_service.realizer_to_box(result.realizer, poset)
            geometry_service.require_verified(graph, rep, f"layer graph ({w}, {w + 1})")
            vertices = [_word_index(vector, 2) for vector in poset.labels]
            layer_reps[w] = (vertices, rep, result.value)

        blocks: List[Representation] = []
        ledger: List[LedgerEntry] = []
        for k in range(3):
            components: List[BoxRepresentation] = []
            covered: List[int] = []
            for w in range(d + 1):
                if w % 3 == k:
                    continue
                if w % 3 == (k + 1) % 3 and w < d:
                    vertices, rep, _ = layer_reps[w]
                    components.append(rep)
                    covered.extend(vertices)
                elif w % 3 == (k + 2) % 3 and w >= 1 and (w - 1) % 3 == (k + 1) % 3:
                    continue
                else:
                    # weight 0 or weight d with its partner layer universal
                    single = [v for v in range(target.n) if weight[v] == w]
                    components.append(BoxRepresentation(k=0, boxes=[()] * len(single)))
                    covered.extend(single)
            union = geometry_service.disjoint_union_reps(components)
            universal = [v for v in range(target.n) if weight[v] % 3 == k]
            extended = geometry_service.add_universal_rep(union, len(universal))
            position = {v: i for i, v in enumerate(covered + universal)}
            block = BoxRepresentation(k=extended.k, boxes=[extended.boxes[position[v]] for v in range(target.n)])
            blocks.append(block)
            ledger.append(LedgerEntry(stage=f"weight={k} mod 3 universal", dim=block.k))
            logger.debug(f"hypercube block {k}: {len(components)} components, dimension {block.k}")

        rep = geometry_service.concat_reps(blocks)
        certificate = ConstructionService.certify(target, rep, "thm4", ledger)
        if certificate.dimension > 6 * b_d:
            raise VerificationError(f"hypercube certificate dimension {certificate.dimension} exceeds 6 * {b_d}")
        return certificate

    @staticmethod
    def _direct_complete_rep(alphabets: Sequence[int], words: Sequence[Tuple[int, ...]],
                             mode: Mode) -> Tuple[Representation, List[int]]:
        """
        Representation of the direct product of K_{q_i} evaluated at ``words``.

        Box mode: one dimension per (i, j); the words with letter j at i get
        disjoint intervals [2r, 2r+1], every other word the full span.
        Cube mode: ceil(log2 |V_ij|) dimensions per (i, j) holding a binary code
        of the members (most significant bit first); bit 0 -> origin 0, bit 1 ->
        origin 2, outsiders -> origin 1. Alphabets of size 1 are allowed.
        """
        columns: List[List] = []
        per_factor: List[int] = []
        for i, size in enumerate(alphabets):
            dims_here = 0
            for j in range(size):
                members = [v for v, word in enumerate(words) if word[i] == j]
                rank = {v: r for r, v in enumerate(members)}
                if mode == "box":
                    span = Interval(lo=0, hi=max(2 * len(members) - 1, 0))
                    columns.append([
                        Interval(lo=2 * rank[v], hi=2 * rank[v] + 1) if v in rank else span
                        for v in range(len(words))
                    ])
                    dims_here += 1
                else:
                    bits = ceil_log2(max(len(members), 1))
                    for b in range(bits - 1, -1, -1):
                        columns.append([
                            Fraction(2 * (rank[v] >> b & 1)) if v in rank else Fraction(1)
                            for v in range(len(words))
                        ])
                    dims_here += bits
            per_factor.append(dims_here)
        if mode == "box":
            rep: Representation = BoxRepresentation(
                k=len(columns), boxes=[tuple(col[v] for col in columns) for v in range(len(words))])
        else:
            rep = CubeRepresentation(
                k=len(columns), origins=[tuple(col[v] for col in columns) for v in range(len(words))])
        return rep, per_factor

    @staticmethod
    def thm8_direct_complete(qs: Sequence[int], mode: Mode = "box", max_vertices: int = MAX_VERTICES) -> Certificate:
        _check_mode(mode)
        if not qs or any(q < 2 for q in qs):
            raise InvalidInputError(f"direct product of complete graphs needs every q_i >= 2, got {list(qs)}")
        target = graph_service.product_all([graph_service.complete(q) for q in qs], "direct",
                                           max_vertices=max_vertices)
        rep, per_factor = ConstructionService._direct_complete_rep(qs, list(target.labels), mode)
        ledger = [LedgerEntry(stage=f"V_({i + 1},*) q={q}", dim=dims)
                  for i, (q, dims) in enumerate(zip(qs, per_factor))]
        return ConstructionService.certify(target, rep, "thm8", ledger)

    @staticmethod
    def _direct_via_strong(graphs: Sequence[Graph], mode: Mode, coloring_mode: str,
                           factor_reps, max_vertices: int) -> Tuple[Graph, Representation, List[LedgerEntry],
                                                                    List[LedgerEntry]]:
        reps = ConstructionService._factor_reps(graphs, mode, factor_reps)
        target = graph_service.product_all(graphs, "direct", max_vertices=max_vertices)
        _, strong = ConstructionService._strong_rep(graphs, reps, max_vertices)
        colorings = [graph_service.coloring(g, coloring_mode) for g in graphs]
        chis = [max(c.k, 1) for c in colorings]
        words = [tuple(colorings[t].colors[v] for t, v in enumerate(coords)) for coords in _coordinates(graphs)]
        colored, per_factor = ConstructionService._direct_complete_rep(chis, words, mode)
        rep = geometry_service.concat_reps([strong, colored])
        strong_ledger = [LedgerEntry(stage=f"{mode}({_name(i)})", dim=r.k)
                         for i, (g, r) in enumerate(zip(graphs, reps))]
        chi_ledger = [LedgerEntry(stage=f"chi({_name(i)})={chi}", dim=dims)
                      for i, (g, chi, dims) in enumerate(zip(graphs, chis, per_factor))]
        return target, rep, strong_ledger, chi_ledger

    @staticmethod
    def thm7_direct_via_strong(graphs: Sequence[Graph], mode: Mode = "box",
                               factor_reps: Optional[Sequence[Optional[Representation]]] = None,
                               max_vertices: int = MAX_VERTICES) -> Certificate:
        """
        Direct product as the strong product intersected with the pullback of the
        direct product of K_{chi_i} along the factor colorings.
        """
        coloring_mode = "exact" if all(g.n <= COLORING_EXACT_LIMIT for g in graphs) else "greedy"
        target, rep, strong_ledger, chi_ledger = ConstructionService._direct_via_strong(
            graphs, mode, coloring_mode, factor_reps, max_vertices)
        return ConstructionService.certify(target, rep, "thm7", strong_ledger + chi_ledger)

    @staticmethod
    def cor9_direct_general(graphs: Sequence[Graph], factor_reps: Optional[Sequence[Optional[Representation]]] = None,
                            max_vertices: int = MAX_VERTICES) -> Certificate:
        """Box certificate of dimension sum(box(G_i) + chi(G_i)), ledger split per term."""
        target, rep, strong_ledger, chi_ledger = ConstructionService._direct_via_strong(
            graphs, "box", "exact", factor_reps, max_vertices)
        return ConstructionService.certify(target, rep, "cor9", strong_ledger + chi_ledger)

    @staticmethod
    def obs7_star_cube(n: int) -> Certificate:
        """Cube certificate for star(n): leaves get binary codes, the root sits in the middle."""
        target = graph_service.star(n)
        bits = ceil_log2(n)
        origins = [(Fraction(1),) * bits]
        for leaf in range(n):
            origins.append(tuple(Fraction(2 * (leaf >> b & 1)) for b in range(bits - 1, -1, -1)))
        rep = CubeRepresentation(k=bits, origins=origins)
        return ConstructionService.certify(target, rep, "obs7", [LedgerEntry(stage="leaf codes", dim=bits)])


def _sub_index(word: Sequence[int], alphabets: Sequence[int]) -> int:
    """Index of ``word`` in the Cartesian product of K_{q_i} with mixed alphabets."""
    index = 0
    for letter, size in zip(word, alphabets):
        index = index * size + letter
    return index


# Create a singleton instance
construction_service = ConstructionService()

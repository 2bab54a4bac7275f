import logging
from itertools import product as cartesian_tuples
from typing import Iterable, List, Literal, Optional, Sequence, Tuple, Union

import networkx as nx

from ..config import COLORING_EXACT_LIMIT, ISOMORPHISM_LIMIT, MAX_VERTICES
from ..models.models import Graph, ProperColoring
from ..utils.errors import InvalidInputError, SizeLimitError, VerificationError
from ..utils.expressions import Expression, GeneratorNode, parse_expression
logger = logging.getLogger(__name__)

ProductKind = Literal["strong", "cartesian", "direct"]
GeneratorKind = Literal["complete", "path", "cycle", "star", "hypercube", "hamming", "crown"]

PRODUCT_KINDS = ("strong", "cartesian", "direct")


def _flat_labels(g: Graph) -> List[Tuple[int, ...]]:
    if g.labels is not None:
        return list(g.labels)
    return [(i,) for i in range(g.n)]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidInputError(message)


class GraphService:
    """
    Service for building finite simple graphs.
    Provides the named generators, the three graph products, assembly
    operations, colorings and an isomorphism test.
    """

    @staticmethod
    def to_networkx(g: Graph) -> nx.Graph:
        """Undirected networkx graph on the nodes 0..n-1."""
        h = nx.Graph()
        h.add_nodes_from(range(g.n))
        h.add_edges_from(g.edges)
        return h

    @staticmethod
    def complete(q: int) -> Graph:
        _require(q >= 1, f"complete graph needs q >= 1, got {q}")
        return Graph(n=q, edges=nx.complete_graph(q).edges)

    @staticmethod
    def path(n: int) -> Graph:
        _require(n >= 1, f"path needs n >= 1, got {n}")
        return Graph(n=n, edges=nx.path_graph(n).edges)

    @staticmethod
    def cycle(n: int) -> Graph:
        _require(n >= 3, f"cycle needs n >= 3, got {n}: C_1 is a loop and C_2 a double edge, neither is simple")
        return Graph(n=n, edges=nx.cycle_graph(n).edges)

    @staticmethod
    def star(n: int) -> Graph:
        """Star with root 0 and leaves 1..n."""
        _require(n >= 1, f"star needs n >= 1 leaves, got {n}")
        return Graph(n=n + 1, edges=nx.star_graph(n).edges)

    @staticmethod
    def crown(q: int) -> Graph:
        """K_{q,q} minus a perfect matching: a_i = i, b_i = q + i, a_i ~ b_j for i != j."""
        _require(q >= 2, f"crown needs q >= 2, got {q}")
        h = nx.complete_bipartite_graph(q, q)
        h.remove_edges_from((i, q + i) for i in range(q))
        return Graph(n=2 * q, edges=h.edges)

    @staticmethod
    def hamming(q: int, d: int, max_vertices: int = MAX_VERTICES) -> Graph:
        """Cartesian power of K_q; vertex labels are the words of [q]^d (0-based)."""
        _require(q >= 2, f"hamming needs q >= 2, got {q}")
        _require(d >= 1, f"hamming needs d >= 1, got {d}")
        return GraphService.power(GraphService.complete(q), d, "cartesian", max_vertices=max_vertices)

    @staticmethod
    def hypercube(d: int, max_vertices: int = MAX_VERTICES) -> Graph:
        _require(d >= 1, f"hypercube needs d >= 1, got {d}")
        return GraphService.hamming(2, d, max_vertices=max_vertices)

    @staticmethod
    def generate(kind: GeneratorKind, q: Optional[int] = None, n: Optional[int] = None,
                 d: Optional[int] = None, max_vertices: int = MAX_VERTICES) -> Graph:
        """
        Build a named graph.

        Args:
            kind (str): complete, path, cycle, star, hypercube, hamming or crown
            q (int, optional): Clique or alphabet size
            n (int, optional): Vertex or leaf count
            d (int, optional): Dimension

        Returns:
            Graph: The generated graph
        """
        needed = {
            "complete": ("q",), "path": ("n",), "cycle": ("n",), "star": ("n",),
            "hypercube": ("d",), "hamming": ("q", "d"), "crown": ("q",),
        }
        if kind not in needed:
            raise InvalidInputError(f"unknown generator kind {kind!r}")
        params = {"q": q, "n": n, "d": d}
        missing = [name for name in needed[kind] if params[name] is None]
        if missing:
            raise InvalidInputError(f"{kind} needs parameter(s) {', '.join(missing)}")

        if kind == "complete":
            return GraphService.complete(q)
        if kind == "path":
            return GraphService.path(n)
        if kind == "cycle":
            return GraphService.cycle(n)
        if kind == "star":
            return GraphService.star(n)
        if kind == "crown":
            return GraphService.crown(q)
        if kind == "hypercube":
            return GraphService.hypercube(d, max_vertices=max_vertices)
        return GraphService.hamming(q, d, max_vertices=max_vertices)

    @staticmethod
    def from_expression(expression: Union[str, Expression], max_vertices: int = MAX_VERTICES) -> Graph:
        """Build the graph of a product expression such as cartesian(K3,P4)."""
        if isinstance(expression, str):
            expression = parse_expression(expression)
        if isinstance(expression, GeneratorNode):
            return GraphService.generate(expression.kind, q=expression.q, n=expression.n, d=expression.d,
                                         max_vertices=max_vertices)
        factors = [GraphService.from_expression(f, max_vertices=max_vertices) for f in expression.factors]
        return GraphService.product_all(factors, expression.kind, max_vertices=max_vertices)

    @staticmethod
    def product(g1: Graph, g2: Graph, kind: ProductKind, max_vertices: int = MAX_VERTICES) -> Graph:
        """
        Strong, Cartesian or direct product.

        Vertex (i1, i2) gets index i1 * n2 + i2 and the concatenated label of its
        factors (an unlabeled factor vertex i contributes (i,)).
        """
        if kind not in PRODUCT_KINDS:
            raise InvalidInputError(f"unknown product kind {kind!r}")
        _require(g1.n >= 1 and g2.n >= 1, "product factors must be nonempty")
        size = g1.n * g2.n
        if size > max_vertices:
            raise SizeLimitError(f"{kind} product", size, max_vertices)

        n2 = g2.n
        edges = set()
        if kind in ("cartesian", "strong"):
            for a in range(g1.n):
                for x, y in g2.edges:
                    edges.add((a * n2 + x, a * n2 + y))
            for a, b in g1.edges:
                for x in range(n2):
                    edges.add((a * n2 + x, b * n2 + x))
        if kind in ("direct", "strong"):
            for a, b in g1.edges:
                for x, y in g2.edges:
                    edges.add((a * n2 + x, b * n2 + y))
                    edges.add((a * n2 + y, b * n2 + x))

        labels1, labels2 = _flat_labels(g1), _flat_labels(g2)
        labels = [l1 + l2 for l1 in labels1 for l2 in labels2]
        logger.debug(f"{kind} product of {g1.n} and {g2.n} vertices: {len(edges)} edges")
        return Graph(n=size, edges=edges, labels=labels)

    @staticmethod
    def product_all(graphs: Sequence[Graph], kind: ProductKind, max_vertices: int = MAX_VERTICES) -> Graph:
        """Left-associated product of a nonempty list of factors."""
        _require(len(graphs) >= 1, "product needs at least one factor")
        size = 1
        for g in graphs:
            size *= g.n
        if size > max_vertices:
            raise SizeLimitError(f"{kind} product", size, max_vertices)
        result = graphs[0].model_copy(update={"labels": tuple(_flat_labels(graphs[0]))})
        for g in graphs[1:]:
            result = GraphService.product(result, g, kind, max_vertices=max_vertices)
        return result

    @staticmethod
    def power(g: Graph, d: int, kind: ProductKind, max_vertices: int = MAX_VERTICES) -> Graph:
        _require(d >= 1, f"power needs d >= 1, got {d}")
        if g.n ** d > max_vertices:
            raise SizeLimitError(f"{kind} power", g.n ** d, max_vertices)
        return GraphService.product_all([g] * d, kind, max_vertices=max_vertices)

    @staticmethod
    def assemble(g1: Graph, g2: Graph, kind: Literal["join", "disjoint_union"]) -> Graph:
        """Join or disjoint union; G2's vertices are shifted by n1 and labels are dropped."""
        if kind not in ("join", "disjoint_union"):
            raise InvalidInputError(f"unknown assembly kind {kind!r}")
        shift = g1.n
        edges = set(g1.edges)
        edges.update((u + shift, v + shift) for u, v in g2.edges)
        if kind == "join":
            edges.update((u, shift + v) for u in range(g1.n) for v in range(g2.n))
        return Graph(n=g1.n + g2.n, edges=edges)

    @staticmethod
    def join(g1: Graph, g2: Graph) -> Graph:
        return GraphService.assemble(g1, g2, "join")

    @staticmethod
    def disjoint_union(g1: Graph, g2: Graph) -> Graph:
        return GraphService.assemble(g1, g2, "disjoint_union")

    @staticmethod
    def induced(g: Graph, vertices: Iterable[int]) -> Graph:
        """Induced subgraph; vertex i of the result is the i-th smallest vertex of S."""
        chosen = sorted(set(vertices))
        outside = [v for v in chosen if not 0 <= v < g.n]
        if outside:
            raise InvalidInputError(f"vertices {outside} are not in the graph")
        index = {v: i for i, v in enumerate(chosen)}
        edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
        labels = [g.labels[v] for v in chosen] if g.labels is not None else None
        return Graph(n=len(chosen), edges=edges, labels=labels)

    @staticmethod
    def add_universal(g: Graph, m: int) -> Graph:
        """Add m vertices n..n+m-1 adjacent to everything, including each other."""
        _require(m >= 0, f"cannot add {m} universal vertices")
        size = g.n + m
        edges = set(g.edges)
        for w in range(g.n, size):
            edges.update((u, w) for u in range(w))
        return Graph(n=size, edges=edges)

    @staticmethod
    def complement(g: Graph) -> Graph:
        return Graph(n=g.n, edges=nx.complement(GraphService.to_networkx(g)).edges, labels=g.labels)

    @staticmethod
    def verify_coloring(g: Graph, coloring: ProperColoring) -> None:
        if len(coloring.colors) != g.n:
            raise InvalidInputError(f"coloring covers {len(coloring.colors)} of {g.n} vertices")
        for u, v in g.sorted_edges():
            if coloring.colors[u] == coloring.colors[v]:
                raise VerificationError(f"edge ({u}, {v}) is monochromatic", witness=(u, v))

    @staticmethod
    def greedy_coloring(g: Graph) -> ProperColoring:
        greedy = nx.greedy_color(GraphService.to_networkx(g), strategy="largest_first")
        colors = [greedy[u] for u in range(g.n)]
        return ProperColoring(colors=colors, k=max(colors, default=-1) + 1)

    @staticmethod
    def exact_coloring(g: Graph, limit: int = COLORING_EXACT_LIMIT) -> ProperColoring:
        """
        Minimum coloring by DSATUR branch and bound.

        The greedy coloring is the initial upper bound; a branch is cut as soon as
        it would need as many colors as the best coloring found so far.

        Args:
            g (Graph): Graph with at most ``limit`` vertices
            limit (int): Vertex limit

        Returns:
            ProperColoring: A coloring with the chromatic number of colors
        """
        if g.n > limit:
            raise SizeLimitError("exact coloring input", g.n, limit)
        best = GraphService.greedy_coloring(g)
        best_k, best_colors = best.k, list(best.colors)
        colors = [-1] * g.n
        degrees = [g.degree(u) for u in range(g.n)]
        neighbor_colors: List[set] = [set() for _ in range(g.n)]

        def choose_vertex() -> Optional[int]:
            uncolored = [u for u in range(g.n) if colors[u] == -1]
            if not uncolored:
                return None
            return max(uncolored, key=lambda u: (len(neighbor_colors[u]), degrees[u], -u))

        def backtrack(current_k: int) -> None:
            nonlocal best_k, best_colors
            u = choose_vertex()
            if u is None:
                if current_k < best_k:
                    best_k, best_colors = current_k, colors[:]
                return
            for c in range(current_k + 1):
                if c in neighbor_colors[u]:
                    continue
                new_k = max(current_k, c + 1)
                if new_k >= best_k:
                    continue
                colors[u] = c
                changed = []
                for v in g.neighbors(u):
                    if colors[v] == -1 and c not in neighbor_colors[v]:
                        neighbor_colors[v].add(c)
                        changed.append(v)
                backtrack(new_k)
                colors[u] = -1
                for v in changed:
                    neighbor_colors[v].discard(c)

        backtrack(0)
        return ProperColoring(colors=best_colors, k=best_k)

    @staticmethod
    def coloring(g: Graph, mode: Literal["greedy", "exact"] = "greedy",
                 limit: int = COLORING_EXACT_LIMIT) -> ProperColoring:
        if mode == "greedy":
            result = GraphService.greedy_coloring(g)
        elif mode == "exact":
            result = GraphService.exact_coloring(g, limit=limit)
        else:
            raise InvalidInputError(f"unknown coloring mode {mode!r}")
        GraphService.verify_coloring(g, result)
        logger.debug(f"{mode} coloring of {g.n} vertices uses {result.k} colors")
        return result

    @staticmethod
    def chromatic_number(g: Graph, limit: int = COLORING_EXACT_LIMIT) -> int:
        """Exact when the graph is within the limit, otherwise the greedy color count."""
        mode = "exact" if g.n <= limit else "greedy"
        return GraphService.coloring(g, mode, limit=limit).k

    @staticmethod
    def is_isomorphic(g: Graph, h: Graph, limit: int = ISOMORPHISM_LIMIT) -> bool:
        """VF2 isomorphism test for graphs of at most ``limit`` vertices."""
        if max(g.n, h.n) > limit:
            raise SizeLimitError("isomorphism input", max(g.n, h.n), limit)
        if g.n != h.n or g.m != h.m:
            return False
        return nx.is_isomorphic(GraphService.to_networkx(g), GraphService.to_networkx(h))

    @staticmethod
    def fiber(g: Graph, position: int, base: Tuple[int, ...]) -> List[int]:
        """Vertices of a labeled product whose label agrees with ``base`` outside ``position``."""
        if g.labels is None:
            raise InvalidInputError("fiber needs a labeled product graph")
        return [
            v for v, label in enumerate(g.labels)
            if len(label) == len(base)
            and all(label[t] == base[t] for t in range(len(base)) if t != position)
        ]

    @staticmethod
    def words(q: int, d: int) -> List[Tuple[int, ...]]:
        """The words of [q]^d in the vertex order used by hamming(q, d)."""
        return list(cartesian_tuples(range(q), repeat=d))


# Create a singleton instance
graph_service = GraphService()

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Literal, Optional, Sequence, Tuple, Union

import pandas as pd

from ..config import HYPERCUBE_LIMIT, MAX_VERTICES, ORACLE_BOX_LIMIT, ORACLE_CUBE_LIMIT
from ..models.models import BoundEntry, BoundReport, DimensionRange, FactorProfile, Graph
from ..services.geometry_service import geometry_service
from ..services.graph_service import graph_service
from ..services.oracle_service import oracle_service
from ..services.poset_service import poset_service
from ..utils.errors import InvalidInputError
from ..utils.expressions import Expression, GeneratorNode, ProductNode, parse_expression
from ..utils.utils import ceil_log2, ceil_ten_log2, log2

logger = logging.getLogger(__name__)

PARAMETERS = ("boxicity", "cubicity")
PRODUCT_KINDS = ("strong", "cartesian", "direct")
TABLE_COLUMNS = ["d", "lower", "upper", "witnessed_upper", "provenance"]

# Largest graph whose complement cover is computed for the vertex-star entry
_COVER_SIZE_LIMIT = 256

Entries = Tuple[BoundEntry, ...]


def _check_parameter(parameter: str) -> None:
    if parameter not in PARAMETERS:
        raise InvalidInputError(f"unknown parameter {parameter!r}, expected boxicity or cubicity")


def _oracle_limit(parameter: str) -> int:
    return ORACLE_CUBE_LIMIT if parameter == "cubicity" else ORACLE_BOX_LIMIT


def _lower(tag: str, value: int, raw: Optional[str] = None, reported_only: bool = False) -> BoundEntry:
    return BoundEntry(tag=tag, side="lower", value=value, raw=raw or str(value), reported_only=reported_only)


def _upper(tag: str, value: Optional[int], raw: Optional[str] = None, witnessed: bool = False,
           reported_only: bool = False) -> BoundEntry:
    return BoundEntry(tag=tag, side="upper", value=value, raw=raw or str(value),
                      witnessed=witnessed, reported_only=reported_only)


def _exact(tag: str, value: int, raw: Optional[str] = None, witnessed: bool = False,
           reported_only: bool = False) -> BoundEntry:
    return BoundEntry(tag=tag, side="exact", value=value, raw=raw or str(value),
                      witnessed=witnessed, reported_only=reported_only)


def _summarize(entries: Sequence[BoundEntry]) -> DimensionRange:
    """Best lower, best upper and best witnessed upper over a list of entries."""
    lowers = [e.value for e in entries if e.side in ("lower", "exact") and e.value is not None]
    uppers = [e.value for e in entries if e.side in ("upper", "exact") and e.value is not None]
    witnessed = [e.value for e in entries if e.side in ("upper", "exact") and e.witnessed and e.value is not None]
    return DimensionRange(lo=max(lowers, default=0), hi=min(uppers, default=None),
                          witnessed=min(witnessed, default=None))


def _attaining(entries: Sequence[BoundEntry], side: str, value: Optional[int], witnessed: bool = False) -> str:
    if value is None:
        return "-"
    for entry in entries:
        if entry.side in (side, "exact") and entry.value == value and (entry.witnessed or not witnessed):
            return entry.tag
    return "-"


def _total(values: Sequence[Optional[int]]) -> Optional[int]:
    return None if any(v is None for v in values) else sum(values)


def _largest(values: Sequence[Optional[int]]) -> Optional[int]:
    return None if any(v is None for v in values) else max(values)


def _plus(a: Optional[int], b: Optional[int]) -> Optional[int]:
    return None if a is None or b is None else a + b


def _upper_pair(tag: str, best: Optional[int], witnessed: Optional[int], raw: str,
                buildable: bool) -> List[BoundEntry]:
    """
    Upper entries of one formula: the value from certified inputs, plus the
    value from the best known inputs when that is smaller.
    """
    entries = []
    if witnessed is not None:
        entries.append(_upper(tag, witnessed, raw=raw, witnessed=buildable))
    if best is not None and (witnessed is None or best < witnessed):
        entries.append(_upper(tag, best, raw=raw, reported_only=True))
    return entries


def _generic_entries(n: int, complete: bool, has_edge: bool, parameter: str, buildable: bool) -> List[BoundEntry]:
    """Bounds that hold for every graph on n vertices."""
    if complete:
        return [_exact("complete", 0, witnessed=True)]
    if not has_edge:
        return [_exact("edgeless", 1, raw="disjoint intervals", witnessed=buildable)]
    entries = [_lower("non-complete", 1)]
    if parameter == "boxicity":
        entries.append(_upper("roberts", n // 2, raw=f"floor({n}/2)", reported_only=True))
    else:
        entries.append(_upper("roberts", 2 * n // 3, raw=f"floor(2*{n}/3)", reported_only=True))
    return entries


def _oracle_entries(g: Graph, parameter: str) -> List[BoundEntry]:
    if g.n > _oracle_limit(parameter):
        return []
    if parameter == "cubicity":
        result = oracle_service.exact_cubicity(g, kmax=g.n)
    else:
        result = oracle_service.exact_boxicity(g, kmax=g.n)
    if result.exceeded:
        return [_lower("oracle", result.kmax + 1)]
    return [_exact("oracle", result.value, witnessed=True)]


def _vertex_star_entry(n: int, build: Callable[[], Graph], max_vertices: int) -> BoundEntry:
    if n <= _COVER_SIZE_LIMIT:
        size = len(geometry_service.complement_cover(build()))
        return _upper("vertex-star", size, raw=f"complement cover of size {size}", witnessed=n <= max_vertices)
    # a greedy cover of a non-complete graph leaves at least one vertex out
    return _upper("vertex-star", n - 1, raw=f"{n}-1", witnessed=n <= max_vertices)


@lru_cache(maxsize=None)
def _layer_dimension(d: int) -> Optional[int]:
    """b_d: the largest dimension among the posets of two adjacent Boolean layers."""
    if d > HYPERCUBE_LIMIT:
        return None
    best = 0
    for w in range(d):
        poset, _ = poset_service.boolean_layer_poset(d, w, w + 1)
        result = poset_service.exact_pdim(poset, kmax=max(2, d))
        if result.exceeded:
            return None
        best = max(best, result.value)
    logger.debug(f"b_{d} = {best}")
    return best


@lru_cache(maxsize=None)
def _hypercube_entries(d: int, parameter: str, lower_only: bool = False,
                       max_vertices: int = MAX_VERTICES) -> Entries:
    """Bounds on K_2^d for d >= 2."""
    n = 2 ** d
    loglog = math.ceil(log2(log2(d)))
    half = Fraction(loglog + 1, 2)
    entries = [_lower("hypercube-loglog", math.ceil(half), raw=f"(ceil(log log {d})+1)/2 = {half}",
                      reported_only=True)]
    b_d = _layer_dimension(d)
    if b_d is not None:
        entries.append(_lower("thm4", math.ceil(Fraction(b_d, 2)), raw=f"b_{d}/2 = {Fraction(b_d, 2)}"))
    if n <= _oracle_limit(parameter):
        oracle = _oracle_entries(graph_service.hypercube(d), parameter)
        if lower_only:
            oracle = [e.model_copy(update={"side": "lower", "witnessed": False}) for e in oracle]
        entries.extend(oracle)
    if lower_only:
        return tuple(entries)

    if parameter == "boxicity":
        if b_d is not None:
            entries.append(_upper("thm4", 6 * b_d, raw=f"6*b_{d}", witnessed=n <= max_vertices))
            entries.append(_upper("thm4-3b", 3 * b_d, raw=f"3*b_{d}", reported_only=True))
        if d >= 3:
            value = 12 * log2(d) / log2(log2(d))
            entries.append(_upper("thm4-log", math.floor(value), raw=f"12 log {d}/log log {d} = {value:.4f}",
                                  reported_only=True))
    # cubicity of K_2^d is at most 2d/log d, which also bounds the boxicity
    value = 2 * d / log2(d)
    entries.append(_upper("hypercube-d/log d", math.ceil(value), raw=f"2d/log d = {value:.4f}", reported_only=True))
    entries.append(_vertex_star_entry(n, lambda: graph_service.hypercube(d, max_vertices=max(n, 1)), max_vertices))
    return tuple(entries)


def _hypercube_range(d: int, parameter: str, max_vertices: int = MAX_VERTICES) -> DimensionRange:
    if d <= 1:
        return DimensionRange(lo=0, hi=0, witnessed=0)
    return _summarize(_hypercube_entries(d, parameter, max_vertices=max_vertices))


def _hamming_upper(q: int, d: int, parameter: str,
                   max_vertices: int = MAX_VERTICES) -> Tuple[Optional[int], Optional[int]]:
    """
    Upper bounds (best, witnessed) on the Cartesian product of d copies of K_q
    through ceil(10 log q) weak homomorphisms into K_2^d.
    """
    if q <= 1 or d <= 1:
        return 0, 0
    hyper = _hypercube_range(d, parameter, max_vertices)
    factor = 1 if q == 2 else ceil_ten_log2(q)
    best = None if hyper.hi is None else factor * hyper.hi
    witnessed = None if hyper.witnessed is None else factor * hyper.witnessed
    return best, witnessed


def _direct_complete_entries(qs: Sequence[int], parameter: str, buildable: bool) -> List[BoundEntry]:
    """Bounds on the direct product of K_{q_i}, every q_i >= 2."""
    n = math.prod(qs)
    half = Fraction(sum(q - 2 for q in qs), 2)
    entries = [_lower("thm8", math.ceil(half), raw=f"sum(q_i-2)/2 = {half}")]
    if len(qs) >= 2 and all(q == 2 for q in qs):
        entries.append(_exact("perfect-matching", 1, raw=f"{n // 2} disjoint edges"))
    if parameter == "boxicity":
        entries.append(_upper("thm8", sum(qs), raw="sum q_i", witnessed=buildable))
    else:
        ceiled = sum(q * ceil_log2(n // q) for q in qs)
        stated = sum(q * log2(n // q) for q in qs)
        entries.append(_upper("thm8", ceiled,
                              raw=f"sum q_i ceil(log(n/q_i)); sum q_i log(n/q_i) = {stated:.4f}",
                              witnessed=buildable))
    return entries


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidInputError(message)


def _generator_shape(node: GeneratorNode) -> Dict[str, Union[int, bool]]:
    """Vertex count, edge presence, completeness, universal vertex, chromatic and clique numbers."""
    kind, q, n, d = node.kind, node.q, node.n, node.d
    if kind == "complete":
        _require(q >= 1, f"complete graph needs q >= 1, got {q}")
        return dict(n=q, has_edge=q >= 2, complete=True, universal=True, chi=q, omega=q)
    if kind == "path":
        _require(n >= 1, f"path needs n >= 1, got {n}")
        return dict(n=n, has_edge=n >= 2, complete=n <= 2, universal=n <= 3, chi=min(n, 2), omega=min(n, 2))
    if kind == "cycle":
        _require(n >= 3, f"cycle needs n >= 3, got {n}: C_1 is a loop and C_2 a double edge, neither is simple")
        return dict(n=n, has_edge=True, complete=n == 3, universal=n == 3,
                    chi=2 if n % 2 == 0 else 3, omega=3 if n == 3 else 2)
    if kind == "star":
        _require(n >= 1, f"star needs n >= 1 leaves, got {n}")
        return dict(n=n + 1, has_edge=True, complete=n == 1, universal=True, chi=2, omega=2)
    if kind == "crown":
        _require(q >= 2, f"crown needs q >= 2, got {q}")
        return dict(n=2 * q, has_edge=True, complete=False, universal=False, chi=2, omega=2)
    if kind == "hypercube":
        _require(d >= 1, f"hypercube needs d >= 1, got {d}")
        return dict(n=2 ** d, has_edge=True, complete=d == 1, universal=d == 1, chi=2, omega=2)
    if kind == "hamming":
        _require(q >= 2 and d >= 1, f"hamming needs q >= 2 and d >= 1, got q={q}, d={d}")
        return dict(n=q ** d, has_edge=True, complete=d == 1, universal=d == 1, chi=q, omega=q)
    raise InvalidInputError(f"unknown generator kind {kind!r}")


def _product_shape(kind: str, profiles: Sequence[FactorProfile]) -> Dict[str, Union[int, bool]]:
    n = math.prod(p.n for p in profiles)
    if kind == "strong":
        return dict(n=n, has_edge=any(p.has_edge for p in profiles),
                    complete=all(p.complete for p in profiles),
                    universal=all(p.universal for p in profiles),
                    chi=math.prod(p.chi for p in profiles), omega=math.prod(p.omega for p in profiles))
    if kind == "cartesian":
        nontrivial = [p for p in profiles if p.n > 1]
        return dict(n=n, has_edge=any(p.has_edge for p in profiles),
                    complete=len(nontrivial) <= 1 and all(p.complete for p in nontrivial),
                    universal=len(nontrivial) <= 1 and all(p.universal for p in nontrivial),
                    chi=max(p.chi for p in profiles), omega=max(p.omega for p in profiles))
    has_edge = all(p.has_edge for p in profiles)
    return dict(n=n, has_edge=has_edge, complete=n == 1, universal=n == 1,
                chi=min(p.chi for p in profiles) if has_edge else 1,
                omega=min(p.omega for p in profiles) if has_edge else 1)


def _generator_entries(node: GeneratorNode, parameter: str, max_vertices: int) -> List[BoundEntry]:
    shape = _generator_shape(node)
    n = shape["n"]
    entries = _generic_entries(n, shape["complete"], shape["has_edge"], parameter, n <= max_vertices)
    if shape["complete"]:
        return entries

    def build() -> Graph:
        return graph_service.generate(node.kind, q=node.q, n=node.n, d=node.d, max_vertices=max(n, max_vertices))

    kind = node.kind
    if kind == "hypercube" or (kind == "hamming" and node.q == 2):
        return entries + list(_hypercube_entries(node.d, parameter, max_vertices=max_vertices))
    if kind == "path":
        entries.append(_exact("unit-interval", 1, witnessed=True))
    elif kind == "cycle":
        entries.append(_lower("chordless-cycle", 2))
        if parameter == "boxicity":
            entries.append(_upper("cycle", 2, reported_only=True))
    elif kind == "star":
        if parameter == "boxicity":
            entries.append(_exact("interval", 1, witnessed=True))
        else:
            entries.append(_exact("obs7", ceil_log2(node.n), raw=f"ceil(log {node.n})", witnessed=True))
    elif kind == "crown":
        if parameter == "boxicity":
            entries.append(_lower("crown", math.ceil(Fraction(node.q, 2)), raw=f"ceil({node.q}/2)",
                                  reported_only=True))
        entries.extend(_direct_complete_entries([node.q, 2], parameter, n <= max_vertices))
    elif kind == "hamming":
        entries.append(_lower("thm6", ceil_log2(node.q), raw=f"log {node.q} = {log2(node.q):.4f}"))
        best, witnessed = _hamming_upper(node.q, node.d, parameter, max_vertices)
        entries.extend(_upper_pair("thm6", best, witnessed, f"ceil(10 log {node.q}) * {parameter}(K_2^{node.d})",
                                   n <= max_vertices))

    if n <= _oracle_limit(parameter):
        entries.extend(_oracle_entries(build(), parameter))
    entries.append(_vertex_star_entry(n, build, max_vertices))
    return entries


def _strong_entries(profiles: Sequence[FactorProfile], ranges: Sequence[DimensionRange],
                    buildable: bool) -> List[BoundEntry]:
    entries = [_lower("obs1", max(r.lo for r in ranges), raw="largest factor lower bound")]
    if all(p.universal for p in profiles):
        entries.append(_lower("thm1", sum(r.lo for r in ranges), raw="sum of factor bounds, universal vertices"))
    entries.extend(_upper_pair("thm1", _total([r.hi for r in ranges]), _total([r.witnessed for r in ranges]),
                               "sum of factor dimensions", buildable))
    return entries


def _cartesian_entries(profiles: Sequence[FactorProfile], ranges: Sequence[DimensionRange], parameter: str,
                       buildable: bool, max_vertices: int) -> List[BoundEntry]:
    d = len(profiles)
    entries = [_lower("obs1", max(r.lo for r in ranges), raw="largest factor lower bound")]
    omegas = sorted((p.omega for p in profiles), reverse=True)
    if omegas[1] >= 2:
        entries.append(_lower("thm6", ceil_log2(omegas[1]), raw=f"log {omegas[1]}, induced K_{omegas[1]}^2"))
    with_edges = sum(1 for p in profiles if p.has_edge)
    if with_edges >= 2:
        for entry in _hypercube_entries(with_edges, parameter, lower_only=True, max_vertices=max_vertices):
            entries.append(entry.model_copy(update={"tag": f"induced-hypercube:{entry.tag}"}))

    q = max(p.chi for p in profiles)
    best, witnessed = _hamming_upper(q, d, parameter, max_vertices)
    entries.extend(_upper_pair(
        "thm2", _plus(_total([r.hi for r in ranges]), best), _plus(_total([r.witnessed for r in ranges]), witnessed),
        f"sum of factor dimensions + {parameter}(K_{q}^{d})", buildable))

    q = max(p.n for p in profiles)
    best, witnessed = _hamming_upper(q, d, parameter, max_vertices)
    entries.extend(_upper_pair(
        "thm3", _plus(_largest([p.cube.hi for p in profiles]), best),
        _plus(_largest([p.cube.witnessed for p in profiles]), witnessed),
        f"max c_i + {parameter}(K_{q}^{d})", buildable))
    return entries


def _direct_entries(profiles: Sequence[FactorProfile], ranges: Sequence[DimensionRange], parameter: str,
                    buildable: bool) -> List[BoundEntry]:
    if all(p.complete for p in profiles):
        return _direct_complete_entries([p.n for p in profiles], parameter, buildable)
    chis = [p.chi for p in profiles]
    best = _total([r.hi for r in ranges])
    witnessed = _total([r.witnessed for r in ranges])
    if parameter == "boxicity":
        return _upper_pair("cor9", _plus(best, sum(chis)), _plus(witnessed, sum(chis)), "sum (b_i + chi_i)",
                           buildable)
    # the pipeline codes every colour class of the product, which has at most n vertices
    n = math.prod(p.n for p in profiles)
    total = math.prod(chis)
    stated = sum(c * ceil_log2(total // c) for c in chis)
    coded = sum(c * ceil_log2(n) for c in chis)
    return _upper_pair("thm7", _plus(best, stated), _plus(witnessed, coded),
                       "sum c_i + sum chi_i ceil(log(n/chi_i))", buildable)


def _profile(node: Expression, max_vertices: int) -> FactorProfile:
    return _cached_profile(str(node), max_vertices)


@lru_cache(maxsize=None)
def _cached_profile(text: str, max_vertices: int) -> FactorProfile:
    node = parse_expression(text)
    if isinstance(node, GeneratorNode):
        shape = _generator_shape(node)
    elif len(node.factors) == 1:
        return _profile(node.factors[0], max_vertices)
    else:
        shape = _product_shape(node.kind, [_profile(f, max_vertices) for f in node.factors])
    return FactorProfile(
        **shape,
        box=_summarize(_cached_entries(text, "boxicity", max_vertices)),
        cube=_summarize(_cached_entries(text, "cubicity", max_vertices)),
    )


@lru_cache(maxsize=None)
def _cached_entries(text: str, parameter: str, max_vertices: int) -> Entries:
    node = parse_expression(text)
    if isinstance(node, GeneratorNode):
        return tuple(_generator_entries(node, parameter, max_vertices))
    if len(node.factors) == 1:
        return _cached_entries(str(node.factors[0]), parameter, max_vertices)

    profiles = [_profile(f, max_vertices) for f in node.factors]
    shape = _product_shape(node.kind, profiles)
    n = shape["n"]
    buildable = n <= max_vertices
    entries = _generic_entries(n, shape["complete"], shape["has_edge"], parameter, buildable)
    if shape["complete"] or not shape["has_edge"]:
        return tuple(entries)

    ranges = [p.range(parameter) for p in profiles]
    if node.kind == "strong":
        entries.extend(_strong_entries(profiles, ranges, buildable))
    elif node.kind == "cartesian":
        entries.extend(_cartesian_entries(profiles, ranges, parameter, buildable, max_vertices))
    else:
        entries.extend(_direct_entries(profiles, ranges, parameter, buildable))
    if n <= _oracle_limit(parameter):
        entries.extend(_oracle_entries(graph_service.from_expression(node, max_vertices=max_vertices), parameter))
    return tuple(entries)


class BoundService:
    """
    Service for numeric bounds on the boxicity and cubicity of product expressions.
    Every applicable formula becomes one entry; entries backed by a certified
    pipeline in this toolkit are marked witnessed, external constants are
    reported only.
    """

    @staticmethod
    def bound(expression: Union[str, Expression], parameter: str = "boxicity",
              max_vertices: int = MAX_VERTICES) -> BoundReport:
        """
        Evaluate the bound formulas for a product expression.

        Args:
            expression: Expression text such as cartesian(K3,K3), or a parsed expression
            parameter (str): boxicity or cubicity
            max_vertices (int): Largest product for which a witness is considered buildable

        Returns:
            BoundReport: Best lower, upper and witnessed upper bound with every entry
        """
        _check_parameter(parameter)
        node = parse_expression(expression) if isinstance(expression, str) else expression
        entries = _cached_entries(str(node), parameter, max_vertices)
        summary = _summarize(entries)
        logger.debug(f"{parameter} of {node}: [{summary.lo}, {summary.hi}] from {len(entries)} entries")
        return BoundReport(parameter=parameter, expression=str(node), lower=summary.lo, upper=summary.hi,
                           witnessed_upper=summary.witnessed, entries=entries)

    @staticmethod
    def profile(expression: Union[str, Expression], max_vertices: int = MAX_VERTICES) -> FactorProfile:
        node = parse_expression(expression) if isinstance(expression, str) else expression
        return _profile(node, max_vertices)

    @staticmethod
    def growth_table(seed: str, kind: Literal["strong", "cartesian", "direct"], parameter: str,
                     d_max: int, max_vertices: int = MAX_VERTICES) -> pd.DataFrame:
        """
        Bounds for the powers G^1 .. G^d_max of a seed expression.

        Strong and Cartesian powers contain every lower power as an induced
        subgraph, so their lower column never decreases.

        Args:
            seed (str): Seed expression, usually a generator token such as K2
            kind (str): strong, cartesian or direct
            parameter (str): boxicity or cubicity
            d_max (int): Largest exponent

        Returns:
            pd.DataFrame: Columns d, lower, upper, witnessed_upper, provenance
        """
        _check_parameter(parameter)
        if kind not in PRODUCT_KINDS:
            raise InvalidInputError(f"unknown product kind {kind!r}")
        if d_max < 1:
            raise InvalidInputError(f"d_max must be at least 1, got {d_max}")
        base = parse_expression(seed)

        rows = []
        previous = 0
        for d in range(1, d_max + 1):
            node = base if d == 1 else ProductNode(kind=kind, factors=[base] * d)
            report = BoundService.bound(node, parameter, max_vertices)
            lower, lower_tag = report.lower, _attaining(report.entries, "lower", report.lower)
            if kind != "direct" and lower < previous:
                lower, lower_tag = previous, "obs1"
            previous = lower
            provenance = ";".join([
                f"lower={lower_tag}",
                f"upper={_attaining(report.entries, 'upper', report.upper)}",
                f"witnessed={_attaining(report.entries, 'upper', report.witnessed_upper, witnessed=True)}",
            ])
            rows.append({"d": d, "lower": lower, "upper": report.upper,
                         "witnessed_upper": report.witnessed_upper, "provenance": provenance})
            logger.debug(f"{kind} power {d} of {seed}: {lower}..{report.upper}")

        table = pd.DataFrame(rows, columns=TABLE_COLUMNS)
        # upper bounds outgrow int64, keep them as Python ints
        for column in ("upper", "witnessed_upper"):
            table[column] = pd.Series([row[column] for row in rows], dtype=object)
        logger.info(f"growth table for {kind} powers of {seed} up to d={d_max}")
        return table

    @staticmethod
    def table_csv(table: pd.DataFrame) -> str:
        """Comma-separated text; missing upper bounds are written as inf."""
        return table.to_csv(index=False, na_rep="inf", lineterminator="\n")

    @staticmethod
    def clear_cache() -> None:
        _cached_entries.cache_clear()
        _cached_profile.cache_clear()


# Create a singleton instance
bound_service = BoundService()

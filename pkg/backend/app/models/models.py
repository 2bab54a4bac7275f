from fractions import Fraction
from typing import FrozenSet, Iterator, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from ..utils.utils import format_dyadic, iter_bits, to_dyadic

ParameterName = Literal["boxicity", "cubicity"]
ViolationKind = Literal["missing-edge", "spurious-edge"]


class Graph(BaseModel):
    """
    Finite simple undirected graph on vertices 0..n-1.

    Edges are stored as ordered pairs (u, v) with u < v. Product vertices carry a
    coordinate tuple in ``labels``; the identity of a vertex is its index.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    edges: FrozenSet[Tuple[int, int]] = Field(default_factory=frozenset)
    labels: Optional[Tuple[Tuple[int, ...], ...]] = None

    _adj: List[int] = PrivateAttr(default_factory=list)

    @field_validator("edges", mode="before")
    @classmethod
    def normalize_pairs(cls, value):
        pairs = []
        for pair in value:
            u, v = pair
            pairs.append((u, v) if u <= v else (v, u))
        return frozenset(pairs)

    @model_validator(mode="after")
    def check_simple(self):
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u < 0 or v >= self.n:
                raise ValueError(f"edge ({u}, {v}) outside 0..{self.n - 1}")
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise ValueError(f"{len(self.labels)} labels for {self.n} vertices")
            if len(set(self.labels)) != self.n:
                raise ValueError("vertex labels are not distinct")
        return self

    def model_post_init(self, __context) -> None:
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self._adj = adj

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def adjacency(self, u: int) -> int:
        """Neighbourhood of u as a bitmask."""
        return self._adj[u]

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and bool(self._adj[u] >> v & 1)

    def neighbors(self, u: int) -> List[int]:
        return list(iter_bits(self._adj[u]))

    def degree(self, u: int) -> int:
        return bin(self._adj[u]).count("1")

    def sorted_edges(self) -> List[Tuple[int, int]]:
        return sorted(self.edges)

    def non_edges(self) -> Iterator[Tuple[int, int]]:
        """Yield the non-adjacent pairs (u, v), u < v, in lexicographic order."""
        for u in range(self.n):
            missing = ~self._adj[u] & self.all_mask & ~((1 << (u + 1)) - 1)
            for v in iter_bits(missing):
                yield u, v

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2


class ProperColoring(BaseModel):
    model_config = ConfigDict(frozen=True)

    colors: Tuple[int, ...]
    k: int = Field(ge=0)

    @model_validator(mode="after")
    def check_range(self):
        for color in self.colors:
            if not 0 <= color < self.k:
                raise ValueError(f"color {color} outside 0..{self.k - 1}")
        return self


class Interval(BaseModel):
    """Closed interval [lo, hi] with dyadic endpoints."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lo: Fraction
    hi: Fraction

    @field_validator("lo", "hi", mode="before")
    @classmethod
    def dyadic(cls, value):
        return to_dyadic(value)

    @model_validator(mode="after")
    def check_order(self):
        if self.lo > self.hi:
            raise ValueError(f"interval [{self.lo}, {self.hi}] has lo > hi")
        return self

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __str__(self) -> str:
        return f"[{format_dyadic(self.lo)}, {format_dyadic(self.hi)}]"


class BoxRepresentation(BaseModel):
    """k closed intervals per vertex; k = 0 realizes the complete graph."""

    model_config = ConfigDict(frozen=True)

    k: int = Field(ge=0)
    boxes: Tuple[Tuple[Interval, ...], ...]

    @model_validator(mode="after")
    def check_dimension(self):
        for vertex, box in enumerate(self.boxes):
            if len(box) != self.k:
                raise ValueError(f"vertex {vertex} has {len(box)} intervals, expected {self.k}")
        return self

    @property
    def n(self) -> int:
        return len(self.boxes)


class CubeRepresentation(BaseModel):
    """Unit cubes stored by origin: the cube at o is the product of [o_t, o_t + 1]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: int = Field(ge=0)
    origins: Tuple[Tuple[Fraction, ...], ...]

    @field_validator("origins", mode="before")
    @classmethod
    def dyadic(cls, value):
        return tuple(tuple(to_dyadic(x) for x in origin) for origin in value)

    @model_validator(mode="after")
    def check_dimension(self):
        for vertex, origin in enumerate(self.origins):
            if len(origin) != self.k:
                raise ValueError(f"vertex {vertex} has {len(origin)} coordinates, expected {self.k}")
        return self

    @property
    def n(self) -> int:
        return len(self.origins)


Representation = Union[BoxRepresentation, CubeRepresentation]


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    u: int
    v: int
    kind: ViolationKind


class VerificationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    ok: bool
    violations: Tuple[Violation, ...] = ()

    @model_validator(mode="after")
    def check_consistent(self):
        if self.ok != (not self.violations):
            raise ValueError("ok must hold exactly when there are no violations")
        return self


class Poset(BaseModel):
    """
    Strict partial order on 0..size-1.

    ``below`` may be given as any generating relation; it is replaced by its
    transitive closure at construction and cycles are rejected.
    """

    model_config = ConfigDict(frozen=True)

    size: int = Field(ge=0)
    below: FrozenSet[Tuple[int, int]] = Field(default_factory=frozenset)
    labels: Optional[Tuple[Tuple[int, ...], ...]] = None

    _down: List[int] = PrivateAttr(default_factory=list)
    _up: List[int] = PrivateAttr(default_factory=list)

    @field_validator("below", mode="after")
    @classmethod
    def close_transitively(cls, value, info):
        size = info.data.get("size", 0)
        down = [0] * size
        for x, y in value:
            if not (0 <= x < size and 0 <= y < size):
                raise ValueError(f"relation {x} < {y} outside 0..{size - 1}")
            if x == y:
                raise ValueError(f"relation {x} < {x} is reflexive")
            down[y] |= 1 << x
        # Warshall on bitmasks: down[y] collects everything below y
        for z in range(size):
            bit = 1 << z
            for y in range(size):
                if down[y] & bit:
                    down[y] |= down[z]
        closure = set()
        for y in range(size):
            if down[y] >> y & 1:
                raise ValueError(f"relation has a cycle through {y}")
            for x in iter_bits(down[y]):
                closure.add((x, y))
        return frozenset(closure)

    def model_post_init(self, __context) -> None:
        down = [0] * self.size
        up = [0] * self.size
        for x, y in self.below:
            down[y] |= 1 << x
            up[x] |= 1 << y
        self._down = down
        self._up = up

    def less(self, x: int, y: int) -> bool:
        return bool(self._down[y] >> x & 1)

    def comparable(self, x: int, y: int) -> bool:
        return x == y or self.less(x, y) or self.less(y, x)

    def down_set(self, x: int) -> int:
        """Strict down-set of x as a bitmask."""
        return self._down[x]

    def up_set(self, x: int) -> int:
        return self._up[x]

    def incomparable_pairs(self) -> List[Tuple[int, int]]:
        return [
            (x, y)
            for x in range(self.size)
            for y in range(x + 1, self.size)
            if not self.comparable(x, y)
        ]

    def minimal_elements(self) -> List[int]:
        return [x for x in range(self.size) if not self._down[x]]

    def height(self) -> int:
        """Number of elements in a longest chain."""
        longest = [0] * self.size
        for x in sorted(range(self.size), key=lambda e: bin(self._down[e]).count("1")):
            longest[x] = 1 + max((longest[y] for y in iter_bits(self._down[x])), default=0)
        return max(longest, default=0)


class LinearExtension(BaseModel):
    model_config = ConfigDict(frozen=True)

    order: Tuple[int, ...]

    _position: List[int] = PrivateAttr(default_factory=list)

    @field_validator("order", mode="after")
    @classmethod
    def check_permutation(cls, value):
        if sorted(value) != list(range(len(value))):
            raise ValueError("order is not a permutation of 0..n-1")
        return value

    def model_post_init(self, __context) -> None:
        position = [0] * len(self.order)
        for index, element in enumerate(self.order):
            position[element] = index
        self._position = position

    def position(self, x: int) -> int:
        """0-based position of x in the order."""
        return self._position[x]

    def before(self, x: int, y: int) -> bool:
        return self._position[x] < self._position[y]


class Realizer(BaseModel):
    model_config = ConfigDict(frozen=True)

    extensions: Tuple[LinearExtension, ...] = Field(min_length=1)

    @model_validator(mode="after")
    def check_lengths(self):
        if len({len(ext.order) for ext in self.extensions}) != 1:
            raise ValueError("extensions order different element counts")
        return self

    @property
    def size(self) -> int:
        return len(self.extensions)


class PdimResult(BaseModel):
    """Outcome of the exact dimension search; ``value`` is None when it exceeds kmax."""

    model_config = ConfigDict(frozen=True)

    value: Optional[int] = None
    realizer: Optional[Realizer] = None
    exhausted: bool = False
    exceeded: bool = False
    kmax: int


class SetFamily(BaseModel):
    """Ordered family of subsets of {1..n}; element u is bit u-1 of a mask."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0, le=64)
    sets: Tuple[int, ...] = Field(min_length=1)

    @model_validator(mode="after")
    def check_universe(self):
        for index, mask in enumerate(self.sets):
            if mask < 0 or mask >> self.n:
                raise ValueError(f"set {index} is not a subset of 1..{self.n}")
        return self

    @property
    def q(self) -> int:
        return len(self.sets)

    def members(self, index: int) -> List[int]:
        return [bit + 1 for bit in iter_bits(self.sets[index])]


class DoubleDistinguishingCheck(BaseModel):
    """Result of the quadruple check; ``witness`` is (i, i', j, j') for the first failure."""

    model_config = ConfigDict(frozen=True)

    ok: bool
    witness: Optional[Tuple[int, int, int, int]] = None


class WeakHomFamily(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: Graph
    target: Graph
    maps: Tuple[Tuple[int, ...], ...]

    @model_validator(mode="after")
    def check_tables(self):
        for index, table in enumerate(self.maps):
            if len(table) != self.source.n:
                raise ValueError(f"map {index} has {len(table)} images for {self.source.n} vertices")
            if any(not 0 <= image < self.target.n for image in table):
                raise ValueError(f"map {index} has an image outside the target")
        return self


class RealizerCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    ok: bool
    kind: Optional[Literal["not-weak-homomorphism", "unkilled-non-edge"]] = None
    map_index: Optional[int] = None
    u: Optional[int] = None
    v: Optional[int] = None

    def describe(self) -> str:
        if self.ok:
            return "ok"
        if self.kind == "not-weak-homomorphism":
            return f"map {self.map_index} sends edge ({self.u}, {self.v}) to a non-edge"
        return f"no map kills non-edge ({self.u}, {self.v})"


class OracleResult(BaseModel):
    """Exact boxicity or cubicity; ``value`` is None when the search passed kmax."""

    model_config = ConfigDict(frozen=True)

    parameter: ParameterName
    value: Optional[int] = None
    witness: Optional[Representation] = None
    optimal: bool = False
    exceeded: bool = False
    kmax: int

    @model_validator(mode="after")
    def check_witness(self):
        if self.exceeded:
            if self.value is not None or self.witness is not None:
                raise ValueError("an exceeded search has no value")
        elif self.witness is None or self.witness.k != self.value:
            raise ValueError("witness dimension must equal the value")
        return self


class LedgerEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    stage: str
    dim: int = Field(ge=0)


class NonEdgeAudit(BaseModel):
    """Per-pair classification of the non-edges of a Cartesian product."""

    model_config = ConfigDict(frozen=True)

    layer_total: int = 0
    cross_total: int = 0
    layer_killed_by_h: int = 0
    cross_killed_by_k: int = 0

    @property
    def ok(self) -> bool:
        return self.layer_killed_by_h == self.layer_total and self.cross_killed_by_k == self.cross_total


class Certificate(BaseModel):
    model_config = ConfigDict(frozen=True)

    target: Graph
    rep: Representation
    report: VerificationReport
    theorem: str
    ledger: Tuple[LedgerEntry, ...] = ()
    seed: Optional[int] = None
    audit: Optional[NonEdgeAudit] = None

    @model_validator(mode="after")
    def check_certified(self):
        if not self.report.ok:
            raise ValueError("certificate report is not ok")
        if self.rep.n != self.target.n:
            raise ValueError("representation does not cover the target")
        total = sum(entry.dim for entry in self.ledger)
        if total != self.rep.k:
            raise ValueError(f"ledger sums to {total}, representation has dimension {self.rep.k}")
        return self

    @property
    def dimension(self) -> int:
        return self.rep.k

    @property
    def mode(self) -> str:
        return "cube" if isinstance(self.rep, CubeRepresentation) else "box"


class BoundEntry(BaseModel):
    """
    One evaluated formula.

    ``value`` is the integer used for consistency (ceiled for lower bounds,
    floored for upper bounds); ``raw`` keeps the formula's exact value as text.
    ``value`` None on an upper bound means the formula has no usable constant.
    """

    model_config = ConfigDict(frozen=True)

    tag: str
    side: Literal["lower", "upper", "exact"]
    value: Optional[int] = None
    raw: str = ""
    witnessed: bool = False
    reported_only: bool = False


class BoundReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    parameter: ParameterName
    expression: str
    lower: int = 0
    upper: Optional[int] = None
    witnessed_upper: Optional[int] = None
    entries: Tuple[BoundEntry, ...] = ()

    @model_validator(mode="after")
    def check_interval(self):
        if self.upper is not None and self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")
        return self


class DimensionRange(BaseModel):
    """Known range of one parameter; ``witnessed`` is the best certified upper bound."""

    model_config = ConfigDict(frozen=True)

    lo: int = 0
    hi: Optional[int] = None
    witnessed: Optional[int] = None


class FactorProfile(BaseModel):
    """Invariants of a factor used as inputs to the product bound formulas."""

    model_config = ConfigDict(frozen=True)

    n: int
    has_edge: bool
    complete: bool
    universal: bool
    chi: int
    omega: int
    box: DimensionRange
    cube: DimensionRange

    def range(self, parameter: str) -> DimensionRange:
        return self.box if parameter == "boxicity" else self.cube

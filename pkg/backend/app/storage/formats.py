import logging
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from ..models.models import (
    BoundReport,
    BoxRepresentation,
    Certificate,
    CubeRepresentation,
    Graph,
    Interval,
    LedgerEntry,
    LinearExtension,
    Poset,
    Realizer,
    Representation,
    SetFamily,
)
from ..services.geometry_service import geometry_service
from ..utils.errors import ParseError
from ..utils.utils import format_dyadic, iter_bits, parse_dyadic

logger = logging.getLogger(__name__)


def _content_lines(text: str) -> List[Tuple[int, str]]:
    """Numbered non-blank lines with ``#`` comment lines removed."""
    lines = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            lines.append((number, stripped))
    return lines


def _raw_lines(text: str) -> List[Tuple[int, str]]:
    """Numbered lines without comments; blank lines are kept because they can carry meaning."""
    lines = []
    for number, line in enumerate(text.split("\n"), start=1):
        if not line.strip().startswith("#"):
            lines.append((number, line.strip()))
    if lines and lines[-1][1] == "" and text.endswith("\n"):
        lines.pop()
    return lines


def _ints(line: str, number: int, count: Optional[int] = None) -> List[int]:
    try:
        values = [int(token) for token in line.split()]
    except ValueError:
        raise ParseError(f"expected integers, got {line!r}", number)
    if count is not None and len(values) != count:
        raise ParseError(f"expected {count} integers, got {len(values)}", number)
    return values


def _build(model, number: Optional[int], **fields):
    try:
        return model(**fields)
    except ValidationError as e:
        message = "; ".join(error["msg"] for error in e.errors())
        raise ParseError(f"invalid {model.__name__}: {message}", number)


# Graphs

def read_graph(text: str) -> Graph:
    """
    Parse the graph format: ``n m`` then m lines ``u v`` with 0 <= u < v < n.

    Args:
        text (str): File contents

    Returns:
        Graph: Parsed graph
    """
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty graph file")
    number, header = lines[0]
    n, m = _ints(header, number, 2)
    if n < 0 or m < 0:
        raise ParseError(f"negative sizes in header {header!r}", number)
    if len(lines) - 1 != m:
        raise ParseError(f"header announces {m} edges, found {len(lines) - 1}", number)

    edges = set()
    for number, line in lines[1:]:
        u, v = _ints(line, number, 2)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", number)
        if not 0 <= u < v < n:
            raise ParseError(f"edge {u} {v} must satisfy 0 <= u < v < {n}", number)
        if (u, v) in edges:
            raise ParseError(f"duplicate edge {u} {v}", number)
        edges.add((u, v))
    return _build(Graph, None, n=n, edges=edges)


def write_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    if g.labels is not None:
        lines.extend(f"# vertex {v} = {' '.join(map(str, label))}" for v, label in enumerate(g.labels))
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


# Representations

def read_representation(text: str) -> Representation:
    """
    Parse ``BOX k n`` or ``CUBE k n`` followed by one line per vertex.

    A BOX line holds k lo/hi pairs, a CUBE line k origins. Values are plain
    integers or dyadic rationals written ``p/2^e``. With k = 0 the vertex
    lines are empty and may be left out.
    """
    lines = _raw_lines(text)
    while lines and not lines[0][1]:
        lines.pop(0)
    if not lines:
        raise ParseError("empty representation file")
    number, header = lines[0]
    tokens = header.split()
    if len(tokens) != 3 or tokens[0] not in ("BOX", "CUBE"):
        raise ParseError(f"expected 'BOX k n' or 'CUBE k n', got {header!r}", number)
    kind = tokens[0]
    k, n = _ints(" ".join(tokens[1:]), number, 2)
    if k < 0 or n < 0:
        raise ParseError(f"negative sizes in header {header!r}", number)

    body = lines[1:]
    if k == 0:
        for number, line in body:
            if line:
                raise ParseError("a 0-dimensional representation has empty vertex lines", number)
        body = [(number, "") for number in range(n)]
    else:
        body = [(number, line) for number, line in body if line]
    if len(body) != n:
        raise ParseError(f"header announces {n} vertices, found {len(body)} vertex lines", number)

    width = 2 * k if kind == "BOX" else k
    rows = []
    for number, line in body:
        tokens = line.split()
        if len(tokens) != width:
            raise ParseError(f"expected {width} values, got {len(tokens)}", number)
        rows.append((number, [parse_dyadic(token, number) for token in tokens]))

    if kind == "CUBE":
        return _build(CubeRepresentation, None, k=k, origins=[tuple(values) for _, values in rows])
    boxes = []
    for number, values in rows:
        box = []
        for t in range(k):
            lo, hi = values[2 * t], values[2 * t + 1]
            if lo > hi:
                raise ParseError(f"interval {t} has lo > hi", number)
            box.append(Interval(lo=lo, hi=hi))
        boxes.append(tuple(box))
    return _build(BoxRepresentation, None, k=k, boxes=boxes)


def write_representation(rep: Representation, normalize: bool = True) -> str:
    """Write a representation; by default it is normalized to small integer endpoints first."""
    if normalize:
        rep = geometry_service.normalize(rep)
    if isinstance(rep, CubeRepresentation):
        lines = [f"CUBE {rep.k} {rep.n}"]
        lines.extend(" ".join(format_dyadic(x) for x in origin) for origin in rep.origins)
    else:
        lines = [f"BOX {rep.k} {rep.n}"]
        lines.extend(
            " ".join(f"{format_dyadic(i.lo)} {format_dyadic(i.hi)}" for i in box) for box in rep.boxes
        )
    return "\n".join(lines) + "\n"


# Posets

def read_poset(text: str) -> Tuple[Poset, Optional[Realizer]]:
    """
    Parse ``n`` followed by relation lines ``x < y`` and optional realizer lines
    ``L: v0 v1 ...``. The relation is closed transitively.
    """
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty poset file")
    number, header = lines[0]
    (size,) = _ints(header, number, 1)
    if size < 0:
        raise ParseError(f"negative poset size {size}", number)

    below = set()
    extensions = []
    for number, line in lines[1:]:
        if line.startswith("L:"):
            order = _ints(line[2:], number)
            extensions.append(_build(LinearExtension, number, order=order))
            continue
        parts = line.split("<")
        if len(parts) != 2:
            raise ParseError(f"expected 'x < y' or 'L: ...', got {line!r}", number)
        x, y = _ints(parts[0], number, 1)[0], _ints(parts[1], number, 1)[0]
        below.add((x, y))

    poset = _build(Poset, None, size=size, below=below)
    realizer = None
    if extensions:
        for extension in extensions:
            if len(extension.order) != size:
                raise ParseError(f"linear extension has {len(extension.order)} elements, poset has {size}")
        realizer = _build(Realizer, None, extensions=extensions)
    return poset, realizer


def cover_relations(poset: Poset) -> List[Tuple[int, int]]:
    """Pairs x < y with nothing strictly between them."""
    covers = []
    for y in range(poset.size):
        below = poset.down_set(y)
        indirect = 0
        for z in iter_bits(below):
            indirect |= poset.down_set(z)
        covers.extend((x, y) for x in iter_bits(below & ~indirect))
    return sorted(covers)


def write_poset(poset: Poset, realizer: Optional[Realizer] = None) -> str:
    lines = [str(poset.size)]
    lines.extend(f"{x} < {y}" for x, y in cover_relations(poset))
    if realizer is not None:
        lines.extend("L: " + " ".join(map(str, ext.order)) for ext in realizer.extensions)
    return "\n".join(lines) + "\n"


# Set families

def read_family(text: str) -> SetFamily:
    """``n q`` then q lines of 1-based members; an empty line is the empty set."""
    lines = _raw_lines(text)
    while lines and not lines[0][1]:
        lines.pop(0)
    if not lines:
        raise ParseError("empty family file")
    number, header = lines[0]
    n, q = _ints(header, number, 2)
    body = lines[1:]
    if len(body) < q:
        raise ParseError(f"header announces {q} sets, found {len(body)} lines", number)
    for extra_number, extra in body[q:]:
        if extra:
            raise ParseError(f"more than {q} sets", extra_number)

    masks = []
    for number, line in body[:q]:
        members = _ints(line, number)
        if members != sorted(set(members)):
            raise ParseError("members must be sorted and distinct", number)
        mask = 0
        for u in members:
            if not 1 <= u <= n:
                raise ParseError(f"member {u} outside 1..{n}", number)
            mask |= 1 << (u - 1)
        masks.append(mask)
    return _build(SetFamily, None, n=n, sets=masks)


def write_family(family: SetFamily) -> str:
    lines = [f"{family.n} {family.q}"]
    lines.extend(" ".join(map(str, family.members(i))) for i in range(family.q))
    return "\n".join(lines) + "\n"


# Certificates and reports

def write_provenance(certificate: Certificate) -> str:
    """Theorem tag, seed, dimension and one ``stage dim`` line per ledger entry."""
    seed = "none" if certificate.seed is None else str(certificate.seed)
    lines = [
        f"theorem {certificate.theorem}",
        f"seed {seed}",
        f"mode {certificate.mode}",
        f"dimension {certificate.dimension}",
        f"verified {'yes' if certificate.report.ok else 'no'}",
    ]
    audit = certificate.audit
    if audit is not None:
        lines.append(f"audit layer {audit.layer_killed_by_h}/{audit.layer_total} "
                     f"cross {audit.cross_killed_by_k}/{audit.cross_total}")
    lines.append("ledger")
    lines.extend(f"{entry.stage} {entry.dim}" for entry in certificate.ledger)
    return "\n".join(lines) + "\n"


def read_provenance(text: str) -> Dict[str, object]:
    """Parse a provenance block back into its fields; ledger entries keep their order."""
    fields: Dict[str, object] = {"ledger": []}
    in_ledger = False
    for number, line in _content_lines(text):
        if in_ledger:
            stage, _, dim = line.rpartition(" ")
            if not stage or not dim.isdigit():
                raise ParseError(f"expected 'stage dim', got {line!r}", number)
            fields["ledger"].append(LedgerEntry(stage=stage, dim=int(dim)))
        elif line == "ledger":
            in_ledger = True
        else:
            key, _, value = line.partition(" ")
            fields[key] = value
    if "theorem" not in fields:
        raise ParseError("provenance has no theorem line")
    return fields


def format_bound_report(report: BoundReport) -> str:
    def show(value: Optional[int]) -> str:
        return "inf" if value is None else str(value)

    lines = [
        f"expression {report.expression}",
        f"parameter {report.parameter}",
        f"lower {report.lower}",
        f"upper {show(report.upper)}",
        f"witnessed_upper {show(report.witnessed_upper)}",
    ]
    for entry in report.entries:
        status = "witnessed" if entry.witnessed else "reported" if entry.reported_only else "derived"
        lines.append(f"entry {entry.tag} {entry.side} {show(entry.value)} {status} {entry.raw}")
    return "\n".join(lines) + "\n"

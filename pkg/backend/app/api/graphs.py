import logging

from ..services.geometry_service import geometry_service
from ..services.graph_service import graph_service
from ..storage.files import read_text
from ..storage.formats import read_graph, read_representation, write_graph
from ..utils.errors import VerificationError
from . import schemas
from .router import CommandRouter, emit

logger = logging.getLogger(__name__)

# Create router
router = CommandRouter(tags=["graphs"])


def max_vertices(options: schemas.GlobalOptions) -> dict:
    return {} if options.max_n is None else {"max_vertices": options.max_n}


@router.command("gen", schemas.GenRequest, help="Generate a named graph or a product expression")
def gen(request: schemas.GenRequest, options: schemas.GlobalOptions) -> int:
    if request.expr is not None:
        g = graph_service.from_expression(request.expr, **max_vertices(options))
    else:
        g = graph_service.generate(request.kind, q=request.q, n=request.n, d=request.d, **max_vertices(options))
    logger.info(f"generated {g.n} vertices and {g.m} edges")
    emit(write_graph(g), request.output)
    return 0


@router.command("verify", schemas.VerifyRequest, help="Check a representation against a graph")
def verify(request: schemas.VerifyRequest, options: schemas.GlobalOptions) -> int:
    g = read_graph(read_text(request.graph))
    rep = read_representation(read_text(request.rep))
    report = geometry_service.verify(g, rep)
    if not report.ok:
        first = report.violations[0]
        raise VerificationError(
            f"{len(report.violations)} violation(s), first {first.kind} {first.u} {first.v}",
            witness=(first.u, first.v),
        )
    emit(f"ok dimension {rep.k}\n")
    return 0

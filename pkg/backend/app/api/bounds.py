import logging

from ..services.bound_service import bound_service
from ..storage.formats import format_bound_report
from . import schemas
from .graphs import max_vertices
from .router import CommandRouter, emit

logger = logging.getLogger(__name__)

# Create router
router = CommandRouter(tags=["bounds"])


@router.command("bound", schemas.BoundRequest, help="Evaluate every applicable bound for a product expression")
def bound(request: schemas.BoundRequest, options: schemas.GlobalOptions) -> int:
    report = bound_service.bound(request.expr, request.param, **max_vertices(options))
    emit(format_bound_report(report))
    return 0


@router.command("table", schemas.TableRequest, help="Growth table of the bounds for the powers of a graph")
def table(request: schemas.TableRequest, options: schemas.GlobalOptions) -> int:
    rows = bound_service.growth_table(request.seed, request.kind, request.param, request.dmax,
                                      **max_vertices(options))
    emit(bound_service.table_csv(rows), request.output)
    return 0

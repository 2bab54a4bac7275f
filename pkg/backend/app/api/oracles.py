import logging

from ..config import DEFAULT_KMAX
from ..services.graph_service import graph_service
from ..services.oracle_service import oracle_service
from ..storage.files import read_text
from ..storage.formats import read_graph, read_poset, write_poset, write_representation
from . import schemas
from .graphs import max_vertices
from .router import CommandRouter, emit

logger = logging.getLogger(__name__)

# Create router
router = CommandRouter(tags=["oracles"])


@router.command("exact", schemas.ExactRequest, help="Exact boxicity, cubicity, chromatic number or poset dimension")
def exact(request: schemas.ExactRequest, options: schemas.GlobalOptions) -> int:
    """
    Print the exact value, or >kmax when the search passed the ceiling.
    With --output the witness is written in its file format.
    """
    kmax = request.kmax if request.kmax is not None else options.max_k
    if kmax is None:
        kmax = DEFAULT_KMAX
    limit = {} if options.max_n is None else {"limit": options.max_n}

    if request.param == "pdim":
        poset, _ = read_poset(read_text(request.poset))
        result = oracle_service.pdim(poset, kmax=kmax, **limit)
        if result.exceeded:
            emit(f">{kmax}\n")
            return 0
        if request.output is not None:
            emit(write_poset(poset, result.realizer), request.output)
        emit(f"{result.value}\n")
        return 0

    if request.graph is not None:
        g = read_graph(read_text(request.graph))
    else:
        g = graph_service.from_expression(request.expr, **max_vertices(options))

    if request.param == "chromatic":
        emit(f"{oracle_service.chromatic_number(g, **limit)}\n")
        return 0

    if request.param == "cubicity":
        result = oracle_service.exact_cubicity(g, kmax=kmax, **limit)
    else:
        result = oracle_service.exact_boxicity(g, kmax=kmax, **limit)
    if result.exceeded:
        emit(f">{kmax}\n")
        return 0
    if request.output is not None:
        emit(write_representation(result.witness), request.output)
    emit(f"{result.value}\n")
    return 0

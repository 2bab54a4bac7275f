import logging

from ..models.models import Certificate
from ..services.construction_service import construction_service
from ..services.graph_service import graph_service
from ..storage.files import read_text, write_certificate
from ..storage.formats import read_representation, write_provenance
from . import schemas
from .graphs import max_vertices
from .router import CommandRouter, emit

logger = logging.getLogger(__name__)

# Create router
router = CommandRouter(tags=["constructions"])


def _run_construction(request: schemas.ConstructRequest, options: schemas.GlobalOptions) -> Certificate:
    limits = max_vertices(options)
    thm = request.thm
    if thm == "4":
        return construction_service.thm4_hypercube(request.d)
    if thm == "6":
        return construction_service.thm6_hamming(request.q, request.d, request.mode, seed=request.seed,
                                                 retries=request.retries,
                                                 hypercube_source=request.hypercube_source)
    if thm == "8":
        return construction_service.thm8_direct_complete(request.qs, request.mode, **limits)
    if thm == "obs7":
        return construction_service.obs7_star_cube(request.n)

    graphs = [graph_service.from_expression(factor, **limits) for factor in request.factors]
    reps = None
    if request.factor_reps is not None:
        reps = [read_representation(read_text(path)) for path in request.factor_reps]
    if thm == "1":
        return construction_service.thm1_strong(graphs, reps, request.mode, **limits)
    if thm == "2":
        return construction_service.thm2_cartesian_via_strong(graphs, request.mode, seed=request.seed,
                                                              factor_reps=reps, retries=request.retries,
                                                              hypercube_source=request.hypercube_source,
                                                              **limits)
    if thm == "3":
        return construction_service.thm3_cartesian_via_cubes(graphs, request.mode, seed=request.seed,
                                                             factor_reps=reps, retries=request.retries,
                                                             hypercube_source=request.hypercube_source,
                                                             **limits)
    if thm == "7":
        return construction_service.thm7_direct_via_strong(graphs, request.mode, factor_reps=reps, **limits)
    return construction_service.cor9_direct_general(graphs, factor_reps=reps, **limits)


@router.command("construct", schemas.ConstructRequest, help="Build and verify a certified representation")
def construct(request: schemas.ConstructRequest, options: schemas.GlobalOptions) -> int:
    """
    Run one construction pipeline and write its certificate directory.
    The provenance block is echoed to stdout.
    """
    certificate = _run_construction(request, options)
    if certificate.seed is None:
        certificate = certificate.model_copy(update={"seed": request.seed})
    write_certificate(request.output, certificate)
    emit(write_provenance(certificate))
    return 0

import logging

from ..services.family_service import family_service
from ..storage.files import read_text
from ..storage.formats import read_family, write_family
from ..utils.errors import VerificationError
from . import schemas
from .router import CommandRouter, emit

logger = logging.getLogger(__name__)

# Create router
router = CommandRouter(tags=["families"])


@router.command("family", schemas.FamilyRequest, help="Build or check a double distinguishing set family")
def family(request: schemas.FamilyRequest, options: schemas.GlobalOptions) -> int:
    if request.check is not None:
        candidate = read_family(read_text(request.check))
        result = family_service.verify_double_distinguishing(candidate)
        if not result.ok:
            raise VerificationError(f"not double distinguishing, sets {result.witness}", witness=result.witness)
        emit(f"ok {candidate.q} sets over {candidate.n} elements\n")
        return 0

    n = request.n if request.n is not None else family_service.universe_for(request.q)
    built = family_service.random_double_distinguishing(n, request.q, seed=request.seed, retries=request.retries)
    emit(f"# seed {request.seed} retries {request.retries}\n" + write_family(built), request.output)
    return 0

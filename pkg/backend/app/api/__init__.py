import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from ..utils.errors import BoxcertError, InvalidInputError, UsageError
from . import schemas
from .bounds import router as bounds_router
from .constructions import router as constructions_router
from .families import router as families_router
from .graphs import router as graphs_router
from .oracles import router as oracles_router
from .router import CommandParser, build_request

logger = logging.getLogger(__name__)

routers = [graphs_router, constructions_router, oracles_router, bounds_router, families_router]


def build_parser() -> CommandParser:
    parser = CommandParser(prog="boxcert", description="Certified box and cube representations of graph products")
    for name, field in schemas.GlobalOptions.model_fields.items():
        parser.add_argument(f"--{name.replace('_', '-')}", dest=name, default=None,
                            type=int if name != "log_level" else str, help=field.description)
    subparsers = parser.add_subparsers(dest="verb", metavar="verb")
    for router in routers:
        router.register(subparsers)
    return parser


def run(argv: Optional[List[str]] = None, stderr=None) -> int:
    """
    Parse a command line, run its handler and return the exit code.

    Toolkit errors are reported as one ``error: <reason>: <detail>`` line on
    stderr and mapped to their exit code.
    """
    stderr = stderr or sys.stderr
    try:
        namespace = build_parser().parse_args(argv)
        if namespace.verb is None:
            raise UsageError("a verb is required: gen, construct, verify, exact, bound, table or family")
        options = build_request(schemas.GlobalOptions, namespace)
        logging.getLogger().setLevel(options.log_level)
        request = build_request(namespace.request_model, namespace)
        return namespace.handler(request, options)
    except BoxcertError as e:
        logger.debug(f"command failed with exit code {e.exit_code}")
        print(e.one_line(), file=stderr)
        return e.exit_code
    except ValidationError as e:
        error = InvalidInputError(str(e))
        print(error.one_line(), file=stderr)
        return error.exit_code

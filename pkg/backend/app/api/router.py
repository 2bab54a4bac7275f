import argparse
import logging
import sys
import typing
from typing import Callable, List, Literal, Optional, Type

from pydantic import BaseModel, ValidationError

from ..storage.files import write_text_atomic
from ..utils.errors import UsageError
from .schemas import GlobalOptions

logger = logging.getLogger(__name__)

Handler = Callable[[BaseModel, GlobalOptions], int]


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str):
        raise UsageError(message)


def _unwrap_optional(annotation):
    if typing.get_origin(annotation) is typing.Union:
        args = [a for a in typing.get_args(annotation) if a is not type(None)]
        if len(args) == 1:
            return args[0]
    return annotation


def _add_field(parser: argparse.ArgumentParser, name: str, field) -> None:
    extra = field.json_schema_extra or {}
    names = extra.get("flags") or [f"--{name.replace('_', '-')}"]
    annotation = _unwrap_optional(field.annotation)
    options = {"dest": name, "help": field.description, "default": None}

    origin = typing.get_origin(annotation)
    if origin in (list, List):
        (item,) = typing.get_args(annotation)
        options.update(nargs="+", type=item)
    elif origin is Literal:
        choices = list(typing.get_args(annotation))
        options.update(choices=choices, type=type(choices[0]))
    elif annotation is bool:
        options.update(action="store_true")
    else:
        options.update(type=annotation)
    parser.add_argument(*names, **options)


class CommandRouter:
    """
    Collects commands of one area. Each command has a pydantic request model;
    its fields become the command's flags and the parsed values are validated
    by the model before the handler runs.
    """

    def __init__(self, tags: Optional[List[str]] = None):
        self.tags = tags or []
        self.commands = []

    def command(self, name: str, request_model: Type[BaseModel], help: str = ""):
        def decorator(handler: Handler) -> Handler:
            self.commands.append((name, request_model, help or (handler.__doc__ or "").strip(), handler))
            return handler

        return decorator

    def register(self, subparsers) -> None:
        for name, request_model, help_text, handler in self.commands:
            parser = subparsers.add_parser(name, help=help_text, description=help_text)
            for field_name, field in request_model.model_fields.items():
                _add_field(parser, field_name, field)
            parser.set_defaults(request_model=request_model, handler=handler)


def build_request(request_model: Type[BaseModel], namespace: argparse.Namespace) -> BaseModel:
    """Validate parsed flags; flags left out fall back to the model defaults."""
    values = {
        name: getattr(namespace, name)
        for name in request_model.model_fields
        if getattr(namespace, name, None) is not None
    }
    try:
        return request_model(**values)
    except ValidationError as e:
        message = "; ".join(error["msg"].removeprefix("Value error, ") for error in e.errors())
        raise UsageError(message)


def emit(text: str, output: Optional[str] = None) -> None:
    """Write command output to a file (atomically) or to stdout."""
    if output is None or output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        write_text_atomic(output, text)
        logger.info(f"wrote {output}")

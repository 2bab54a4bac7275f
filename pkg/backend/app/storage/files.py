import logging
import os
import tempfile
from typing import Dict

from ..models.models import Certificate
from ..utils.errors import InvalidInputError
from .formats import write_graph, write_provenance, write_representation

logger = logging.getLogger(__name__)

CERTIFICATE_FILES = ("graph.txt", "rep.txt", "provenance.txt")


def read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except FileNotFoundError:
        raise InvalidInputError(f"file not found: {path}")
    except OSError as e:
        raise InvalidInputError(f"cannot read {path}: {e}")


def write_text_atomic(path: str, text: str) -> None:
    """
    Write a file through a temporary sibling and an atomic rename, so readers
    see either the old contents or the complete new ones.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    handle, temporary = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
        os.replace(temporary, path)
    except BaseException:
        if os.path.exists(temporary):
            os.remove(temporary)
        raise
    logger.debug(f"wrote {len(text)} bytes to {path}")


def certificate_texts(certificate: Certificate) -> Dict[str, str]:
    return {
        "graph.txt": write_graph(certificate.target),
        "rep.txt": write_representation(certificate.rep),
        "provenance.txt": write_provenance(certificate),
    }


def write_certificate(directory: str, certificate: Certificate) -> Dict[str, str]:
    """
    Write graph.txt, rep.txt and provenance.txt into a directory.

    Returns:
        Dict[str, str]: File name to path of every file written
    """
    written = {}
    for name, text in certificate_texts(certificate).items():
        path = os.path.join(directory, name)
        write_text_atomic(path, text)
        written[name] = path
    logger.info(f"{certificate.theorem} certificate of dimension {certificate.dimension} written to {directory}")
    return written

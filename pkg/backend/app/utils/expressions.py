import re
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict

from .errors import ParseError

GENERATOR_RE = re.compile(r"^(CR|K|P|C|S|Q|H)(\d+)(?:_(\d+))?$")
TOKEN_RE = re.compile(r"\s*(?:([A-Za-z]+\d*(?:_\d+)?)|(\d+)|([(),]))")
PRODUCT_NAMES = ("strong", "cartesian", "direct")

# Generator token prefix -> generator kind and the parameters it carries
GENERATORS = {
    "K": ("complete", ("q",)),
    "P": ("path", ("n",)),
    "C": ("cycle", ("n",)),
    "S": ("star", ("n",)),
    "Q": ("hypercube", ("d",)),
    "CR": ("crown", ("q",)),
    "H": ("hamming", ("q", "d")),
}


class GeneratorNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: str
    q: Optional[int] = None
    n: Optional[int] = None
    d: Optional[int] = None
    token: str

    def __str__(self) -> str:
        return self.token


class ProductNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["strong", "cartesian", "direct"]
    factors: Tuple[Union["ProductNode", GeneratorNode], ...]

    def __str__(self) -> str:
        return f"{self.kind}({','.join(str(f) for f in self.factors)})"


ProductNode.model_rebuild()
Expression = Union[ProductNode, GeneratorNode]


def parse_generator(token: str) -> GeneratorNode:
    """
    Parse a generator token such as K3, P4, C5, S8, Q3, CR4 or H3_2.

    Args:
        token (str): Generator token

    Returns:
        GeneratorNode: Generator kind with its size parameters
    """
    match = GENERATOR_RE.match(token)
    if not match:
        raise ParseError(f"unknown generator {token!r}")
    prefix, first, second = match.group(1), int(match.group(2)), match.group(3)
    kind, names = GENERATORS[prefix]
    if len(names) == 2 and second is None:
        raise ParseError(f"{token!r} needs two parameters, as in H3_2")
    if len(names) == 1 and second is not None:
        raise ParseError(f"{token!r} takes a single parameter")
    values = [first] if second is None else [first, int(second)]
    return GeneratorNode(kind=kind, token=token, **dict(zip(names, values)))


def _tokenize(text: str) -> List[str]:
    tokens = []
    position = 0
    text = text.strip()
    while position < len(text):
        match = TOKEN_RE.match(text, position)
        if not match or match.end() == position:
            raise ParseError(f"unexpected character at position {position} in {text!r}")
        tokens.append(next(group for group in match.groups() if group is not None))
        position = match.end()
    return tokens


def parse_expression(text: str) -> Expression:
    """
    Parse a product expression.

    Grammar: ``strong(E, ...)``, ``cartesian(E, ...)``, ``direct(E, ...)``,
    ``power(kind, E, d)`` or a generator token. A power is expanded to the
    product of d copies.
    """
    tokens = _tokenize(text)
    position = 0

    def peek() -> str:
        return tokens[position] if position < len(tokens) else ""

    def take(expected: str = None) -> str:
        nonlocal position
        if position >= len(tokens):
            raise ParseError(f"unexpected end of expression {text!r}")
        token = tokens[position]
        if expected is not None and token != expected:
            raise ParseError(f"expected {expected!r}, found {token!r} in {text!r}")
        position += 1
        return token

    def expression() -> Expression:
        name = take()
        if name in PRODUCT_NAMES:
            take("(")
            factors = [expression()]
            while peek() == ",":
                take(",")
                factors.append(expression())
            take(")")
            return ProductNode(kind=name, factors=factors)
        if name == "power":
            take("(")
            kind = take()
            if kind not in PRODUCT_NAMES:
                raise ParseError(f"unknown product kind {kind!r}")
            take(",")
            base = expression()
            take(",")
            exponent = take()
            if not exponent.isdigit() or int(exponent) < 1:
                raise ParseError(f"power exponent must be a positive integer, got {exponent!r}")
            take(")")
            return ProductNode(kind=kind, factors=[base] * int(exponent))
        return parse_generator(name)

    result = expression()
    if position != len(tokens):
        raise ParseError(f"trailing input {' '.join(tokens[position:])!r} in {text!r}")
    return result

import logging
import math
import re
from fractions import Fraction
from typing import Iterator, Union

from .errors import InvalidInputError, ParseError

logger = logging.getLogger(__name__)

DyadicLike = Union[int, Fraction, str]

_DYADIC_RE = re.compile(r"^(-?\d+)(?:/(?:2\^(\d+)|(\d+)))?$")


def is_dyadic(value: Fraction) -> bool:
    """
    Check whether a rational has a power-of-two denominator.

    Args:
        value (Fraction): Rational number

    Returns:
        bool: True when the denominator is 2^e for some e >= 0
    """
    den = value.denominator
    return den & (den - 1) == 0


def to_dyadic(value: DyadicLike) -> Fraction:
    """
    Convert an int, Fraction or text token to an exact dyadic rational.

    Floats are rejected: endpoints are never compared through floating point.

    Args:
        value: int, Fraction, or a string accepted by parse_dyadic

    Returns:
        Fraction: Dyadic rational
    """
    if isinstance(value, bool):
        raise InvalidInputError(f"not a dyadic rational: {value!r}")
    if isinstance(value, str):
        return parse_dyadic(value)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        if not is_dyadic(value):
            raise InvalidInputError(f"denominator of {value} is not a power of two")
        return value
    raise InvalidInputError(f"not a dyadic rational: {value!r}")


def parse_dyadic(token: str, line: int = None) -> Fraction:
    """
    Parse ``p``, ``p/2^e`` or ``p/q`` (q a power of two).

    Args:
        token (str): Text token
        line (int, optional): Line number used in the error message

    Returns:
        Fraction: Parsed value
    """
    match = _DYADIC_RE.match(token.strip())
    if not match:
        raise ParseError(f"malformed dyadic value {token!r}", line)
    numerator = int(match.group(1))
    if match.group(2) is not None:
        return Fraction(numerator, 1 << int(match.group(2)))
    if match.group(3) is not None:
        den = int(match.group(3))
        if den <= 0 or den & (den - 1):
            raise ParseError(f"denominator of {token!r} is not a power of two", line)
        return Fraction(numerator, den)
    return Fraction(numerator)


def format_dyadic(value: Fraction) -> str:
    """
    Format a dyadic rational as ``p`` or ``p/2^e`` (lowest terms).

    Args:
        value (Fraction): Dyadic rational

    Returns:
        str: Canonical text form
    """
    if value.denominator == 1:
        return str(value.numerator)
    exponent = value.denominator.bit_length() - 1
    return f"{value.numerator}/2^{exponent}"


def ceil_log2(n: int) -> int:
    """Exact ceil(log2 n) for n >= 1."""
    if n < 1:
        raise InvalidInputError(f"log2 undefined for {n}")
    return (n - 1).bit_length()


def ceil_ten_log2(q: int) -> int:
    """
    Exact ceil(10 * log2 q), the universe size used for Hamming realizers.

    2^n >= q^10 is decided on integers, so no rounding can creep in.
    """
    if q < 1:
        raise InvalidInputError(f"alphabet size must be positive, got {q}")
    return (q ** 10 - 1).bit_length()


def family_size_bound(n: int) -> int:
    """
    floor(c^n) with c = (4/3)^(1/4): the largest q with q^4 * 3^n <= 4^n.

    Args:
        n (int): Universe size

    Returns:
        int: Guaranteed size of a double distinguishing family over n elements
    """
    if n < 0:
        raise InvalidInputError(f"universe size must be non-negative, got {n}")
    bound_lhs, bound_rhs = 3 ** n, 4 ** n
    q = max(1, int((4 / 3) ** (n / 4)))
    while q > 1 and q ** 4 * bound_lhs > bound_rhs:
        q -= 1
    while (q + 1) ** 4 * bound_lhs <= bound_rhs:
        q += 1
    return q


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of a mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def log2(x: float) -> float:
    """Base-2 logarithm; every logarithm in the bound formulas is base 2."""
    return math.log2(x)

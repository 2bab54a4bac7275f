from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from app.utils.errors import InvalidInputError, ParseError, SizeLimitError, VerificationError
from app.utils.expressions import GeneratorNode, ProductNode, parse_expression, parse_generator
from app.utils.utils import (
    ceil_log2,
    ceil_ten_log2,
    family_size_bound,
    format_dyadic,
    is_dyadic,
    iter_bits,
    parse_dyadic,
    popcount,
    to_dyadic,
)


class TestDyadic:
    def test_parse_forms(self):
        assert parse_dyadic("7") == Fraction(7)
        assert parse_dyadic("-3") == Fraction(-3)
        assert parse_dyadic("3/2^2") == Fraction(3, 4)
        assert parse_dyadic("5/8") == Fraction(5, 8)

    def test_parse_rejects_other_denominators(self):
        with pytest.raises(ParseError):
            parse_dyadic("1/3")
        with pytest.raises(ParseError):
            parse_dyadic("0.5")

    def test_parse_error_names_line(self):
        with pytest.raises(ParseError) as info:
            parse_dyadic("x", line=4)
        assert info.value.line == 4
        assert "line 4" in info.value.one_line()

    def test_format_lowest_terms(self):
        assert format_dyadic(Fraction(6, 8)) == "3/2^2"
        assert format_dyadic(Fraction(4, 2)) == "2"
        assert format_dyadic(Fraction(-1, 2)) == "-1/2^1"

    def test_to_dyadic_rejects_floats_and_thirds(self):
        with pytest.raises(InvalidInputError):
            to_dyadic(0.5)
        with pytest.raises(InvalidInputError):
            to_dyadic(Fraction(1, 3))
        with pytest.raises(InvalidInputError):
            to_dyadic(True)

    @given(st.integers(-10**6, 10**6), st.integers(0, 40))
    def test_formatted_value_parses_back(self, numerator, exponent):
        value = Fraction(numerator, 1 << exponent)
        assert is_dyadic(value)
        assert parse_dyadic(format_dyadic(value)) == value


class TestIntegerLogs:
    @pytest.mark.parametrize("n, expected", [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)])
    def test_ceil_log2(self, n, expected):
        assert ceil_log2(n) == expected

    @given(st.integers(1, 10**12))
    def test_ceil_log2_brackets(self, n):
        r = ceil_log2(n)
        assert n <= 2 ** r
        assert r == 0 or 2 ** (r - 1) < n

    def test_ceil_log2_rejects_zero(self):
        with pytest.raises(InvalidInputError):
            ceil_log2(0)

    @pytest.mark.parametrize("q, expected", [(1, 0), (2, 10), (3, 16), (4, 20), (5, 24)])
    def test_ceil_ten_log2(self, q, expected):
        assert ceil_ten_log2(q) == expected

    @given(st.integers(2, 500))
    def test_ceil_ten_log2_brackets(self, q):
        n = ceil_ten_log2(q)
        assert 2 ** n >= q ** 10 > 2 ** (n - 1)

    @pytest.mark.parametrize("n, q", [(0, 1), (8, 1), (12, 2), (16, 3), (20, 4)])
    def test_family_size_bound(self, n, q):
        assert family_size_bound(n) == q

    @given(st.integers(0, 200))
    def test_family_size_bound_is_largest(self, n):
        q = family_size_bound(n)
        assert q ** 4 * 3 ** n <= 4 ** n
        assert (q + 1) ** 4 * 3 ** n > 4 ** n

    def test_bits(self):
        assert list(iter_bits(0b101001)) == [0, 3, 5]
        assert popcount(0b101001) == 3
        assert list(iter_bits(0)) == []


class TestExpressions:
    def test_generators(self):
        assert parse_generator("K3") == GeneratorNode(kind="complete", q=3, token="K3")
        assert parse_generator("CR4").kind == "crown"
        node = parse_generator("H3_2")
        assert (node.kind, node.q, node.d) == ("hamming", 3, 2)
        assert parse_generator("S8").n == 8
        assert parse_generator("Q3").d == 3

    def test_products_and_nesting(self):
        node = parse_expression("direct(strong(C4, P3), K2)")
        assert isinstance(node, ProductNode)
        assert node.kind == "direct"
        assert str(node) == "direct(strong(C4,P3),K2)"
        assert node.factors[0].kind == "strong"

    def test_power_expands(self):
        node = parse_expression("power(cartesian, K2, 3)")
        assert node.kind == "cartesian"
        assert [str(f) for f in node.factors] == ["K2", "K2", "K2"]

    def test_bare_generator(self):
        assert str(parse_expression(" C5 ")) == "C5"

    @pytest.mark.parametrize("text", [
        "K", "H3", "P3_2", "X5", "strong(K2", "strong(K2;K3)", "cartesian(K2,K3) K4",
        "power(strong,K2,0)", "power(union,K2,2)", "strong()", "",
    ])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_expression(text)


class TestErrors:
    def test_exit_codes(self):
        assert VerificationError("x").exit_code == 1
        assert ParseError("x").exit_code == 2
        assert SizeLimitError("graph", 10, 5).exit_code == 3

    def test_one_line(self):
        error = SizeLimitError("strong product", 20, 12)
        assert error.one_line() == "error: size-limit: strong product has size 20, limit is 12"
        assert VerificationError("two\nlines").one_line() == "error: verification-failed: two lines"

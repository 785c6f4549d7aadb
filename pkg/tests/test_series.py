import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from runcube.errors import ArithmeticOverflowError, InvalidDenominatorError
from runcube.series import (
    INT64_MAX,
    ONE,
    BiPoly,
    IntPoly,
    SeriesTable,
    expand_rational,
    fib,
    gf_cube_census,
    gf_down_degree,
    gf_up_degree,
    poly_arith,
    series_mul,
    univariate_series,
)

EDGES = [1, 2, 5, 10, 19, 36, 66, 120, 215, 382, 673, 1178]


def bp(*pairs):
    """BiPoly from ((a, b), c) pairs."""
    return BiPoly(dict(pairs))


def d_poly(*coeffs):
    return BiPoly.from_intpoly(IntPoly(coeffs))


# -- fib ------------------------------------------------------------------


def test_fib_small_values():
    assert [fib(n) for n in range(10)] == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34]
    assert fib(32) == 2178309


def test_fib_negative_index():
    assert fib(-1) == 1
    assert fib(-2) == -1
    assert fib(-5) == 5


def test_fib_int64_boundary():
    assert fib(92) == 7540113804746346429
    with pytest.raises(ArithmeticOverflowError):
        fib(93)


# -- IntPoly ----------------------------------------------------------------


def test_intpoly_canonical_strips_trailing_zeros():
    assert IntPoly([1, 2, 0, 0]) == IntPoly([1, 2])
    assert IntPoly([0, 0]).degree == -1


def test_intpoly_arith_and_eval():
    a, b = IntPoly([1, 1]), IntPoly([-1, 1])
    assert a * b == IntPoly([-1, 0, 1])
    assert poly_arith(a, b, "add") == IntPoly([0, 2])
    assert poly_arith(a, b, "sub") == IntPoly([2])
    assert poly_arith(a, b, "mul") == a * b
    with pytest.raises(ValueError):
        poly_arith(a, b, "div")
    assert (a * a)(3) == 16
    assert IntPoly([5, 2, 3]).derivative() == IntPoly([2, 6])


def test_intpoly_overflow_is_reported():
    big = IntPoly([INT64_MAX])
    with pytest.raises(ArithmeticOverflowError):
        big + IntPoly([1])


# -- BiPoly ----------------------------------------------------------------


def test_bipoly_drops_zero_terms_and_sorts():
    p = bp(((1, 0), 2), ((0, 0), 0), ((0, 1), 3))
    assert list(p.terms) == [(0, 1), (1, 0)]


def test_bipoly_exponent_cap():
    with pytest.raises(Exception):
        bp(((65, 0), 1))


def test_bipoly_specialisations():
    # 3d^2 + 2du + 2du^2 + u^4 with exponents (d, u)
    p = bp(((2, 0), 3), ((1, 1), 2), ((1, 2), 2), ((0, 4), 1))
    assert p.specialize_second(1) == IntPoly([1, 4, 3])
    assert p.specialize_first(1) == IntPoly([3, 2, 2, 0, 1])
    assert p.evaluate(1, 1) == 8


def test_bipoly_derivative_first():
    p = bp(((2, 1), 3), ((0, 5), 7))
    assert p.derivative_first() == bp(((1, 1), 6))


def test_bipoly_format():
    assert bp(((0, 0), 1), ((1, 0), 1), ((0, 1), 1)).format(("q", "x")) == "1 + x + q"


small_bipoly = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4)), st.integers(-50, 50), max_size=6
).map(BiPoly)


@settings(max_examples=60, deadline=None)
@given(small_bipoly, small_bipoly, small_bipoly)
def test_bipoly_ring_laws(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == BiPoly()


@settings(max_examples=60, deadline=None)
@given(small_bipoly, st.integers(-3, 3), st.integers(-3, 3))
def test_bipoly_evaluate_is_homomorphism(a, x, y):
    assert (a * a).evaluate(x, y) == a.evaluate(x, y) ** 2


# -- expansion --------------------------------------------------------------


def test_expand_geometric_series():
    table = expand_rational([1], [1, -1], 5)
    assert [r.evaluate(1) for r in table.rows] == [1] * 6


def test_fibonacci_from_rational():
    # t / (1 - t - t^2)
    table = expand_rational([0, 1], [1, -1, -1], 32)
    assert table[32] == BiPoly.const(2178309)


def test_invalid_denominator():
    with pytest.raises(InvalidDenominatorError):
        expand_rational([1], [2, 1], 3)
    with pytest.raises(InvalidDenominatorError):
        expand_rational([1], [0, 1], 3)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(small_bipoly, min_size=1, max_size=4),
    st.lists(small_bipoly, min_size=0, max_size=3),
    st.integers(1, 8),
)
def test_expand_multiply_back(num, den_tail, order):
    den = [ONE] + den_tail
    table = expand_rational(num, den, order)
    back = series_mul(den, list(table.rows), order)
    padded = num + [BiPoly()] * (order + 1 - len(num))
    assert back == padded[: order + 1]


def test_series_table_json_round_trip():
    table = gf_cube_census(6)
    data = json.loads(table.to_json())
    assert data["order"] == 6
    assert data["rows"][1]["terms"] == [
        {"exp": [0, 0], "coef": 1},
        {"exp": [0, 1], "coef": 1},
        {"exp": [1, 0], "coef": 1},
    ]
    assert SeriesTable.from_dict(data) == table


def test_univariate_series_lift():
    assert univariate_series([1, 2]) == [BiPoly.const(1), BiPoly.const(2)]


# -- the generating functions ----------------------------------------------


def test_down_degree_printed_rows():
    table = gf_down_degree(7)
    printed = [
        d_poly(1, 1),
        d_poly(1, 2),
        d_poly(1, 3, 1),
        d_poly(1, 4, 3),
        d_poly(1, 5, 7),
        d_poly(1, 6, 12, 2),
        d_poly(1, 7, 19, 7),
    ]
    assert list(table.rows[1:]) == printed


def test_up_degree_printed_rows():
    table = gf_up_degree(6)
    printed = [
        d_poly(1, 1),
        d_poly(2, 0, 1),
        d_poly(2, 2, 0, 1),
        d_poly(3, 2, 2, 0, 1),
        d_poly(5, 2, 3, 2, 0, 1),
        d_poly(6, 6, 2, 4, 2, 0, 1),
    ]
    assert list(table.rows[1:]) == printed


def test_up_degree_with_printed_t3_term_diverges():
    # keeping the literal "+t^3" in the numerator breaks row 4
    u = BiPoly.var(0)
    one, two = ONE, BiPoly.const(2)
    um1 = u - one
    num = [BiPoly(), one + u, two - u, u * -2, one, BiPoly(), -um1, -um1]
    den = [one, -u, -two, u * 2 - one, one, -um1, BiPoly(), um1]
    literal = expand_rational(num, den, 4)
    assert literal[4] == d_poly(6, 1, 2, 0, 1)
    assert literal[4].evaluate(1) == 10  # but R_4 has 8 vertices


@pytest.mark.parametrize("n", range(1, 26))
def test_rows_count_vertices(n):
    assert gf_down_degree(25)[n].evaluate(1) == fib(n + 2)
    assert gf_up_degree(25)[n].evaluate(1) == fib(n + 2)


def test_down_degree_derivative_gives_edges():
    table = gf_down_degree(12)
    assert [table[n].derivative_first().evaluate(1) for n in range(1, 13)] == EDGES


def test_census_printed_rows():
    table = gf_cube_census(6)
    q = BiPoly.var(0)
    x = BiPoly.var(1)
    c = BiPoly.const
    printed = [
        c(1) + q + x,
        c(1) + q * 2 + x * 2,
        c(1) + q * 3 + q * q + (c(3) + q * 2) * x + x * x,
        c(1) + q * 4 + q * q * 3 + (c(4) + q * 6) * x + x * x * 3,
        c(1) + q * 5 + q * q * 7 + (c(5) + q * 14) * x + x * x * 7,
        c(1) + q * 6 + q * q * 12 + q * q * q * 2 + (c(6) + q * 24 + q * q * 6) * x
        + (c(12) + q * 6) * x * x + x * x * x * 2,
    ]
    assert list(table.rows[1:]) == printed


@pytest.mark.parametrize("n", range(1, 16))
def test_census_marginals(n):
    row = gf_cube_census(15)[n]
    assert row.specialize_first(1)[0] == fib(n + 2)
    assert row.specialize_first(1)[1] == EDGES[n - 1] if n <= 12 else True

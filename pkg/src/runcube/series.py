"""Exact integer polynomials and rational power-series expansion.

Coefficients are Python ints but every arithmetic result is checked against
the signed 64-bit range, so swapping in unbounded integers only means
dropping :func:`_checked`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import ArithmeticOverflowError, InvalidDenominatorError

INT64_MAX = 2**63 - 1
INT64_MIN = -(2**63)
MAX_EXPONENT = 64


def _checked(value: int, operation: str) -> int:
    if value > INT64_MAX or value < INT64_MIN:
        raise ArithmeticOverflowError(operation)
    return value


def fib(n: int) -> int:
    """Fibonacci number with ``fib(0) == 0`` and ``fib(1) == 1``.

    Negative indices follow ``f(-n) = (-1)**(n+1) f(n)``; the edge-count
    closed form needs ``f(-1) == 1``.
    """
    if n < 0:
        m = -n
        return fib(m) if m % 2 == 1 else -fib(m)
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return _checked(a, "fib")


# --------------------------------------------------------------------------
# univariate
# --------------------------------------------------------------------------


class IntPoly:
    """Univariate polynomial with exact int64 coefficients, index = degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [_checked(int(c), "IntPoly") for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[int, ...] = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def __add__(self, other: "IntPoly") -> "IntPoly":
        return poly_arith(self, other, "add")

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return poly_arith(self, other, "sub")

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        return poly_arith(self, other, "mul")

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPoly":
        return IntPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)


def poly_arith(a: IntPoly, b: IntPoly, op: str) -> IntPoly:
    """Exact ``add``/``sub``/``mul`` of two :class:`IntPoly`."""
    if op in ("add", "sub"):
        sign = 1 if op == "add" else -1
        size = max(len(a.coeffs), len(b.coeffs))
        return IntPoly(_checked(a[k] + sign * b[k], op) for k in range(size))
    if op == "mul":
        if not a.coeffs or not b.coeffs:
            return IntPoly()
        out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(b.coeffs):
                out[i + j] = _checked(out[i + j] + _checked(x * y, op), op)
        return IntPoly(out)
    raise ValueError(f"unknown polynomial operation {op!r}")


# --------------------------------------------------------------------------
# bivariate
# --------------------------------------------------------------------------

Exp = tuple[int, int]


class BiPoly:
    """Sparse polynomial in two variables, ``terms[(a, b)] = coefficient``.

    The two variables are positional; which letters they stand for
    (``d``, ``u``, ``q``/``x``) is up to the caller.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Exp, int] | Iterable[tuple[Exp, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exp, int] = {}
        for (a, b), c in items:
            a, b = int(a), int(b)
            if a < 0 or b < 0 or a > MAX_EXPONENT or b > MAX_EXPONENT:
                raise ArithmeticOverflowError(f"BiPoly exponent ({a}, {b})")
            acc[(a, b)] = _checked(acc.get((a, b), 0) + int(c), "BiPoly")
        self.terms: dict[Exp, int] = {e: c for e, c in sorted(acc.items()) if c != 0}

    @classmethod
    def const(cls, c: int) -> "BiPoly":
        return cls({(0, 0): c})

    @classmethod
    def var(cls, index: int = 0) -> "BiPoly":
        return cls({(1, 0) if index == 0 else (0, 1): 1})

    @classmethod
    def from_intpoly(cls, p: IntPoly, index: int = 0) -> "BiPoly":
        return cls({((k, 0) if index == 0 else (0, k)): c for k, c in enumerate(p.coeffs)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BiPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __repr__(self) -> str:
        return f"BiPoly({self.terms})"

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = _checked(out.get(e, 0) + c, "add")
        return BiPoly(out)

    def __neg__(self) -> "BiPoly":
        return BiPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other: "BiPoly | int") -> "BiPoly":
        if isinstance(other, int):
            return BiPoly({e: _checked(c * other, "mul") for e, c in self.terms.items()})
        out: dict[Exp, int] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                e = (a1 + a2, b1 + b2)
                if e[0] > MAX_EXPONENT or e[1] > MAX_EXPONENT:
                    raise ArithmeticOverflowError(f"BiPoly exponent {e}")
                out[e] = _checked(out.get(e, 0) + _checked(c1 * c2, "mul"), "mul")
        return BiPoly(out)

    __rmul__ = __mul__

    def coeff(self, a: int, b: int = 0) -> int:
        return self.terms.get((a, b), 0)

    def evaluate(self, x: int, y: int = 1) -> int:
        return sum(c * x**a * y**b for (a, b), c in self.terms.items())

    def specialize_second(self, y: int) -> IntPoly:
        """Substitute a value for the second variable; result is univariate in the first."""
        size = max((a for a, _ in self.terms), default=-1) + 1
        out = [0] * size
        for (a, b), c in self.terms.items():
            out[a] += c * y**b
        return IntPoly(out)

    def specialize_first(self, x: int) -> IntPoly:
        size = max((b for _, b in self.terms), default=-1) + 1
        out = [0] * size
        for (a, b), c in self.terms.items():
            out[b] += c * x**a
        return IntPoly(out)

    def derivative_first(self) -> "BiPoly":
        return BiPoly({(a - 1, b): a * c for (a, b), c in self.terms.items() if a > 0})

    def format(self, names: tuple[str, str] = ("x", "y")) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in self.terms.items():
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v for v, k in zip(names, (a, b)) if k > 0
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


ONE = BiPoly.const(1)
ZERO = BiPoly()


# --------------------------------------------------------------------------
# series
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesTable:
    """Coefficients of a power series in ``t`` up to ``t**order``."""

    order: int
    rows: tuple[BiPoly, ...]

    def __post_init__(self):
        if len(self.rows) != self.order + 1:
            raise ValueError("rows must have order + 1 entries")

    def __getitem__(self, n: int) -> BiPoly:
        return self.rows[n]

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "rows": [
                {"n": i, "terms": [{"exp": [a, b], "coef": c} for (a, b), c in row.terms.items()]}
                for i, row in enumerate(self.rows)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "SeriesTable":
        rows = [ZERO] * (data["order"] + 1)
        for row in data["rows"]:
            rows[row["n"]] = BiPoly(((t["exp"][0], t["exp"][1]), t["coef"]) for t in row["terms"])
        return cls(data["order"], tuple(rows))


TSeries = Sequence[BiPoly]


def _as_bipoly(c) -> BiPoly:
    if isinstance(c, BiPoly):
        return c
    if isinstance(c, int):
        return BiPoly.const(c)
    raise TypeError(f"cannot use {type(c).__name__} as a series coefficient")


def series_mul(a: TSeries, b: TSeries, order: int) -> list[BiPoly]:
    out = [ZERO] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x.is_zero():
            continue
        for j, y in enumerate(b[: order + 1 - i]):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def expand_rational(numerator: TSeries, denominator: TSeries, order: int) -> SeriesTable:
    """Expand ``numerator / denominator`` as a power series in ``t`` to ``t**order``.

    Both arguments are coefficient lists in ``t`` whose entries are
    :class:`BiPoly` (plain ints are accepted).  The constant term of the
    denominator must be exactly 1, which makes the long division integral:
    ``S[n] = N[n] - sum(D[j] * S[n - j] for j >= 1)``.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    num = [_as_bipoly(c) for c in numerator]
    den = [_as_bipoly(c) for c in denominator]
    if not den or den[0] != ONE:
        raise InvalidDenominatorError("denominator constant term must be 1")
    rows: list[BiPoly] = []
    for n in range(order + 1):
        acc = num[n] if n < len(num) else ZERO
        for j in range(1, min(n, len(den) - 1) + 1):
            if not den[j].is_zero():
                acc = acc - den[j] * rows[n - j]
        rows.append(acc)
    return SeriesTable(order, tuple(rows))


def _down_degree_fraction(d: BiPoly) -> tuple[list[BiPoly], list[BiPoly]]:
    """Numerator/denominator of the down-degree generating function, with ``d`` plugged in."""
    one = ONE
    dm1 = d - one
    num = [ZERO, one + d, d, d * d - one, d * dm1, d * dm1]
    den = [one, -one, -one, -dm1, ZERO, -(d * dm1)]
    return num, den


def gf_down_degree(order: int) -> SeriesTable:
    """Row ``n`` is the down-degree enumerator of the run graph, variable ``d`` first."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return expand_rational(*_down_degree_fraction(BiPoly.var(0)), order)


def gf_up_degree(order: int) -> SeriesTable:
    """Row ``n`` is the up-degree enumerator of the run graph, variable ``u`` first.

    The ``t**4`` numerator coefficient is ``u - 2``; with a constant ``1`` there
    the expansion stops matching the graphs from ``n = 4`` on.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    u = BiPoly.var(0)
    one = ONE
    um1 = u - one
    um2 = u - BiPoly.const(2)
    num = [ZERO, one + u, -um2, u * -2, um2, ZERO, -um1, -um1]
    den = [one, -u, BiPoly.const(-2), u * 2 - one, one, -um1, ZERO, um1]
    return expand_rational(num, den, order)


def gf_cube_census(order: int) -> SeriesTable:
    """The down-degree fraction under ``d -> q + x``; exponent pairs are ``(q, x)``.

    A top vertex with ``r`` down-flippable positions contributes ``(q + x)**r``,
    so the coefficient of ``q**s * x**k`` counts ``Q_k`` subcubes whose top
    vertex has ``s`` down-flippable positions left over.  Setting ``q = 1``
    gives the number of ``Q_k`` subcubes.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    return expand_rational(*_down_degree_fraction(BiPoly.var(0) + BiPoly.var(1)), order)


def univariate_series(coeffs: Sequence[int]) -> list[BiPoly]:
    """Lift integer ``t``-coefficients into the BiPoly coefficient ring."""
    return [BiPoly.const(c) for c in coeffs]

"""Run-constrained and Fibonacci binary strings.

A vertex of length ``n`` is stored as an integer whose bit ``n - i`` holds the
``i``-th character (1-based, leftmost first), so ``"100"`` is ``4``.  Strings
are kept in suppressed form: the trailing ``00`` is implicit and only
materialised inside the predicates and :func:`phi`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator, Union

import numpy as np

from .errors import CapacityError, InvalidInputError

WORD_BITS = 62


class Family(str, Enum):
    RUN = "run"
    FIBCUBE = "fibcube"

    @classmethod
    def parse(cls, value: "Family | str") -> "Family":
        if isinstance(value, Family):
            return value
        key = value.strip().lower()
        if key in ("run", "r", "fibonacci-run"):
            return cls.RUN
        if key in ("fibcube", "fib", "gamma", "fibonacci"):
            return cls.FIBCUBE
        raise ValueError(f"unknown family {value!r}")


@dataclass(frozen=True, order=True)
class BitVertex:
    bits: int
    length: int

    def __post_init__(self):
        if self.length < 0 or self.length > WORD_BITS:
            raise CapacityError(f"length {self.length} exceeds {WORD_BITS}-bit words")
        if self.bits < 0 or self.bits >> self.length:
            raise InvalidInputError(f"bits {self.bits:#x} do not fit in {self.length} positions")

    @classmethod
    def from_str(cls, s: str) -> "BitVertex":
        if s and set(s) - {"0", "1"}:
            raise InvalidInputError(f"not a binary string: {s!r}")
        return cls(int(s, 2) if s else 0, len(s))

    def __str__(self) -> str:
        return to_str(self.bits, self.length)

    @property
    def weight(self) -> int:
        return self.bits.bit_count() if hasattr(int, "bit_count") else bin(self.bits).count("1")


VertexLike = Union[BitVertex, str]


def to_str(bits: int, n: int) -> str:
    return format(bits, f"0{n}b") if n else ""


def _coerce(v: VertexLike) -> BitVertex:
    return BitVertex.from_str(v) if isinstance(v, str) else v


def popcount(x: int) -> int:
    return bin(x).count("1")


# --------------------------------------------------------------------------
# predicates
# --------------------------------------------------------------------------


def _run_ok(bits: int, n: int) -> bool:
    ones = zeros = 0
    for pos in range(n - 1, -1, -1):
        if (bits >> pos) & 1:
            if zeros:
                if zeros < ones + 1:
                    return False
                ones = zeros = 0
            ones += 1
        elif ones:
            zeros += 1
    return ones == 0 or zeros + 2 >= ones + 1


def is_run_vertex(v: VertexLike) -> bool:
    """True iff ``v + "00"`` has every run of ``k`` ones followed by ``>= k + 1`` zeros."""
    v = _coerce(v)
    return _run_ok(v.bits, v.length)


def is_fibonacci_vertex(v: VertexLike) -> bool:
    v = _coerce(v)
    return v.bits & (v.bits >> 1) == 0


# --------------------------------------------------------------------------
# enumeration
# --------------------------------------------------------------------------


def _check_capacity(n: int) -> None:
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > WORD_BITS:
        raise CapacityError(f"n = {n} exceeds {WORD_BITS}-bit word capacity")


def run_prefix(k: int) -> int:
    """Integer value of the block ``1^k 0^(k+1)``."""
    return ((1 << k) - 1) << (k + 1)


def apex(n: int) -> int:
    """The single vertex ``1^ceil(n/2) 0^floor(n/2)``."""
    c = (n + 1) // 2
    return ((1 << c) - 1) << (n // 2)


@lru_cache(maxsize=None)
def _run_level(n: int) -> np.ndarray:
    # Parts are emitted in increasing prefix value, so concatenation stays sorted.
    if n == 0:
        out = np.zeros(1, dtype=np.int64)
    else:
        chunks = [_run_level(n - 1)]
        for k in range(1, (n + 1) // 2):
            rest = n - 2 * k - 1
            chunks.append((run_prefix(k) << rest) | _run_level(rest))
        chunks.append(np.array([apex(n)], dtype=np.int64))
        out = np.concatenate(chunks)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _fib_level(n: int) -> np.ndarray:
    if n == 0:
        out = np.zeros(1, dtype=np.int64)
    elif n == 1:
        out = np.array([0, 1], dtype=np.int64)
    else:
        out = np.concatenate([_fib_level(n - 1), (1 << (n - 1)) | _fib_level(n - 2)])
    out.setflags(write=False)
    return out


def enumerate_vertices(family: Family | str, n: int) -> np.ndarray:
    """Sorted vertex labels of ``R_n`` or ``Gamma_n`` as a read-only int64 array."""
    _check_capacity(n)
    family = Family.parse(family)
    return _run_level(n) if family is Family.RUN else _fib_level(n)


def run_mask(values: np.ndarray, n: int) -> np.ndarray:
    """Vectorised run-constraint predicate over an array of ``n``-bit words."""
    values = np.asarray(values, dtype=np.int64)
    ones = np.zeros(values.shape, dtype=np.int64)
    zeros = np.zeros(values.shape, dtype=np.int64)
    ok = np.ones(values.shape, dtype=bool)
    for pos in range(n - 1, -1, -1):
        bit = ((values >> pos) & 1).astype(bool)
        closing = bit & (zeros > 0)
        ok &= ~closing | (zeros >= ones + 1)
        ones = np.where(closing, 0, ones)
        zeros = np.where(closing, 0, zeros)
        ones = ones + bit
        zeros = zeros + (~bit & (ones > 0))
    ok &= (ones == 0) | (zeros + 2 >= ones + 1)
    return ok


def enumerate_vertices_oracle(family: Family | str, n: int) -> np.ndarray:
    """Filter all ``2**n`` words through the predicate (independent of the recursion)."""
    if n > 24:
        raise CapacityError("the exhaustive filter is limited to n <= 24")
    family = Family.parse(family)
    words = np.arange(1 << n, dtype=np.int64)
    if family is Family.RUN:
        return words[run_mask(words, n)]
    return words[(words & (words >> 1)) == 0]


def vertex_strings(family: Family | str, n: int) -> list[str]:
    return [to_str(int(b), n) for b in enumerate_vertices(family, n)]


# --------------------------------------------------------------------------
# factorisation and the bijection
# --------------------------------------------------------------------------


def _fib_letters(word: str) -> Iterator[tuple[str, int]]:
    """Split an extended Fibonacci word into letters ``0`` and ``1(01)^k 00``."""
    i, size = 0, len(word)
    while i < size:
        if word[i] == "0":
            yield "0", -1
            i += 1
            continue
        start, k = i, 0
        i += 1
        while True:
            if i + 1 >= size or word[i] != "0":
                raise InvalidInputError(f"{word!r} does not factor over the Fibonacci alphabet")
            if word[i + 1] == "1":
                k += 1
                i += 2
            else:
                i += 2
                break
        yield word[start:i], k


def run_letters(word: str) -> list[str]:
    """Greedy split of an extended run-constrained word into letters ``0`` and ``1^k 0^(k+1)``."""
    out, i, size = [], 0, len(word)
    while i < size:
        if word[i] == "0":
            out.append("0")
            i += 1
            continue
        k = 0
        while i < size and word[i] == "1":
            k += 1
            i += 1
        if word[i : i + k + 1] != "0" * (k + 1):
            raise InvalidInputError(f"{word!r} does not factor over the run alphabet")
        out.append("1" * k + "0" * (k + 1))
        i += k + 1
    return out


def factorization_count(word: str, letters: list[str]) -> int:
    """Number of ways to write ``word`` as a concatenation of ``letters`` (dynamic programming)."""
    ways = [0] * (len(word) + 1)
    ways[0] = 1
    for i in range(len(word)):
        if ways[i]:
            for a in letters:
                if word.startswith(a, i):
                    ways[i + len(a)] += ways[i]
    return ways[-1]


def phi(word: str) -> str:
    """Map a Fibonacci string to its run-constrained image.

    ``word`` is read with ``00`` appended, cut into letters ``1(01)^k 00``
    and ``0``, each letter replaced by ``1^(k+1) 0^(k+2)``, and the trailing
    ``00`` dropped again.  Length and Hamming weight are preserved.
    """
    if set(word) - {"0", "1"}:
        raise InvalidInputError(f"not a binary string: {word!r}")
    out = []
    for letter, k in _fib_letters(word + "00"):
        out.append("0" if k < 0 else "1" * (k + 1) + "0" * (k + 2))
    image = "".join(out)
    if not image.endswith("00"):
        raise InvalidInputError(f"{word!r} is not a Fibonacci string")
    return image[:-2]


def phi_inverse(word: str) -> str:
    out = []
    for letter in run_letters(word + "00"):
        k = letter.count("1") - 1
        out.append("0" if k < 0 else "1" + "01" * k + "00")
    return "".join(out)[:-2]


def count_by_weight(n: int, w: int) -> int:
    """Number of run vertices of length ``n`` with exactly ``w`` ones."""
    if n < 0 or w < 0 or w > (n + 1) // 2:
        return 0
    return math.comb(n - w + 1, w)

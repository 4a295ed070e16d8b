#! /usr/bin/env python3

"""Exact Gaussian-rational scalars, first-order jets, permutation signs and a small
linear-algebra kernel shared by every other module."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Mapping, Optional, Sequence, Tuple, TypeVar, Union

import sympy
from sympy.combinatorics import Permutation

from sgk.exceptions import (
    DegenerateInputError,
    DimensionMismatchError,
    InvalidInputError,
    SingularEvaluationError,
    SpanError,
)

logger = logging.getLogger(__name__)

R = TypeVar("R")
RationalLike = Union[int, Fraction, str]


class Scalar:
    """An element of Q(i), stored as two reduced fractions"""

    __slots__ = ("re", "im")

    re: Fraction
    im: Fraction

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        try:
            object.__setattr__(self, "re", Fraction(re))
            object.__setattr__(self, "im", Fraction(im))
        except (ValueError, ZeroDivisionError, TypeError) as e:
            raise InvalidInputError(f"not a rational number: {re!r}, {im!r}") from e

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("Scalar is immutable")

    @classmethod
    def coerce(cls, value: Any) -> Scalar:
        """Turn ints, fractions, strings and sympy numbers into a Scalar"""
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, sympy.Basic):
            return cls.from_sympy(value)
        raise InvalidInputError(f"cannot interpret {value!r} as a scalar")

    @classmethod
    def parse(cls, text: str) -> Scalar:
        """Parse the "a/b+c/d*i" notation"""
        body = text.replace(" ", "")
        if not body:
            raise InvalidInputError("empty scalar")
        if not body.endswith("i"):
            return cls(body)
        body = body[:-1]
        if body.endswith("*"):
            body = body[:-1]
        split = max(body.rfind("+"), body.rfind("-"))
        if split > 0:
            real, imag = body[:split], body[split:]
        else:
            real, imag = "0", body
        if imag in ("", "+"):
            imag = "1"
        elif imag == "-":
            imag = "-1"
        return cls(real, imag)

    @classmethod
    def from_sympy(cls, value: sympy.Basic) -> Scalar:
        real, imag = sympy.sympify(value).as_real_imag()
        if not (real.is_Rational and imag.is_Rational):
            raise InvalidInputError(f"{value} is not a Gaussian rational")
        return cls(Fraction(int(real.p), int(real.q)), Fraction(int(imag.p), int(imag.q)))

    def _sympy_(self) -> sympy.Expr:
        real = sympy.Rational(self.re.numerator, self.re.denominator)
        imag = sympy.Rational(self.im.numerator, self.im.denominator)
        return real + sympy.I * imag

    @staticmethod
    def _other(value: Any) -> Optional[Scalar]:
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar(value)
        return None

    def __add__(self, other: Any) -> Any:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: Any) -> Any:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Any) -> Any:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> Any:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> Any:
        o = self._other(other)
        if o is None:
            return NotImplemented
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise DegenerateInputError(f"division of {self} by zero")
        return Scalar(
            (self.re * o.re + self.im * o.im) / norm, (self.im * o.re - self.re * o.im) / norm
        )

    def __rtruediv__(self, other: Any) -> Any:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self) -> Scalar:
        return Scalar(-self.re, -self.im)

    def __pos__(self) -> Scalar:
        return self

    def __pow__(self, exponent: int) -> Scalar:
        if exponent < 0:
            return ONE / (self**-exponent)
        result = ONE
        for _ in range(exponent):
            result = result * self
        return result

    def conjugate(self) -> Scalar:
        return Scalar(self.re, -self.im)

    def is_unit(self) -> bool:
        return bool(self)

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __eq__(self, other: Any) -> bool:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"

    def __repr__(self) -> str:
        return f"Scalar('{self}')"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)  # noqa: E741


@dataclass(frozen=True)
class Jet1:
    """Dual number value + eps * deriv with eps**2 = 0"""

    value: Scalar
    deriv: Scalar = ZERO

    @classmethod
    def constant(cls, value: Any) -> Jet1:
        return cls(Scalar.coerce(value), ZERO)

    @staticmethod
    def _other(value: Any) -> Optional[Jet1]:
        if isinstance(value, Jet1):
            return value
        if isinstance(value, (Scalar, int, Fraction)):
            return Jet1(Scalar.coerce(value), ZERO)
        return None

    def __add__(self, other: Any) -> Any:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Jet1(self.value + o.value, self.deriv + o.deriv)

    __radd__ = __add__

    def __sub__(self, other: Any) -> Any:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Jet1(self.value - o.value, self.deriv - o.deriv)

    def __rsub__(self, other: Any) -> Any:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> Any:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Jet1(self.value * o.value, self.value * o.deriv + self.deriv * o.value)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> Any:
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not o.value:
            raise SingularEvaluationError("jet division by a value part of zero")
        inv = ONE / o.value
        return Jet1(self.value * inv, (self.deriv * o.value - self.value * o.deriv) * inv * inv)

    def __rtruediv__(self, other: Any) -> Any:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self) -> Jet1:
        return Jet1(-self.value, -self.deriv)

    def __pow__(self, exponent: int) -> Jet1:
        if exponent < 0:
            return Jet1(ONE) / (self**-exponent)
        result = Jet1(ONE)
        for _ in range(exponent):
            result = result * self
        return result

    def is_unit(self) -> bool:
        return bool(self.value)


def perm_sign(sequence: Sequence[Any]) -> int:
    """Sign of the permutation that sorts a sequence of distinct items"""
    if len(set(sequence)) != len(sequence):
        raise InvalidInputError(f"permutation entries are not distinct: {list(sequence)}")
    if len(sequence) < 2:
        return 1
    order = sorted(range(len(sequence)), key=lambda k: sequence[k])
    return int(Permutation(order).signature())


def _strictly_increasing(seq: Sequence[int]) -> bool:
    return all(a < b for a, b in zip(seq, seq[1:]))


def shuffle_sign(left: Sequence[int], right: Sequence[int]) -> int:
    """Sign of the riffle that sends (left, right) to (1, ..., r)"""
    if not (_strictly_increasing(left) and _strictly_increasing(right)):
        raise InvalidInputError(f"shuffle halves must be increasing: {list(left)}, {list(right)}")
    r = len(left) + len(right)
    if set(left) & set(right) or set(left) | set(right) != set(range(1, r + 1)):
        raise InvalidInputError(f"{list(left)} and {list(right)} do not split 1..{r}")
    return perm_sign(list(left) + list(right))


# Coordinate functions on matrix groups


def coordinate_symbol(row: int, col: int) -> sympy.Symbol:
    """The coordinate function x_row_col, 1-based"""
    return sympy.Symbol(f"x_{row}_{col}")


def evaluate_tree(expr: sympy.Expr, values: Mapping[sympy.Symbol, R], lift: Callable[[Scalar], R]) -> R:
    """Evaluate a polynomial/reciprocal expression over any ring supplied by values and lift"""
    if expr.is_Symbol:
        try:
            return values[expr]
        except KeyError:
            raise InvalidInputError(f"unbound coordinate {expr}") from None
    if expr.is_Rational:
        return lift(Scalar(Fraction(int(expr.p), int(expr.q))))
    if expr is sympy.I:
        return lift(I)
    if expr.is_Add or expr.is_Mul:
        parts = [evaluate_tree(arg, values, lift) for arg in expr.args]
        result = parts[0]
        for part in parts[1:]:
            result = result + part if expr.is_Add else result * part  # type: ignore[operator]
        return result
    if expr.is_Pow:
        base, exponent = expr.args
        if not exponent.is_Integer:
            raise InvalidInputError(f"non-integer power in {expr}")
        n = int(exponent)
        value = evaluate_tree(base, values, lift)
        if n < 0:
            if not value.is_unit():  # type: ignore[attr-defined]
                raise SingularEvaluationError(f"{base} vanishes at the evaluation point")
            value = lift(ONE) / value  # type: ignore[operator]
            n = -n
        result = lift(ONE)
        for _ in range(n):
            result = result * value  # type: ignore[operator]
        return result
    raise InvalidInputError(f"unsupported expression node {expr.func.__name__} in {expr}")


def _point_values(point: Sequence[Sequence[R]]) -> dict[sympy.Symbol, R]:
    return {
        coordinate_symbol(i + 1, j + 1): entry
        for i, row in enumerate(point)
        for j, entry in enumerate(row)
    }


def eval_scalar(expr: sympy.Expr, point: Sequence[Sequence[Scalar]]) -> Scalar:
    return evaluate_tree(sympy.sympify(expr), _point_values(point), lambda s: s)


def jet_eval(expr: sympy.Expr, point: Sequence[Sequence[Jet1]]) -> Jet1:
    """Value and first derivative of an expression along a jet of matrices"""
    return evaluate_tree(sympy.sympify(expr), _point_values(point), Jet1.constant)


# Linear algebra over Scalar (and, where noted, over any ring with is_unit)

Matrix = Tuple[Tuple[Scalar, ...], ...]
Vector = Tuple[Scalar, ...]


def to_matrix(rows: Sequence[Sequence[Any]]) -> Matrix:
    width = len(rows[0]) if rows else 0
    if any(len(row) != width for row in rows):
        raise DimensionMismatchError("ragged matrix")
    return tuple(tuple(Scalar.coerce(v) for v in row) for row in rows)


def to_vector(entries: Sequence[Any]) -> Vector:
    return tuple(Scalar.coerce(v) for v in entries)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows))


def unit_vector(n: int, k: int) -> Vector:
    return tuple(ONE if i == k else ZERO for i in range(n))


def linear_combination(coeffs: Sequence[Any], items: Sequence[Any]) -> Any:
    """Sum of coeff * item, skipping exact zeros; works over any ring"""
    result: Any = None
    for c, x in zip(coeffs, items):
        if isinstance(c, Scalar) and not c:
            continue
        if isinstance(x, Scalar) and not x:
            continue
        term = c * x
        result = term if result is None else result + term
    return ZERO if result is None else result


def matmul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]]) -> tuple[tuple[Any, ...], ...]:
    if a and len(a[0]) != len(b):
        raise DimensionMismatchError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x?")
    cols = list(zip(*b)) if b else []
    return tuple(tuple(linear_combination(row, col) for col in cols) for row in a)


def matvec(a: Sequence[Sequence[Any]], v: Sequence[Any]) -> tuple[Any, ...]:
    if a and len(a[0]) != len(v):
        raise DimensionMismatchError("matrix and vector sizes differ")
    return tuple(linear_combination(row, v) for row in a)


def transpose(a: Sequence[Sequence[Any]]) -> tuple[tuple[Any, ...], ...]:
    return tuple(zip(*a))


def rref(rows: Sequence[Sequence[Scalar]]) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns"""
    work = [list(row) for row in rows]
    pivots: list[int] = []
    width = len(work[0]) if work else 0
    r = 0
    for c in range(width):
        pivot = next((k for k in range(r, len(work)) if work[k][c]), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        scale = ONE / work[r][c]
        work[r] = [v * scale for v in work[r]]
        for k in range(len(work)):
            if k != r and work[k][c]:
                factor = work[k][c]
                work[k] = [a - factor * b for a, b in zip(work[k], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return tuple(tuple(row) for row in work), tuple(pivots)


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def solve(a: Sequence[Sequence[Scalar]], b: Sequence[Scalar]) -> Optional[Vector]:
    """A particular solution of a x = b (free variables set to zero), or None"""
    if len(a) != len(b):
        raise DimensionMismatchError("right-hand side length differs from row count")
    width = len(a[0]) if a else 0
    reduced, pivots = rref([list(row) + [rhs] for row, rhs in zip(a, b)])
    if width in pivots:
        return None
    solution = [ZERO] * width
    for r, c in enumerate(pivots):
        solution[c] = reduced[r][width]
    return tuple(solution)


def inverse(a: Sequence[Sequence[R]]) -> tuple[tuple[R, ...], ...]:
    """Gauss-Jordan inverse over Scalar or Jet1 entries"""
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatchError("only square matrices are invertible")
    one: Any = ONE
    zero: Any = ZERO
    if n and isinstance(a[0][0], Jet1):
        one, zero = Jet1(ONE), Jet1(ZERO)
    work = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        pivot = next((k for k in range(c, n) if work[k][c].is_unit()), None)  # type: ignore[attr-defined]
        if pivot is None:
            raise DegenerateInputError("matrix is singular")
        work[c], work[pivot] = work[pivot], work[c]
        scale = one / work[c][c]
        work[c] = [v * scale for v in work[c]]
        for k in range(n):
            if k != c:
                factor = work[k][c]
                work[k] = [x - factor * y for x, y in zip(work[k], work[c])]
    return tuple(tuple(row[n:]) for row in work)


def determinant(a: Sequence[Sequence[Scalar]]) -> Scalar:
    work = [list(row) for row in a]
    n = len(work)
    det = ONE
    for c in range(n):
        pivot = next((k for k in range(c, n) if work[k][c]), None)
        if pivot is None:
            return ZERO
        if pivot != c:
            work[c], work[pivot] = work[pivot], work[c]
            det = -det
        det = det * work[c][c]
        for k in range(c + 1, n):
            if work[k][c]:
                factor = work[k][c] / work[c][c]
                work[k] = [x - factor * y for x, y in zip(work[k], work[c])]
    return det


class SpanBasis:
    """Coordinates with respect to a list of linearly independent vectors.

    Coordinates are read off an invertible square block of the vectors, so the same
    functional applies to vectors over any ring (expressions, jets) once membership
    has been established over Scalar.
    """

    def __init__(self, vectors: Sequence[Sequence[Scalar]], ambient_dim: Optional[int] = None):
        self.vectors: tuple[Vector, ...] = tuple(to_vector(v) for v in vectors)
        self.ambient_dim = ambient_dim if ambient_dim is not None else (
            len(self.vectors[0]) if self.vectors else 0
        )
        if any(len(v) != self.ambient_dim for v in self.vectors):
            raise DimensionMismatchError("span vectors have different lengths")
        if not self.vectors:
            self._rows: tuple[int, ...] = ()
            self._inverse: Matrix = ()
            return
        # Rows of the column matrix that carry an invertible block
        _, rows = rref(self.vectors)
        if len(rows) != len(self.vectors):
            raise DegenerateInputError("span vectors are linearly dependent")
        self._rows = rows
        block = [[v[r] for v in self.vectors] for r in rows]
        self._inverse = inverse(block)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def coordinates(self, vector: Sequence[Any]) -> tuple[Any, ...]:
        picked = [vector[r] for r in self._rows]
        return tuple(linear_combination(row, picked) for row in self._inverse)

    def combine(self, coords: Sequence[Any]) -> tuple[Any, ...]:
        return tuple(
            linear_combination(coords, [v[k] for v in self.vectors]) for k in range(self.ambient_dim)
        )

    def contains(self, vector: Sequence[Scalar]) -> bool:
        vector = to_vector(vector)
        return self.combine(self.coordinates(vector)) == vector

    def express(self, vector: Sequence[Scalar]) -> Vector:
        """Exact coordinates of a vector that must lie in the span"""
        vector = to_vector(vector)
        if len(vector) != self.ambient_dim:
            raise DimensionMismatchError(f"expected length {self.ambient_dim}, got {len(vector)}")
        coords = to_vector(self.coordinates(vector))
        if self.combine(coords) != vector:
            raise SpanError(f"vector ({', '.join(map(str, vector))}) is outside the span")
        return coords


def evaluate_at(expr: sympy.Expr, point: Sequence[Sequence[Any]]) -> Any:
    """Evaluate at a matrix over Scalar, Jet1 or sympy entries"""
    entries = [v for row in point for v in row]
    if any(isinstance(v, sympy.Basic) for v in entries):
        mapping = {
            coordinate_symbol(i + 1, j + 1): sympy.sympify(v)
            for i, row in enumerate(point)
            for j, v in enumerate(row)
        }
        return sympy.sympify(expr).xreplace(mapping)
    if any(isinstance(v, Jet1) for v in entries):
        jets = [[v if isinstance(v, Jet1) else Jet1.constant(v) for v in row] for row in point]
        return jet_eval(expr, jets)
    return eval_scalar(expr, point)

#! /usr/bin/env python3

"""Matrix Lie groups over exact scalars and their coordinate-function expressions"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Iterable, Iterator, Optional, Sequence, Union

import sympy

from sgk.exactnum import (
    ONE,
    ZERO,
    Jet1,
    Matrix,
    Scalar,
    Vector,
    coordinate_symbol,
    determinant,
    eval_scalar,
    inverse,
    matmul,
    to_matrix,
)
from sgk.exceptions import (
    DegenerateInputError,
    DimensionMismatchError,
    InvalidInputError,
    PatternViolationError,
)
from sgk.liesuper import LieSuperAlgebra
from sgk.report import Report

logger = logging.getLogger(__name__)

# Coordinate functions are sympy expressions in the free coordinates x_i_j built from
# constants, sums, products, det⁻¹ and reciprocals of nonvanishing expressions.
FunctionExpr = sympy.Expr


class EntryConstraint(Enum):
    FREE = "*"
    ZERO = "0"
    UNIT = "1"


@dataclass(frozen=True)
class Pattern:
    mask: tuple[tuple[EntryConstraint, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.mask)
        if any(len(row) != n for row in self.mask):
            raise DimensionMismatchError("pattern mask must be square")
        for i, row in enumerate(self.mask):
            for j, c in enumerate(row):
                if i == j and c is EntryConstraint.ZERO:
                    raise InvalidInputError(f"diagonal entry ({i + 1},{j + 1}) cannot be constrained to 0")
                if i != j and c is EntryConstraint.UNIT:
                    raise InvalidInputError(f"off-diagonal entry ({i + 1},{j + 1}) cannot be constrained to 1")

    @classmethod
    def full(cls, n: int) -> Pattern:
        return cls(tuple(tuple(EntryConstraint.FREE for _ in range(n)) for _ in range(n)))

    @classmethod
    def parse(cls, rows: Sequence[Union[str, Sequence[str]]]) -> Pattern:
        """Rows such as "**0" or ["*", "*", "0"]"""
        try:
            return cls(
                tuple(
                    tuple(EntryConstraint(c) for c in (row.replace(" ", "") if isinstance(row, str) else row))
                    for row in rows
                )
            )
        except ValueError as e:
            raise InvalidInputError(f"bad pattern mask: {e}") from None

    @property
    def n(self) -> int:
        return len(self.mask)

    @property
    def free_entries(self) -> list[tuple[int, int]]:
        return [
            (i, j) for i, row in enumerate(self.mask) for j, c in enumerate(row) if c is EntryConstraint.FREE
        ]

    def constant(self, i: int, j: int) -> Optional[Scalar]:
        c = self.mask[i][j]
        if c is EntryConstraint.ZERO:
            return ZERO
        if c is EntryConstraint.UNIT:
            return ONE
        return None

    def violations(self, matrix: Sequence[Sequence[Scalar]]) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i in range(self.n)
            for j in range(self.n)
            if (value := self.constant(i, j)) is not None and matrix[i][j] != value
        ]

    def tangent_violations(self, matrix: Sequence[Sequence[Scalar]]) -> list[tuple[int, int]]:
        """Entries where I + tX leaves the pattern at first order"""
        return [
            (i, j)
            for i in range(self.n)
            for j in range(self.n)
            if self.mask[i][j] is not EntryConstraint.FREE and matrix[i][j]
        ]

    def rows(self) -> list[str]:
        return ["".join(c.value for c in row) for row in self.mask]


@dataclass(frozen=True)
class GroupPoint:
    matrix: Matrix

    def __post_init__(self) -> None:
        matrix = to_matrix(self.matrix)
        if any(len(row) != len(matrix) for row in matrix):
            raise DimensionMismatchError("group points are square matrices")
        object.__setattr__(self, "matrix", matrix)
        if not determinant(matrix):
            raise DegenerateInputError(f"{self} is not invertible")

    @property
    def n(self) -> int:
        return len(self.matrix)

    def __str__(self) -> str:
        return "[" + ",".join("[" + ",".join(str(v) for v in row) + "]" for row in self.matrix) + "]"


class GroupModel:
    """A matrix group cut out by a constraint pattern, with Lie superalgebra g over it"""

    def __init__(self, algebra: LieSuperAlgebra, pattern: Pattern, name: str = "G"):
        if algebra.realization is None:
            raise InvalidInputError("a group model needs an algebra with a matrix realization")
        if algebra.realization.size != pattern.n:
            raise DimensionMismatchError(
                f"pattern is {pattern.n}x{pattern.n} but the realization is "
                f"{algebra.realization.size}x{algebra.realization.size}"
            )
        self.algebra = algebra
        self.pattern = pattern
        self.name = name
        self.n = pattern.n
        self._derive_cache: dict[tuple[Vector, sympy.Expr], sympy.Expr] = {}

    def __repr__(self) -> str:
        return f"GroupModel({self.name}, n={self.n})"

    # Coordinates

    @cached_property
    def coordinates(self) -> sympy.Matrix:
        return sympy.Matrix(
            self.n,
            self.n,
            lambda i, j: coordinate_symbol(i + 1, j + 1)
            if self.pattern.mask[i][j] is EntryConstraint.FREE
            else sympy.sympify(self.pattern.constant(i, j)),
        )

    @cached_property
    def free_symbols(self) -> tuple[sympy.Symbol, ...]:
        return tuple(coordinate_symbol(i + 1, j + 1) for i, j in self.pattern.free_entries)

    def coordinate(self, row: int, col: int) -> FunctionExpr:
        return self.coordinates[row - 1, col - 1]

    @cached_property
    def det_expr(self) -> FunctionExpr:
        return self.coordinates.det(method="berkowitz")

    def det_inverse(self) -> FunctionExpr:
        return 1 / self.det_expr

    def constant(self, value: Any) -> FunctionExpr:
        return sympy.sympify(Scalar.coerce(value))

    @cached_property
    def symbolic_inverse(self) -> tuple[tuple[FunctionExpr, ...], ...]:
        """Entries of x⁻¹ as adj(x) det⁻¹"""
        adjugate = self.coordinates.adjugate(method="berkowitz")
        inv_det = self.det_inverse()
        return tuple(tuple(adjugate[i, j] * inv_det for j in range(self.n)) for i in range(self.n))

    def parse_expr(self, text: str) -> FunctionExpr:
        """Parse an expression string in x_i_j (or xij), det and det_inv"""
        names: dict[str, Any] = {"I": sympy.I, "i": sympy.I}
        for i in range(1, self.n + 1):
            for j in range(1, self.n + 1):
                names[f"x_{i}_{j}"] = self.coordinates[i - 1, j - 1]
                if self.n < 10:
                    names[f"x{i}{j}"] = self.coordinates[i - 1, j - 1]
        names["det"] = self.det_expr
        names["det_inv"] = self.det_inverse()
        names["reciprocal"] = _reciprocal
        try:
            expr = sympy.sympify(text, locals=names)
        except (sympy.SympifyError, SyntaxError, TypeError) as e:
            raise InvalidInputError(f"cannot parse expression {text!r}: {e}") from None
        unknown = expr.free_symbols - set(self.free_symbols)
        if unknown:
            raise InvalidInputError(f"expression {text!r} uses unknown symbols {sorted(map(str, unknown))}")
        return expr

    def substitute(self, expr: FunctionExpr, matrix: Sequence[Sequence[Any]]) -> FunctionExpr:
        """Replace each free coordinate x_i_j by matrix[i][j]"""
        mapping = {
            coordinate_symbol(i + 1, j + 1): sympy.sympify(matrix[i][j]) for i, j in self.pattern.free_entries
        }
        return sympy.sympify(expr).xreplace(mapping)

    # Points

    def point(self, rows: Sequence[Sequence[Any]]) -> GroupPoint:
        g = GroupPoint(to_matrix(rows))
        self.validate(g)
        return g

    def identity(self) -> GroupPoint:
        return GroupPoint(tuple(tuple(ONE if i == j else ZERO for j in range(self.n)) for i in range(self.n)))

    def contains(self, g: GroupPoint) -> bool:
        return g.n == self.n and not self.pattern.violations(g.matrix)

    def validate(self, g: GroupPoint) -> GroupPoint:
        if g.n != self.n:
            raise DimensionMismatchError(f"{g} is not {self.n}x{self.n}")
        bad = self.pattern.violations(g.matrix)
        if bad:
            raise PatternViolationError(f"{g} violates the {self.name} pattern at {[(i + 1, j + 1) for i, j in bad]}")
        return g

    def group_mul(self, a: GroupPoint, b: GroupPoint) -> GroupPoint:
        return self.validate(GroupPoint(matmul(a.matrix, b.matrix)))

    def group_inv(self, a: GroupPoint) -> GroupPoint:
        return self.validate(GroupPoint(inverse(a.matrix)))

    # Functions

    def eval_expr(self, f: FunctionExpr, g: GroupPoint) -> Scalar:
        return eval_scalar(f, g.matrix)

    def jet_point(self, g: GroupPoint, direction: Sequence[Sequence[Scalar]]) -> tuple[tuple[Jet1, ...], ...]:
        """The jet (I + εX) g"""
        moved = matmul(direction, g.matrix)
        return tuple(
            tuple(Jet1(g.matrix[i][j], moved[i][j]) for j in range(self.n)) for i in range(self.n)
        )

    def even_matrix(self, x: Sequence[Scalar]) -> Matrix:
        if self.algebra.basis.vector_parity(x) != 0:
            raise InvalidInputError(f"{self.algebra.format(x)} is not even")
        assert self.algebra.realization is not None
        return to_matrix(self.algebra.realization.matrix_of(x))

    def riv_derive(self, x: Sequence[Scalar], f: FunctionExpr) -> FunctionExpr:
        """g ↦ d/dt f((I + tX) g) at t = 0"""
        f = sympy.sympify(f)
        key = (tuple(x), f)
        cached = self._derive_cache.get(key)
        if cached is not None:
            return cached
        xm = sympy.Matrix(self.even_matrix(x))
        moved = xm * self.coordinates
        result = sympy.Integer(0)
        for i, j in self.pattern.free_entries:
            symbol = coordinate_symbol(i + 1, j + 1)
            if moved[i, j] != 0 and f.has(symbol):
                result = result + sympy.diff(f, symbol) * moved[i, j]
        self._derive_cache[key] = result
        return result

    def ad_g(self, g: GroupPoint, x: Sequence[Scalar]) -> Vector:
        """g X g⁻¹ re-expanded in the basis of g"""
        assert self.algebra.realization is not None
        real = self.algebra.realization
        conj = matmul(matmul(g.matrix, to_matrix(real.matrix_of(x))), inverse(g.matrix))
        return real.expand(conj)

    def ad_matrix(self, g: GroupPoint) -> Matrix:
        columns = [self.ad_g(g, self.algebra.basis_vector(j)) for j in range(self.algebra.dim)]
        return tuple(tuple(col[i] for col in columns) for i in range(self.algebra.dim))

    def expression_degree(self, f: FunctionExpr) -> int:
        """deg(numerator) + deg(denominator) of f as a rational function of the free coordinates"""
        numerator, denominator = sympy.fraction(sympy.together(sympy.sympify(f)))
        return _total_degree(numerator, self.free_symbols) + _total_degree(denominator, self.free_symbols)

    def distinguishes(self, points: Sequence[GroupPoint], degree: int) -> bool:
        """Every free coordinate takes more than degree + 1 distinct values on points"""
        if not points:
            return False
        return all(
            len({g.matrix[i][j] for g in points}) > degree + 1 for i, j in self.pattern.free_entries
        )

    def distinguishing_points(
        self, points: Iterable[GroupPoint], degree: int, avoid: Sequence[FunctionExpr] = ()
    ) -> list[GroupPoint]:
        """points, extended by seeded random points off the zeros of avoid until they
        distinguish functions of the given degree"""
        found: list[GroupPoint] = []
        for g in points:
            if g not in found:
                found.append(g)
        if self.distinguishes(found, degree):
            return found
        rng = random.Random(degree)
        bound = degree + 2
        attempts = 0
        while not self.distinguishes(found, degree):
            attempts += 1
            if attempts > 1000 * (degree + 2):
                raise DegenerateInputError(f"could not draw points distinguishing degree {degree}")
            g = _draw_point(self, rng, bound, avoid)
            if g is not None and g not in found:
                found.append(g)
        logger.debug("%s: %d points distinguish degree %d", self.name, len(found), degree)
        return found

    def expression_equal(self, f1: FunctionExpr, f2: FunctionExpr, samples: Iterable[GroupPoint]) -> bool:
        """f1 = f2, decided on the samples extended until a nonzero difference of this degree
        cannot vanish on all of them"""
        f1, f2 = sympy.sympify(f1), sympy.sympify(f2)
        if f1 == f2:
            return True
        degree = self.expression_degree(f1) + self.expression_degree(f2)
        points = self.distinguishing_points(samples, degree, _denominators(f1) + _denominators(f2))
        return all(self.eval_expr(f1, g) == self.eval_expr(f2, g) for g in points)

    def check(self) -> Report:
        """Identity membership and first-order tangency of g0 to the pattern"""
        report = Report()
        report.add(
            "groupmodel", f"{self.name}.identity", self.contains(self.identity()), "identity satisfies the pattern"
        )
        real = self.algebra.realization
        assert real is not None
        for i in self.algebra.basis.even_indices:
            bad = self.pattern.tangent_violations(real.matrices[i])
            report.add(
                "groupmodel",
                f"{self.name}.tangent",
                not bad,
                self.algebra.name(i)
                + (f" leaves the pattern at {[(a + 1, b + 1) for a, b in bad]}" if bad else ""),
            )
        return report


class SampleSet:
    """Exact group points used as the verification domain; always contains the identity"""

    def __init__(self, model: GroupModel, points: Sequence[GroupPoint], closure_depth: int = 2):
        if closure_depth < 1:
            raise InvalidInputError("closure depth must be at least 1")
        self.model = model
        self.closure_depth = closure_depth
        identity = model.identity()
        unique: list[GroupPoint] = [identity]
        for g in points:
            model.validate(g)
            if g not in unique:
                unique.append(g)
        self.points: tuple[GroupPoint, ...] = tuple(unique)

    def __iter__(self) -> Iterator[GroupPoint]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def tuples(self, arity: int) -> Iterator[tuple[GroupPoint, ...]]:
        return itertools.product(self.points, repeat=arity)

    def products(self) -> Iterator[GroupPoint]:
        """Products of up to closure_depth sample points, and inverses of sample points"""
        for g in self.points:
            yield GroupPoint(inverse(g.matrix))
        for depth in range(2, self.closure_depth + 1):
            for factors in itertools.product(self.points, repeat=depth):
                product = factors[0].matrix
                for h in factors[1:]:
                    product = matmul(product, h.matrix)
                yield GroupPoint(product)

    def closure_check(self) -> Report:
        report = Report()
        outside = [g for g in self.products() if not self.model.contains(g)]
        report.add(
            "groupmodel",
            f"{self.model.name}.sample_closure",
            not outside,
            f"{len(self.points)} points, depth {self.closure_depth}"
            + (f", {outside[0]} leaves the pattern" if outside else ""),
        )
        return report

    def closure(self) -> SampleSet:
        """The sample set enlarged by all products and inverses up to the closure depth"""
        found = list(self.points)
        for g in self.products():
            if g not in found:
                found.append(g)
        return SampleSet(self.model, found, self.closure_depth)

    @classmethod
    def random(
        cls,
        model: GroupModel,
        rng: random.Random,
        count: int,
        closure_depth: int = 2,
        avoid: Sequence[FunctionExpr] = (),
        bound: int = 2,
    ) -> SampleSet:
        """count random points with small integer entries where no expression in avoid vanishes"""
        points: list[GroupPoint] = []
        attempts = 0
        while len(points) < count:
            attempts += 1
            if attempts > 1000 * max(count, 1):
                raise DegenerateInputError("could not draw enough sample points")
            g = _draw_point(model, rng, bound, avoid)
            if g is not None and g not in points:
                points.append(g)
        return cls(model, points, closure_depth)


def _draw_point(
    model: GroupModel, rng: random.Random, bound: int, avoid: Sequence[FunctionExpr]
) -> Optional[GroupPoint]:
    """A random point with free entries in [-bound, bound], None if it is singular or
    hits a zero of avoid"""
    rows = [
        [
            model.pattern.constant(i, j)
            if model.pattern.constant(i, j) is not None
            else Scalar(rng.randint(-bound, bound))
            for j in range(model.n)
        ]
        for i in range(model.n)
    ]
    matrix = to_matrix(rows)
    if not determinant(matrix):
        return None
    g = GroupPoint(matrix)
    if not all(_nonvanishing(model, f, g) for f in avoid):
        return None
    return g


def _total_degree(poly: FunctionExpr, symbols: Sequence[sympy.Symbol]) -> int:
    if poly.is_zero or not symbols:
        return 0
    return int(sympy.Poly(poly, *symbols).total_degree())


def _denominators(f: FunctionExpr) -> list[FunctionExpr]:
    """Bases of the negative powers in f, where its evaluation is undefined"""
    return [p.base for p in f.atoms(sympy.Pow) if p.exp.is_negative]


def _nonvanishing(model: GroupModel, f: FunctionExpr, g: GroupPoint) -> bool:
    try:
        return bool(model.eval_expr(f, g))
    except ZeroDivisionError:
        return False


def _reciprocal(expr: Any) -> FunctionExpr:
    """1/expr, a function on the open set where expr does not vanish"""
    expr = sympy.sympify(expr)
    if expr == 0:
        raise InvalidInputError("reciprocal of the zero function")
    return sympy.Pow(expr, -1)

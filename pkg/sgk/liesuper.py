#! /usr/bin/env python3

"""Finite-dimensional Lie superalgebras given by structure constants"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property
from typing import Any, Mapping, Optional, Sequence

from sgk.exactnum import (
    ONE,
    ZERO,
    Matrix,
    Scalar,
    SpanBasis,
    Vector,
    linear_combination,
    matmul,
    to_matrix,
    to_vector,
    unit_vector,
)
from sgk.exceptions import (
    ClosureError,
    DegenerateInputError,
    DimensionMismatchError,
    InvalidInputError,
    ParentMismatchError,
    SpanError,
)
from sgk.report import Report

logger = logging.getLogger(__name__)


class Parity(IntEnum):
    EVEN = 0
    ODD = 1


def format_vector(names: Sequence[str], vector: Sequence[Scalar]) -> str:
    """Render a coefficient vector as e.g. "e11+e22" or "-1/2*e12" """
    parts = []
    for name, c in zip(names, vector):
        if not c:
            continue
        if c == ONE:
            term = name
        elif c == -ONE:
            term = f"-{name}"
        elif c.im != 0 and c.re != 0:
            term = f"({c})*{name}"
        else:
            term = f"{c}*{name}"
        parts.append(term)
    if not parts:
        return "0"
    return "".join(p if i == 0 or p.startswith("-") else f"+{p}" for i, p in enumerate(parts))


@dataclass(frozen=True)
class SuperBasis:
    names: tuple[str, ...]
    parities: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.parities):
            raise DimensionMismatchError("basis names and parities differ in length")
        if len(set(self.names)) != len(self.names):
            raise InvalidInputError(f"basis labels are not distinct: {list(self.names)}")
        if any(p not in (0, 1) for p in self.parities):
            raise InvalidInputError("parities must be 0 (even) or 1 (odd)")
        if list(self.parities) != sorted(self.parities):
            raise InvalidInputError("even basis labels must be listed before odd ones")

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def n_even(self) -> int:
        return self.parities.count(0)

    @property
    def even_indices(self) -> range:
        return range(self.n_even)

    @property
    def odd_indices(self) -> range:
        return range(self.n_even, self.dim)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InvalidInputError(f"unknown basis label {name!r}") from None

    def parity(self, i: int) -> int:
        return self.parities[i]

    def vector_parity(self, vector: Sequence[Scalar]) -> Optional[int]:
        """Parity of a homogeneous vector, None if it mixes parities"""
        found = {self.parities[k] for k, c in enumerate(vector) if c}
        if len(found) > 1:
            return None
        return found.pop() if found else 0


@dataclass(frozen=True)
class MatrixRealization:
    """Basis matrices in gl(m|n), one per basis element"""

    m: int
    n: int
    matrices: tuple[Matrix, ...]

    @property
    def size(self) -> int:
        return self.m + self.n

    def entry_parity(self, row: int, col: int) -> int:
        return int((row >= self.m) != (col >= self.m))

    def matrix_parity(self, matrix: Matrix) -> Optional[int]:
        found = {
            self.entry_parity(i, j)
            for i, row in enumerate(matrix)
            for j, v in enumerate(row)
            if v
        }
        if len(found) > 1:
            return None
        return found.pop() if found else 0

    @cached_property
    def _span(self) -> SpanBasis:
        return SpanBasis([self.flatten(b) for b in self.matrices], self.size * self.size)

    @staticmethod
    def flatten(matrix: Sequence[Sequence[Any]]) -> tuple[Any, ...]:
        return tuple(v for row in matrix for v in row)

    def coordinates(self, matrix: Sequence[Sequence[Any]]) -> tuple[Any, ...]:
        """Basis coefficients of a matrix known to lie in the span, over any ring"""
        return self._span.coordinates(self.flatten(matrix))

    def expand(self, matrix: Sequence[Sequence[Scalar]]) -> Vector:
        return self._span.express(self.flatten(matrix))

    def matrix_of(self, vector: Sequence[Any]) -> tuple[tuple[Any, ...], ...]:
        size = self.size
        return tuple(
            tuple(
                linear_combination(vector, [b[i][j] for b in self.matrices]) for j in range(size)
            )
            for i in range(size)
        )


def supercommutator(x: Matrix, y: Matrix, px: int, py: int) -> Matrix:
    """xy - (-1)^{p(x)p(y)} yx"""
    xy = matmul(x, y)
    yx = matmul(y, x)
    sign = -1 if px and py else 1
    return tuple(tuple(a - sign * b for a, b in zip(r1, r2)) for r1, r2 in zip(xy, yx))


class LieSuperAlgebra:
    """Brackets are stored for i <= j only; (j, i) follows from super-antisymmetry"""

    def __init__(
        self,
        basis: SuperBasis,
        brackets: Mapping[tuple[int, int], Sequence[Any]],
        realization: Optional[MatrixRealization] = None,
    ):
        self.basis = basis
        self.realization = realization
        self._table: dict[tuple[int, int], Vector] = {}
        seen: dict[tuple[int, int], Vector] = {}
        for (i, j), raw in brackets.items():
            vector = to_vector(raw)
            self._check_dim(vector)
            if not (0 <= i < basis.dim and 0 <= j < basis.dim):
                raise InvalidInputError(f"bracket index out of range: ({i}, {j})")
            if i > j:
                # [x_j, x_i] = -(-1)^{p_i p_j} [x_i, x_j]
                sign = ONE if basis.parity(i) and basis.parity(j) else -ONE
                i, j, vector = j, i, tuple(sign * c for c in vector)
            pair = (self.basis.names[i], self.basis.names[j])
            if i == j and not basis.parity(i) and any(vector):
                raise InvalidInputError(f"bracket [{pair[0]}, {pair[1]}] of an even element must vanish")
            if seen.setdefault((i, j), vector) != vector:
                raise InvalidInputError(
                    f"brackets [{pair[0]}, {pair[1]}] and [{pair[1]}, {pair[0]}] violate super-antisymmetry"
                )
            expected = (basis.parity(i) + basis.parity(j)) % 2
            found = basis.vector_parity(vector)
            if found is None or (any(vector) and found != expected):
                raise InvalidInputError(f"bracket [{pair[0]}, {pair[1]}] is not parity-homogeneous")
            if any(vector):
                self._table[(i, j)] = vector
        self._sparse: dict[tuple[int, int], dict[int, Scalar]] = {}

    def _check_dim(self, vector: Sequence[Any]) -> None:
        if len(vector) != self.basis.dim:
            raise DimensionMismatchError(f"expected {self.basis.dim} coefficients, got {len(vector)}")

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def brackets(self) -> dict[tuple[int, int], Vector]:
        return dict(self._table)

    def parity(self, i: int) -> int:
        return self.basis.parity(i)

    def name(self, i: int) -> str:
        return self.basis.names[i]

    def basis_vector(self, i: int) -> Vector:
        return unit_vector(self.dim, i)

    def vector(self, coeffs: Mapping[Any, Any]) -> Vector:
        """Build a vector from {label or index: coefficient}"""
        entries = [ZERO] * self.dim
        for key, c in coeffs.items():
            k = self.basis.index(key) if isinstance(key, str) else key
            entries[k] = entries[k] + Scalar.coerce(c)
        return tuple(entries)

    def format(self, vector: Sequence[Scalar]) -> str:
        return format_vector(self.basis.names, vector)

    def structure(self, i: int, j: int) -> Vector:
        if i <= j:
            return self._table.get((i, j), tuple(ZERO for _ in range(self.dim)))
        sign = ONE if self.parity(i) and self.parity(j) else -ONE
        return tuple(sign * c for c in self.structure(j, i))

    def bracket_basis(self, i: int, j: int) -> dict[int, Scalar]:
        """Sparse [x_i, x_j]"""
        key = (i, j)
        if key not in self._sparse:
            self._sparse[key] = {k: c for k, c in enumerate(self.structure(i, j)) if c}
        return self._sparse[key]

    def bracket(self, x: Sequence[Any], y: Sequence[Any]) -> Vector:
        self._check_dim(x)
        self._check_dim(y)
        x, y = to_vector(x), to_vector(y)
        result = [ZERO] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                for k, c in self.bracket_basis(i, j).items():
                    result[k] = result[k] + a * b * c
        return tuple(result)

    def _jacobi_residual(self, i: int, j: int, k: int) -> Vector:
        e = self.basis_vector
        p = self.parity
        total = [ZERO] * self.dim
        for (a, b, c), sign_exp in (
            ((i, j, k), p(i) * p(k)),
            ((j, k, i), p(j) * p(i)),
            ((k, i, j), p(k) * p(j)),
        ):
            term = self.bracket(e(a), self.bracket(e(b), e(c)))
            sign = -ONE if sign_exp % 2 else ONE
            total = [t + sign * v for t, v in zip(total, term)]
        return tuple(total)

    def jacobi_violations(self) -> list[tuple[tuple[int, int, int], Vector]]:
        violations = []
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    residual = self._jacobi_residual(i, j, k)
                    if any(residual):
                        violations.append(((i, j, k), residual))
        return violations

    def check_jacobi(self) -> Report:
        """Super-Jacobi identity on every basis triple"""
        report = Report()
        violations = self.jacobi_violations()
        for (i, j, k), residual in violations:
            report.add(
                "liesuper",
                "jacobi",
                False,
                f"({self.name(i)},{self.name(j)},{self.name(k)}) residual {self.format(residual)}",
            )
        if not violations:
            report.add("liesuper", "jacobi", True, f"{self.dim ** 3} triples")
        logger.debug("Jacobi check: %d violated triples", len(violations))
        return report

    def odd_bracket_witness(self) -> Optional[tuple[int, int]]:
        """First odd pair with a nonzero bracket, None when [g1, g1] = 0"""
        for i in self.basis.odd_indices:
            for j in self.basis.odd_indices:
                if i <= j and (i, j) in self._table:
                    return (i, j)
        return None

    @classmethod
    def from_matrix_basis(
        cls,
        matrices: Sequence[tuple[int, Sequence[Sequence[Any]]]],
        m: int,
        n: int,
        names: Optional[Sequence[str]] = None,
    ) -> LieSuperAlgebra:
        """Structure constants of a supercommutator-closed span of gl(m|n) matrices"""
        size = m + n
        labels = list(names) if names is not None else [f"b{k + 1}" for k in range(len(matrices))]
        if len(labels) != len(matrices):
            raise DimensionMismatchError("one name per matrix is required")
        # Evens first, stable within each parity
        order = sorted(range(len(matrices)), key=lambda k: matrices[k][0])
        parities = tuple(int(matrices[k][0]) for k in order)
        mats = tuple(to_matrix(matrices[k][1]) for k in order)
        labels = [labels[k] for k in order]
        for label, mat in zip(labels, mats):
            if len(mat) != size or any(len(row) != size for row in mat):
                raise DimensionMismatchError(f"matrix {label} is not {size}x{size}")
        realization = MatrixRealization(m, n, mats)
        for label, parity, mat in zip(labels, parities, mats):
            found = realization.matrix_parity(mat)
            if found is None or (any(map(any, mat)) and found != parity):
                raise InvalidInputError(f"matrix {label} does not have parity {parity} in gl({m}|{n})")
        brackets: dict[tuple[int, int], Vector] = {}
        for i in range(len(mats)):
            for j in range(i, len(mats)):
                commutator = supercommutator(mats[i], mats[j], parities[i], parities[j])
                try:
                    brackets[(i, j)] = realization.expand(commutator)
                except SpanError:
                    raise ClosureError(
                        f"supercommutator of {labels[i]} and {labels[j]} leaves the span",
                        (labels[i], labels[j]),
                    ) from None
        logger.debug("Built structure constants for %d matrices in gl(%d|%d)", len(mats), m, n)
        return cls(SuperBasis(tuple(labels), parities), brackets, realization)


@dataclass(frozen=True)
class SuperSubspace:
    parent: LieSuperAlgebra
    span: tuple[Vector, ...]
    _basis: SpanBasis = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        span = tuple(to_vector(v) for v in self.span)
        object.__setattr__(self, "span", span)
        for v in span:
            self.parent._check_dim(v)
            if self.parent.basis.vector_parity(v) is None or not any(v):
                raise InvalidInputError(f"generator {self.parent.format(v)} is not homogeneous and nonzero")
        object.__setattr__(self, "_basis", SpanBasis(span, self.parent.dim))

    @classmethod
    def spanned(cls, parent: LieSuperAlgebra, vectors: Sequence[Sequence[Any]]) -> SuperSubspace:
        return cls(parent, tuple(to_vector(v) for v in vectors))

    @classmethod
    def odd_part(cls, parent: LieSuperAlgebra) -> SuperSubspace:
        return cls(parent, tuple(parent.basis_vector(i) for i in parent.basis.odd_indices))

    @classmethod
    def even_part(cls, parent: LieSuperAlgebra) -> SuperSubspace:
        return cls(parent, tuple(parent.basis_vector(i) for i in parent.basis.even_indices))

    @classmethod
    def whole(cls, parent: LieSuperAlgebra) -> SuperSubspace:
        return cls(parent, tuple(parent.basis_vector(i) for i in range(parent.dim)))

    @property
    def dim(self) -> int:
        return len(self.span)

    def vectors_of_parity(self, parity: int) -> tuple[Vector, ...]:
        return tuple(v for v in self.span if self.parent.basis.vector_parity(v) == parity)

    def odd(self) -> SuperSubspace:
        return SuperSubspace(self.parent, self.vectors_of_parity(1))

    def even(self) -> SuperSubspace:
        return SuperSubspace(self.parent, self.vectors_of_parity(0))

    def contains(self, vector: Sequence[Scalar]) -> bool:
        return self._basis.contains(vector)

    def coordinates(self, vector: Sequence[Scalar]) -> Vector:
        return self._basis.express(vector)

    def bracket_witness(self) -> Optional[tuple[Vector, Vector]]:
        """A generator pair whose bracket leaves the span, if any"""
        for a, x in enumerate(self.span):
            for y in self.span[a:]:
                if not self.contains(self.parent.bracket(x, y)):
                    return (x, y)
        return None

    def as_algebra(self, names: Optional[Sequence[str]] = None) -> tuple[LieSuperAlgebra, Matrix]:
        """The span as a Lie superalgebra in its own basis plus the inclusion matrix"""
        order = sorted(range(self.dim), key=lambda k: self.parent.basis.vector_parity(self.span[k]) or 0)
        generators = [self.span[k] for k in order]
        labels = (
            [names[k] for k in order]
            if names is not None
            else [self.parent.format(v) for v in generators]
        )
        parities = tuple(self.parent.basis.vector_parity(v) or 0 for v in generators)
        ordered = SuperSubspace(self.parent, tuple(generators))
        brackets: dict[tuple[int, int], Vector] = {}
        for i, x in enumerate(generators):
            for j in range(i, len(generators)):
                value = self.parent.bracket(x, generators[j])
                try:
                    brackets[(i, j)] = ordered.coordinates(value)
                except SpanError:
                    raise ClosureError(
                        f"[{labels[i]}, {labels[j]}] = {self.parent.format(value)} leaves the subalgebra",
                        (labels[i], labels[j]),
                    ) from None
        realization = None
        if self.parent.realization is not None:
            parent_real = self.parent.realization
            realization = MatrixRealization(
                parent_real.m,
                parent_real.n,
                tuple(to_matrix(parent_real.matrix_of(v)) for v in generators),
            )
        inclusion = tuple(tuple(v[r] for v in generators) for r in range(self.parent.dim))
        sub = LieSuperAlgebra(SuperBasis(tuple(labels), parities), brackets, realization)
        return sub, inclusion


@dataclass(frozen=True)
class OddQuotient:
    """g1/h1 with a chosen complement; projection acts on parent coordinates"""

    ambient: SuperSubspace
    sub: SuperSubspace
    complement: tuple[Vector, ...]
    projection: Matrix

    @property
    def dim(self) -> int:
        return len(self.complement)

    def project(self, vector: Sequence[Scalar]) -> Vector:
        if not self.ambient.contains(vector):
            raise SpanError(f"{self.ambient.parent.format(vector)} is outside the odd space")
        return tuple(linear_combination(row, vector) for row in self.projection)

    def lift(self, coords: Sequence[Scalar]) -> Vector:
        dim = self.ambient.parent.dim
        return tuple(linear_combination(coords, [c[k] for c in self.complement]) for k in range(dim))


def odd_quotient(g1: SuperSubspace, h1: SuperSubspace) -> OddQuotient:
    if g1.parent is not h1.parent:
        raise ParentMismatchError("quotient of subspaces of different algebras")
    for v in h1.span:
        if not g1.contains(v):
            raise SpanError(f"{g1.parent.format(v)} is not in the ambient subspace")
    chosen: list[Vector] = []
    for v in g1.span:
        try:
            SpanBasis(list(h1.span) + chosen + [v], g1.parent.dim)
        except DegenerateInputError:
            continue
        chosen.append(v)
    full = SpanBasis(list(h1.span) + chosen, g1.parent.dim)
    dim = g1.parent.dim
    columns = [full.coordinates(unit_vector(dim, c))[h1.dim:] for c in range(dim)]
    projection = tuple(tuple(col[r] for col in columns) for r in range(len(chosen)))
    logger.debug("Odd quotient of dimension %d", len(chosen))
    return OddQuotient(g1, h1, tuple(chosen), projection)

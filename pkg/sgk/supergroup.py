#! /usr/bin/env python3

"""Harish-Chandra pairs and the supergroup they define.

A section of the structure sheaf is a right U(g0)-module map U(g) -> F_G. It is stored
through its values on the symmetrized odd words γ(w), one coordinate-function expression
per increasing word w, and evaluated on arbitrary elements of U(g) by factorizing
u = Σ γ(w)·u_w and letting the even factor act by right-invariant derivatives:
f(u·X) = D_X f(u). Multiplication, inversion and the unit of the supergroup are realized
as pullbacks that can be evaluated on PBW monomials at exact sample points.
"""

from __future__ import annotations

import itertools
import logging
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterable, Mapping, Optional, Protocol, Sequence, Tuple

import sympy

from sgk.envelope import (
    EnvelopingAlgebra,
    ExteriorAlgebra,
    Monomial,
    Terms,
    UEAElement,
    Word,
    counit,
    exterior_power,
    hom_mul,
)
from sgk.exactnum import (
    ONE,
    ZERO,
    Jet1,
    Matrix,
    Scalar,
    Vector,
    evaluate_at,
    identity,
    inverse,
    jet_eval,
    matmul,
    matvec,
    to_matrix,
)
from sgk.exceptions import (
    ConventionError,
    DimensionMismatchError,
    InvalidInputError,
    InvalidMorphismError,
    ParentMismatchError,
)
from sgk.groupmodel import FunctionExpr, GroupModel, GroupPoint, SampleSet
from sgk.liesuper import LieSuperAlgebra
from sgk.report import Report

logger = logging.getLogger(__name__)

SUITE = "supergroup"

MatrixRows = Tuple[Tuple[Any, ...], ...]


def _add_terms(target: Terms, key: Any, coeff: Scalar) -> None:
    value = target.get(key, ZERO) + coeff
    if value:
        target[key] = value
    else:
        target.pop(key, None)


def _as_expr(value: Any) -> FunctionExpr:
    return sympy.sympify(value)


def _sign(exponent: int) -> Scalar:
    return -ONE if exponent % 2 else ONE


# Representations of the group on g


class Representation(Protocol):
    name: str

    def __call__(self, matrix: Sequence[Sequence[Any]], inverse: Sequence[Sequence[Any]]) -> MatrixRows:
        """Matrix of α(g) on the basis of g, given g and g⁻¹ over any coefficient ring"""
        ...


class Conjugation:
    """α(g)X = g X g⁻¹, the adjoint action read off the matrix realization"""

    name = "conjugation"

    def __init__(self, algebra: LieSuperAlgebra):
        if algebra.realization is None:
            raise InvalidInputError("conjugation needs a matrix realization")
        self.algebra = algebra

    def __call__(self, matrix: Sequence[Sequence[Any]], inverse: Sequence[Sequence[Any]]) -> MatrixRows:
        real = self.algebra.realization
        assert real is not None
        columns = [real.coordinates(matmul(matmul(matrix, b), inverse)) for b in real.matrices]
        n = self.algebra.dim
        return tuple(tuple(columns[j][i] for j in range(n)) for i in range(n))


class TwistedConjugation(Conjugation):
    """Conjugation with the odd block scaled by a scalar function χ(g).

    For χ not multiplicative this is not a representation; it serves as a deliberately
    broken α.
    """

    name = "twisted-conjugation"

    def __init__(self, algebra: LieSuperAlgebra, factor: FunctionExpr):
        super().__init__(algebra)
        self.factor = sympy.sympify(factor)

    def __call__(self, matrix: Sequence[Sequence[Any]], inverse: Sequence[Sequence[Any]]) -> MatrixRows:
        base = super().__call__(matrix, inverse)
        chi = evaluate_at(self.factor, matrix)
        odd = set(self.algebra.basis.odd_indices)
        return tuple(
            tuple(v * chi if j in odd else v for j, v in enumerate(row)) for row in base
        )


# Harish-Chandra pairs


class HCPair:
    """A matrix group G with a Lie superalgebra g ⊇ Lie G and an action α of G on g"""

    def __init__(
        self,
        group: GroupModel,
        alpha: Optional[Representation] = None,
        samples: Optional[SampleSet] = None,
        validate: bool = True,
        name: Optional[str] = None,
    ):
        self.group = group
        self.algebra = group.algebra
        self.env = EnvelopingAlgebra(self.algebra)
        self.ext = ExteriorAlgebra.of_odd_part(self.algebra)
        self.alpha = alpha if alpha is not None else Conjugation(self.algebra)
        self.name = name or group.name
        self._alpha_cache: dict[GroupPoint, Matrix] = {}
        self._alpha_terms: dict[tuple[GroupPoint, Monomial], Terms] = {}
        self._derived: dict[tuple[Monomial, FunctionExpr], FunctionExpr] = {}
        if validate:
            report = self.check(samples if samples is not None else SampleSet(group, []))
            if not report.passed:
                raise InvalidInputError(f"{self.name} is not a Harish-Chandra pair: {report.failures[0].line()}")

    def __repr__(self) -> str:
        return f"HCPair({self.name}, alpha={self.alpha.name})"

    # α

    def alpha_matrix(self, g: GroupPoint) -> Matrix:
        cached = self._alpha_cache.get(g)
        if cached is None:
            cached = to_matrix(self.alpha(g.matrix, inverse(g.matrix)))
            self._alpha_cache[g] = cached
        return cached

    def alpha_monomial(self, g: GroupPoint, monomial: Monomial) -> Terms:
        """α(g) extended multiplicatively to a PBW monomial"""
        key = (g, monomial)
        cached = self._alpha_terms.get(key)
        if cached is None:
            image = self.env.apply_linear(self.alpha_matrix(g), UEAElement(self.env, {monomial: ONE}))
            cached = image.terms
            self._alpha_terms[key] = cached
        return cached

    def alpha_apply(self, g: GroupPoint, u: UEAElement) -> UEAElement:
        if u.env is not self.env:
            raise ParentMismatchError("element of a different enveloping algebra")
        result: Terms = {}
        for m, c in u.terms.items():
            for n, d in self.alpha_monomial(g, m).items():
                _add_terms(result, n, c * d)
        return UEAElement(self.env, result)

    @cached_property
    def alpha_symbolic(self) -> tuple[tuple[FunctionExpr, ...], ...]:
        """α(x) with entries in the coordinate ring"""
        coords = self.group.coordinates
        rows = tuple(tuple(coords[i, j] for j in range(self.group.n)) for i in range(self.group.n))
        image = self.alpha(rows, self.group.symbolic_inverse)
        return tuple(tuple(_as_expr(v) for v in row) for row in image)

    @cached_property
    def alpha_symbolic_inverse(self) -> tuple[tuple[FunctionExpr, ...], ...]:
        """α(x⁻¹) with entries in the coordinate ring"""
        coords = self.group.coordinates
        rows = tuple(tuple(coords[i, j] for j in range(self.group.n)) for i in range(self.group.n))
        image = self.alpha(self.group.symbolic_inverse, rows)
        return tuple(tuple(_as_expr(v) for v in row) for row in image)

    def odd_block(self, matrix: Sequence[Sequence[Any]]) -> tuple[tuple[Any, ...], ...]:
        odd = self.algebra.basis.odd_indices
        return tuple(tuple(matrix[i][j] for j in odd) for i in odd)

    def check(self, samples: SampleSet) -> Report:
        """The pair conditions on α, verified on the sample points"""
        report = self.group.check()
        basis = self.algebra.basis
        n = self.algebra.dim
        mixed = []
        not_ad = []
        for g in samples:
            a = self.alpha_matrix(g)
            if any(a[i][j] for i in range(n) for j in range(n) if basis.parity(i) != basis.parity(j)):
                mixed.append(g)
            ad = self.group.ad_matrix(g)
            if any(a[i][j] != ad[i][j] for i in range(n) for j in basis.even_indices):
                not_ad.append(g)
        report.add(SUITE, f"{self.name}.alpha_parity", not mixed, _witness(len(samples), "samples", mixed))
        report.add(SUITE, f"{self.name}.alpha_restricts_to_ad", not not_ad, _witness(len(samples), "samples", not_ad))

        e = self.group.identity()
        bad_directions = []
        for k in basis.even_indices:
            direction = self.group.even_matrix(self.algebra.basis_vector(k))
            jet = self.group.jet_point(e, direction)
            image = self.alpha(jet, inverse(jet))
            derivative = [[_jet_part(image[i][j]).deriv for j in range(n)] for i in range(n)]
            expected = [[self.algebra.bracket_basis(k, j).get(i, ZERO) for j in range(n)] for i in range(n)]
            if derivative != expected:
                bad_directions.append(self.algebra.name(k))
        report.add(
            SUITE,
            f"{self.name}.alpha_differential",
            not bad_directions,
            f"{basis.n_even} even directions" + (f", differs along {bad_directions[0]}" if bad_directions else ""),
        )

        broken = []
        for g, h in samples.tuples(2):
            if self.alpha_matrix(self.group.group_mul(g, h)) != matmul(self.alpha_matrix(g), self.alpha_matrix(h)):
                broken.append(f"{g}*{h}")
        report.add(
            SUITE,
            f"{self.name}.alpha_homomorphism",
            not broken,
            f"{len(samples) ** 2} pairs" + (f", fails at {broken[0]}" if broken else ""),
        )
        return report

    # Sections

    def section(self, table: Mapping[Sequence[int], Any]) -> Section:
        return Section(self, table)

    def constant(self, value: Any) -> Section:
        return Section(self, {(): Scalar.coerce(value)})

    def one(self) -> Section:
        return self.constant(ONE)

    def zero(self) -> Section:
        return Section(self, {})

    def indicator(self, *letters: int) -> Section:
        """The section with value 1 on γ(x_{l1} ∧ ... ∧ x_{lk}) and 0 on other words"""
        return Section(self, {tuple(letters): ONE})

    def derive(self, even: Monomial, expr: FunctionExpr) -> FunctionExpr:
        """D_{e_k} ∘ ... ∘ D_{e_1} applied to expr for even = e_1 ... e_k"""
        key = (even, expr)
        cached = self._derived.get(key)
        if cached is None:
            cached = expr
            for letter in even:
                cached = self.group.riv_derive(self.algebra.basis_vector(letter), cached)
            self._derived[key] = cached
        return cached

    def words(self, degree: Optional[int] = None) -> list[Word]:
        return self.ext.words(degree)


def _jet_part(value: Any) -> Jet1:
    return value if isinstance(value, Jet1) else Jet1.constant(value)


def _witness(total: int, what: str, bad: Sequence[Any]) -> str:
    detail = f"{total} {what}"
    if bad:
        detail += f", fails at {bad[0]}"
    return detail


class Section:
    """An element of O(G): f(γ(w)) for every increasing odd word w"""

    def __init__(self, pair: HCPair, table: Mapping[Sequence[int], Any]):
        self.pair = pair
        entries: dict[Word, FunctionExpr] = {}
        for word, value in table.items():
            w = pair.ext.check_word(word)
            expr = _as_expr(value)
            if expr != 0:
                entries[w] = expr
        self.table = entries
        self._values: dict[Monomial, FunctionExpr] = {}
        self._evaluated: dict[tuple[Monomial, GroupPoint], Scalar] = {}

    def _same(self, other: Section) -> None:
        if other.pair is not self.pair:
            raise ParentMismatchError("sections over different pairs")

    def __add__(self, other: Section) -> Section:
        self._same(other)
        table = dict(self.table)
        for w, v in other.table.items():
            table[w] = table[w] + v if w in table else v
        return Section(self.pair, table)

    def __neg__(self) -> Section:
        return Section(self.pair, {w: -v for w, v in self.table.items()})

    def __sub__(self, other: Section) -> Section:
        return self + (-other)

    def scale(self, factor: Any) -> Section:
        c = _as_expr(factor)
        return Section(self.pair, {w: c * v for w, v in self.table.items()})

    def __mul__(self, other: Section) -> Section:
        return section_mul(self, other)

    def __str__(self) -> str:
        if not self.table:
            return "0"
        return ", ".join(f"{self.pair.ext.monomial_name(w)}: {v}" for w, v in sorted(self.table.items()))

    def __repr__(self) -> str:
        return f"Section({self})"

    # Grading

    @property
    def degrees(self) -> set[int]:
        return {len(w) for w in self.table}

    def parity(self) -> Optional[int]:
        """Common parity of the table words, None when mixed"""
        found = {len(w) % 2 for w in self.table}
        if len(found) > 1:
            return None
        return found.pop() if found else 0

    def homogeneous_parts(self) -> dict[int, Section]:
        parts: dict[int, dict[Word, FunctionExpr]] = {}
        for w, v in self.table.items():
            parts.setdefault(len(w) % 2, {})[w] = v
        return {p: Section(self.pair, t) for p, t in parts.items()}

    # Evaluation

    def value_monomial(self, monomial: Monomial) -> FunctionExpr:
        """f(m) as a coordinate function"""
        cached = self._values.get(monomial)
        if cached is not None:
            return cached
        result: FunctionExpr = sympy.Integer(0)
        for word, evens in self.pair.env.factorize_monomial(monomial, "right").items():
            base = self.table.get(word)
            if base is None:
                continue
            for even, c in evens.items():
                result = result + _as_expr(c) * self.pair.derive(even, base)
        self._values[monomial] = result
        return result

    def value(self, u: UEAElement) -> FunctionExpr:
        if u.env is not self.pair.env:
            raise ParentMismatchError("argument is not in the enveloping algebra of the pair")
        result: FunctionExpr = sympy.Integer(0)
        for m, c in u.terms.items():
            result = result + _as_expr(c) * self.value_monomial(m)
        return result

    def evaluate_monomial(self, monomial: Monomial, g: GroupPoint) -> Scalar:
        key = (monomial, g)
        cached = self._evaluated.get(key)
        if cached is None:
            cached = self.pair.group.eval_expr(self.value_monomial(monomial), g)
            self._evaluated[key] = cached
        return cached

    def evaluate(self, u: UEAElement, g: GroupPoint) -> Scalar:
        if u.env is not self.pair.env:
            raise ParentMismatchError("argument is not in the enveloping algebra of the pair")
        total = ZERO
        for m, c in u.terms.items():
            total = total + c * self.evaluate_monomial(m, g)
        return total

    def equals(self, other: Section, samples: Iterable[GroupPoint]) -> bool:
        """Equality of tables, entry by entry, on the sample points extended until they
        distinguish functions of the entries' degree"""
        self._same(other)
        points = list(samples)
        group = self.pair.group
        zero = sympy.Integer(0)
        return all(
            group.expression_equal(self.table.get(w, zero), other.table.get(w, zero), points)
            for w in sorted(set(self.table) | set(other.table))
        )


def section_eval(f: Section, u: UEAElement, g: GroupPoint) -> Scalar:
    return f.evaluate(u, g)


def section_mul(f1: Section, f2: Section) -> Section:
    """Mult ∘ (f1 ⊗ f2) ∘ Δ, read off the tables through the shuffle coproduct of ⋀g1"""
    f1._same(f2)
    return Section(f1.pair, hom_mul(f1.table, f2.table))


def grading_project(f: Section, p: int) -> Section:
    return Section(f.pair, {w: v for w, v in f.table.items() if len(w) == p})


def random_section(
    pair: HCPair,
    rng: random.Random,
    degree: Optional[int] = None,
    poly_degree: int = 1,
    bound: int = 2,
) -> Section:
    """A section whose entries are random polynomials in the free coordinates"""
    symbols = pair.group.free_symbols
    monomials: list[FunctionExpr] = [sympy.Integer(1)]
    for k in range(1, poly_degree + 1):
        for combo in itertools.combinations_with_replacement(symbols, k):
            monomials.append(sympy.Mul(*combo))
    table = {}
    for w in pair.words(degree):
        table[w] = sympy.Add(*(rng.randint(-bound, bound) * m for m in monomials))
    return Section(pair, table)


# Pullbacks to G x ... x G


class MultiSection(ABC):
    """A section over G^n, evaluated on tensors of PBW monomials at tuples of points"""

    def __init__(self, pair: HCPair, arity: int):
        self.pair = pair
        self.arity = arity
        self._cache: dict[tuple[tuple[Monomial, ...], tuple[GroupPoint, ...]], Scalar] = {}

    def at(self, monomials: Sequence[Monomial], points: Sequence[GroupPoint]) -> Scalar:
        if len(monomials) != self.arity or len(points) != self.arity:
            raise DimensionMismatchError(f"expected {self.arity} arguments")
        key = (tuple(monomials), tuple(points))
        cached = self._cache.get(key)
        if cached is None:
            cached = self._compute(key[0], key[1])
            self._cache[key] = cached
        return cached

    @abstractmethod
    def _compute(self, monomials: tuple[Monomial, ...], points: tuple[GroupPoint, ...]) -> Scalar: ...

    def evaluate_terms(self, slots: Sequence[Mapping[Monomial, Scalar]], points: Sequence[GroupPoint]) -> Scalar:
        """Multilinear extension of at()"""
        if len(slots) != self.arity:
            raise DimensionMismatchError(f"expected {self.arity} tensor factors")
        total = ZERO
        for combo in itertools.product(*(list(s.items()) for s in slots)):
            coeff = ONE
            for _, c in combo:
                coeff = coeff * c
            total = total + coeff * self.at(tuple(m for m, _ in combo), points)
        return total

    def evaluate(self, slots: Sequence[UEAElement], points: Sequence[GroupPoint]) -> Scalar:
        for u in slots:
            if u.env is not self.pair.env:
                raise ParentMismatchError("argument is not in the enveloping algebra of the pair")
        return self.evaluate_terms([u.terms for u in slots], points)


class SectionPullback(MultiSection):
    def __init__(self, f: Section):
        super().__init__(f.pair, 1)
        self.section = f

    def _compute(self, monomials: tuple[Monomial, ...], points: tuple[GroupPoint, ...]) -> Scalar:
        return self.section.evaluate_monomial(monomials[0], points[0])


class MergedSlot(MultiSection):
    """(id × μ × id)*: slots i, i+1 feed X·α(g)(Y) at gh into slot i of the inner section"""

    def __init__(self, inner: MultiSection, slot: int):
        if not 0 <= slot < inner.arity:
            raise InvalidInputError(f"no slot {slot} in a section of arity {inner.arity}")
        super().__init__(inner.pair, inner.arity + 1)
        self.inner = inner
        self.slot = slot

    def _compute(self, monomials: tuple[Monomial, ...], points: tuple[GroupPoint, ...]) -> Scalar:
        i = self.slot
        x, y = monomials[i], monomials[i + 1]
        g, h = points[i], points[i + 1]
        env = self.pair.env
        merged: Terms = {}
        for n, d in self.pair.alpha_monomial(g, y).items():
            for m, e in env.mul_monomials(x, n).items():
                _add_terms(merged, m, d * e)
        slots = [{m: ONE} for m in monomials[:i]] + [merged] + [{m: ONE} for m in monomials[i + 2 :]]
        merged_points = points[:i] + (self.pair.group.group_mul(g, h),) + points[i + 2 :]
        return self.inner.evaluate_terms(slots, merged_points)


class InverseSlot(MultiSection):
    """(id × ι × id)*: slot i receives α(g⁻¹)(S(X)) at g⁻¹"""

    def __init__(self, inner: MultiSection, slot: int):
        if not 0 <= slot < inner.arity:
            raise InvalidInputError(f"no slot {slot} in a section of arity {inner.arity}")
        super().__init__(inner.pair, inner.arity)
        self.inner = inner
        self.slot = slot

    def _compute(self, monomials: tuple[Monomial, ...], points: tuple[GroupPoint, ...]) -> Scalar:
        i = self.slot
        g_inv = self.pair.group.group_inv(points[i])
        image: Terms = {}
        for n, d in self.pair.env.antipode_monomial(monomials[i]).items():
            for m, e in self.pair.alpha_monomial(g_inv, n).items():
                _add_terms(image, m, d * e)
        slots = [{m: ONE} for m in monomials[:i]] + [image] + [{m: ONE} for m in monomials[i + 1 :]]
        return self.inner.evaluate_terms(slots, points[:i] + (g_inv,) + points[i + 1 :])


class UnitSlot(MultiSection):
    """The unit e inserted as slot i of the inner section (argument 1 there)"""

    def __init__(self, inner: MultiSection, slot: int):
        if not 0 <= slot < inner.arity:
            raise InvalidInputError(f"no slot {slot} in a section of arity {inner.arity}")
        super().__init__(inner.pair, inner.arity - 1)
        self.inner = inner
        self.slot = slot

    def _compute(self, monomials: tuple[Monomial, ...], points: tuple[GroupPoint, ...]) -> Scalar:
        i = self.slot
        return self.inner.at(
            monomials[:i] + ((),) + monomials[i:], points[:i] + (self.pair.group.identity(),) + points[i:]
        )


class CounitSlot(MultiSection):
    """A new slot i that the inner section ignores: its argument only enters through ε"""

    def __init__(self, inner: MultiSection, slot: int):
        if not 0 <= slot <= inner.arity:
            raise InvalidInputError(f"cannot add slot {slot} to a section of arity {inner.arity}")
        super().__init__(inner.pair, inner.arity + 1)
        self.inner = inner
        self.slot = slot

    def _compute(self, monomials: tuple[Monomial, ...], points: tuple[GroupPoint, ...]) -> Scalar:
        i = self.slot
        if monomials[i]:
            return ZERO
        return self.inner.at(monomials[:i] + monomials[i + 1 :], points[:i] + points[i + 1 :])


class DiagonalSlot(MultiSection):
    """(id × diag × id)*: the argument of slot i is split by Δ over slots i, i+1 at (g, g)"""

    def __init__(self, inner: MultiSection, slot: int):
        if not 0 <= slot < inner.arity - 1:
            raise InvalidInputError(f"no slot pair at {slot} in a section of arity {inner.arity}")
        super().__init__(inner.pair, inner.arity - 1)
        self.inner = inner
        self.slot = slot

    def _compute(self, monomials: tuple[Monomial, ...], points: tuple[GroupPoint, ...]) -> Scalar:
        i = self.slot
        total = ZERO
        for (m1, m2), c in self.pair.env.coproduct_monomial(monomials[i]).items():
            value = self.inner.at(
                monomials[:i] + (m1, m2) + monomials[i + 1 :], points[:i] + (points[i], points[i]) + points[i + 1 :]
            )
            total = total + c * value
        return total


class ProductPullback(MultiSection):
    """The product of two sections over G^n under the Koszul sign rule"""

    def __init__(self, left: MultiSection, right: MultiSection):
        if left.pair is not right.pair or left.arity != right.arity:
            raise ParentMismatchError("product of sections over different spaces")
        super().__init__(left.pair, left.arity)
        self.left = left
        self.right = right

    def _compute(self, monomials: tuple[Monomial, ...], points: tuple[GroupPoint, ...]) -> Scalar:
        env = self.pair.env
        splits = [list(env.coproduct_monomial(m).items()) for m in monomials]
        total = ZERO
        for combo in itertools.product(*splits):
            firsts = tuple(key[0] for key, _ in combo)
            seconds = tuple(key[1] for key, _ in combo)
            a = self.left.at(firsts, points)
            if not a:
                continue
            b = self.right.at(seconds, points)
            if not b:
                continue
            p1 = [env.monomial_parity(m) for m in firsts]
            p2 = [env.monomial_parity(m) for m in seconds]
            # regroup (u1'⊗u1'')⊗...⊗(un'⊗un'') as (u1'⊗...)⊗(u1''⊗...), then the product sign
            exponent = sum(p1[i] * p2[j] for i in range(self.arity) for j in range(i)) + sum(p1) * sum(p2)
            coeff = _sign(exponent)
            for _, c in combo:
                coeff = coeff * c
            total = total + coeff * a * b
        return total


class ProjectionPullback(MultiSection):
    """pr_i*(f): f on slot i, the counit on every other slot"""

    def __init__(self, f: Section, slot: int, arity: int):
        if not 0 <= slot < arity:
            raise InvalidInputError(f"no slot {slot} among {arity}")
        super().__init__(f.pair, arity)
        self.section = f
        self.slot = slot

    def _compute(self, monomials: tuple[Monomial, ...], points: tuple[GroupPoint, ...]) -> Scalar:
        if any(m for k, m in enumerate(monomials) if k != self.slot):
            return ZERO
        return self.section.evaluate_monomial(monomials[self.slot], points[self.slot])


def mu_star(f: Section) -> MultiSection:
    """μ*(f)(X⊗Y)(g,h) = f(X·α(g)(Y))(gh)"""
    return MergedSlot(SectionPullback(f), 0)


def mu_star_eval(f: Section, x: UEAElement, y: UEAElement, g: GroupPoint, h: GroupPoint) -> Scalar:
    return mu_star(f).evaluate([x, y], [g, h])


def pr_star(f: Section, slot: int, arity: int = 2) -> MultiSection:
    return ProjectionPullback(f, slot, arity)


def iota_star(f: Section) -> Section:
    """ι*(f) as a table: (-1)^|w| Σ_w' [⋀α(x⁻¹)]_{w',w} f(γ(w'))(x⁻¹)"""
    pair = f.pair
    group = pair.group
    odd = list(pair.algebra.basis.odd_indices)
    block = pair.odd_block(pair.alpha_symbolic_inverse)
    pulled = {w: group.substitute(v, group.symbolic_inverse) for w, v in f.table.items()}
    table: dict[Word, FunctionExpr] = {}
    for k in range(len(odd) + 1):
        minors = exterior_power(block, k)
        for (rows, cols), minor in minors.items():
            source = tuple(odd[r] for r in rows)
            if source not in pulled:
                continue
            target = tuple(odd[c] for c in cols)
            term = _as_expr(minor) * pulled[source]
            if k % 2:
                term = -term
            table[target] = table[target] + term if target in table else term
    return Section(pair, table)


def iota_star_eval(f: Section, u: UEAElement, g: GroupPoint) -> Scalar:
    """ι*(f)(u)(g) = f(α(g⁻¹)(S(u)))(g⁻¹), evaluated directly"""
    return InverseSlot(SectionPullback(f), 0).evaluate([u], [g])


def eps_star(f: Section) -> Scalar:
    return f.evaluate_monomial((), f.pair.group.identity())


# Translations and fields


def translate(f: Section, g: GroupPoint, side: str = "left") -> Section:
    """l_g*(f)(u)(x) = f(α(g)u)(gx) and r_g*(f)(u)(x) = f(u)(xg)"""
    pair = f.pair
    group = pair.group
    group.validate(g)
    coords = group.coordinates
    if side == "right":
        moved = sympy.Matrix(coords) * sympy.Matrix(g.matrix)
        return Section(pair, {w: group.substitute(v, moved.tolist()) for w, v in f.table.items()})
    if side != "left":
        raise InvalidInputError(f"unknown translation side {side!r}")
    moved = sympy.Matrix(g.matrix) * sympy.Matrix(coords)
    table: dict[Word, FunctionExpr] = {}
    for w in pair.words():
        image = pair.alpha_apply(g, UEAElement(pair.env, pair.env.gamma_word(w)))
        value = f.value(image)
        if value != 0:
            table[w] = group.substitute(value, moved.tolist())
    return Section(pair, table)


def conjugate(f: Section, g: GroupPoint) -> Section:
    """ω_g*(f) for ω_g(x) = g x g⁻¹"""
    return translate(translate(f, g, "left"), f.pair.group.group_inv(g), "right")


def ad_from_translations(pair: HCPair, g: GroupPoint) -> Matrix:
    """(dω_g)_e read off translated coordinate and indicator sections, checked against conjugation"""
    group = pair.group
    algebra = pair.algebra
    real = algebra.realization
    assert real is not None
    n = algebra.dim
    e = group.identity()
    coords = group.coordinates
    shifted = [[coords[i, j] - (1 if i == j else 0) for j in range(group.n)] for i in range(group.n)]
    linear = real.coordinates(shifted)
    columns: list[list[Scalar]] = [[ZERO] * n for _ in range(n)]
    for k in range(n):
        if algebra.parity(k):
            start = pair.indicator(k)
        else:
            start = Section(pair, {(): linear[k]})
        moved = conjugate(start, g)
        for j in range(n):
            if algebra.parity(j):
                value = moved.table.get((j,))
                columns[j][k] = group.eval_expr(value, e) if value is not None else ZERO
            else:
                value = moved.table.get(())
                if value is None:
                    continue
                jet = group.jet_point(e, group.even_matrix(algebra.basis_vector(j)))
                columns[j][k] = jet_eval(value, jet).deriv
    result = tuple(tuple(columns[j][i] for j in range(n)) for i in range(n))
    expected = group.ad_matrix(g)
    if result != expected:
        raise ConventionError(f"(dω_g)_e and Ad(g) disagree at g = {g}")
    return result


def field_apply(pair: HCPair, x: Sequence[Any], f: Section) -> Section:
    """The right-invariant field of X: field_X(f)(u) = (-1)^{p(X)p(f)} f(X·u)"""
    if f.pair is not pair:
        raise ParentMismatchError("section over a different pair")
    vector = [Scalar.coerce(c) for c in x]
    if len(vector) != pair.algebra.dim:
        raise DimensionMismatchError("field direction has the wrong length")
    basis = pair.algebra.basis
    table: dict[Word, FunctionExpr] = {}
    for p in (0, 1):
        part = [c if basis.parity(k) == p else ZERO for k, c in enumerate(vector)]
        if not any(part):
            continue
        xu = pair.env.from_vector(part)
        for w in pair.words():
            value = f.value(xu * UEAElement(pair.env, pair.env.gamma_word(w)))
            if value == 0:
                continue
            if p * (p + len(w)) % 2:
                value = -value
            table[w] = table[w] + value if w in table else value
    return Section(pair, table)


def iterated_field_formula(
    pair: HCPair, fields: Sequence[Sequence[Any]], f: Section, u: UEAElement, h: GroupPoint
) -> Scalar:
    """Y1(...Yq(f))(u)(h) through (μ^q)*(f)(Yq ⊗ ... ⊗ Y1 ⊗ u)(e, ..., e, h).

    The sign is (-1)^{A + p(f)p(Y1...Yq)} with A = Σ_{i<j} p(Yi)p(Yj).
    """
    pf = f.parity()
    if pf is None:
        raise InvalidInputError("the iterated field formula needs a homogeneous section")
    parities = []
    for y in fields:
        p = pair.algebra.basis.vector_parity([Scalar.coerce(c) for c in y])
        if p is None:
            raise InvalidInputError("the iterated field formula needs homogeneous fields")
        parities.append(p)
    a = sum(parities[i] * parities[j] for i in range(len(parities)) for j in range(i + 1, len(parities)))
    exponent = a + pf * sum(parities)
    pullback: MultiSection = SectionPullback(f)
    for _ in fields:
        pullback = MergedSlot(pullback, 0)
    slots = [pair.env.from_vector(y) for y in reversed(fields)] + [u]
    points = [pair.group.identity()] * len(fields) + [h]
    return _sign(exponent) * pullback.evaluate(slots, points)


# Group axioms


def _monomial_tuples(env: EnvelopingAlgebra, arity: int, degree: int) -> list[tuple[Monomial, ...]]:
    """Tuples of PBW monomials with total degree at most degree"""
    monomials = env.monomials(degree)
    return [t for t in itertools.product(monomials, repeat=arity) if sum(len(m) for m in t) <= degree]


def _first_difference(
    lhs: MultiSection,
    rhs: MultiSection,
    tuples: Sequence[tuple[Monomial, ...]],
    points: Iterable[tuple[GroupPoint, ...]],
) -> Optional[str]:
    env = lhs.pair.env
    point_tuples = list(points)
    for monos in tuples:
        for pts in point_tuples:
            if lhs.at(monos, pts) != rhs.at(monos, pts):
                names = "⊗".join(env.monomial_name(m) for m in monos)
                return f"{names} at ({', '.join(map(str, pts))})"
    return None


def _add_comparison(
    report: Report,
    check: str,
    lhs: MultiSection,
    rhs: MultiSection,
    tuples: Sequence[tuple[Monomial, ...]],
    samples: SampleSet,
) -> None:
    points = list(samples.tuples(lhs.arity))
    witness = _first_difference(lhs, rhs, tuples, points)
    detail = f"{len(tuples)} monomial tuples x {len(points)} point tuples"
    report.add(SUITE, check, witness is None, detail if witness is None else f"{detail}, differs on {witness}")


def projection_check(
    f: Section,
    samples: SampleSet,
    degree: int,
    pulled: Optional[Sequence[MultiSection]] = None,
) -> Report:
    """pr_i*(f)(u0⊗u1)(g0, g1) = f(u_i)(g_i) ε(u_j), against direct evaluation of f

    The slot that is projected away carries the monomial plus 1, so its counit is never zero.
    """
    env = f.pair.env
    tuples = _monomial_tuples(env, 2, degree)
    points = list(samples.tuples(2))
    report = Report()
    for slot, side in ((0, "left"), (1, "right")):
        pr = pulled[slot] if pulled is not None else ProjectionPullback(f, slot, 2)
        witness = None
        for monos in tuples:
            args = [
                env.element({m: ONE}) if k == slot else env.element({m: ONE}) + env.one()
                for k, m in enumerate(monos)
            ]
            scale = counit(args[1 - slot])
            for pts in points:
                lhs = pr.evaluate(args, pts)
                rhs = f.evaluate(args[slot], pts[slot]) * scale
                if lhs != rhs:
                    witness = f"{' ⊗ '.join(env.monomial_name(m) for m in monos)} at {pts}: {lhs} != {rhs}"
                    break
            if witness is not None:
                break
        detail = f"{len(tuples)} monomial pairs x {len(points)} point pairs"
        report.add(SUITE, f"projection_{side}", witness is None, detail if witness is None else f"{detail}, {witness}")
    return report


def group_axiom_check(
    pair: HCPair,
    samples: SampleSet,
    degree: int,
    rng: Optional[random.Random] = None,
) -> Report:
    """Associativity, unit and inverse laws of the supergroup as identities of pullbacks

    The pullbacks are those of a random section, so a passing report is an instance check.
    """
    if degree < 1:
        raise InvalidInputError("degree bound must be at least 1")
    rng = rng or random.Random(0)
    env = pair.env
    report = samples.closure_check()
    single = _monomial_tuples(env, 1, degree)
    triple = _monomial_tuples(env, 3, degree)
    f = random_section(pair, rng)
    base = SectionPullback(f)
    mu = MergedSlot(base, 0)
    logger.debug("group axioms on %s", f)
    _add_comparison(report, "associativity", MergedSlot(mu, 0), MergedSlot(mu, 1), triple, samples)
    _add_comparison(report, "left_unit", UnitSlot(mu, 0), base, single, samples)
    _add_comparison(report, "right_unit", UnitSlot(mu, 1), base, single, samples)
    constant = CounitSlot(UnitSlot(base, 0), 0)
    _add_comparison(report, "left_inverse", DiagonalSlot(InverseSlot(mu, 0), 0), constant, single, samples)
    _add_comparison(report, "right_inverse", DiagonalSlot(InverseSlot(mu, 1), 0), constant, single, samples)
    report.extend(projection_check(f, samples, degree))
    _add_comparison(report, "antipode_table", SectionPullback(iota_star(f)), InverseSlot(base, 0), single, samples)

    # μ* and ι* are algebra maps
    odd_degree = max(len(pair.algebra.basis.odd_indices), 1)
    f1, f2 = random_section(pair, rng), random_section(pair, rng)
    product_tuples = _monomial_tuples(env, 2, odd_degree)
    _add_comparison(
        report,
        "mu_star_multiplicative",
        MergedSlot(SectionPullback(f1 * f2), 0),
        ProductPullback(MergedSlot(SectionPullback(f1), 0), MergedSlot(SectionPullback(f2), 0)),
        product_tuples,
        samples,
    )
    product = iota_star(f1) * iota_star(f2)
    report.add(
        SUITE,
        "iota_star_multiplicative",
        iota_star(f1 * f2).equals(product, samples),
        f"{len(samples)} samples",
    )
    return report


# Grading and the split criterion


@dataclass
class SplitVerdict:
    split: bool
    witness: Optional[tuple[int, int]]
    report: Report = field(default_factory=Report)


def split_check(
    pair: HCPair, samples: Optional[SampleSet] = None, rng: Optional[random.Random] = None
) -> SplitVerdict:
    """Split iff [g1, g1] = 0; for split pairs μ* is checked to preserve the Z-grading"""
    algebra = pair.algebra
    witness = algebra.odd_bracket_witness()
    report = Report()
    if witness is not None:
        i, j = witness
        report.add(
            SUITE,
            f"{pair.name}.split",
            False,
            f"[{algebra.name(i)}, {algebra.name(j)}] = {algebra.format(algebra.structure(i, j))}",
        )
        return SplitVerdict(False, witness, report)
    report.add(SUITE, f"{pair.name}.split", True, f"[g1, g1] = 0 on {len(algebra.basis.odd_indices)} odd generators")
    samples = samples if samples is not None else SampleSet(pair.group, [])
    rng = rng or random.Random(0)
    env = pair.env
    words = pair.words()
    gammas = {w: env.gamma_word(w) for w in words}
    points = list(samples.tuples(2))
    bad = None
    checked = 0
    for p in range(len(algebra.basis.odd_indices) + 1):
        mu = mu_star(random_section(pair, rng, degree=p))
        for w1, w2 in itertools.product(words, repeat=2):
            if len(w1) + len(w2) == p:
                continue
            for pts in points:
                checked += 1
                if mu.evaluate_terms([gammas[w1], gammas[w2]], pts):
                    bad = bad or f"degree {p} section on {pair.ext.monomial_name(w1)}⊗{pair.ext.monomial_name(w2)}"
    report.add(
        SUITE,
        f"{pair.name}.grading_preserved",
        bad is None,
        f"{checked} evaluations" + (f", nonzero for {bad}" if bad else ""),
    )
    return SplitVerdict(True, None, report)


# Morphisms


class GroupHom:
    """A homomorphism of matrix groups given by a matrix map that works over any ring"""

    def __init__(
        self,
        source: GroupModel,
        target: GroupModel,
        fn: Callable[[Sequence[Sequence[Any]]], Sequence[Sequence[Any]]],
        name: str = "Φ",
    ):
        self.source = source
        self.target = target
        self.fn = fn
        self.name = name

    @classmethod
    def inclusion(cls, source: GroupModel, target: GroupModel) -> GroupHom:
        if source.n != target.n:
            raise DimensionMismatchError("inclusion between groups of different matrix size")
        return cls(source, target, lambda m: m, f"{source.name}→{target.name}")

    @classmethod
    def identity(cls, model: GroupModel) -> GroupHom:
        return cls(model, model, lambda m: m, f"id_{model.name}")

    def apply(self, matrix: Sequence[Sequence[Any]]) -> tuple[tuple[Any, ...], ...]:
        return tuple(tuple(row) for row in self.fn(matrix))

    def __call__(self, g: GroupPoint) -> GroupPoint:
        return self.target.validate(GroupPoint(to_matrix(self.apply(g.matrix))))

    @cached_property
    def symbolic(self) -> tuple[tuple[FunctionExpr, ...], ...]:
        coords = self.source.coordinates
        rows = tuple(tuple(coords[i, j] for j in range(self.source.n)) for i in range(self.source.n))
        return tuple(tuple(_as_expr(v) for v in row) for row in self.apply(rows))

    def compose(self, inner: GroupHom) -> GroupHom:
        """self ∘ inner"""
        if inner.target is not self.source:
            raise ParentMismatchError("composition of non-matching group maps")
        return GroupHom(inner.source, self.target, lambda m: self.fn(inner.fn(m)), f"{self.name}∘{inner.name}")


class HCMorphism:
    """A morphism (Φ, φ) of Harish-Chandra pairs and its pullback on sections"""

    def __init__(
        self,
        source: HCPair,
        target: HCPair,
        group_map: GroupHom,
        algebra_map: Sequence[Sequence[Any]],
        samples: Optional[SampleSet] = None,
        validate: bool = True,
        name: str = "Ψ",
    ):
        if group_map.source is not source.group or group_map.target is not target.group:
            raise ParentMismatchError("group map does not match the pairs")
        phi = to_matrix(algebra_map)
        if len(phi) != target.algebra.dim or any(len(row) != source.algebra.dim for row in phi):
            raise DimensionMismatchError(
                f"algebra map must be {target.algebra.dim}x{source.algebra.dim}"
            )
        self.source = source
        self.target = target
        self.group_map = group_map
        self.phi = phi
        self.name = name
        self._images: dict[Monomial, Terms] = {}
        if validate:
            report = self.check(samples if samples is not None else SampleSet(source.group, []))
            if not report.passed:
                raise InvalidMorphismError(f"{name} is not a morphism of pairs", report)

    @classmethod
    def identity(cls, pair: HCPair) -> HCMorphism:
        return cls(pair, pair, GroupHom.identity(pair.group), identity(pair.algebra.dim), name=f"id_{pair.name}")

    def compose(self, inner: HCMorphism) -> HCMorphism:
        """self ∘ inner"""
        if inner.target is not self.source:
            raise ParentMismatchError("composition of non-matching morphisms")
        return HCMorphism(
            inner.source,
            self.target,
            self.group_map.compose(inner.group_map),
            matmul(self.phi, inner.phi),
            validate=False,
            name=f"{self.name}∘{inner.name}",
        )

    def column(self, i: int) -> Vector:
        return tuple(row[i] for row in self.phi)

    def perturbed(self, i: int, delta: Sequence[Any]) -> HCMorphism:
        """The same group map with φ(x_i) shifted by delta, left unvalidated"""
        if len(delta) != self.target.algebra.dim:
            raise DimensionMismatchError(f"shift must have {self.target.algebra.dim} coefficients")
        phi = [list(row) for row in self.phi]
        for k, d in enumerate(delta):
            phi[k][i] = phi[k][i] + Scalar.coerce(d)
        return HCMorphism(self.source, self.target, self.group_map, phi, validate=False, name=f"{self.name}'")

    def image_monomial(self, monomial: Monomial) -> Terms:
        """φ extended to U(g) -> U(h) on a PBW monomial"""
        cached = self._images.get(monomial)
        if cached is None:
            u = UEAElement(self.source.env, {monomial: ONE})
            cached = self.source.env.apply_linear(self.phi, u, self.target.env).terms
            self._images[monomial] = cached
        return cached

    def image(self, u: UEAElement) -> UEAElement:
        result: Terms = {}
        for m, c in u.terms.items():
            for n, d in self.image_monomial(m).items():
                _add_terms(result, n, c * d)
        return UEAElement(self.target.env, result)

    def check(self, samples: SampleSet) -> Report:
        report = Report()
        src, tgt = self.source.algebra, self.target.algebra
        wrong_parity = [
            src.name(i)
            for i in range(src.dim)
            if any(c for c in self.column(i)) and tgt.basis.vector_parity(self.column(i)) != src.parity(i)
        ]
        report.add(SUITE, f"{self.name}.phi_parity", not wrong_parity, _witness(src.dim, "generators", wrong_parity))
        broken = []
        for i in range(src.dim):
            for j in range(i, src.dim):
                lhs = matvec(self.phi, src.structure(i, j))
                rhs = tgt.bracket(self.column(i), self.column(j))
                if tuple(lhs) != tuple(rhs):
                    broken.append(f"[{src.name(i)}, {src.name(j)}]")
        pairs = src.dim * (src.dim + 1) // 2
        report.add(SUITE, f"{self.name}.phi_bracket", not broken, _witness(pairs, "pairs", broken))

        e = self.source.group.identity()
        bad_tangent = []
        if self.group_map(e) != self.target.group.identity():
            bad_tangent.append("Φ(e)")
        tgt_real = tgt.realization
        assert tgt_real is not None
        for k in src.basis.even_indices:
            jet = self.source.group.jet_point(e, self.source.group.even_matrix(src.basis_vector(k)))
            moved = self.group_map.apply(jet)
            derivative = to_matrix([[_jet_part(v).deriv for v in row] for row in moved])
            if derivative != to_matrix(tgt_real.matrix_of(self.column(k))):
                bad_tangent.append(src.name(k))
        report.add(
            SUITE,
            f"{self.name}.differential",
            not bad_tangent,
            _witness(src.basis.n_even, "even directions", bad_tangent),
        )

        not_hom = []
        not_equivariant = []
        for g, h in samples.tuples(2):
            if self.group_map(self.source.group.group_mul(g, h)) != self.target.group.group_mul(
                self.group_map(g), self.group_map(h)
            ):
                not_hom.append(f"{g}*{h}")
        for g in samples:
            lhs = matmul(self.phi, self.source.alpha_matrix(g))
            rhs = matmul(self.target.alpha_matrix(self.group_map(g)), self.phi)
            if lhs != rhs:
                not_equivariant.append(g)
        report.add(SUITE, f"{self.name}.group_homomorphism", not not_hom, _witness(len(samples) ** 2, "pairs", not_hom))
        report.add(
            SUITE, f"{self.name}.equivariance", not not_equivariant, _witness(len(samples), "samples", not_equivariant)
        )
        return report

    def pullback(self, f: Section) -> Section:
        """Ψ*(f)(X)(g) = f(φ(X))(Φ(g)) as a table over the source pair"""
        if f.pair is not self.target:
            raise ParentMismatchError("section is not over the target pair")
        table: dict[Word, FunctionExpr] = {}
        for w in self.source.words():
            value = f.value(self.image(UEAElement(self.source.env, self.source.env.gamma_word(w))))
            if value != 0:
                table[w] = self.target.group.substitute(value, self.group_map.symbolic)
        return Section(self.source, table)

    def evaluate_pullback(self, f: Section, u: UEAElement, g: GroupPoint) -> Scalar:
        return f.evaluate(self.image(u), self.group_map(g))

    def mu_compatibility_check(self, samples: SampleSet, degree: int, rng: Optional[random.Random] = None) -> Report:
        """μ_G*(Ψ*f) = (Ψ×Ψ)*(μ_H* f) on monomial pairs and sample pairs"""
        rng = rng or random.Random(0)
        f = random_section(self.target, rng)
        lhs = mu_star(self.pullback(f))
        rhs = mu_star(f)
        tuples = _monomial_tuples(self.source.env, 2, degree)
        bad = None
        count = 0
        for x, y in tuples:
            for g, h in samples.tuples(2):
                count += 1
                left = lhs.at((x, y), (g, h))
                right = rhs.evaluate_terms(
                    [self.image_monomial(x), self.image_monomial(y)], [self.group_map(g), self.group_map(h)]
                )
                if left != right and bad is None:
                    env = self.source.env
                    bad = f"{env.monomial_name(x)}⊗{env.monomial_name(y)} at ({g}, {h})"
        report = Report()
        detail = f"{count} evaluations" + (f", differs on {bad}" if bad else "")
        report.add(SUITE, f"{self.name}.mu_compatible", bad is None, detail)
        return report


def hcp_morphism_apply(m: HCMorphism, f: Section) -> Section:
    return m.pullback(f)


@dataclass(frozen=True)
class PullbackWitness:
    section: str
    monomial: str
    degree: int
    point: GroupPoint

    def __str__(self) -> str:
        return f"section {{{self.section}}} on {self.monomial} (degree {self.degree}) at {self.point}"


def witness_sections(pair: HCPair) -> list[Section]:
    """Indicator sections of every word, each also multiplied by every free coordinate"""
    sections = []
    for w in pair.words():
        sections.append(Section(pair, {w: 1}))
        for symbol in pair.group.free_symbols:
            sections.append(Section(pair, {w: symbol}))
    return sections


def pullback_witness(m1: HCMorphism, m2: HCMorphism, samples: SampleSet, degree: int) -> Optional[PullbackWitness]:
    """The first witness section, monomial and sample where f(φ(u))(Φ(g)) differs between the two"""
    if m1.source is not m2.source or m1.target is not m2.target:
        raise ParentMismatchError("morphisms between different pairs")
    env = m1.source.env
    monomials = sorted(env.monomials(degree), key=lambda m: (len(m), m))
    for f in witness_sections(m1.target):
        for monomial in monomials:
            u = UEAElement(env, {monomial: ONE})
            for g in samples:
                if m1.evaluate_pullback(f, u, g) != m2.evaluate_pullback(f, u, g):
                    return PullbackWitness(str(f), env.monomial_name(monomial), len(monomial), g)
    return None


def morphism_uniqueness_check(m1: HCMorphism, m2: HCMorphism, samples: SampleSet, degree: int) -> Report:
    """Morphisms with the same reduced map and the same tangent map have the same pullback"""
    report = Report()
    same_reduced = [g for g in samples if m1.group_map(g) != m2.group_map(g)]
    report.add(SUITE, "morphism.reduced_maps", not same_reduced, _witness(len(samples), "samples", same_reduced))
    differing = [m1.source.algebra.name(i) for i in range(m1.source.algebra.dim) if m1.column(i) != m2.column(i)]
    report.add(SUITE, "morphism.tangent_maps", not differing, _witness(m1.source.algebra.dim, "generators", differing))
    witness = pullback_witness(m1, m2, samples, degree)
    detail = f"witness sections on monomials up to degree {degree}"
    report.add(SUITE, "morphism.pullbacks", witness is None, detail if witness is None else f"{detail}, {witness}")
    return report

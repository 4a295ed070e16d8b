#! /usr/bin/env python3

"""The enveloping superalgebra U(g) in PBW normal form, its Hopf structure, the
exterior (co)algebra on the odd part and the symmetrization map between them."""

from __future__ import annotations

import itertools
import logging
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Any, Callable, Dict, Iterable, Mapping, Optional, Protocol, Sequence, Tuple

import sympy

from sgk.exactnum import ONE, ZERO, Scalar, linear_combination, perm_sign, shuffle_sign
from sgk.exceptions import DimensionMismatchError, InvalidInputError, ParentMismatchError
from sgk.liesuper import LieSuperAlgebra
from sgk.report import Report

logger = logging.getLogger(__name__)

# A PBW monomial is a non-decreasing tuple of basis indices in which no odd index
# repeats. Even indices precede odd ones in the basis, so the tuple reads as the
# even part followed by the odd part.
Monomial = Tuple[int, ...]
# Strictly increasing tuple of odd basis indices: a basis word of the exterior algebra
Word = Tuple[int, ...]
Terms = Dict[Any, Scalar]


def _accumulate(target: Terms, key: Any, coeff: Scalar) -> None:
    value = target.get(key, ZERO) + coeff
    if value:
        target[key] = value
    else:
        target.pop(key, None)


def _scaled(terms: Mapping[Any, Scalar], factor: Scalar) -> Terms:
    if not factor:
        return {}
    return {k: c * factor for k, c in terms.items()}


class GradedAlgebra(Protocol):
    """Anything whose monomials can be multiplied and carry a parity"""

    def mul_monomials(self, left: Monomial, right: Monomial) -> Terms: ...

    def monomial_parity(self, monomial: Monomial) -> int: ...

    def monomial_name(self, monomial: Monomial) -> str: ...


class EnvelopingAlgebra:
    """U(g) for a Lie superalgebra g.

    Products are normalized by inserting one letter at a time into an already normal
    monomial; insertions are memoized per algebra.
    """

    def __init__(self, algebra: LieSuperAlgebra):
        self.algebra = algebra
        self._insert_cache: dict[tuple[int, Monomial], Terms] = {}
        self._mul_cache: dict[tuple[Monomial, Monomial], Terms] = {}
        self._coproduct_cache: dict[tuple[Monomial, bool], Terms] = {}
        self._gamma_cache: dict[Word, Terms] = {}
        self._factor_cache: dict[tuple[Monomial, str], dict[Word, Terms]] = {}

    # Monomials

    def parity(self, i: int) -> int:
        return self.algebra.parity(i)

    def monomial_parity(self, monomial: Monomial) -> int:
        return sum(self.parity(i) for i in monomial) % 2

    def odd_count(self, monomial: Monomial) -> int:
        return sum(self.parity(i) for i in monomial)

    def is_normal(self, word: Sequence[int]) -> bool:
        for a, b in zip(word, word[1:]):
            if a > b or (a == b and self.parity(a)):
                return False
        return True

    def monomial_name(self, monomial: Monomial) -> str:
        if not monomial:
            return "1"
        return "*".join(self.algebra.name(i) for i in monomial)

    def split(self, monomial: Monomial) -> tuple[Monomial, Word]:
        """Even part and odd part of a normal monomial"""
        even = tuple(i for i in monomial if not self.parity(i))
        odd = tuple(i for i in monomial if self.parity(i))
        return even, odd

    def monomials(self, max_degree: int) -> list[Monomial]:
        """All PBW monomials of degree at most max_degree, in canonical order"""
        evens = list(self.algebra.basis.even_indices)
        odds = list(self.algebra.basis.odd_indices)
        found = []
        for degree in range(max_degree + 1):
            for n_odd in range(min(degree, len(odds)) + 1):
                for odd in itertools.combinations(odds, n_odd):
                    for even in itertools.combinations_with_replacement(evens, degree - n_odd):
                        found.append(tuple(even) + tuple(odd))
        return found

    # Normal form

    def insert(self, x: int, monomial: Monomial) -> Terms:
        """x times a normal monomial, in normal form"""
        key = (x, monomial)
        cached = self._insert_cache.get(key)
        if cached is not None:
            return cached
        result: Terms = {}
        if not monomial or x < monomial[0]:
            result = {(x,) + monomial: ONE}
        elif x == monomial[0]:
            if not self.parity(x):
                result = {(x,) + monomial: ONE}
            else:
                # x x = 1/2 [x, x] for odd x
                rest = monomial[1:]
                for k, c in self.algebra.bracket_basis(x, x).items():
                    for m, d in self.insert(k, rest).items():
                        _accumulate(result, m, c * d * Scalar(Fraction(1, 2)))
        else:
            y, rest = monomial[0], monomial[1:]
            sign = -ONE if self.parity(x) and self.parity(y) else ONE
            # x y rest = s y (x rest) + [x, y] rest
            for m, d in self.insert(x, rest).items():
                for n, e in self.insert(y, m).items():
                    _accumulate(result, n, sign * d * e)
            for k, c in self.algebra.bracket_basis(x, y).items():
                for m, d in self.insert(k, rest).items():
                    _accumulate(result, m, c * d)
        self._insert_cache[key] = result
        return result

    def mul_monomials(self, left: Monomial, right: Monomial) -> Terms:
        key = (left, right)
        cached = self._mul_cache.get(key)
        if cached is not None:
            return cached
        current: Terms = {right: ONE}
        for letter in reversed(left):
            nxt: Terms = {}
            for m, c in current.items():
                for n, d in self.insert(letter, m).items():
                    _accumulate(nxt, n, c * d)
            current = nxt
        self._mul_cache[key] = current
        return current

    def normalize_word(self, word: Sequence[int], coeff: Any = ONE) -> UEAElement:
        """pbw_normalize: the normal form of coeff times a word of basis indices"""
        for i in word:
            if not 0 <= i < self.algebra.dim:
                raise DimensionMismatchError(f"letter {i} is not a basis index")
        return UEAElement(self, _scaled(self.mul_monomials(tuple(word), ()), Scalar.coerce(coeff)))

    def rewrite_normalize(
        self, word: Sequence[int], choose: Callable[[list[int]], int], coeff: Any = ONE
    ) -> UEAElement:
        """Normal form by applying the defining relation at positions picked by choose.

        choose receives the positions k where word[k], word[k+1] is out of order (or an
        odd square) and returns one of them.
        """
        pending: Terms = {tuple(word): Scalar.coerce(coeff)}
        done: Terms = {}
        while pending:
            current = min(pending)
            c = pending.pop(current)
            positions = [
                k
                for k in range(len(current) - 1)
                if current[k] > current[k + 1]
                or (current[k] == current[k + 1] and self.parity(current[k]))
            ]
            if not positions:
                _accumulate(done, current, c)
                continue
            k = choose(positions)
            if k not in positions:
                raise InvalidInputError(f"rewrite position {k} is not applicable")
            x, y = current[k], current[k + 1]
            head, tail = current[:k], current[k + 2 :]
            if x == y:
                half = c * Scalar(Fraction(1, 2))
                for b, d in self.algebra.bracket_basis(x, x).items():
                    _accumulate(pending, head + (b,) + tail, half * d)
                continue
            sign = -ONE if self.parity(x) and self.parity(y) else ONE
            _accumulate(pending, head + (y, x) + tail, sign * c)
            for b, d in self.algebra.bracket_basis(x, y).items():
                _accumulate(pending, head + (b,) + tail, c * d)
        return UEAElement(self, done)

    # Elements

    def element(self, terms: Mapping[Monomial, Any]) -> UEAElement:
        for m in terms:
            if not self.is_normal(m):
                raise InvalidInputError(f"{self.monomial_name(m)} is not a PBW monomial")
        return UEAElement(self, {tuple(m): Scalar.coerce(c) for m, c in terms.items()})

    def one(self) -> UEAElement:
        return UEAElement(self, {(): ONE})

    def zero(self) -> UEAElement:
        return UEAElement(self, {})

    def generator(self, i: int) -> UEAElement:
        return UEAElement(self, {(i,): ONE})

    def from_vector(self, vector: Sequence[Any]) -> UEAElement:
        if len(vector) != self.algebra.dim:
            raise DimensionMismatchError("vector length differs from the algebra dimension")
        return UEAElement(self, {(i,): Scalar.coerce(c) for i, c in enumerate(vector)})

    def from_records(self, records: Iterable[Mapping[str, Any]]) -> UEAElement:
        result = self.zero()
        for record in records:
            word = [self.algebra.basis.index(n) for n in list(record.get("even", [])) + list(record.get("odd", []))]
            result = result + self.normalize_word(word, record.get("coeff", "1"))
        return result

    # Hopf structure

    def coproduct_monomial(self, monomial: Monomial, koszul: bool = True) -> Terms:
        key = (monomial, koszul)
        cached = self._coproduct_cache.get(key)
        if cached is not None:
            return cached
        if not monomial:
            result: Terms = {((), ()): ONE}
        else:
            x, rest = monomial[0], monomial[1:]
            result = {}
            for (r1, r2), c in self.coproduct_monomial(rest, koszul).items():
                # (x ⊗ 1)(r1 ⊗ r2)
                for m, d in self.insert(x, r1).items():
                    _accumulate(result, (m, r2), c * d)
                # (1 ⊗ x)(r1 ⊗ r2) carries the Koszul sign of x passing r1
                sign = -ONE if koszul and self.parity(x) and self.monomial_parity(r1) else ONE
                for m, d in self.insert(x, r2).items():
                    _accumulate(result, (r1, m), sign * c * d)
        self._coproduct_cache[key] = result
        return result

    def antipode_monomial(self, monomial: Monomial, odd_sign: bool = True) -> Terms:
        """S(x1...xk) = (-1)^k (-1)^{o(o-1)/2} xk...x1 with o the number of odd letters"""
        o = self.odd_count(monomial)
        k = len(monomial) if odd_sign else len(monomial) - o
        sign = ONE if (k + o * (o - 1) // 2) % 2 == 0 else -ONE
        return _scaled(self.mul_monomials(tuple(reversed(monomial)), ()), sign)

    # Linear maps of generators extended multiplicatively

    def apply_linear(
        self, matrix: Sequence[Sequence[Scalar]], u: UEAElement, target: Optional[EnvelopingAlgebra] = None
    ) -> UEAElement:
        """Extend x_i -> sum_k matrix[k][i] y_k to an algebra map U(g) -> U(target)"""
        target = target or self
        if u.env is not self:
            raise ParentMismatchError("element belongs to a different enveloping algebra")
        images = [
            {(k,): matrix[k][i] for k in range(target.algebra.dim) if matrix[k][i]}
            for i in range(self.algebra.dim)
        ]
        result: Terms = {}
        for monomial, c in u.terms.items():
            current: Terms = {(): c}
            for letter in reversed(monomial):
                nxt: Terms = {}
                for (k,), a in images[letter].items():
                    for m, d in current.items():
                        for n, e in target.insert(k, m).items():
                            _accumulate(nxt, n, a * d * e)
                current = nxt
            for m, d in current.items():
                _accumulate(result, m, d)
        return UEAElement(target, result)

    # Symmetrization and factorization

    def gamma_word(self, word: Word) -> Terms:
        cached = self._gamma_cache.get(word)
        if cached is not None:
            return cached
        result: Terms = {}
        scale = Scalar(Fraction(1, factorial(len(word))))
        for perm in itertools.permutations(range(len(word))):
            sign = perm_sign(perm)
            letters = tuple(word[p] for p in perm)
            for m, c in self.mul_monomials(letters, ()).items():
                _accumulate(result, m, c * scale * sign)
        self._gamma_cache[word] = result
        return result

    def factorize_monomial(self, monomial: Monomial, side: str = "left") -> dict[Word, Terms]:
        key = (monomial, side)
        cached = self._factor_cache.get(key)
        if cached is None:
            cached = self._factorize({monomial: ONE}, side)
            self._factor_cache[key] = cached
        return cached

    def _factorize(self, terms: Terms, side: str) -> dict[Word, Terms]:
        if side not in ("left", "right"):
            raise InvalidInputError(f"unknown factorization side {side!r}")
        remainder = dict(terms)
        parts: dict[Word, Terms] = {}
        while remainder:
            # Leading monomial: most odd letters, then highest degree
            lead = max(remainder, key=lambda m: (self.odd_count(m), len(m), m))
            c = remainder[lead]
            even, word = self.split(lead)
            _accumulate(parts.setdefault(word, {}), even, c)
            gamma = self.gamma_word(word)
            for m, d in gamma.items():
                product = self.mul_monomials(m, even) if side == "right" else self.mul_monomials(even, m)
                for n, e in product.items():
                    _accumulate(remainder, n, -c * d * e)
        return {w: t for w, t in parts.items() if t}


class UEAElement:
    """A linear combination of PBW monomials"""

    __slots__ = ("env", "terms")

    def __init__(self, env: EnvelopingAlgebra, terms: Mapping[Monomial, Scalar]):
        self.env = env
        self.terms: dict[Monomial, Scalar] = {m: c for m, c in terms.items() if c}

    def _same(self, other: UEAElement) -> None:
        if other.env is not self.env:
            raise ParentMismatchError("elements of different enveloping algebras")

    def __add__(self, other: UEAElement) -> UEAElement:
        self._same(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            _accumulate(terms, m, c)
        return UEAElement(self.env, terms)

    def __sub__(self, other: UEAElement) -> UEAElement:
        return self + (-other)

    def __neg__(self) -> UEAElement:
        return UEAElement(self.env, _scaled(self.terms, -ONE))

    def __mul__(self, other: Any) -> UEAElement:
        if isinstance(other, UEAElement):
            return uea_mul(self, other)
        if isinstance(other, (Scalar, int, Fraction)):
            return UEAElement(self.env, _scaled(self.terms, Scalar.coerce(other)))
        return NotImplemented

    def __rmul__(self, other: Any) -> UEAElement:
        if isinstance(other, (Scalar, int, Fraction)):
            return UEAElement(self.env, _scaled(self.terms, Scalar.coerce(other)))
        return NotImplemented

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, UEAElement):
            return NotImplemented
        return self.env is other.env and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, monomial: Monomial) -> Scalar:
        return self.terms.get(tuple(monomial), ZERO)

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def parity(self) -> Optional[int]:
        """Common parity of all monomials, None for mixed elements"""
        found = {self.env.monomial_parity(m) for m in self.terms}
        if len(found) > 1:
            return None
        return found.pop() if found else 0

    def homogeneous_parts(self) -> dict[int, UEAElement]:
        parts: dict[int, dict[Monomial, Scalar]] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.env.monomial_parity(m), {})[m] = c
        return {p: UEAElement(self.env, t) for p, t in parts.items()}

    def to_records(self) -> list[dict[str, Any]]:
        names = self.env.algebra.basis.names
        records = []
        for m in sorted(self.terms):
            even, odd = self.env.split(m)
            records.append(
                {"even": [names[i] for i in even], "odd": [names[i] for i in odd], "coeff": str(self.terms[m])}
            )
        return records

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            name = self.env.monomial_name(m)
            if c == ONE:
                parts.append(name)
            elif c == -ONE:
                parts.append(f"-{name}")
            else:
                parts.append(f"({c})*{name}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"UEAElement({self})"


class TensorElement:
    """Sparse element of A_1 ⊗ ... ⊗ A_n with flat tuple keys"""

    __slots__ = ("factors", "terms")

    def __init__(self, factors: Sequence[GradedAlgebra], terms: Mapping[tuple[Monomial, ...], Scalar]):
        self.factors = tuple(factors)
        self.terms: dict[tuple[Monomial, ...], Scalar] = {}
        for key, c in terms.items():
            if len(key) != len(self.factors):
                raise DimensionMismatchError(f"tensor key of length {len(key)} for arity {self.arity}")
            if c:
                self.terms[tuple(key)] = c

    @property
    def arity(self) -> int:
        return len(self.factors)

    def _same(self, other: TensorElement) -> None:
        if len(other.factors) != len(self.factors) or any(
            a is not b for a, b in zip(self.factors, other.factors)
        ):
            raise ParentMismatchError("tensors over different factors")

    def __add__(self, other: TensorElement) -> TensorElement:
        self._same(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            _accumulate(terms, k, c)
        return TensorElement(self.factors, terms)

    def __sub__(self, other: TensorElement) -> TensorElement:
        return self + other.scale(-ONE)

    def scale(self, factor: Any) -> TensorElement:
        return TensorElement(self.factors, _scaled(self.terms, Scalar.coerce(factor)))

    def __mul__(self, other: TensorElement) -> TensorElement:
        """Componentwise product with the Koszul sign (-1)^{sum_{i>j} p(a_i) p(b_j)}"""
        self._same(other)
        result: Terms = {}
        for a, ca in self.terms.items():
            pa = [f.monomial_parity(m) for f, m in zip(self.factors, a)]
            for b, cb in other.terms.items():
                pb = [f.monomial_parity(m) for f, m in zip(self.factors, b)]
                exponent = sum(pa[i] * pb[j] for i in range(self.arity) for j in range(i))
                coeff = ca * cb * (-ONE if exponent % 2 else ONE)
                partial: Terms = {(): coeff}
                for f, x, y in zip(self.factors, a, b):
                    product = f.mul_monomials(x, y)
                    partial = {
                        key + (m,): c * d for key, c in partial.items() for m, d in product.items()
                    }
                for key, c in partial.items():
                    _accumulate(result, key, c)
        return TensorElement(self.factors, result)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.factors == other.factors and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def flip(self, signed: bool = True) -> TensorElement:
        """T^s(a ⊗ b) = (-1)^{p(a)p(b)} b ⊗ a"""
        if self.arity != 2:
            raise DimensionMismatchError("flip needs a tensor of arity 2")
        f, g = self.factors
        result: Terms = {}
        for (a, b), c in self.terms.items():
            odd = signed and f.monomial_parity(a) and g.monomial_parity(b)
            _accumulate(result, (b, a), -c if odd else c)
        return TensorElement((g, f), result)

    def map_factor(
        self, index: int, fn: Callable[[Monomial], Mapping[tuple[Monomial, ...], Scalar]], new: Sequence[GradedAlgebra]
    ) -> TensorElement:
        """Replace factor index by the tensor fn(monomial) over the algebras new; fn must be even"""
        result: Terms = {}
        for key, c in self.terms.items():
            for image, d in fn(key[index]).items():
                _accumulate(result, key[:index] + tuple(image) + key[index + 1 :], c * d)
        factors = self.factors[:index] + tuple(new) + self.factors[index + 1 :]
        return TensorElement(factors, result)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"({c})*" + "⊗".join(f.monomial_name(m) for f, m in zip(self.factors, key))
            for key, c in sorted(self.terms.items())
        )


def uea_mul(a: UEAElement, b: UEAElement) -> UEAElement:
    a._same(b)
    env = a.env
    result: Terms = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            for m, d in env.mul_monomials(m1, m2).items():
                _accumulate(result, m, c1 * c2 * d)
    return UEAElement(env, result)


def pbw_normalize(algebra: EnvelopingAlgebra, word: Sequence[int], coeff: Any = ONE) -> UEAElement:
    return algebra.normalize_word(word, coeff)


def coproduct(a: UEAElement, koszul: bool = True) -> TensorElement:
    env = a.env
    result: Terms = {}
    for m, c in a.terms.items():
        for key, d in env.coproduct_monomial(m, koszul).items():
            _accumulate(result, key, c * d)
    return TensorElement((env, env), result)


def coproduct_shuffle_oracle(env: EnvelopingAlgebra, word: Sequence[int]) -> TensorElement:
    """Signed shuffle sum for a product of distinct odd generators"""
    if any(not env.parity(i) for i in word):
        raise InvalidInputError("the shuffle formula applies to odd letters only")
    if len(set(word)) != len(word):
        raise InvalidInputError("letters of the shuffle formula must be distinct")
    r = len(word)
    result: Terms = {}
    for a in range(r + 1):
        for left in itertools.combinations(range(1, r + 1), a):
            right = tuple(k for k in range(1, r + 1) if k not in left)
            sign = Scalar(shuffle_sign(left, right))
            lhs = env.mul_monomials(tuple(word[k - 1] for k in left), ())
            rhs = env.mul_monomials(tuple(word[k - 1] for k in right), ())
            for m1, c1 in lhs.items():
                for m2, c2 in rhs.items():
                    _accumulate(result, (m1, m2), sign * c1 * c2)
    return TensorElement((env, env), result)


def antipode(a: UEAElement, odd_sign: bool = True) -> UEAElement:
    env = a.env
    result: Terms = {}
    for m, c in a.terms.items():
        for n, d in env.antipode_monomial(m, odd_sign).items():
            _accumulate(result, n, c * d)
    return UEAElement(env, result)


def counit(a: UEAElement) -> Scalar:
    return a.coefficient(())


# Exterior algebra on the odd part


class ExteriorAlgebra:
    """⋀ of a space with basis labelled by the given generator indices"""

    def __init__(self, generators: Sequence[int], names: Optional[Mapping[int, str]] = None):
        self.generators = tuple(generators)
        if list(self.generators) != sorted(set(self.generators)):
            raise InvalidInputError("exterior generators must be increasing and distinct")
        self.names = dict(names) if names is not None else {g: f"v{g}" for g in self.generators}

    @classmethod
    def of_odd_part(cls, algebra: LieSuperAlgebra) -> ExteriorAlgebra:
        odd = algebra.basis.odd_indices
        return cls(tuple(odd), {i: algebra.name(i) for i in odd})

    def words(self, degree: Optional[int] = None) -> list[Word]:
        degrees = range(len(self.generators) + 1) if degree is None else [degree]
        return [w for k in degrees for w in itertools.combinations(self.generators, k)]

    def check_word(self, word: Sequence[int]) -> Word:
        word = tuple(word)
        if any(a >= b for a, b in zip(word, word[1:])):
            raise InvalidInputError(f"exterior word {list(word)} is not strictly increasing")
        if any(g not in self.names for g in word):
            raise InvalidInputError(f"exterior word {list(word)} uses an unknown generator")
        return word

    def monomial_parity(self, monomial: Monomial) -> int:
        return len(monomial) % 2

    def monomial_name(self, monomial: Monomial) -> str:
        return "∧".join(self.names[g] for g in monomial) if monomial else "1"

    def mul_monomials(self, left: Monomial, right: Monomial) -> Terms:
        if set(left) & set(right):
            return {}
        merged = tuple(sorted(left + right))
        return {merged: Scalar(perm_sign(left + right))}

    def element(self, terms: Mapping[Sequence[int], Any]) -> ExtElement:
        return ExtElement(self, {self.check_word(w): Scalar.coerce(c) for w, c in terms.items()})

    def word(self, *letters: int, coeff: Any = ONE) -> ExtElement:
        """The element coeff * x_{l1} ∧ ... ∧ x_{lk}, letters in any order"""
        result: Terms = {(): Scalar.coerce(coeff)}
        for letter in letters:
            result = {
                m: c * d
                for w, c in result.items()
                for m, d in self.mul_monomials(w, (letter,)).items()
            }
        return ExtElement(self, result)

    def coproduct_word(self, word: Word) -> Terms:
        result: Terms = {}
        r = len(word)
        for a in range(r + 1):
            for left in itertools.combinations(range(1, r + 1), a):
                right = tuple(k for k in range(1, r + 1) if k not in left)
                key = (tuple(word[k - 1] for k in left), tuple(word[k - 1] for k in right))
                _accumulate(result, key, Scalar(shuffle_sign(left, right)))
        return result


class ExtElement:
    __slots__ = ("ext", "terms")

    def __init__(self, ext: ExteriorAlgebra, terms: Mapping[Word, Scalar]):
        self.ext = ext
        self.terms: dict[Word, Scalar] = {tuple(w): c for w, c in terms.items() if c}

    def __add__(self, other: ExtElement) -> ExtElement:
        terms = dict(self.terms)
        for w, c in other.terms.items():
            _accumulate(terms, w, c)
        return ExtElement(self.ext, terms)

    def __neg__(self) -> ExtElement:
        return ExtElement(self.ext, _scaled(self.terms, -ONE))

    def __sub__(self, other: ExtElement) -> ExtElement:
        return self + (-other)

    def __rmul__(self, other: Any) -> ExtElement:
        return ExtElement(self.ext, _scaled(self.terms, Scalar.coerce(other)))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, ExtElement):
            return NotImplemented
        return self.ext is other.ext and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{self.ext.monomial_name(w)}" for w, c in sorted(self.terms.items()))


def ext_mul(a: ExtElement, b: ExtElement) -> ExtElement:
    if a.ext is not b.ext:
        raise ParentMismatchError("wedge of elements of different exterior algebras")
    result: Terms = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            for w, d in a.ext.mul_monomials(w1, w2).items():
                _accumulate(result, w, c1 * c2 * d)
    return ExtElement(a.ext, result)


def ext_coproduct(a: ExtElement) -> TensorElement:
    result: Terms = {}
    for w, c in a.terms.items():
        for key, d in a.ext.coproduct_word(w).items():
            _accumulate(result, key, c * d)
    return TensorElement((a.ext, a.ext), result)


def gamma(env: EnvelopingAlgebra, w: ExtElement) -> UEAElement:
    """γ(x1 ∧ ... ∧ xr) = (1/r!) Σ_σ sign(σ) x_σ(1) ... x_σ(r)"""
    result: Terms = {}
    for word, c in w.terms.items():
        if any(not env.parity(i) for i in word):
            raise InvalidInputError("γ is defined on words of odd generators")
        for m, d in env.gamma_word(word).items():
            _accumulate(result, m, c * d)
    return UEAElement(env, result)


def pbw_factorize(a: UEAElement, side: str = "left") -> dict[Word, UEAElement]:
    """Unique u_w in U(g0) with a = Σ u_w γ(w) (left) or a = Σ γ(w) u_w (right)"""
    env = a.env
    parts: dict[Word, Terms] = {}
    for m, c in a.terms.items():
        for word, terms in env.factorize_monomial(m, side).items():
            bucket = parts.setdefault(word, {})
            for n, d in terms.items():
                _accumulate(bucket, n, c * d)
    return {w: UEAElement(env, t) for w, t in sorted(parts.items()) if t}


def pbw_reconstruct(env: EnvelopingAlgebra, parts: Mapping[Word, UEAElement], side: str = "left") -> UEAElement:
    result = env.zero()
    for word, u in parts.items():
        g = UEAElement(env, env.gamma_word(word))
        result = result + (g * u if side == "right" else u * g)
    return result


# Hom(⋀V, F) tables and the Ψ_V sign


def hom_mul(t1: Mapping[Word, Any], t2: Mapping[Word, Any]) -> dict[Word, Any]:
    """Product of Hom(⋀V, F) tables: f1 f2 = Mult ∘ (f1 ⊗ f2) ∘ Δ_∧ with the Koszul sign"""
    result: dict[Word, Any] = {}
    for w1, a in t1.items():
        for w2, b in t2.items():
            if set(w1) & set(w2):
                continue
            w = tuple(sorted(w1 + w2))
            left = tuple(w.index(x) + 1 for x in w1)
            right = tuple(w.index(x) + 1 for x in w2)
            sign = shuffle_sign(left, right)
            if (len(w1) * len(w2)) % 2:
                sign = -sign
            term = a * b if sign > 0 else -(a * b)
            result[w] = term if w not in result else result[w] + term
    return {w: v for w, v in result.items() if not _is_zero(v)}


def _is_zero(value: Any) -> bool:
    if isinstance(value, sympy.Basic):
        return value == 0
    return not value


def psi_v_iso(h: Any, word: Sequence[int]) -> dict[Word, Any]:
    """Ψ_V(h ξ*_{i1} ∧ ... ∧ ξ*_{ik}) = (-1)^{k(k-1)/2} h f^{ξ_{i1} ∧ ... ∧ ξ_{ik}}"""
    word = tuple(word)
    if any(a >= b for a, b in zip(word, word[1:])):
        raise InvalidInputError(f"dual word {list(word)} is not strictly increasing")
    k = len(word)
    sign = 1 if (k * (k - 1) // 2) % 2 == 0 else -1
    return {word: h if sign > 0 else -h}


def exterior_power(matrix: Sequence[Sequence[Any]], k: int) -> dict[tuple[Word, Word], Any]:
    """k x k minors of a matrix over any ring, keyed by (row subset, column subset)"""
    rows = range(len(matrix))
    cols = range(len(matrix[0]) if matrix else 0)
    result: dict[tuple[Word, Word], Any] = {}
    for I in itertools.combinations(rows, k):  # noqa: E741
        for J in itertools.combinations(cols, k):
            terms = []
            coeffs = []
            for perm in itertools.permutations(range(k)):
                product: Any = ONE
                for a, b in enumerate(perm):
                    product = product * matrix[I[a]][J[b]]
                terms.append(product)
                coeffs.append(Scalar(perm_sign(perm)))
            result[(I, J)] = linear_combination(coeffs, terms) if k else ONE
    return result


# Hopf axioms


class HopfMutation(Enum):
    NONE = "none"
    ANTIPODE_SIGN = "antipode-sign"
    KOSZUL_SIGN = "koszul-sign"
    FLIP_SIGN = "flip-sign"


def hopf_axiom_check(
    algebra: LieSuperAlgebra, max_degree: int, mutation: HopfMutation = HopfMutation.NONE
) -> Report:
    """Coassociativity, counit, antipode and super-cocommutativity on PBW monomials"""
    if max_degree < 1:
        raise InvalidInputError("max degree must be at least 1")
    env = EnvelopingAlgebra(algebra)
    koszul = mutation is not HopfMutation.KOSZUL_SIGN
    signed_flip = mutation is not HopfMutation.FLIP_SIGN
    odd_sign = mutation is not HopfMutation.ANTIPODE_SIGN
    monomials = env.monomials(max_degree)
    failures: dict[str, list[str]] = {
        "coassociativity": [],
        "counit": [],
        "antipode": [],
        "cocommutativity": [],
    }

    def delta(m: Monomial) -> Terms:
        return env.coproduct_monomial(m, koszul)

    for m in monomials:
        name = env.monomial_name(m)
        u = UEAElement(env, {m: ONE})
        d = coproduct(u, koszul)
        left = d.map_factor(0, delta, (env, env))
        right = d.map_factor(1, delta, (env, env))
        if left != right:
            failures["coassociativity"].append(name)
        eps_left: Terms = {}
        eps_right: Terms = {}
        for (m1, m2), c in d.terms.items():
            if not m1:
                _accumulate(eps_left, m2, c)
            if not m2:
                _accumulate(eps_right, m1, c)
        if eps_left != u.terms or eps_right != u.terms:
            failures["counit"].append(name)
        s_left: Terms = {}
        s_right: Terms = {}
        for (m1, m2), c in d.terms.items():
            for n, e in env.antipode_monomial(m1, odd_sign).items():
                for k, f in env.mul_monomials(n, m2).items():
                    _accumulate(s_left, k, c * e * f)
            for n, e in env.antipode_monomial(m2, odd_sign).items():
                for k, f in env.mul_monomials(m1, n).items():
                    _accumulate(s_right, k, c * e * f)
        expected = {(): ONE} if not m else {}
        if s_left != expected or s_right != expected:
            failures["antipode"].append(name)
        if d.flip(signed_flip) != d:
            failures["cocommutativity"].append(name)

    report = Report()
    for check, names in failures.items():
        if names:
            shown = ", ".join(names[:3]) + (", ..." if len(names) > 3 else "")
            report.add("envelope", check, False, f"{len(names)} of {len(monomials)} monomials fail: {shown}")
        else:
            report.add("envelope", check, True, f"{len(monomials)} monomials up to degree {max_degree}")
    logger.debug("Hopf check (%s) on %d monomials", mutation.value, len(monomials))
    return report


def gamma_morphism_check(algebra: LieSuperAlgebra, max_word: Optional[int] = None) -> Report:
    """γ against the coproducts on every wedge word, and against the products on
    every pair of words.

    γ always intertwines the coproducts. It is multiplicative exactly when
    [g1, g1] = 0; the dichotomy check fails if the two disagree.
    """
    env = EnvelopingAlgebra(algebra)
    ext = ExteriorAlgebra.of_odd_part(algebra)
    top = len(ext.generators) if max_word is None else max_word
    words = [w for w in ext.words() if len(w) <= top]
    image = {w: UEAElement(env, env.gamma_word(w)) for w in words}
    report = Report()

    not_coalgebra = []
    for w in words:
        expected: Terms = {}
        for (w1, w2), c in ext.coproduct_word(w).items():
            for m1, c1 in image[w1].terms.items():
                for m2, c2 in image[w2].terms.items():
                    _accumulate(expected, (m1, m2), c * c1 * c2)
        if coproduct(image[w]) != TensorElement((env, env), expected):
            not_coalgebra.append(ext.monomial_name(w))
    detail = f"{len(words)} words of length at most {top}"
    if not_coalgebra:
        detail += ", fails on " + ", ".join(not_coalgebra[:3])
    report.add("envelope", "gamma_coalgebra", not not_coalgebra, detail)

    violation: Optional[tuple[Word, Word]] = None
    pairs = 0
    for w1, w2 in itertools.product(words, repeat=2):
        if len(w1) + len(w2) > top:
            continue
        pairs += 1
        wedge: Terms = {}
        for w, c in ext.mul_monomials(w1, w2).items():
            for m, d in image[w].terms.items():
                _accumulate(wedge, m, c * d)
        if image[w1] * image[w2] != UEAElement(env, wedge):
            violation = (w1, w2)
            break
    split = algebra.odd_bracket_witness() is None
    if violation is None:
        detail = f"γ is multiplicative on {pairs} word pairs"
    else:
        a, b = (ext.monomial_name(w) for w in violation)
        detail = f"γ({a})γ({b}) ≠ γ({a}∧{b})"
    detail += ", [g1, g1] = 0" if split else ", [g1, g1] ≠ 0"
    report.add("envelope", "gamma_dichotomy", (violation is None) == split, detail)
    logger.debug("γ check on %d words and %d pairs", len(words), pairs)
    return report

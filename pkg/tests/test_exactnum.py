import itertools
import random
from fractions import Fraction

import pytest
import sympy

from sgk.exactnum import (
    ONE,
    ZERO,
    I,
    Jet1,
    Scalar,
    SpanBasis,
    coordinate_symbol,
    determinant,
    eval_scalar,
    evaluate_at,
    inverse,
    jet_eval,
    perm_sign,
    rank,
    shuffle_sign,
    solve,
    to_matrix,
)
from sgk.exceptions import DegenerateInputError, InvalidInputError, SpanError


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3", Scalar(3)),
        ("-1/2", Scalar(Fraction(-1, 2))),
        ("1/2+3*i", Scalar(Fraction(1, 2), 3)),
        ("2-i", Scalar(2, -1)),
        ("i", I),
        ("-i", Scalar(0, -1)),
    ],
)
def test_scalar_parse(text, expected):
    assert Scalar.parse(text) == expected


def test_scalar_rejects_garbage():
    with pytest.raises(InvalidInputError):
        Scalar.parse("")
    with pytest.raises(InvalidInputError):
        Scalar.coerce("2/0")
    with pytest.raises(InvalidInputError):
        Scalar.coerce(0.5)


def test_scalar_arithmetic_is_exact():
    a = Scalar(1, 1)
    b = Scalar(1, -1)
    assert a / b == I
    assert a * b == Scalar(2)
    assert I * I == -ONE
    assert Scalar(Fraction(1, 3)) * 3 == ONE
    assert 1 - Scalar(Fraction(1, 4)) == Scalar(Fraction(3, 4))
    assert Scalar(2) ** -2 == Scalar(Fraction(1, 4))
    assert a.conjugate() == b
    assert Scalar(3) == 3
    assert hash(Scalar(3)) == hash(3)
    assert str(Scalar(Fraction(1, 2), -2)) == "1/2-2*i"


def test_scalar_is_immutable():
    with pytest.raises(AttributeError):
        ONE.re = Fraction(2)


def test_division_by_zero():
    with pytest.raises(DegenerateInputError):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        Scalar(5) / 0


def test_scalar_mixes_with_sympy():
    y = sympy.Symbol("y")
    assert sympy.expand(Scalar(2) * y - 2 * y) == 0
    assert Scalar.coerce(sympy.Rational(1, 2) + sympy.I) == Scalar(Fraction(1, 2), 1)
    with pytest.raises(InvalidInputError):
        Scalar.coerce(sympy.sqrt(2))


def test_jet_arithmetic():
    x = Jet1(Scalar(3), ONE)
    assert x * x == Jet1(Scalar(9), Scalar(6))
    assert 1 / x == Jet1(Scalar(Fraction(1, 3)), Scalar(Fraction(-1, 9)))
    assert (x**-1) * x == Jet1(ONE, ZERO)
    assert (x - 3).is_unit() is False


@pytest.mark.parametrize(
    "sequence, sign",
    [((), 1), ((5,), 1), ((2, 1), -1), ((1, 2, 3), 1), ((2, 1, 3), -1), ((3, 1, 2), 1)],
)
def test_perm_sign(sequence, sign):
    assert perm_sign(sequence) == sign


def test_perm_sign_needs_distinct_entries():
    with pytest.raises(InvalidInputError):
        perm_sign((1, 1))


def test_shuffle_sign():
    assert shuffle_sign((1, 2), (3,)) == 1
    assert shuffle_sign((1, 3), (2,)) == -1
    assert shuffle_sign((2,), (1,)) == -1
    assert shuffle_sign((2, 3), (1,)) == 1
    assert shuffle_sign((), (1, 2)) == 1
    with pytest.raises(InvalidInputError):
        shuffle_sign((2, 1), (3,))
    with pytest.raises(InvalidInputError):
        shuffle_sign((1,), (3,))


def test_eval_scalar_and_jets():
    det = coordinate_symbol(1, 1) * coordinate_symbol(2, 2) - coordinate_symbol(1, 2) * coordinate_symbol(2, 1)
    assert eval_scalar(det, to_matrix([[1, 2], [3, 4]])) == Scalar(-2)

    # d/dt det(1 + tX) at t = 0 is the trace of X
    jets = [
        [Jet1(ONE, Scalar(5)), Jet1(ZERO, Scalar(7))],
        [Jet1(ZERO, Scalar(-1)), Jet1(ONE, Scalar(2))],
    ]
    assert jet_eval(det, jets) == Jet1(ONE, Scalar(7))

    ratio = coordinate_symbol(2, 2) / coordinate_symbol(1, 1)
    assert evaluate_at(ratio, to_matrix([[2, 0], [0, 3]])) == Scalar(Fraction(3, 2))
    with pytest.raises(ZeroDivisionError):
        eval_scalar(ratio, to_matrix([[0, 1], [1, 3]]))


def test_evaluate_at_symbolic_point():
    t = sympy.Symbol("t")
    value = evaluate_at(coordinate_symbol(1, 1) * coordinate_symbol(1, 2), [[t, 2], [0, 1]])
    assert sympy.simplify(value - 2 * t) == 0


def test_linear_algebra():
    a = to_matrix([[1, 2], [3, 4]])
    assert inverse(a) == to_matrix([[-2, 1], [Fraction(3, 2), Fraction(-1, 2)]])
    assert determinant(a) == Scalar(-2)
    assert determinant(to_matrix([[0, 1], [1, 0]])) == -ONE
    assert rank(to_matrix([[1, 2], [2, 4]])) == 1
    assert solve(a, (ONE, ONE)) == (-ONE, ONE)
    assert solve(to_matrix([[1, 1], [1, 1]]), (ONE, ZERO)) is None
    with pytest.raises(DegenerateInputError):
        inverse(to_matrix([[1, 2], [2, 4]]))


def test_span_basis():
    span = SpanBasis([(ONE, ONE, ZERO), (ZERO, ONE, ONE)])
    assert span.dim == 2
    assert span.express((ONE, Scalar(3), Scalar(2))) == (ONE, Scalar(2))
    assert span.contains((ONE, ZERO, -ONE))
    assert not span.contains((ONE, ZERO, ZERO))
    with pytest.raises(SpanError):
        span.express((ONE, ZERO, ZERO))
    with pytest.raises(DegenerateInputError):
        SpanBasis([(ONE, ONE), (Scalar(2), Scalar(2))])


def _random_scalar(rng):
    return Scalar(Fraction(rng.randint(-9, 9), rng.randint(1, 9)), Fraction(rng.randint(-9, 9), rng.randint(1, 9)))


@pytest.mark.parametrize("seed", range(10))
def test_scalar_field_axioms(seed):
    rng = random.Random(seed)
    for _ in range(10):
        a, b, c = (_random_scalar(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a + (-a) == ZERO
        assert a * ONE == a
        if a:
            assert a * (ONE / a) == ONE
            assert (b / a) * a == b


@pytest.mark.parametrize("r", range(9))
def test_shuffle_signs_against_inversion_counts(r):
    letters = range(1, r + 1)
    for k in range(r + 1):
        for left in itertools.combinations(letters, k):
            right = tuple(x for x in letters if x not in left)
            inversions = sum(1 for a in left for b in right if a > b)
            assert shuffle_sign(left, right) == (-1) ** inversions
            assert shuffle_sign(left, right) * shuffle_sign(right, left) == (-1) ** (len(left) * len(right))


_COORDS = [coordinate_symbol(i, j) for i in (1, 2) for j in (1, 2)]


def _random_expr(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(_COORDS + [sympy.Integer(rng.randint(-3, 3))])
    op = rng.choice(["add", "mul", "mul", "inv"])
    if op == "inv":
        return 1 / rng.choice(_COORDS)
    left, right = _random_expr(rng, depth - 1), _random_expr(rng, depth - 1)
    return left + right if op == "add" else left * right


@pytest.mark.parametrize("seed", range(20))
def test_jets_follow_the_product_and_chain_rules(seed):
    rng = random.Random(seed)
    base = [[Scalar(rng.randint(1, 5)) for _ in range(2)] for _ in range(2)]
    direction = [[Scalar(rng.randint(-3, 3)) for _ in range(2)] for _ in range(2)]
    point = [[Jet1(base[i][j], direction[i][j]) for j in range(2)] for i in range(2)]
    a = _random_expr(rng, 4)
    b = _random_expr(rng, 4)
    ja, jb = jet_eval(a, point), jet_eval(b, point)
    product = jet_eval(a * b, point)
    assert product.value == ja.value * jb.value
    assert product.deriv == ja.value * jb.deriv + ja.deriv * jb.value
    # d/dt f(P + tD) at 0 from symbolic partial derivatives
    expr = a * b + a
    expected = sum(
        (eval_scalar(sympy.diff(expr, _COORDS[2 * i + j]), base) * direction[i][j] for i in range(2) for j in range(2)),
        ZERO,
    )
    jet = jet_eval(expr, point)
    assert jet.value == eval_scalar(expr, base)
    assert jet.deriv == expected

import random
from fractions import Fraction

import pytest
import sympy

from sgk.exactnum import ONE, ZERO, Scalar, coordinate_symbol, identity, inverse, jet_eval, to_matrix
from sgk.exceptions import DegenerateInputError, InvalidInputError, PatternViolationError
from sgk.groupmodel import EntryConstraint, GroupModel, GroupPoint, Pattern, SampleSet
from sgk.inputs import fixture_path, load_algebra


@pytest.fixture(scope="module")
def gl11_model():
    return GroupModel(load_algebra(fixture_path("gl11.json")), Pattern.parse(["*0", "0*"]), "GL11")


@pytest.fixture(scope="module")
def cp12_model():
    return GroupModel(load_algebra(fixture_path("cp12_algebra.json")), Pattern.parse(["**0", "**0", "00*"]), "G'")


def test_pattern_parsing():
    pattern = Pattern.parse(["*0", "0*"])
    assert pattern.n == 2
    assert pattern.free_entries == [(0, 0), (1, 1)]
    assert pattern.rows() == ["*0", "0*"]
    assert pattern.constant(0, 1) == ZERO
    assert Pattern.parse([["1", "*"], ["0", "*"]]).mask[0][0] is EntryConstraint.UNIT
    assert Pattern.full(3).free_entries[-1] == (2, 2)


@pytest.mark.parametrize("rows", [["*x", "0*"], ["0*", "**"], ["*1", "**"], ["**", "*"]])
def test_pattern_rejects_bad_masks(rows):
    with pytest.raises(InvalidInputError):
        Pattern.parse(rows)


def test_points_are_validated(gl11_model):
    g = gl11_model.point([[2, 0], [0, 3]])
    assert g.matrix == to_matrix([[2, 0], [0, 3]])
    with pytest.raises(PatternViolationError):
        gl11_model.point([[1, 1], [0, 1]])
    with pytest.raises(DegenerateInputError):
        gl11_model.point([[0, 0], [0, 1]])
    with pytest.raises(InvalidInputError):
        gl11_model.point([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_group_operations(cp12_model):
    a = cp12_model.point([[1, 2, 0], [1, 1, 0], [0, 0, -1]])
    b = cp12_model.point([[2, 0, 0], [1, 1, 0], [0, 0, 1]])
    product = cp12_model.group_mul(a, b)
    assert product.matrix == to_matrix([[4, 2, 0], [3, 1, 0], [0, 0, -1]])
    assert cp12_model.group_mul(a, cp12_model.group_inv(a)) == cp12_model.identity()
    assert cp12_model.contains(product)


def test_coordinates_and_parsing(gl11_model):
    x11 = coordinate_symbol(1, 1)
    x22 = coordinate_symbol(2, 2)
    assert gl11_model.coordinate(1, 1) == x11
    assert gl11_model.coordinate(1, 2) == 0
    assert gl11_model.free_symbols == (x11, x22)
    assert gl11_model.parse_expr("x11*x22") == x11 * x22
    assert gl11_model.parse_expr("x_1_1 + x12") == x11
    assert sympy.simplify(gl11_model.parse_expr("det") - x11 * x22) == 0
    g = gl11_model.point([[2, 0], [0, 3]])
    assert gl11_model.eval_expr(gl11_model.parse_expr("det_inv"), g) == Scalar(Fraction(1, 6))
    assert gl11_model.eval_expr(gl11_model.parse_expr("reciprocal(x11) + 1/2"), g) == ONE
    with pytest.raises(InvalidInputError, match="unknown symbols"):
        gl11_model.parse_expr("x11 + y")
    with pytest.raises(InvalidInputError):
        gl11_model.parse_expr("reciprocal(x12)")


def test_symbolic_inverse(cp12_model):
    g = cp12_model.point([[1, 2, 0], [1, 1, 0], [0, 0, -1]])
    expected = inverse(g.matrix)
    for i in range(3):
        for j in range(3):
            assert cp12_model.eval_expr(cp12_model.symbolic_inverse[i][j], g) == expected[i][j]


def test_substitute(cp12_model):
    t = sympy.Symbol("t")
    f = cp12_model.parse_expr("x11*x33 + x21")
    value = cp12_model.substitute(f, [[t, 0, 0], [1, 1, 0], [0, 0, 2]])
    assert sympy.expand(value - (2 * t + 1)) == 0


def test_right_invariant_derivative(cp12_model):
    algebra = cp12_model.algebra
    e12 = algebra.vector({"E12": 1})
    x11 = cp12_model.coordinate(1, 1)
    assert cp12_model.riv_derive(e12, x11) == cp12_model.coordinate(2, 1)
    assert cp12_model.riv_derive(algebra.vector({"E33": 1}), x11) == 0
    with pytest.raises(InvalidInputError):
        cp12_model.riv_derive(algebra.vector({"E31": 1}), x11)

    # Agrees with the jet of f along (I + εX) g
    f = cp12_model.parse_expr("x21*reciprocal(x11) + x33*x12")
    x = algebra.vector({"E12": 1, "E21": 2, "E33": -1})
    g = cp12_model.point([[1, 2, 0], [1, 1, 0], [0, 0, -1]])
    jet = jet_eval(f, cp12_model.jet_point(g, cp12_model.even_matrix(x)))
    assert jet.value == cp12_model.eval_expr(f, g)
    assert jet.deriv == cp12_model.eval_expr(cp12_model.riv_derive(x, f), g)


def test_adjoint_action(gl11_model):
    algebra = gl11_model.algebra
    g = gl11_model.point([[2, 0], [0, 1]])
    assert gl11_model.ad_g(g, algebra.vector({"e12": 1})) == algebra.vector({"e12": 2})
    assert gl11_model.ad_g(g, algebra.vector({"e21": 1})) == algebra.vector({"e21": Fraction(1, 2)})
    assert gl11_model.ad_matrix(gl11_model.identity()) == identity(4)


def test_model_check(gl11_model, cp12_model):
    assert gl11_model.check().passed
    assert cp12_model.check().passed
    narrow = GroupModel(gl11_model.algebra, Pattern.parse(["10", "0*"]), "N")
    report = narrow.check()
    assert not report.passed
    assert [r.detail for r in report.failures] == ["e11 leaves the pattern at [(1, 1)]"]


def test_model_needs_matching_realization():
    with pytest.raises(InvalidInputError):
        GroupModel(load_algebra(fixture_path("gl11.json")), Pattern.full(3))
    bare = load_algebra(fixture_path("gl11_bad_jacobi.json"), allow_invalid=True)
    with pytest.raises(InvalidInputError, match="matrix realization"):
        GroupModel(bare, Pattern.full(2))


def test_sample_set(gl11_model):
    g = gl11_model.point([[2, 0], [0, 1]])
    samples = SampleSet(gl11_model, [g, g, gl11_model.identity()])
    assert len(samples) == 2
    assert samples.points[0] == gl11_model.identity()
    assert len(list(samples.tuples(2))) == 4
    assert samples.closure_check().passed
    closed = samples.closure()
    assert GroupPoint(to_matrix([[4, 0], [0, 1]])) in closed.points
    assert GroupPoint(to_matrix([[Fraction(1, 2), 0], [0, 1]])) in closed.points
    with pytest.raises(InvalidInputError):
        SampleSet(gl11_model, [g], closure_depth=0)


def test_random_samples_are_reproducible(cp12_model):
    x11 = cp12_model.coordinate(1, 1)
    first = SampleSet.random(cp12_model, random.Random(7), 5, avoid=[x11])
    second = SampleSet.random(cp12_model, random.Random(7), 5, avoid=[x11])
    assert first.points == second.points
    assert len(first) >= 5
    for g in first:
        assert cp12_model.contains(g)
        assert g.matrix[0][0] != ZERO


def test_expression_degree(gl11_model):
    x11, x22 = gl11_model.coordinate(1, 1), gl11_model.coordinate(2, 2)
    assert gl11_model.expression_degree(x11 * x11) == 2
    assert gl11_model.expression_degree(sympy.Integer(5)) == 0
    assert gl11_model.expression_degree(1 / x11) == 1
    assert gl11_model.expression_degree(gl11_model.det_inverse()) == 2
    assert gl11_model.expression_degree(x22 / x11 + 1) == 2


def test_equality_is_not_fooled_by_few_points(gl11_model):
    x11, x22 = gl11_model.coordinate(1, 1), gl11_model.coordinate(2, 2)
    flip = gl11_model.point([[-1, 0], [0, 1]])
    # x11² and 1 agree on both given points
    assert not gl11_model.expression_equal(x11 * x11, 1, [gl11_model.identity(), flip])
    assert not gl11_model.expression_equal(x11, x22, SampleSet(gl11_model, []))
    assert not gl11_model.expression_equal(x11, x22, [])
    assert gl11_model.expression_equal((x11 + 1) ** 2, x11**2 + 2 * x11 + 1, [])
    assert gl11_model.expression_equal(1 / x11 + 1 / x22, (x11 + x22) * gl11_model.det_inverse(), [])


def test_distinguishing_points(gl11_model, cp12_model):
    assert not gl11_model.distinguishes([], 0)
    assert not gl11_model.distinguishes([gl11_model.identity()], 0)
    assert gl11_model.distinguishes([gl11_model.identity(), gl11_model.point([[2, 0], [0, 3]])], 0)
    x11 = cp12_model.coordinate(1, 1)
    points = cp12_model.distinguishing_points([cp12_model.identity()], 3, avoid=[x11])
    assert points[0] == cp12_model.identity()
    assert cp12_model.distinguishes(points, 3)
    for i, j in cp12_model.pattern.free_entries:
        assert len({g.matrix[i][j] for g in points}) > 4
    assert all(cp12_model.contains(g) and g.matrix[0][0] != ZERO for g in points)
    assert cp12_model.distinguishing_points(points, 3) == points

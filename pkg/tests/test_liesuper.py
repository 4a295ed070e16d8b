import pytest

from sgk.exactnum import ONE, ZERO, Scalar
from sgk.exceptions import ClosureError, InvalidInputError, ParentMismatchError, SpanError
from sgk.inputs import fixture_path, load_algebra
from sgk.liesuper import LieSuperAlgebra, SuperBasis, SuperSubspace, odd_quotient, supercommutator

E11 = [[1, 0], [0, 0]]
E22 = [[0, 0], [0, 1]]
E12 = [[0, 1], [0, 0]]
E21 = [[0, 0], [1, 0]]


@pytest.fixture
def gl11():
    return load_algebra(fixture_path("gl11.json"))


def test_gl11_satisfies_jacobi(gl11):
    assert gl11.jacobi_violations() == []
    report = gl11.check_jacobi()
    assert report.passed
    assert report.lines() == ["PASS liesuper.jacobi 64 triples"]


def test_modified_bracket_breaks_jacobi():
    algebra = load_algebra(fixture_path("gl11_bad_jacobi.json"), allow_invalid=True)
    violations = algebra.jacobi_violations()
    assert violations
    assert not algebra.check_jacobi().passed
    # [e12, [e12, e21]] no longer vanishes
    e12 = algebra.basis.index("e12")
    e21 = algebra.basis.index("e21")
    assert any(triple == (e12, e12, e21) for triple, _ in violations)


def test_bracket_super_antisymmetry(gl11):
    e12 = gl11.basis_vector(gl11.basis.index("e12"))
    e21 = gl11.basis_vector(gl11.basis.index("e21"))
    e11 = gl11.basis_vector(gl11.basis.index("e11"))
    assert gl11.bracket(e12, e21) == gl11.vector({"e11": 1, "e22": 1})
    assert gl11.bracket(e21, e12) == gl11.bracket(e12, e21)
    assert gl11.bracket(e11, e12) == e12
    assert gl11.bracket(e12, e11) == tuple(-c for c in e12)
    assert gl11.bracket(e12, e12) == (ZERO,) * 4
    assert gl11.format(gl11.bracket(e12, e21)) == "e11+e22"


def test_rejects_inconsistent_brackets():
    basis = SuperBasis(("a", "x"), (0, 1))
    with pytest.raises(InvalidInputError, match="super-antisymmetry"):
        LieSuperAlgebra(basis, {(0, 1): (0, 1), (1, 0): (0, 1)})
    with pytest.raises(InvalidInputError, match="parity-homogeneous"):
        LieSuperAlgebra(basis, {(0, 1): (1, 0)})
    with pytest.raises(InvalidInputError, match="must vanish"):
        LieSuperAlgebra(basis, {(0, 0): (1, 0)})
    # [x, x] of an odd element may be nonzero
    algebra = LieSuperAlgebra(basis, {(1, 1): (2, 0)})
    assert algebra.odd_bracket_witness() == (1, 1)


def test_super_basis_validation():
    with pytest.raises(InvalidInputError):
        SuperBasis(("x", "a"), (1, 0))
    with pytest.raises(InvalidInputError):
        SuperBasis(("a", "a"), (0, 0))
    basis = SuperBasis(("a", "b", "x"), (0, 0, 1))
    assert list(basis.odd_indices) == [2]
    assert basis.vector_parity((ONE, ZERO, ZERO)) == 0
    assert basis.vector_parity((ZERO, ZERO, ONE)) == 1
    assert basis.vector_parity((ONE, ZERO, ONE)) is None
    with pytest.raises(InvalidInputError):
        basis.index("y")


def test_odd_bracket_witness(gl11):
    assert gl11.odd_bracket_witness() == (gl11.basis.index("e12"), gl11.basis.index("e21"))
    assert load_algebra(fixture_path("abelian2.json")).odd_bracket_witness() is None


def test_structure_constants_from_matrices(gl11):
    algebra = LieSuperAlgebra.from_matrix_basis(
        [(1, E12), (0, E11), (0, E22), (1, E21)], 1, 1, ["e12", "e11", "e22", "e21"]
    )
    assert algebra.basis.names == ("e11", "e22", "e12", "e21")
    assert algebra.brackets == gl11.brackets
    assert algebra.check_jacobi().passed


def test_matrix_span_must_close():
    with pytest.raises(ClosureError) as info:
        LieSuperAlgebra.from_matrix_basis([(1, E12), (1, E21)], 1, 1, ["e12", "e21"])
    assert info.value.pair == ("e12", "e21")
    with pytest.raises(InvalidInputError, match="parity"):
        LieSuperAlgebra.from_matrix_basis([(0, E12)], 1, 1)


def test_subspace_closure(gl11):
    v = gl11.vector
    borel = SuperSubspace.spanned(gl11, [v({"e11": 1}), v({"e22": 1}), v({"e12": 1})])
    assert borel.bracket_witness() is None
    sub, inclusion = borel.as_algebra(["a", "b", "x"])
    assert sub.basis.names == ("a", "b", "x")
    assert sub.check_jacobi().passed
    assert sub.structure(0, 2) == (ZERO, ZERO, ONE)
    assert len(inclusion) == 4 and len(inclusion[0]) == 3
    assert sub.realization is not None

    open_span = SuperSubspace.spanned(gl11, [v({"e11": 1}), v({"e12": 1}), v({"e21": 1})])
    assert open_span.bracket_witness() == (v({"e12": 1}), v({"e21": 1}))
    with pytest.raises(ClosureError):
        open_span.as_algebra()


def test_subspace_parts(gl11):
    whole = SuperSubspace.whole(gl11)
    assert whole.dim == 4
    assert whole.odd().dim == 2
    assert SuperSubspace.even_part(gl11).dim == 2
    assert whole.coordinates(gl11.vector({"e21": 3})) == (ZERO, ZERO, ZERO, Scalar(3))
    with pytest.raises(InvalidInputError):
        SuperSubspace.spanned(gl11, [gl11.vector({"e11": 1, "e12": 1})])


def test_odd_quotient(gl11):
    g1 = SuperSubspace.odd_part(gl11)
    h1 = SuperSubspace.spanned(gl11, [gl11.vector({"e12": 1})])
    quotient = odd_quotient(g1, h1)
    assert quotient.dim == 1
    assert quotient.project(gl11.vector({"e21": 1})) == (ONE,)
    assert quotient.project(gl11.vector({"e12": 5})) == (ZERO,)
    assert quotient.lift((ONE,)) == gl11.vector({"e21": 1})
    with pytest.raises(SpanError):
        quotient.project(gl11.vector({"e11": 1}))

    other = load_algebra(fixture_path("gl11.json"))
    with pytest.raises(ParentMismatchError):
        odd_quotient(g1, SuperSubspace.odd_part(other))


def test_every_unit_change_of_a_structure_constant_breaks_jacobi(gl11):
    table = {(i, j): gl11.structure(i, j) for i in range(gl11.dim) for j in range(i, gl11.dim)}
    broken = rejected = 0
    for (i, j), vector in table.items():
        for k in range(gl11.dim):
            mutated = dict(table)
            mutated[(i, j)] = tuple(c + ONE if m == k else c for m, c in enumerate(vector))
            try:
                algebra = LieSuperAlgebra(gl11.basis, mutated)
            except InvalidInputError:
                rejected += 1
                continue
            assert not algebra.check_jacobi().passed, (gl11.name(i), gl11.name(j), gl11.name(k))
            broken += 1
    # 16 parity-compatible changes, the other 24 are refused on construction
    assert (broken, rejected) == (16, 24)


def test_matrix_brackets_are_supercommutators():
    gl21 = load_algebra(fixture_path("gl21.json"))
    real = gl21.realization
    assert real is not None
    algebra = LieSuperAlgebra.from_matrix_basis(
        [(gl21.parity(i), real.matrices[i]) for i in range(gl21.dim)],
        real.m,
        real.n,
        gl21.basis.names,
    )
    assert algebra.basis.names == gl21.basis.names
    for i in range(algebra.dim):
        for j in range(algebra.dim):
            expected = real.expand(
                supercommutator(real.matrices[i], real.matrices[j], algebra.parity(i), algebra.parity(j))
            )
            assert algebra.bracket(algebra.basis_vector(i), algebra.basis_vector(j)) == expected


def test_odd_quotient_by_zero_and_full_subspaces(gl11):
    g1 = SuperSubspace.odd_part(gl11)
    e12 = gl11.vector({"e12": 1})
    e21 = gl11.vector({"e21": 1})

    by_zero = odd_quotient(g1, SuperSubspace.spanned(gl11, []))
    assert by_zero.dim == 2
    assert by_zero.project(e12) == (ONE, ZERO)
    assert by_zero.project(e21) == (ZERO, ONE)
    assert by_zero.lift((Scalar(2), Scalar(-1))) == gl11.vector({"e12": 2, "e21": -1})

    by_all = odd_quotient(g1, g1)
    assert by_all.dim == 0
    assert by_all.project(e12) == ()
    assert by_all.lift(()) == (ZERO,) * gl11.dim

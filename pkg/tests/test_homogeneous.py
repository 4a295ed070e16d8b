import random
from fractions import Fraction

import pytest

from sgk.exactnum import Scalar, identity, inverse, transpose
from sgk.exceptions import DimensionMismatchError, InvalidInputError, ParentMismatchError
from sgk.groupmodel import Pattern
from sgk.homogeneous import (
    CP12_GROUP_PATTERN,
    CP12_SUBGROUP_PATTERN,
    CRITERION_INAPPLICABLE,
    SPLIT,
    HCSubpair,
    HomBundleFn,
    algebra_from_pattern,
    bundle_section,
    coset_grading_check,
    coset_membership,
    cp12_bundle_function,
    cp12_demo,
    cp12_member,
    even_pattern,
    hom_bundle_fn_check,
    isotropy_rep,
    span_from_pattern,
    split_homogeneous_check,
    subpair_check,
    wedge_compatibility_check,
)
from sgk.inputs import fixture_path, load_model, load_section, load_subpair
from sgk.supergroup import grading_project, hcp_morphism_apply


@pytest.fixture(scope="module")
def cp12():
    return load_subpair(fixture_path("cp12_subpair.json"))


@pytest.fixture(scope="module")
def rep(cp12):
    return isotropy_rep(cp12.subpair)


def _diag(pair, t):
    return pair.group.point([[t, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_cp12_subpair_passes(cp12):
    report = subpair_check(cp12.pair, cp12.subpair)
    assert report.passed
    checks = {r.check for r in report.results}
    assert {"subpair.P'.bracket_closed", "subpair.P'.h0_is_lie_h", "subpair.P'.alpha_restricts"} <= checks


def test_span_that_is_not_a_subalgebra(cp12):
    bad = load_subpair(fixture_path("cp12_bad_subpair.json"))
    report = subpair_check(bad.pair, bad.subpair)
    assert [r.check for r in report.failures] == ["subpair.Q.bracket_closed"]
    assert "E32" in report.failures[0].detail
    with pytest.raises(ParentMismatchError):
        subpair_check(cp12.pair, bad.subpair)


def test_improper_subpair(cp12):
    whole = HCSubpair.improper(cp12.pair)
    assert subpair_check(cp12.pair, whole).passed
    assert whole.algebra.dim == cp12.pair.algebra.dim


def test_subpair_pattern_must_match(cp12):
    with pytest.raises(DimensionMismatchError):
        HCSubpair(cp12.pair, Pattern.parse(["*0", "0*"]), [])


def test_trivial_subgroup_on_a_nonsplit_pair():
    pair = load_model(fixture_path("gl11_model.json")).pair
    trivial = HCSubpair.trivial(pair)
    assert trivial.algebra.dim == 0
    verdict = split_homogeneous_check(pair, trivial)
    assert verdict.verdict == CRITERION_INAPPLICABLE
    assert verdict.quotient_dim == 2
    rep = isotropy_rep(trivial)
    assert rep.dim == 2
    assert rep(pair.group.identity()) == identity(2)
    assert list(verdict.psi.values()) == [identity(2)]


def test_trivial_subgroup_of_cp12_keeps_every_odd_direction(cp12):
    verdict = split_homogeneous_check(cp12.pair, HCSubpair.trivial(cp12.pair))
    assert verdict.verdict == SPLIT
    assert verdict.quotient_dim == len(cp12.pair.algebra.basis.odd_indices) == 2


def test_inclusion_is_a_morphism(cp12):
    sub = cp12.subpair
    inclusion = sub.inclusion_morphism()
    assert inclusion.check(sub.samples).passed
    assert inclusion.mu_compatibility_check(sub.samples, 1).passed


def test_morphism_apply_is_the_pullback(cp12):
    sub = cp12.subpair
    inclusion = sub.inclusion_morphism()
    member = load_section(fixture_path("cp12_member.json"), cp12.pair)
    pulled = hcp_morphism_apply(inclusion, member)
    assert pulled.pair is sub.pair
    assert pulled.table == inclusion.pullback(member).table
    env = sub.pair.env
    for monomial in env.monomials(1):
        u = env.element({monomial: 1})
        for h in sub.samples:
            assert pulled.evaluate(u, h) == inclusion.evaluate_pullback(member, u, h)


@pytest.mark.parametrize("t", [2, 3, Fraction(1, 2), -1])
def test_isotropy_character(cp12, rep, t):
    assert rep.dim == 1
    assert rep(_diag(cp12.pair, t)) == ((Scalar(t),),)


def test_isotropy_is_a_representation(rep):
    report = rep.check()
    assert report.passed
    assert {r.check for r in report.results} == {"isotropy.identity", "isotropy.homomorphism"}


def test_cp12_is_split(cp12):
    verdict = split_homogeneous_check(cp12.pair, cp12.subpair)
    assert verdict.verdict == SPLIT
    assert verdict.witness is None
    assert verdict.quotient_dim == 1
    assert verdict.report.passed
    assert any(r.detail.startswith("ψ(") for r in verdict.report.results)


def test_criterion_inapplicable_with_odd_brackets():
    pair = load_model(fixture_path("gl11_model.json")).pair
    algebra = pair.algebra
    span = [algebra.vector({name: 1}) for name in ("e11", "e22", "e12")]
    borel = HCSubpair(pair, Pattern.parse(["*0", "0*"]), span, name="B")
    assert subpair_check(pair, borel).passed
    verdict = split_homogeneous_check(pair, borel)
    assert verdict.verdict == CRITERION_INAPPLICABLE
    assert verdict.witness == (2, 3)
    assert verdict.quotient_dim == 1
    failed = verdict.report.failures
    assert len(failed) == 1
    assert failed[0].detail == f"{CRITERION_INAPPLICABLE}: [e12, e21] = e11+e22"


def test_bundle_equivariance(cp12, rep):
    group = cp12.pair.group
    ratio = group.coordinate(3, 3) / group.coordinate(1, 1)
    good = cp12_bundle_function(cp12.subpair, rep, ratio)
    bad = cp12_bundle_function(cp12.subpair, rep, 1 / group.coordinate(1, 1))
    assert hom_bundle_fn_check(good, cp12.samples, cp12.subpair.points).passed
    report = hom_bundle_fn_check(bad, cp12.samples, cp12.subpair.points, name="bad")
    assert not report.passed
    assert report.failures[0].check == "bad.equivariant"


def test_bundle_sections_match_shipped_tables(cp12, rep):
    group = cp12.pair.group
    x11, x33 = group.coordinate(1, 1), group.coordinate(3, 3)
    member = load_section(fixture_path("cp12_member.json"), cp12.pair)
    outsider = load_section(fixture_path("cp12_nonmember.json"), cp12.pair)
    good = bundle_section(cp12.subpair, cp12_bundle_function(cp12.subpair, rep, x33 / x11))
    bad = bundle_section(cp12.subpair, cp12_bundle_function(cp12.subpair, rep, 1 / x11))
    assert good.equals(member, cp12.samples)
    assert bad.equals(outsider, cp12.samples)
    assert good.equals(cp12_member(cp12.subpair, [1], 1), cp12.samples)


def test_coset_membership(cp12):
    sub = cp12.subpair
    member = load_section(fixture_path("cp12_member.json"), cp12.pair)
    outsider = load_section(fixture_path("cp12_nonmember.json"), cp12.pair)
    found = coset_membership(sub, member, cp12.samples, 1)
    assert found
    assert found.witness is None
    assert found.checked > 0
    missing = coset_membership(sub, outsider, cp12.samples, 1)
    assert not missing
    assert missing.witness is not None
    assert coset_membership(sub, cp12.pair.one(), cp12.samples, 1)


def test_coset_sections_form_an_algebra(cp12):
    sub = cp12.subpair
    odd = cp12_member(sub, [1, 2], 1)
    even = cp12_member(sub, [0, 1, -1], 0)
    assert coset_membership(sub, odd, cp12.samples, 1)
    assert coset_membership(sub, even, cp12.samples, 1)
    assert coset_membership(sub, even * odd, cp12.samples, 1)
    with pytest.raises(InvalidInputError):
        cp12_member(sub, [1], 2)


@pytest.mark.parametrize("seed", range(10))
def test_random_coset_products_stay_in_the_coset_algebra(cp12, seed):
    sub = cp12.subpair
    rng = random.Random(seed)
    for _ in range(5):
        a = cp12_member(sub, [rng.randint(-2, 2) for _ in range(3)], rng.choice([0, 1]))
        b = cp12_member(sub, [rng.randint(-2, 2) for _ in range(3)], rng.choice([0, 1]))
        assert coset_membership(sub, a * b, cp12.samples, 1)


def test_graded_components_of_coset_sections(cp12):
    sub = cp12.subpair
    even = cp12_member(sub, [0, 1, -1], 0)
    odd = cp12_member(sub, [1, 2], 1)
    mixed = even + odd
    assert mixed.degrees == {0, 1}
    assert grading_project(mixed, 0).table == even.table
    assert grading_project(mixed, 2).table == {}
    report = coset_grading_check(sub, mixed, cp12.samples, 1, name="mixed")
    assert report.passed
    assert [r.check for r in report.results] == ["mixed.grading", "mixed.grading", "mixed.grading_sum"]

    outsider = load_section(fixture_path("cp12_nonmember.json"), cp12.pair)
    report = coset_grading_check(sub, even + outsider, cp12.samples, 1, name="mixed")
    assert not report.passed
    assert [r.detail.split(":")[0] for r in report.failures] == ["degree 1"]


def _row_bundle(pair, row):
    """Row `row` of the gl(2) block, equivariant for the inverse transpose of the block"""
    group = pair.group

    def theta(h):
        block = [list(r[:2]) for r in h.matrix[:2]]
        return inverse(transpose(block))

    return HomBundleFn(group, theta, 2, {(0,): group.coordinate(row, 1), (1,): group.coordinate(row, 2)})


def test_wedge_of_equivariant_functions(cp12):
    pair = cp12.pair
    first, second = _row_bundle(pair, 1), _row_bundle(pair, 2)
    product = first.wedge(second)
    assert product.degree == 2
    group = pair.group
    g = group.point([[1, 2, 0], [1, 1, 0], [0, 0, -1]])
    # x11 x22 - x12 x21
    assert product.value(g) == (Scalar(-1),)
    report = wedge_compatibility_check(first, second, cp12.samples, list(cp12.samples))
    assert report.passed
    assert {r.check for r in report.results} == {"wedge.theta_power_2", "wedge.equivariant"}


def test_bundle_function_validation(cp12, rep):
    group = cp12.pair.group
    with pytest.raises(InvalidInputError):
        HomBundleFn(group, rep, 2, {(1, 0): 1})
    with pytest.raises(InvalidInputError):
        HomBundleFn(group, rep, 2, {(0,): 1, (0, 1): 1})
    with pytest.raises(DimensionMismatchError):
        bundle_section(cp12.subpair, _row_bundle(cp12.pair, 1))


def test_pattern_helpers():
    algebra = algebra_from_pattern(CP12_GROUP_PATTERN, 2, 1)
    assert algebra.basis.names == ("E11", "E12", "E21", "E22", "E33", "E31", "E32")
    assert algebra.odd_bracket_witness() is None
    span = span_from_pattern(algebra, CP12_SUBGROUP_PATTERN)
    assert len(span) == 5
    assert even_pattern(CP12_GROUP_PATTERN, 2).rows() == ["**0", "**0", "00*"]
    with pytest.raises(DimensionMismatchError):
        algebra_from_pattern(CP12_GROUP_PATTERN, 1, 1)


def test_cp12_demo_passes():
    report = cp12_demo(seed=0)
    assert report.passed
    checks = {r.check for r in report.results}
    assert {
        "cp12.psi_character",
        "cp12.coset_member",
        "cp12.coset_violation",
        "cp12.mixed.grading",
        "cp12.mixed.grading_sum",
        "verdict",
    } <= checks
    member = next(r for r in report.results if r.check == "cp12.coset_member")
    assert member.detail.endswith("up to degree 1")

#! /usr/bin/env python3

"""Homogeneous superspaces G/H: subpairs, the coset sheaf, the isotropy representation
and the homogeneous bundle picture of split quotients, with CP^{1|2} wired end to end."""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Mapping, Optional, Sequence

import sympy

from sgk.envelope import Monomial, Terms, Word, exterior_power, psi_v_iso
from sgk.exactnum import (
    ONE,
    ZERO,
    Matrix,
    Scalar,
    Vector,
    identity,
    linear_combination,
    matmul,
    matvec,
    perm_sign,
    rank,
    to_matrix,
    transpose,
)
from sgk.exceptions import DimensionMismatchError, InvalidInputError, ParentMismatchError
from sgk.groupmodel import EntryConstraint, FunctionExpr, GroupModel, GroupPoint, Pattern, SampleSet
from sgk.liesuper import LieSuperAlgebra, OddQuotient, SuperSubspace, odd_quotient
from sgk.report import Report
from sgk.supergroup import (
    GroupHom,
    HCMorphism,
    HCPair,
    MergedSlot,
    Section,
    SectionPullback,
    grading_project,
    split_check,
)

logger = logging.getLogger(__name__)

SUITE = "homogeneous"

SPLIT = "SPLIT"
CRITERION_INAPPLICABLE = "CRITERION_INAPPLICABLE"


class HCSubpair:
    """A candidate subpair (H, h) of a pair (G, g): a subgroup pattern, a span in g and
    exact points of H"""

    def __init__(
        self,
        parent: HCPair,
        pattern: Pattern,
        span: Sequence[Sequence[Any]],
        points: Sequence[GroupPoint] = (),
        closure_depth: int = 2,
        name: str = "H",
    ):
        if pattern.n != parent.group.n:
            raise DimensionMismatchError(
                f"subgroup pattern is {pattern.n}x{pattern.n}, group is {parent.group.n}x{parent.group.n}"
            )
        self.parent = parent
        self.pattern = pattern
        self.subspace = SuperSubspace.spanned(parent.algebra, span)
        self.points = tuple(points)
        self.closure_depth = closure_depth
        self.name = name
        self._images: dict[Monomial, Terms] = {}

    @classmethod
    def trivial(cls, parent: HCPair) -> HCSubpair:
        n = parent.group.n
        pattern = Pattern(
            tuple(tuple(EntryConstraint.UNIT if i == j else EntryConstraint.ZERO for j in range(n)) for i in range(n))
        )
        return cls(parent, pattern, (), name="e")

    @classmethod
    def improper(cls, parent: HCPair) -> HCSubpair:
        span = [parent.algebra.basis_vector(i) for i in range(parent.algebra.dim)]
        return cls(parent, parent.group.pattern, span, name=parent.name)

    @cached_property
    def _algebra(self) -> tuple[LieSuperAlgebra, Matrix]:
        return self.subspace.as_algebra()

    @property
    def algebra(self) -> LieSuperAlgebra:
        """h in its own basis; raises ClosureError when the span is not a subalgebra"""
        return self._algebra[0]

    @property
    def inclusion(self) -> Matrix:
        return self._algebra[1]

    @cached_property
    def model(self) -> GroupModel:
        return GroupModel(self.algebra, self.pattern, self.name)

    @cached_property
    def samples(self) -> SampleSet:
        return SampleSet(self.model, self.points, self.closure_depth)

    @cached_property
    def pair(self) -> HCPair:
        return HCPair(self.model, validate=False, name=self.name)

    def inclusion_morphism(self) -> HCMorphism:
        return HCMorphism(
            self.pair,
            self.parent,
            GroupHom.inclusion(self.model, self.parent.group),
            self.inclusion,
            samples=self.samples,
            name=f"{self.name}⊆{self.parent.name}",
        )

    def image_monomial(self, monomial: Monomial) -> Terms:
        """A PBW monomial of U(h) as an element of U(g)"""
        cached = self._images.get(monomial)
        if cached is None:
            env = self.pair.env
            u = env.element({monomial: ONE})
            cached = env.apply_linear(self.inclusion, u, self.parent.env).terms
            self._images[monomial] = cached
        return cached


def _tangent_dimension(parent: HCPair, pattern: Pattern) -> int:
    """dim of the even matrices of g that are tangent to the pattern"""
    real = parent.algebra.realization
    assert real is not None
    evens = list(parent.algebra.basis.even_indices)
    constraints = [
        [real.matrices[k][i][j] for k in evens]
        for i in range(pattern.n)
        for j in range(pattern.n)
        if pattern.mask[i][j] is not EntryConstraint.FREE
    ]
    return len(evens) - rank(constraints)


def subpair_check(parent: HCPair, candidate: HCSubpair) -> Report:
    """Bracket closure, h0 = Lie H, and α_H = α_G restricted to H"""
    if candidate.parent is not parent:
        raise ParentMismatchError("candidate belongs to a different pair")
    report = Report()
    prefix = f"subpair.{candidate.name}"
    algebra = parent.algebra
    witness = candidate.subspace.bracket_witness()
    if witness is None:
        report.add(SUITE, f"{prefix}.bracket_closed", True, f"dim h = {candidate.subspace.dim}")
    else:
        x, y = witness
        report.add(
            SUITE,
            f"{prefix}.bracket_closed",
            False,
            f"[{algebra.format(x)}, {algebra.format(y)}] = {algebra.format(algebra.bracket(x, y))} leaves h",
        )

    real = algebra.realization
    assert real is not None
    h0 = candidate.subspace.vectors_of_parity(0)
    leaving = [v for v in h0 if candidate.pattern.tangent_violations(real.matrix_of(v))]
    tangent_dim = _tangent_dimension(parent, candidate.pattern)
    detail = f"dim h0 = {len(h0)}, dim Lie H = {tangent_dim}"
    if leaving:
        detail += f", {algebra.format(leaving[0])} leaves the subgroup pattern"
    report.add(SUITE, f"{prefix}.h0_is_lie_h", not leaving and len(h0) == tangent_dim, detail)

    outside = [h for h in candidate.points if not parent.group.contains(h)]
    detail = f"{len(candidate.points)} points" + (f", {outside[0]} is not in G" if outside else "")
    report.add(SUITE, f"{prefix}.samples_in_group", not outside, detail)
    if outside:
        return report

    moved = []
    for h in candidate.points:
        a = parent.alpha_matrix(h)
        for v in candidate.subspace.span:
            if not candidate.subspace.contains(matvec(a, v)):
                moved.append(f"α({h}) {algebra.format(v)}")
    detail = f"{len(candidate.points)} points" + (f", {moved[0]} leaves h" if moved else "")
    report.add(SUITE, f"{prefix}.alpha_invariant", not moved, detail)

    if witness is None and not moved:
        disagree = []
        for h in candidate.samples:
            lhs = matmul(parent.alpha_matrix(h), candidate.inclusion)
            rhs = matmul(candidate.inclusion, candidate.pair.alpha_matrix(h))
            if lhs != rhs:
                disagree.append(h)
        report.add(
            SUITE,
            f"{prefix}.alpha_restricts",
            not disagree,
            f"{len(candidate.samples)} points" + (f", differs at {disagree[0]}" if disagree else ""),
        )
        report.extend(candidate.model.check())
    return report


# The coset sheaf


@dataclass(frozen=True)
class Membership:
    member: bool
    witness: Optional[str]
    checked: int

    def __bool__(self) -> bool:
        return self.member


def coset_membership(sub: HCSubpair, f: Section, samples: SampleSet, degree: int) -> Membership:
    """Whether f(X·α(g)Y)(gh) = ε(Y) f(X)(g) for odd words X, monomials Y of U(h), g and h
    in the sample sets"""
    if f.pair is not sub.parent:
        raise ParentMismatchError("section is not over the parent pair")
    env = sub.parent.env
    mu = MergedSlot(SectionPullback(f), 0)
    xs = [w for w in env.monomials(len(sub.parent.algebra.basis.odd_indices)) if env.split(w)[0] == ()]
    ys = sub.pair.env.monomials(degree)
    checked = 0
    for y in ys:
        image = sub.image_monomial(y)
        for x in xs:
            for g in samples:
                for h in sub.samples:
                    checked += 1
                    lhs = mu.evaluate_terms([{x: ONE}, image], [g, h])
                    rhs = f.evaluate_monomial(x, g) if not y else ZERO
                    if lhs != rhs:
                        witness = (
                            f"X = {env.monomial_name(x)}, Y = {sub.pair.env.monomial_name(y)}, "
                            f"g = {g}, h = {h}: {lhs} != {rhs}"
                        )
                        return Membership(False, witness, checked)
    return Membership(True, None, checked)


def coset_grading_check(
    sub: HCSubpair, f: Section, samples: SampleSet, degree: int, name: str = "coset"
) -> Report:
    """The coset sheaf is graded: each degree component of f is a coset section on its own,
    and the components add back up to f"""
    report = Report()
    parts = {p: grading_project(f, p) for p in sorted(f.degrees)}
    for p, part in parts.items():
        found = coset_membership(sub, part, samples, degree)
        report.add(SUITE, f"{name}.grading", found.member, f"degree {p}: {found.witness or 'coset section'}")
    total = sum(parts.values(), Section(f.pair, {}))
    report.add(SUITE, f"{name}.grading_sum", total.equals(f, samples), f"degrees {sorted(parts)}")
    return report


# Isotropy representation


def _psi(sub: HCSubpair, quotient: OddQuotient, h: GroupPoint) -> Matrix:
    """ψ(h) on (g1/h1)*, the transpose of the map induced by α(h⁻¹) on g1/h1"""
    parent = sub.parent
    a = parent.alpha_matrix(parent.group.group_inv(h))
    for v in quotient.sub.span:
        if not quotient.sub.contains(matvec(a, v)):
            raise InvalidInputError(f"α({h}⁻¹) moves {parent.algebra.format(v)} out of h1")
    columns = [quotient.project(matvec(a, c)) for c in quotient.complement]
    induced = tuple(tuple(col[r] for col in columns) for r in range(quotient.dim))
    return to_matrix(transpose(induced)) if induced else ()


@dataclass
class IsotropyRep:
    subpair: HCSubpair
    quotient: OddQuotient
    matrices: dict[GroupPoint, Matrix] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def __call__(self, h: GroupPoint) -> Matrix:
        cached = self.matrices.get(h)
        if cached is None:
            cached = _psi(self.subpair, self.quotient, h)
            self.matrices[h] = cached
        return cached

    def check(self) -> Report:
        report = Report()
        samples = self.subpair.samples
        group = self.subpair.parent.group
        report.add(SUITE, "isotropy.identity", self(group.identity()) == identity(self.dim), f"dim {self.dim}")
        broken = [
            f"{g}*{h}"
            for g, h in samples.tuples(2)
            if self(group.group_mul(g, h)) != matmul(self(g), self(h))
        ]
        detail = f"{len(samples) ** 2} pairs" + (f", fails at {broken[0]}" if broken else "")
        report.add(SUITE, "isotropy.homomorphism", not broken, detail)
        return report


def isotropy_rep(sub: HCSubpair, points: Optional[Sequence[GroupPoint]] = None) -> IsotropyRep:
    g1 = SuperSubspace.odd_part(sub.parent.algebra)
    quotient = odd_quotient(g1, sub.subspace.odd())
    rep = IsotropyRep(sub, quotient)
    for h in points if points is not None else sub.samples:
        rep(h)
    logger.debug("isotropy representation of dimension %d on %d points", rep.dim, len(rep.matrices))
    return rep


def _format_matrix(matrix: Matrix) -> str:
    return "[" + ",".join("[" + ",".join(str(v) for v in row) + "]" for row in matrix) + "]"


@dataclass
class HomogeneousVerdict:
    verdict: str
    witness: Optional[tuple[int, int]]
    quotient_dim: int
    psi: dict[GroupPoint, Matrix]
    report: Report


def split_homogeneous_check(pair: HCPair, sub: HCSubpair) -> HomogeneousVerdict:
    """All G-homogeneous superspaces are split when [g1, g1] = 0; for such pairs the
    quotient is described by ψ"""
    split = split_check(pair)
    report = Report()
    algebra = pair.algebra
    rep = isotropy_rep(sub)
    g1_dim = len(algebra.basis.odd_indices)
    h1_dim = len(sub.subspace.vectors_of_parity(1))
    report.add(
        SUITE,
        "quotient_dimension",
        rep.dim == g1_dim - h1_dim,
        f"dim g1/h1 = {rep.dim} = {g1_dim} - {h1_dim}",
    )
    if not split.split:
        assert split.witness is not None
        i, j = split.witness
        report.add(
            SUITE,
            "verdict",
            False,
            f"{CRITERION_INAPPLICABLE}: [{algebra.name(i)}, {algebra.name(j)}] = "
            f"{algebra.format(algebra.structure(i, j))}",
        )
        return HomogeneousVerdict(CRITERION_INAPPLICABLE, split.witness, rep.dim, dict(rep.matrices), report)
    report.extend(rep.check())
    for h, m in sorted(rep.matrices.items(), key=lambda item: str(item[0])):
        report.add(SUITE, "isotropy.matrix", True, f"ψ({h}) = {_format_matrix(m)}")
    report.add(SUITE, "verdict", True, f"{SPLIT}: rank {rep.dim} bundle, ⋀E^ψ models the quotient")
    return HomogeneousVerdict(SPLIT, None, rep.dim, dict(rep.matrices), report)


# Homogeneous bundle functions


class HomBundleFn:
    """A ⋀^k E-valued function on G with E carrying a representation θ of H.

    components maps increasing k-subsets K of range(rank) to coordinate functions; the
    value at g is Σ_K components[K](g) e_K.
    """

    def __init__(
        self,
        group: GroupModel,
        theta: Callable[[GroupPoint], Matrix],
        rank: int,
        components: Mapping[Sequence[int], Any],
        degree: Optional[int] = None,
    ):
        self.group = group
        self.theta = theta
        self.rank = rank
        entries: dict[Word, FunctionExpr] = {}
        for key, value in components.items():
            k = tuple(key)
            if list(k) != sorted(set(k)) or any(not 0 <= a < rank for a in k):
                raise InvalidInputError(f"component index {list(k)} is not an increasing subset of range({rank})")
            entries[k] = sympy.sympify(value)
        degrees = {len(k) for k in entries}
        if degree is None:
            if len(degrees) > 1:
                raise InvalidInputError("bundle function mixes exterior degrees")
            degree = degrees.pop() if degrees else 0
        elif degrees - {degree}:
            raise InvalidInputError(f"components of degree other than {degree}")
        self.degree = degree
        self.components = entries

    def subsets(self) -> list[Word]:
        return list(itertools.combinations(range(self.rank), self.degree))

    def theta_power(self, h: GroupPoint) -> Matrix:
        """⋀^k θ(h) on the basis e_K"""
        minors = exterior_power(self.theta(h), self.degree)
        keys = self.subsets()
        return to_matrix([[minors.get((a, b), ZERO) for b in keys] for a in keys])

    def value(self, g: GroupPoint) -> Vector:
        zero = sympy.Integer(0)
        return tuple(self.group.eval_expr(self.components.get(k, zero), g) for k in self.subsets())

    def wedge(self, other: HomBundleFn) -> HomBundleFn:
        """The ⋀θ-valued product f1 ∧ f2"""
        if other.group is not self.group or other.rank != self.rank:
            raise ParentMismatchError("wedge of bundle functions over different bundles")
        result: dict[Word, FunctionExpr] = {}
        for k1, a in self.components.items():
            for k2, b in other.components.items():
                if set(k1) & set(k2):
                    continue
                k = tuple(sorted(k1 + k2))
                sign = perm_sign(k1 + k2)
                term = sign * a * b
                result[k] = result[k] + term if k in result else term
        return HomBundleFn(self.group, self.theta, self.rank, result, self.degree + other.degree)


def hom_bundle_fn_check(
    b: HomBundleFn, samples: SampleSet, h_points: Sequence[GroupPoint], name: str = "bundle"
) -> Report:
    """θ(h) f(gh) = f(g) on all sample pairs"""
    report = Report()
    bad = None
    for g in samples:
        for h in h_points:
            lhs = matvec(b.theta_power(h), b.value(b.group.group_mul(g, h)))
            if tuple(lhs) != b.value(g):
                bad = f"g = {g}, h = {h}"
                break
        if bad:
            break
    report.add(
        SUITE,
        f"{name}.equivariant",
        bad is None,
        f"{len(samples) * len(h_points)} pairs" + (f", fails at {bad}" if bad else ""),
    )
    return report


def wedge_compatibility_check(
    b1: HomBundleFn, b2: HomBundleFn, samples: SampleSet, h_points: Sequence[GroupPoint]
) -> Report:
    """⋀θ is multiplicative and the wedge of equivariant functions is equivariant"""
    report = Report()
    product = b1.wedge(b2)
    k = product.degree
    bad = []
    for h1, h2 in itertools.product(h_points, repeat=2):
        h12 = b1.group.group_mul(h1, h2)
        if product.theta_power(h12) != matmul(product.theta_power(h1), product.theta_power(h2)):
            bad.append(f"{h1}*{h2}")
    detail = f"{len(h_points) ** 2} pairs" + (f", fails at {bad[0]}" if bad else "")
    report.add(SUITE, f"wedge.theta_power_{k}", not bad, detail)
    inputs_ok = hom_bundle_fn_check(b1, samples, h_points).passed and hom_bundle_fn_check(b2, samples, h_points).passed
    if inputs_ok:
        report.extend(hom_bundle_fn_check(product, samples, h_points, name="wedge"))
    return report


def bundle_section(sub: HCSubpair, b: HomBundleFn) -> Section:
    """The section of O_G attached to a ⋀^k (g1/h1)*-valued bundle function.

    The signed indicator map turns e_K into ±f^K on ⋀(g1/h1), and the table on a word w of
    g1 is Σ_K det[P Ad(x⁻¹)]_{K,w} t[K](x), with P the projection g1 -> g1/h1.
    """
    pair = sub.parent
    quotient = odd_quotient(SuperSubspace.odd_part(pair.algebra), sub.subspace.odd())
    if b.rank != quotient.dim:
        raise DimensionMismatchError(f"bundle rank {b.rank} differs from dim g1/h1 = {quotient.dim}")
    indicator: dict[Word, FunctionExpr] = {}
    for key, value in b.components.items():
        indicator.update(psi_v_iso(value, key))
    odd = list(pair.algebra.basis.odd_indices)
    ad_inverse = pair.alpha_symbolic_inverse
    projected = [
        [sympy.sympify(linear_combination(row, [ad_inverse[i][j] for i in range(pair.algebra.dim)])) for j in odd]
        for row in quotient.projection
    ]
    table: dict[Word, FunctionExpr] = {}
    minors = exterior_power(projected, b.degree)
    for (rows, cols), minor in minors.items():
        t = indicator.get(rows)
        if t is None:
            continue
        word = tuple(odd[c] for c in cols)
        term = sympy.sympify(minor) * t
        table[word] = table[word] + term if word in table else term
    return Section(pair, table)


# CP^{1|2} = G'/P'

CP12_GROUP_PATTERN = ("**0", "**0", "***")
CP12_SUBGROUP_PATTERN = ("**0", "0*0", "0**")
CP12_BLOCKS = (2, 1)


def algebra_from_pattern(rows: Sequence[str], m: int, n: int) -> LieSuperAlgebra:
    """The span of the elementary matrices E_ij at the free entries of a super pattern"""
    pattern = Pattern.parse(rows)
    if pattern.n != m + n:
        raise DimensionMismatchError(f"pattern is {pattern.n}x{pattern.n}, blocks are {m}|{n}")
    size = m + n
    matrices = []
    names = []
    for i, j in pattern.free_entries:
        parity = int((i >= m) != (j >= m))
        e = [[ONE if (a, b) == (i, j) else ZERO for b in range(size)] for a in range(size)]
        matrices.append((parity, e))
        names.append(f"E{i + 1}{j + 1}")
    return LieSuperAlgebra.from_matrix_basis(matrices, m, n, names)


def span_from_pattern(algebra: LieSuperAlgebra, rows: Sequence[str]) -> list[Vector]:
    """Basis vectors E_ij of algebra at the free entries of a super pattern"""
    pattern = Pattern.parse(rows)
    return [algebra.basis_vector(algebra.basis.index(f"E{i + 1}{j + 1}")) for i, j in pattern.free_entries]


def even_pattern(rows: Sequence[str], m: int) -> Pattern:
    """The group pattern of a super pattern: odd-block entries are fixed to 0"""
    pattern = Pattern.parse(rows)
    return Pattern(
        tuple(
            tuple(
                EntryConstraint.ZERO if (i >= m) != (j >= m) else c
                for j, c in enumerate(row)
            )
            for i, row in enumerate(pattern.mask)
        )
    )


def cp12_pair(rng: random.Random, samples: int = 4) -> tuple[HCPair, HCSubpair, SampleSet]:
    """(G', g') and its subpair (P', p') with exact samples; G' samples avoid x11 = 0"""
    m, n = CP12_BLOCKS
    algebra = algebra_from_pattern(CP12_GROUP_PATTERN, m, n)
    model = GroupModel(algebra, even_pattern(CP12_GROUP_PATTERN, m), "G'")
    g_samples = SampleSet.random(model, rng, samples, avoid=[model.coordinate(1, 1)])
    pair = HCPair(model, samples=g_samples, name="G'")
    h_pattern = even_pattern(CP12_SUBGROUP_PATTERN, m)
    span = span_from_pattern(algebra, CP12_SUBGROUP_PATTERN)
    scratch = HCSubpair(pair, h_pattern, span, name="P'")
    h_points = list(SampleSet.random(scratch.model, rng, samples).points[1:]) + [
        model.point([[2, 0, 0], [0, 1, 0], [0, 0, 1]]),
        model.point([[3, 0, 0], [0, 1, 0], [0, 0, 1]]),
    ]
    sub = HCSubpair(pair, h_pattern, span, h_points, name="P'")
    return pair, sub, g_samples


def cp12_bundle_function(sub: HCSubpair, rep: IsotropyRep, expr: Any) -> HomBundleFn:
    """A section of E^ψ over CP^{1|2}, given as a function on G'"""
    return HomBundleFn(sub.parent.group, rep, rep.dim, {(0,): expr})


def cp12_demo(seed: int = 0, degree: int = 1) -> Report:
    """The CP^{1|2} chain: g' from its pattern, [g'1, g'1] = 0, the subpair (P', p'), ψ and
    the split verdict, then the bundle-function description of the coset sheaf"""
    rng = random.Random(seed)
    pair, sub, g_samples = cp12_pair(rng)
    algebra = pair.algebra
    report = Report()
    report.add(
        SUITE,
        "cp12.algebra",
        algebra.basis.n_even == 5 and len(algebra.basis.odd_indices) == 2,
        f"g' = {', '.join(algebra.basis.names)} ({algebra.basis.n_even}|{len(algebra.basis.odd_indices)})",
    )
    report.extend(algebra.check_jacobi())
    report.extend(subpair_check(pair, sub))
    verdict = split_homogeneous_check(pair, sub)
    report.extend(verdict.report)

    rep = isotropy_rep(sub)
    for t in (2, 3, Scalar(1, 2)):
        h = pair.group.point([[t, 0, 0], [0, 1, 0], [0, 0, 1]])
        psi = rep(h)
        expected = ((Scalar.coerce(t),),)
        report.add(SUITE, "cp12.psi_character", psi == expected, f"ψ(diag({t},1,1)) = {_format_matrix(psi)}")

    p = pair.group.coordinate(1, 1)
    e = pair.group.coordinate(3, 3)
    equivariant = cp12_bundle_function(sub, rep, e / p)
    broken = cp12_bundle_function(sub, rep, 1 / p)
    report.extend(hom_bundle_fn_check(equivariant, g_samples, sub.points, name="cp12.bundle_x33_over_x11"))
    broken_report = hom_bundle_fn_check(broken, g_samples, sub.points, name="cp12.bundle_1_over_x11")
    report.add(SUITE, "cp12.non_equivariant_rejected", not broken_report.passed, broken_report.results[0].detail)
    member = coset_membership(sub, bundle_section(sub, equivariant), g_samples, degree)
    report.add(
        SUITE,
        "cp12.coset_member",
        member.member,
        f"{member.checked} evaluations, U(p') monomials up to degree {degree}",
    )
    outsider = coset_membership(sub, bundle_section(sub, broken), g_samples, degree)
    report.add(SUITE, "cp12.coset_violation", not outsider.member, outsider.witness or "no violation found")
    mixed = cp12_member(sub, [0, 1, -1], 0) + bundle_section(sub, equivariant)
    report.extend(coset_grading_check(sub, mixed, g_samples, degree, name="cp12.mixed"))
    return report


def cp12_member(sub: HCSubpair, coeffs: Sequence[int], degree: int) -> Section:
    """A coset section over G'/P' of the given degree built from φ(r/p), φ a polynomial
    with the given coefficients, r = x21, p = x11"""
    model = sub.parent.group
    p, r = model.coordinate(1, 1), model.coordinate(2, 1)
    phi = sum((c * (r / p) ** k for k, c in enumerate(coeffs)), sympy.Integer(0))
    if degree == 0:
        return Section(sub.parent, {(): phi})
    if degree != 1:
        raise InvalidInputError("CP^{1|2} sections have degree 0 or 1")
    odd = list(sub.parent.algebra.basis.odd_indices)
    return Section(sub.parent, {(odd[0],): phi, (odd[1],): (r / p) * phi})

import random

import numpy as np
import pytest

from saga_lefschetz import groebner as gb
from saga_lefschetz import linalg
from saga_lefschetz.constructions import (EX3_CUBIC, CubicForm, coordinate_plane_ideals,
                                          jacobian_ring, random_algebra)
from saga_lefschetz.algebra import QuadricPresentation, build_algebra
from saga_lefschetz.core import QQ, PrimeField, VariableContext
from saga_lefschetz.errors import (DegreeOutOfRange, InsufficientPoints, NotALineInN3,
                                   NotOnLocus, PlaneNotInLocus)
from saga_lefschetz.groebner import Ideal
from saga_lefschetz.loci import (sample_locus_points, fiber_statistics, line_in_n3_check, n2_analysis,
                                 nihil_dimension, nihil_ideal, nihil_membership,
                                 non_lefschetz_ideal, plane_section_check, projective_dimension,
                                 secant_containment_check, sliced_dimension_bound, tangent_space,
                                 verify_component_decomposition)

from conftest import FP, algebra, fermat_quadrics, w

P10007 = PrimeField(10007)


def ideal(*texts, n=3, field=QQ):
    return Ideal.of([w(t, n, field) for t in texts])


def test_nihil_ideal_fermat(fermat3):
    L2 = nihil_ideal(fermat3, 2)
    assert L2.kind == "nihil" and len(L2.generators) == 6
    assert all(len(g.terms) == 1 and sum(next(iter(g.terms))) == 2 and max(next(iter(g.terms))) == 1
               for g in L2.generators)
    assert nihil_dimension(fermat3, 2) == 0
    assert n2_analysis(fermat3).degree == 4
    assert verify_component_decomposition(fermat3, 3, coordinate_plane_ideals(3, 1)).holds


def test_nihil_ideal_shape(ex3):
    for k in range(2, 5):
        L = nihil_ideal(ex3, k)
        assert len(L.generators) == ex3.dims[k]
        assert all(g.degree == k and g.is_homogeneous() for g in L.generators if not g.is_zero())
    with pytest.raises(DegreeOutOfRange):
        nihil_ideal(ex3, 5)
    with pytest.raises(DegreeOutOfRange):
        nihil_ideal(ex3, 1)


def test_nihil_membership_examples(ex5, fermat3):
    assert nihil_membership(ex5, ex5.parse("x0"), 2)
    assert not nihil_membership(ex5, ex5.parse("x3"), 2)
    assert nihil_membership(fermat3, fermat3.parse("x0+x1"), 3)


def test_nihil_dimension_examples(ex3, ex4):
    assert nihil_dimension(ex3, 4) == 2
    assert nihil_dimension(ex4, 3) == -1
    assert nihil_dimension(ex4, 2) == -1


def test_membership_consistent_with_equations(ex5, ex3, fermat3, rng):
    for A in (ex5, ex3, fermat3):
        for k in range(2, 5):
            L = nihil_ideal(A, k)
            special = [A.basis_element(1, i) for i in range(4)] + [A.parse("x0+x1"), A.parse("x0-x2")]
            for x in special + [A.linear([rng.randint(-3, 3) for _ in range(4)]) for _ in range(30)]:
                pt = x.coords.tolist()
                vanish = all(g.evaluate(pt) == 0 for g in L.generators)
                assert vanish == nihil_membership(A, x, k)


def test_chain_property(ex5, ex3, fermat3):
    for A in (ex5, ex3, fermat3):
        for k in (2, 3):
            lower = nihil_ideal(A, k).ideal
            for g in nihil_ideal(A, k + 1).generators:
                assert gb.radical_membership(g, lower)


def test_n2_examples(ex5):
    a = n2_analysis(ex5)
    assert a.degree == 3 and sorted(a.rational_points) == [(0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0)]
    assert a.independent and a.product_nonzero and not a.fermat_candidate
    from saga_lefschetz.constructions import EX2_CUBIC
    ex2 = build_algebra(jacobian_ring(CubicForm.parse(EX2_CUBIC, 3)))
    assert n2_analysis(ex2).degree == 4


def test_n2_structure_random():
    for n in (3, 4):
        for seed in range(2):
            a = n2_analysis(random_algebra(n, seed, P10007))
            assert a.degree <= n + 1 and a.independent and a.product_nonzero


def test_tangent_fermat(fermat3):
    rep = tangent_space(fermat3, fermat3.parse("x0"), 2)
    assert rep.tangent_dimension == 0 and rep.equal and rep.power_nonzero
    assert [str(e) for e in fermat3.kernel(fermat3.parse("x0"), 1)] == ["x0"]
    # eta^(k-1) = 0: only containment of the kernel space in the tangent space is claimed
    rep3 = tangent_space(fermat3, fermat3.parse("x0"), 3)
    assert not rep3.power_nonzero and rep3.contained
    with pytest.raises(NotOnLocus):
        tangent_space(fermat3, fermat3.parse("x0+x1"), 2)


def points_on_ex3_curve(field, count, rng):
    """F_p points of C = V(w3, w0^3 + w1^3 + w2^3 - 6 w0 w1 w2)."""
    out = []
    while len(out) < count:
        a, b = field.random_element(rng), 1
        coeffs = [field(a**3 + 1), field(-6 * a), 0, 1]   # g(a, 1, t) in t
        for t in gb.univariate_roots(coeffs, field):
            out.append((a, b, t, 0))
    return out[:count]


def test_tangent_ex3_curve(rng):
    A = build_algebra(jacobian_ring(CubicForm.parse(EX3_CUBIC, 3, P10007)))
    locus = nihil_ideal(A, 3)
    pts = points_on_ex3_curve(P10007, 20, rng)
    assert len(pts) == 20
    for pt in pts:
        eta = A.linear(list(pt))
        assert nihil_membership(A, eta, 3)
        rep = tangent_space(A, eta, 3, locus)
        assert rep.power_nonzero and rep.equal


def test_decompositions(ex3, ex5):
    g3 = "w0^3+w1^3+w2^3-6*w0*w1*w2"
    assert verify_component_decomposition(ex3, 4, [ideal("w3"), ideal(g3)]).holds
    g5 = "w3^2-3*w0*w1"
    assert verify_component_decomposition(ex5, 4, [ideal("w3"), ideal("w2"), ideal(g5)]).holds
    bad = verify_component_decomposition(ex5, 4, [ideal("w3"), ideal("w2")])
    assert not bad.holds and any("does not vanish" in line for line in bad.log)
    wrong = verify_component_decomposition(ex5, 3, [ideal("w3")])
    assert not wrong.holds


def test_secant_checks(fermat3, ex5):
    pts = [fermat3.basis_element(1, i) for i in range(4)]
    assert secant_containment_check(fermat3, pts, 2, 2, 3)[0]
    assert secant_containment_check(fermat3, pts, 2, 1, 2)[0]
    ok, x = secant_containment_check(fermat3, pts, 2, 2, 2)
    assert not ok and not (x * x).is_zero()
    P = [ex5.basis_element(1, 0), ex5.basis_element(1, 1)]
    assert secant_containment_check(ex5, P, 2, 2, 3)[0]
    with pytest.raises(InsufficientPoints):
        secant_containment_check(ex5, P, 2, 3, 4)


def test_lines(fermat3, ex5, rng):
    res = line_in_n3_check(fermat3, fermat3.parse("x0"), fermat3.parse("x1"))
    assert res.joins_two_points
    assert sorted(res.n2_points) == [(0, 1, 0, 0), (1, 0, 0, 0)]
    assert line_in_n3_check(ex5, ex5.parse("x0"), ex5.parse("x1")).joins_two_points
    # a line in N_3 given by two points that are not in N_2
    res = line_in_n3_check(fermat3, fermat3.parse("x0+x1"), fermat3.parse("x0-x1"))
    assert res.joins_two_points and len(res.n2_points) == 2
    A = build_algebra(jacobian_ring(CubicForm.parse(EX3_CUBIC, 3, P10007)))
    pts = points_on_ex3_curve(P10007, 6, rng)
    for p, q in zip(pts[::2], pts[1::2]):
        with pytest.raises(NotALineInN3):
            line_in_n3_check(A, A.linear(list(p)), A.linear(list(q)))


def test_plane_sections(fermat3):
    sec = plane_section_check(fermat3, [fermat3.parse("x0"), fermat3.parse("x1")])
    assert sec.p_k.degree == 2
    found = sorted(tuple(int(c != 0) for c in x.coords.tolist()) for x in sec.nondegenerate_points)
    assert found == [(0, 1, 0, 0), (1, 0, 0, 0)]
    F5 = algebra(fermat_quadrics(5))
    basis = [F5.basis_element(1, i) for i in range(3)]
    sec = plane_section_check(F5, basis)
    assert sec.p_k.degree == 3 and len(sec.nondegenerate_points) == 3
    # T_3 is the union of three lines here; any three independent points of it with
    # nonzero product are acceptable
    pts = sec.nondegenerate_points
    assert all(nihil_membership(F5, x, 3) for x in pts)
    assert linalg.rank(QQ.array([x.coords.tolist() for x in pts]), QQ) == 3
    assert not (pts[0] * pts[1] * pts[2]).is_zero()
    assert all(sec.p_k.evaluate(_alpha(F5, sec.basis, x)) == 0 for x in pts)
    with pytest.raises(PlaneNotInLocus):
        plane_section_check(fermat3, [fermat3.parse("x0+x1"), fermat3.parse("x2+x3")])


def _alpha(A, basis, x):
    """Coordinates of x in the given basis."""
    M = QQ.array([b.coords.tolist() for b in basis] + [x.coords.tolist()])
    null = linalg.nullspace(M.T.copy(), QQ)
    v = null[0]
    return [-c / v[-1] for c in v[:-1]]


def test_non_lefschetz_ideal(fermat3, ex4, rng):
    L = non_lefschetz_ideal(fermat3, 1)
    assert L.provenance["minors"] == "15"
    assert all(g.evaluate([1, 0, 0, 0]) == 0 for g in L.generators)
    assert any(g.evaluate([1, 2, 3, 5]) != 0 for g in L.generators)
    L4 = non_lefschetz_ideal(ex4, 1)
    assert all(g.evaluate([1, 0, 0, 0]) == 0 for g in L4.generators)   # x0 is non-Lefschetz
    for _ in range(5):
        pt = [rng.randint(-50, 50) for _ in range(4)]
        assert any(g.evaluate(pt) != 0 for g in L4.generators)
    top = non_lefschetz_ideal(fermat3, 3)
    assert projective_dimension(top.ideal) == -1
    from saga_lefschetz.errors import SizeGateExceeded
    with pytest.raises(SizeGateExceeded):
        non_lefschetz_ideal(fermat3, 1, gate=10)


def test_fiber_statistics(fermat3):
    A = random_algebra(5, 3, FP)
    hist = fiber_statistics(A, 4, 10)
    assert dict(hist) == {0: 10}
    # x^3 maps R^1 (dim 4) to R^4 (dim 1): generic kernel has dimension 3; x0^3 = 0 gives 4
    hist = fiber_statistics(fermat3, 3, 10, extra=[fermat3.parse("x0")])
    assert dict(hist) == {3: 10, 4: 1} and min(hist) == 3
    assert dict(fiber_statistics(fermat3, 4, 5)) == {4: 5}


def test_dimension_bound_corpus(ex3, ex4, ex5, fermat3):
    for A in (ex3, ex4, ex5, fermat3):
        for k in range(2, A.socle_degree + 1):
            assert nihil_dimension(A, k) <= k - 2


def test_sliced_bound(ex3):
    exact = nihil_dimension(ex3, 4)
    for c in (1, 2, 3):
        assert sliced_dimension_bound(ex3, 4, c, random.Random(c)) >= exact
    assert sliced_dimension_bound(ex3, 4, 1, random.Random(1)) == exact


def test_sample_locus_points(rng):
    A = build_algebra(jacobian_ring(CubicForm.parse(EX3_CUBIC, 3, P10007)))
    locus = nihil_ideal(A, 4)
    pts = sample_locus_points(locus, 15, rng)
    assert len(pts) == 15 and len(set(pts)) == 15
    assert all(nihil_membership(A, A.linear(list(p)), 4) for p in pts)
    fermat = build_algebra(QuadricPresentation.from_strings(fermat_quadrics(3), P10007))
    assert len(sample_locus_points(nihil_ideal(fermat, 2), 4, rng)) == 4

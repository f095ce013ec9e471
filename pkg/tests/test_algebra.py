import random
from math import comb

import numpy as np
import pytest

from saga_lefschetz import linalg
from saga_lefschetz.algebra import QuadricPresentation, build_algebra
from saga_lefschetz.constructions import random_algebra
from saga_lefschetz.core import QQ, PrimeField, VariableContext, monomial_basis, random_form
from saga_lefschetz.errors import (DegreeOutOfRange, InputError, NotAnnihilated,
                                   NotRegularSequence, ParseError, WrongDegree)

from conftest import FP, algebra, fermat_quadrics
from oracle import Reducer


def test_dims_fermat_and_ex5(fermat3, ex5):
    assert fermat3.dims == [1, 4, 6, 4, 1, 0]
    assert ex5.dims == [1, 4, 6, 4, 1, 0]
    assert fermat3.socle_degree == 4


def test_not_regular():
    with pytest.raises(NotRegularSequence) as err:
        algebra(["x0^2", "x0*x1", "x1^2", "x2^2"])
    # four independent quadrics always leave dim R^2 = 6; the defect shows in degree 3
    assert err.value.degree == 3


def test_presentation_validation():
    ctx = VariableContext.ring(2)
    with pytest.raises(InputError):
        QuadricPresentation(ctx, QQ, QuadricPresentation.from_strings(
            ["x0^2", "x1^2"]).generators)                          # one short
    with pytest.raises(WrongDegree):
        QuadricPresentation.from_strings(["x0^2", "x1^2", "x2^3"])
    with pytest.raises(ParseError):
        QuadricPresentation.from_text("x0^2\n")
    pres = QuadricPresentation.from_strings(["x0^2", "x1^2", "0"])
    with pytest.raises(NotRegularSequence):
        build_algebra(pres)


def test_presentation_text_roundtrip():
    pres = QuadricPresentation.from_strings(["x0^2", "x1^2", "x2^2", "x3^2+2*x0*x1"])
    text = pres.to_text()
    assert text.splitlines()[0] == "n=3 field=Q"
    again = QuadricPresentation.from_text(text)
    assert again.generators == pres.generators
    over_p = QuadricPresentation.from_text(text, PrimeField(101))
    assert over_p.field == PrimeField(101)


def test_normal_form_examples(fermat3, ex5):
    assert fermat3.parse("x0^2").is_zero()
    top = fermat3.parse("x0*x1*x2*x3")
    assert not top.is_zero() and fermat3.dims[4] == 1
    # in R, x3^2 and -2*x0*x1 are the same class
    assert ex5.parse("x3^2") == ex5.parse("-2*x0*x1")
    assert not ex5.parse("x3^2").is_zero()


def test_normal_form_idempotent(ex3, rng):
    for k in range(5):
        for _ in range(5):
            e = ex3.random_element(k, rng)
            assert ex3.normal_form(e.to_poly()) == e


def test_multiply_examples(fermat3, ex5):
    x3 = ex5.parse("x3")
    assert x3 * x3 == ex5.parse("-2*x0*x1")
    s = fermat3.parse("x0+x1")
    assert s * s == fermat3.parse("2*x0*x1")
    assert (fermat3.parse("x0") * fermat3.parse("x0*x1*x2")).is_zero()


def test_power_examples(fermat3, ex3):
    assert fermat3.power(fermat3.parse("x0"), 2).is_zero()
    total = fermat3.parse("x0+x1+x2+x3")
    assert fermat3.power(total, 4) == fermat3.parse("24*x0*x1*x2*x3")
    assert ex3.power(ex3.parse("x3"), 2).is_zero()  # 3*x3^2 is a generator
    assert not ex3.power(ex3.parse("x0"), 2).is_zero()


def test_mult_map_examples(fermat3):
    M = fermat3.mult_map_matrix(fermat3.parse("x0"), 1)
    assert M.shape == (6, 4) and linalg.rank(M, QQ) == 3
    I = fermat3.mult_map_matrix(fermat3.one(), 2)
    assert np.array_equal(I, QQ.array(np.eye(6, dtype=int).tolist()))
    Z = fermat3.mult_map_matrix(fermat3.parse("x0*x1*x2*x3"), 1)
    assert Z.shape == (0, 4)


def test_kernel_examples(fermat3):
    k1 = fermat3.kernel(fermat3.parse("x0"), 1)
    assert [str(e) for e in k1] == ["x0"]
    k2 = fermat3.kernel(fermat3.parse("x0"), 2)
    assert sorted(str(e) for e in k2) == ["x0*x1", "x0*x2", "x0*x3"]
    assert fermat3.kernel_dim(fermat3.zero(1), 2) == 6


def test_socle_pairing(fermat3):
    P1 = fermat3.socle_pairing_matrix(1)
    assert P1.shape == (4, 4) and linalg.rank(P1, QQ) == 4
    assert sorted(int(np.count_nonzero(r)) for r in P1) == [1, 1, 1, 1]
    assert fermat3.socle_pairing_matrix(0).shape == (1, 1)
    assert linalg.rank(fermat3.socle_pairing_matrix(2), QQ) == 6
    assert fermat3.is_gorenstein()


def test_quotient_examples(ex5, fermat3):
    q = ex5.quotient_by_linear(ex5.parse("x0"))
    assert q.algebra.dims[:4] == [1, 3, 3, 1]
    assert q.identity[0] == (1, 1, 1)
    assert q.identity_holds
    qf = fermat3.quotient_by_linear(fermat3.parse("x0"))
    assert qf.algebra.presentation.generators == \
        QuadricPresentation.from_strings(fermat_quadrics(2)).generators


def test_quotient_needs_annihilator():
    A = random_algebra(3, 1, FP)
    with pytest.raises(NotAnnihilated):
        A.quotient_by_linear(A.parse("x0"))


def test_degree_out_of_range(fermat3):
    with pytest.raises(DegreeOutOfRange):
        fermat3.zero(9)
    with pytest.raises(DegreeOutOfRange):
        fermat3.socle_pairing_matrix(7)


def test_hilbert_and_duality_random():
    for n in (3, 4, 5):
        for seed in range(3):
            A = random_algebra(n, seed, FP)
            assert A.dims == [comb(n + 1, k) for k in range(n + 2)] + [0]
            assert A.is_gorenstein()
    A = random_algebra(3, 0, QQ)
    assert A.is_gorenstein()


def test_kernel_bound(rng):
    """dim K^1_eta <= s for eta in R^s."""
    count = 0
    for n in (3, 4):
        for seed in range(2):
            A = random_algebra(n, seed, FP)
            for _ in range(25):
                s = rng.randint(1, A.socle_degree - 1)
                eta = A.random_element(s, rng)
                assert A.kernel_dim(eta, 1) <= s
                count += 1
    # structured elements reach the bound: products of s coordinates in the Fermat ring
    F = algebra(fermat_quadrics(4))
    for s in range(1, 5):
        eta = F.parse("*".join(f"x{i}" for i in range(s)))
        assert F.kernel_dim(eta, 1) == s
    assert count == 100


def test_same_kernel_only_for_proportional():
    F = algebra(fermat_quadrics(4))
    from itertools import combinations
    elems = {S: F.parse("*".join(f"x{i}" for i in S)) for S in combinations(range(5), 2)}
    for S, a in elems.items():
        for T, b in elems.items():
            ka = QQ.array([e.coords.tolist() for e in F.kernel(a, 1)])
            kb = QQ.array([e.coords.tolist() for e in F.kernel(b, 1)])
            assert linalg.same_row_space(ka, kb, QQ) == (S == T)
        assert linalg.same_row_space(
            QQ.array([e.coords.tolist() for e in F.kernel(a * 7, 1)]),
            QQ.array([e.coords.tolist() for e in F.kernel(a, 1)]), QQ)


def _oracle_check(A, rng, trials, p=None):
    gens = [dict(g.terms) for g in A.presentation.generators]
    for d in range(0, 5):
        red = Reducer(gens, A.nvars, d, p)
        assert red.standard == list(A.basis[d])
        ctx = A.ctx
        for _ in range(trials):
            f = random_form(ctx, A.field, d, rng, dense=False,
                            bound=None if p else 20)
            got = A.normal_form(f).coords.tolist()
            assert got == red.normal_form(f.terms)


def test_oracle_small(ex5, ex3, rng):
    _oracle_check(ex5, rng, 10)
    _oracle_check(ex3, rng, 10)
    A = random_algebra(2, 3, PrimeField(10007))
    _oracle_check(A, rng, 10, p=10007)

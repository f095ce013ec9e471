import random

import pytest
import sympy

from saga_lefschetz import groebner as gb
from saga_lefschetz.core import QQ, Polynomial, PrimeField, VariableContext, random_form
from saga_lefschetz.errors import BudgetExceeded, InputError
from saga_lefschetz.groebner import Ideal
from saga_lefschetz.loci import nihil_ideal

from conftest import w

W3 = VariableContext.dual(3)
W2 = VariableContext.dual(2)
W1 = VariableContext.dual(1)


def I(*texts, n=3, field=QQ):
    return Ideal.of([w(t, n, field) for t in texts])


def as_set(G):
    return {frozenset(g.terms.items()) for g in G.basis}


def test_already_groebner():
    ideal = I("w0^2", "w0*w1", "w1^2")
    assert as_set(gb.buchberger(ideal)) == as_set(gb.GroebnerBasis(W3, QQ, ideal.generators))


def test_linear_and_square():
    G = gb.buchberger(I("w0 - w1", "w1^2"))
    assert as_set(G) == {frozenset(w("w0 - w1").terms.items()),
                         frozenset(w("w1^2").terms.items())}


def test_fermat_nihil2_is_groebner(fermat3):
    locus = nihil_ideal(fermat3, 2)
    G = gb.buchberger(locus.ideal)
    assert len(G.basis) == 6
    assert sorted(G.leading_monomials) == sorted(
        tuple(int(t in (i, j)) for t in range(4)) for i in range(4) for j in range(i + 1, 4))


def test_membership():
    assert gb.member(w("w0^2"), gb.buchberger(I("w0")))[0]
    ok, rem = gb.member(w("w0"), gb.buchberger(I("w0^2")))
    assert not ok and rem == w("w0")


def test_radical_membership_small():
    assert gb.radical_membership(w("w0"), I("w0^2"))
    assert not gb.radical_membership(w("w1"), I("w0^2"))
    # without the power shortcut the Rabinowitsch step decides
    assert gb.radical_membership(w("w0*w1"), I("w0^3", "w1^2*w2"), fast_powers=0)
    assert not gb.radical_membership(w("w2"), I("w0^3", "w1^2*w2"), fast_powers=0)


def test_radical_membership_ex3(ex3):
    locus = nihil_ideal(ex3, 4)
    f = w("w3") * w("w0^3+w1^3+w2^3-6*w0*w1*w2")
    assert gb.radical_membership(f, locus.ideal)
    assert not gb.radical_membership(w("w3"), locus.ideal)


def test_krull_dimension():
    assert gb.krull_dimension(gb.buchberger(I("w0^2", "w1^2"))) == 2
    assert gb.krull_dimension(gb.buchberger(I("w0*w1", "w0*w2", "w1*w2", n=2))) == 1
    assert gb.krull_dimension(gb.buchberger(Ideal.of([Polynomial.constant(W3, QQ, 1)]))) == -1


def test_zero_dim_degree():
    assert gb.zero_dim_degree(gb.buchberger(I("w0", "w1", "w2", n=2))) == 1
    G = gb.buchberger(Ideal.of([w("w0^2", 1) - Polynomial.constant(W1, QQ, 1), w("w1", 1)]))
    assert gb.zero_dim_degree(G) == 2
    assert sorted(gb.rational_points(G)) == [(-1, 0), (1, 0)]


def test_ex2_chart_degree():
    from saga_lefschetz.constructions import EX2_CUBIC, CubicForm, jacobian_ring
    from saga_lefschetz.algebra import build_algebra
    from saga_lefschetz.loci import chart_ideals
    A = build_algebra(jacobian_ring(CubicForm.parse(EX2_CUBIC, 3)))
    charts = list(chart_ideals(nihil_ideal(A, 2).ideal))
    total = 0
    for _, chart, _, _ in charts:
        G = gb.buchberger(chart)
        if not G.is_unit():
            total += gb.zero_dim_degree(G)
    assert total == 4


def test_absorption(rng):
    F = PrimeField(10007)
    ideal = Ideal.of([random_form(W2, F, 2, rng, dense=False) for _ in range(2)])
    G = gb.buchberger(ideal)
    for _ in range(100):
        f = ideal.generators[rng.randrange(2)] * random_form(W2, F, rng.randint(0, 2), rng)
        g = random_form(W2, F, rng.randint(0, 2), rng)
        assert gb.member(f, G)[0]
        assert gb.member(f * g, G)[0]


def test_radical_agrees_with_member_squarefree(fermat3):
    ideal = nihil_ideal(fermat3, 3).ideal
    G = gb.buchberger(ideal)
    for text in ("w0*w1*w2", "w0*w1", "w1*w2*w3", "w0^2*w1*w3", "w3^3"):
        f = w(text)
        assert gb.radical_membership(f, ideal) == gb.member(f, G)[0]


def test_redundant_generators_keep_dimension(rng):
    F = PrimeField(10007)
    for _ in range(10):
        gens = [random_form(W3, F, 2, rng, dense=False) for _ in range(2)]
        base = gb.krull_dimension(gb.buchberger(Ideal.of(gens)))
        extra = gens[0] * random_form(W3, F, 1, rng) + gens[1] * random_form(W3, F, 1, rng)
        assert gb.krull_dimension(gb.buchberger(Ideal.of(gens + [extra]))) == base


def _to_sympy(poly, syms):
    return sum(int(c) * sympy.Mul(*[s**e for s, e in zip(syms, m)]) for m, c in poly.terms.items())


def test_matches_sympy_reduced_basis(rng):
    p = 10007
    F = PrimeField(p)
    syms = sympy.symbols("w0:4")
    for trial in range(6):
        gens = [random_form(W3, F, rng.choice([2, 2, 3]), rng, dense=False) for _ in range(3)]
        ours = gb.buchberger(Ideal.of(gens))
        ref = sympy.groebner([_to_sympy(g, syms) for g in gens], *syms, order="grevlex", modulus=p)
        theirs = set()
        for q in ref.exprs:
            P = sympy.Poly(q, *syms, modulus=p)
            lc = P.LC(order="grevlex")
            theirs.add(frozenset((m, F(c) * F.inv(F(lc)) % p) for m, c in P.terms()))
        assert as_set(ours) == theirs


def test_budget():
    gb.clear_cache()
    ideal = I("w0^3 - w1*w2^2", "w1^3 - w2*w3^2", "w2^3 - w0*w3^2", "w0*w1*w2 - w3^3")
    with pytest.raises(BudgetExceeded):
        gb.buchberger(ideal, max_pairs=1)
    with pytest.raises(BudgetExceeded):
        gb.buchberger(ideal, max_degree=3)


def test_ideal_validation():
    with pytest.raises(InputError):
        Ideal(W3, QQ, ())

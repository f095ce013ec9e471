import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from saga_lefschetz import groebner as gb
from saga_lefschetz import linalg
from saga_lefschetz.constructions import random_algebra
from saga_lefschetz.core import (QQ, PrimeField, VariableContext, format_poly, parse_poly,
                                 random_form)
from saga_lefschetz.lefschetz import RankCertificate, check_wlp, format_bound, required_samples

F = PrimeField(10007)
seeds = st.integers(min_value=0, max_value=10**6)
_ALGEBRAS = {}


def _algebra(n, seed):
    key = (n, seed % 8)
    if key not in _ALGEBRAS:
        _ALGEBRAS[key] = random_algebra(n, seed % 8, F)
    return _ALGEBRAS[key]


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(0, 4), st.integers(1, 3), st.sampled_from([QQ, F]))
def test_parse_format_roundtrip(seed, d, n, field):
    ctx = VariableContext.ring(n)
    f = random_form(ctx, field, d, random.Random(seed), dense=False)
    assert parse_poly(format_poly(f), ctx, field) == f


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(3, 4))
def test_multiplication_laws(seed, n):
    A = _algebra(n, seed)
    rng = random.Random(seed)
    a, b, c = (A.random_element(d, rng) for d in (1, 1, 2))
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + b) == a * b + a * b


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(3, 4))
def test_hilbert_symmetry_and_pairing(seed, n):
    A = _algebra(n, seed)
    N = A.socle_degree
    assert A.dims[:N + 1] == A.dims[N::-1]
    for j in range(N + 1):
        M = A.socle_pairing_matrix(j)
        assert linalg.rank(M, A.field) == A.dims[j]


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_format_bound_is_tight(num, extra):
    bound = Fraction(num, num + extra)
    k = int(format_bound(bound)[4:])
    assert bound < Fraction(1, 2**k) and bound >= Fraction(1, 2**(k + 1))


@given(st.integers(1, 5000), st.integers(1000, 2**31))
def test_required_samples_minimal(D, factor):
    q = D * factor
    t = required_samples(D, q)
    assert Fraction(D, q) ** t < Fraction(1, 2**60)
    assert t == 1 or Fraction(D, q) ** (t - 1) >= Fraction(1, 2**60)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_certificate_roundtrip(seed):
    A = _algebra(3, seed)
    cert = check_wlp(A, 1, seed=seed).certificate
    again = RankCertificate.from_dict(cert.to_dict(), A)
    assert again.to_dict() == cert.to_dict() and again.verify(A)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_ideal_membership_of_combinations(seed):
    rng = random.Random(seed)
    ctx = VariableContext.ring(2)
    gens = [random_form(ctx, F, 2, rng) for _ in range(2)]
    G = gb.buchberger(gb.Ideal.of(gens))
    combo = gens[0] * random_form(ctx, F, 1, rng) + gens[1] * random_form(ctx, F, 1, rng)
    assert gb.member(combo, G)[0]
    assert gb.reduce_poly(combo, G).is_zero()

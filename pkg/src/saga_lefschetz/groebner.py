"""Buchberger's algorithm (degrevlex) with membership, radical membership,
Krull dimension and zero-dimensional degree.

Polynomials are handled internally as ``{exponent tuple: coefficient}``
dicts; the public surface takes and returns :class:`~saga_lefschetz.core.Polynomial`.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import sympy

from .core import (Field, Polynomial, VariableContext, degrevlex_key, mono_div,
                   mono_divides, mono_lcm, mono_mul)
from .errors import BudgetExceeded, InputError, NotZeroDimensional

DEFAULT_MAX_PAIRS = 50_000


@dataclass(frozen=True)
class Ideal:
    ctx: VariableContext
    field: Field
    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise InputError("an ideal needs at least one generator")
        for g in gens:
            if g.field != self.field or g.ctx.nvars != self.ctx.nvars:
                raise InputError("generators must share the ideal's ring and field")

    @classmethod
    def of(cls, polys: Sequence[Polynomial]) -> "Ideal":
        polys = list(polys)
        return cls(polys[0].ctx, polys[0].field, tuple(polys))

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ctx, self.field, self.generators + other.generators)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Gröbner basis; polynomials are monic and sorted by leading monomial."""

    ctx: VariableContext
    field: Field
    basis: tuple

    @property
    def leading_monomials(self) -> list[tuple]:
        return [g.leading_monomial() for g in self.basis]

    def is_unit(self) -> bool:
        return any(sum(m) == 0 for m in self.leading_monomials)


# ---------------------------------------------------------------- internals

class _Arith:
    """Coefficient helpers specialised for Q or F_p."""

    def __init__(self, field: Field):
        self.field = field
        self.p = getattr(field, "p", None)

    def inv(self, c):
        return pow(c, -1, self.p) if self.p else 1 / Fraction(c)

    def monic(self, poly: dict, lm: tuple) -> dict:
        inv = self.inv(poly[lm])
        if self.p:
            return {m: c * inv % self.p for m, c in poly.items()}
        return {m: c * inv for m, c in poly.items()}


def _lm(poly: dict) -> tuple:
    return max(poly, key=degrevlex_key)


def _neg_key(m: tuple) -> tuple:
    return (-sum(m), tuple(reversed(m)))


def _reduce(f: dict, basis: list, ar: _Arith) -> dict:
    """Full reduction of ``f`` by ``basis`` (list of (lm, monic poly dict))."""
    p = ar.p
    f = dict(f)
    rem: dict = {}
    heap = [(_neg_key(m), m) for m in f]
    heapq.heapify(heap)
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, None)
        if c is None:
            continue
        # skip duplicate heap entries for the same monomial
        while heap and heap[0][1] == m:
            heapq.heappop(heap)
        for lm, g in basis:
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                for gm, gc in g.items():
                    if gm == lm:
                        continue
                    t = mono_mul(gm, q)
                    old = f.get(t)
                    v = (old or 0) - c * gc
                    if p:
                        v %= p
                    if v:
                        f[t] = v
                        if old is None:
                            heapq.heappush(heap, (_neg_key(t), t))
                    elif old is not None:
                        del f[t]
                break
        else:
            rem[m] = c
    return rem


def _spoly(f: dict, lf: tuple, g: dict, lg: tuple, ar: _Arith) -> dict:
    L = mono_lcm(lf, lg)
    a = mono_div(L, lf)
    b = mono_div(L, lg)
    out: dict = {}
    for m, c in f.items():
        if m != lf:
            out[mono_mul(m, a)] = c
    for m, c in g.items():
        if m != lg:
            t = mono_mul(m, b)
            v = out.get(t, 0) - c
            if ar.p:
                v %= ar.p
            if v:
                out[t] = v
            else:
                out.pop(t, None)
    return out


def _coprime(a: tuple, b: tuple) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


_GB_CACHE: dict = {}


def _cache_key(ideal: Ideal):
    gens = tuple(sorted(tuple(sorted(g.terms.items())) for g in ideal.generators))
    return (ideal.field, ideal.ctx.nvars, gens)


def buchberger(ideal: Ideal, max_pairs: int = DEFAULT_MAX_PAIRS,
               max_degree: int | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis with the product and chain criteria.

    Pairs are processed by increasing sugar degree.  ``max_pairs`` bounds the
    number of S-polynomials reduced and ``max_degree`` the sugar degree.
    """
    key = _cache_key(ideal)
    if key in _GB_CACHE:
        return _GB_CACHE[key]
    ar = _Arith(ideal.field)
    polys: list[dict] = []
    lms: list[tuple] = []
    sugar: list[int] = []
    active: list[int] = []
    pairs: list = []  # heap of (sugar, lcm key, i, j)
    counter = 0

    def add(h: dict, s: int):
        nonlocal pairs
        lh = _lm(h)
        h = ar.monic(h, lh)
        idx = len(polys)
        polys.append(h)
        lms.append(lh)
        sugar.append(s)
        # Gebauer-Moeller update
        C = [(g, mono_lcm(lms[g], lh)) for g in active]
        D: list = []
        while C:
            g, L = C.pop(0)
            if _coprime(lms[g], lh) or not any(mono_divides(L2, L) for _, L2 in C + D):
                D.append((g, L))
        kept = D
        chosen = [(g, L) for g, L in kept if not _coprime(lms[g], lh)]
        survivors = []
        for entry in pairs:
            _, _, i, j = entry
            Lij = mono_lcm(lms[i], lms[j])
            if (mono_divides(lh, Lij) and mono_lcm(lms[i], lh) != Lij
                    and mono_lcm(lms[j], lh) != Lij):
                continue
            survivors.append(entry)
        for g, L in chosen:
            sg = max(sugar[g] - sum(lms[g]), s - sum(lh)) + sum(L)
            survivors.append((sg, degrevlex_key(L), g, idx))
        heapq.heapify(survivors)
        pairs = survivors
        active[:] = [g for g in active if not mono_divides(lh, lms[g])] + [idx]

    for g in ideal.generators:
        if g.is_zero():
            continue
        h = _reduce(g.terms, [(lms[i], polys[i]) for i in active], ar)
        if h:
            add(h, g.degree)
    while pairs:
        s, _, i, j = heapq.heappop(pairs)
        counter += 1
        if counter > max_pairs:
            raise BudgetExceeded(f"Buchberger exceeded {max_pairs} pairs")
        if max_degree is not None and s > max_degree:
            raise BudgetExceeded(f"Buchberger exceeded sugar degree {max_degree}")
        sp = _spoly(polys[i], lms[i], polys[j], lms[j], ar)
        if not sp:
            continue
        h = _reduce(sp, [(lms[t], polys[t]) for t in active], ar)
        if h:
            add(h, s)
            if sum(lms[-1]) == 0:
                break
    # minimal + reduced basis
    if any(sum(lms[t]) == 0 for t in active):
        one = Polynomial.constant(ideal.ctx, ideal.field, 1)
        gb = GroebnerBasis(ideal.ctx, ideal.field, (one,))
        _GB_CACHE[key] = gb
        return gb
    minimal = [t for t in active
               if not any(u != t and mono_divides(lms[u], lms[t]) for u in active)]
    reduced = []
    for t in minimal:
        others = [(lms[u], polys[u]) for u in minimal if u != t]
        tail = {m: c for m, c in polys[t].items() if m != lms[t]}
        r = _reduce(tail, others, ar)
        r[lms[t]] = ideal.field.one
        reduced.append((lms[t], r))
    reduced.sort(key=lambda e: degrevlex_key(e[0]), reverse=True)
    basis = tuple(Polynomial(ideal.ctx, ideal.field, r, _canonical=True) for _, r in reduced)
    gb = GroebnerBasis(ideal.ctx, ideal.field, basis)
    _GB_CACHE[key] = gb
    return gb


def clear_cache():
    _GB_CACHE.clear()


# ---------------------------------------------------------------- queries

def reduce_poly(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    ar = _Arith(G.field)
    basis = [(g.leading_monomial(), g.terms) for g in G.basis]
    rem = _reduce(f.terms, basis, ar)
    return Polynomial(f.ctx, f.field, rem, f.degree, _canonical=True)


def member(f: Polynomial, G: GroebnerBasis) -> tuple[bool, Polynomial]:
    """Ideal membership by division; returns ``(f in I, remainder)``."""
    r = reduce_poly(f, G)
    return r.is_zero(), r


def radical_membership(f: Polynomial, ideal: Ideal, max_pairs: int = DEFAULT_MAX_PAIRS,
                       fast_powers: int = 3) -> bool:
    """``f`` vanishes on V(I), decided by the Rabinowitsch trick.

    Small powers ``f^m`` are first tested for plain membership; any hit is a
    proof.  Otherwise 1 in I + (1 - t f) is decided by a Gröbner basis.
    """
    if f.is_zero():
        return True
    G = buchberger(ideal, max_pairs=max_pairs)
    if G.is_unit():
        return True
    power = f
    for _ in range(fast_powers):
        if member(power, G)[0]:
            return True
        power = power * f
    ctx = ideal.ctx.extend("_t")
    lift = [Polynomial(ctx, g.field, {m + (0,): c for m, c in g.terms.items()}, g.degree,
                       _canonical=True) for g in ideal.generators]
    tf = Polynomial(ctx, f.field, {m + (1,): c for m, c in f.terms.items()}, f.degree + 1,
                    _canonical=True)
    rab = Polynomial.constant(ctx, f.field, 1) - tf
    H = buchberger(Ideal(ctx, f.field, tuple(lift) + (rab,)), max_pairs=max_pairs)
    return H.is_unit()


def krull_dimension(G: GroebnerBasis) -> int:
    """Affine dimension from leading monomials; -1 for the unit ideal."""
    if G.is_unit():
        return -1
    nv = G.ctx.nvars
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in G.leading_monomials]
    for size in range(nv, -1, -1):
        for subset in combinations(range(nv), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def standard_monomials(G: GroebnerBasis, limit: int = 200_000) -> list[tuple]:
    """Monomials outside the leading-term ideal (finite for zero-dimensional ideals)."""
    lms = G.leading_monomials
    nv = G.ctx.nvars
    if G.is_unit():
        return []
    out = []
    frontier = [(0,) * nv]
    seen = {frontier[0]}
    while frontier:
        m = frontier.pop()
        if any(mono_divides(lm, m) for lm in lms):
            continue
        out.append(m)
        if len(out) > limit:
            raise NotZeroDimensional("quotient is not finite dimensional")
        for i in range(nv):
            e = list(m)
            e[i] += 1
            t = tuple(e)
            if t not in seen:
                seen.add(t)
                frontier.append(t)
    return out


def zero_dim_degree(G: GroebnerBasis) -> int:
    """dim_K K[w]/I, i.e. the number of points counted with multiplicity."""
    if G.is_unit():
        return 0
    if krull_dimension(G) != 0:
        raise NotZeroDimensional(f"ideal has Krull dimension {krull_dimension(G)}")
    return len(standard_monomials(G))


# ---------------------------------------------------------------- point solving

def univariate_roots(coeffs: Sequence, field: Field) -> list:
    """Roots in ``field`` of sum coeffs[i] t^i (distinct, sorted)."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    t = sympy.Symbol("t")
    if field.characteristic:
        poly = sympy.Poly([int(c) for c in reversed(coeffs)], t, modulus=field.p)
    else:
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction)
                           else c for c in reversed(coeffs)], t, domain="QQ")
    roots = set()
    for fac, _ in poly.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            if field.characteristic:
                roots.add(field(-int(b)) * field.inv(field(int(a))) % field.p)
            else:
                roots.add(Fraction(-Fraction(str(b)) / Fraction(str(a))))
    return sorted(roots)


def _minimal_polynomial(var: int, G: GroebnerBasis, degree: int) -> list:
    """Coefficients (low to high) of the minimal polynomial of w_var mod I."""
    from . import linalg
    field = G.field
    std = standard_monomials(G)
    index = {m: i for i, m in enumerate(std)}
    nv = G.ctx.nvars
    rows = []
    x = Polynomial.variable(G.ctx, field, var)
    power = Polynomial.constant(G.ctx, field, 1)
    for e in range(degree + 1):
        r = reduce_poly(power, G)
        vec = [field.zero] * len(std)
        for m, c in r.terms.items():
            vec[index[m]] = c
        rows.append(vec)
        M = field.array(rows).T  # columns = powers
        null = linalg.nullspace(M, field)
        if null.shape[0]:
            return list(null[0].tolist())
        power = power * x
    raise NotZeroDimensional("no univariate relation found")  # pragma: no cover


def rational_points(G: GroebnerBasis) -> list[tuple]:
    """All points of V(I) with coordinates in the working field (zero-dim I)."""
    if G.is_unit():
        return []
    d = zero_dim_degree(G)
    nv = G.ctx.nvars
    field = G.field
    candidates = []
    for v in range(nv):
        candidates.append(univariate_roots(_minimal_polynomial(v, G, d), field))
    points: list[tuple] = [()]
    for v in range(nv):
        points = [pt + (r,) for pt in points for r in candidates[v]]
    out = []
    for pt in points:
        if all(g.evaluate(pt) == 0 for g in G.basis):
            out.append(pt)
    return out

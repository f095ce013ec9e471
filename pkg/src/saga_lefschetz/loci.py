"""Nihilpotent and non-Lefschetz loci in P(R^1).

Points of P(R^1) are written in the dual coordinates ``w0..wn``: the point
``[w]`` is the linear form ``sum w_i x_i``.  The nihilpotent locus N_k is
cut out by the dim R^k coordinates of ``(sum w_i x_i)^k``.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field as dc_field
from itertools import combinations, product
from typing import Sequence

import numpy as np

from . import groebner as gb
from . import linalg
from .algebra import AlgebraElement, GradedAlgebra
from .core import (Polynomial, VariableContext, _monomial_basis, binomial, format_poly,
                   multinomial)
from .errors import (BasePointInNk, DegreeOutOfRange, InsufficientPoints, NotALineInN3,
                     NotOnLocus, NotZeroDimensional, PlaneNotInLocus, SizeGateExceeded)
from .groebner import Ideal


@dataclass(frozen=True)
class LocusIdeal:
    kind: str            # "nihil" or "non_lefschetz"
    degree: int          # k for nihil, a for non_lefschetz
    ideal: Ideal
    provenance: dict = dc_field(default_factory=dict)

    @property
    def generators(self) -> tuple:
        return self.ideal.generators

    def to_dict(self) -> dict:
        return {"kind": self.kind, "degree": str(self.degree),
                "generators": [format_poly(g) for g in self.generators],
                "provenance": dict(self.provenance)}


def dual_context(A: GradedAlgebra) -> VariableContext:
    return VariableContext.dual(A.n)


def point_of(A: GradedAlgebra, x: AlgebraElement) -> tuple:
    """Dual coordinates of a linear form (R^1 = S^1, basis x0..xn)."""
    if x.degree != 1:
        raise DegreeOutOfRange("points of P(R^1) are linear forms")
    return tuple(x.coords.tolist())


def element_of(A: GradedAlgebra, point: Sequence) -> AlgebraElement:
    return A.linear(list(point))


# ---------------------------------------------------------------- nihil loci

def nihil_ideal(A: GradedAlgebra, k: int) -> LocusIdeal:
    """Ideal of N_k: coordinates of (sum w_i x_i)^k in the standard basis of R^k."""
    if k < 2 or k > A.socle_degree:
        raise DegreeOutOfRange(f"nihil ideal needs 2 <= k <= {A.socle_degree}")
    f = A.field
    W = dual_context(A)
    mons = _monomial_basis(A.nvars, k)
    nf = A.nf[k]
    gens = []
    for j in range(A.dims[k]):
        terms = {}
        for t, m in enumerate(mons):
            c = nf[t, j]
            if c != 0:
                terms[m] = f(multinomial(m)) * c
        gens.append(Polynomial(W, f, terms, k))
    prov = {"basis": [format_poly(Polynomial(A.ctx, f, {m: 1}, k)) for m in A.basis[k]],
            "field": f.descriptor()}
    return LocusIdeal("nihil", k, Ideal(W, f, tuple(gens)), prov)


def nihil_membership(A: GradedAlgebra, x: AlgebraElement, k: int) -> bool:
    """Exact test x^k = 0."""
    if x.degree != 1:
        raise DegreeOutOfRange("nihil membership is for linear forms")
    return A.power(x, k).is_zero()


def projective_dimension(ideal: Ideal, max_pairs: int = gb.DEFAULT_MAX_PAIRS) -> int:
    """Dimension of V(I) in P^n for homogeneous I (cone dimension - 1, -1 if empty)."""
    G = gb.buchberger(ideal, max_pairs=max_pairs)
    return max(gb.krull_dimension(G) - 1, -1)


def nihil_dimension(A: GradedAlgebra, k: int, max_pairs: int = gb.DEFAULT_MAX_PAIRS) -> int:
    """Projective dimension of N_k (-1 when empty)."""
    return projective_dimension(nihil_ideal(A, k).ideal, max_pairs)


def sliced_dimension_bound(A: GradedAlgebra, k: int, codim: int, rng: random.Random,
                           max_pairs: int = gb.DEFAULT_MAX_PAIRS) -> int:
    """Upper bound for dim N_k from its intersection with a random linear space.

    Restricting to a random linear subspace L of codimension ``codim``: if
    N_k meets L in dimension e then dim N_k <= e + codim, and an empty
    intersection gives dim N_k <= codim - 1.  Both bounds are certificates;
    they are equalities for a general L.
    """
    n = A.n
    if codim > n:
        raise DegreeOutOfRange("slice codimension exceeds ambient dimension")
    f = A.field
    ideal = nihil_ideal(A, k).ideal
    small = VariableContext.ring(n - codim, "u")
    # w = M u with a random (n+1) x (n+1-codim) matrix
    images = []
    for _ in range(n + 1):
        coeffs = [f.random_element(rng) for _ in range(n + 1 - codim)]
        images.append(Polynomial.linear_form(small, f, coeffs))
    restricted = [g.substitute(images) for g in ideal.generators]
    restricted = [g for g in restricted if not g.is_zero()] or [Polynomial.zero(small, f, k)]
    e = projective_dimension(Ideal(small, f, tuple(restricted)), max_pairs)
    return e + codim if e >= 0 else codim - 1


# ---------------------------------------------------------------- N_2

@dataclass
class N2Analysis:
    degree: int
    rational_points: list
    independent: bool
    product_nonzero: bool
    fermat_candidate: bool
    chart_degrees: list

    def to_dict(self, field) -> dict:
        return {
            "degree": str(self.degree),
            "points": [[field.to_string(c) for c in pt] for pt in self.rational_points],
            "independent": "true" if self.independent else "false",
            "product_nonzero": "true" if self.product_nonzero else "false",
            "fermat_candidate": "true" if self.fermat_candidate else "false",
            "chart_degrees": [str(d) for d in self.chart_degrees],
        }


def chart_ideals(ideal: Ideal):
    """Affine charts w_i = 1, w_j = 0 (j < i) covering P^n without overlap."""
    ctx = ideal.ctx
    f = ideal.field
    nv = ctx.nvars
    for i in range(nv):
        free = list(range(i + 1, nv))
        if free:
            sub = VariableContext(tuple(ctx.names[v] for v in free))
        else:
            sub = VariableContext(("_c",))
        images = []
        for v in range(nv):
            if v < i:
                images.append(Polynomial.zero(sub, f, 0))
            elif v == i:
                images.append(Polynomial.constant(sub, f, 1))
            else:
                images.append(Polynomial.variable(sub, f, free.index(v)))
        gens = [g.substitute(images) for g in ideal.generators]
        gens = [g for g in gens if not g.is_zero()]
        if not free:
            # the single point e_i; encode "c = 0" so the chart is one reduced point
            gens = gens + [Polynomial.variable(sub, f, 0)]
        if not gens:
            gens = [Polynomial.zero(sub, f, 0)]
        def lift(pt, i=i, free=free):
            full = [f.zero] * nv
            full[i] = f.one
            for v, c in zip(free, pt):
                full[v] = c
            return tuple(full)
        yield i, Ideal(sub, f, tuple(gens)), lift, bool(free)


def projective_points(ideal: Ideal, max_pairs: int = gb.DEFAULT_MAX_PAIRS):
    """(total degree, rational points, per-chart degrees) of a zero-dimensional projective scheme."""
    total = 0
    points = []
    degrees = []
    for i, chart, lift, has_free in chart_ideals(ideal):
        G = gb.buchberger(chart, max_pairs=max_pairs)
        if G.is_unit():
            degrees.append(0)
            continue
        if gb.krull_dimension(G) > 0:
            raise NotZeroDimensional(f"positive-dimensional locus on chart w{i} = 1")
        d = gb.zero_dim_degree(G)
        degrees.append(d)
        total += d
        pts = gb.rational_points(G)
        points.extend(lift(pt) if has_free else lift(()) for pt in pts)
    return total, points, degrees


def n2_analysis(A: GradedAlgebra, max_pairs: int = gb.DEFAULT_MAX_PAIRS) -> N2Analysis:
    """Degree and rational points of N_2, with the general-position checks."""
    ideal = nihil_ideal(A, 2).ideal
    degree, points, degrees = projective_points(ideal, max_pairs)
    elems = [element_of(A, pt) for pt in points]
    if elems:
        M = A.field.array([list(pt) for pt in points])
        independent = linalg.rank(M, A.field) == len(points)
    else:
        independent = True
    product_nonzero = True
    if elems and len(elems) <= A.max_degree:
        prod = elems[0]
        for e in elems[1:]:
            prod = prod * e
        product_nonzero = not prod.is_zero()
    return N2Analysis(degree, points, independent, product_nonzero, degree == A.n + 1, degrees)


# ---------------------------------------------------------------- tangent spaces

@dataclass
class TangentSpaceReport:
    point: tuple
    k: int
    jacobian_nullspace: np.ndarray
    kernel_space: np.ndarray
    equal: bool
    power_nonzero: bool
    contained: bool

    @property
    def tangent_dimension(self) -> int:
        """Projective dimension of the Zariski tangent space."""
        return self.jacobian_nullspace.shape[0] - 1


def jacobian_at(ideal: Ideal, point: Sequence) -> np.ndarray:
    f = ideal.field
    rows = []
    for g in ideal.generators:
        rows.append([g.derivative(i).evaluate(point) for i in range(ideal.ctx.nvars)])
    return f.array(rows)


def tangent_space(A: GradedAlgebra, eta: AlgebraElement, k: int,
                  locus: LocusIdeal | None = None) -> TangentSpaceReport:
    """Compare the Zariski tangent space of N_k at eta with K^1_{eta^{k-1}}."""
    if not nihil_membership(A, eta, k):
        raise NotOnLocus(f"eta^{k} != 0")
    locus = locus or nihil_ideal(A, k)
    point = point_of(A, eta)
    J = jacobian_at(locus.ideal, point)
    tangent = linalg.nullspace(J, A.field)
    q = A.power(eta, k - 1)
    kernel = A.kernel(q, 1)
    kernel_rows = A.field.array([list(e.coords.tolist()) for e in kernel]) if kernel else \
        A.field.zeros((0, A.nvars))
    equal = linalg.same_row_space(tangent, kernel_rows, A.field)
    contained = linalg.contains_row_space(kernel_rows, tangent, A.field)
    return TangentSpaceReport(point, k, tangent, kernel_rows, equal, not q.is_zero(), contained)


def sample_locus_points(locus: LocusIdeal, count: int, rng: random.Random,
                        dim: int | None = None, max_slices: int = 500,
                        max_pairs: int = gb.DEFAULT_MAX_PAIRS) -> list[tuple]:
    """Distinct rational points of V(locus), found on random linear slices.

    A random linear space of complementary dimension meets V in finitely many
    points; the rational ones are kept.  Useful over a prime field, where
    such points are plentiful.  May return fewer than ``count`` points.
    """
    ideal = locus.ideal
    f = ideal.field
    nv = ideal.ctx.nvars
    if dim is None:
        dim = projective_dimension(ideal, max_pairs)
    if dim < 0:
        return []
    small = VariableContext.ring(nv - 1 - dim, "u")
    found: dict = {}
    for _ in range(max_slices):
        if len(found) >= count:
            break
        M = [[f.random_element(rng) for _ in range(small.nvars)] for _ in range(nv)]
        images = [Polynomial.linear_form(small, f, row) for row in M]
        restricted = [g.substitute(images) for g in ideal.generators]
        restricted = [g for g in restricted if not g.is_zero()]
        if not restricted:
            continue
        try:
            _, pts, _ = projective_points(Ideal(small, f, tuple(restricted)), max_pairs)
        except NotZeroDimensional:
            continue
        for u in pts:
            pt = tuple(f(sum(M[i][j] * u[j] for j in range(small.nvars))) for i in range(nv))
            if any(c != 0 for c in pt):
                found.setdefault(_normalize_point(pt, f), pt)
    return list(found.values())[:count]


def _normalize_point(pt, f):
    lead = next(c for c in pt if c != 0)
    inv = f.inv(lead)
    return tuple(f(c * inv) for c in pt)


# ---------------------------------------------------------------- decompositions

@dataclass
class DecompositionCheck:
    holds: bool
    log: list

    def __bool__(self):
        return self.holds


def verify_component_decomposition(A: GradedAlgebra, k: int, components: Sequence[Ideal],
                                   locus: LocusIdeal | None = None,
                                   check_union: bool = True,
                                   max_pairs: int = gb.DEFAULT_MAX_PAIRS) -> DecompositionCheck:
    """Set-theoretic check that N_k is the union of V(component) (radical membership).

    (i) every nihil generator vanishes on each component; (ii) when
    ``check_union``, every product of one generator per component vanishes
    on N_k.  With ``check_union=False`` only the containment of the union in
    N_k is verified.
    """
    if not components:
        raise ValueError("need at least one component")
    locus = locus or nihil_ideal(A, k)
    log = []
    ok = True
    for ci, comp in enumerate(components):
        for g in locus.generators:
            res = gb.radical_membership(g, comp, max_pairs=max_pairs)
            if not res:
                log.append(f"component {ci}: generator {format_poly(g)} does not vanish")
                ok = False
        if ok:
            log.append(f"component {ci} lies in N_{k}")
    if check_union:
        for choice in product(*[comp.generators for comp in components]):
            prod = choice[0]
            for g in choice[1:]:
                prod = prod * g
            if not gb.radical_membership(prod, locus.ideal, max_pairs=max_pairs):
                log.append(f"product {format_poly(prod)} does not vanish on N_{k}")
                ok = False
        if ok:
            log.append(f"N_{k} lies in the union of the components")
    return DecompositionCheck(ok, log)


def same_zero_set(I: Ideal, J: Ideal, max_pairs: int = gb.DEFAULT_MAX_PAIRS) -> bool:
    """V(I) = V(J) via mutual radical membership of generators."""
    return (all(gb.radical_membership(g, J, max_pairs=max_pairs) for g in I.generators)
            and all(gb.radical_membership(g, I, max_pairs=max_pairs) for g in J.generators))


def hypersurface_singular_ideal(h: Polynomial) -> Ideal:
    """Ideal of the singular locus of V(h): (h, dh/dw_0, ..., dh/dw_n)."""
    gens = [h] + [h.derivative(i) for i in range(h.ctx.nvars)]
    gens = [g for g in gens if not g.is_zero()]
    return Ideal.of(gens)


# ---------------------------------------------------------------- secants, lines, planes

def secant_containment_check(A: GradedAlgebra, points: Sequence[AlgebraElement], a: int, k: int,
                             r: int, trials: int = 20, rng: random.Random | None = None):
    """Random elements of spans of ``k`` points of N_a lie in N_r.

    Returns ``(True, None)`` or ``(False, counterexample)``.
    """
    rng = rng or random.Random(0)
    pts = list(points)
    for p in pts:
        if not nihil_membership(A, p, a):
            raise NotOnLocus("supplied point is not in N_a")
    if len(pts) < k:
        raise InsufficientPoints(f"need {k} points of N_{a}, have {len(pts)}")
    for _ in range(trials):
        chosen = rng.sample(pts, k)
        x = A.zero(1)
        for p in chosen:
            x = x + p * A.field.random_element(rng)
        if not A.power(x, r).is_zero():
            return False, x
    return True, None


@dataclass
class LineCheck:
    joins_two_points: bool
    discriminant: object
    quadric: tuple          # (a, b, c): (s v + t w)^2 = (a s^2 + b st + c t^2) * q
    n2_points: list


def line_in_n3_check(A: GradedAlgebra, v: AlgebraElement, w: AlgebraElement) -> LineCheck:
    """A line in N_3 joins two distinct points of N_2.

    ``(s v + t w)^2`` must span at most a line of R^2 as (s:t) varies; the
    binary quadratic governing it must have two distinct roots.
    """
    f = A.field
    if linalg.rank(f.array([v.coords.tolist(), w.coords.tolist()]), f) != 2:
        raise NotALineInN3("v and w do not span a line")
    cubes = [A.power(v, 3), v * v * w, v * w * w, A.power(w, 3)]
    if not all(c.is_zero() for c in cubes):
        raise NotALineInN3("the pencil is not contained in N_3")
    vv, vw, ww = v * v, v * w, w * w
    two = f(2)
    rows = np.vstack([vv.coords, f.normalize(vw.coords * two), ww.coords]).T  # one row per coordinate
    R, pivots = linalg.rref(rows, f) if rows.size else (rows, [])
    if R.shape[0] != 1:
        # rank 0: the line would lie in N_2; rank >= 2: at most one common root
        return LineCheck(False, None, (), [])
    a, b, c = R[0].tolist()
    disc = f(b * b - 4 * a * c)
    points = []
    if a == 0:
        points.append(point_of(A, v))                       # t = 0
    for root in gb.univariate_roots([c, b, a], f):          # a s^2 + b s + c at t = 1
        points.append(point_of(A, v * root + w))
    return LineCheck(disc != 0 and not (a == 0 and b == 0), disc, (a, b, c), points)


@dataclass
class PlaneSection:
    p_k: Polynomial
    basis: list
    nondegenerate_points: list


def _plane_in_locus(A: GradedAlgebra, basis: Sequence[AlgebraElement], r: int) -> bool:
    k = len(basis)
    for combo in _monomial_basis(k, r):
        prod = A.one()
        for b, e in zip(basis, combo):
            for _ in range(e):
                prod = prod * b
        if not prod.is_zero():
            return False
    return True


def _adjusted_bases(basis, rng):
    yield list(basis)
    k = len(basis)
    for i in range(k - 1):
        yield list(basis[:-1]) + [basis[-1] + basis[i]]
    total = basis[-1]
    for b in basis[:-1]:
        total = total + b
    yield list(basis[:-1]) + [total]
    for _ in range(20):
        cand = basis[-1]
        for b in basis[:-1]:
            cand = cand + b * rng.randint(1, 50)
        yield list(basis[:-1]) + [cand]


def plane_section_check(A: GradedAlgebra, basis: Sequence[AlgebraElement], adjust: bool = True,
                        search_lines: int = 40,
                        rng: random.Random | None = None) -> PlaneSection:
    """For a (k-1)-plane in N_{k+1}: the degree-k form cutting out the plane's
    intersection with N_k, plus k independent points of it with nonzero product.
    """
    rng = rng or random.Random(0)
    f = A.field
    k = len(basis)
    if k < 1:
        raise PlaneNotInLocus("empty basis")
    if linalg.rank(f.array([b.coords.tolist() for b in basis]), f) != k:
        raise PlaneNotInLocus("basis vectors are dependent")
    if not _plane_in_locus(A, basis, k + 1):
        raise PlaneNotInLocus(f"plane is not contained in N_{k + 1}")
    for cand in (_adjusted_bases(basis, rng) if adjust else [list(basis)]):
        if not nihil_membership(A, cand[-1], k):
            basis = cand
            break
    else:
        raise BasePointInNk("could not choose a basis with last vector outside N_k")
    top = A.power(basis[-1], k)
    piv = int(np.nonzero(top.coords)[0][0])
    inv = f.inv(top.coords[piv])
    alpha = VariableContext.ring(k - 1, "a")
    terms = {}
    for e in _monomial_basis(k, k):
        prod = A.one()
        for b, t in zip(basis, e):
            for _ in range(t):
                prod = prod * b
        lam = f(prod.coords[piv] * inv) if f.characteristic else prod.coords[piv] * inv
        if prod != top * lam:
            raise PlaneNotInLocus("degree-k monomials are not proportional to x^k")
        if lam != 0:
            terms[e] = f(multinomial(e)) * lam
    p_k = Polynomial(alpha, f, terms, k)
    points = _independent_points(A, basis, p_k, search_lines, rng)
    return PlaneSection(p_k, list(basis), points)


def _independent_points(A, basis, p_k, search_lines, rng):
    f = A.field
    k = len(basis)
    found: list = []
    for _ in range(search_lines):
        u = [f(rng.randint(-50, 50)) for _ in range(k)]
        d = [f(rng.randint(-50, 50)) for _ in range(k)]
        t = VariableContext(("t",))
        line = [Polynomial.constant(t, f, ui) + Polynomial.variable(t, f, 0) * di
                for ui, di in zip(u, d)]
        restricted = p_k.substitute(line)
        coeffs = [restricted.coefficient((e,)) for e in range(restricted.degree + 1)]
        for root in gb.univariate_roots(coeffs, f):
            alpha = [f(ui + root * di) for ui, di in zip(u, d)]
            x = A.zero(1)
            for a, b in zip(alpha, basis):
                x = x + b * a
            if not x.is_zero():
                found.append(x)
    # greedy choice of k independent points with nonzero product
    chosen: list = []
    prod = A.one()
    for x in found:
        rows = [c.coords.tolist() for c in chosen + [x]]
        if linalg.rank(f.array(rows), f) != len(rows):
            continue
        nxt = prod * x
        if nxt.is_zero():
            continue
        chosen.append(x)
        prod = nxt
        if len(chosen) == k:
            break
    return chosen


# ---------------------------------------------------------------- non-Lefschetz locus

def _det_linear(entries, k, cols, field, ctx):
    """Determinant of a k x k matrix of polynomials by cached Laplace expansion."""
    cache = {}

    def rec(col, rows):
        if col == k:
            return Polynomial.constant(ctx, field, 1)
        key = (col, rows)
        if key in cache:
            return cache[key]
        total = Polynomial.zero(ctx, field, k - col)
        sign = 1
        for idx, r in enumerate(rows):
            e = entries[r][cols[col]]
            if not e.is_zero():
                sub = rec(col + 1, rows[:idx] + rows[idx + 1:])
                term = e * sub
                total = total + (term if sign > 0 else -term)
            sign = -sign
        cache[key] = total
        return total

    return rec


def non_lefschetz_ideal(A: GradedAlgebra, a: int, gate: int = 10**4) -> LocusIdeal:
    """Maximal minors of the matrix of ``(sum w_i x_i) * : R^a -> R^{a+1}``."""
    if a < 1 or a + 1 > A.socle_degree:
        raise DegreeOutOfRange(f"need 1 <= a <= {A.socle_degree - 1}")
    f = A.field
    W = dual_context(A)
    mats = [A.mult_map_matrix(A.basis_element(1, i), a) for i in range(A.nvars)]
    nrows, ncols = mats[0].shape
    m = min(nrows, ncols)
    count = binomial(max(nrows, ncols), m)
    if count > gate:
        raise SizeGateExceeded(f"{count} maximal minors exceed the gate {gate}")
    entries = [[Polynomial.linear_form(W, f, [M[r, c] for M in mats]) for c in range(ncols)]
               for r in range(nrows)]
    if nrows < ncols:
        entries = [list(col) for col in zip(*entries)]
        nrows, ncols = ncols, nrows
    gens = []
    cols = list(range(ncols))
    for rows in combinations(range(nrows), m):
        det = _det_linear(entries, m, cols, f, W)(0, tuple(rows))
        if not det.is_zero():
            gens.append(det)
    if not gens:
        gens = [Polynomial.zero(W, f, m)]
    prov = {"matrix": f"{A.dims[a + 1]}x{A.dims[a]}", "minors": str(count),
            "field": f.descriptor()}
    return LocusIdeal("non_lefschetz", a, Ideal(W, f, tuple(gens)), prov)


# ---------------------------------------------------------------- fibers

def fiber_statistics(A: GradedAlgebra, k: int, samples: int = 50,
                     rng: random.Random | None = None,
                     extra: Sequence[AlgebraElement] = ()) -> Counter:
    """Histogram of dim K^1_{x^k} over random (and supplied) linear forms x."""
    rng = rng or random.Random(0)
    if k < 0 or k + 1 > A.max_degree:
        raise DegreeOutOfRange("fiber statistics need k + 1 <= max_degree")
    hist: Counter = Counter()
    xs = [A.random_element(1, rng) for _ in range(samples)] + list(extra)
    for x in xs:
        hist[A.kernel_dim(A.power(x, k), 1)] += 1
    return hist

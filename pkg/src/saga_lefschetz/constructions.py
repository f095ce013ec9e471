"""Concrete instances: jacobian rings of cubics, the Fermat family, the
worked-example corpus, random complete intersections, and the lifting
harness for quotients by non-Lefschetz elements.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field as dc_field
from importlib import resources
from typing import Callable

import numpy as np

from . import groebner as gb
from . import linalg
from .algebra import AlgebraElement, GradedAlgebra, QuadricPresentation, build_algebra
from .core import (QQ, Field, Polynomial, PrimeField, VariableContext, _monomial_basis,
                   binomial, format_poly, parse_poly, random_form)
from .errors import (CodimensionTooSmall, NotAnnihilated, NotFermatCandidate,
                     NotRegularSequence, RetriesExhausted, WrongDegree)
from .groebner import Ideal
from .lefschetz import LefschetzVerdict, check_wlp, is_lefschetz_element
from .loci import (N2Analysis, hypersurface_singular_ideal, n2_analysis, nihil_dimension,
                   nihil_ideal, projective_dimension, same_zero_set,
                   verify_component_decomposition)


# ---------------------------------------------------------------- cubics

@dataclass(frozen=True)
class CubicForm:
    F: Polynomial

    def __post_init__(self):
        if self.F.is_zero() or self.F.degree != 3 or not self.F.is_homogeneous():
            raise WrongDegree("a cubic form must be homogeneous of degree 3")

    @property
    def n(self) -> int:
        return self.F.ctx.n

    @classmethod
    def parse(cls, text: str, n: int, field: Field = QQ) -> "CubicForm":
        return cls(parse_poly(text, VariableContext.ring(n), field))

    def partials(self) -> list[Polynomial]:
        out = []
        for i in range(self.F.ctx.nvars):
            d = self.F.derivative(i)
            out.append(d if not d.is_zero() else Polynomial.zero(d.ctx, d.field, 2))
        return out


def jacobian_ring(F: CubicForm) -> QuadricPresentation:
    """The n+1 partial derivatives; zero partials are kept (building then fails)."""
    return QuadricPresentation(F.F.ctx, F.F.field, tuple(F.partials()))


def fermat_cubic(n: int, field: Field = QQ) -> CubicForm:
    ctx = VariableContext.ring(n)
    terms = {}
    for i in range(n + 1):
        e = [0] * (n + 1)
        e[i] = 3
        terms[tuple(e)] = 1
    return CubicForm(Polynomial(ctx, field, terms, 3))


def random_cubic(n: int, rng: random.Random, field: Field) -> CubicForm:
    return CubicForm(random_form(VariableContext.ring(n), field, 3, rng))


def jacobian_space(pres: QuadricPresentation) -> tuple[np.ndarray, list]:
    """Cubics whose partials all lie in the span of the generators.

    Returns a basis (rows, coefficient vectors over the cubic monomials)
    and the monomial list.
    """
    f = pres.field
    ctx = pres.ctx
    nv = ctx.nvars
    cubics = _monomial_basis(nv, 3)
    quads = _monomial_basis(nv, 2)
    qidx = {m: i for i, m in enumerate(quads)}
    G = f.array([[g.coefficient(m) for m in quads] for g in pres.generators])
    Rg, piv = linalg.rref(G, f) if G.size else (G, [])
    # complement projector: a quadric lies in span(G) iff its reduction mod Rg vanishes
    rows = []
    for i in range(nv):
        D = f.zeros((len(cubics), len(quads)))
        for t, m in enumerate(cubics):
            if m[i]:
                e = list(m)
                e[i] -= 1
                D[t, qidx[tuple(e)]] = f(m[i])
        if Rg.shape[0]:
            D = f.normalize(D - linalg.matmul(D[:, piv], Rg, f))
        rows.append(D.T)
    constraints = np.vstack(rows)
    return linalg.nullspace(constraints, f), cubics


def is_jacobian_presentation(pres: QuadricPresentation, rng: random.Random | None = None):
    """Whether the generators span the partials of some cubic.

    Returns ``(answer, exact)``.  ``False`` is exact when all cubics with
    partials inside the span have partials spanning fewer than n+1
    dimensions; ``True`` is exact with a witness cubic.
    """
    rng = rng or random.Random(0)
    f = pres.field
    V, cubics = jacobian_space(pres)
    nv = pres.ctx.nvars
    if V.shape[0] == 0:
        return False, True

    def partial_rows(vec):
        F = Polynomial(pres.ctx, f, {m: c for m, c in zip(cubics, vec.tolist()) if c != 0}, 3)
        quads = _monomial_basis(nv, 2)
        return [[F.derivative(i).coefficient(m) for m in quads] for i in range(nv)]

    allrows = []
    for vec in V:
        allrows.extend(partial_rows(vec))
    if linalg.rank(f.array(allrows), f) < nv:
        return False, True
    for _ in range(10):
        c = f.array([f.random_element(rng) for _ in range(V.shape[0])]).reshape(1, -1)
        vec = linalg.matmul(c, V, f)[0]
        if linalg.rank(f.array(partial_rows(vec)), f) == nv:
            return True, True
    return False, False


# ---------------------------------------------------------------- random instances

def random_quadric_ci(n: int, seed: int, field: Field, retries: int = 20) -> QuadricPresentation:
    """Dense random quadrics, redrawn until they form a regular sequence."""
    rng = random.Random(seed)
    ctx = VariableContext.ring(n)
    for _ in range(retries):
        pres = QuadricPresentation(ctx, field, tuple(random_form(ctx, field, 2, rng)
                                                     for _ in range(n + 1)))
        try:
            build_algebra(pres)
        except NotRegularSequence:
            continue
        return pres
    raise RetriesExhausted(f"no regular sequence in {retries} draws (n={n}, seed={seed})")


def random_algebra(n: int, seed: int, field: Field, retries: int = 20) -> GradedAlgebra:
    return build_algebra(random_quadric_ci(n, seed, field, retries))


def random_jacobian_ring(n: int, seed: int, field: Field, retries: int = 20) -> GradedAlgebra:
    """Jacobian ring of a random smooth cubic (smoothness certified by building)."""
    rng = random.Random(seed)
    for _ in range(retries):
        try:
            return build_algebra(jacobian_ring(random_cubic(n, rng, field)))
        except NotRegularSequence:
            continue
    raise RetriesExhausted(f"no smooth cubic in {retries} draws (n={n}, seed={seed})")


def annihilated_instance(n: int, seed: int, field: Field, retries: int = 20) -> GradedAlgebra:
    """Random regular quadrics whose first generator is x0 * l, so x0 * l = 0 in R."""
    rng = random.Random(seed)
    ctx = VariableContext.ring(n)
    x0 = Polynomial.variable(ctx, field, 0)
    for _ in range(retries):
        ell = Polynomial.linear_form(ctx, field, [field.random_element(rng) for _ in range(n + 1)])
        gens = (x0 * ell,) + tuple(random_form(ctx, field, 2, rng) for _ in range(n))
        try:
            return build_algebra(QuadricPresentation(ctx, field, gens))
        except NotRegularSequence:
            continue
    raise RetriesExhausted(f"no regular sequence in {retries} draws (n={n}, seed={seed})")


# ---------------------------------------------------------------- Fermat reconstruction

@dataclass
class FermatReconstruction:
    matrix: np.ndarray | None       # rows: the N_2 points as linear forms
    squares_vanish: bool
    independent: bool
    same_ideal: bool
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.matrix is not None and self.squares_vanish and self.independent and self.same_ideal


def fermat_reconstruct(A: GradedAlgebra, analysis: N2Analysis | None = None) -> FermatReconstruction:
    """Coordinates y = M x in which the presentation becomes (y_0^2, ..., y_n^2)."""
    analysis = analysis or n2_analysis(A)
    if not analysis.fermat_candidate:
        raise NotFermatCandidate(f"N_2 has degree {analysis.degree}, need {A.n + 1}")
    f = A.field
    pts = analysis.rational_points
    if len(pts) < A.n + 1:
        return FermatReconstruction(None, False, False, False,
                                    f"only {len(pts)} of {A.n + 1} points are rational")
    M = f.array([list(p) for p in pts])
    ts = [A.linear(list(p)) for p in pts]
    squares_vanish = all((t * t).is_zero() for t in ts)
    independent = linalg.rank(M, f) == A.n + 1
    quads = _monomial_basis(A.nvars, 2)
    sq = []
    for p in pts:
        lin = Polynomial.linear_form(A.ctx, f, list(p))
        g = lin * lin
        sq.append([g.coefficient(m) for m in quads])
    gens = [[g.coefficient(m) for m in quads] for g in A.presentation.generators]
    same = linalg.same_row_space(f.array(sq), f.array(gens), f)
    return FermatReconstruction(M, squares_vanish, independent, same)


def primitive_cube_root(field: PrimeField) -> int:
    if field.characteristic == 0 or field.p % 3 != 1:
        raise NotFermatCandidate("the field has no primitive cube root of unity")
    for g in range(2, field.p):
        lam = pow(g, (field.p - 1) // 3, field.p)
        if lam != 1:
            return lam
    raise NotFermatCandidate("no cube root found")


def ex2_linear_forms(field: PrimeField) -> list[Polynomial]:
    lam = primitive_cube_root(field)
    ctx = VariableContext.ring(3)
    return [Polynomial.linear_form(ctx, field, c) for c in
            ([1, 1, 1, 0], [1, -(lam + 1), lam, 0], [1, lam, -(lam + 1), 0], [0, 0, 0, 1])]


def ex2_identity_holds(field: PrimeField) -> bool:
    """sum of cubes of the four EX2 linear forms (last one weighted 3) equals 3f."""
    l0, l1, l2, l3 = ex2_linear_forms(field)
    lhs = l0 ** 3 + l1 ** 3 + l2 ** 3 + (l3 ** 3).scale(3)
    f = parse_poly(EX2_CUBIC, VariableContext.ring(3), field)
    return lhs == f.scale(3)


# ---------------------------------------------------------------- corpus

EX2_CUBIC = "x0^3+x1^3+x2^3+x3^3+6*x0*x1*x2"
EX3_CUBIC = "x0^3+x1^3+x2^3+x3^3+3*x0*x1*x2"
EX4_CUBIC = "x0^3+x1^3+x2^3+x3^3+x0*x1^2+x0*x2^2+x0*x3^2"
EX5_QUADRICS = ("x0^2", "x1^2", "x2^2", "x3^2+2*x0*x1")
EX3_G = "w0^3+w1^3+w2^3-6*w0*w1*w2"
EX5_G = "w3^2-3*w0*w1"
EX2_PRIME = 9973


@dataclass
class FactResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class NamedInstance:
    name: str
    presentation: QuadricPresentation
    expected: dict
    description: str = ""
    cubic: str | None = None

    def algebra(self) -> GradedAlgebra:
        return build_algebra(self.presentation)

    def verify(self) -> list[FactResult]:
        return VERIFIERS[self.name.split("(")[0]](self)


def _w(text: str, field: Field = QQ) -> Polynomial:
    return parse_poly(text, VariableContext.dual(3), field)


def _ideal(texts, field: Field = QQ) -> Ideal:
    return Ideal.of([_w(t, field) for t in texts])


def coordinate_plane_ideals(n: int, dim: int, field: Field = QQ) -> list[Ideal]:
    """Ideals of the coordinate planes of projective dimension ``dim`` in P^n."""
    from itertools import combinations
    W = VariableContext.dual(n)
    out = []
    for keep in combinations(range(n + 1), dim + 1):
        gens = [Polynomial.variable(W, field, i) for i in range(n + 1) if i not in keep]
        out.append(Ideal.of(gens) if gens else Ideal(W, field, (Polynomial.zero(W, field, 1),)))
    return out


def fermat_instance(n: int, field: Field = QQ) -> NamedInstance:
    return NamedInstance(
        f"FERMAT({n})", jacobian_ring(fermat_cubic(n, field)),
        {"dims": [binomial(n + 1, k) for k in range(n + 2)],
         "n2_degree": n + 1,
         "nihil": "N_k is the union of the coordinate (k-2)-planes"},
        f"jacobian ring of the Fermat cubic in P^{n}")


def paper_corpus() -> list[NamedInstance]:
    """The built-in example corpus EX1..EX5 (all n = 3, over Q)."""
    dims = [1, 4, 6, 4, 1]
    ring = lambda text: jacobian_ring(CubicForm.parse(text, 3))
    ex1 = fermat_instance(3)
    ex1 = NamedInstance("EX1", ex1.presentation,
                        dict(ex1.expected, nihil_degrees=[2, 3, 4], sing="Sing(N_4) = N_3"),
                        "jacobian ring of the Fermat cubic surface", "x0^3+x1^3+x2^3+x3^3")
    return [
        ex1,
        NamedInstance("EX2", ring(EX2_CUBIC),
                      {"dims": dims, "n2_degree": 4, "fermat_reconstruct": f"over F_{EX2_PRIME}",
                       "identity": "cubes of the four linear forms sum to 3f"},
                      "cubic surface projectively equivalent to the Fermat cubic", EX2_CUBIC),
        NamedInstance("EX3", ring(EX3_CUBIC),
                      {"dims": dims, "N2": "{P}", "N3": "{P} u C with C = V(w3, g)",
                       "N4": "V(w3) u V(g)", "g": EX3_G},
                      "cubic surface with a single point in N_2", EX3_CUBIC),
        NamedInstance("EX4", ring(EX4_CUBIC),
                      {"dims": dims, "N2": "empty", "N3": "empty",
                       "N4": "smooth quartic surface (projective dimension 2)"},
                      "cubic surface with empty N_2 and N_3", EX4_CUBIC),
        NamedInstance("EX5", QuadricPresentation.from_strings(EX5_QUADRICS),
                      {"dims": dims, "N2": "{P0, P1, P2}",
                       "N3": "<P0,P1> u <P0,P2> u <P1,P2> u C with C = V(w2, g)",
                       "N4": "V(w3) u V(w2) u V(g)", "g": EX5_G,
                       "sing": "Sing(N_4) = N_3", "jacobian": "not a jacobian ideal"},
                      "complete intersection that is not a jacobian ring"),
    ]


def corpus_instance(name: str) -> NamedInstance:
    if name.upper().startswith("FERMAT"):
        inner = name[name.index("(") + 1:name.rindex(")")] if "(" in name else "3"
        return fermat_instance(int(inner))
    for inst in paper_corpus():
        if inst.name == name.upper():
            return inst
    raise KeyError(f"unknown instance {name!r}")


# -- verifiers

def _check(results, name, fn: Callable[[], tuple]):
    try:
        passed, detail = fn()
    except Exception as exc:  # a failing fact is reported, never raised
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    results.append(FactResult(name, bool(passed), str(detail)))


def _dims_fact(results, A, expected):
    _check(results, "dims", lambda: (A.dims[:len(expected)] == expected and A.is_gorenstein(),
                                     f"dims {A.dims}"))


def _sing_equals(A, k):
    h = nihil_ideal(A, k).generators[0]
    sing = hypersurface_singular_ideal(h)
    return same_zero_set(sing, nihil_ideal(A, k - 1).ideal), f"Sing V({format_poly(h)})"


def _verify_fermat(inst: NamedInstance) -> list[FactResult]:
    A = inst.algebra()
    n = A.n
    res: list[FactResult] = []
    _dims_fact(res, A, inst.expected["dims"])
    a = n2_analysis(A)
    _check(res, "n2", lambda: (a.degree == n + 1 and len(a.rational_points) == n + 1
                               and a.independent and a.product_nonzero,
                               f"degree {a.degree}"))
    for k in inst.expected.get("nihil_degrees", range(2, min(n + 1, 4) + 1)):
        comps = coordinate_plane_ideals(n, k - 2)
        _check(res, f"N{k}", lambda k=k, comps=comps: (
            bool(verify_component_decomposition(A, k, comps)),
            f"{len(comps)} coordinate {k - 2}-planes"))
    if "sing" in inst.expected:
        _check(res, "sing", lambda: _sing_equals(A, n + 1))
    return res


def _verify_ex2(inst: NamedInstance) -> list[FactResult]:
    res: list[FactResult] = []
    A = inst.algebra()
    _dims_fact(res, A, inst.expected["dims"])
    _check(res, "n2_degree_Q", lambda: (n2_analysis(A).degree == 4, "over Q"))
    Fp = PrimeField(EX2_PRIME, require_cube_roots=True)
    B = build_algebra(jacobian_ring(CubicForm.parse(EX2_CUBIC, 3, Fp)))
    a = n2_analysis(B)
    _check(res, "n2_degree_Fp", lambda: (a.degree == 4 and len(a.rational_points) == 4,
                                         f"{len(a.rational_points)} rational points"))
    rec = fermat_reconstruct(B, a)
    _check(res, "fermat_reconstruct", lambda: (rec.ok, rec.note or "y = M x"))

    def forms_match():
        unit = [tuple(int(i == j) for i in range(4)) for j in range(4)]
        expected = [Fp.array([lf.coefficient(u) for u in unit]) for lf in ex2_linear_forms(Fp)]
        ok = rec.matrix is not None and all(
            any(linalg.rank(np.vstack([pt, row]), Fp) == 1 for pt in rec.matrix)
            for row in expected)
        return ok, "points are the four linear forms up to scaling"
    _check(res, "linear_forms", forms_match)
    _check(res, "identity", lambda: (ex2_identity_holds(Fp), f"over F_{EX2_PRIME}"))
    return res


def _verify_ex3(inst: NamedInstance) -> list[FactResult]:
    res: list[FactResult] = []
    A = inst.algebra()
    _dims_fact(res, A, inst.expected["dims"])
    P = _ideal(["w0", "w1", "w2"])
    C = _ideal(["w3", EX3_G])
    a = n2_analysis(A)
    _check(res, "N2", lambda: (same_zero_set(nihil_ideal(A, 2).ideal, P)
                               and a.rational_points == [(0, 0, 0, 1)], "N_2 = {P}"))
    _check(res, "N3", lambda: (bool(verify_component_decomposition(A, 3, [P, C])),
                               "N_3 = {P} u C"))
    _check(res, "N4", lambda: (bool(verify_component_decomposition(
        A, 4, [_ideal(["w3"]), _ideal([EX3_G])])), "N_4 = V(w3) u V(g)"))
    return res


def _verify_ex4(inst: NamedInstance) -> list[FactResult]:
    res: list[FactResult] = []
    A = inst.algebra()
    _dims_fact(res, A, inst.expected["dims"])
    _check(res, "N2", lambda: (nihil_dimension(A, 2) == -1, "empty"))
    _check(res, "N3", lambda: (nihil_dimension(A, 3) == -1, "empty"))
    _check(res, "N4", lambda: (nihil_dimension(A, 4) == 2, "projective dimension 2"))

    def smooth():
        h = nihil_ideal(A, 4).generators[0]
        return (h.degree == 4 and projective_dimension(hypersurface_singular_ideal(h)) == -1,
                f"V({format_poly(h)}) is smooth")
    _check(res, "N4_smooth", smooth)
    return res


def _verify_ex5(inst: NamedInstance) -> list[FactResult]:
    res: list[FactResult] = []
    A = inst.algebra()
    _dims_fact(res, A, inst.expected["dims"])
    a = n2_analysis(A)
    pts = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)]
    _check(res, "N2", lambda: (a.degree == 3 and sorted(a.rational_points) == sorted(pts)
                               and a.independent and a.product_nonzero,
                               "N_2 = {P0, P1, P2}"))
    lines = [_ideal(["w2", "w3"]), _ideal(["w1", "w3"]), _ideal(["w0", "w3"])]
    _check(res, "N3", lambda: (bool(verify_component_decomposition(
        A, 3, lines + [_ideal(["w2", EX5_G])])), "three lines and the conic C"))
    _check(res, "N4", lambda: (bool(verify_component_decomposition(
        A, 4, [_ideal(["w3"]), _ideal(["w2"]), _ideal([EX5_G])])), "V(w3) u V(w2) u V(g)"))
    _check(res, "sing", lambda: _sing_equals(A, 4))
    _check(res, "not_jacobian", lambda: (is_jacobian_presentation(A.presentation) == (False, True),
                                         "no cubic has these partials"))
    return res


VERIFIERS = {"EX1": _verify_fermat, "FERMAT": _verify_fermat, "EX2": _verify_ex2,
             "EX3": _verify_ex3, "EX4": _verify_ex4, "EX5": _verify_ex5}


# ---------------------------------------------------------------- data files

def load_data_file(name: str, field: Field | None = None) -> QuadricPresentation:
    text = resources.files("saga_lefschetz").joinpath("data", f"{name}.saga").read_text()
    return QuadricPresentation.from_text(text, field)


def data_manifest() -> dict:
    return json.loads(resources.files("saga_lefschetz").joinpath("data", "manifest.json").read_text())


# ---------------------------------------------------------------- lifting

@dataclass
class LiftingReport:
    z: AlgebraElement
    quotient_wlp2: LefschetzVerdict
    parent_wlp2: LefschetzVerdict
    identity_holds: bool

    @property
    def consistent_with_theorem(self) -> bool:
        return not (self.quotient_wlp2.holds and not self.parent_wlp2.holds)

    def to_dict(self) -> dict:
        return {"z": str(self.z), "quotient_wlp2": self.quotient_wlp2.to_dict(),
                "parent_wlp2": self.parent_wlp2.to_dict(),
                "kernel_identity": "true" if self.identity_holds else "false",
                "consistent_with_theorem": "true" if self.consistent_with_theorem else "false"}


def verify_lifting(A: GradedAlgebra, z: AlgebraElement, seed: int = 0) -> LiftingReport:
    """WLP_2 on R/(z) and on R for a non-Lefschetz linear z (codimension >= 6)."""
    if A.nvars < 6:
        raise CodimensionTooSmall(f"codimension {A.nvars} < 6")
    if is_lefschetz_element(A, z, 1):
        raise NotAnnihilated("z is a Lefschetz element in degree 1")
    q = A.quotient_by_linear(z)
    rng = random.Random(seed)
    return LiftingReport(z, check_wlp(q.algebra, 2, rng=rng), check_wlp(A, 2, rng=rng),
                         q.identity_holds)

"""Graded quotient rings R = S/I of complete intersections of quadrics.

``build_algebra`` constructs R degree by degree.  For degree k it only
looks at the "border" monomials ``x_j * b`` with ``b`` standard in degree
k-1: every degree-k monomial reduces into their span, and the relations
among them are the differences ``x_i*NF(m/x_i) - x_j*NF(m/x_j)`` (plus the
generators living in degree k).  Row-reducing those relations with columns
in decreasing degrevlex order yields exactly the standard monomials of I in
degree k and the normal form of every monomial of S^k.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg
from .core import (QQ, Field, Polynomial, VariableContext, _monomial_basis, binomial,
                   degrevlex_key, field_from_descriptor, format_poly, monomial_index,
                   parse_poly)
from .errors import (DegreeOutOfRange, InputError, NotAnnihilated, NotRegularSequence,
                     ParseError, WrongDegree)


@dataclass(frozen=True)
class QuadricPresentation:
    """n+1 quadrics in ``x0..xn`` over a fixed field."""

    ctx: VariableContext
    field: Field
    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if self.ctx.n < 1:
            raise InputError("need at least two variables")
        if len(gens) != self.ctx.nvars:
            raise InputError(f"expected {self.ctx.nvars} generators, got {len(gens)}")
        for g in gens:
            if g.field != self.field:
                raise InputError("generator over a different field")
            if g.is_zero():
                continue  # allowed; regularity fails when the algebra is built
            if g.degree != 2 or not g.is_homogeneous():
                raise WrongDegree(f"generator {g} is not a quadric")

    @property
    def n(self) -> int:
        return self.ctx.n

    @classmethod
    def from_strings(cls, lines: Sequence[str], field: Field = QQ) -> "QuadricPresentation":
        ctx = VariableContext.ring(len(lines) - 1)
        return cls(ctx, field, tuple(parse_poly(s, ctx, field) for s in lines))

    def to_text(self) -> str:
        lines = [f"n={self.n} field={self.field.descriptor()}"]
        lines += [format_poly(g) for g in self.generators]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, field: Field | None = None) -> "QuadricPresentation":
        """Parse a presentation file; ``field`` overrides the header's field."""
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines:
            raise ParseError("empty presentation file")
        header = dict(part.split("=", 1) for part in lines[0].split() if "=" in part)
        if "n" not in header:
            raise ParseError("header must look like 'n=<int> field=<Q|Fp:p>'")
        n = int(header["n"])
        if field is None:
            field = field_from_descriptor(header.get("field", "Q"))
        body = lines[1:]
        if len(body) != n + 1:
            raise ParseError(f"expected {n + 1} generator lines, found {len(body)}")
        ctx = VariableContext.ring(n)
        return cls(ctx, field, tuple(parse_poly(s, ctx, field) for s in body))


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Homogeneous element of R given by coordinates in the standard basis of R^k."""

    algebra: "GradedAlgebra"
    degree: int
    coords: np.ndarray = dc_field(repr=False)

    def is_zero(self) -> bool:
        return not np.any(self.coords != 0)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra.multiply(self, other)
        f = self.algebra.field
        return AlgebraElement(self.algebra, self.degree, f.normalize(self.coords * f(other)))

    __rmul__ = __mul__

    def __add__(self, other: "AlgebraElement"):
        if other.degree != self.degree:
            raise DegreeOutOfRange("adding elements of different degrees")
        f = self.algebra.field
        return AlgebraElement(self.algebra, self.degree, f.normalize(self.coords + other.coords))

    def __sub__(self, other: "AlgebraElement"):
        return self + other * (-1)

    def __neg__(self):
        return self * (-1)

    def __pow__(self, k: int):
        return self.algebra.power(self, k)

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and other.degree == self.degree
                and bool(np.all(self.coords == other.coords)))

    def __hash__(self):
        return hash((self.degree, tuple(self.coords.tolist())))

    def to_poly(self) -> Polynomial:
        A = self.algebra
        terms = {m: c for m, c in zip(A.basis[self.degree], self.coords.tolist()) if c != 0}
        return Polynomial(A.ctx, A.field, terms, self.degree)

    def coordinate_strings(self) -> list[str]:
        return [self.algebra.field.to_string(c) for c in self.coords.tolist()]

    def __str__(self):
        return format_poly(self.to_poly())

    def __repr__(self):
        return f"AlgebraElement(deg={self.degree}, {self})"


@dataclass
class QuotientResult:
    """``R/(z)`` together with the annihilator ``w`` and the kernel dimension identity."""

    algebra: "GradedAlgebra"
    z: AlgebraElement
    w: AlgebraElement
    # rows (s, dim K^s_w, dim R^{s-1} - dim K^{s-1}_z)
    identity: list[tuple[int, int, int]]

    @property
    def identity_holds(self) -> bool:
        return all(lhs == rhs for _, lhs, rhs in self.identity)


class GradedAlgebra:
    """The graded ring R = S/I for a quadric presentation, up to ``max_degree``.

    Construction certifies regularity through the Hilbert function: the
    constructor raises NotRegularSequence unless dim R^k = C(n+1, k) for every
    computed degree (in particular R^{n+2} = 0 when computed).
    """

    def __init__(self, pres: QuadricPresentation, max_degree: int | None = None, *,
                 check_regular: bool = True):
        self.presentation = pres
        self.field = pres.field
        self.ctx = pres.ctx
        self.n = pres.n
        self.nvars = pres.ctx.nvars
        self.socle_degree = self.n + 1
        if max_degree is None:
            max_degree = self.n + 2
        if max_degree < 0:
            raise DegreeOutOfRange("max_degree must be non-negative")
        self.max_degree = max_degree
        self.basis: list[list[tuple]] = []
        self.nf: list[np.ndarray] = []
        self._build(check_regular)
        self.dims = [len(b) for b in self.basis]
        self._basis_index = [{m: i for i, m in enumerate(b)} for b in self.basis]
        self._prod_cache: dict = {}

    # ------------------------------------------------------------ construction
    def _build(self, check_regular: bool):
        f = self.field
        nv = self.nvars
        one = f.zeros((1, 1))
        one[0, 0] = f.one
        self.basis.append([(0,) * nv])
        self.nf.append(one)
        gens_by_degree: dict[int, list[Polynomial]] = {}
        for g in self.presentation.generators:
            gens_by_degree.setdefault(g.degree, []).append(g)
        for k in range(1, self.max_degree + 1):
            basis_k, nf_k = self._build_degree(k, gens_by_degree.get(k, []))
            self.basis.append(basis_k)
            self.nf.append(nf_k)
            expected = binomial(self.nvars, k)
            if check_regular and len(basis_k) != expected:
                raise NotRegularSequence(k, len(basis_k), expected)

    def _build_degree(self, k: int, gens: list[Polynomial]):
        f = self.field
        nv = self.nvars
        prev_basis = self.basis[k - 1]
        prev_nf = self.nf[k - 1]
        prev_idx = monomial_index(nv, k - 1)
        mons_k = _monomial_basis(nv, k)
        idx_k = monomial_index(nv, k)
        # border monomials x_j * b, largest first
        border = set()
        for b in prev_basis:
            for j in range(nv):
                e = list(b)
                e[j] += 1
                border.add(tuple(e))
        cols = sorted(border, key=degrevlex_key, reverse=True)
        col_of = {m: i for i, m in enumerate(cols)}
        ncols = len(cols)
        if ncols == 0:
            return [], f.zeros((len(mons_k), 0))
        # P[j][m'] = x_j * NF(m') written in border coordinates
        P = []
        for j in range(nv):
            Pj = f.zeros((len(prev_idx), ncols))
            targets = []
            for b in prev_basis:
                e = list(b)
                e[j] += 1
                targets.append(col_of[tuple(e)])
            Pj[:, targets] = prev_nf
            P.append(Pj)

        def shifted(monos, j):
            out = []
            for m in monos:
                e = list(m)
                e[j] -= 1
                out.append(prev_idx[tuple(e)])
            return out

        blocks = []
        if k >= 2:
            lower = _monomial_basis(nv, k - 2)
            for i in range(nv):
                for j in range(i + 1, nv):
                    rows_i, rows_j = [], []
                    for m2 in lower:
                        e_i = list(m2)
                        e_i[j] += 1  # m / x_i with m = x_i x_j m2
                        e_j = list(m2)
                        e_j[i] += 1
                        rows_i.append(prev_idx[tuple(e_i)])
                        rows_j.append(prev_idx[tuple(e_j)])
                    block = f.normalize(P[i][rows_i] - P[j][rows_j])
                    blocks.append(block)
        for g in gens:
            row = f.zeros((1, ncols))
            for m, c in g.terms.items():
                j = next(t for t in range(nv) if m[t])
                row = f.normalize(row + P[j][shifted([m], j)] * c)
            blocks.append(row)
        R, pivots = self._reduce_blocks(blocks, ncols)
        pivot_set = set(pivots)
        std = [c for c in range(ncols) if c not in pivot_set]
        basis_k = [cols[c] for c in std]
        # border reduction: column c -> coordinates in the standard monomials
        red = f.zeros((ncols, len(std)))
        for t, c in enumerate(std):
            red[c, t] = f.one
        for r, pc in enumerate(pivots):
            red[pc] = f.normalize(-R[r, std])
        # NF of every monomial of S^k: pick the first variable dividing it
        nf_k = f.zeros((len(mons_k), len(std)))
        by_var: dict[int, list[int]] = {}
        for t, m in enumerate(mons_k):
            j = next(v for v in range(nv) if m[v])
            by_var.setdefault(j, []).append(t)
        for j, ts in by_var.items():
            src = shifted([mons_k[t] for t in ts], j)
            nf_k[ts] = linalg.matmul(P[j][src], red, f) if len(std) else nf_k[ts]
        return basis_k, nf_k

    def _reduce_blocks(self, blocks, ncols):
        """Row-reduce the stacked relation blocks incrementally."""
        f = self.field
        R = f.zeros((0, ncols))
        pivots: list[int] = []
        chunk: list[np.ndarray] = []
        size = 0
        limit = max(4 * ncols, 256)

        def flush(R, pivots, chunk):
            M = np.vstack(chunk)
            M = M[np.any(M != 0, axis=1)]
            if M.shape[0] == 0:
                return R, pivots
            if pivots:
                M = f.normalize(M - linalg.matmul(M[:, pivots], R, f))
                M = M[np.any(M != 0, axis=1)]
                if M.shape[0] == 0:
                    return R, pivots
            return linalg.rref(np.vstack([R, M]), f)

        for block in blocks:
            chunk.append(block)
            size += block.shape[0]
            if size >= limit:
                R, pivots = flush(R, pivots, chunk)
                chunk, size = [], 0
                if len(pivots) == ncols:
                    return R, pivots
        if chunk:
            R, pivots = flush(R, pivots, chunk)
        return R, pivots

    # ------------------------------------------------------------ elements
    def _check_degree(self, k: int):
        if k < 0 or k > self.max_degree:
            raise DegreeOutOfRange(f"degree {k} outside [0, {self.max_degree}]")

    def element(self, degree: int, coords) -> AlgebraElement:
        self._check_degree(degree)
        arr = self.field.array(list(coords)) if not isinstance(coords, np.ndarray) else coords
        if arr.shape != (self.dims[degree],):
            raise InputError(f"expected {self.dims[degree]} coordinates in degree {degree}")
        return AlgebraElement(self, degree, arr)

    def zero(self, degree: int) -> AlgebraElement:
        self._check_degree(degree)
        return AlgebraElement(self, degree, self.field.zeros(self.dims[degree]))

    def one(self) -> AlgebraElement:
        return self.element(0, [1])

    def basis_element(self, degree: int, i: int) -> AlgebraElement:
        v = self.field.zeros(self.dims[degree])
        v[i] = self.field.one
        return AlgebraElement(self, degree, v)

    def linear(self, coeffs: Sequence) -> AlgebraElement:
        """Degree-one element sum c_i x_i (R^1 = S^1 for quadric presentations)."""
        if len(coeffs) != self.nvars:
            raise InputError(f"need {self.nvars} coefficients")
        return self.normal_form(Polynomial.linear_form(self.ctx, self.field, coeffs))

    def parse(self, text: str) -> AlgebraElement:
        return self.normal_form(parse_poly(text, self.ctx, self.field))

    def random_element(self, degree: int, rng: random.Random) -> AlgebraElement:
        return self.element(degree, [self.field.random_element(rng) for _ in range(self.dims[degree])])

    def normal_form(self, f: Polynomial) -> AlgebraElement:
        """Class of a homogeneous polynomial in the standard basis of R^deg f."""
        if f.field != self.field:
            f = f.change_field(self.field)
        if not f.is_homogeneous():
            raise InputError("normal_form needs a homogeneous polynomial")
        k = f.degree
        self._check_degree(k)
        idx = monomial_index(self.nvars, k)
        if f.is_zero():
            return self.zero(k)
        rows = [idx[m] for m in f.terms]
        coeffs = self.field.array([f.terms[m] for m in f.terms]).reshape(1, -1)
        out = linalg.matmul(coeffs, self.nf[k][rows], self.field)[0]
        return AlgebraElement(self, k, out)

    def _product_table(self, s: int, t: int) -> np.ndarray:
        """T[u, v] = NF(b_u * b_v) for standard monomials of degrees s and t."""
        key = (s, t)
        if key not in self._prod_cache:
            idx = monomial_index(self.nvars, s + t)
            table = np.array([[idx[tuple(x + y for x, y in zip(u, v))] for v in self.basis[t]]
                              for u in self.basis[s]], dtype=np.int64)
            table = table.reshape(self.dims[s], self.dims[t])
            self._prod_cache[key] = self.nf[s + t][table]
        return self._prod_cache[key]

    def multiply(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        s, t = a.degree, b.degree
        self._check_degree(s + t)
        if self.dims[s + t] == 0:
            return self.zero(s + t)
        T = self._product_table(s, t)
        flat = T.reshape(self.dims[s], -1)
        left = linalg.matmul(a.coords.reshape(1, -1), flat, self.field).reshape(self.dims[t], -1)
        out = linalg.matmul(b.coords.reshape(1, -1), left, self.field)[0]
        return AlgebraElement(self, s + t, out)

    def power(self, a: AlgebraElement, k: int) -> AlgebraElement:
        if k < 0:
            raise InputError("negative power")
        self._check_degree(k * a.degree)
        result = self.one()
        for _ in range(k):
            result = self.multiply(result, a)
        return result

    def mult_map_matrix(self, q: AlgebraElement, a: int) -> np.ndarray:
        """Matrix of ``q * : R^a -> R^{a+s}``; column j is q times the j-th basis element."""
        s = q.degree
        self._check_degree(a)
        self._check_degree(a + s)
        if self.dims[a + s] == 0 or self.dims[a] == 0:
            return self.field.zeros((self.dims[a + s], self.dims[a]))
        T = self._product_table(s, a)
        flat = T.reshape(self.dims[s], -1)
        M = linalg.matmul(q.coords.reshape(1, -1), flat, self.field).reshape(self.dims[a], -1)
        return M.T.copy()

    def kernel(self, q: AlgebraElement, a: int) -> list[AlgebraElement]:
        """Echelonized basis of K^a_q = ker(q * : R^a -> R^{a+s})."""
        M = self.mult_map_matrix(q, a)
        if M.shape[0] == 0:
            basis = linalg.nullspace(self.field.zeros((0, self.dims[a])), self.field)
        else:
            basis = linalg.nullspace(M, self.field)
        return [AlgebraElement(self, a, row.copy()) for row in basis]

    def kernel_dim(self, q: AlgebraElement, a: int) -> int:
        M = self.mult_map_matrix(q, a)
        return self.dims[a] - linalg.rank(M, self.field)

    def socle_pairing_matrix(self, j: int) -> np.ndarray:
        N = self.socle_degree
        if j < 0 or j > N:
            raise DegreeOutOfRange(f"pairing degree {j} outside [0, {N}]")
        self._check_degree(N)
        return self._product_table(j, N - j)[:, :, 0].copy()

    def is_gorenstein(self) -> bool:
        """Perfect pairing R^j x R^{N-j} -> R^N for every j."""
        for j in range(self.socle_degree + 1):
            M = self.socle_pairing_matrix(j)
            if linalg.rank(M, self.field) != self.dims[j] or self.dims[j] != self.dims[self.socle_degree - j]:
                return False
        return True

    # ------------------------------------------------------------ quotients
    def quotient_by_linear(self, z: AlgebraElement) -> QuotientResult:
        """R/(z) for a linear z annihilated by some nonzero w in R^1."""
        if z.degree != 1 or z.is_zero():
            raise InputError("z must be a nonzero linear form")
        ker = self.kernel(z, 1)
        if not ker:
            raise NotAnnihilated("z * w != 0 for every nonzero w in R^1")
        w = ker[0]
        f = self.field
        coeffs = z.coords.tolist()
        j = max(i for i, c in enumerate(coeffs) if c != 0)
        inv = f.inv(coeffs[j])
        # x_j = -(1/c_j) sum_{i != j} c_i x_i  in S/(z); remaining variables renamed
        sub_ctx = VariableContext.ring(self.n - 1)
        images = []
        keep = [i for i in range(self.nvars) if i != j]
        for i in range(self.nvars):
            if i == j:
                lin = [f(-c * inv) for t, c in enumerate(coeffs) if t != j]
                images.append(Polynomial.linear_form(sub_ctx, f, lin))
            else:
                images.append(Polynomial.variable(sub_ctx, f, keep.index(i)))
        reduced = [g.substitute(images) for g in self.presentation.generators]
        mons = _monomial_basis(sub_ctx.nvars, 2)
        M = f.array([[g.coefficient(m) for m in mons] for g in reduced])
        R, _ = linalg.rref(M, f)
        gens = [Polynomial(sub_ctx, f, {m: c for m, c in zip(mons, row.tolist()) if c != 0}, 2)
                for row in R]
        if len(gens) != sub_ctx.nvars:
            raise NotRegularSequence(2, binomial(sub_ctx.nvars + 1, 2) - len(gens),
                                     binomial(sub_ctx.nvars, 2))
        quotient = GradedAlgebra(QuadricPresentation(sub_ctx, f, tuple(gens)))
        identity = []
        for s in range(1, min(self.socle_degree, self.max_degree - 1) + 1):
            lhs = self.kernel_dim(w, s)
            rhs = self.dims[s - 1] - self.kernel_dim(z, s - 1)
            identity.append((s, lhs, rhs))
        return QuotientResult(quotient, z, w, identity)

    # ------------------------------------------------------------ reporting
    def to_report(self) -> dict:
        return {
            "n": str(self.n),
            "field": self.field.descriptor(),
            "generators": [format_poly(g) for g in self.presentation.generators],
            "dims": [str(d) for d in self.dims],
            "socle_degree": str(self.socle_degree),
            "standard_monomials": [[_mono_str(m, self.ctx) for m in b] for b in self.basis],
        }


def _mono_str(m: tuple, ctx: VariableContext) -> str:
    return format_poly(Polynomial(ctx, QQ, {m: 1}, sum(m)))


def build_algebra(pres: QuadricPresentation, max_degree: int | None = None) -> GradedAlgebra:
    """Build R = S/I through degree ``max_degree`` (default n+2), certifying regularity."""
    return GradedAlgebra(pres, max_degree)


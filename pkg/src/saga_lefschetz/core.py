"""Exact scalars, monomials and sparse multivariate polynomials.

Two coefficient fields are supported: the rationals (``QQ``) and prime
fields ``PrimeField(p)``.  Elements are plain Python values -- ``Fraction``
for the rationals and ``int`` residues in ``[0, p)`` for prime fields -- so
they are immutable and cheap to share.  Matrices over either field are numpy
arrays (``int64`` for prime fields, ``object`` for the rationals); see
:mod:`saga_lefschetz.linalg`.

Monomials are exponent tuples.  The monomial order is fixed to graded
reverse lexicographic with ``x0 > x1 > ... > xn``.
"""

from __future__ import annotations

import os
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

import numpy as np
import sympy

from .errors import FieldMismatch, InputError, NotHomogeneous, ParseError

DEFAULT_PRIME = 2147483629
# Largest modulus for which a*b + c stays inside int64 during elimination.
MAX_PRIME = 2**31


class RationalField:
    """The field of rational numbers with ``Fraction`` elements."""

    dtype = object
    characteristic = 0
    sample_bound = 10**6

    def __call__(self, value) -> Fraction:
        if isinstance(value, str):
            return Fraction(value)
        return Fraction(value)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    @property
    def sample_size(self) -> int:
        return 2 * self.sample_bound + 1

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def neg(self, a):
        return -a

    def normalize(self, arr):
        return arr

    def array(self, data) -> np.ndarray:
        arr = np.empty(np.shape(data), dtype=object)
        flat = np.asarray(data, dtype=object).ravel()
        arr.ravel()[:] = [Fraction(v) for v in flat]
        return arr

    def zeros(self, shape) -> np.ndarray:
        arr = np.empty(shape, dtype=object)
        arr.fill(Fraction(0))
        return arr

    def random_element(self, rng: random.Random):
        return Fraction(rng.randint(-self.sample_bound, self.sample_bound))

    def to_string(self, a) -> str:
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def signed(self, a) -> Fraction:
        return Fraction(a)

    def descriptor(self) -> str:
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The prime field F_p with residues stored as ints in ``[0, p)``."""

    dtype = np.int64

    def __init__(self, p: int, require_cube_roots: bool = False):
        p = int(p)
        if p < 2 or p >= MAX_PRIME or not sympy.isprime(p):
            raise InputError(f"modulus {p} must be a prime below 2^31")
        if require_cube_roots and p % 3 != 1:
            raise InputError(f"modulus {p} has no primitive cube root of unity")
        self.p = p
        self.characteristic = p

    def __call__(self, value) -> int:
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    @property
    def sample_size(self) -> int:
        return self.p

    def inv(self, a):
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def neg(self, a):
        return (-int(a)) % self.p

    def normalize(self, arr):
        return arr % self.p

    def array(self, data) -> np.ndarray:
        return np.asarray(data, dtype=np.int64) % self.p

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def random_element(self, rng: random.Random):
        return rng.randrange(self.p)

    def signed(self, a) -> int:
        a = int(a) % self.p
        return a - self.p if a > self.p // 2 else a

    def to_string(self, a) -> str:
        return str(int(a) % self.p)

    def descriptor(self) -> str:
        return f"Fp:{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


QQ = RationalField()
Field = RationalField | PrimeField


def field_from_descriptor(text: str | None = None) -> Field:
    """Parse ``Q`` or ``Fp:<modulus>``; ``None`` uses ``$SAGA_FIELD`` or F_2147483629."""
    if text is None:
        text = os.environ.get("SAGA_FIELD", f"Fp:{DEFAULT_PRIME}")
    text = text.strip()
    if text.upper() in ("Q", "QQ"):
        return QQ
    m = re.fullmatch(r"(?:Fp|GF|F):?(\d+)", text, flags=re.IGNORECASE)
    if not m:
        raise InputError(f"unknown field descriptor {text!r}")
    return PrimeField(int(m.group(1)))


# ---------------------------------------------------------------- monomials


def degrevlex_key(exps: Sequence[int]) -> tuple:
    """Sort key: a larger key means a larger monomial in degrevlex."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


@lru_cache(maxsize=None)
def _monomial_basis(nvars: int, d: int) -> tuple:
    mons = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        mons.append(tuple(e))
    mons.sort(key=degrevlex_key, reverse=True)
    return tuple(mons)


def monomial_basis(n: int, d: int) -> list[tuple[int, ...]]:
    """All degree-``d`` monomials in ``n+1`` variables, largest first."""
    if n < 0 or d < 0:
        raise InputError("monomial_basis needs n >= 0 and d >= 0")
    return list(_monomial_basis(n + 1, d))


@lru_cache(maxsize=None)
def monomial_index(nvars: int, d: int) -> dict:
    return {m: i for i, m in enumerate(_monomial_basis(nvars, d))}


def multinomial(exps: Sequence[int]) -> int:
    out = factorial(sum(exps))
    for e in exps:
        out //= factorial(e)
    return out


def mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: tuple, a: tuple) -> tuple:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


# ---------------------------------------------------------------- contexts


@dataclass(frozen=True)
class VariableContext:
    """Names of the variables of a polynomial ring."""

    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise InputError("variable names must be distinct")

    @classmethod
    def ring(cls, n: int, prefix: str = "x") -> "VariableContext":
        if n < 0:
            raise InputError("need n >= 0")
        return cls(tuple(f"{prefix}{i}" for i in range(n + 1)))

    @classmethod
    def dual(cls, n: int) -> "VariableContext":
        return cls.ring(n, "w")

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def n(self) -> int:
        return len(self.names) - 1

    def extend(self, name: str) -> "VariableContext":
        return VariableContext(self.names + (name,))


# ---------------------------------------------------------------- polynomials


class Polynomial:
    """Sparse polynomial ``{exponent tuple: nonzero coefficient}``.

    Instances are treated as immutable.  The zero polynomial keeps the
    nominal degree it was created with so homogeneity checks stay total.
    """

    __slots__ = ("ctx", "field", "terms", "degree")

    def __init__(self, ctx: VariableContext, field: Field, terms: Mapping | None = None,
                 degree: int | None = None, *, _canonical: bool = False):
        self.ctx = ctx
        self.field = field
        if terms is None:
            terms = {}
        if not _canonical:
            clean = {}
            for m, c in terms.items():
                m = tuple(int(e) for e in m)
                if len(m) != ctx.nvars or min(m, default=0) < 0:
                    raise InputError(f"bad exponent vector {m}")
                c = field(c)
                if c != 0:
                    clean[m] = c
            terms = clean
        self.terms = terms
        if terms:
            self.degree = max(sum(m) for m in terms)
        else:
            self.degree = 0 if degree is None else degree

    # -- constructors
    @classmethod
    def zero(cls, ctx, field, degree: int = 0) -> "Polynomial":
        return cls(ctx, field, {}, degree, _canonical=True)

    @classmethod
    def constant(cls, ctx, field, c=1) -> "Polynomial":
        return cls(ctx, field, {(0,) * ctx.nvars: c})

    @classmethod
    def variable(cls, ctx, field, i: int) -> "Polynomial":
        e = [0] * ctx.nvars
        e[i] = 1
        return cls(ctx, field, {tuple(e): 1}, _canonical=False)

    @classmethod
    def linear_form(cls, ctx, field, coeffs: Sequence) -> "Polynomial":
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * ctx.nvars
            e[i] = 1
            terms[tuple(e)] = c
        return cls(ctx, field, terms, 1)

    # -- basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return all(sum(m) == self.degree for m in self.terms)

    def monomials(self) -> list[tuple]:
        return sorted(self.terms, key=degrevlex_key, reverse=True)

    def leading_monomial(self) -> tuple:
        return max(self.terms, key=degrevlex_key)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def coefficient(self, m: tuple):
        return self.terms.get(tuple(m), self.field.zero)

    def _check(self, other: "Polynomial"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        if self.ctx.nvars != other.ctx.nvars:
            raise FieldMismatch("polynomials live in different rings")

    # -- arithmetic
    def _wrap(self, terms, degree):
        return Polynomial(self.ctx, self.field, terms, degree, _canonical=True)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.ctx, self.field, other)
        self._check(other)
        out = dict(self.terms)
        p = getattr(self.field, "p", None)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if p is not None:
                v %= p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return self._wrap(out, self.degree)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return self._wrap({m: f.neg(c) for m, c in self.terms.items()}, self.degree)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.ctx, self.field, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = self.field(c)
        if c == 0:
            return Polynomial.zero(self.ctx, self.field, self.degree)
        p = getattr(self.field, "p", None)
        if p is None:
            return self._wrap({m: v * c for m, v in self.terms.items()}, self.degree)
        return self._wrap({m: v * c % p for m, v in self.terms.items()}, self.degree)

    def mul_term(self, mono: tuple, c) -> "Polynomial":
        if c == 0:
            return Polynomial.zero(self.ctx, self.field, self.degree + sum(mono))
        p = getattr(self.field, "p", None)
        if p is None:
            terms = {mono_mul(m, mono): v * c for m, v in self.terms.items()}
        else:
            terms = {mono_mul(m, mono): v * c % p for m, v in self.terms.items()}
        return self._wrap(terms, self.degree + sum(mono))

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        p = getattr(self.field, "p", None)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        if p is None:
            out = {m: c for m, c in out.items() if c != 0}
        else:
            out = {m: c % p for m, c in out.items() if c % p}
        return self._wrap(out, self.degree + other.degree)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise InputError("negative power")
        result = Polynomial.constant(self.ctx, self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if self.is_zero() and other == 0:
                return True
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- calculus / evaluation
    def derivative(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to variable ``i``."""
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = c * m[i]
        return Polynomial(self.ctx, self.field, out, max(self.degree - 1, 0))

    def evaluate(self, point: Sequence):
        f = self.field
        total = f.zero
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * pow(x, e) if f.characteristic == 0 else v * pow(int(x), e, f.p) % f.p
            total = total + v
        return f(total)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace variable ``i`` with ``images[i]`` (all in one target ring)."""
        if len(images) != self.ctx.nvars:
            raise InputError("need one image per variable")
        target = images[0]
        result = Polynomial.zero(target.ctx, target.field, 0)
        powers: dict = {}
        for m, c in self.terms.items():
            term = Polynomial.constant(target.ctx, target.field, c)
            for i, e in enumerate(m):
                if e:
                    if (i, e) not in powers:
                        powers[(i, e)] = images[i] ** e
                    term = term * powers[(i, e)]
            result = result + term
        return result

    def change_field(self, field: Field) -> "Polynomial":
        return Polynomial(self.ctx, field, {m: field(self._as_fraction(c)) for m, c in self.terms.items()},
                          self.degree)

    def _as_fraction(self, c):
        return Fraction(c) if self.field.characteristic == 0 else int(c)

    def change_context(self, ctx: VariableContext) -> "Polynomial":
        if ctx.nvars != self.ctx.nvars:
            raise InputError("context size mismatch")
        return Polynomial(ctx, self.field, self.terms, self.degree, _canonical=True)

    # -- text
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"


# ---------------------------------------------------------------- text format

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_]\w*)|(\^)|(\*)|([+-])|(\()|(\)))")


def parse_poly(text: str, ctx: VariableContext, field: Field = QQ, *,
               homogeneous: bool = True) -> Polynomial:
    """Parse ``x0^3 + x1^3 + 6*x0*x1*x2`` style input.

    Raises ParseError on unknown tokens or variables and NotHomogeneous when
    ``homogeneous`` is set and the terms have mixed degrees.
    """
    names = {name: i for i, name in enumerate(ctx.names)}
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial")
    pos = 0
    tokens = []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            if s[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {s[pos]!r} at {pos} in {text!r}")
        pos = m.end()
        kinds = ("num", "var", "pow", "mul", "sign", "lp", "rp")
        for kind, val in zip(kinds, m.groups()):
            if val is not None:
                tokens.append((kind, val))
                break
    terms: dict = {}
    degrees = set()
    i = 0
    first = True
    while i < len(tokens):
        sign = 1
        if tokens[i][0] == "sign":
            sign = -1 if tokens[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ParseError(f"expected + or - in {text!r}")
        first = False
        coeff = Fraction(1)
        exps = [0] * ctx.nvars
        factors = 0
        expect_factor = True
        while i < len(tokens) and tokens[i][0] != "sign":
            kind, val = tokens[i]
            if not expect_factor:
                if kind != "mul":
                    raise ParseError(f"expected '*' before {val!r} in {text!r}")
                i += 1
                expect_factor = True
                continue
            if kind == "num":
                coeff *= Fraction(val)
                i += 1
            elif kind == "var":
                if val not in names:
                    raise ParseError(f"unknown variable {val!r}")
                e = 1
                i += 1
                if i < len(tokens) and tokens[i][0] == "pow":
                    if i + 1 >= len(tokens) or tokens[i + 1][0] != "num" or "/" in tokens[i + 1][1]:
                        raise ParseError(f"bad exponent in {text!r}")
                    e = int(tokens[i + 1][1])
                    i += 2
                exps[names[val]] += e
            else:
                raise ParseError(f"unexpected token {val!r} in {text!r}")
            factors += 1
            expect_factor = False
        if factors == 0:
            raise ParseError(f"empty term in {text!r}")
        if expect_factor:
            raise ParseError(f"dangling '*' in {text!r}")
        key = tuple(exps)
        degrees.add(sum(key))
        terms[key] = terms.get(key, Fraction(0)) + sign * coeff
    if homogeneous and len(degrees) > 1:
        raise NotHomogeneous(f"mixed degrees {sorted(degrees)} in {text!r}")
    poly_terms = {}
    for m, c in terms.items():
        v = field(c)
        if v != 0:
            poly_terms[m] = v
    return Polynomial(ctx, field, poly_terms, max(degrees), _canonical=True)


def format_poly(p: Polynomial) -> str:
    """Canonical text: degrevlex-descending terms, ``*``/``^`` notation."""
    if p.is_zero():
        return "0"
    parts = []
    for m in p.monomials():
        c = p.field.signed(p.terms[m])
        neg = c < 0
        c = -c if neg else c
        factors = []
        for name, e in zip(p.ctx.names, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        cs = p.field.to_string(c) if p.field.characteristic == 0 else str(c)
        if not factors:
            body = cs
        elif c == 1:
            body = "*".join(factors)
        else:
            body = "*".join([cs] + factors)
        parts.append(("-" if neg else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def random_form(ctx: VariableContext, field: Field, degree: int, rng: random.Random,
                dense: bool = True, bound: int | None = None) -> Polynomial:
    """Random homogeneous form; ``bound`` draws integer coefficients in [-bound, bound]."""
    terms = {}
    for m in _monomial_basis(ctx.nvars, degree):
        if not dense and rng.random() < 0.5:
            continue
        terms[m] = rng.randint(-bound, bound) if bound else field.random_element(rng)
    return Polynomial(ctx, field, terms, degree)


def binomial(a: int, b: int) -> int:
    return comb(a, b) if 0 <= b <= a else 0

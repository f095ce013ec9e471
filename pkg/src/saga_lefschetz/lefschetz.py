"""Weak/strong Lefschetz certificates.

A single sample ``x`` for which ``x^s * : R^a -> R^{a+s}`` has maximal rank
proves that the generic rank is maximal (rank is lower semicontinuous).
Generic deficiency can only be supported probabilistically: if the generic
rank were maximal, some maximal minor -- a polynomial of degree at most
``s * max_possible`` in the coordinates of ``x`` -- would be nonzero, and
Schwartz-Zippel bounds the chance that ``t`` independent samples all miss it
by ``(D / |sample set|)^t``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .algebra import AlgebraElement, GradedAlgebra
from .errors import DegreeOutOfRange

DEFAULT_THRESHOLD = Fraction(1, 2**60)


@dataclass(frozen=True)
class Witness:
    x: AlgebraElement
    exact_rank: int


@dataclass(frozen=True)
class Probabilistic:
    samples: int
    field_size: int
    minor_degree_bound: int
    error_bound: Fraction
    threshold: Fraction = DEFAULT_THRESHOLD

    @property
    def meets_threshold(self) -> bool:
        return self.error_bound < self.threshold


@dataclass(frozen=True)
class RankCertificate:
    power: int
    source_degree: int
    generic_rank: int
    max_possible: int
    kind: Witness | Probabilistic

    @property
    def maximal(self) -> bool:
        return self.generic_rank == self.max_possible

    def verify(self, algebra: GradedAlgebra) -> bool:
        """Re-check a witness exactly; probabilistic certificates check their bound."""
        if isinstance(self.kind, Probabilistic):
            return self.kind.meets_threshold
        q = algebra.power(self.kind.x, self.power)
        r = linalg.rank(algebra.mult_map_matrix(q, self.source_degree), algebra.field)
        return r == self.kind.exact_rank == self.generic_rank

    def to_dict(self) -> dict:
        out = {
            "power": str(self.power),
            "source_degree": str(self.source_degree),
            "generic_rank": str(self.generic_rank),
            "max_possible": str(self.max_possible),
        }
        if isinstance(self.kind, Witness):
            out["kind"] = "witness"
            out["witness"] = self.kind.x.coordinate_strings()
            out["exact_rank"] = str(self.kind.exact_rank)
        else:
            k = self.kind
            out["kind"] = "probabilistic"
            out["samples"] = str(k.samples)
            out["field_size"] = str(k.field_size)
            out["minor_degree_bound"] = str(k.minor_degree_bound)
            out["error_bound"] = format_bound(k.error_bound)
            out["error_bound_exact"] = f"{k.error_bound.numerator}/{k.error_bound.denominator}"
            out["meets_threshold"] = "true" if k.meets_threshold else "false"
        return out

    @classmethod
    def from_dict(cls, data: dict, algebra: GradedAlgebra) -> "RankCertificate":
        if data["kind"] == "witness":
            x = algebra.element(1, [algebra.field(c) for c in data["witness"]])
            kind = Witness(x, int(data["exact_rank"]))
        else:
            kind = Probabilistic(int(data["samples"]), int(data["field_size"]),
                                 int(data["minor_degree_bound"]),
                                 Fraction(data["error_bound_exact"]))
        return cls(int(data["power"]), int(data["source_degree"]), int(data["generic_rank"]),
                   int(data["max_possible"]), kind)


@dataclass(frozen=True)
class LefschetzVerdict:
    name: str           # "WLP" or "SLP"
    degree: int
    power: int
    certificate: RankCertificate

    @property
    def holds(self) -> bool:
        return self.certificate.maximal

    @property
    def verdict(self) -> str:
        return "HOLDS" if self.holds else "FAILS"

    def to_dict(self) -> dict:
        return {"property": self.name, "degree": str(self.degree), "power": str(self.power),
                "verdict": self.verdict, "certificate": self.certificate.to_dict()}


def format_bound(bound: Fraction) -> str:
    """``"<2^-k"`` with the largest k such that bound < 2^-k."""
    if bound <= 0:
        return "0"
    if bound >= 1:
        return ">=1"
    k = math.floor(-math.log2(bound))
    while Fraction(1, 2**k) <= bound:
        k -= 1
    while Fraction(1, 2**(k + 1)) > bound:
        k += 1
    return f"<2^-{k}"


def required_samples(D: int, field_size: int, threshold: Fraction = DEFAULT_THRESHOLD) -> int | None:
    """Smallest t with (D/q)^t < threshold, or None when D >= q."""
    if D == 0:
        return 1
    if D >= field_size:
        return None
    t = 1
    ratio = Fraction(D, field_size)
    while ratio**t >= threshold:
        t += 1
    return t


def _rank_at(A: GradedAlgebra, x: AlgebraElement, s: int, a: int) -> int:
    q = A.power(x, s)
    return linalg.rank(A.mult_map_matrix(q, a), A.field)


def generic_rank(A: GradedAlgebra, s: int, a: int, budget: int | None = None,
                 rng: random.Random | None = None, seed: int | None = 0,
                 threshold: Fraction = DEFAULT_THRESHOLD) -> RankCertificate:
    """Generic rank of ``x^s * : R^a -> R^{a+s}`` over random linear ``x``."""
    if s < 0 or a < 0 or a + s > A.socle_degree:
        raise DegreeOutOfRange(f"need 0 <= a, s and a + s <= {A.socle_degree}")
    if rng is None:
        rng = random.Random(seed)
    max_possible = min(A.dims[a], A.dims[a + s])
    D = s * max_possible
    q = A.field.sample_size
    t = required_samples(D, q, threshold)
    if budget is not None:
        t = budget
    elif t is None:
        t = 64
    best = -1
    for _ in range(max(t, 1)):
        x = A.random_element(1, rng)
        r = _rank_at(A, x, s, a)
        if r == max_possible:
            return RankCertificate(s, a, r, max_possible, Witness(x, r))
        best = max(best, r)
    bound = Fraction(D, q) ** t if D < q else Fraction(1)
    return RankCertificate(s, a, best, max_possible,
                           Probabilistic(t, q, D, bound, threshold))


def check_slp(A: GradedAlgebra, k: int, s: int, **kw) -> LefschetzVerdict:
    """SLP_k(s): a general ``x`` makes ``x^s * : R^k -> R^{k+s}`` of maximal rank."""
    return LefschetzVerdict("SLP", k, s, generic_rank(A, s, k, **kw))


def check_wlp(A: GradedAlgebra, k: int, **kw) -> LefschetzVerdict:
    """WLP_k, i.e. SLP_k(1)."""
    if k + 1 > A.socle_degree:
        raise DegreeOutOfRange(f"WLP_{k} needs k + 1 <= {A.socle_degree}")
    return LefschetzVerdict("WLP", k, 1, generic_rank(A, 1, k, **kw))


def is_lefschetz_element(A: GradedAlgebra, x: AlgebraElement, a: int) -> bool:
    """Exact test that ``x * : R^a -> R^{a+1}`` has maximal rank."""
    if x.degree != 1:
        raise DegreeOutOfRange("a Lefschetz element has degree one")
    if a < 0 or a + 1 > A.socle_degree:
        raise DegreeOutOfRange(f"need 0 <= a and a + 1 <= {A.socle_degree}")
    r = linalg.rank(A.mult_map_matrix(x, a), A.field)
    return r == min(A.dims[a], A.dims[a + 1])


def _small_support_candidates(A: GradedAlgebra, rng: random.Random, count: int):
    nv = A.nvars
    for i in range(nv):
        for j in range(i + 1, nv):
            for c in (1, -1):
                v = [0] * nv
                v[i], v[j] = 1, c
                yield A.linear(v)
    for _ in range(count):
        v = [0] * nv
        for i in rng.sample(range(nv), rng.randint(1, min(3, nv))):
            v[i] = rng.randint(-3, 3) or 1
        yield A.linear(v)


def non_lefschetz_witness_search(A: GradedAlgebra, a: int, budget: int = 200,
                                 extra: Iterable[AlgebraElement] = (),
                                 rng: random.Random | None = None) -> AlgebraElement | None:
    """Look for a non-Lefschetz linear form; ``None`` proves nothing.

    Candidates are tried in order: coordinate forms, caller-supplied points
    (e.g. points of N_2), then small-support integer combinations.
    """
    rng = rng or random.Random(0)
    nv = A.nvars
    seen = 0

    def candidates():
        for i in range(nv):
            yield A.basis_element(1, i)
        yield from extra
        yield from _small_support_candidates(A, rng, budget)

    for x in candidates():
        if seen >= budget + nv:
            break
        seen += 1
        if x.is_zero():
            continue
        if not is_lefschetz_element(A, x, a):
            return x
    return None


@dataclass
class LefschetzReport:
    """Verdicts for a collection of (k, s) pairs on one algebra."""

    algebra_id: str
    verdicts: list[LefschetzVerdict] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {"algebra": self.algebra_id, "verdicts": [v.to_dict() for v in self.verdicts]}


def lefschetz_report(A: GradedAlgebra, pairs: Sequence[tuple[int, int]], algebra_id: str = "",
                     seed: int = 0) -> LefschetzReport:
    rng = random.Random(seed)
    report = LefschetzReport(algebra_id)
    for k, s in pairs:
        report.verdicts.append(check_slp(A, k, s, rng=rng) if s != 1 else check_wlp(A, k, rng=rng))
    return report

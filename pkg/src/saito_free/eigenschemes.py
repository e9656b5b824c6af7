"""Eigenschemes of partially symmetric tensors and multiple eigenschemes."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .groebner import HilbertData, Ideal, hilbert_data
from .polymatrix import PolyMatrix, maximal_minors, minors
from .polyring import GF, Field, ParseError, Poly, Ring, gradient, parse_poly
from .syzmod import minimalize, syzygy_generators


@dataclass(frozen=True)
class Tensor:
    """Rows (g_0, ..., g_n) of common degree d-1; ``symmetric_source`` is f
    when the rows are its gradient."""

    entries: tuple
    symmetric_source: Poly | None = None

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("empty tensor")
        ring = entries[0].ring
        if len(entries) != ring.nvars:
            raise ValueError(f"tensor needs {ring.nvars} entries, got {len(entries)}")
        degs = {g.degree() for g in entries if g}
        if len(degs) > 1 or any(g and not g.is_homogeneous() for g in entries):
            raise ValueError("tensor entries must be homogeneous of one degree")
        if self.symmetric_source is not None and tuple(gradient(self.symmetric_source)) != entries:
            raise ValueError("entries differ from the gradient of the symmetric source")

    @classmethod
    def gradient_of(cls, f: Poly) -> "Tensor":
        return cls(tuple(gradient(f)), f)

    @property
    def ring(self) -> Ring:
        return self.entries[0].ring

    @property
    def order(self) -> int:
        """d, where the entries have degree d - 1."""
        for g in self.entries:
            if g:
                return g.degree() + 1
        return 0

    def to_text(self) -> str:
        if self.symmetric_source is not None:
            return "grad:" + str(self.symmetric_source)
        return "(" + "; ".join(str(g) for g in self.entries) + ")"


def parse_tensor(text: str, ring) -> Tensor:
    """``(g0; g1; ...; gn)`` or ``grad:<poly>``."""
    text = text.strip()
    if text.startswith("grad:"):
        return Tensor.gradient_of(parse_poly(text[5:], ring))
    if not (text.startswith("(") and text.endswith(")")):
        raise ParseError("tensor must look like (g0; g1; ...; gn) or grad:<poly>", 0)
    parts = [p for p in text[1:-1].split(";")]
    polys = [parse_poly(p, ring) for p in parts]
    # keep one ring even when only some entries used aliases
    if any(p.ring.names != polys[0].ring.names for p in polys):
        polys = [p.to_ring(polys[0].ring.with_aliases()) for p in polys]
    return Tensor(tuple(polys))


def _matrix(tensors) -> PolyMatrix:
    ring = tensors[0].ring
    return PolyMatrix([ring.gens()] + [list(T.entries) for T in tensors], ring)


def eigenscheme_ideal(T: Tensor) -> Ideal:
    """2x2 minors of the coordinate row over the entries of T."""
    M = _matrix([T])
    return Ideal(minors(M, 2), T.ring)


def me_scheme_ideal(tensors: list[Tensor]) -> Ideal:
    """(r+1)x(r+1) minors of the coordinate row over r tensor rows."""
    r = len(tensors)
    if not tensors:
        raise ValueError("need at least one tensor")
    ring = tensors[0].ring
    if r > ring.n:
        raise ValueError(f"at most n={ring.n} tensors, got {r}")
    M = _matrix(tensors)
    gens = maximal_minors(M) if r == ring.n - 1 else minors(M, r + 1)
    return Ideal(gens, ring)


@dataclass
class SchemeReport:
    ideal: Ideal
    hilbert: HilbertData
    generator_count: int
    generator_degrees: list
    hilbert_burch: dict | None = None

    @property
    def dimension(self) -> int:
        return self.hilbert.dimension

    @property
    def degree(self) -> int:
        return self.hilbert.degree

    @property
    def empty(self) -> bool:
        return self.hilbert.empty

    @property
    def arithmetic_genus(self):
        return self.hilbert.arithmetic_genus

    def to_json(self) -> dict:
        h = self.hilbert
        return {
            "dimension": h.dimension,
            "degree": h.degree,
            "empty": h.empty,
            "codimension": h.codimension,
            "hilbert_polynomial": h.polynomial_text(),
            "arithmetic_genus": h.arithmetic_genus,
            "generator_count": self.generator_count,
            "generator_degrees": self.generator_degrees,
            "hilbert_burch": self.hilbert_burch,
        }


def scheme_report(I: Ideal, *, hilbert_burch: bool = True, deadline=None) -> SchemeReport:
    """Hilbert data of R/I; in codimension 2 also the Hilbert-Burch shape
    (generator_count - 1 minimal syzygies on the nonzero generators)."""
    data = hilbert_data(I, deadline=deadline)
    gens = [g for g in I.generators if g]
    report = SchemeReport(I, data, len(gens), sorted(g.degree() for g in gens))
    if hilbert_burch and not data.empty and data.codimension == 2 and gens:
        syz = minimalize(syzygy_generators(gens, deadline=deadline))
        degrees = syz.degrees
        report.hilbert_burch = {
            "syzygy_degrees": degrees,
            "verified": len(degrees) == len(gens) - 1,
        }
    return report


def expected_length(n: int, d: int) -> int:
    """Length of the eigenscheme of a generic tensor: sum_{j<=n} (d-1)^j."""
    if n < 1 or d < 2:
        raise ValueError("need n >= 1 and d >= 2")
    return sum((d - 1) ** j for j in range(n + 1))


def expected_me_degree(n: int, degrees) -> int:
    """Degree of the generic ME-scheme from its Hilbert-Burch resolution.

    Generators: n+1 minors of degree c = 1 + sum (d_j - 1).  Syzygies are the
    matrix rows: degrees a_0 = c + 1 and a_s = c + d_s - 1, so that
    degree = (sum a^2 - (n+1)c^2)/2.
    """
    degrees = list(degrees)
    if len(degrees) != n - 1:
        raise ValueError(f"need n-1={n - 1} degrees")
    if any(d < 2 for d in degrees):
        raise ValueError("each degree must be >= 2")
    c = 1 + sum(d - 1 for d in degrees)
    a = [c + 1] + [c + d - 1 for d in degrees]
    twice = sum(x * x for x in a) - (n + 1) * c * c
    return twice // 2


def point_membership(I: Ideal, point) -> bool:
    """True iff every generator of I vanishes at ``point``."""
    ring = I.ring
    pt = [ring.field(c) for c in point]
    if len(pt) != ring.nvars:
        raise ValueError(f"point needs {ring.nvars} coordinates")
    if not any(pt):
        raise ValueError("the zero vector is not a projective point")
    return all(not g.evaluate(pt) for g in I.generators)


def random_form(ring: Ring, degree: int, rng: random.Random) -> Poly:
    field_ = ring.field
    if field_.p is None:
        terms = {m: rng.randint(-9, 9) for m in ring.monomials(degree)}
    else:
        terms = {m: rng.randrange(field_.p) for m in ring.monomials(degree)}
    return Poly(ring, {m: field_(c) for m, c in terms.items() if c})


def random_tensor(ring: Ring, d: int, rng: random.Random) -> Tensor:
    """Tensor with independent uniform entries of degree d - 1."""
    return Tensor(tuple(random_form(ring, d - 1, rng) for _ in range(ring.nvars)))


@dataclass
class GenericSample:
    tensors: list
    report: SchemeReport
    attempts: int
    seed: int
    ok: bool = True
    notes: list = field(default_factory=list)


def generic_eigenscheme(n: int, d: int, seed: int, field_: Field | None = None,
                        attempts: int = 5) -> GenericSample:
    """Random eigenscheme; redrawn (up to ``attempts``) while not 0-dimensional."""
    ring = Ring(n, field_ or GF())
    rng = random.Random(seed)
    for attempt in range(1, attempts + 1):
        T = random_tensor(ring, d, rng)
        rep = scheme_report(eigenscheme_ideal(T), hilbert_burch=False)
        if rep.dimension == 0:
            return GenericSample([T], rep, attempt, seed)
    return GenericSample([T], rep, attempts, seed, ok=False, notes=["not zero-dimensional"])


def generic_me_scheme(n: int, degrees, seed: int, field_: Field | None = None,
                      attempts: int = 5, hilbert_burch: bool = True) -> GenericSample:
    """Random ME-scheme of n-1 tensors; redrawn while not of codimension 2."""
    ring = Ring(n, field_ or GF())
    rng = random.Random(seed)
    for attempt in range(1, attempts + 1):
        Ts = [random_tensor(ring, d, rng) for d in degrees]
        rep = scheme_report(me_scheme_ideal(Ts), hilbert_burch=hilbert_burch)
        if not rep.empty and rep.hilbert.codimension == 2:
            return GenericSample(Ts, rep, attempt, seed)
    return GenericSample(Ts, rep, attempts, seed, ok=False, notes=["not of codimension 2"])

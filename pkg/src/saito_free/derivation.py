"""Homogeneous derivations sum g_i d/dx_i acting on polynomials."""

from __future__ import annotations

from .polyring import ParseError, Poly, Ring, normalize_polys, parse_polys, partial_derivative, render_poly


class Derivation:
    """Derivation with coefficient polynomials (g_0, ..., g_n)."""

    __slots__ = ("coefficients", "ring")

    def __init__(self, coefficients, ring: Ring | None = None):
        coefficients = tuple(coefficients)
        if ring is None:
            if not coefficients:
                raise ValueError("empty derivation")
            ring = coefficients[0].ring
        if len(coefficients) != ring.nvars:
            raise ValueError(f"expected {ring.nvars} coefficients, got {len(coefficients)}")
        for g in coefficients:
            if g.ring != ring:
                raise ValueError("coefficients live in different rings")
        degs = {g.degree() for g in coefficients if g}
        if len(degs) > 1 or any(g and not g.is_homogeneous() for g in coefficients):
            raise ValueError("derivation coefficients must share one degree")
        self.coefficients = coefficients
        self.ring = ring

    @classmethod
    def euler(cls, ring: Ring) -> "Derivation":
        return cls(ring.gens(), ring)

    @classmethod
    def partial(cls, ring: Ring, i: int) -> "Derivation":
        return cls([ring.one() if k == i else ring.zero() for k in range(ring.nvars)], ring)

    @property
    def degree(self) -> int:
        """Common degree of the coefficients (-1 for the zero derivation)."""
        for g in self.coefficients:
            if g:
                return g.degree()
        return -1

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def __call__(self, f: Poly) -> Poly:
        return apply(self, f)

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation([a + b for a, b in zip(self.coefficients, other.coefficients)], self.ring)

    def __sub__(self, other: "Derivation") -> "Derivation":
        return Derivation([a - b for a, b in zip(self.coefficients, other.coefficients)], self.ring)

    def __mul__(self, c) -> "Derivation":
        return Derivation([g * c for g in self.coefficients], self.ring)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def normalized(self) -> "Derivation":
        """Scalar multiple with primitive integer coefficients (Q) or monic
        first nonzero coefficient (GF(p)); leading coefficient positive."""
        return Derivation(normalize_polys(list(self.coefficients)), self.ring)

    def is_proportional(self, other: "Derivation") -> bool:
        return self.normalized() == other.normalized()

    def to_text(self) -> str:
        return "(" + ", ".join(render_poly(g) for g in self.coefficients) + ")"

    def __repr__(self):
        return f"Derivation{self.to_text()}"


def apply(delta: Derivation, f: Poly) -> Poly:
    """sum_i g_i * df/dx_i."""
    if delta.ring != f.ring:
        raise ValueError(f"ring mismatch: {delta.ring} vs {f.ring}")
    out = f.ring.zero()
    for i, g in enumerate(delta.coefficients):
        if g:
            d = partial_derivative(f, i)
            if d:
                out = out + g * d
    return out


def parse_derivation(text: str, ring) -> Derivation:
    """Parse ``(p0, p1, ..., pn)``."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError("derivation must be a parenthesized, comma-separated list", 0)
    parts = _split_top(s[1:-1], ",")
    polys = parse_polys(parts, ring)
    return Derivation(polys, polys[0].ring)


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts

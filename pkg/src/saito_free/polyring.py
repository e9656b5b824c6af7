"""Exact multivariate polynomials over Q or a prime field.

Polynomials are immutable sparse dictionaries mapping exponent tuples to
coefficients.  Rational coefficients are ``gmpy2.mpq``; prime-field
coefficients are plain ``int`` residues in ``[0, p)``.
"""

from __future__ import annotations

import heapq
import math
import re
from functools import lru_cache
from itertools import combinations_with_replacement
from operator import add

from gmpy2 import mpq

MERSENNE31 = 2**31 - 1

ALIASES = {
    2: ("x", "y", "z"),
    3: ("x", "y", "z", "t"),
    4: ("x", "y", "z", "t", "w"),
}


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class NotDivisible(ArithmeticError):
    """Raised by :func:`exact_divide` when the divisor does not divide."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


class Field:
    """Coefficient field: the rationals (``p is None``) or GF(p)."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def name(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __call__(self, value):
        """Coerce an int, Fraction, mpq or residue into this field."""
        p = self.p
        if p is None:
            return mpq(value)
        if isinstance(value, int):
            return value % p
        q = mpq(value)
        num, den = int(q.numerator), int(q.denominator)
        if den % p == 0:
            raise ZeroDivisionError(f"denominator {den} vanishes in GF({p})")
        return num * pow(den, -1, p) % p

    def inv(self, c):
        if self.p is None:
            return 1 / c
        return pow(c, -1, self.p)

    def to_text(self, c) -> str:
        if self.p is None:
            q = mpq(c)
            if q.denominator == 1:
                return str(q.numerator)
            return f"{q.numerator}/{q.denominator}"
        c = int(c) % self.p
        return str(c - self.p if c > self.p // 2 else c)

    def to_json(self, c):
        """JSON-friendly scalar (int, or "a/b" string for non-integral rationals)."""
        if self.p is None and mpq(c).denominator != 1:
            return self.to_text(c)
        return int(self.to_text(c))

    def spec(self) -> str:
        return "qq" if self.p is None else f"fp:{self.p}"


QQ = Field()


def GF(p: int = MERSENNE31) -> Field:
    return Field(p)


def field_from_spec(text: str) -> Field:
    """Parse ``qq`` or ``fp:<p>``."""
    text = text.strip().lower()
    if text in ("qq", "q", "rationals"):
        return QQ
    if text.startswith("fp:"):
        return Field(int(text[3:]))
    if text == "fp":
        return GF()
    raise ValueError(f"unknown field {text!r} (use qq or fp:<p>)")


@lru_cache(maxsize=None)
def _monomials(nvars: int, degree: int) -> tuple:
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


def _grevlex_key(e):
    return (-sum(e),) + tuple(reversed(e[1:]))


def _lex_key(e):
    return tuple(-a for a in e)


ORDERS = {"grevlex": _grevlex_key, "lex": _lex_key}


@lru_cache(maxsize=None)
def _sorted_monomials(nvars: int, degree: int, order: str) -> tuple:
    return tuple(sorted(_monomials(nvars, degree), key=ORDERS[order]))


class Ring:
    """k[x_0..x_n] with a monomial order; ``key(e)`` sorts larger monomials first."""

    __slots__ = ("n", "nvars", "field", "order", "names", "key")

    def __init__(self, n: int, field: Field = QQ, order: str = "grevlex", names=None):
        if n < 0:
            raise ValueError("n must be non-negative")
        if order not in ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        self.n = n
        self.nvars = n + 1
        self.field = field
        self.order = order
        self.key = ORDERS[order]
        if names is None:
            names = tuple(f"x{i}" for i in range(n + 1))
        names = tuple(names)
        if len(names) != n + 1:
            raise ValueError("wrong number of variable names")
        self.names = names

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and other.nvars == self.nvars
            and other.field == self.field
            and other.order == self.order
        )

    def __hash__(self):
        return hash((self.nvars, self.field, self.order))

    def __repr__(self):
        return f"Ring({', '.join(self.names)}; {self.field.name}; {self.order})"

    def with_field(self, field: Field) -> "Ring":
        return Ring(self.n, field, self.order, self.names)

    def with_order(self, order: str) -> "Ring":
        return Ring(self.n, self.field, order, self.names)

    def with_aliases(self) -> "Ring":
        if self.n not in ALIASES:
            return self
        return Ring(self.n, self.field, self.order, ALIASES[self.n])

    @property
    def uses_aliases(self) -> bool:
        return self.names == ALIASES.get(self.n)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        return Poly(self, {(0,) * self.nvars: self.field(c)})

    def var(self, i: int) -> "Poly":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for n={self.n}")
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.field(1)}, check=False)

    def gens(self) -> list["Poly"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomials(self, degree: int) -> tuple:
        """All exponent tuples of the given degree, largest first."""
        if degree < 0:
            return ()
        return _sorted_monomials(self.nvars, degree, self.order)

    def monomial(self, e) -> "Poly":
        return Poly(self, {tuple(e): self.field(1)}, check=False)


class Poly:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_lead")

    def __init__(self, ring: Ring, terms: dict, check: bool = True):
        self.ring = ring
        if check:
            terms = {e: c for e, c in terms.items() if c}
        self.terms = terms
        self._lead = None

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self) -> list:
        """(exponent, coefficient) pairs in descending monomial order."""
        key = self.ring.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]))

    def lead(self):
        """Leading (exponent, coefficient) pair under the ring's order."""
        if self._lead is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading term")
            e = min(self.terms, key=self.ring.key)
            self._lead = (e, self.terms[e])
        return self._lead

    def lm(self):
        return self.lead()[0]

    def lc(self):
        return self.lead()[1]

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        """Coefficient of the constant monomial (0 if absent)."""
        return self.terms.get((0,) * self.ring.nvars, self.ring.field(0))

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ring.field.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if p is not None:
                v %= p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly(self.ring, out, check=False)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        if p is None:
            return Poly(self.ring, {e: -c for e, c in self.terms.items()}, check=False)
        return Poly(self.ring, {e: p - c for e, c in self.terms.items()}, check=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = self.ring.field(c) if not isinstance(c, Poly) else c
        if not c:
            return self.ring.zero()
        p = self.ring.field.p
        if p is None:
            return Poly(self.ring, {e: v * c for e, v in self.terms.items()}, check=False)
        return Poly(self.ring, {e: v * c % p for e, v in self.terms.items()}, check=False)

    def mul_term(self, mono, c) -> "Poly":
        """Multiply by the single term ``c * x^mono``."""
        if not c:
            return self.ring.zero()
        p = self.ring.field.p
        if p is None:
            terms = {tuple(map(add, e, mono)): v * c for e, v in self.terms.items()}
        else:
            terms = {tuple(map(add, e, mono)): v * c % p for e, v in self.terms.items()}
        return Poly(self.ring, terms, check=False)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        if len(self.terms) < len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        p = self.ring.field.p
        out: dict = {}
        get = out.get
        bl = list(b.items())
        for ea, ca in a.items():
            for eb, cb in bl:
                e = tuple(map(add, ea, eb))
                out[e] = get(e, 0) + ca * cb
        if p is None:
            out = {e: c for e, c in out.items() if c}
        else:
            out = {e: c % p for e, c in out.items() if c % p}
        return Poly(self.ring, out, check=False)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, mpq)) or hasattr(other, "denominator"):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- calculus and evaluation -----------------------------------------
    def diff(self, i: int) -> "Poly":
        return partial_derivative(self, i)

    def evaluate(self, point):
        field = self.ring.field
        pt = [field(v) for v in point]
        total = field(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v = v * x**k
            total = total + v
        if field.p is not None:
            total %= field.p
        return total

    def to_field(self, field: Field) -> "Poly":
        """Reduce/coerce coefficients into another field (e.g. Q -> GF(p))."""
        ring = self.ring.with_field(field)
        return Poly(ring, {e: field(c) for e, c in self.terms.items()})

    def to_ring(self, ring: Ring) -> "Poly":
        if ring.nvars != self.ring.nvars:
            raise ValueError("variable count mismatch")
        if ring.field != self.ring.field:
            return Poly(ring, {e: ring.field(c) for e, c in self.terms.items()})
        return Poly(ring, dict(self.terms), check=False)

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.lc()))

    def content_normalized(self) -> "Poly":
        """Primitive integer form with positive leading coefficient (Q),
        or the monic form (GF(p))."""
        return normalize_polys([self])[0]

    def __repr__(self):
        return f"Poly({render_poly(self)!r})"

    def __str__(self):
        return render_poly(self)


def normalize_polys(polys: list) -> list:
    """Divide a list of polynomials by one common scalar.

    Over Q the result has integer coefficients with gcd 1; in all fields the
    leading coefficient of the first nonzero polynomial becomes positive
    (over GF(p): equal to 1).
    """
    nz = [f for f in polys if f]
    if not nz:
        return list(polys)
    field = nz[0].ring.field
    if field.p is None:
        den = 1
        num = 0
        for f in nz:
            for c in f.terms.values():
                den = math.lcm(den, int(c.denominator))
        for f in nz:
            for c in f.terms.values():
                num = math.gcd(num, int(c.numerator * den // c.denominator))
        scale = mpq(den, num)
        if nz[0].lc() < 0:
            scale = -scale
        return [f.scale(scale) for f in polys]
    scale = field.inv(nz[0].lc())
    return [f.scale(scale) for f in polys]


# -- operations ---------------------------------------------------------------


def partial_derivative(f: Poly, i: int) -> Poly:
    """Formal partial derivative with respect to x_i."""
    ring = f.ring
    if not 0 <= i < ring.nvars:
        raise IndexError(f"variable index {i} out of range for n={ring.n}")
    p = ring.field.p
    out = {}
    for e, c in f.terms.items():
        k = e[i]
        if k:
            v = c * k
            if p is not None:
                v %= p
                if not v:
                    continue
            e2 = list(e)
            e2[i] = k - 1
            out[tuple(e2)] = v
    return Poly(ring, out, check=False)


def gradient(f: Poly) -> list[Poly]:
    return [partial_derivative(f, i) for i in range(f.ring.nvars)]


def euler_apply(f: Poly) -> Poly:
    """Apply the Euler derivation sum x_i d/dx_i; equals deg(f) * f."""
    if not f.is_homogeneous():
        raise ValueError("euler_apply requires a homogeneous polynomial")
    ring = f.ring
    result = ring.zero()
    for i in range(ring.nvars):
        result = result + ring.var(i) * partial_derivative(f, i)
    d = f.degree()
    assert result == f.scale(max(d, 0)) if f else not result, "Euler identity failed"
    return result


def divmod_poly(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Multivariate division of f by one polynomial g (quotient, remainder)."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    g = f._coerce(g)
    p = ring.field.p
    key = ring.key
    glm, glc = g.lead()
    ginv = ring.field.inv(glc)
    gtail = [(e, c) for e, c in g.terms.items() if e != glm]
    acc = dict(f.terms)
    quot: dict = {}
    rem: dict = {}
    heap = [(key(e), e) for e in acc]
    heapq.heapify(heap)
    while heap:
        _, m = heapq.heappop(heap)
        c = acc.pop(m, None)
        if c is None:
            continue
        if all(a >= b for a, b in zip(m, glm)):
            q = c * ginv
            if p is not None:
                q %= p
            shift = tuple(a - b for a, b in zip(m, glm))
            quot[shift] = q
            for e, cg in gtail:
                m2 = tuple(map(add, e, shift))
                v = acc.get(m2, 0) - q * cg
                if p is not None:
                    v %= p
                if v:
                    if m2 not in acc:
                        heapq.heappush(heap, (key(m2), m2))
                    acc[m2] = v
                else:
                    acc.pop(m2, None)
        else:
            rem[m] = c
    return Poly(ring, quot), Poly(ring, rem)


def exact_divide(f: Poly, g: Poly) -> Poly:
    """Return q with f = q*g; raise NotDivisible otherwise."""
    q, r = divmod_poly(f, g)
    if r:
        raise NotDivisible(f"{render_poly(g)} does not divide the dividend")
    return q


def _flint_ctx(ring: Ring):
    import flint

    names = tuple(f"v{i}" for i in range(ring.nvars))
    if ring.field.p is None:
        return flint.fmpq_mpoly_ctx.get(names, ordering="degrevlex")
    return flint.nmod_mpoly_ctx.get(names, modulus=ring.field.p, ordering="degrevlex")


def gcd_poly(f: Poly, g: Poly) -> Poly:
    """Greatest common divisor (normalized by ``content_normalized``), via FLINT."""
    ring = f.ring
    ctx = _flint_ctx(ring)
    if ring.field.p is None:
        conv = {e: (int(c.numerator), int(c.denominator)) for e, c in f.terms.items()}
        a = ctx.from_dict({e: _fmpq(*nd) for e, nd in conv.items()})
        b = ctx.from_dict({e: _fmpq(int(c.numerator), int(c.denominator)) for e, c in g.terms.items()})
    else:
        a = ctx.from_dict(dict(f.terms))
        b = ctx.from_dict(dict(g.terms))
    h = a.gcd(b)
    terms = {}
    for e, c in h.to_dict().items():
        if ring.field.p is None:
            terms[tuple(e)] = mpq(int(c.p), int(c.q))
        else:
            terms[tuple(e)] = int(c) % ring.field.p
    return Poly(ring, terms).content_normalized()


def _fmpq(num: int, den: int):
    import flint

    return flint.fmpq(num, den)


def looks_reduced(f: Poly) -> bool:
    """True iff gcd(f, df/dx_0, ..., df/dx_n) is constant (square-free f in
    characteristic zero; a heuristic over GF(p))."""
    g = f
    for i in range(f.ring.nvars):
        d = partial_derivative(f, i)
        if d:
            g = gcd_poly(g, d)
            if g.is_constant():
                return True
    return g.is_constant()


# -- text format --------------------------------------------------------------


def _render_monomial(e, names) -> str:
    parts = []
    for name, k in zip(names, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def render_poly(f: Poly) -> str:
    if not f.terms:
        return "0"
    field = f.ring.field
    out = []
    for e, c in f.sorted_terms():
        text = field.to_text(c)
        neg = text.startswith("-")
        if neg:
            text = text[1:]
        mono = _render_monomial(e, f.ring.names)
        if mono:
            body = mono if text == "1" else f"{text}*{mono}"
        else:
            body = text
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("var", m.group(2), start))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring
        self.used_alias = False
        canonical = {f"x{i}": i for i in range(ring.nvars)}
        alias = {name: i for i, name in enumerate(ALIASES.get(ring.n, ()))}
        self.canonical = canonical
        self.alias = alias

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise ParseError(f"expected {op!r}", tok[2])

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            raise ParseError("empty polynomial", 0)
        f = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return f

    def expr(self) -> Poly:
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        f = self.term()
        if sign < 0:
            f = -f
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                g = self.term()
                f = f + g if tok[1] == "+" else f - g
            else:
                return f

    def term(self) -> Poly:
        f = self.power()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                f = f * self.power()
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                t2 = self.peek()
                g = self.power()
                if not g.is_constant() or g.is_zero():
                    raise ParseError("division only by nonzero constants", t2[2])
                try:
                    f = f.scale(self.ring.field.inv(g.constant_value()))
                except ZeroDivisionError as exc:
                    raise ParseError(str(exc), t2[2]) from None
            else:
                return f

    def power(self) -> Poly:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            t2 = self.take()
            if t2[0] != "num":
                raise ParseError("exponent must be a non-negative integer", t2[2])
            return base ** t2[1]
        return base

    def atom(self) -> Poly:
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            t2 = self.peek()
            if t2[0] == "op" and t2[1] == "/" and self.tokens[self.i + 1][0] == "num":
                self.take()
                den = self.take()
                if den[1] == 0:
                    raise ParseError("zero denominator", den[2])
                try:
                    return self.ring.const(mpq(val, den[1]))
                except ZeroDivisionError as exc:
                    raise ParseError(str(exc), den[2]) from None
            return self.ring.const(val)
        if kind == "var":
            if val in self.canonical:
                return self.ring.var(self.canonical[val])
            if val in self.alias:
                self.used_alias = True
                return self.ring.var(self.alias[val])
            raise ParseError(f"unknown variable {val!r} for n={self.ring.n}", pos)
        if kind == "op" and val == "(":
            f = self.expr()
            self.expect_op(")")
            return f
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected token {val!r}", pos)


def parse_poly(text: str, ring) -> Poly:
    """Parse polynomial text into ``ring`` (a Ring or the integer n)."""
    if isinstance(ring, int):
        ring = Ring(ring)
    parser = _Parser(text, ring)
    f = parser.parse()
    if parser.used_alias and not ring.uses_aliases:
        f = Poly(ring.with_aliases(), f.terms, check=False)
    return f


def parse_polys(texts, ring) -> list[Poly]:
    """Parse several polynomials into one ring, aliasing consistently."""
    if isinstance(ring, int):
        ring = Ring(ring)
    polys = [parse_poly(t, ring) for t in texts]
    if any(f.ring.uses_aliases for f in polys) and ring.n in ALIASES:
        target = ring.with_aliases()
        polys = [Poly(target, f.terms, check=False) for f in polys]
    return polys

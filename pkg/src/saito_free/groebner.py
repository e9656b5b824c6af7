"""Buchberger engine: reduced Groebner bases, normal forms with cofactors,
membership, and Hilbert data of homogeneous ideals."""

from __future__ import annotations

import heapq
import time
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from operator import add, ge, sub

from .polyring import Poly, Ring, render_poly

DEFAULT_DEGREE_CAP = 40
_degree_cap: ContextVar[int] = ContextVar("degree_cap", default=DEFAULT_DEGREE_CAP)


def current_degree_cap() -> int:
    return _degree_cap.get()


@contextmanager
def degree_cap(cap: int):
    """Temporarily change the S-pair degree cap used when none is passed."""
    token = _degree_cap.set(cap)
    try:
        yield cap
    finally:
        _degree_cap.reset(token)


class ResourceLimit(RuntimeError):
    """Base class for engine resource errors."""


class DegreeCap(ResourceLimit):
    def __init__(self, degree: int, cap: int, state: str = ""):
        self.degree = degree
        self.cap = cap
        self.state = state
        super().__init__(f"degree {degree} exceeds the degree cap {cap}" + (f"; {state}" if state else ""))


class Timeout(ResourceLimit):
    pass


def check_deadline(deadline: float | None, what: str = "computation"):
    if deadline is not None and time.monotonic() > deadline:
        raise Timeout(f"{what} exceeded its time budget")


def _divides(a, b) -> bool:
    return all(map(ge, b, a))


def _lcm(a, b):
    return tuple(map(max, a, b))


def _disjoint(a, b) -> bool:
    return not any(x and y for x, y in zip(a, b))


class _Elem:
    __slots__ = ("lm", "deg", "terms", "tail", "sugar", "rep")

    def __init__(self, terms: dict, ring: Ring, sugar: int, rep=None):
        lm = min(terms, key=ring.key)
        self.lm = lm
        self.deg = sum(lm)
        self.terms = terms
        self.tail = [(e, c) for e, c in terms.items() if e != lm]
        self.sugar = sugar
        self.rep = rep


def _reduce(terms: dict, basis, ring: Ring, quotients: dict | None = None,
            full: bool = True, deadline: float | None = None) -> dict:
    """Reduce ``terms`` by monic ``basis`` elements; returns the remainder.

    When ``quotients`` is given, it receives {basis position: {mono: coeff}}.
    """
    p = ring.field.p
    key = ring.key
    acc = dict(terms)
    heap = [(key(e), e) for e in acc]
    heapq.heapify(heap)
    rem = {}
    steps = 0
    while heap:
        _, m = heapq.heappop(heap)
        c = acc.pop(m, None)
        if c is None:
            continue
        dm = sum(m)
        for pos, g in enumerate(basis):
            if g.deg <= dm and _divides(g.lm, m):
                break
        else:
            rem[m] = c
            if not full:
                rem.update(acc)
                return rem
            continue
        steps += 1
        if deadline is not None and steps % 512 == 0:
            check_deadline(deadline, "reduction")
        shift = tuple(map(sub, m, g.lm))
        if quotients is not None:
            qd = quotients.setdefault(pos, {})
            qd[shift] = c
        for e, cg in g.tail:
            m2 = tuple(map(add, e, shift))
            old = acc.get(m2)
            if old is None:
                v = -c * cg
                if p is not None:
                    v %= p
                if v:
                    acc[m2] = v
                    heapq.heappush(heap, (key(m2), m2))
            else:
                v = old - c * cg
                if p is not None:
                    v %= p
                if v:
                    acc[m2] = v
                else:
                    del acc[m2]
    return rem


def _monic_terms(terms: dict, ring: Ring):
    lm = min(terms, key=ring.key)
    lc = terms[lm]
    inv = ring.field.inv(lc)
    p = ring.field.p
    if p is None:
        return {e: c * inv for e, c in terms.items()}, inv
    return {e: c * inv % p for e, c in terms.items()}, inv


def _combine_reps(ring, base, quotients, elems, scale):
    """scale * (base - sum_k q_k * rep_k) for tracked representations."""
    out = list(base)
    for pos, qd in quotients.items():
        q = Poly(ring, qd, check=False)
        for i, r in enumerate(elems[pos].rep):
            if r:
                out[i] = out[i] - q * r
    return [r.scale(scale) for r in out]


@dataclass
class GBResult:
    basis: list            # list of Poly, reduced, sorted by leading monomial
    reps: list | None      # reps[k][i]: basis[k] = sum_i reps[k][i] * generators[i]
    truncated_at: int | None = None
    pairs_processed: int = 0


def buchberger(generators: list[Poly], ring: Ring, *, track: bool = False,
               degree_cap: int | None = None, max_degree: int | None = None,
               deadline: float | None = None) -> GBResult:
    """Reduced Groebner basis of the ideal generated by ``generators``.

    Normal selection strategy (smallest lcm degree, then sugar, then index),
    Gebauer-Moeller pair criteria.  ``max_degree`` truncates: only S-pairs and
    inputs of degree <= max_degree are processed, which for homogeneous input
    gives a basis correct through that degree.
    """
    if degree_cap is None:
        degree_cap = current_degree_cap()
    m = len(generators)
    zero = ring.zero()
    elems: list[_Elem] = []
    G: list[int] = []               # active indices into elems
    B: list[tuple] = []             # (deg, sugar, i, j, lcm)
    gens_queue = []
    for i, f in enumerate(generators):
        if f:
            gens_queue.append((f.degree(), i))
    gens_queue.sort()
    truncated = None
    processed = 0

    def unit(i):
        return [ring.one() if k == i else zero for k in range(m)]

    def update(h: int):
        nonlocal B, G
        eh = elems[h]
        C = [(g, _lcm(eh.lm, elems[g].lm)) for g in G]
        D = []
        while C:
            g1, l1 = C.pop(0)
            if _disjoint(eh.lm, elems[g1].lm) or (
                not any(_divides(l2, l1) for _, l2 in C)
                and not any(_divides(l2, l1) for _, l2 in D)
            ):
                D.append((g1, l1))
        E = [(g, l) for g, l in D if not _disjoint(eh.lm, elems[g].lm)]
        newB = []
        for pair in B:
            _, _, g1, g2, l12 = pair
            if (not _divides(eh.lm, l12)
                    or _lcm(elems[g1].lm, eh.lm) == l12
                    or _lcm(elems[g2].lm, eh.lm) == l12):
                newB.append(pair)
        for g, l in E:
            dl = sum(l)
            sugar = max(elems[g].sugar + dl - elems[g].deg, eh.sugar + dl - eh.deg)
            newB.append((dl, sugar, g, h, l))
        B = newB
        G = [g for g in G if not _divides(eh.lm, elems[g].lm)] + [h]

    def add_element(terms: dict, sugar: int, rep):
        monic, inv = _monic_terms(terms, ring)
        if rep is not None:
            rep = [r.scale(inv) for r in rep]
        elems.append(_Elem(monic, ring, sugar, rep))
        update(len(elems) - 1)

    while gens_queue or B:
        check_deadline(deadline, "Groebner basis")
        next_gen = gens_queue[0][0] if gens_queue else None
        next_pair = min(B, key=lambda b: (b[0], b[1], b[2], b[3])) if B else None
        if next_pair is not None and (next_gen is None or next_pair[0] < next_gen):
            deg = next_pair[0]
        else:
            deg = next_gen
        if max_degree is not None and deg > max_degree:
            truncated = max_degree
            break
        if deg > degree_cap:
            raise DegreeCap(deg, degree_cap, f"{len(G)} basis elements, {len(B)} pending pairs")
        active = [elems[g] for g in G]
        if next_gen is not None and next_gen == deg:
            _, i = gens_queue.pop(0)
            f = generators[i]
            quot = {} if track else None
            rem = _reduce(f.terms, active, ring, quot, deadline=deadline)
            if rem:
                rep = _combine_reps(ring, unit(i), quot, active, 1) if track else None
                add_element(rem, f.degree(), rep)
            continue
        B.remove(next_pair)
        _, sugar, i, j, l = next_pair
        processed += 1
        ei, ej = elems[i], elems[j]
        si = tuple(map(sub, l, ei.lm))
        sj = tuple(map(sub, l, ej.lm))
        spoly = Poly(ring, {tuple(map(add, e, si)): c for e, c in ei.terms.items()}, check=False) - \
            Poly(ring, {tuple(map(add, e, sj)): c for e, c in ej.terms.items()}, check=False)
        if not spoly:
            continue
        quot = {} if track else None
        rem = _reduce(spoly.terms, active, ring, quot, deadline=deadline)
        if rem:
            rep = None
            if track:
                base = [ei.rep[k].mul_term(si, 1) - ej.rep[k].mul_term(sj, 1) for k in range(m)]
                rep = _combine_reps(ring, base, quot, active, 1)
            add_element(rem, sugar, rep)

    # inter-reduce the minimal basis
    active = sorted((elems[g] for g in G), key=lambda e: ring.key(e.lm))
    final_terms = []
    final_reps = []
    for k, e in enumerate(active):
        others = active[:k] + active[k + 1:]
        quot = {} if track else None
        tail = _reduce(dict(e.tail), others, ring, quot, deadline=deadline)
        terms = dict(tail)
        terms[e.lm] = e.terms[e.lm]
        final_terms.append(terms)
        if track:
            base = list(e.rep)
            # tail reductions by `others` translate back through their positions
            remap = {}
            for pos, qd in quot.items():
                remap[pos if pos < k else pos + 1] = qd
            final_reps.append(_combine_reps(ring, base, remap, active, 1))
    basis = [Poly(ring, t, check=False) for t in final_terms]
    return GBResult(basis, final_reps if track else None, truncated, processed)


class Ideal:
    """Ideal given by generators, with a lazily computed reduced Groebner basis."""

    def __init__(self, generators, ring: Ring | None = None):
        generators = list(generators)
        if ring is None:
            if not generators:
                raise ValueError("ring required for an ideal without generators")
            ring = generators[0].ring
        for g in generators:
            if g.ring != ring:
                raise ValueError("generators live in different rings")
        self.ring = ring
        self.generators = generators
        self._result: GBResult | None = None
        self._tracked = False

    def __repr__(self):
        return f"Ideal({[render_poly(g) for g in self.generators]})"

    @property
    def order(self) -> str:
        return self.ring.order

    def compute(self, *, track: bool = False, degree_cap: int | None = None,
                deadline: float | None = None) -> "Ideal":
        if self._result is None or (track and not self._tracked):
            self._result = buchberger(self.generators, self.ring, track=track,
                                      degree_cap=degree_cap, deadline=deadline)
            self._tracked = track
        return self

    @property
    def gb(self) -> list[Poly]:
        self.compute()
        return self._result.basis

    @property
    def reps(self) -> list:
        self.compute(track=True)
        return self._result.reps

    def is_unit(self) -> bool:
        return any(g.is_constant() and g for g in self.gb)

    def leading_monomials(self) -> list:
        return [g.lm() for g in self.gb]

    def in_ring(self, ring: Ring) -> "Ideal":
        return Ideal([g.to_ring(ring) for g in self.generators], ring)


def groebner_basis(I: Ideal, **kwargs) -> Ideal:
    """Compute and cache the reduced Groebner basis of ``I``; returns ``I``."""
    return I.compute(**kwargs)


def _gb_elems(I: Ideal) -> list[_Elem]:
    ring = I.ring
    return [_Elem(g.terms, ring, g.degree()) for g in I.gb]


def normal_form(f: Poly, I: Ideal, deadline: float | None = None) -> tuple[Poly, list[Poly]]:
    """Remainder of f modulo the Groebner basis, with cofactors on ``I.gb``.

    The identity f = sum(cofactors[k] * gb[k]) + remainder is asserted.
    """
    ring = I.ring
    f = f.to_ring(ring) if f.ring != ring else f
    elems = _gb_elems(I)
    quot: dict = {}
    rem = Poly(ring, _reduce(f.terms, elems, ring, quot, deadline=deadline), check=False)
    cof = [Poly(ring, quot.get(k, {}), check=False) for k in range(len(elems))]
    total = rem
    for c, g in zip(cof, I.gb):
        if c:
            total = total + c * g
    assert total == f, "normal form identity violated"
    return rem, cof


def reduce_poly(f: Poly, I: Ideal) -> Poly:
    ring = I.ring
    return Poly(ring, _reduce(f.terms, _gb_elems(I), ring), check=False)


def lift(f: Poly, I: Ideal) -> list[Poly] | None:
    """Cofactors g_i with f = sum g_i * generators[i], or None if f not in I."""
    rem, cof = normal_form(f, I)
    if rem:
        return None
    reps = I.reps
    ring = I.ring
    out = [ring.zero() for _ in I.generators]
    for c, rep in zip(cof, reps):
        if not c:
            continue
        for i, r in enumerate(rep):
            if r:
                out[i] = out[i] + c * r
    total = ring.zero()
    for c, g in zip(out, I.generators):
        if c:
            total = total + c * g
    assert total == f, "lifted cofactors do not re-expand"
    return out


def ideal_membership(f: Poly, I: Ideal) -> bool:
    return not reduce_poly(f, I)


def s_polynomial(f: Poly, g: Poly) -> Poly:
    l = _lcm(f.lm(), g.lm())
    a = f.mul_term(tuple(map(sub, l, f.lm())), f.ring.field.inv(f.lc()))
    b = g.mul_term(tuple(map(sub, l, g.lm())), g.ring.field.inv(g.lc()))
    return a - b


def is_groebner(basis: list[Poly]) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    basis = [g for g in basis if g]
    if not basis:
        return True
    ring = basis[0].ring
    elems = []
    for g in basis:
        monic, _ = _monic_terms(g.terms, ring)
        elems.append(_Elem(monic, ring, g.degree()))
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            s = s_polynomial(basis[i], basis[j])
            if s and _reduce(s.terms, elems, ring):
                return False
    return True


# -- Hilbert series ------------------------------------------------------------


def _minimal_monomials(gens) -> list:
    gens = sorted(set(gens), key=sum)
    out = []
    for m in gens:
        if not any(_divides(g, m) for g in out):
            out.append(m)
    return out


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return out


def _poly_mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _trim(a: list) -> list:
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


def hilbert_numerator(monomials, nvars: int, _memo: dict | None = None) -> list[int]:
    """Numerator N(t) of the Hilbert series N(t)/(1-t)^nvars of k[x]/<monomials>.

    Pivot splitting: N(I) = N(I + <x^e>) + t^e N(I : x^e).
    """
    if _memo is None:
        _memo = {}
    gens = _minimal_monomials(monomials)
    key = frozenset(gens)
    if key in _memo:
        return _memo[key]
    if not gens:
        result = [1]
    elif any(sum(g) == 0 for g in gens):
        result = [0]
    else:
        support_count = [0] * nvars
        mixed = False
        for g in gens:
            for i, a in enumerate(g):
                if a:
                    support_count[i] += 1
                    if support_count[i] > 1:
                        mixed = True
        if not mixed:
            result = [1]
            for g in gens:
                d = sum(g)
                result = _poly_mul(result, [1] + [0] * (d - 1) + [-1])
        else:
            var = max(range(nvars), key=lambda i: (support_count[i], -i))
            exps = [g[var] for g in gens if g[var] and sum(g) != g[var]]
            if not exps:
                exps = [g[var] for g in gens if g[var]]
            e = min(exps)
            pivot = tuple(e if i == var else 0 for i in range(nvars))
            plus = hilbert_numerator(gens + [pivot], nvars, _memo)
            colon = [tuple(max(a - b, 0) for a, b in zip(g, pivot)) for g in gens]
            colon_num = hilbert_numerator(colon, nvars, _memo)
            shifted = [0] * e + colon_num
            result = _trim([x + y for x, y in zip(plus + [0] * (len(shifted) - len(plus)),
                                                  shifted + [0] * (len(plus) - len(shifted)))])
    _memo[key] = result
    return result


def _binomial_poly(shift: int, k: int) -> list[Fraction]:
    """Coefficients (in s, constant first) of C(s + shift, k)."""
    out = [Fraction(1)]
    for j in range(k):
        out = _poly_mul(out, [Fraction(shift - j), Fraction(1)])
    return [c / factorial(k) for c in out]


@dataclass
class HilbertData:
    """Hilbert data of R/I.  ``dimension`` is projective (-1 for the empty scheme)."""

    dimension: int
    degree: int
    hilbert_polynomial: list          # Fraction coefficients in s, constant first
    series_numerator: list            # integer coefficients of N(t), HS = N/(1-t)^(n+1)
    nvars: int
    empty: bool = False

    @property
    def codimension(self) -> int:
        return self.nvars - 1 - self.dimension

    @property
    def arithmetic_genus(self) -> int | None:
        if self.dimension != 1:
            return None
        return int(1 - self.hilbert_polynomial[0])

    def hilbert_function(self, s: int) -> int:
        """Dimension of (R/I)_s from the series."""
        total = 0
        for i, c in enumerate(self.series_numerator):
            if c and s - i >= 0:
                total += c * comb(s - i + self.nvars - 1, self.nvars - 1)
        return total

    def polynomial_at(self, s: int) -> Fraction:
        return sum(c * s**i for i, c in enumerate(self.hilbert_polynomial))

    def polynomial_text(self, var: str = "s") -> str:
        parts = []
        for i in reversed(range(len(self.hilbert_polynomial))):
            c = self.hilbert_polynomial[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            coef = str(c)
            if mono:
                coef = "" if c == 1 else ("-" if c == -1 else f"{coef}*")
            parts.append(f"{coef}{mono}")
        return " + ".join(parts).replace("+ -", "- ") or "0"


def hilbert_data_from_monomials(monomials, nvars: int) -> HilbertData:
    num = _trim(hilbert_numerator(list(monomials), nvars))
    if all(c == 0 for c in num):
        return HilbertData(-1, 0, [Fraction(0)], [0], nvars, empty=True)
    q = list(num)
    krull = nvars
    while krull > 0 and sum(q) == 0:
        # divide by (1 - t)
        out = []
        acc = 0
        for c in q[:-1]:
            acc += c
            out.append(acc)
        q = out or [0]
        krull -= 1
    degree = sum(q)
    if krull == 0:
        return HilbertData(-1, 0, [Fraction(0)], num, nvars, empty=True)
    hp = [Fraction(0)] * krull
    for i, c in enumerate(q):
        if c:
            b = _binomial_poly(krull - 1 - i, krull - 1)
            for k, v in enumerate(b):
                hp[k] += c * v
    hp = _trim(hp) if len(hp) > 1 else hp
    return HilbertData(krull - 1, degree, hp, num, nvars)


def hilbert_data(I: Ideal, deadline: float | None = None) -> HilbertData:
    """Dimension, degree and Hilbert polynomial of R/I via the initial ideal."""
    for g in I.generators:
        if g and not g.is_homogeneous():
            raise ValueError("hilbert_data requires a homogeneous ideal")
    I.compute(deadline=deadline)
    return hilbert_data_from_monomials(I.leading_monomials(), I.ring.nvars)

"""Syzygy modules, minimal graded generators, mdr and the freeness decision.

Two independent routes to syzygies live here:

* :func:`syzygy_generators` lifts S-pair reductions of a tracked Groebner
  basis (Schreyer's construction);
* :func:`syzygy_space` solves the linear system degree by degree.

:func:`decide_freeness` walks the degrees of Syz(J_f) with the linear route,
counts minimal generators exactly, and certifies freeness by Saito's
determinant.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from operator import sub

from . import linalg
from .derivation import Derivation, apply
from .groebner import (
    DegreeCap,
    Ideal,
    ResourceLimit,
    _Elem,
    _lcm,
    _reduce,
    buchberger,
    check_deadline,
    current_degree_cap,
    lift,
)
from .polymatrix import PolyMatrix, determinant, maximal_minors
from .polyring import Field, Poly, Ring, exact_divide, gradient, NotDivisible


@dataclass(frozen=True)
class ModuleVector:
    """Homogeneous element of a graded free module: component i has degree
    ``degree - shifts[i]``."""

    components: tuple
    degree: int

    def is_zero(self) -> bool:
        return not any(self.components)

    def combine(self, polys) -> Poly:
        """sum_i a_i * polys[i]."""
        total = None
        for a, p in zip(self.components, polys):
            if a and p:
                total = a * p if total is None else total + a * p
        return total if total is not None else polys[0].ring.zero()

    def as_derivation(self) -> Derivation:
        return Derivation(self.components)


@dataclass
class GradedGenerators:
    vectors: list
    shifts: tuple
    minimal: bool = False

    @property
    def degrees(self) -> list[int]:
        return sorted(v.degree for v in self.vectors)

    def __len__(self):
        return len(self.vectors)


def _vector(components, shifts) -> ModuleVector:
    degs = {a.degree() + s for a, s in zip(components, shifts) if a}
    if len(degs) != 1:
        raise AssertionError(f"inhomogeneous module vector (degrees {sorted(degs)})")
    return ModuleVector(tuple(components), degs.pop())


def _default_shifts(polys) -> tuple:
    degs = {f.degree() for f in polys if f}
    fallback = degs.pop() if len(degs) == 1 else 0
    return tuple(f.degree() if f else fallback for f in polys)


def syzygy_generators(polys: list[Poly], shifts=None, *, max_degree: int | None = None,
                      degree_cap: int | None = None,
                      deadline: float | None = None) -> GradedGenerators:
    """Generating set of Syz(polys) from a tracked Groebner basis.

    Every emitted vector is checked to satisfy sum a_i * polys_i = 0.
    ``shifts`` fixes the grading (default: the degrees of the inputs).  With
    ``max_degree`` only generators of degree <= max_degree are produced, and
    they generate the syzygy module through that degree.
    """
    polys = list(polys)
    if not polys:
        raise ValueError("no polynomials given")
    ring = polys[0].ring
    for f in polys:
        if f and not f.is_homogeneous():
            raise ValueError("syzygy_generators expects homogeneous input")
    shifts = tuple(shifts) if shifts is not None else _default_shifts(polys)
    m = len(polys)
    zero = ring.zero()
    out: list[ModuleVector] = []

    for i, f in enumerate(polys):
        if not f:
            comps = [ring.one() if k == i else zero for k in range(m)]
            out.append(ModuleVector(tuple(comps), shifts[i]))

    nz = [i for i, f in enumerate(polys) if f]
    if nz:
        offset = {polys[i].degree() - shifts[i] for i in nz}
        if len(offset) != 1:
            raise ValueError("shifts are inconsistent with the input degrees")
        offset = offset.pop()
        gb_max = None if max_degree is None else max_degree + offset
        F = [polys[i] for i in nz]
        res = buchberger(F, ring, track=True, degree_cap=degree_cap,
                         max_degree=gb_max, deadline=deadline)
        G = res.basis
        A = res.reps
        elems = [_Elem(g.terms, ring, g.degree()) for g in G]
        k_count = len(G)

        def to_F(svec: dict) -> list[Poly]:
            comps = [zero] * len(F)
            for k, s in svec.items():
                for i, r in enumerate(A[k]):
                    if r:
                        comps[i] = comps[i] + s * r
            return comps

        candidates: list[list[Poly]] = []
        # Schreyer syzygies over the minimal set of leading-term pairs
        for k in range(k_count):
            lk = G[k].lm()
            quotients = []
            for l in range(k + 1, k_count):
                mkl = tuple(map(sub, _lcm(lk, G[l].lm()), lk))
                quotients.append((l, mkl))
            kept = []
            for l, mkl in quotients:
                dominated = False
                for l2, m2 in quotients:
                    if l2 == l:
                        continue
                    if all(a <= b for a, b in zip(m2, mkl)) and (m2 != mkl or l2 < l):
                        dominated = True
                        break
                if not dominated:
                    kept.append((l, mkl))
            for l, mkl in kept:
                check_deadline(deadline, "syzygy lifting")
                ll = G[l].lm()
                lcm = _lcm(lk, ll)
                if gb_max is not None and sum(lcm) > gb_max:
                    continue
                if all(not (a and b) for a, b in zip(lk, ll)):
                    svec = {k: G[l], l: -G[k]}
                else:
                    mlk = tuple(map(sub, lcm, ll))
                    s = G[k].mul_term(mkl, 1) - G[l].mul_term(mlk, 1)
                    quot: dict = {}
                    rem = _reduce(s.terms, elems, ring, quot, deadline=deadline)
                    if rem:
                        raise AssertionError("S-polynomial of a Groebner basis did not reduce to 0")
                    svec = {k: ring.monomial(mkl), l: -ring.monomial(mlk)}
                    for pos, qd in quot.items():
                        svec[pos] = svec.get(pos, zero) - Poly(ring, qd, check=False)
                candidates.append(to_F(svec))
        # e_i - sum_k B_ik A_k: re-expressing each input through the basis
        for idx, f in enumerate(F):
            quot = {}
            rem = _reduce(f.terms, elems, ring, quot, deadline=deadline)
            if rem:
                if res.truncated_at is not None:
                    continue
                raise AssertionError("input not reduced to zero by its own Groebner basis")
            svec = {pos: Poly(ring, qd, check=False) for pos, qd in quot.items()}
            comps = to_F(svec)
            comps = [-c for c in comps]
            comps[idx] = comps[idx] + ring.one()
            candidates.append(comps)

        seen = set()
        for comps in candidates:
            if not any(comps):
                continue
            full = [zero] * m
            for i, c in zip(nz, comps):
                full[i] = c
            vec = _vector(full, shifts)
            if max_degree is not None and vec.degree > max_degree:
                continue
            if vec.combine(polys):
                raise AssertionError("computed vector is not a syzygy")
            key = tuple(frozenset(c.terms.items()) for c in full)
            if key in seen:
                continue
            seen.add(key)
            out.append(vec)
    out.sort(key=lambda v: v.degree)
    return GradedGenerators(out, shifts, minimal=False)


# -- graded coordinates -------------------------------------------------------


class _GradedSpace:
    """Coordinates on the degree-D part of a graded free module."""

    def __init__(self, ring: Ring, shifts, degree: int):
        self.ring = ring
        self.shifts = tuple(shifts)
        self.degree = degree
        self.index = {}
        self.basis = []
        for i, s in enumerate(self.shifts):
            for mono in ring.monomials(degree - s):
                self.index[(i, mono)] = len(self.basis)
                self.basis.append((i, mono))
        self.dim = len(self.basis)

    def coords(self, components) -> dict:
        out = {}
        for i, a in enumerate(components):
            for e, c in a.terms.items():
                out[self.index[(i, e)]] = c
        return out

    def vector(self, coeffs) -> list[Poly]:
        terms = [dict() for _ in self.shifts]
        for k, c in enumerate(coeffs):
            if c:
                i, mono = self.basis[k]
                terms[i][mono] = c
        return [Poly(self.ring, t, check=False) for t in terms]


def _shift_components(components, var: int):
    out = []
    for a in components:
        if a:
            out.append(Poly(a.ring, {e[:var] + (e[var] + 1,) + e[var + 1:]: c
                                     for e, c in a.terms.items()}, check=False))
        else:
            out.append(a)
    return out


def syzygy_space(polys: list[Poly], degree: int, shifts=None) -> list[ModuleVector]:
    """Basis of the degree-``degree`` part of Syz(polys) by linear algebra.

    Unknowns are the coefficients of each a_i in its graded piece; the map is
    (a_i) -> sum a_i * polys_i.
    """
    polys = list(polys)
    ring = polys[0].ring
    shifts = tuple(shifts) if shifts is not None else _default_shifts(polys)
    space = _GradedSpace(ring, shifts, degree)
    columns = []
    target: dict = {}
    for i, mono in space.basis:
        f = polys[i]
        col = {}
        for e, c in f.terms.items():
            key = tuple(a + b for a, b in zip(e, mono))
            row = target.get(key)
            if row is None:
                row = target[key] = len(target)
            col[row] = c
        columns.append(col)
    kernel = linalg.kernel(columns, len(target), ring.field)
    return [ModuleVector(tuple(space.vector(v)), degree) for v in kernel]


def submodule_dimension(gens: GradedGenerators, degree: int) -> int:
    """dim_k of the degree-``degree`` part of the submodule spanned by ``gens``."""
    if not gens.vectors:
        return 0
    ring = gens.vectors[0].components[0].ring
    space = _GradedSpace(ring, gens.shifts, degree)
    rows = []
    for v in gens.vectors:
        k = degree - v.degree
        if k < 0:
            continue
        for mono in ring.monomials(k):
            rows.append(space.coords([a.mul_term(mono, 1) if a else a for a in v.components]))
    return linalg.rank(rows, space.dim, ring.field)


def _new_generators(ring: Ring, shifts, degree: int, previous: list, candidates: list):
    """Split ``candidates`` (component lists of degree ``degree``) into those
    outside R_1 * span(previous); returns (indices of new ones, basis of the
    degree part spanned)."""
    space = _GradedSpace(ring, shifts, degree)
    rows = []
    comps_list = []
    for comps in previous:
        for var in range(ring.nvars):
            shifted = _shift_components(comps, var)
            rows.append(space.coords(shifted))
            comps_list.append(shifted)
    base = len(rows)
    for comps in candidates:
        rows.append(space.coords(comps))
        comps_list.append(list(comps))
    piv = linalg.pivot_indices(rows, space.dim, ring.field)
    new = [p - base for p in piv if p >= base]
    spanned = [comps_list[p] for p in piv]
    return new, spanned


def minimalize(gens: GradedGenerators) -> GradedGenerators:
    """Minimal generating subset, chosen greedily in ascending degree.

    Membership is decided degree by degree with exact linear algebra on the
    graded pieces of the submodule generated so far.
    """
    if not gens.vectors:
        return GradedGenerators([], gens.shifts, minimal=True)
    ring = gens.vectors[0].components[0].ring
    vectors = sorted(gens.vectors, key=lambda v: v.degree)
    lo, hi = vectors[0].degree, vectors[-1].degree
    kept = []
    spanned: list = []
    pos = 0
    for D in range(lo, hi + 1):
        cands = []
        while pos < len(vectors) and vectors[pos].degree == D:
            if not vectors[pos].is_zero():
                cands.append(vectors[pos])
            pos += 1
        if not cands and not spanned:
            continue
        new, spanned = _new_generators(ring, gens.shifts, D, spanned, [c.components for c in cands])
        kept.extend(cands[i] for i in new)
    return GradedGenerators(kept, gens.shifts, minimal=True)


def jacobian_syzygies(f: Poly, **kwargs) -> GradedGenerators:
    """Generators of Syz(J_f) graded by derivation degree."""
    grads = gradient(f)
    return syzygy_generators(grads, (0,) * len(grads), **kwargs)


def mdr(f: Poly, **kwargs) -> int:
    """Minimal degree of a Jacobian relation of f."""
    if not f or f.is_constant():
        raise ValueError("mdr needs a non-constant polynomial")
    if not f.is_homogeneous():
        raise ValueError("mdr needs a homogeneous polynomial")
    d = f.degree()
    # the Koszul relations of two partials have degree d - 1
    gens = jacobian_syzygies(f, max_degree=d - 1, **kwargs)
    if not gens.vectors:
        raise AssertionError("no Jacobian relation found up to degree d-1")
    return min(gens.degrees)


# -- freeness ---------------------------------------------------------------------

FREE = "free"
NOT_FREE = "not_free"
INCONCLUSIVE = "inconclusive"


@dataclass
class FreenessReport:
    verdict: str
    field: Field
    degree: int
    exponents: tuple | None = None
    saito_constant: object = None
    generator_degrees: list = field(default_factory=list)
    certificate: list = field(default_factory=list)
    witness: str | None = None
    reason: str | None = None
    searched_through: int = -1
    method: str | None = None
    minimal_degrees: list | None = None

    @property
    def is_free(self) -> bool:
        return self.verdict == FREE


def saito_matrix(derivations: list[Derivation]) -> PolyMatrix:
    ring = derivations[0].ring
    return PolyMatrix([ring.gens()] + [list(d.coefficients) for d in derivations], ring)


def saito_determinant_constant(f: Poly, derivations: list[Derivation]):
    """(determinant, c) where det = c*f with c a nonzero constant, else c is None."""
    det = determinant(saito_matrix(derivations))
    if not det:
        return det, None
    try:
        q = exact_divide(det, f)
    except NotDivisible:
        return det, None
    if not q.is_constant() or not q:
        return det, None
    return det, q.constant_value()


def _to_der0(f: Poly, delta: Derivation) -> Derivation | None:
    """Shift a logarithmic derivation into Der_0(f) by subtracting a multiple
    of the Euler derivation; None if delta is not logarithmic."""
    ring = f.ring
    value = apply(delta, f)
    if not value:
        return delta
    try:
        q = exact_divide(value, f)
    except NotDivisible:
        return None
    d = f.degree()
    coeff = q.scale(ring.field.inv(ring.field(d)))
    euler = Derivation.euler(ring)
    out = Derivation([a - coeff * x for a, x in zip(delta.coefficients, euler.coefficients)], ring)
    if apply(out, f):
        raise AssertionError("Euler correction failed")
    return out


def _complete_by_containment(f: Poly, gens: list[Derivation], deadline) -> Derivation | None:
    """Last Saito row from f = sum h_i g_i, h_i the signed maximal minors of
    the coordinate row over ``gens``."""
    ring = f.ring
    n = ring.n
    M = PolyMatrix([ring.gens()] + [list(d.coefficients) for d in gens], ring)
    h = maximal_minors(M)
    if not any(h):
        return None
    deg_h = max(x.degree() for x in h if x)
    if deg_h > f.degree():
        return None
    I = Ideal(h, ring)
    I.compute(track=True, deadline=deadline)
    cof = lift(f, I)
    if cof is None:
        return None
    sign = -1 if n % 2 else 1
    row = [c if sign > 0 else -c for c in cof]
    try:
        delta = Derivation(row, ring)
    except ValueError:
        return None
    return _to_der0(f, delta)


def decide_freeness(f: Poly, *, deadline: float | None = None, timeout: float | None = None,
                    use_containment: bool = True, full_degrees: bool = True) -> FreenessReport:
    """Decide whether V(f) is free, with exponents and a Saito certificate.

    Minimal generators of Syz(J_f) are counted degree by degree (exact
    graded Betti numbers).  Stops with

    * Free once n derivations give det(coordinates; derivations) = c*f;
    * NotFree once more than n minimal generators appear, or the degrees found
      force the exponent sum past d - 1, or n generators give a zero / wrong
      determinant.

    With n-1 generators in hand, the remaining one is sought through the
    determinant containment f in <signed minors> before continuing the scan.
    For NotFree verdicts ``full_degrees`` also records all minimal generator
    degrees from the module engine (skipped if it runs out of budget).
    """
    report = _scan(f, deadline, timeout, use_containment)
    if report.verdict == NOT_FREE and full_degrees:
        try:
            gens = minimalize(jacobian_syzygies(f, deadline=deadline))
            report.minimal_degrees = gens.degrees
        except ResourceLimit:
            pass
    elif report.verdict == FREE:
        report.minimal_degrees = list(report.exponents)
    return report


def _scan(f: Poly, deadline, timeout, use_containment) -> FreenessReport:
    if timeout is not None:
        deadline = time.monotonic() + timeout
    ring = f.ring
    if not f or f.is_constant() or not f.is_homogeneous():
        raise ValueError("decide_freeness needs a homogeneous polynomial of degree >= 1")
    n = ring.n
    d = f.degree()
    grads = gradient(f)
    shifts = (0,) * ring.nvars
    report = FreenessReport(INCONCLUSIVE, ring.field, d)
    found: list[tuple[int, list]] = []      # (degree, components)
    previous: list = []
    attempted_completion = False

    def gens_derivations():
        return [Derivation(c, ring) for _, c in found]

    cap = current_degree_cap()
    try:
        for r in range(0, d):
            check_deadline(deadline, "freeness scan")
            if r + d - 1 > cap:
                raise DegreeCap(r + d - 1, cap, f"minimal generators so far: {report.generator_degrees}")
            syz = syzygy_space(grads, r, shifts)
            cands = [list(v.components) for v in syz]
            new, _ = _new_generators(ring, shifts, r, previous, cands)
            previous = cands
            for i in new:
                found.append((r, cands[i]))
            report.generator_degrees = [deg for deg, _ in found]
            report.searched_through = r
            count = len(found)
            total = sum(deg for deg, _ in found)
            if count > n:
                report.verdict = NOT_FREE
                report.witness = (f"{count} > n={n} minimal generators of Der_0(f) "
                                  f"in degrees <= {r}: {report.generator_degrees}")
                return report
            if count == n:
                derivs = gens_derivations()
                det, c = saito_determinant_constant(f, derivs)
                if c is not None:
                    return _free(report, derivs, c, "saito-determinant")
                report.verdict = NOT_FREE
                if total != d - 1:
                    report.witness = (f"n={n} minimal generators with degree sum {total} != d-1={d - 1}")
                else:
                    report.witness = "Saito determinant of the n minimal generators vanishes" if not det \
                        else "Saito determinant of the n minimal generators is not a constant multiple of f"
                return report
            if total + (n - count) * (r + 1) > d - 1:
                report.verdict = NOT_FREE
                report.witness = (f"minimal generators through degree {r} have degrees {report.generator_degrees}; "
                                  f"the remaining {n - count} would push the exponent sum past d-1={d - 1}")
                return report
            if use_containment and count == n - 1 and count > 0 and not attempted_completion:
                attempted_completion = True
                derivs = gens_derivations()
                try:
                    last = _complete_by_containment(f, derivs, deadline)
                except ResourceLimit:
                    last = None
                if last is not None and not last.is_zero():
                    derivs = derivs + [last]
                    det, c = saito_determinant_constant(f, derivs)
                    if c is not None:
                        report.generator_degrees = sorted(report.generator_degrees + [last.degree])
                        return _free(report, derivs, c, "minor-containment")
    except ResourceLimit as exc:
        report.verdict = INCONCLUSIVE
        report.reason = str(exc)
        return report
    report.reason = "scan ended without a verdict"
    return report


def _free(report: FreenessReport, derivs: list[Derivation], c, method: str) -> FreenessReport:
    report.verdict = FREE
    report.certificate = derivs
    report.saito_constant = c
    report.exponents = tuple(sorted(dl.degree for dl in derivs))
    report.method = method
    if sum(report.exponents) != report.degree - 1:
        raise AssertionError("exponents of a free divisor must sum to d-1")
    return report

"""Logarithmic derivations: membership in Der(f), Saito's determinant test,
and the minor-containment certificate for free hypersurfaces."""

from __future__ import annotations

from dataclasses import dataclass, field

from .derivation import Derivation, apply
from .groebner import Ideal, hilbert_data, lift
from .polymatrix import PolyMatrix, determinant, maximal_minors
from .polyring import NotDivisible, Poly, exact_divide

__all__ = [
    "apply", "InDer0", "InDerOnly", "NotInDer", "in_der", "NotInDerError",
    "Confirmed", "Failed", "saito_test", "ContainmentCertificate",
    "HypothesisError", "contains_me_scheme", "as_rows",
]


@dataclass(frozen=True)
class InDer0:
    kind = "in_der0"


@dataclass(frozen=True)
class InDerOnly:
    quotient: Poly
    kind = "in_der_only"


@dataclass(frozen=True)
class NotInDer:
    remainder: Poly
    kind = "not_in_der"


def in_der(delta: Derivation, f: Poly):
    """Classify delta against Der_0(f) ⊂ Der(f)."""
    if not f:
        raise ValueError("in_der needs a nonzero polynomial")
    value = apply(delta, f)
    if not value:
        return InDer0()
    try:
        return InDerOnly(exact_divide(value, f))
    except NotDivisible:
        return NotInDer(value)


class NotInDerError(ValueError):
    def __init__(self, index: int, value: Poly):
        self.index = index
        self.value = value
        super().__init__(f"derivation {index} is not logarithmic: delta(f) = {value} is not a multiple of f")


@dataclass(frozen=True)
class Confirmed:
    constant: object
    determinant: Poly


@dataclass(frozen=True)
class Failed:
    determinant: Poly


def saito_test(f: Poly, derivations: list[Derivation]):
    """Confirmed(c) iff det(coordinates; derivations) = c*f with c != 0."""
    ring = f.ring
    if len(derivations) != ring.n:
        raise ValueError(f"Saito's criterion needs n={ring.n} derivations, got {len(derivations)}")
    for i, delta in enumerate(derivations):
        verdict = in_der(delta, f)
        if isinstance(verdict, NotInDer):
            raise NotInDerError(i, verdict.remainder)
    M = PolyMatrix([ring.gens()] + [list(dl.coefficients) for dl in derivations], ring)
    det = determinant(M)
    if not det:
        return Failed(det)
    try:
        q = exact_divide(det, f)
    except NotDivisible:
        return Failed(det)
    if q.is_constant():
        return Confirmed(q.constant_value(), det)
    return Failed(det)


class HypothesisError(ValueError):
    """A hypothesis of the containment criterion fails."""


@dataclass
class ContainmentCertificate:
    contained: bool
    minors: list
    cofactors: list | None = None
    codimension: int | None = None
    hypothesis_checked: bool = True
    notes: list = field(default_factory=list)

    def expand(self) -> Poly:
        """sum h_i g_i, recomputed from the stored data."""
        if self.cofactors is None:
            raise ValueError("no cofactors: not contained")
        total = self.minors[0].ring.zero()
        for h, g in zip(self.minors, self.cofactors):
            total = total + h * g
        return total


def as_rows(tensors) -> list[list[Poly]]:
    """Entry rows from Tensor, Derivation or plain sequences."""
    rows = []
    for T in tensors:
        if hasattr(T, "entries"):
            rows.append(list(T.entries))
        elif hasattr(T, "coefficients"):
            rows.append(list(T.coefficients))
        else:
            rows.append(list(T))
    return rows


def contains_me_scheme(f: Poly, tensors, *, unchecked: bool = False, deadline=None) -> ContainmentCertificate:
    """Decide f ∈ <h_0, ..., h_n>, the signed maximal minors of the matrix
    with the coordinate row over the n-1 tensor rows.

    The degree hypothesis deg f >= sum d_i - 1 (entries of degree d_i - 1) is
    always enforced; the codimension-2 hypothesis on the minors is checked
    unless ``unchecked``.
    """
    ring = f.ring
    rows = as_rows(tensors)
    if len(rows) != ring.n - 1:
        raise ValueError(f"need n-1={ring.n - 1} tensors, got {len(rows)}")
    degs = []
    for row in rows:
        nz = [g.degree() for g in row if g]
        if not nz:
            raise ValueError("zero tensor")
        degs.append(nz[0] + 1)
    bound = sum(degs) - 1
    if f.degree() < bound:
        raise HypothesisError(f"degree hypothesis violated: deg f = {f.degree()} < {bound}")
    h = maximal_minors(PolyMatrix([ring.gens()] + rows, ring))
    cert = ContainmentCertificate(False, h, hypothesis_checked=not unchecked)
    if not any(h):
        raise HypothesisError("all maximal minors vanish")
    I = Ideal(h, ring)
    I.compute(track=True, deadline=deadline)
    if unchecked:
        cert.notes.append("hypothesis unverified")
    else:
        data = hilbert_data(I, deadline=deadline)
        cert.codimension = data.codimension
        if data.codimension != 2:
            raise HypothesisError(f"minor ideal has codimension {data.codimension}, not 2")
    cof = lift(f, I)
    if cof is None:
        return cert
    cert.contained = True
    cert.cofactors = cof
    if cert.expand() != f:
        raise AssertionError("containment certificate does not re-expand to f")
    return cert

"""Pencil families of free hypersurfaces and the named presets.

The coordinate hypertetrahedron, the pencil generated by two sums of its
Jacobian generators h_i, explicit degree-2 tensors killing both members of
the pencil, and products f1*f2*prod(a_j f1 + b_j f2) with their freeness
reports.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linalg
from .derivation import Derivation, apply
from .eigenschemes import Tensor
from .groebner import ResourceLimit
from .polyring import GF, QQ, Field, Poly, Ring, gradient, parse_poly
from .saito import ContainmentCertificate, HypothesisError, contains_me_scheme
from .syzmod import FREE, FreenessReport, decide_freeness


def hypertetrahedron(n: int, field_: Field = QQ) -> tuple[Poly, list[Poly]]:
    """x_0...x_n and its Jacobian generators h_i = prod_{j != i} x_j."""
    if n < 2:
        raise ValueError("n must be at least 2")
    ring = Ring(n, field_)
    xs = ring.gens()
    arrangement = ring.one()
    for x in xs:
        arrangement = arrangement * x
    faces = []
    for i in range(n + 1):
        h = ring.one()
        for j, x in enumerate(xs):
            if j != i:
                h = h * x
        faces.append(h)
    return arrangement, faces


@dataclass
class PencilSpec:
    f1: Poly
    f2: Poly
    members: list = field(default_factory=list)     # (a, b) pairs: a*f1 + b*f2

    @property
    def k(self) -> int:
        return len(self.members)

    def member(self, i: int) -> Poly:
        a, b = self.members[i]
        F = self.f1.ring.field
        return self.f1.scale(F(a)) + self.f2.scale(F(b))


def section4_pencil(n: int, field_: Field = QQ) -> PencilSpec:
    """f1 = h_{m+1} + ... + h_n, f2 = h_0 + ... + h_m with m = n // 2."""
    if n < 3:
        raise ValueError("the pencil needs n >= 3")
    m = n // 2
    _, h = hypertetrahedron(n, field_)
    f1 = h[m + 1]
    for g in h[m + 2:]:
        f1 = f1 + g
    f2 = h[0]
    for g in h[1:m + 1]:
        f2 = f2 + g
    return PencilSpec(f1, f2)


def cubics_pencil(field_: Field = QQ) -> PencilSpec:
    ring = Ring(3, field_)
    return PencilSpec(parse_poly("x*y*z+x*z*t", ring), parse_poly("x*y*t+y*z*t", ring))


def cubics_pencil_tensors(field_: Field = QQ) -> list[Tensor]:
    ring = Ring(3, field_)
    rows = [
        ["2*x^2+x*z", "-x*y+y*z", "-2*z^2-x*z", "-x*t+z*t"],
        ["x*y-x*t", "-2*y^2-y*t", "y*z-z*t", "y*t+2*t^2"],
    ]
    return [Tensor(tuple(parse_poly(s, ring) for s in row)) for row in rows]


def _structured_tensor(ring: Ring, a: int, b: int) -> Tensor:
    """Entries x_s(x_a - x_b), except x_a(-(n-1)x_a - x_b) at a and
    x_b(x_a + (n-1)x_b) at b."""
    n = ring.n
    x = ring.gens()
    F = ring.field
    entries = []
    for s in range(n + 1):
        if s == a:
            e = x[a] * (x[a].scale(F(-(n - 1))) - x[b])
        elif s == b:
            e = x[b] * (x[a] + x[b].scale(F(n - 1)))
        else:
            e = x[s] * (x[a] - x[b])
        entries.append(e)
    return Tensor(tuple(entries))


@dataclass
class TensorCheck:
    name: str
    tensor: Tensor
    residues: list          # apply(delta, f1), apply(delta, f2)

    @property
    def ok(self) -> bool:
        return not any(self.residues)


@dataclass
class MainTensors:
    R: list
    S: list
    checks: list
    derived: bool = False   # True when not transcribed from printed formulas

    @property
    def tensors(self) -> list[Tensor]:
        return self.R + self.S

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def mainthm_tensors(n: int, field_: Field = QQ) -> MainTensors:
    """R_i (a = x_{i-1}, b = x_m) and S_j (a = x_{m+j}, b = x_n), checked
    against both members of the pencil.

    For odd n the same pattern is extended to j = 1..n-1-m so that n-1
    tensors result; these are marked ``derived``.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    spec = section4_pencil(n, field_)
    ring = spec.f1.ring
    m = n // 2
    R = [_structured_tensor(ring, i - 1, m) for i in range(1, m + 1)]
    S = [_structured_tensor(ring, m + j, n) for j in range(1, n - m)]
    checks = []
    for name, T in [(f"R_{i + 1}", T) for i, T in enumerate(R)] + [(f"S_{j + 1}", T) for j, T in enumerate(S)]:
        delta = Derivation(T.entries, ring)
        checks.append(TensorCheck(name, T, [apply(delta, spec.f1), apply(delta, spec.f2)]))
    return MainTensors(R, S, checks, derived=bool(n % 2))


def common_der0(polys: list[Poly], degree: int) -> list[Derivation]:
    """Basis of the degree part of Der_0(f_1) ∩ ... ∩ Der_0(f_r), by linear algebra."""
    ring = polys[0].ring
    monos = ring.monomials(degree)
    grads = [gradient(f) for f in polys]
    columns = []
    target: dict = {}
    for i in range(ring.nvars):
        for mono in monos:
            col = {}
            for k, g in enumerate(grads):
                for e, c in g[i].terms.items():
                    key = (k, tuple(a + b for a, b in zip(e, mono)))
                    row = target.get(key)
                    if row is None:
                        row = target[key] = len(target)
                    col[row] = c
            columns.append(col)
    basis = linalg.kernel(columns, len(target), ring.field)
    out = []
    for vec in basis:
        comps = []
        for i in range(ring.nvars):
            terms = {m: c for m, c in zip(monos, vec[i * len(monos):(i + 1) * len(monos)]) if c}
            comps.append(Poly(ring, terms, check=False))
        out.append(Derivation(comps, ring))
    return out


def _proportional(p, q) -> bool:
    return p[0] * q[1] == p[1] * q[0]


def pencil_product(spec: PencilSpec) -> Poly:
    """f1 * f2 * prod (a_j f1 + b_j f2)."""
    F = spec.f1.ring.field
    pairs = [(F(a), F(b)) for a, b in spec.members]
    for a, b in pairs:
        if not a or not b:
            raise ValueError("pencil members need nonzero scalars")
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if _proportional(pairs[i], pairs[j]):
                raise ValueError(f"members {i} and {j} are proportional; the product would not be reduced")
    f = spec.f1 * spec.f2
    for i in range(spec.k):
        f = f * spec.member(i)
    return f


def predicted_exponents(tensor_degrees, degree: int, k: int) -> tuple:
    """Exponents expected for f1 f2 times k members: the tensor derivation
    degrees plus (k+2)d - sum - 1."""
    degs = list(tensor_degrees)
    return tuple(sorted(degs + [(k + 2) * degree - sum(degs) - 1]))


@dataclass
class FamilyReport:
    product: Poly
    product_degree: int
    freeness: FreenessReport
    shared: list                 # (name, [verdict vs f1, f2, product])
    me_containment: ContainmentCertificate | None
    predicted: tuple | None
    notes: list = field(default_factory=list)

    @property
    def agree(self) -> bool | None:
        """Do containment and the freeness decision agree?"""
        if self.me_containment is None or self.freeness.verdict not in ("free", "not_free"):
            return None
        return self.me_containment.contained == (self.freeness.verdict == FREE)


def verify_family(spec: PencilSpec, tensors: list[Tensor], *, timeout: float | None = None,
                  unchecked: bool = False) -> FamilyReport:
    """Freeness of the pencil product, decided independently of the tensors,
    cross-checked against the containment criterion with the given tensors."""
    f = pencil_product(spec)
    ring = f.ring
    shared = []
    for idx, T in enumerate(tensors):
        delta = Derivation(T.entries, ring)
        verdicts = [not apply(delta, g) for g in (spec.f1, spec.f2, f)]
        shared.append((f"T{idx + 1}", verdicts))
    freeness = decide_freeness(f, timeout=timeout)
    notes = []
    cert = None
    try:
        cert = contains_me_scheme(f, tensors, unchecked=unchecked)
    except HypothesisError as exc:
        notes.append(f"containment skipped: {exc}")
    except ResourceLimit as exc:
        notes.append(f"containment inconclusive: {exc}")
    tensor_degs = [T.order - 1 for T in tensors]
    predicted = predicted_exponents(tensor_degs, spec.f1.degree(), spec.k)
    return FamilyReport(f, f.degree(), freeness, shared, cert, predicted, notes)


# -- random members ---------------------------------------------------------------


def _scalar(F: Field, rng: random.Random):
    if F.p is None:
        return F(rng.choice([c for c in range(-9, 10) if c]))
    return F(rng.randrange(1, F.p))


def random_members(spec: PencilSpec, k: int, seed: int) -> PencilSpec:
    """``k`` seeded members with nonzero scalars, pairwise non-proportional."""
    rng = random.Random(seed)
    F = spec.f1.ring.field
    members: list = []
    while len(members) < k:
        pair = (_scalar(F, rng), _scalar(F, rng))
        if all(not _proportional(pair, q) for q in members):
            members.append(pair)
    return PencilSpec(spec.f1, spec.f2, members)


def lastex_family(n: int, k: int, seed: int, mode: str = "pencil", field_: Field | None = None) -> Poly:
    """x_0...x_n times k random forms from the span of the h_i.

    ``web``: every form is a fresh random combination of the h_i.
    ``pencil``: C_1, C_2 random as above, the rest random members a C_1 + b C_2.
    """
    if n < 3 or k < 0:
        raise ValueError("need n >= 3 and k >= 0")
    if mode not in ("pencil", "web"):
        raise ValueError("mode must be pencil or web")
    F = field_ or GF()
    arrangement, h = hypertetrahedron(n, F)
    rng = random.Random(seed)

    def web_member():
        total = h[0].ring.zero()
        for g in h:
            total = total + g.scale(_scalar(F, rng))
        return total

    forms: list[Poly] = []
    if mode == "web":
        forms = [web_member() for _ in range(k)]
    else:
        base = [web_member() for _ in range(min(k, 2))]
        forms = list(base)
        seen = [(F(1), F(0)), (F(0), F(1))]
        while len(forms) < k:
            pair = (_scalar(F, rng), _scalar(F, rng))
            if any(_proportional(pair, q) for q in seen):
                continue
            seen.append(pair)
            forms.append(base[0].scale(pair[0]) + base[1].scale(pair[1]))
    f = arrangement
    for g in forms:
        f = f * g
    return f


def lastex_predicted(n: int, k: int, mode: str) -> tuple | None:
    """Exponents stated for the n = 3 family (None where nothing is claimed)."""
    if n != 3:
        return None
    if k == 0:
        return (1, 1, 1)
    if mode == "pencil" or k <= 2:
        return (2, 2, 3 * k - 1)
    return None


# -- fixed instances ----------------------------------------------------------------


def example1(field_: Field = QQ) -> Poly:
    return parse_poly("x^6*z+y^7+x^5*y*t+x^4*y^3", Ring(3, field_))


def example2(d: int = 10, field_: Field = QQ) -> Poly:
    if d < 5:
        raise ValueError("example2 needs d >= 5")
    return parse_poly(f"x^{d - 1}*z+y^{d}+x^{d - 2}*y*t+x^{d - 5}*y^5", Ring(3, field_))


def example3(field_: Field = QQ) -> Poly:
    return parse_poly("y^2*z^2-4*x*z^3-4*y^3*t+18*x*y*z*t-27*x^2*t^2", Ring(3, field_))


def example4(conics: int = 2, seed: int = 0, mode: str = "net", field_: Field = QQ) -> Poly:
    """xyz times conics through the three vertices: ``net`` draws each conic
    independently; ``pencil`` takes the rest from the pencil of the first two."""
    ring = Ring(2, field_)
    basis = [parse_poly(s, ring) for s in ("y*z", "x*z", "x*y")]
    rng = random.Random(seed)
    F = ring.field

    def conic():
        total = ring.zero()
        for g in basis:
            total = total + g.scale(_scalar(F, rng))
        return total

    cs = [conic() for _ in range(min(conics, 2))] if mode == "pencil" else [conic() for _ in range(conics)]
    seen = [(F(1), F(0)), (F(0), F(1))]
    while len(cs) < conics:
        pair = (_scalar(F, rng), _scalar(F, rng))
        if any(_proportional(pair, q) for q in seen):
            continue
        seen.append(pair)
        cs.append(cs[0].scale(pair[0]) + cs[1].scale(pair[1]))
    f = parse_poly("x*y*z", ring)
    for c in cs:
        f = f * c
    return f


def example5(s: int = 1, r: int = 1, seed: int = 0, field_: Field = QQ) -> Poly:
    """xyzt prod(a_i x + b_i y) prod(c_j z + d_j t) with distinct seeded slopes."""
    ring = Ring(3, field_)
    F = ring.field
    rng = random.Random(seed)
    x, y, z, t = ring.gens()

    def planes(u, v, count):
        pairs: list = []
        while len(pairs) < count:
            pair = (_scalar(F, rng), _scalar(F, rng))
            if all(not _proportional(pair, q) for q in pairs):
                pairs.append(pair)
        return [u.scale(a) + v.scale(b) for a, b in pairs]

    f = x * y * z * t
    for p in planes(x, y, s) + planes(z, t, r):
        f = f * p
    return f


def fermat(field_: Field = QQ) -> Poly:
    return parse_poly("x^3+y^3+z^3+t^3", Ring(3, field_))


def clebsch(field_: Field = QQ) -> Poly:
    return parse_poly("x^2*y+y^2*z+z^2*t+t^2*x", Ring(3, field_))


FERMAT_EIGENPOINTS = [
    (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
    (1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1), (0, 0, 1, 1),
    (1, 1, 1, 0), (1, 1, 0, 1), (1, 0, 1, 1), (0, 1, 1, 1), (1, 1, 1, 1),
]

FERMAT_CLEBSCH_QUINTICS = [
    "x^2*y^3-x*y^4-x^4*z+2*x*y^3*z+x^3*z^2-2*x^2*y*z^2-2*x*y^2*z^2+2*x*y*z^3+2*x^2*y*z*t-2*x*y^2*z*t+y^2*z*t^2-y*z^2*t^2",
    "x^2*y*z^2-x*y^2*z^2-x^4*t+2*x^3*y*t-2*x^2*y^2*t+2*x*y^3*t-2*x^2*y*z*t+x^3*t^2-2*x*y^2*t^2+2*x*y*z*t^2+y^2*t^3-y*t^4",
    "x^2*z^3-x*z^4-x^2*y^2*t+2*x^3*z*t-2*x^2*z^2*t+2*x*y*z^2*t+x*y^2*t^2-2*x^2*z*t^2-2*x*y*z*t^2+2*x*z*t^3+z^2*t^3-z*t^4",
    "y^2*z^3-y*z^4-y^4*t+2*x*y^2*z*t+x^2*z^2*t-2*x*y*z^2*t+2*y*z^3*t+y^3*t^2-x^2*z*t^2-2*y^2*z*t^2-2*y*z^2*t^2+2*y*z*t^3",
]


# -- preset registry ----------------------------------------------------------------


@dataclass
class Preset:
    """A named instance: ``f`` is the hypersurface checked for freeness;
    ``tensors`` (when known) feed the containment criterion."""

    name: str
    f: Poly
    params: dict = field(default_factory=dict)
    tensors: list | None = None
    predicted: tuple | None = None
    pencil: PencilSpec | None = None
    notes: list = field(default_factory=list)


PRESET_NAMES = ["fermat", "clebsch", "cubicspencil", "sec4", "lastex",
                "example1", "example2", "example3", "example4", "example5"]

_DEFAULTS = {
    "cubicspencil": {"k": 0, "seed": 0},
    "sec4": {"n": 3, "k": 0, "seed": 0},
    "lastex": {"n": 3, "k": 1, "mode": "pencil", "seed": 0},
    "example2": {"d": 10},
    "example4": {"conics": 2, "mode": "net", "seed": 0},
    "example5": {"s": 1, "r": 1, "seed": 0},
}


def parse_preset_name(text: str) -> tuple[str, dict]:
    """``name`` or ``name:key=value,key=value``."""
    name, _, rest = text.partition(":")
    name = name.strip()
    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")
    params = dict(_DEFAULTS.get(name, {}))
    if rest.strip():
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            key = key.strip()
            if not eq or key not in params:
                raise ValueError(f"bad preset parameter {item!r} for {name}")
            value = value.strip()
            params[key] = value if key == "mode" else int(value)
    return name, params


def preset(text: str, field_: Field | None = None) -> Preset:
    name, params = parse_preset_name(text)
    F = field_ or QQ
    if name == "fermat":
        return Preset(name, fermat(F), params)
    if name == "clebsch":
        return Preset(name, clebsch(F), params)
    if name == "cubicspencil":
        spec = random_members(cubics_pencil(F), params["k"], params["seed"])
        tensors = cubics_pencil_tensors(F)
        return Preset(name, pencil_product(spec), params, tensors,
                      predicted_exponents([2, 2], 3, spec.k), spec)
    if name == "sec4":
        n = params["n"]
        base = section4_pencil(n, F)
        spec = random_members(base, params["k"], params["seed"])
        mt = mainthm_tensors(n, F)
        notes = [] if mt.ok else [f"tensor {c.name} fails the annihilation check" for c in mt.checks if not c.ok]
        if mt.derived:
            notes.append("odd n: tensors follow the even-n pattern (derived, not transcribed)")
        tensors = mt.tensors if mt.ok else None
        predicted = predicted_exponents([2] * (n - 1), n, spec.k) if mt.ok else None
        return Preset(name, pencil_product(spec), params, tensors, predicted, spec, notes)
    if name == "lastex":
        F = field_ or GF()
        f = lastex_family(params["n"], params["k"], params["seed"], params["mode"], F)
        return Preset(name, f, params, predicted=lastex_predicted(params["n"], params["k"], params["mode"]))
    if name == "example1":
        return Preset(name, example1(F), params, predicted=(1, 2, 3))
    if name == "example2":
        d = params["d"]
        return Preset(name, example2(d, F), params, predicted=(1, 4, d - 6) if d >= 10 else None)
    if name == "example3":
        return Preset(name, example3(F), params, predicted=(1, 1, 1))
    if name == "example4":
        conics, mode = params["conics"], params["mode"]
        f = example4(conics, params["seed"], mode, F)
        predicted = (2, 2 * conics) if conics == 2 or mode == "pencil" else None
        return Preset(name, f, params, predicted=predicted)
    # example5
    s, r = params["s"], params["r"]
    return Preset(name, example5(s, r, params["seed"], F), params, predicted=tuple(sorted((1, s + 1, r + 1))))

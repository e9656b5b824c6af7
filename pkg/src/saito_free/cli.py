"""Command-line front end: ``saito-free <command> [options] inputs``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .derivation import Derivation, apply, parse_derivation
from .eigenschemes import (
    Tensor,
    eigenscheme_ideal,
    me_scheme_ideal,
    parse_tensor,
    point_membership,
    scheme_report,
)
from .groebner import DEFAULT_DEGREE_CAP, Ideal, ResourceLimit, degree_cap
from .pencils import PRESET_NAMES, PencilSpec, pencil_product, preset, random_members, verify_family
from .polymatrix import PolyMatrix, determinant, determinant_derivation, maximal_minors
from .polyring import (
    GF,
    QQ,
    Field,
    NotDivisible,
    ParseError,
    Poly,
    Ring,
    exact_divide,
    field_from_spec,
    gradient,
    looks_reduced,
    parse_poly,
    render_poly,
)
from .saito import (
    Confirmed,
    HypothesisError,
    NotInDerError,
    contains_me_scheme,
    saito_test,
)
from .syzmod import (
    FREE,
    INCONCLUSIVE,
    decide_freeness,
    jacobian_syzygies,
    minimalize,
    syzygy_generators,
)

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2
EVIDENCE_LABEL = "characteristic-p evidence"


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


# -- input handling ---------------------------------------------------------------


def _read_arg(text: str) -> str:
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                return fh.read().strip()
        except OSError as exc:
            raise InputError(f"cannot read {text[1:]}: {exc}") from exc
    return text


class Context:
    """Per-invocation state: ring, field choice, warnings, deadline."""

    def __init__(self, args):
        self.args = args
        self.n = args.n
        self.warnings: list[str] = []
        self.explicit_field = args.field is not None
        try:
            self.field = field_from_spec(args.field) if args.field else QQ
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if self.field.p is not None and self.field.p <= self.n + 1:
            raise InputError(f"characteristic {self.field.p} must exceed n+1")
        self.ring = Ring(self.n, self.field)
        self.deadline = time.monotonic() + args.timeout if args.timeout else None

    def poly(self, text: str) -> Poly:
        text = _read_arg(text)
        f = parse_poly(text, self.ring)
        return f

    def polys(self, texts) -> list[Poly]:
        out = [self.poly(t) for t in texts]
        if any(p.ring.uses_aliases for p in out):
            aliased = out[0].ring.with_aliases()
            out = [p.to_ring(aliased) for p in out]
        return out

    def auto_field(self, polys: list[Poly]) -> list[Poly]:
        """Switch to GF(2^31-1) for n > 3 or degree > 12 unless a field was given."""
        if self.explicit_field or self.field.p is not None:
            return polys
        big = self.n > 3 or max((p.degree() for p in polys if p), default=0) > 12
        if not big:
            return polys
        F = GF()
        try:
            converted = [p.to_field(F) for p in polys]
        except ZeroDivisionError:
            return polys
        self.field = F
        self.ring = self.ring.with_field(F)
        self.warnings.append(f"working over GF({F.p}): results are {EVIDENCE_LABEL}")
        return converted

    def reduced_warning(self, f: Poly):
        try:
            if not looks_reduced(f):
                self.warnings.append("f appears not to be reduced (gcd with its partials is non-constant)")
        except Exception:  # the check is advisory only
            pass


def _text(p: Poly) -> str:
    return render_poly(p)


def _deriv_json(d: Derivation) -> list[str]:
    return [_text(g) for g in d.coefficients]


def _scalar(field: Field, c):
    return field.to_json(c)


def _field_json(field: Field) -> dict:
    return {"spec": field.spec(), "name": field.name,
            "label": "exact" if field.p is None else EVIDENCE_LABEL}


# -- commands -------------------------------------------------------------------------


def cmd_parse(ctx: Context):
    polys = ctx.polys(ctx.args.polys)
    out = []
    for p in polys:
        out.append({"canonical": _text(p), "degree": p.degree() if p else None,
                    "homogeneous": p.is_homogeneous(), "terms": len(p)})
    return {"polynomials": out}, {}, None


def cmd_jacobian(ctx: Context):
    f = ctx.polys([ctx.args.poly])[0]
    return {"f": _text(f), "partials": [_text(g) for g in gradient(f)]}, {}, None


def _vector_json(v) -> dict:
    return {"degree": v.degree, "components": [_text(a) for a in v.components]}


def cmd_syzygies(ctx: Context):
    polys = ctx.auto_field(ctx.polys(ctx.args.polys))
    if len(polys) == 1:
        gens = jacobian_syzygies(polys[0], deadline=ctx.deadline)
        target = "jacobian"
    else:
        gens = syzygy_generators(polys, deadline=ctx.deadline)
        target = "polynomials"
    mins = minimalize(gens)
    return {"of": target, "minimal_degrees": mins.degrees,
            "generators": [_vector_json(v) for v in mins.vectors]}, {}, None


def cmd_mdr(ctx: Context):
    f = ctx.auto_field(ctx.polys([ctx.args.poly]))[0]
    gens = jacobian_syzygies(f, max_degree=max(f.degree() - 1, 0), deadline=ctx.deadline)
    mins = minimalize(gens)
    if not mins.vectors:
        raise InputError("no Jacobian relation in degree <= d-1 (is f constant?)")
    v = min(mins.vectors, key=lambda v: v.degree)
    return {"f": _text(f), "mdr": v.degree, "witness": [_text(a) for a in v.components]}, {}, None


def _freeness_payload(ctx: Context, f: Poly):
    return _freeness_payload_from(ctx, f, decide_freeness(f, deadline=ctx.deadline))


def cmd_is_free(ctx: Context):
    f = ctx.auto_field(ctx.polys([ctx.args.poly]))[0]
    ctx.reduced_warning(f)
    result, certs, report = _freeness_payload(ctx, f)
    return result, certs, report.verdict == INCONCLUSIVE


def cmd_saito_check(ctx: Context):
    items = ctx.polys([ctx.args.poly])
    f = items[0]
    ring = f.ring
    derivs = [parse_derivation(_read_arg(t), ring) for t in ctx.args.derivations]
    try:
        verdict = saito_test(f, derivs)
    except NotInDerError as exc:
        raise InputError(str(exc)) from exc
    result = {"f": _text(f), "determinant": _text(verdict.determinant)}
    certs = {}
    if isinstance(verdict, Confirmed):
        c = _scalar(ring.field, verdict.constant)
        result.update(verdict="confirmed", constant=c)
        certs["saito"] = {"kind": "saito", "n": f.ring.n, "f": _text(f),
                          "derivations": [_deriv_json(d) for d in derivs], "constant": c}
    else:
        result["verdict"] = "failed"
    return result, certs, None


def cmd_derivation_det(ctx: Context):
    polys = ctx.polys(ctx.args.polys)
    delta = determinant_derivation(polys)
    normalized = delta.normalized() if not delta.is_zero() else delta
    return {"derivation": _deriv_json(delta), "normalized": _deriv_json(normalized),
            "zero": delta.is_zero(), "text": normalized.to_text()}, {}, None


def _tensors(ctx: Context, texts) -> list[Tensor]:
    out = []
    for t in texts:
        try:
            out.append(parse_tensor(_read_arg(t), ctx.ring))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    return out


def _points(ctx: Context, I: Ideal) -> list:
    out = []
    for text in ctx.args.point or []:
        coords = [ctx.field(int(c)) if "/" not in c else ctx.field(_frac(c)) for c in text.split(",")]
        out.append({"point": text, "member": point_membership(I, coords)})
    return out


def _frac(text: str):
    from fractions import Fraction

    return Fraction(text.strip())


def _report_payload(ctx: Context, I: Ideal) -> dict:
    rep = scheme_report(I, deadline=ctx.deadline)
    out = rep.to_json()
    out["generators"] = [_text(g) for g in I.generators]
    pts = _points(ctx, I)
    if pts:
        out["points"] = pts
    return out


def cmd_eigenscheme(ctx: Context):
    (T,) = _tensors(ctx, [ctx.args.tensor])
    return _report_payload(ctx, eigenscheme_ideal(T)), {}, None


def cmd_me_scheme(ctx: Context):
    Ts = _tensors(ctx, ctx.args.tensors)
    return _report_payload(ctx, me_scheme_ideal(Ts)), {}, None


def cmd_scheme_report(ctx: Context):
    polys = ctx.polys(ctx.args.polys)
    return _report_payload(ctx, Ideal(polys, polys[0].ring)), {}, None


def cmd_contains(ctx: Context):
    f = ctx.polys([ctx.args.poly])[0]
    Ts = _tensors(ctx, ctx.args.tensors)
    cert = contains_me_scheme(f, Ts, unchecked=ctx.args.unchecked, deadline=ctx.deadline)
    result = {"f": _text(f), "contained": cert.contained, "codimension": cert.codimension,
              "hypothesis": "checked" if cert.hypothesis_checked else "hypothesis unverified",
              "minors": [_text(h) for h in cert.minors]}
    certs = {}
    if cert.contained:
        result["cofactors"] = [_text(g) for g in cert.cofactors]
        certs["containment"] = {"kind": "containment", "n": f.ring.n, "f": _text(f),
                                "tensors": [[_text(g) for g in T.entries] for T in Ts],
                                "minors": result["minors"], "cofactors": result["cofactors"]}
    return result, certs, None


def cmd_pencil(ctx: Context):
    a = ctx.args
    f1, f2 = ctx.polys([a.f1, a.f2])
    if f1.degree() != f2.degree():
        raise InputError("pencil generators must have the same degree")
    F = f1.ring.field
    if a.members:
        members = []
        for item in a.members:
            x, _, y = item.partition(":")
            members.append((F(_frac(x)), F(_frac(y))))
        spec = PencilSpec(f1, f2, members)
    else:
        spec = random_members(PencilSpec(f1, f2), a.k, a.seed)
    Ts = [T if T.ring.names == f1.ring.names else Tensor(tuple(g.to_ring(f1.ring) for g in T.entries))
          for T in _tensors(ctx, a.tensor or [])]
    if Ts:
        family = verify_family(spec, Ts, timeout=a.timeout, unchecked=a.unchecked)
        product, freeness = family.product, family.freeness
    else:
        product = pencil_product(spec)
        freeness = decide_freeness(product, deadline=ctx.deadline)
        family = None
    result, certs, report = _freeness_payload_from(ctx, product, freeness)
    result["members"] = [[_scalar(F, x), _scalar(F, y)] for x, y in spec.members]
    if family is not None:
        result["shared_derivations"] = [{"tensor": name, "kills_f1": v[0], "kills_f2": v[1], "kills_product": v[2]}
                                        for name, v in family.shared]
        result["predicted_exponents"] = list(family.predicted) if family.predicted else None
        if family.me_containment is not None:
            result["me_contained"] = family.me_containment.contained
            result["verdicts_agree"] = family.agree
        ctx.warnings.extend(family.notes)
    return result, certs, report.verdict == INCONCLUSIVE


def _freeness_payload_from(ctx: Context, f: Poly, report):
    result = {
        "f": _text(f), "degree": f.degree(), "verdict": report.verdict,
        "exponents": list(report.exponents) if report.exponents else None,
        "generator_degrees": sorted(report.generator_degrees),
        "minimal_degrees": report.minimal_degrees,
        "witness": report.witness, "reason": report.reason, "method": report.method,
    }
    certs = {}
    if report.verdict == FREE:
        c = _scalar(f.ring.field, report.saito_constant)
        result["saito_constant"] = c
        certs["saito"] = {"kind": "saito", "n": f.ring.n, "f": _text(f),
                          "derivations": [_deriv_json(d) for d in report.certificate], "constant": c}
    return result, certs, report


def _run_preset(name: str, field_spec: str | None, timeout: float | None, cap: int) -> dict:
    F = field_from_spec(field_spec) if field_spec else None
    t0 = time.monotonic()
    with degree_cap(cap):
        p = preset(name, F)
        out = {"preset": name, "params": p.params, "f": _text(p.f), "field": p.f.ring.field.spec(),
               "notes": list(p.notes)}
        try:
            if name.split(":")[0] in ("fermat", "clebsch"):
                rep = scheme_report(eigenscheme_ideal(Tensor.gradient_of(p.f)))
                out["eigenscheme"] = rep.to_json()
            else:
                report = decide_freeness(p.f, timeout=timeout)
                out["verdict"] = report.verdict
                out["exponents"] = list(report.exponents) if report.exponents else None
                out["minimal_degrees"] = report.minimal_degrees
                out["predicted_exponents"] = list(p.predicted) if p.predicted else None
                if report.verdict == FREE:
                    out["saito_constant"] = p.f.ring.field.to_json(report.saito_constant)
                    out["certificate"] = {"kind": "saito", "n": p.f.ring.n, "f": _text(p.f),
                                          "derivations": [_deriv_json(d) for d in report.certificate],
                                          "constant": out["saito_constant"]}
                if p.tensors and report.verdict == FREE:
                    cert = contains_me_scheme(p.f, p.tensors)
                    out["me_contained"] = cert.contained
        except ResourceLimit as exc:
            out["verdict"] = INCONCLUSIVE
            out["reason"] = str(exc)
    out["seconds"] = round(time.monotonic() - t0, 3)
    return out


DEFAULT_PRESET_RUNS = ["cubicspencil", "example1", "example2", "example2:d=9", "example3",
                       "example4", "example4:conics=5", "example5", "example5:s=2,r=1",
                       "fermat", "clebsch", "lastex:k=1,mode=web", "sec4:n=3", "sec4:n=4"]


def cmd_preset(ctx: Context):
    a = ctx.args
    cap = a.degree_cap
    if a.all:
        names = sorted(DEFAULT_PRESET_RUNS)
        workers = max(1, int(os.environ.get("SAITO_FREE_THREADS", "1") or 1))
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                runs = list(pool.map(_run_preset, names, [a.field] * len(names),
                                     [a.timeout] * len(names), [cap] * len(names)))
        else:
            runs = [_run_preset(nm, a.field, a.timeout, cap) for nm in names]
        for r in runs:
            r.pop("seconds", None)
        inconclusive = any(r.get("verdict") == INCONCLUSIVE for r in runs)
        return {"presets": runs}, {}, inconclusive
    if not a.name:
        raise InputError(f"preset name required; known: {', '.join(PRESET_NAMES)}")
    try:
        out = _run_preset(a.name, a.field, a.timeout, cap)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    out.pop("seconds", None)
    certs = {}
    if "certificate" in out:
        certs["saito"] = out.pop("certificate")
    if out["field"] != "qq":
        ctx.warnings.append(f"preset computed over {out['field']}: {EVIDENCE_LABEL}")
    ctx.field = field_from_spec(out["field"])
    return out, certs, out.get("verdict") == INCONCLUSIVE


# -- certificate verification by expansion ---------------------------------------------


def verify_certificate(cert: dict, ring: Ring) -> tuple[bool, str]:
    """Re-check a certificate with polynomial expansion only."""
    kind = cert.get("kind")
    if "n" in cert and cert["n"] != ring.n:
        ring = Ring(cert["n"], ring.field)
    f = parse_poly(cert["f"], ring)
    if kind == "saito":
        derivs = [Derivation([parse_poly(s, f.ring) for s in row], f.ring) for row in cert["derivations"]]
        if len(derivs) != ring.n:
            return False, f"expected {ring.n} derivations"
        for i, d in enumerate(derivs):
            v = apply(d, f)
            if v:
                try:
                    exact_divide(v, f)
                except NotDivisible:
                    return False, f"derivation {i} is not logarithmic"
        det = determinant(PolyMatrix([f.ring.gens()] + [list(d.coefficients) for d in derivs], f.ring))
        c = ring.field(_frac(str(cert["constant"])))
        if not c or det != f.scale(c):
            return False, "determinant differs from constant * f"
        return True, "det(coordinates; derivations) = c*f"
    if kind == "containment":
        rows = [[parse_poly(s, f.ring) for s in row] for row in cert["tensors"]]
        h = maximal_minors(PolyMatrix([f.ring.gens()] + rows, f.ring))
        stated = [parse_poly(s, f.ring) for s in cert["minors"]]
        if h != stated:
            return False, "minors do not match the tensors"
        cof = [parse_poly(s, f.ring) for s in cert["cofactors"]]
        total = f.ring.zero()
        for a, b in zip(h, cof):
            total = total + a * b
        if total != f:
            return False, "sum h_i g_i differs from f"
        return True, "sum h_i g_i = f"
    return False, f"unknown certificate kind {kind!r}"


def cmd_verify_cert(ctx: Context):
    src = ctx.args.report
    if src == "-":
        text = sys.stdin.read()
    elif src.startswith("@") or not src.lstrip().startswith("{"):
        text = _read_arg(src if src.startswith("@") else "@" + src)
    else:
        text = src
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not JSON: {exc}") from exc
    certs = data.get("certificates") or {}
    if not certs:
        raise InputError("report carries no certificates")
    field_ = field_from_spec(data.get("field", {}).get("spec", "qq"))
    n = data.get("inputs", {}).get("n", ctx.n)
    ring = Ring(n, field_)
    ctx.field = field_
    results = {}
    ok = True
    for name, cert in sorted(certs.items()):
        good, why = verify_certificate(cert, ring)
        results[name] = {"verified": good, "detail": why}
        ok = ok and good
    if not ok:
        raise _Rejected({"verified": False, "certificates": results})
    return {"verified": True, "certificates": results}, {}, None


class _Rejected(Exception):
    def __init__(self, payload):
        self.payload = payload


COMMANDS = {
    "parse": cmd_parse,
    "jacobian": cmd_jacobian,
    "syzygies": cmd_syzygies,
    "mdr": cmd_mdr,
    "is-free": cmd_is_free,
    "saito-check": cmd_saito_check,
    "derivation-det": cmd_derivation_det,
    "eigenscheme": cmd_eigenscheme,
    "me-scheme": cmd_me_scheme,
    "contains": cmd_contains,
    "scheme-report": cmd_scheme_report,
    "pencil": cmd_pencil,
    "preset": cmd_preset,
    "verify-cert": cmd_verify_cert,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=3, help="projective dimension (default 3)")
    common.add_argument("--field", default=None, help="qq or fp:<p> (default: qq, switching to fp "
                        "for n > 3 or degree > 12)")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    common.add_argument("--timeout", type=float, default=None, help="seconds")
    common.add_argument("--unchecked", action="store_true",
                        help="skip the codimension-2 hypothesis check")

    parser = _Parser(prog="saito-free", description="Freeness of hypersurfaces, eigenschemes and pencils.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    add("parse", "canonical form of polynomials").add_argument("polys", nargs="+")
    add("jacobian", "partial derivatives").add_argument("poly")
    add("syzygies", "minimal syzygies (of J_f for one input)").add_argument("polys", nargs="+")
    add("mdr", "minimal degree of a Jacobian relation").add_argument("poly")
    add("is-free", "decide freeness with a Saito certificate").add_argument("poly")
    p = add("saito-check", "Saito's determinant test for given derivations")
    p.add_argument("poly")
    p.add_argument("derivations", nargs="+")
    add("derivation-det", "determinant derivation of n polynomials").add_argument("polys", nargs="+")
    p = add("eigenscheme", "eigenscheme of a tensor")
    p.add_argument("tensor")
    p.add_argument("--point", action="append", help="comma-separated coordinates to test")
    p = add("me-scheme", "multiple eigenscheme of tensors")
    p.add_argument("tensors", nargs="+")
    p.add_argument("--point", action="append")
    p = add("contains", "does f contain the ME-scheme of n-1 tensors")
    p.add_argument("poly")
    p.add_argument("tensors", nargs="+")
    p = add("scheme-report", "Hilbert data of an ideal")
    p.add_argument("polys", nargs="+")
    p.add_argument("--point", action="append")
    p = add("pencil", "freeness of f1*f2*prod(a f1 + b f2)")
    p.add_argument("f1")
    p.add_argument("f2")
    p.add_argument("--k", type=int, default=0, help="number of random members")
    p.add_argument("--members", nargs="*", help="explicit members a:b")
    p.add_argument("--tensor", action="append", help="tensor for the containment cross-check")
    p = add("preset", "run a named instance")
    p.add_argument("name", nargs="?")
    p.add_argument("--all", action="store_true")
    add("verify-cert", "re-check certificates of a JSON report").add_argument("report")
    return parser


def _render_human(report: dict) -> str:
    lines = [f"{report['command']} over {report['field']['name']}"]

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}{k}.", v)
        elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            for i, v in enumerate(value):
                walk(f"{prefix}{i}.", v)
        elif value is not None:
            if isinstance(value, list):
                value = "(" + ", ".join(str(v) for v in value) + ")"
            lines.append(f"  {prefix[:-1]}: {value}")

    walk("", report["result"])
    for w in report["warnings"]:
        lines.append(f"  warning: {w}")
    return "\n".join(lines)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.monotonic()
    try:
        ctx = Context(args)
        with degree_cap(args.degree_cap):
            result, certs, inconclusive = COMMANDS[args.command](ctx)
    except _Rejected as exc:
        print(json.dumps(exc.payload, indent=2, sort_keys=True))
        return EXIT_INPUT
    except (ParseError, InputError, HypothesisError) as exc:
        print(f"saito-free {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, ZeroDivisionError) as exc:
        print(f"saito-free {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimit as exc:
        result, certs, inconclusive = {"verdict": INCONCLUSIVE, "reason": str(exc)}, {}, True
    inputs = {k: v for k, v in vars(args).items() if k not in ("json", "command")}
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "inputs": inputs,
        "field": _field_json(ctx.field),
        "seed": args.seed,
        "result": result,
        "certificates": certs,
        "timings": {"total_seconds": round(time.monotonic() - t0, 6)},
        "warnings": ctx.warnings,
    }
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True, default=str))
    else:
        print(_render_human(report))
    for w in ctx.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_INCONCLUSIVE if inconclusive else EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

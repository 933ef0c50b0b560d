"""Command-line front end: ``rbx COMMAND FILE [options]``.

Exit codes: 0 success, 1 a check failed (the report carries witnesses),
2 bad input (unreadable file, schema violation, dimension mismatch, syntax).
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable, Sequence

import numpy as np

from . import deformation as deform_mod
from .algebra import ShapeError, ValidationReport, validate_algebra, validate_bimodule
from .cochains import arity
from .dendriform import (
    InvalidDendriformError,
    dend_cohomology,
    dend_differential,
    theta,
    theta_chain_sign,
    validate_dendriform,
)
from .freerb import (
    DEFAULT_DEPTH_CAP,
    DepthCapExceeded,
    FreeRotaBaxter,
    StructureAlgebra,
    WordError,
    enveloping_relations,
    format_element,
    format_word,
    word_stats,
)
from .hochschild import VARIANTS, hochschild_cohomology
from .io import InputError, dumps, load_block, load_document
from .rota_baxter import (
    GaugeError,
    NotRotaBaxterError,
    RBOperator,
    check_relative_rb,
    derived_bracket,
    graph_check,
    gauge_transform,
    induced_dendriform,
    is_involutive_rb_cochain,
    rb_cohomology,
    rb_differential,
)
from .wordparse import ParseError, parse_expression, parse_word

OK, FAILED, BAD_INPUT = 0, 1, 2

# Which basis each witness index refers to: "A" algebra, "M" bimodule,
# "D" dendriform, "k" deformation order.
_INDEX_KINDS = {
    "associativity": "AAA",
    "involution squares to identity": "A",
    "(ab)* = b* a*": "AA",
    "(ab)u = a(bu)": "AAM",
    "u(ab) = (ua)b": "MAA",
    "(au)b = a(ub)": "AMA",
    "module involution squares to identity": "M",
    "(au)* = u* a*": "AM",
    "(ua)* = a* u*": "MA",
    "T(u*) = T(u)*": "M",
    "T(u)T(v) = T(uT(v) + T(u)v)": "MM",
}


class Outcome:
    """A report dict, its human rendering and an exit code."""

    def __init__(self, report: dict, lines: list[str], code: int = OK):
        self.report, self.lines, self.code = report, lines, code


def _index_kinds(axiom: str, default: str) -> str:
    if axiom in _INDEX_KINDS:
        return _INDEX_KINDS[axiom]
    if axiom.startswith("order "):
        return "k" + ("MM" if "equation" in axiom else "M")
    return default


def _witnesses(report: ValidationReport, names: dict[str, Sequence[str]], default: str = "A") -> list[dict]:
    out = []
    for v in report.violations:
        kinds = _index_kinds(v.axiom, default * len(v.indices))
        labels = [
            str(i) if kind == "k" or kind not in names else names[kind][i]
            for kind, i in zip(kinds, v.indices)
        ]
        d = v.as_dict()
        d["basis"] = labels
        out.append(d)
    return out


def _witness_lines(witnesses: list[dict]) -> list[str]:
    lines = []
    for w in witnesses:
        lines.append(f"  FAIL {w['axiom']} at ({', '.join(w['basis'])})")
        lines.append(f"    lhs = [{', '.join(w['lhs'])}]")
        lines.append(f"    rhs = [{', '.join(w['rhs'])}]")
    return lines


def _names(doc) -> dict[str, Sequence[str]]:
    out: dict[str, Sequence[str]] = {}
    if doc.algebra is not None:
        out["A"] = doc.algebra.names
        out["M"] = doc.bimodule.names
    return out


def _matrix_lines(mat: np.ndarray, indent: str = "  ") -> list[str]:
    return [indent + "[" + ", ".join(str(x) for x in row) + "]" for row in mat]


def cmd_validate(args) -> Outcome:
    doc = load_document(args.file)
    report: dict = {"command": "validate"}
    lines: list[str] = []
    ok = True
    names = _names(doc)
    if doc.algebra is not None:
        for label, rep, default in (
            ("algebra", validate_algebra(doc.algebra), "A"),
            ("bimodule", validate_bimodule(doc.algebra, doc.bimodule), "A"),
        ):
            w = _witnesses(rep, names, default)
            report[label] = {"ok": rep.ok, "violations": w}
            lines.append(f"{label}: {'ok' if rep.ok else 'FAILED'}")
            lines += _witness_lines(w)
            ok &= rep.ok
    d = doc.dendriform()
    if d is not None:
        rep = validate_dendriform(d)
        w = _witnesses(rep, {"A": d.names, "D": d.names}, "D")
        report["dendriform"] = {"ok": rep.ok, "violations": w}
        lines.append(f"dendriform: {'ok' if rep.ok else 'FAILED'}")
        lines += _witness_lines(w)
        ok &= rep.ok
    report["ok"] = ok
    return Outcome(report, lines, OK if ok else FAILED)


def _require_structures(doc) -> None:
    for rep in (validate_algebra(doc.algebra), validate_bimodule(doc.algebra, doc.bimodule)):
        if not rep.ok:
            v = rep.violations[0]
            raise InputError(f"input structure is invalid: {v.axiom} fails at {v.indices}", doc.source)


class CheckFailed(Exception):
    def __init__(self, outcome: Outcome):
        self.outcome = outcome


def _operator(doc) -> RBOperator:
    _require_structures(doc)
    return RBOperator(doc.algebra, doc.bimodule, doc.operator())


def _rb_operator(doc, command: str) -> RBOperator:
    """The document's operator, which must pass the Rota-Baxter check."""
    op = _operator(doc)
    rep = check_relative_rb(op.algebra, op.bimodule, op.matrix)
    if not rep.ok:
        w = _witnesses(rep, _names(doc))
        raise CheckFailed(Outcome(
            {"command": command, "ok": False, "error": "not an involutive relative Rota-Baxter operator", "violations": w},
            ["not an involutive relative Rota-Baxter operator", *_witness_lines(w)],
            FAILED,
        ))
    return op


def cmd_check_rb(args) -> Outcome:
    doc = load_document(args.file)
    op = _operator(doc)
    a, m = doc.algebra, doc.bimodule
    rep = check_relative_rb(a, m, op.matrix)
    bracket = derived_bracket(a, m, op.cochain, op.cochain)
    equivariant = not any(v.axiom == "T(u*) = T(u)*" for v in rep.violations)
    w = _witnesses(rep, _names(doc))
    report = {
        "command": "check-rb",
        "ok": rep.ok,
        "identity_check": {"ok": rep.ok, "violations": w},
        "graph_closed": graph_check(a, m, op.matrix),
        "bracket_vanishes": bool(np.all(bracket == 0)),
        "equivariant": equivariant,
    }
    lines = [
        f"relative Rota-Baxter identity and equivariance: {'ok' if rep.ok else 'FAILED'}",
        *_witness_lines(w),
        f"graph is an involutive subalgebra: {report['graph_closed']}",
        f"[[T, T]] = 0: {report['bracket_vanishes']}",
    ]
    return Outcome(report, lines, OK if rep.ok else FAILED)


def _cohomology_lines(rep) -> list[str]:
    lines = [f"{rep.complex} cohomology ({rep.variant})"]
    for d in rep.degrees:
        lines.append(
            f"  degree {d.degree}: cochains {d.cochains}, cocycles {d.cocycles}, "
            f"coboundaries {d.coboundaries}, dim H = {d.cohomology}"
        )
    return lines


def _dendriform_for(doc):
    d = doc.dendriform()
    if d is not None:
        return d
    if doc.algebra is not None and "operator" in doc.raw:
        op = _rb_operator(doc, "dendriform")
        return induced_dendriform(op.algebra, op.bimodule, op.matrix)
    raise InputError("needs a 'dendriform' block or an 'operator' to induce one", doc.source)


def cmd_cohomology(args) -> Outcome:
    doc = load_document(args.file)
    if args.complex == "hochschild":
        if doc.algebra is None:
            raise InputError("missing key 'algebra'", doc.source)
        _require_structures(doc)
        rep = hochschild_cohomology(doc.algebra, doc.bimodule, args.max_degree, args.variant)
    elif args.complex == "rb":
        op = _rb_operator(doc, "cohomology")
        rep = rb_cohomology(op, args.max_degree, args.variant)
    else:
        rep = dend_cohomology(_dendriform_for(doc), args.max_degree, args.variant)
    report = {"command": "cohomology", **rep.as_dict()}
    return Outcome(report, _cohomology_lines(rep))


def cmd_gauge(args) -> Outcome:
    doc = load_document(args.file)
    op = _rb_operator(doc, "gauge")
    data = load_block(args.cocycle, "cocycle") if args.cocycle else None
    B = doc.cocycle(data)
    try:
        new = gauge_transform(op, B)
    except GaugeError as exc:
        report = {"command": "gauge", "ok": False, "reason": exc.reason, "certificate": exc.certificate}
        return Outcome(report, [f"gauge transformation failed: {exc.reason}", f"  certificate: {dumps(exc.certificate)}"], FAILED)
    check = check_relative_rb(op.algebra, op.bimodule, new.matrix)
    report = {"command": "gauge", "ok": check.ok, "operator": new.matrix, "rb_check": check.ok}
    lines = ["gauge-transformed operator:", *_matrix_lines(new.matrix), f"passes the Rota-Baxter check: {check.ok}"]
    return Outcome(report, lines, OK if check.ok else FAILED)


def _class_dict(res) -> dict:
    return {"cochain": res.cochain, "is_cocycle": res.is_cocycle, "class": res.coordinates, "trivial": res.trivial}


def cmd_deform(args) -> Outcome:
    doc = load_document(args.file)
    _require_structures(doc)
    data = load_block(args.series, "series") if args.series else None
    s = deform_mod.DeformationSeries(doc.algebra, doc.bimodule, tuple(doc.series(data)))
    names = _names(doc)
    if args.action == "check":
        rep = deform_mod.check_deformation(s)
        ok = rep.valid_through() == s.order
        w = _witnesses(rep, names)
        report = {"command": "deform check", "ok": ok, "order": s.order, "valid_through": rep.valid_through(),
                  "orders": rep.orders, "violations": w}
        lines = [f"series of order {s.order} is valid through order {rep.valid_through()}", *_witness_lines(w)]
        return Outcome(report, lines, OK if ok else FAILED)
    if args.action == "infinitesimal":
        res = deform_mod.infinitesimal(s)
        report = {"command": "deform infinitesimal", **_class_dict(res)}
        lines = [
            "infinitesimal T_1 is a d_T-cocycle",
            f"class in iH^1_T: [{', '.join(map(str, res.coordinates))}]" + (" (trivial)" if res.trivial else ""),
        ]
        return Outcome(report, lines)
    if args.action == "obstruct":
        res = deform_mod.obstruction(s)
        report = {"command": "deform obstruct", "order": s.order, **_class_dict(res)}
        lines = [
            f"obstruction at order {s.order + 1} is a d_T-cocycle",
            f"class in iH^2_T: [{', '.join(map(str, res.coordinates))}]" + (" (zero)" if res.trivial else ""),
        ]
        return Outcome(report, lines)
    ext = deform_mod.try_extend(s)
    report = {"command": "deform extend", "extended": ext.extended, "term": ext.term,
              "obstruction": _class_dict(ext.obstruction)}
    if ext.extended:
        lines = [f"extended to order {s.order + 1} with T_{s.order + 1} =", *_matrix_lines(ext.term)]
        return Outcome(report, lines)
    lines = [f"obstructed: class in iH^2_T is [{', '.join(map(str, ext.obstruction.coordinates))}]"]
    return Outcome(report, lines, FAILED)


def _free_algebra(args) -> FreeRotaBaxter:
    if args.base:
        doc = load_document(args.base)
        if doc.algebra is None:
            raise InputError("missing key 'algebra'", doc.source)
        return FreeRotaBaxter(StructureAlgebra.from_algebra(doc.algebra), args.max_depth)
    return FreeRotaBaxter(None, args.max_depth)


def cmd_freerb(args) -> Outcome:
    if args.action == "relations":
        if not args.file:
            raise InputError("freerb relations needs a document with a dendriform block or an operator")
        d = _dendriform_for(load_document(args.file))
        rel = enveloping_relations(d)
        gens = [format_element(g) for g in rel.generators]
        certs = [None if c is None else {str(k): v for k, v in sorted(c.items())} for c in rel.certificates]
        report = {"command": "freerb relations", "labels": rel.labels, "generators": gens,
                  "involution_images": [format_element(g) for g in rel.involution_images],
                  "certificates": certs, "stable": rel.stable}
        lines = [f"{lab}:  {g}" for lab, g in zip(rel.labels, gens)]
        if d.inv is not None:
            lines.append(f"involution-stable: {rel.stable}")
        return Outcome(report, lines, OK if rel.stable else FAILED)
    if args.expr is None:
        raise InputError(f"freerb {args.action} needs --expr")
    fr = _free_algebra(args)
    if args.action == "stats":
        w = parse_word(args.expr, fr)
        b, h, t, dep = word_stats(w)
        report = {"command": "freerb stats", "word": format_word(w), "breadth": b, "head": h, "tail": t, "depth": dep}
        return Outcome(report, [f"breadth {b}, head {h}, tail {t}, depth {dep}"])
    x = parse_expression(args.expr, fr)
    if args.action == "inv":
        x = fr.star(x)
    text = format_element(x)
    return Outcome({"command": f"freerb {args.action}", "result": text}, [text])


def cmd_theta(args) -> Outcome:
    doc = load_document(args.file)
    op = _rb_operator(doc, "theta")
    data = load_block(args.cochain, "cochain") if args.cochain else None
    P = doc.cochain(data)
    n = arity(P)
    if n < 1:
        raise InputError("theta needs a cochain of degree >= 1", "cochain.degree")
    if not is_involutive_rb_cochain(op, P):
        raise InputError("the cochain is not involutive", "cochain.coeffs")
    th = theta(P, op)
    d = induced_dendriform(op.algebra, op.bimodule, op.matrix)
    lhs = dend_differential(d, th)
    rhs = theta_chain_sign(n) * theta(rb_differential(op, P), op)
    chain_ok = bool(np.all(lhs == rhs))
    report = {"command": "theta", "arity": n + 1, "theta": th, "chain_identity": chain_ok,
              "chain_sign": theta_chain_sign(n)}
    lines = [f"Theta_{n}(P) in O({n + 1}); nonzero labels:"]
    for r in range(n + 1):
        if np.any(th[r] != 0):
            lines.append(f"  [{r + 1}]: " + ", ".join(f"{idx}={v}" for idx, v in np.ndenumerate(th[r]) if v != 0))
    lines.append(f"delta_pi(Theta P) = {theta_chain_sign(n):+d} Theta(d_T P): {chain_ok}")
    return Outcome(report, lines, OK if chain_ok else FAILED)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rbx", description="Involutive Rota-Baxter operators: checks, cohomology, deformations.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check algebra, bimodule and dendriform axioms")
    p.add_argument("file")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("check-rb", parents=[common], help="check the operator in FILE")
    p.add_argument("file")
    p.set_defaults(run=cmd_check_rb)

    p = sub.add_parser("cohomology", parents=[common], help="cohomology dimensions and representatives")
    p.add_argument("file")
    p.add_argument("--complex", choices=("hochschild", "rb", "dendriform"), default="hochschild")
    p.add_argument("--variant", choices=VARIANTS, default="ordinary")
    p.add_argument("--max-degree", type=int, default=None)
    p.set_defaults(run=cmd_cohomology)

    p = sub.add_parser("gauge", parents=[common], help="gauge transformation by an involutive 1-cocycle")
    p.add_argument("file")
    p.add_argument("--cocycle", help="file with the cocycle matrix (default: the 'cocycle' key of FILE)")
    p.set_defaults(run=cmd_gauge)

    p = sub.add_parser("deform", parents=[common], help="deformation series tools")
    p.add_argument("action", choices=("check", "infinitesimal", "obstruct", "extend"))
    p.add_argument("file")
    p.add_argument("--series", help="file with the series (default: the 'series' key of FILE)")
    p.set_defaults(run=cmd_deform)

    p = sub.add_parser("freerb", parents=[common], help="free Rota-Baxter words")
    p.add_argument("action", choices=("stats", "mul", "inv", "relations"))
    p.add_argument("file", nargs="?", help="document for 'relations'")
    p.add_argument("--expr")
    p.add_argument("--max-depth", type=int, default=DEFAULT_DEPTH_CAP)
    p.add_argument("--base", help="document whose algebra is the base (plain alphabet); default T(V)")
    p.set_defaults(run=cmd_freerb)

    p = sub.add_parser("theta", parents=[common], help="the map into the dendriform cochain complex")
    p.add_argument("file")
    p.add_argument("--cochain", help="file with the cochain (default: the 'cochain' key of FILE)")
    p.set_defaults(run=cmd_theta)
    return parser


_INPUT_ERRORS = (InputError, ShapeError, ParseError, WordError, InvalidDendriformError)


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    handler: Callable = args.run
    try:
        outcome = handler(args)
    except _INPUT_ERRORS as exc:
        print(f"rbx: input error: {exc}", file=err)
        return BAD_INPUT
    except CheckFailed as exc:
        outcome = exc.outcome
    except NotRotaBaxterError as exc:
        w = _witnesses(exc.report, {})
        outcome = Outcome({"command": args.command, "ok": False, "error": str(exc), "violations": w},
                          ["not an involutive relative Rota-Baxter operator", *_witness_lines(w)], FAILED)
    except (deform_mod.DeformationError, deform_mod.EquivalenceError) as exc:
        outcome = Outcome({"command": args.command, "ok": False, "error": str(exc)}, [f"failed: {exc}"], FAILED)
    except DepthCapExceeded as exc:
        outcome = Outcome(
            {"command": args.command, "ok": False, "error": str(exc),
             "pair": [format_word(exc.left), format_word(exc.right)], "depth": exc.depth, "cap": exc.cap},
            [f"depth cap exceeded: {exc}"],
            FAILED,
        )
    if args.json:
        print(dumps(outcome.report), file=out)
    else:
        for line in outcome.lines:
            print(line, file=out)
    return outcome.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

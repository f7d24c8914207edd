"""Command-line driver.

Exit codes: 0 when every requested check passes, 1 when a mathematical
check fails, 2 for usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from .contact import (
    Check,
    ContactStructure,
    StructureReport,
    classify,
    d_homothetic_deform,
    full_identity_report,
    verify_contact_condition,
    verify_structure,
)
from .document import dump_document, dumps, load_document
from .errors import ContactGeomError, NotContact
from .soliton import (
    VIOLATION,
    SolitonData,
    SolitonVerdict,
    TheoremReport,
    applicable_theorems,
    builtin_example,
    gradient_soliton_residual,
    soliton_residual,
    kappa_mu_branch_identities,
    verify_lemma_3,
)
from .symbolic import RationalFunction, parse_rational
from .tensor import TensorField

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(ContactGeomError):
    pass


# ---------------------------------------------------------------------------
# Rendering

def _render_residual(res: Any) -> Optional[str]:
    if res is None:
        return None
    if isinstance(res, TensorField):
        return res.pretty()
    return str(res)


def _check_json(c: Check) -> dict:
    return {"name": c.name, "holds": c.holds, "residual": _render_residual(c.residual)}


def _plain(value: Any) -> Any:
    if isinstance(value, (Fraction, RationalFunction)):
        return str(value)
    return value if isinstance(value, (bool, int, str, type(None))) else str(value)


def _theorem_json(r: TheoremReport) -> dict:
    return {
        "theorem": r.theorem,
        "overall": r.overall,
        "hypotheses": [_check_json(c) for c in r.hypotheses],
        "conclusions": [_check_json(c) for c in r.conclusions],
        "quantities": {k: _plain(v) for k, v in sorted(r.quantities.items())},
        "note": r.note,
    }


def _table(checks: Sequence[Check], indent: str = "") -> list[str]:
    lines = []
    for c in checks:
        lines.append(f"{indent}{'PASS' if c.holds else 'FAIL'}  {c.name}")
        if not c.holds and c.residual is not None:
            for row in _render_residual(c.residual).splitlines():
                lines.append(f"{indent}        {row}")
    return lines


def _verdict_line(v: SolitonVerdict) -> str:
    return "η-Ricci soliton: {}, {}, {}".format(
        "YES" if v.is_soliton else "NO",
        "Killing" if v.potential_is_killing else "non-Killing",
        "𝔏_Vφ=0" if v.lie_phi_vanishes else "𝔏_Vφ≠0",
    )


def _verdict_json(v: SolitonVerdict, d: SolitonData) -> dict:
    return {
        "is_soliton": v.is_soliton,
        "soliton_class": v.soliton_class,
        "potential_is_killing": v.potential_is_killing,
        "lie_phi_vanishes": v.lie_phi_vanishes,
        "lambda": str(d.lam),
        "mu": str(d.mu),
        "residual": None if v.is_soliton else v.residual.pretty(),
    }


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, payload: dict, human: list[str]) -> None:
        if self.fmt == "json":
            self.stream.write(json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n")
        else:
            self.stream.write("\n".join(human) + "\n")


# ---------------------------------------------------------------------------
# Commands

def _load(args) -> tuple[ContactStructure, Optional[SolitonData], str]:
    return load_document(args.file)


def _constants(args, d: Optional[SolitonData]) -> tuple[Fraction, Fraction]:
    lam = parse_rational(args.lam) if args.lam is not None else (d.lam if d else None)
    mu = parse_rational(args.mu) if args.mu is not None else (d.mu if d else None)
    if lam is None or mu is None:
        raise UsageError("λ and μ are needed: give --lambda and --mu or a soliton block in the document")
    return lam, mu


def cmd_verify(args, out: Output) -> int:
    s, _, name = _load(args)
    try:
        report = full_identity_report(s)
    except NotContact:
        report = verify_structure(s) + verify_contact_condition(s)
    out.emit(
        {"document": name, "ok": report.ok, "checks": [_check_json(c) for c in report.checks]},
        [f"{name}: {len(report.checks)} identities checked"] + _table(report.checks),
    )
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_curvature(args, out: Output) -> int:
    s, _, name = _load(args)
    geo = s.geometry
    nonzero = sum(1 for c in geo.connection.gamma.flat if not c.is_zero())
    out.emit(
        {
            "document": name,
            "christoffel_nonzero": nonzero,
            "ricci": [[str(geo.ricci[i, j]) for j in range(s.chart.dimension)] for i in range(s.chart.dimension)],
            "scalar_curvature": str(geo.scalar),
        },
        [
            f"{name}",
            f"Christoffel symbols: available, {nonzero} nonzero components",
            "Ricci tensor:",
            *("  " + line for line in geo.ricci.pretty().splitlines()),
            f"scalar curvature r = {geo.scalar}",
        ],
    )
    return EXIT_OK


def cmd_classify(args, out: Output) -> int:
    s, _, name = _load(args)
    try:
        result = classify(s)
    except NotContact as exc:
        out.emit({"document": name, "contact": False, "reason": str(exc)}, [f"{name}: NOT CONTACT", str(exc)])
        return EXIT_FAIL
    info = result.to_dict()
    human = [f"{name}"]
    for key in sorted(info):
        human.append(f"  {key}: {info[key]}")
    out.emit({"document": name, **info}, human)
    return EXIT_OK


def _vector_override(args, s: ContactStructure) -> Optional[TensorField]:
    if args.vector is None:
        return None
    parts = [p.strip() for p in args.vector.split(",")]
    if len(parts) != s.chart.dimension:
        raise UsageError(f"--vector needs {s.chart.dimension} comma-separated components")
    return TensorField.vector(s.chart, [s.chart.parse(p) for p in parts])


def cmd_soliton(args, out: Output) -> int:
    s, d, name = _load(args)
    lam, mu = _constants(args, d)
    v = _vector_override(args, s)
    if v is None:
        if d is None or d.vector is None:
            raise UsageError("no potential vector field: give --vector or a soliton.vector block")
        v = d.vector
    data = SolitonData(lam, mu, vector=v)
    verdict = soliton_residual(s, data)
    human = [f"{name}", _verdict_line(verdict), f"class: {verdict.soliton_class} (λ={lam}, μ={mu})"]
    if not verdict.is_soliton:
        human += ["residual 𝔏_Vg+2Ric+2λg+2μη⊗η:", *("  " + l for l in verdict.residual.pretty().splitlines())]
    out.emit({"document": name, **_verdict_json(verdict, data)}, human)
    return EXIT_OK if verdict.is_soliton else EXIT_FAIL


def cmd_gradient(args, out: Output) -> int:
    s, d, name = _load(args)
    lam, mu = _constants(args, d)
    f = s.chart.parse(args.potential)
    data = SolitonData(lam, mu, potential=f)
    verdict = gradient_soliton_residual(s, data)
    human = [
        f"{name}",
        f"gradient η-Ricci soliton: {'YES' if verdict.is_soliton else 'NO'} (f={f}, λ={lam}, μ={mu})",
        f"class: {verdict.soliton_class}",
    ]
    if not verdict.is_soliton:
        human += ["residual Hess f+Ric+λg+μη⊗η:", *("  " + l for l in verdict.residual.pretty().splitlines())]
    out.emit({"document": name, "potential": str(f), **_verdict_json(verdict, data)}, human)
    return EXIT_OK if verdict.is_soliton else EXIT_FAIL


def cmd_deform(args, out: Output) -> int:
    s, _, name = _load(args)
    t = parse_rational(args.t)
    if t == 0:
        raise UsageError("--t must be nonzero")
    deformed = d_homothetic_deform(s, t)
    report = verify_structure(deformed) + verify_contact_condition(deformed)
    new_name = f"{name} (D-homothetic t={t})"
    Path(args.out).write_text(dumps(dump_document(deformed, None, new_name)), encoding="utf-8")
    out.emit(
        {"document": new_name, "out": str(args.out), "t": str(t), "ok": report.ok,
         "checks": [_check_json(c) for c in report.checks]},
        [f"wrote {args.out}", *_table(report.checks)],
    )
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_theorems(args, out: Output) -> int:
    s, d, name = _load(args)
    if args.lam is not None or args.mu is not None:
        lam, mu = _constants(args, d)
        d = d.with_constants(lam, mu) if d is not None else None
    else:
        lam = mu = None
    reports = applicable_theorems(s, d)
    if d is None and lam is not None:
        reports.append(verify_lemma_3(s, lam, mu))
    branches = StructureReport.of(kappa_mu_branch_identities())
    payload = {
        "document": name,
        "theorems": [_theorem_json(r) for r in reports],
        "branch_identities": [_check_json(c) for c in branches.checks],
    }
    human = [f"{name}"]
    for r in reports:
        human.append(f"{r.theorem}: {r.overall}" + (f"  ({r.note})" if r.note else ""))
        human += _table(list(r.hypotheses), "  hyp  ")
        human += _table(list(r.conclusions), "  con  ")
    human.append("(κ,μ) alternative, scalar constraint:")
    human += _table(branches.checks, "  ")
    out.emit(payload, human)
    failed = any(r.overall == VIOLATION for r in reports) or not branches.ok
    return EXIT_FAIL if failed else EXIT_OK


def cmd_example(args, out: Output) -> int:
    eps = int(args.epsilon)
    if eps not in (1, -1):
        raise UsageError("--epsilon must be 1 or -1")
    lam, mu = parse_rational(args.lam), parse_rational(args.mu)
    s, d = builtin_example(eps, lam, mu)
    sign = "+1" if eps == 1 else "-1"
    text = dumps(dump_document(s, d, f"sasakian_r3 (epsilon={sign}, lambda={lam}, mu={mu})"))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        out.stream.write(f"wrote {args.out}\n")
    else:
        out.stream.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="contactgeom", description="Exact checks for contact pseudo-metric structures and η-Ricci solitons."
    )
    parser.add_argument("--format", choices=("human", "json"), default="human")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help: str, file: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        if file:
            p.add_argument("file", help="manifold document (JSON)")
        p.set_defaults(fn=fn)
        return p

    def constants(p: argparse.ArgumentParser) -> None:
        p.add_argument("--lambda", dest="lam", metavar="P/Q")
        p.add_argument("--mu", dest="mu", metavar="P/Q")

    add("verify", cmd_verify, "check every applicable structure identity")
    add("curvature", cmd_curvature, "print Ricci tensor and scalar curvature")
    add("classify", cmd_classify, "detect K-contact, Sasakian, η-Einstein, (κ,μ) and D-fixed")
    p = add("soliton", cmd_soliton, "check an η-Ricci soliton with a vector potential")
    constants(p)
    p.add_argument("--vector", help="comma-separated components of V")
    p = add("gradient-soliton", cmd_gradient, "check a gradient η-Ricci soliton")
    constants(p)
    p.add_argument("--potential", required=True, help="expression for f")
    p = add("deform", cmd_deform, "apply a D-homothetic deformation")
    p.add_argument("--t", required=True, metavar="P/Q")
    p.add_argument("--out", required=True)
    p = add("theorems", cmd_theorems, "run every applicable theorem check")
    constants(p)
    p = add("example", cmd_example, "emit the built-in three-dimensional example", file=False)
    p.add_argument("--epsilon", required=True, type=int, choices=(1, -1))
    p.add_argument("--lambda", dest="lam", required=True, metavar="P/Q")
    p.add_argument("--mu", dest="mu", required=True, metavar="P/Q")
    p.add_argument("--out")
    return parser


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args.format, stdout)
    try:
        return args.fn(args, out)
    except (ContactGeomError, OSError) as exc:
        axiom = getattr(exc, "axiom", None)
        stderr.write(f"error: {exc}" + (f" [{axiom}]" if axiom else "") + "\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

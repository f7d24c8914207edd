"""JSON manifold documents: loading with located diagnostics, and dumping."""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .contact import ContactStructure
from .errors import ParseError
from .soliton import SolitonData
from .symbolic import RationalFunction, parse_rational
from .tensor import Chart, TensorField

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def _require(doc: dict, key: str, kind: type | tuple[type, ...], path: str = "") -> Any:
    where = f"{path}.{key}" if path else key
    if key not in doc:
        raise ParseError("missing field", where)
    value = doc[key]
    if kind is int and isinstance(value, bool):
        raise ParseError("expected an integer", where)
    if not isinstance(value, kind):
        kinds = kind if isinstance(kind, tuple) else (kind,)
        expected = " or ".join(k.__name__ for k in kinds)
        raise ParseError(f"expected {expected}, got {type(value).__name__}", where)
    return value


def _expr(chart: Chart, text: Any, where: str) -> RationalFunction:
    if isinstance(text, int) and not isinstance(text, bool):
        return chart.constant(text)
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {type(text).__name__}", where)
    try:
        return chart.parse(text)
    except ParseError as exc:
        raise ParseError(exc.message, f"{where} ({exc.location})" if exc.location else where) from None


def _vector(chart: Chart, items: Any, where: str) -> list[RationalFunction]:
    n = chart.dimension
    if not isinstance(items, list) or len(items) != n:
        raise ParseError(f"expected a list of {n} expressions", where)
    return [_expr(chart, e, f"{where}[{i}]") for i, e in enumerate(items)]


def _matrix(chart: Chart, rows: Any, where: str) -> list[list[RationalFunction]]:
    n = chart.dimension
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"expected a {n}×{n} matrix", where)
    return [_vector(chart, row, f"{where}[{i}]") for i, row in enumerate(rows)]


def _rational(value: Any, where: str) -> Fraction:
    try:
        return parse_rational(value)
    except ParseError as exc:
        raise ParseError(exc.message, where) from None


def parse_document(doc: Any) -> tuple[ContactStructure, Optional[SolitonData], str]:
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object", "$")
    name = _require(doc, "name", str)
    dim = _require(doc, "dimension", int)
    coords = _require(doc, "coordinates", list)
    if len(coords) != dim:
        raise ParseError(f"{len(coords)} coordinates for dimension {dim}", "coordinates")
    try:
        chart = Chart(tuple(coords))
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc), "coordinates") from None
    eps = _require(doc, "epsilon", int)
    if eps not in (1, -1):
        raise ParseError("epsilon must be 1 or -1", "epsilon")
    metric = _matrix(chart, doc.get("metric"), "metric")
    phi = _matrix(chart, doc.get("phi"), "phi")
    xi = _vector(chart, doc.get("xi"), "xi")
    eta = _vector(chart, doc.get("eta"), "eta")
    s = ContactStructure(
        chart,
        TensorField(chart, (1, 1), phi),
        TensorField.vector(chart, xi),
        TensorField.covector(chart, eta),
        TensorField(chart, (0, 2), metric),
        eps,
    )
    soliton = None
    block = doc.get("soliton")
    if block is not None:
        if not isinstance(block, dict):
            raise ParseError("expected an object", "soliton")
        lam = _rational(_require(block, "lambda", (str, int), "soliton"), "soliton.lambda")
        mu = _rational(_require(block, "mu", (str, int), "soliton"), "soliton.mu")
        has_v, has_f = "vector" in block, "potential" in block
        if has_v == has_f:
            raise ParseError("give exactly one of 'vector' or 'potential'", "soliton")
        if has_v:
            v = TensorField.vector(chart, _vector(chart, block["vector"], "soliton.vector"))
            soliton = SolitonData(lam, mu, vector=v)
        else:
            f = _expr(chart, block["potential"], "soliton.potential")
            soliton = SolitonData(lam, mu, potential=f)
    return s, soliton, name


def load_manifold(path: str | Path) -> tuple[ContactStructure, Optional[SolitonData]]:
    s, d, _ = load_document(path)
    return s, d


def load_document(path: str | Path) -> tuple[ContactStructure, Optional[SolitonData], str]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(exc.strerror or str(exc), str(path)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}: line {exc.lineno} column {exc.colno}") from None
    return parse_document(doc)


def _fmt(f: RationalFunction) -> str:
    return str(f)


def dump_document(s: ContactStructure, soliton: Optional[SolitonData] = None, name: str = "manifold") -> dict:
    n = s.chart.dimension
    doc: dict[str, Any] = {
        "name": name,
        "dimension": n,
        "coordinates": list(s.chart.coordinates),
        "epsilon": s.epsilon,
        "metric": [[_fmt(s.g[i, j]) for j in range(n)] for i in range(n)],
        "xi": [_fmt(s.xi[i]) for i in range(n)],
        "eta": [_fmt(s.eta[i]) for i in range(n)],
        "phi": [[_fmt(s.phi[i, j]) for j in range(n)] for i in range(n)],
    }
    if soliton is not None:
        block: dict[str, Any] = {"lambda": str(soliton.lam), "mu": str(soliton.mu)}
        if soliton.vector is not None:
            block["vector"] = [_fmt(soliton.vector[i]) for i in range(n)]
        else:
            block["potential"] = _fmt(soliton.potential)
        doc["soliton"] = block
    return doc


_FLAT_LIST = re.compile(r"\[\s*((?:\"[^\"\n]*\",?\s*)+)\]")


def dumps(doc: dict) -> str:
    """Indented JSON with each list of expressions kept on one line."""
    text = json.dumps(doc, indent=2, ensure_ascii=False)
    text = _FLAT_LIST.sub(lambda m: "[" + ", ".join(s.strip().rstrip(",") for s in m.group(1).split("\n") if s.strip()) + "]", text)
    return text + "\n"

"""Manifest files: the JSON encoding of a frame manifold plus structure.

Schema version 1.  Chart mode stores the frame rows over the coordinate
partials, abstract mode stores the bracket records for i < j; phi and xi
travel together or not at all.  All expressions are strings in the
canonical renderer's syntax, so export -> ingest -> export is the
identity byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .catalog import CatalogEntry
from .contact import ContactStructure
from .expr import (Expr, ExprError, ExprParseError, KIND_COORDINATE,
                   KIND_PARAMETER, SymbolTable, parse)
from .frame import (FrameError, FrameManifold, MODE_ABSTRACT, MODE_CHART,
                    VectorField)

SCHEMA_VERSION = 1


class ManifestError(Exception):
    """Raised with the full list of ingest problems."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class IngestResult:
    name: str
    manifest: dict
    manifold: FrameManifold
    structure: ContactStructure | None


# ---------------------------------------------------------------------------
# export

def export_entry(entry: CatalogEntry) -> dict:
    m = entry.manifold
    doc: dict = {
        "schema_version": SCHEMA_VERSION,
        "name": entry.id,
        "dimension": m.dim,
        "mode": m.mode,
        "symbols": [{"name": s.name, "kind": s.kind} for s in m.symbols],
    }
    if m.mode == MODE_CHART:
        doc["frame"] = [[str(c) for c in row.components]
                        for row in m.chart_frame]
    else:
        doc["brackets"] = [
            {"i": i, "j": j,
             "components": [str(c) for c in m.bracket_basis(i, j).components]}
            for i in range(1, m.dim + 1) for j in range(i + 1, m.dim + 1)
            if not m.bracket_basis(i, j).is_zero()]
    doc["metric"] = [[str(m.metric_entry(i, j)) for j in range(1, m.dim + 1)]
                     for i in range(1, m.dim + 1)]
    if entry.structure is not None:
        doc["phi"] = [[str(c) for c in row.components]
                      for row in entry.structure.phi_rows]
        doc["xi"] = [str(c) for c in entry.structure.xi.components]
    return doc


def manifest_to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# ingest

_TOP_KEYS = {"schema_version", "name", "dimension", "mode", "symbols",
             "frame", "brackets", "metric", "phi", "xi"}


def _parse_expr(text, table: SymbolTable, path: str, errors: list[str]):
    if not isinstance(text, str):
        errors.append(f"{path}: expected an expression string, got "
                      f"{type(text).__name__}")
        return None
    try:
        return parse(text, table)
    except (ExprParseError, ExprError) as exc:
        errors.append(f"{path}: {exc}")
        return None


def _parse_matrix(rows, dim: int, table: SymbolTable, path: str,
                  errors: list[str]):
    if not isinstance(rows, list) or len(rows) != dim:
        errors.append(f"{path}: expected {dim} rows")
        return None
    out = []
    ok = True
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            errors.append(f"{path}[{r}]: expected {dim} entries")
            ok = False
            continue
        parsed = [_parse_expr(cell, table, f"{path}[{r}][{c}]", errors)
                  for c, cell in enumerate(row)]
        if any(p is None for p in parsed):
            ok = False
        out.append(parsed)
    return out if ok else None


def ingest_manifest(doc: dict, default_name: str = "manifest") -> IngestResult:
    """Validate a parsed manifest document and build the objects.

    Problems are collected exhaustively, each prefixed with the field
    path, and raised together as a ManifestError.
    """
    errors: list[str] = []
    if not isinstance(doc, dict):
        raise ManifestError(["manifest: expected a JSON object"])
    for key in doc:
        if key not in _TOP_KEYS:
            errors.append(f"{key}: unknown field")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        errors.append(f"schema_version: expected {SCHEMA_VERSION}, "
                      f"got {version!r}")
    name = doc.get("name", default_name)
    if not isinstance(name, str) or not name:
        errors.append("name: expected a non-empty string")
        name = default_name
    dim = doc.get("dimension")
    if not isinstance(dim, int) or dim < 3 or dim % 2 == 0:
        errors.append(f"dimension: expected an odd integer >= 3, got {dim!r}")
        raise ManifestError(errors)
    mode = doc.get("mode")
    if mode not in (MODE_ABSTRACT, MODE_CHART):
        errors.append(f"mode: expected '{MODE_ABSTRACT}' or '{MODE_CHART}', "
                      f"got {mode!r}")
        raise ManifestError(errors)

    table = SymbolTable()
    symbols = doc.get("symbols", [])
    if not isinstance(symbols, list):
        errors.append("symbols: expected a list")
        symbols = []
    for idx, rec in enumerate(symbols):
        if (not isinstance(rec, dict) or not isinstance(rec.get("name"), str)
                or rec.get("kind") not in (KIND_COORDINATE, KIND_PARAMETER)):
            errors.append(f"symbols[{idx}]: expected "
                          "{'name': str, 'kind': 'coordinate'|'parameter'}")
            continue
        try:
            table.add(rec["name"], rec["kind"])
        except ExprError as exc:
            errors.append(f"symbols[{idx}]: {exc}")

    metric = None
    if "metric" in doc:
        metric = _parse_matrix(doc["metric"], dim, table, "metric", errors)

    manifold = None
    if mode == MODE_CHART:
        if "brackets" in doc:
            errors.append("brackets: not allowed in chart mode")
        rows = _parse_matrix(doc.get("frame"), dim, table, "frame", errors)
        if rows is not None and not errors:
            try:
                manifold = FrameManifold.chart(
                    dim, table, tuple(tuple(r) for r in rows), metric=metric)
            except FrameError as exc:
                errors.append(f"frame: {exc}")
    else:
        if "frame" in doc:
            errors.append("frame: not allowed in abstract mode "
                          "(use 'brackets')")
        brackets = {}
        records = doc.get("brackets", [])
        if not isinstance(records, list):
            errors.append("brackets: expected a list")
            records = []
        for idx, rec in enumerate(records):
            path = f"brackets[{idx}]"
            if not isinstance(rec, dict):
                errors.append(f"{path}: expected an object")
                continue
            i, j = rec.get("i"), rec.get("j")
            if not (isinstance(i, int) and isinstance(j, int)
                    and 1 <= i < j <= dim):
                errors.append(f"{path}: expected indices 1 <= i < j <= {dim}")
                continue
            if (i, j) in brackets:
                errors.append(f"{path}: duplicate pair ({i},{j})")
                continue
            comps = rec.get("components")
            if not isinstance(comps, list) or len(comps) != dim:
                errors.append(f"{path}.components: expected {dim} entries")
                continue
            parsed = [_parse_expr(c, table, f"{path}.components[{k}]", errors)
                      for k, c in enumerate(comps)]
            if all(p is not None for p in parsed):
                brackets[(i, j)] = tuple(parsed)
        if not errors:
            try:
                manifold = FrameManifold.abstract(dim, table, brackets,
                                                  metric=metric)
            except FrameError as exc:
                errors.append(f"brackets: {exc}")

    structure = None
    has_phi, has_xi = "phi" in doc, "xi" in doc
    if has_phi != has_xi:
        errors.append("phi/xi: phi and xi must be given together")
    elif has_phi:
        phi_rows = _parse_matrix(doc["phi"], dim, table, "phi", errors)
        xi_raw = doc["xi"]
        xi = None
        if not isinstance(xi_raw, list) or len(xi_raw) != dim:
            errors.append(f"xi: expected {dim} entries")
        else:
            parsed = [_parse_expr(c, table, f"xi[{k}]", errors)
                      for k, c in enumerate(xi_raw)]
            if all(p is not None for p in parsed):
                xi = VectorField(tuple(parsed))
        if manifold is not None and phi_rows is not None and xi is not None:
            structure = ContactStructure(
                manifold,
                tuple(VectorField(tuple(r)) for r in phi_rows), xi)

    if errors:
        raise ManifestError(errors)
    assert manifold is not None
    return IngestResult(name=name, manifest=doc, manifold=manifold,
                        structure=structure)


def load_manifest(path: str) -> IngestResult:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ManifestError([f"{path}: {exc}"]) from None
    except json.JSONDecodeError as exc:
        raise ManifestError(
            [f"{path}: invalid JSON at line {exc.lineno}, "
             f"column {exc.colno}: {exc.msg}"]) from None
    return ingest_manifest(doc, default_name="manifest")


def entry_from_ingest(result: IngestResult) -> CatalogEntry:
    """Repackage ingested objects so reporting code sees one shape."""
    return CatalogEntry(id=result.name, title=result.name,
                        manifold=result.manifold,
                        structure=result.structure)


__all__ = [
    "SCHEMA_VERSION",
    "IngestResult",
    "ManifestError",
    "entry_from_ingest",
    "export_entry",
    "ingest_manifest",
    "load_manifest",
    "manifest_to_json",
]

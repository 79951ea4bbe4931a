"""Report assembly and rendering.

A report is a plain dict built in a fixed key order so the JSON encoding
is deterministic and golden-testable.  The text renderer prints the same
content as aligned tables; ANSI color is opt-in through the
CONTACT_TENSOR_COLOR environment variable (unset means plain).
"""

from __future__ import annotations

import json

from .catalog import CatalogEntry
from .classify import (ClassificationReport, KappaMuVerdict,
                       RecurrenceVerdict, SasakianVerdict, SymmetryVerdict,
                       check_3d_decomposition, classify_structure)
from .contact import ContactError, h_eigenstructure
from .curvature import (first_bianchi_residuals, koszul,
                        metric_compat_residuals, riemann,
                        riemann_symmetry_residuals, second_bianchi_residuals,
                        torsion_residuals)
from .manifest import export_entry

REPORT_SCHEMA_VERSION = 1


class ReportError(Exception):
    """Fatal data problem: the pipeline cannot run on this input."""


def _vf(v) -> list[str]:
    return [str(c) for c in v.components]


def _matrix(rows) -> list[list[str]]:
    return [[str(e) for e in row] for row in rows]


def _sasakian_dict(v: SasakianVerdict | None):
    if v is None:
        return None
    return {"ok": v.ok, "witness": list(v.witness) if v.witness else None}


def _symmetry_dict(v: SymmetryVerdict | None):
    if v is None:
        return None
    return {"ok": v.ok, "witness": list(v.witness) if v.witness else None}


def _kappa_mu_dict(v: KappaMuVerdict | None):
    if v is None:
        return None
    return {
        "status": v.status,
        "kappa": str(v.kappa) if v.kappa is not None else None,
        "mu": str(v.mu) if v.mu is not None else None,
        "relation": v.relation,
        "witness": list(v.witness) if v.witness else None,
        "witness_component": v.witness_component,
        "constant": v.constant_flag,
        "kappa_le_one": v.kappa_le_one,
    }


def _recurrence_dict(v: RecurrenceVerdict | None):
    if v is None:
        return None
    return {
        "status": v.status,
        "scope": v.scope,
        "A": _vf(v.A) if v.A is not None else None,
        "obstruction": v.obstruction,
        "obstruction_index": (list(v.obstruction_index)
                              if v.obstruction_index else None),
    }


def _classification_dict(c: ClassificationReport) -> dict:
    return {
        "contact_valid": c.contact_valid,
        "sasakian": _sasakian_dict(c.sasakian),
        "kappa_mu": _kappa_mu_dict(c.kappa_mu),
        "flat": c.flat,
        "constant_curvature": (str(c.constant_curvature)
                               if c.constant_curvature is not None else None),
        "locally_symmetric": _symmetry_dict(c.locally_symmetric),
        "phi_symmetric": _symmetry_dict(c.phi_symmetric),
        "locally_phi_symmetric": _symmetry_dict(c.locally_phi_symmetric),
        "phi_recurrent": _recurrence_dict(c.phi_recurrent),
        "locally_phi_recurrent": _recurrence_dict(c.locally_phi_recurrent),
    }


def build_report(entry: CatalogEntry) -> dict:
    """Full pipeline: brackets, structure tensors, connection, curvature,
    classification, self checks.  Raises ReportError when the frame data
    is degenerate (singular metric or chart matrix)."""
    m = entry.manifold
    issues = m.validate()
    fatal = [s for s in issues if "singular" in s]
    if fatal:
        raise ReportError("; ".join(fatal))
    diagnostics = list(issues)

    conn = koszul(m)
    curv = riemann(m, conn)
    classification = classify_structure(curv, entry.structure)
    diagnostics.extend(classification.diagnostics)

    structure_section = None
    if entry.structure is not None:
        s = entry.structure
        h = None
        try:
            h = s.compute_h()
        except ContactError as exc:
            diagnostics.append(f"h operator: {exc}")
        structure_section = {
            "eta": [str(c) for c in s.eta.components],
            "xi": _vf(s.xi),
            "phi": [_vf(row) for row in s.phi_rows],
        }
        if h is not None:
            structure_section["h"] = _matrix(h.matrix())
            try:
                eig = h_eigenstructure(h)
                structure_section["h_eigen"] = {
                    "lambda": str(eig.lam),
                    "d_plus": list(eig.d_plus),
                    "d_minus": list(eig.d_minus),
                    "d_zero": list(eig.d_zero),
                }
            except ContactError:
                structure_section["h_eigen"] = None

    pairs = [(i, j) for i in range(1, m.dim + 1)
             for j in range(i + 1, m.dim + 1)]
    self_check = {
        "torsion_free": not torsion_residuals(conn),
        "metric_compatible": not metric_compat_residuals(conn),
        "riemann_symmetries": not riemann_symmetry_residuals(curv),
        "first_bianchi": not first_bianchi_residuals(curv),
        "second_bianchi": not second_bianchi_residuals(curv),
        "reconstruction_3d": (check_3d_decomposition(curv)
                              if m.dim == 3 else None),
    }

    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "name": entry.id,
        "manifest": export_entry(entry),
        "brackets": [
            {"i": i, "j": j, "components": _vf(m.bracket_basis(i, j))}
            for i, j in pairs],
        "structure": structure_section,
        "connection": [
            {"i": i, "j": j, "components": _vf(conn.nabla_basis(i, j))}
            for i in range(1, m.dim + 1) for j in range(1, m.dim + 1)],
        "curvature": {
            "riemann": [
                {"i": i, "j": j, "k": k,
                 "components": _vf(curv.riemann(i, j, k))}
                for i, j in pairs for k in range(1, m.dim + 1)],
            "ricci": _matrix(curv.ricci),
            "ricci_operator": [_vf(q) for q in curv.ricci_operator],
            "scalar": str(curv.scalar),
            "nabla_riemann": [
                {"w": w, "i": i, "j": j, "k": k,
                 "components": _vf(curv.nabla_r(w, i, j, k))}
                for w in range(1, m.dim + 1)
                for i, j in pairs for k in range(1, m.dim + 1)],
        },
        "classification": _classification_dict(classification),
        "diagnostics": diagnostics,
        "self_check": self_check,
    }


def self_check_passed(report: dict) -> bool:
    return all(v is not False for v in report["self_check"].values())


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


# ---------------------------------------------------------------------------
# text rendering

_RESET = "\x1b[0m"
_BOLD = "\x1b[1m"
_DIM_ON = "\x1b[2m"


def _heading(text: str, color: bool) -> str:
    return f"{_BOLD}{text}{_RESET}" if color else text


def _fmt_vector(components: list[str], dim: int, basis: str = "e") -> str:
    parts = []
    for idx, comp in enumerate(components, start=1):
        if comp == "0":
            continue
        if comp == "1":
            parts.append(f"{basis}{idx}")
        elif comp == "-1":
            parts.append(f"-{basis}{idx}")
        else:
            coeff = comp if "+" not in comp[1:] and "-" not in comp[1:] \
                else f"({comp})"
            parts.append(f"{coeff}*{basis}{idx}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _verdict_line(label: str, value) -> str:
    return f"  {label:<24} {value}"


def render_text(report: dict, color: bool = False) -> str:
    lines: list[str] = []
    name = report["name"]
    manifest = report["manifest"]
    dim = manifest["dimension"]
    lines.append(_heading(f"{name}: {manifest['mode']} frame, "
                          f"dimension {dim}", color))
    symbols = ", ".join(f"{s['name']} ({s['kind']})"
                        for s in manifest["symbols"]) or "none"
    lines.append(f"  symbols: {symbols}")

    lines.append("")
    lines.append(_heading("brackets", color))
    for rec in report["brackets"]:
        vec = _fmt_vector(rec["components"], dim)
        lines.append(f"  [e{rec['i']},e{rec['j']}] = {vec}")

    if report["structure"] is not None:
        s = report["structure"]
        lines.append("")
        lines.append(_heading("structure", color))
        lines.append(f"  xi  = {_fmt_vector(s['xi'], dim)}")
        lines.append(f"  eta = {_fmt_vector(s['eta'], dim, basis='e^')}")
        for idx, row in enumerate(s["phi"], start=1):
            lines.append(f"  phi(e{idx}) = {_fmt_vector(row, dim)}")
        if "h" in s:
            for idx, row in enumerate(s["h"], start=1):
                lines.append(f"  h(e{idx}) = {_fmt_vector(row, dim)}")

    lines.append("")
    lines.append(_heading("connection (zero entries omitted)", color))
    shown = 0
    for rec in report["connection"]:
        if all(c == "0" for c in rec["components"]):
            continue
        vec = _fmt_vector(rec["components"], dim)
        lines.append(f"  nabla_e{rec['i']} e{rec['j']} = {vec}")
        shown += 1
    if not shown:
        lines.append("  all entries vanish")

    lines.append("")
    lines.append(_heading("curvature (zero entries omitted)", color))
    shown = 0
    for rec in report["curvature"]["riemann"]:
        if all(c == "0" for c in rec["components"]):
            continue
        vec = _fmt_vector(rec["components"], dim)
        lines.append(f"  R(e{rec['i']},e{rec['j']})e{rec['k']} = {vec}")
        shown += 1
    if not shown:
        lines.append("  all entries vanish")
    lines.append(f"  scalar curvature r = {report['curvature']['scalar']}")

    c = report["classification"]
    lines.append("")
    lines.append(_heading("classification", color))
    lines.append(_verdict_line("contact metric valid", c["contact_valid"]))
    if c["sasakian"] is not None:
        extra = ("" if c["sasakian"]["ok"]
                 else f"  (witness pair {tuple(c['sasakian']['witness'])})")
        lines.append(_verdict_line("sasakian", f"{c['sasakian']['ok']}{extra}"))
    if c["kappa_mu"] is not None:
        km = c["kappa_mu"]
        detail = km["status"]
        if km["kappa"] is not None:
            detail += f", kappa = {km['kappa']}"
        if km["mu"] is not None:
            detail += f", mu = {km['mu']}"
        if km["relation"] is not None:
            detail += f", relation {km['relation']}"
        if km["witness"] is not None:
            detail += (f", witness R(e{km['witness'][0]},e{km['witness'][1]})"
                       f"e{km['witness'][2]}"
                       if len(km["witness"]) == 3 else
                       f", witness {tuple(km['witness'])}")
        lines.append(_verdict_line("nullity (kappa, mu)", detail))
    lines.append(_verdict_line("flat", c["flat"]))
    lines.append(_verdict_line("constant curvature",
                               c["constant_curvature"]
                               if c["constant_curvature"] is not None
                               else "no"))
    lines.append(_verdict_line("locally symmetric",
                               c["locally_symmetric"]["ok"]))
    for label, key in (("phi-symmetric", "phi_symmetric"),
                       ("locally phi-symmetric", "locally_phi_symmetric")):
        if c[key] is not None:
            lines.append(_verdict_line(label, c[key]["ok"]))
    for label, key in (("phi-recurrent", "phi_recurrent"),
                       ("locally phi-recurrent", "locally_phi_recurrent")):
        if c[key] is not None:
            rec = c[key]
            detail = rec["status"]
            if rec["status"] == "not_recurrent" and rec["obstruction"]:
                detail += f"  ({rec['obstruction']})"
            if rec["A"] is not None:
                detail += f", A = {_fmt_vector(rec['A'], dim, basis='e^')}"
            lines.append(_verdict_line(label, detail))

    if report["diagnostics"]:
        lines.append("")
        lines.append(_heading("diagnostics", color))
        for d in report["diagnostics"]:
            lines.append(f"  - {d}")

    checks = report["self_check"]
    failed = [k for k, v in checks.items() if v is False]
    lines.append("")
    status = "ok" if not failed else "FAILED: " + ", ".join(failed)
    line = f"self-check: {status}"
    if color:
        line = (_DIM_ON + line + _RESET) if not failed else \
            ("\x1b[31m" + line + _RESET)
    lines.append(line)
    return "\n".join(lines) + "\n"


__all__ = [
    "REPORT_SCHEMA_VERSION",
    "ReportError",
    "build_report",
    "render_json",
    "render_text",
    "self_check_passed",
]

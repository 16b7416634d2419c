"""Action-spec documents, report documents, and catalog batch runs.

An action spec is a JSON object ``{"n": 2, "m": 6, "matrix": [[1, -1], [1, 0]],
"name": "hexagonal"}``. Reports are JSON objects carrying ``"schema": 1``;
serialization is key-ordered so identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .lattice_actions import ActionSpec, ActionValidationError, validate_action
from .oracles import Cell, ConsistencyReport, cross_check, delocalized_rank
from .rank_formulas import (
    MODE_ASSEMBLED,
    MODE_ORACLE,
    RankReport,
    assembled_rank,
    package_groups,
)

SCHEMA = 1
PROVENANCE_TAGS = ("derived-oracle", "derived-assembly", "trivial")
SPEC_KEYS = {"n", "m", "matrix", "name"}
# generator metadata written by ``generate`` and ignored on read
PASSIVE_KEYS = {"generator"}

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_MISMATCH = 3


class SpecSyntaxError(ValueError):
    """A document that is not a well-formed action spec or catalog."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecSyntaxError(exc.msg, exc.lineno, exc.colno) from None


def spec_from_obj(obj) -> ActionSpec:
    if not isinstance(obj, dict):
        raise SpecSyntaxError("action spec must be a JSON object")
    unknown = set(obj) - SPEC_KEYS - PASSIVE_KEYS
    if unknown:
        raise SpecSyntaxError(f"unknown field(s) {sorted(unknown)}")
    for key in ("n", "m", "matrix"):
        if key not in obj:
            raise SpecSyntaxError(f"missing field {key!r}")
    matrix = obj["matrix"]
    if not isinstance(matrix, list) or not all(isinstance(r, list) for r in matrix):
        raise SpecSyntaxError("matrix must be an array of integer arrays")
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise SpecSyntaxError("name must be a string")
    return validate_action(obj["n"], obj["m"], matrix, name=name)


def parse_spec(text: str) -> ActionSpec:
    """Parse and validate an action-spec document.

    Raises:
        SpecSyntaxError: malformed JSON (with line and column) or wrong fields.
        ActionValidationError: the datum parses but is not a valid action.
    """
    return spec_from_obj(_load_json(text))


def spec_to_obj(spec: ActionSpec) -> dict:
    obj = {"n": spec.n, "m": spec.m, "matrix": spec.A.to_rows()}
    if spec.name is not None:
        obj["name"] = spec.name
    return obj


def serialize_spec(spec: ActionSpec) -> str:
    return dumps(spec_to_obj(spec))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# reports


def report_to_obj(report: RankReport, alpha: int | None = None) -> dict:
    report = package_groups(report)
    terms = [t for t in report.breakdown if alpha is None or t.alpha == alpha]
    return {
        "mode": report.mode,
        "variant": report.variant,
        "prime": report.prime_used,
        "rank0": report.rank0,
        "rank1": report.rank1,
        "groups": report.groups,
        "provenance": report.provenance,
        "breakdown": [{"alpha": t.alpha, "term": t.label, "value": t.value} for t in terms],
        "flags": list(report.flags),
        "details": report.details,
    }


def rank_document(spec: ActionSpec, reports, alpha: int | None = None) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "rank-report",
        "spec": spec_to_obj(spec),
        "alpha": alpha,
        "reports": [report_to_obj(r, alpha) for r in reports],
    }


def _cell_obj(cell, ranks=None) -> dict:
    obj = {"mode": cell.mode, "prime": cell.prime, "variant": cell.variant, "label": cell.label}
    if ranks is not None:
        obj["rank0"], obj["rank1"] = ranks
        obj["groups"] = package_groups(RankReport(cell.mode, *ranks)).groups
    return obj


def consistency_document(spec: ActionSpec, report: ConsistencyReport) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "cross-check",
        "spec": spec_to_obj(spec),
        "verdict": report.verdict,
        "cells": [_cell_obj(c, v) for c, v in report.table.items()],
        "agreements": [[a.label, b.label] for a, b in report.agreements],
        "divergences": [
            {"first": d.first.label, "second": d.second.label, "delta0": d.delta0, "delta1": d.delta1}
            for d in report.divergences
        ],
        "skipped": [{"cell": c.label, "reason": r} for c, r in report.skipped.items()],
        "provenance": package_groups(RankReport(MODE_ORACLE, 0, 0)).provenance,
    }


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    spec: ActionSpec
    expected: tuple[int, int] | None = None
    provenance: str | None = None
    notes: str = ""


def load_catalog(text: str) -> list[CatalogEntry]:
    """Parse a catalog document; validation errors propagate per entry."""
    doc = _load_json(text)
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise SpecSyntaxError("catalog must be an object with an 'entries' array")
    if doc.get("schema", SCHEMA) != SCHEMA:
        raise SpecSyntaxError(f"unsupported catalog schema {doc.get('schema')!r}")
    entries = []
    seen = set()
    for raw in doc["entries"]:
        entries.append(_entry_from_obj(raw))
        if entries[-1].name in seen:
            raise SpecSyntaxError(f"duplicate catalog entry {entries[-1].name!r}")
        seen.add(entries[-1].name)
    return entries


def _entry_from_obj(raw) -> CatalogEntry:
    if not isinstance(raw, dict) or "name" not in raw or "spec" not in raw:
        raise SpecSyntaxError("catalog entry needs 'name' and 'spec'")
    spec_obj = dict(raw["spec"])
    spec_obj.setdefault("name", raw["name"])
    spec = spec_from_obj(spec_obj)
    expected = provenance = None
    if raw.get("expected") is not None:
        exp = raw["expected"]
        provenance = exp.get("provenance")
        if provenance not in PROVENANCE_TAGS:
            raise SpecSyntaxError(
                f"entry {raw['name']!r}: expected values need a provenance tag in {PROVENANCE_TAGS}"
            )
        expected = (exp["rank0"], exp["rank1"])
    return CatalogEntry(raw["name"], spec, expected, provenance, raw.get("notes", ""))


def bundled_catalog_text() -> str:
    return resources.files("zn_ktheory").joinpath("data/regression_catalog.json").read_text("utf-8")


def _run_entry(args) -> dict:
    raw, modes = args
    name = raw.get("name") if isinstance(raw, dict) else None
    try:
        entry = _entry_from_obj(raw)
    except (ActionValidationError, SpecSyntaxError) as exc:
        return {"name": name, "status": "invalid", "error": str(exc)}
    spec = entry.spec
    target = MODE_ASSEMBLED if entry.provenance == "derived-assembly" else MODE_ORACLE
    result = {"name": entry.name, "notes": entry.notes}
    if "all" in modes:
        report = cross_check(spec)
        cells = [_cell_obj(c, v) for c, v in report.table.items()]
        result["verdict"] = report.verdict
    else:
        cells = []
        if MODE_ORACLE in modes or target == MODE_ORACLE:
            cells.append(_cell_obj(Cell(MODE_ORACLE), delocalized_rank(spec).ranks))
        if MODE_ASSEMBLED in modes or target == MODE_ASSEMBLED:
            for p in spec.primes:
                cells.append(_cell_obj(Cell(MODE_ASSEMBLED, p), assembled_rank(spec, p).ranks))
    result["results"] = cells
    result["status"] = "ok"
    if entry.expected is not None:
        result["expected"] = {"rank0": entry.expected[0], "rank1": entry.expected[1],
                              "provenance": entry.provenance}
        bad = [o["label"] for o in cells
               if o["mode"] == target and (o["rank0"], o["rank1"]) != entry.expected]
        if bad:
            result["status"] = "mismatch"
            result["mismatched"] = bad
    return result


def run_batch(text: str, modes=(MODE_ORACLE,), strict: bool = False, jobs: int = 1) -> tuple[int, dict]:
    """Run every catalog entry and compare against its expected ranks.

    Returns ``(exit_status, report_document)``. Status is 2 if any entry
    fails validation, 3 if an expectation is missed and ``strict`` is set,
    0 otherwise (mismatches are then only recorded in the report).
    """
    doc = _load_json(text)
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise SpecSyntaxError("catalog must be an object with an 'entries' array")
    names = [e.get("name") for e in doc["entries"] if isinstance(e, dict)]
    if len(set(names)) != len(names):
        raise SpecSyntaxError("duplicate catalog entry names")
    work = [(raw, tuple(modes)) for raw in doc["entries"]]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_entry, work))
    else:
        results = [_run_entry(w) for w in work]
    summary = {
        "entries": len(results),
        "ok": sum(r["status"] == "ok" for r in results),
        "mismatch": sum(r["status"] == "mismatch" for r in results),
        "invalid": sum(r["status"] == "invalid" for r in results),
    }
    report = {"schema": SCHEMA, "kind": "catalog-run", "modes": list(modes),
              "strict": strict, "entries": results, "summary": summary}
    if summary["invalid"]:
        status = EXIT_VALIDATION
    elif summary["mismatch"] and strict:
        status = EXIT_MISMATCH
    else:
        status = EXIT_OK
    return status, report


def read_text(path: str) -> str:
    if path == "-":
        import sys
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")

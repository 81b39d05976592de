"""Family persistence and report emission.

Family JSON (format_version 1):

    {
      "format_version": 1,
      "universe": ["label", ...],
      "sets": [[idx, ...], ...],
      "meta": {"class": str, "params": {...}}
    }

Indices are sorted ascending within each set and sets appear in canonical
family order, so save -> load -> save is byte-exact.  Reports serialize
every scalar count or product as a decimal string (consumers with 53-bit
number types stay safe); index arrays stay plain integers; no floats are
ever emitted.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from typing import NamedTuple

from .bounds import Ratio, ThresholdVerdict
from .core import SetFamily, build_family
from .errors import ParseError
from .solver import (
    ProbeReport,
    PropertyReport,
    PropertyVerdict,
    SolveResult,
    VerificationReport,
)

logger = logging.getLogger("starlab")

FORMAT_VERSION = 1


class LoadedFamily(NamedTuple):
    family: SetFamily
    meta: dict
    dedup_count: int


def canonical_json_bytes(obj) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode("utf-8")


def family_to_dict(family: SetFamily, meta: dict | None = None) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "universe": list(family.ground.labels),
        "sets": [list(m.indices()) for m in family.members],
        "meta": meta if meta is not None else {"class": "custom", "params": {}},
    }


def family_to_json_bytes(family: SetFamily, meta: dict | None = None) -> bytes:
    return canonical_json_bytes(family_to_dict(family, meta))


def save_family(family: SetFamily, path: str, meta: dict | None = None) -> bytes:
    payload = family_to_json_bytes(family, meta)
    with open(path, "wb") as handle:
        handle.write(payload)
    return payload


def family_from_dict(data: object, source: str = "<memory>") -> LoadedFamily:
    if not isinstance(data, dict):
        raise ParseError(f"{source}: family JSON must be an object")
    version = data.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ParseError(f"{source}: unsupported format_version {version!r}")
    universe = data.get("universe")
    if not isinstance(universe, list) or not all(isinstance(x, str) for x in universe):
        raise ParseError(f"{source}: field 'universe' must be a list of strings")
    sets = data.get("sets")
    if not isinstance(sets, list):
        raise ParseError(f"{source}: field 'sets' must be a list of index lists")
    for pos, member in enumerate(sets):
        if not isinstance(member, list) or not all(
            isinstance(i, int) and not isinstance(i, bool) for i in member
        ):
            raise ParseError(f"{source}: sets[{pos}] must be a list of integers")
        for i in member:
            if not 0 <= i < len(universe):
                raise ParseError(
                    f"{source}: sets[{pos}] index {i} out of range for universe"
                    f" of {len(universe)}"
                )
    meta = data.get("meta", {"class": "custom", "params": {}})
    if not isinstance(meta, dict):
        raise ParseError(f"{source}: field 'meta' must be an object")
    family, dedup = build_family(universe, sets)
    if dedup:
        logger.warning("%s: %d duplicate set(s) collapsed on load", source, dedup)
    return LoadedFamily(family, meta, dedup)


def load_family(path: str) -> LoadedFamily:
    try:
        with open(path, "rb") as handle:
            raw = handle.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        data = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 text") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return family_from_dict(data, source=path)


def family_roundtrip(path: str) -> SetFamily:
    """Load a family and prove the canonical round trip on the way.

    Re-serializing the loaded family and parsing it again must reproduce
    the same family; the canonical bytes are stable under re-save.
    """
    loaded = load_family(path)
    payload = family_to_json_bytes(loaded.family, loaded.meta)
    again = family_from_dict(json.loads(payload.decode("utf-8")), source=f"{path} (resave)")
    if again.family != loaded.family:
        raise ParseError(f"{path}: canonical round trip failed")
    return loaded.family


# --- report dictionaries -------------------------------------------------

def ratio_dict(ratio: Ratio | None) -> dict | None:
    if ratio is None:
        return None
    if ratio.kind != "finite":
        return {"kind": ratio.kind}
    return {
        "kind": "finite",
        "numerator": str(ratio.numerator),
        "denominator": str(ratio.denominator),
    }


def threshold_dict(verdict: ThresholdVerdict) -> dict:
    return {
        "c": str(verdict.c_value),
        "l_t": str(verdict.l_t),
        "l_t1": str(verdict.l_t1),
        "holds": verdict.holds,
    }


def solve_result_dict(result: SolveResult) -> dict:
    return {
        "best_product": str(result.best_product),
        "witnesses": [[list(part) for part in witness] for witness in result.witnesses],
        "witness_total": str(result.witness_total),
        "optimal": result.optimal,
        "stats": {
            "nodes_explored": str(result.nodes_explored),
            "elapsed_ms": str(result.elapsed_ms),
        },
    }


def _verdict_dict(verdict: PropertyVerdict) -> dict:
    return {
        "holds": verdict.holds,
        "witness_t_set": list(verdict.witness_t_set)
        if verdict.witness_t_set is not None
        else None,
        "counterexample": [list(part) for part in verdict.counterexample]
        if verdict.counterexample is not None
        else None,
        "note": verdict.note,
    }


def property_report_dict(report: PropertyReport) -> dict:
    return {
        "t": str(report.t),
        "family_count": str(report.family_count),
        "l_values": [str(l) for l in report.l_values],
        "star_product": str(report.star_product),
        "best_product": str(report.best_product),
        "properties": {
            "cross_star": _verdict_dict(report.cross_star),
            "strict": _verdict_dict(report.strict),
            "strong": _verdict_dict(report.strong),
            "extrastrong": _verdict_dict(report.extrastrong),
        },
        "inconclusive": report.inconclusive,
        "solve": solve_result_dict(report.solve),
    }


def verification_report_dict(report: VerificationReport) -> dict:
    return {
        "premise_left": threshold_dict(report.premise_left),
        "premise_right": threshold_dict(report.premise_right),
        "bound": str(report.bound),
        "best_product": str(report.best_product)
        if report.best_product is not None
        else None,
        "bound_ok": report.bound_ok,
        "uniqueness_ok": report.uniqueness_ok,
        "status": report.status,
        "counterexample": [list(part) for part in report.counterexample]
        if report.counterexample is not None
        else None,
        "degenerate": report.degenerate,
        "note": report.note,
        "solve": solve_result_dict(report.solve) if report.solve is not None else None,
    }


def probe_report_dict(report: ProbeReport) -> dict:
    return {
        "r": str(report.r),
        "s": str(report.s),
        "t": str(report.t),
        "c": str(report.c_value),
        "instances": [
            {
                "label": row.label,
                "ratio_left": ratio_dict(row.ratio_left),
                "ratio_right": ratio_dict(row.ratio_right),
                "premise_met": row.premise_met,
                "best_product": str(row.best_product),
                "star_bound": str(row.star_bound),
                "bound_holds": row.bound_holds,
            }
            for row in report.instances
        ],
        "largest_failing_ratio": ratio_dict(report.largest_failing_ratio),
        "smallest_holding_ratio": ratio_dict(report.smallest_holding_ratio),
        "true_violations": str(report.true_violations),
        "note": report.note,
    }


# --- emission ------------------------------------------------------------

def _csv_bytes(header: list[str], rows: list[list[str]]) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue().encode("utf-8")


def _ratio_cell(entry: dict | None) -> str:
    if entry is None:
        return ""
    if entry["kind"] != "finite":
        return entry["kind"]
    return f"{entry['numerator']}/{entry['denominator']}"


def report_to_csv(report: dict) -> bytes:
    """Stable tabular projection of a report; columns documented in README."""
    kind = report.get("kind")
    if kind == "solve":
        header = ["t", "family_sizes", "best_product", "optimal", "witness_total",
                  "nodes_explored", "elapsed_ms"]
        rows = [[
            report["t"],
            "|".join(report["family_sizes"]),
            report["best_product"],
            str(report["optimal"]).lower(),
            report["witness_total"],
            report["stats"]["nodes_explored"],
            report["stats"]["elapsed_ms"],
        ]]
        return _csv_bytes(header, rows)
    if kind == "stars":
        header = ["t", "l_value", "witness_count"]
        rows = [[report["t"], report["l_value"], report["witness_count"]]]
        return _csv_bytes(header, rows)
    if kind == "bounds":
        header = ["r", "s", "t", "c", "l_t", "l_t1", "ratio", "holds"]
        rows = [[report["r"], report["s"], report["t"], report["c"], report["l_t"],
                 report["l_t1"], _ratio_cell(report["ratio"]),
                 str(report["holds"]).lower()]]
        return _csv_bytes(header, rows)
    if kind == "classify":
        props = report["properties"]
        header = ["t", "family_count", "star_product", "best_product",
                  "cross_star", "strict", "strong", "extrastrong"]
        rows = [[report["t"], report["family_count"], report["star_product"],
                 report["best_product"]]
                + [str(props[name]["holds"]).lower()
                   for name in ("cross_star", "strict", "strong", "extrastrong")]]
        return _csv_bytes(header, rows)
    if kind == "verify":
        header = ["r", "s", "t", "status", "bound", "best_product", "bound_ok",
                  "uniqueness_ok", "premise_left_holds", "premise_right_holds"]
        rows = [[report["r"], report["s"], report["t"], report["status"],
                 report["bound"], report["best_product"] or "",
                 str(report["bound_ok"]).lower(), str(report["uniqueness_ok"]).lower(),
                 str(report["premise_left"]["holds"]).lower(),
                 str(report["premise_right"]["holds"]).lower()]]
        return _csv_bytes(header, rows)
    if kind == "probe":
        header = ["label", "ratio_left", "ratio_right", "premise_met",
                  "best_product", "star_bound", "bound_holds"]
        rows = [[row["label"], _ratio_cell(row["ratio_left"]),
                 _ratio_cell(row["ratio_right"]), str(row["premise_met"]).lower(),
                 row["best_product"], row["star_bound"],
                 str(row["bound_holds"]).lower()]
                for row in report["instances"]]
        return _csv_bytes(header, rows)
    raise ParseError(f"no CSV projection for report kind {kind!r}")


def emit_report(report: dict, fmt: str = "json", path: str | None = None) -> bytes:
    """Serialize a report deterministically and optionally write it out."""
    if fmt == "json":
        payload = canonical_json_bytes(report)
    elif fmt == "csv":
        payload = report_to_csv(report)
    else:
        raise ParseError(f"unknown output format {fmt!r}")
    if path is not None:
        with open(path, "wb") as handle:
            handle.write(payload)
    return payload

"""Render eval and probe reports as JSON, CSV or markdown tables."""
import csv
import io
import json
from typing import Any, Dict, List, Mapping, Optional, Sequence

from .constants import PROBE_CLASSES, REASONS, SLICES

FORMATS = ["json", "csv", "md"]


def _as_dict(report: Any) -> Dict[str, Any]:
    data = report.to_dict() if hasattr(report, "to_dict") else dict(report)
    data.pop("meta", None)
    return data


def is_probe_report(report: Mapping[str, Any]) -> bool:
    return "emission_rate" in report


def _number(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.4f}"


def _delta(value: Optional[float], base: Optional[float]) -> str:
    if value is None or base is None:
        return "n/a"
    return f"{value - base:+.4f}"


def _md_table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> List[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(str(cell) for cell in row) + " |" for row in rows]
    return lines


def _scopes(report: Mapping[str, Any]) -> List[tuple]:
    scopes = [("overall", report.get("n"), report.get("em"), report.get("mr"))]
    for name in SLICES:
        metrics = report.get("per_slice", {}).get(name, {})
        scopes.append((name, metrics.get("n", 0), metrics.get("em"), metrics.get("mr")))
    return scopes


def _eval_markdown(report, base, variant, base_name) -> str:
    if base is not None:
        header = ["Variant", "EM", "MR", "ΔEM", "ΔMR"]
        rows = [
            [base_name, _number(base["em"]), _number(base["mr"]), "", ""],
            [
                variant,
                _number(report["em"]),
                _number(report["mr"]),
                _delta(report["em"], base["em"]),
                _delta(report["mr"], base["mr"]),
            ],
        ]
    else:
        header = ["Variant", "EM", "MR"]
        rows = [[variant, _number(report["em"]), _number(report["mr"])]]
    lines = _md_table(header, rows)

    lines += ["", f"Slices ({variant})", ""]
    lines += _md_table(
        ["Slice", "N", "EM", "MR"],
        [[name, n, _number(em), _number(mr)] for name, n, em, mr in _scopes(report)[1:]],
    )

    counts = report.get("reason_counts", {})
    lines += ["", "Alias reasons", ""]
    lines += _md_table(["Reason", "Count"], [[reason, counts.get(reason, 0)] for reason in REASONS])
    return "\n".join(lines) + "\n"


def _probe_row(report: Mapping[str, Any], name: str) -> List[Any]:
    counts = report.get("counts", {})
    return (
        [name]
        + [counts.get(key, 0) for key in PROBE_CLASSES]
        + [_number(report["emission_rate"]), _number(report["old_em"]), _number(report["old_mr"])]
    )


def _probe_markdown(report, base, variant, base_name) -> str:
    header = ["Variant"] + PROBE_CLASSES + ["Emission rate", "Old EM", "Old MR"]
    rows = []
    if base is not None:
        rows.append(_probe_row(base, base_name))
    rows.append(_probe_row(report, variant))
    lines = _md_table(header, rows)
    if base is not None:
        lines += [
            "",
            f"Δ emission rate: {_delta(report['emission_rate'], base['emission_rate'])}",
        ]
    return "\n".join(lines) + "\n"


def _eval_csv(writer, report, base, variant, base_name):
    writer.writerow(["variant", "scope", "n", "em", "mr", "delta_em", "delta_mr"])
    reports = [(base_name, base, None)] if base is not None else []
    reports.append((variant, report, base))
    for name, data, reference in reports:
        reference_scopes = {scope[0]: scope for scope in _scopes(reference)} if reference else {}
        for scope, n, em, mr in _scopes(data):
            ref = reference_scopes.get(scope)
            writer.writerow([
                name,
                scope,
                n,
                _number(em),
                _number(mr),
                _delta(em, ref[2]) if ref else "",
                _delta(mr, ref[3]) if ref else "",
            ])


def _probe_csv(writer, report, base, variant, base_name):
    writer.writerow(["variant"] + PROBE_CLASSES + ["total", "emission_rate", "old_em", "old_mr"])
    reports = [(base_name, base)] if base is not None else []
    reports.append((variant, report))
    for name, data in reports:
        counts = data.get("counts", {})
        writer.writerow(
            [name]
            + [counts.get(key, 0) for key in PROBE_CLASSES]
            + [data.get("total", 0), _number(data["emission_rate"]), _number(data["old_em"]), _number(data["old_mr"])]
        )


def render_report(
    report: Any,
    fmt: str = "json",
    base: Optional[Any] = None,
    variant: str = "variant",
    base_name: str = "base",
) -> str:
    """Render a report, with Δ columns against base when given."""
    data = _as_dict(report)
    base_data = _as_dict(base) if base is not None else None
    probe = is_probe_report(data)
    if base_data is not None and is_probe_report(base_data) != probe:
        raise ValueError("base report and report are of different kinds")

    if fmt == "json":
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"

    if fmt == "md":
        render = _probe_markdown if probe else _eval_markdown
        return render(data, base_data, variant, base_name)

    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\r\n")
        (_probe_csv if probe else _eval_csv)(writer, data, base_data, variant, base_name)
        return buffer.getvalue()

    raise ValueError(f"unknown report format {fmt!r}")

"""Batch report files: a human-readable table and a machine-readable JSON
document, both strictly ordered by (row, col, spec index). Verdict content
is identical across reruns with identical inputs; timing fields are the
only exempt part.
"""
from __future__ import annotations

import json
from pathlib import Path

from .runner import BatchReport


def report_to_obj(report: BatchReport) -> dict:
    return {
        "format": "fsmcheck-batch-report",
        "version": 1,
        "n_axes": report.n_axes,
        "bound": report.bound,
        "workers": report.workers,
        "window": list(report.window),
        "total_elapsed": report.total_elapsed,
        "summary": {
            "tasks": report.task_counts(),
            "units": report.unit_counts(),
        },
        "tasks": [
            {
                "row": t.row,
                "col": t.col,
                "scenario": t.scenario,
                "model_id": t.model_id,
                "target": t.target,
                "fatal": t.fatal,
                "verdict": t.verdict,
                "wall_time": t.wall_time,
                "specs": [
                    {
                        "name": s.name,
                        "verdict": s.verdict,
                        "violation_step": s.violation_step,
                        "trace": s.trace_path,
                        "detail": s.detail,
                        "elapsed": s.elapsed,
                    }
                    for s in t.specs
                ],
            }
            for t in report.tasks
        ],
    }


def format_report_text(report: BatchReport) -> str:
    lines = []
    lines.append(f"batch report: {len(report.tasks)} tasks over {report.n_axes} axes, "
                 f"bound {report.bound}, window [{report.window[0]}, {report.window[1]}], "
                 f"{report.workers} worker(s)")
    lines.append("")
    for t in report.tasks:
        combo = t.model_id
        target = t.target if t.target is not None else "FATAL"
        lines.append(f"[{t.verdict:12s}] {combo}  (row {t.row}, col {t.col}, "
                     f"target {target}, {t.wall_time:.2f}s)")
        for s in t.specs:
            extra = ""
            if s.verdict == "VIOLATED":
                extra = f" at step {s.violation_step}, trace {s.trace_path}"
            elif s.detail:
                extra = f" ({s.detail})"
            lines.append(f"    {s.verdict:12s} {s.name}{extra}")
    lines.append("")
    tc = report.task_counts()
    uc = report.unit_counts()
    lines.append("summary (tasks): " + "  ".join(f"{k}={v}" for k, v in tc.items()))
    lines.append("summary (units): " + "  ".join(f"{k}={v}" for k, v in uc.items()))
    lines.append(f"total elapsed: {report.total_elapsed:.2f}s")
    return "\n".join(lines) + "\n"


def write_report(report: BatchReport, out_dir) -> dict[str, Path]:
    """Write report.txt and report.json under out_dir; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    txt = out / "report.txt"
    js = out / "report.json"
    try:
        txt.write_text(format_report_text(report))
        js.write_text(json.dumps(report_to_obj(report), indent=2, sort_keys=True) + "\n")
    except OSError as err:
        raise OSError(f"cannot write report under {out}: {err}")
    return {"text": txt, "json": js}

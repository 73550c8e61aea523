"""Parallel batch execution.

The unit of parallelism is one (combination, spec) pair. A coordinator
instantiates the per-combination models, hands units to W workers, and
merges results in deterministic (row, col, spec) order, so report content
is a pure function of the inputs and never of worker scheduling.
Counterexample traces are filed by the coordinator, one directory per
combination.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..checker import (
    CheckTask, Counterexample, ModelError, NoCounterexampleWithinBound,
    Timeout, check_bounded, replay_counterexample,
)
from ..lang import parse_model
from ..ltl import PrefixVerdict, parse_ltl
from ..semantics import elaborate
from ..semantics.traceio import format_value
from .inject import instantiate_model
from .plan import BatchPlan, PlannedTask
from .specs import SpecCatalog

VERDICTS = ("PASS", "VIOLATED", "INCONCLUSIVE", "TIMEOUT", "ERROR")
_SEVERITY = {v: i for i, v in enumerate(("PASS", "INCONCLUSIVE", "VIOLATED", "TIMEOUT", "ERROR"))}


@dataclass(frozen=True)
class SpecResult:
    name: str
    verdict: str
    violation_step: Optional[int] = None
    trace_path: Optional[str] = None
    detail: str = ""
    elapsed: float = 0.0


@dataclass(frozen=True)
class TaskResult:
    row: int
    col: int
    scenario: str
    model_id: str
    target: Optional[str]
    fatal: bool
    specs: tuple[SpecResult, ...]
    wall_time: float

    @property
    def verdict(self) -> str:
        """Aggregate task verdict: the most severe of its spec verdicts."""
        if not self.specs:
            return "PASS"
        return max((s.verdict for s in self.specs), key=_SEVERITY.get)


@dataclass
class BatchReport:
    tasks: list[TaskResult]
    n_axes: int
    bound: int
    workers: int
    window: tuple[int, int]
    total_elapsed: float = 0.0

    def task_counts(self) -> dict[str, int]:
        counts = {v: 0 for v in VERDICTS}
        for t in self.tasks:
            counts[t.verdict] += 1
        return counts

    def unit_counts(self) -> dict[str, int]:
        counts = {v: 0 for v in VERDICTS}
        for t in self.tasks:
            for s in t.specs:
                counts[s.verdict] += 1
        return counts

    def exit_code(self) -> int:
        """0 = all PASS; 1 = a violation was found; 2 = errors, timeouts, or
        inconclusive results (nothing to certify)."""
        units = self.unit_counts()
        if units["ERROR"] or units["TIMEOUT"]:
            return 2
        if units["VIOLATED"]:
            return 1
        if units["INCONCLUSIVE"]:
            return 2
        return 0


# --- worker side -------------------------------------------------------------

_TS_CACHE: dict[int, object] = {}


def _system_for(source: str):
    key = hash(source)
    ts = _TS_CACHE.get(key)
    if ts is None:
        ts = elaborate(parse_model(source))
        if len(_TS_CACHE) > 8:
            _TS_CACHE.clear()
        _TS_CACHE[key] = ts
    return ts


def run_unit(payload: dict) -> dict:
    """Check one (combination, spec) unit; never raises."""
    started = time.perf_counter()
    out = {
        "row": payload["row"],
        "col": payload["col"],
        "spec_index": payload["spec_index"],
        "spec_name": payload["spec_name"],
        "verdict": "ERROR",
        "violation_step": None,
        "detail": "",
        "trace": None,
    }
    try:
        ts = _system_for(payload["source"])
        formula = parse_ltl(payload["formula"], ts)
        verdict = check_bounded(
            CheckTask(ts, formula, bound_k=payload["bound"], timeout=payload["timeout"])
        )
        if isinstance(verdict, Counterexample):
            replayed = replay_counterexample(ts, verdict.trace, formula)
            if replayed is not PrefixVerdict.VIOLATED:
                out["detail"] = f"counterexample failed replay: {replayed.value}"
            else:
                out["verdict"] = "VIOLATED"
                out["violation_step"] = verdict.violation_step
                out["trace"] = _trace_payload(verdict.trace)
        elif isinstance(verdict, NoCounterexampleWithinBound):
            out["verdict"] = "PASS" if verdict.all_paths_decided else "INCONCLUSIVE"
        elif isinstance(verdict, Timeout):
            out["verdict"] = "TIMEOUT"
            out["detail"] = f"budget exhausted after {verdict.elapsed:.2f}s"
        elif isinstance(verdict, ModelError):
            out["detail"] = f"model error at step {verdict.step}: {verdict.detail}"
    except Exception as err:  # worker crash -> ERROR verdict, batch continues
        out["detail"] = f"{type(err).__name__}: {err}"
    out["elapsed"] = time.perf_counter() - started
    return out


def _trace_payload(trace) -> list[dict]:
    sys = trace.states[0].system
    names = sorted(sys.index)
    return [{n: s[n] for n in names} for s in trace.states]


# --- coordinator --------------------------------------------------------------


def run_batch(
    plan: BatchPlan,
    template: str,
    spec_catalog: SpecCatalog,
    *,
    out_dir,
    window: tuple[int, int] = (15, 40),
    workers: int = 1,
    timeout: Optional[float] = None,
    bound: Optional[int] = None,
) -> BatchReport:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    k = bound if bound is not None else plan.bound

    payloads = []
    task_index: dict[tuple[int, int], PlannedTask] = {}
    for task in plan.tasks:
        task_index[(task.row, task.col)] = task
        instance = instantiate_model(template, task, window, spec_catalog)
        for spec_index, (name, formula) in enumerate(instance.specs):
            payloads.append({
                "row": task.row,
                "col": task.col,
                "spec_index": spec_index,
                "spec_name": name,
                "source": instance.source,
                "formula": formula,
                "bound": k,
                "timeout": timeout,
            })

    if workers <= 1:
        results = [run_unit(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_unit, p) for p in payloads]
            results = []
            for payload, fut in zip(payloads, futures):
                try:
                    results.append(fut.result())
                except Exception as err:  # hard worker crash
                    results.append({
                        "row": payload["row"], "col": payload["col"],
                        "spec_index": payload["spec_index"],
                        "spec_name": payload["spec_name"],
                        "verdict": "ERROR", "violation_step": None,
                        "detail": f"worker crashed: {type(err).__name__}: {err}",
                        "trace": None, "elapsed": 0.0,
                    })

    results.sort(key=lambda r: (r["row"], r["col"], r["spec_index"]))
    grouped: dict[tuple[int, int], list[dict]] = {}
    for r in results:
        grouped.setdefault((r["row"], r["col"]), []).append(r)

    task_results = []
    for task in sorted(plan.tasks, key=lambda t: t.sort_key):
        units = grouped.get((task.row, task.col), [])
        spec_results = []
        for u in units:
            trace_path = None
            if u["verdict"] == "VIOLATED" and u["trace"] is not None:
                trace_path = _file_trace(out, task.model_id, u)
            spec_results.append(SpecResult(
                name=u["spec_name"],
                verdict=u["verdict"],
                violation_step=u["violation_step"],
                trace_path=trace_path,
                detail=u["detail"],
                elapsed=u["elapsed"],
            ))
        task_results.append(TaskResult(
            row=task.row, col=task.col, scenario=task.scenario,
            model_id=task.model_id, target=task.target, fatal=task.fatal,
            specs=tuple(spec_results),
            wall_time=sum(s.elapsed for s in spec_results),
        ))

    report = BatchReport(
        tasks=task_results, n_axes=plan.n_axes, bound=k, workers=workers,
        window=window, total_elapsed=time.perf_counter() - started,
    )
    return report


def _file_trace(out: Path, model_id: str, unit: dict) -> str:
    combo_dir = out / model_id
    combo_dir.mkdir(parents=True, exist_ok=True)
    path = combo_dir / f"{unit['spec_name']}.trace"
    lines = []
    for i, values in enumerate(unit["trace"]):
        lines.append(f"step {i}")
        for name in sorted(values):
            lines.append(f"{name} = {format_value(values[name])}")
        lines.append("")
    path.write_text("\n".join(lines))
    return str(path.relative_to(out))

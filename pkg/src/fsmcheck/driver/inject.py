"""Model enrichment: turn the template into a per-combination instance.

The template pins every failure axis FALSE inside a marked region; the
instance replaces the pins of the injected axes with blocks realizing the
occurrence assumptions:

* a failure occurs exactly once per run (a monotone has-occurred latch
  blocks re-arming) and is forced to start within its window;
* the start step is nondeterministic within [start_min, start_max] and the
  duration nondeterministic, possibly to the end of the run;
* for ordered pairs the first failure starts strictly before the second
  (windows are staggered by one step so both always fit), which realizes
  the start_A <= start_B ordering; sequential and overlapping activity are
  both reachable, including no overlap at all.

Every instance is parsed and validated before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..lang import parse_model, validate_model
from .plan import PlannedTask
from .specs import SpecCatalog

MARK_BEGIN = "-- #injection:begin"
MARK_END = "-- #injection:end"


class InstantiationError(Exception):
    pass


@dataclass(frozen=True)
class ModelInstance:
    task: PlannedTask
    source: str
    specs: tuple[tuple[str, str], ...]       # (name, substituted formula)
    assertions: tuple[tuple[str, str], ...]  # injection soundness checks
    window: tuple[int, int]


def instantiate_model(
    template: str,
    task: PlannedTask,
    window: tuple[int, int],
    spec_catalog: SpecCatalog,
) -> ModelInstance:
    lo, hi = window
    if lo > hi:
        raise InstantiationError(f"bad injection window [{lo}, {hi}]")
    if task.scenario == "double" and lo + 1 > hi:
        raise InstantiationError(
            f"window [{lo}, {hi}] is too small for an ordered pair"
        )
    begin = template.find(MARK_BEGIN)
    end = template.find(MARK_END)
    if begin < 0 or end < 0 or end < begin:
        raise InstantiationError("template is missing the marked injection region")
    head = template[: begin + len(MARK_BEGIN)]
    region = template[begin + len(MARK_BEGIN): end]
    tail = template[end:]

    va = task.axis_a.variable
    injected = [va]
    blocks = []
    if task.scenario == "single":
        blocks.append(_injection_block(va, lo, hi, precondition=None))
    else:
        vb = task.axis_b.variable
        injected.append(vb)
        blocks.append(_injection_block(va, lo, hi - 1, precondition=None))
        blocks.append(_injection_block(vb, lo + 1, hi, precondition=va))

    kept = _drop_pins(region, injected)
    source = head + kept + "".join(blocks) + tail

    substitutions = {
        "FAIL_A": va,
        "WINDOW_LO": str(lo),
        "WINDOW_HI": str(hi),
    }
    if task.scenario == "double":
        substitutions["FAIL_B"] = task.axis_b.variable
    if task.target is not None:
        substitutions["TARGET_MODE"] = task.target
    spec_texts = tuple(
        (name, spec_catalog.get(name).instantiate(substitutions))
        for name in task.specs
    )

    model = parse_model(source)
    diags = [d for d in validate_model(model) if d.severity == "error"]
    if diags:
        raise InstantiationError(
            f"instance {task.model_id} does not validate: {diags[0]}"
        )
    known_vars = {v.name for m in model.modules for v in m.vars}
    for var in injected:
        if var not in known_vars:
            raise InstantiationError(
                f"failure variable {var!r} does not resolve in the template"
            )

    return ModelInstance(
        task=task,
        source=source,
        specs=spec_texts,
        assertions=tuple(injection_assertions(task, window)),
        window=window,
    )


def injection_assertions(task: PlannedTask, window: tuple[int, int],
                         bound: Optional[int] = None) -> list[tuple[str, str]]:
    """Auxiliary soundness specs for an instance: no activation before the
    window start, no reactivation, and the ordered-pair start constraint."""
    lo, hi = window
    k = bound if bound is not None else task.bound
    va = task.axis_a.variable
    out = [
        (f"no_early_{va}", f"G[0,{k}] ({va} -> Step >= {lo})"),
        (f"no_rearm_{va}", f"G[0,{k}] !({va} & Y (!{va} & {va}_occurred))"),
    ]
    if task.scenario == "double":
        vb = task.axis_b.variable
        out.append((f"no_early_{vb}", f"G[0,{k}] ({vb} -> Step >= {lo + 1})"))
        out.append((f"no_rearm_{vb}", f"G[0,{k}] !({vb} & Y (!{vb} & {vb}_occurred))"))
        out.append(
            ("ordered_start",
             f"G[0,{k}] !({vb} & !{vb}_occurred & !({va} | {va}_occurred))")
        )
    return out


def _injection_block(var: str, lo: int, hi: int, precondition: Optional[str]) -> str:
    pre = f"({precondition} | {precondition}_occurred) & " if precondition else ""
    lines = [
        "",
        "VAR",
        f"  {var}_occurred : boolean;",
        "ASSIGN",
        f"  init({var}) := FALSE;",
        f"  next({var}) :=",
        "    case",
        f"      {var} : {{TRUE, FALSE}};",
        f"      !{var}_occurred & {pre}Step + 1 >= {lo} & Step + 1 < {hi} : {{FALSE, TRUE}};",
        f"      !{var}_occurred & {pre}Step + 1 = {hi} : TRUE;",
        "      TRUE : FALSE;",
        "    esac;",
        f"  init({var}_occurred) := FALSE;",
        f"  next({var}_occurred) := {var}_occurred | {var};",
        "",
    ]
    return "\n".join(lines)


def _drop_pins(region: str, injected: list[str]) -> str:
    """Remove the template's FALSE pins for the injected variables."""
    targets = {f"({v})" for v in injected}
    kept = []
    for line in region.splitlines():
        stripped = line.strip()
        if any(t in stripped for t in targets) and (
            stripped.startswith("init(") or stripped.startswith("next(")
        ):
            continue
        kept.append(line)
    return "\n".join(kept)

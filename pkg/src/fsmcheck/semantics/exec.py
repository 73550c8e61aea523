"""Stepping and evaluation over elaborated systems.

Successor enumeration is lexicographic over the ordered variable list with
set-literal choices in listed order, so every enumerator-based test is
deterministic. Hot paths run through rule functions compiled to Python
expressions once per system; eval_expr is the reference tree-walking
evaluator used by spec atoms and tests.
"""
from __future__ import annotations

import itertools
import random
from typing import Callable, Iterator, Optional

from ..lang import ast
from ..lang.parser import parse_expr_text
from .system import (
    Const, EnumDomain, FBinary, FCase, FChoice, FExpr, FUnary, IntDomain,
    State, Trace, TransitionSystem, Value, VarDef, VarRef,
)


class ModelStepError(Exception):
    """Runtime model error: a rule assigned a value outside the target domain.

    Out-of-range arithmetic poisons the whole step; the step index is filled
    in by the caller that knows it.
    """

    def __init__(self, var: str, value: Value, expr: FExpr, step: Optional[int] = None):
        self.var = var
        self.value = value
        self.expr = expr
        self.step = step
        super().__init__(self._message())

    def _message(self) -> str:
        from .system import format_fexpr

        at = f" at step {self.step}" if self.step is not None else ""
        return (
            f"value {self.value!r} for {self.var!r} is outside its domain{at}; "
            f"offending rule: {format_fexpr(self.expr)}"
        )

    def with_step(self, step: int) -> "ModelStepError":
        return ModelStepError(self.var, self.value, self.expr, step)


class ResolutionError(Exception):
    pass


# --- reference evaluator --------------------------------------------------


def eval_fexpr(e: FExpr, values: tuple) -> Value:
    if isinstance(e, VarRef):
        return values[e.index]
    if isinstance(e, Const):
        return e.value
    if isinstance(e, FBinary):
        op = e.op
        if op == "&":
            return bool(eval_fexpr(e.left, values)) and bool(eval_fexpr(e.right, values))
        if op == "|":
            return bool(eval_fexpr(e.left, values)) or bool(eval_fexpr(e.right, values))
        if op == "->":
            return (not eval_fexpr(e.left, values)) or bool(eval_fexpr(e.right, values))
        a = eval_fexpr(e.left, values)
        b = eval_fexpr(e.right, values)
        if op == "=":
            return a == b
        if op == "!=":
            return a != b
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        raise ValueError(f"unknown operator {op!r}")
    if isinstance(e, FUnary):
        v = eval_fexpr(e.operand, values)
        return (not v) if e.op == "!" else -v
    if isinstance(e, FCase):
        for guard, result in e.arms:
            if eval_fexpr(guard, values):
                return eval_fexpr(result, values)
        raise ValueError("case expression fell through (missing TRUE default)")
    if isinstance(e, FChoice):
        raise ValueError("set literal evaluated in value position")
    raise TypeError(f"unknown flat expression {e!r}")


def eval_expr(e: FExpr, s: State) -> Value:
    """Evaluate a choice-free expression on a state.

    Case returns the first arm whose guard is true. Integer arithmetic is
    exact here; domain membership is enforced where values are assigned to
    variables, not on intermediate results.
    """
    return eval_fexpr(e, s.values)


def rule_candidates(e: FExpr, values: tuple) -> tuple[Value, ...]:
    """All values a rule right side can produce on a state, in listed order."""
    if isinstance(e, FChoice):
        out = [eval_fexpr(item, values) for item in e.items]
        return tuple(dict.fromkeys(out))
    if isinstance(e, FCase):
        for guard, result in e.arms:
            if eval_fexpr(guard, values):
                return rule_candidates(result, values)
        raise ValueError("case expression fell through (missing TRUE default)")
    return (eval_fexpr(e, values),)


# --- compiled stepping ----------------------------------------------------


class _Ops:
    __slots__ = ("step_all", "monitor_fns", "init_order")

    def __init__(self, step_all, monitor_fns, init_order):
        self.step_all = step_all
        self.monitor_fns = monitor_fns
        self.init_order = init_order


def _emit(e: FExpr) -> str:
    if isinstance(e, VarRef):
        return f"s[{e.index}]"
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, FUnary):
        return f"(not {_emit(e.operand)})" if e.op == "!" else f"(-{_emit(e.operand)})"
    if isinstance(e, FBinary):
        op = e.op
        if op == "&":
            return f"({_emit(e.left)} and {_emit(e.right)})"
        if op == "|":
            return f"({_emit(e.left)} or {_emit(e.right)})"
        if op == "->":
            return f"((not {_emit(e.left)}) or {_emit(e.right)})"
        py = {"=": "==", "!=": "!=", "<": "<", "<=": "<=", ">": ">", ">=": ">=",
              "+": "+", "-": "-"}[op]
        return f"({_emit(e.left)} {py} {_emit(e.right)})"
    if isinstance(e, FCase):
        return _emit_case(e.arms, _emit)
    if isinstance(e, FChoice):
        raise ValueError("set literal in value position")
    raise TypeError(f"unknown flat expression {e!r}")


def _emit_case(arms, leaf) -> str:
    guard, result = arms[0]
    if len(arms) == 1 or (isinstance(guard, Const) and guard.value is True):
        return leaf(result)
    return f"({leaf(result)} if {_emit(guard)} else {_emit_case(arms[1:], leaf)})"


def _emit_candidates(e: FExpr) -> str:
    if isinstance(e, FChoice):
        items = ", ".join(_emit(i) for i in e.items)
        return f"_uniq(({items},))"
    if isinstance(e, FCase):
        return _emit_case(e.arms, _emit_candidates)
    return f"({_emit(e)},)"


def _uniq(t: tuple) -> tuple:
    return tuple(dict.fromkeys(t))


def _ops(ts: TransitionSystem) -> _Ops:
    if ts._ops is not None:
        return ts._ops
    parts = []
    for v in ts.variables[: ts.n_model_vars]:
        if v.next is None:
            parts.append(repr(v.domain.values()))
        else:
            parts.append(_emit_candidates(v.next))
    body = (",\n        ".join(parts) + ",") if parts else ""
    src = f"def _step_all(s):\n    return (\n        {body}\n    )\n"
    ns: dict = {"_uniq": _uniq}
    exec(compile(src, f"<step:{ts.source_name}>", "exec"), ns)
    monitor_fns = []
    for v in ts.variables[ts.n_model_vars:]:
        fn_src = f"def _m(s):\n    return {_emit(v.monitor.expr)}\n"
        fns: dict = {}
        exec(compile(fn_src, f"<monitor:{v.name}>", "exec"), fns)
        monitor_fns.append((v.monitor.kind, fns["_m"]))
    ops = _Ops(ns["_step_all"], monitor_fns, _init_order(ts))
    ts._ops = ops
    return ops


def _init_order(ts: TransitionSystem) -> list[int]:
    """Stable topological order of model vars by init-rule dependencies.

    Init rules may read other variables' initial values; enumeration then
    branches in dependency order (equal to declaration order when rules are
    self-contained, which keeps initial-state enumeration lexicographic).
    """
    n = ts.n_model_vars
    deps: list[set[int]] = []
    for v in ts.variables[:n]:
        need: set[int] = set()
        if v.init is not None:
            _collect_refs(v.init, need)
        deps.append({d for d in need if d < n})
    order: list[int] = []
    placed = [False] * n
    progress = True
    while len(order) < n and progress:
        progress = False
        for i in range(n):
            if not placed[i] and all(placed[d] or d == i for d in deps[i]):
                placed[i] = True
                order.append(i)
                progress = True
    if len(order) < n:
        cyc = [ts.variables[i].name for i in range(n) if not placed[i]]
        raise ValueError(f"cyclic init-rule dependencies among: {', '.join(cyc)}")
    return order


def _collect_refs(e: FExpr, out: set[int]) -> None:
    if isinstance(e, VarRef):
        out.add(e.index)
    elif isinstance(e, FUnary):
        _collect_refs(e.operand, out)
    elif isinstance(e, FBinary):
        _collect_refs(e.left, out)
        _collect_refs(e.right, out)
    elif isinstance(e, FCase):
        for g, r in e.arms:
            _collect_refs(g, out)
            _collect_refs(r, out)
    elif isinstance(e, FChoice):
        for i in e.items:
            _collect_refs(i, out)


def _monitor_init(ts: TransitionSystem, model_values: list) -> list:
    full = list(model_values)
    for v in ts.variables[ts.n_model_vars:]:
        if v.monitor.kind == "cur":
            full.append(False)
        else:
            full.append(bool(eval_fexpr(v.monitor.expr, tuple(full))))
    return full[ts.n_model_vars:]


def _monitor_step(ts: TransitionSystem, ops: _Ops, old: tuple, new_model: list) -> list:
    base = ts.n_model_vars
    new_full = list(new_model)
    for j, (kind, fn) in enumerate(ops.monitor_fns):
        if kind == "cur":
            new_full.append(bool(fn(old)))
        elif kind == "post_or":
            new_full.append(bool(old[base + j]) or bool(fn(new_full)))
        else:  # post_and
            new_full.append(bool(old[base + j]) and bool(fn(new_full)))
    return new_full[base:]


def initial_states(ts: TransitionSystem) -> Iterator[State]:
    """All states satisfying the init rules; free init vars range over
    their domains, expanded lexicographically in variable order."""
    ops = _ops(ts)
    n = ts.n_model_vars
    values: list = [None] * n

    def expand(pos: int) -> Iterator[State]:
        if pos == len(ops.init_order):
            monitors = _monitor_init(ts, values)
            yield State(tuple(values) + tuple(monitors), ts)
            return
        i = ops.init_order[pos]
        v = ts.variables[i]
        if v.init is None:
            cands = v.domain.values()
        else:
            cands = rule_candidates(v.init, tuple(values))
            for c in cands:
                if not v.domain.contains(c):
                    raise ModelStepError(v.name, c, v.init, step=0)
        for c in cands:
            values[i] = c
            yield from expand(pos + 1)
        values[i] = None

    yield from expand(0)


def successors(ts: TransitionSystem, s: State) -> Iterator[State]:
    """All one-step successors, in lexicographic candidate order.

    Raises ModelStepError when a rule produces an out-of-range value on this
    state: the step is poisoned for every refinement of the choices.
    """
    ops = _ops(ts)
    cands = ops.step_all(s.values)
    for i, c in enumerate(cands):
        v = ts.variables[i]
        dom = v.domain
        if isinstance(dom, IntDomain):
            for value in c:
                if not (dom.lo <= value <= dom.hi):
                    raise ModelStepError(v.name, value, v.next)
    if not ops.monitor_fns:
        for combo in itertools.product(*cands):
            yield State(combo, ts)
    else:
        for combo in itertools.product(*cands):
            monitors = _monitor_step(ts, ops, s.values, list(combo))
            yield State(combo + tuple(monitors), ts)


def is_successor(ts: TransitionSystem, s: State, t: State) -> bool:
    """Transition-relation membership without enumerating the product."""
    ops = _ops(ts)
    cands = ops.step_all(s.values)
    for i, c in enumerate(cands):
        if t.values[i] not in c:
            return False
    if ops.monitor_fns:
        monitors = _monitor_step(ts, ops, s.values, list(t.values[: ts.n_model_vars]))
        if tuple(monitors) != t.values[ts.n_model_vars:]:
            return False
    return True


def satisfies_init(ts: TransitionSystem, s: State) -> bool:
    ops = _ops(ts)
    for i in ops.init_order:
        v = ts.variables[i]
        if v.init is None:
            if not v.domain.contains(s.values[i]):
                return False
        elif s.values[i] not in rule_candidates(v.init, s.values):
            return False
    monitors = _monitor_init(ts, list(s.values[: ts.n_model_vars]))
    return tuple(monitors) == s.values[ts.n_model_vars:]


# --- choosers and simulation ----------------------------------------------

Chooser = Callable[[int, str, tuple], Value]


def first_choice(step: int, var: str, candidates: tuple) -> Value:
    return candidates[0]


def seeded_random_chooser(seed: int) -> Chooser:
    rng = random.Random(seed)

    def choose(step: int, var: str, candidates: tuple) -> Value:
        return rng.choice(candidates)

    return choose


def scripted_chooser(script: dict[tuple[int, str], Value], default: Chooser = first_choice) -> Chooser:
    """Resolve listed (step, var) decisions from a script, defaulting elsewhere.

    Step 0 chooses initial values; step t>0 chooses the value entering state t.
    """

    def choose(step: int, var: str, candidates: tuple) -> Value:
        key = (step, var)
        if key in script:
            value = script[key]
            if value not in candidates:
                raise ValueError(
                    f"scripted value {value!r} for {var!r} at step {step} "
                    f"is not among candidates {candidates!r}"
                )
            return value
        return default(step, var, candidates)

    return choose


def simulate(ts: TransitionSystem, steps: int, chooser: Chooser = first_choice) -> Trace:
    """Run steps synchronous updates, resolving nondeterminism via chooser.

    Deterministic models yield the same trace under any policy. Runtime model
    errors propagate with the step index attached.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    ops = _ops(ts)
    n = ts.n_model_vars
    values: list = [None] * n
    for i in ops.init_order:
        v = ts.variables[i]
        if v.init is None:
            cands = v.domain.values()
        else:
            cands = rule_candidates(v.init, tuple(values))
            for c in cands:
                if not v.domain.contains(c):
                    raise ModelStepError(v.name, c, v.init, step=0)
        values[i] = chooser(0, v.name, cands) if len(cands) > 1 else cands[0]
    current = tuple(values) + tuple(_monitor_init(ts, values))
    states = [State(current, ts)]
    for step in range(1, steps + 1):
        cands = ops.step_all(current)
        new_model: list = []
        for i, c in enumerate(cands):
            v = ts.variables[i]
            dom = v.domain
            if isinstance(dom, IntDomain):
                for value in c:
                    if not (dom.lo <= value <= dom.hi):
                        raise ModelStepError(v.name, value, v.next, step=step)
            new_model.append(chooser(step, v.name, c) if len(c) > 1 else c[0])
        monitors = _monitor_step(ts, ops, current, new_model)
        current = tuple(new_model) + tuple(monitors)
        states.append(State(current, ts))
    return Trace(tuple(states))


# --- resolving source expressions against a system --------------------------


def parse_state_expr(ts: TransitionSystem, text: str) -> FExpr:
    """Parse an expression over qualified variable names, defines, and enum
    symbols into the system's flat form (spec atoms use this)."""
    return resolve_expr(ts, parse_expr_text(text))


def resolve_expr(ts: TransitionSystem, expr: ast.Expr) -> FExpr:
    symbols = ts.symbol_universe()

    def walk(e: ast.Expr) -> FExpr:
        if isinstance(e, ast.BoolLit):
            return Const(e.value)
        if isinstance(e, ast.IntLit):
            return Const(e.value)
        if isinstance(e, ast.Name):
            qname = e.text
            idx = ts.index.get(qname)
            if idx is not None:
                return VarRef(idx, qname)
            if qname in ts.defines:
                return ts.defines[qname]
            if len(e.parts) == 1 and qname in symbols:
                return Const(qname)
            raise ResolutionError(f"unresolved identifier {qname!r}")
        if isinstance(e, ast.Unary):
            return FUnary(e.op, walk(e.operand))
        if isinstance(e, ast.Binary):
            return FBinary(e.op, walk(e.left), walk(e.right))
        if isinstance(e, ast.Case):
            return FCase(tuple((walk(a.guard), walk(a.result)) for a in e.arms))
        if isinstance(e, ast.SetLit):
            raise ResolutionError("set literal not allowed in a state expression")
        raise ResolutionError(f"unsupported expression node {type(e).__name__}")

    return walk(expr)


def infer_kind(ts: TransitionSystem, e: FExpr) -> str:
    """Rough kind of a flat expression: 'bool', 'int', or 'enum'."""
    if isinstance(e, VarRef):
        dom = ts.variables[e.index].domain
        if isinstance(dom, IntDomain):
            return "int"
        if isinstance(dom, EnumDomain):
            return "enum"
        return "bool"
    if isinstance(e, Const):
        if isinstance(e.value, bool):
            return "bool"
        if isinstance(e.value, int):
            return "int"
        return "enum"
    if isinstance(e, FUnary):
        return "bool" if e.op == "!" else "int"
    if isinstance(e, FBinary):
        return "int" if e.op in ("+", "-") else "bool"
    if isinstance(e, FCase):
        return infer_kind(ts, e.arms[0][1])
    return "bool"

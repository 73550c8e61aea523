"""Bounded counterexample search.

The search runs over (state, obligation) pairs per depth: the obligation is
the formula rewritten by progression through the states consumed so far,
interned with top/bottom absorption so identical residuals merge. An
obligation collapsing to bottom is exactly a Violated prefix verdict, and
collapsing to top a Holds verdict, so the result contract matches direct
three-valued evaluation while exploring deduplicated states instead of
paths. Per-depth deduplication is sound for counterexample-completeness:
a pair reached earlier has at least as much remaining bound as a later
repeat.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Union

from ..ltl import formula as F
from ..ltl.past import eliminate_past
from ..semantics.exec import ModelStepError, _ops, initial_states
from ..semantics.system import FExpr, State, Trace, TransitionSystem
from ..semantics.exec import _emit as _emit_expr


@dataclass(frozen=True)
class CheckTask:
    ts: TransitionSystem
    formula: F.Formula
    bound_k: int = 70
    timeout: Optional[float] = None  # wall-clock seconds

    def __post_init__(self):
        if self.bound_k < 0:
            raise ValueError("bound_k must be >= 0")


@dataclass(frozen=True)
class NoCounterexampleWithinBound:
    bound: int
    all_paths_decided: bool = False


@dataclass(frozen=True)
class Counterexample:
    trace: Trace
    formula: F.Formula
    violation_step: int


@dataclass(frozen=True)
class ModelError:
    step: int
    detail: str


@dataclass(frozen=True)
class Timeout:
    elapsed: float


Verdict = Union[NoCounterexampleWithinBound, Counterexample, ModelError, Timeout]


class TimeoutBudget:
    def __init__(self, seconds: Optional[float]):
        self.start = time.monotonic()
        self.deadline = None if seconds is None else self.start + seconds

    def exceeded(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline

    def elapsed(self) -> float:
        return time.monotonic() - self.start


# --- obligation nodes -------------------------------------------------------

TOP = 0
BOT = 1


class _Obligations:
    """Hash-consed NNF obligation store with progression."""

    def __init__(self, atoms: list[FExpr]):
        self.atoms = atoms
        self.kind = ["top", "bot"]
        self.payload: list = [None, None]
        self.table: dict = {("top", None): TOP, ("bot", None): BOT}
        self.prog_memo: dict = {}

    def _mk(self, kind: str, payload) -> int:
        key = (kind, payload)
        nid = self.table.get(key)
        if nid is None:
            nid = len(self.kind)
            self.kind.append(kind)
            self.payload.append(payload)
            self.table[key] = nid
        return nid

    def lit(self, atom: int, neg: bool) -> int:
        return self._mk("lit", (atom, neg))

    def conj(self, ids) -> int:
        flat: set[int] = set()
        for i in ids:
            if i == BOT:
                return BOT
            if i == TOP:
                continue
            if self.kind[i] == "and":
                flat.update(self.payload[i])
            else:
                flat.add(i)
        if not flat:
            return TOP
        if len(flat) == 1:
            return next(iter(flat))
        return self._mk("and", tuple(sorted(flat)))

    def disj(self, ids) -> int:
        flat: set[int] = set()
        for i in ids:
            if i == TOP:
                return TOP
            if i == BOT:
                continue
            if self.kind[i] == "or":
                flat.update(self.payload[i])
            else:
                flat.add(i)
        if not flat:
            return BOT
        if len(flat) == 1:
            return next(iter(flat))
        return self._mk("or", tuple(sorted(flat)))

    def progress(self, nid: int, bits: tuple) -> int:
        if nid == TOP or nid == BOT:
            return nid
        key = (nid, bits)
        hit = self.prog_memo.get(key)
        if hit is not None:
            return hit
        kind = self.kind[nid]
        p = self.payload[nid]
        if kind == "lit":
            atom, neg = p
            out = BOT if (bits[atom] == neg) else TOP
        elif kind == "and":
            out = self.conj(self.progress(c, bits) for c in p)
        elif kind == "or":
            out = self.disj(self.progress(c, bits) for c in p)
        elif kind == "x":
            out = p
        elif kind == "f":
            out = self.disj((self.progress(p, bits), nid))
        elif kind == "g":
            out = self.conj((self.progress(p, bits), nid))
        elif kind == "u":
            l, r = p
            out = self.disj((self.progress(r, bits), self.conj((self.progress(l, bits), nid))))
        elif kind == "r":
            l, r = p
            out = self.conj((self.progress(r, bits), self.disj((self.progress(l, bits), nid))))
        elif kind == "fw":
            lo, hi, sub = p
            if lo > 0:
                out = self._mk("fw", (lo - 1, hi - 1, sub))
            elif hi == 0:
                out = self.progress(sub, bits)
            else:
                out = self.disj((self.progress(sub, bits), self._mk("fw", (0, hi - 1, sub))))
        elif kind == "gw":
            lo, hi, sub = p
            if lo > 0:
                out = self._mk("gw", (lo - 1, hi - 1, sub))
            elif hi == 0:
                out = self.progress(sub, bits)
            else:
                out = self.conj((self.progress(sub, bits), self._mk("gw", (0, hi - 1, sub))))
        else:
            raise ValueError(f"cannot progress node kind {kind}")
        self.prog_memo[key] = out
        return out


def _collect_atoms(f: F.Formula, out: dict[FExpr, int]) -> None:
    if isinstance(f, F.Atom):
        from ..semantics.system import Const

        if not isinstance(f.expr, Const):
            out.setdefault(f.expr, len(out))
        return
    for c in F.children(f):
        _collect_atoms(c, out)


def _nnf(f: F.Formula, neg: bool, ob: _Obligations, atom_ids: dict) -> int:
    from ..semantics.system import Const

    if isinstance(f, F.Atom):
        if isinstance(f.expr, Const):
            value = bool(f.expr.value) != neg
            return TOP if value else BOT
        return ob.lit(atom_ids[f.expr], neg)
    if isinstance(f, F.Not):
        return _nnf(f.sub, not neg, ob, atom_ids)
    if isinstance(f, F.And):
        mk = ob.disj if neg else ob.conj
        return mk((_nnf(f.left, neg, ob, atom_ids), _nnf(f.right, neg, ob, atom_ids)))
    if isinstance(f, F.Or):
        mk = ob.conj if neg else ob.disj
        return mk((_nnf(f.left, neg, ob, atom_ids), _nnf(f.right, neg, ob, atom_ids)))
    if isinstance(f, F.Implies):
        return _nnf(F.Or(F.Not(f.left), f.right), neg, ob, atom_ids)
    if isinstance(f, F.Next):
        return ob._mk("x", _nnf(f.sub, neg, ob, atom_ids))
    if isinstance(f, F.Finally_):
        return ob._mk("g" if neg else "f", _nnf(f.sub, neg, ob, atom_ids))
    if isinstance(f, F.Globally):
        return ob._mk("f" if neg else "g", _nnf(f.sub, neg, ob, atom_ids))
    if isinstance(f, F.Until):
        l = _nnf(f.left, neg, ob, atom_ids)
        r = _nnf(f.right, neg, ob, atom_ids)
        return ob._mk("r" if neg else "u", (l, r))
    if isinstance(f, F.Release):
        l = _nnf(f.left, neg, ob, atom_ids)
        r = _nnf(f.right, neg, ob, atom_ids)
        return ob._mk("u" if neg else "r", (l, r))
    if isinstance(f, F.FinallyWithin):
        sub = _nnf(f.sub, neg, ob, atom_ids)
        return ob._mk("gw" if neg else "fw", (f.lo, f.hi, sub))
    if isinstance(f, F.GloballyWithin):
        sub = _nnf(f.sub, neg, ob, atom_ids)
        return ob._mk("fw" if neg else "gw", (f.lo, f.hi, sub))
    raise TypeError(f"past operator reached the progression engine: {f!r}")


def _compile_atoms(ts: TransitionSystem, atoms: list[FExpr]):
    if not atoms:
        return lambda s: ()
    body = ", ".join(f"bool({_emit_expr(a)})" for a in atoms)
    src = f"def _atoms(s):\n    return ({body},)\n"
    ns: dict = {}
    exec(compile(src, "<atoms>", "exec"), ns)
    return ns["_atoms"]


def check_bounded(task: CheckTask) -> Verdict:
    """Counterexample-complete bounded search.

    If any initialized path of length <= bound_k has a Violated prefix
    verdict, a Counterexample with the earliest possible violation step is
    returned; a counterexample takes precedence over a runtime model error,
    which takes precedence over the bound-limited no-counterexample result.
    """
    budget = TimeoutBudget(task.timeout)
    formula, ts = eliminate_past(task.formula, task.ts)
    atom_ids: dict[FExpr, int] = {}
    _collect_atoms(formula, atom_ids)
    atoms = list(atom_ids)
    ob = _Obligations(atoms)
    root = _nnf(formula, False, ob, atom_ids)
    atom_fn = _compile_atoms(ts, atoms)
    ops = _ops(ts)
    orig_width = len(task.ts.variables)  # latches appended after these

    def project(values_chain: list[tuple]) -> Trace:
        states = tuple(State(v[:orig_width], task.ts) for v in values_chain)
        return Trace(states)

    poison: Optional[tuple[int, str]] = None
    undecided_tail = False

    # entries: (values, obligation, parent entry or None)
    frontier: dict[tuple, tuple] = {}
    try:
        for s in initial_states(ts):
            bits = atom_fn(s.values)
            res = ob.progress(root, bits)
            if res == BOT:
                return Counterexample(project([s.values]), task.formula, 0)
            if res == TOP:
                continue
            key = (s.values, res)
            if key not in frontier:
                frontier[key] = (s.values, res, None)
    except ModelStepError as err:
        return ModelError(0, str(err))

    from itertools import product as _product

    for depth in range(1, task.bound_k + 1):
        if not frontier:
            break
        new_frontier: dict[tuple, tuple] = {}
        for entry in frontier.values():
            values, obligation, _parent = entry
            if budget.exceeded():
                return Timeout(budget.elapsed())
            try:
                cands = ops.step_all(values)
                for i, c in enumerate(cands):
                    v = ts.variables[i]
                    dom = v.domain
                    if hasattr(dom, "lo"):
                        for val in c:
                            if not (dom.lo <= val <= dom.hi):
                                raise ModelStepError(v.name, val, v.next)
            except ModelStepError as err:
                if poison is None:
                    poison = (depth, str(err))
                continue
            if ops.monitor_fns:
                succ_values = []
                from ..semantics.exec import _monitor_step

                for combo in _product(*cands):
                    mon = _monitor_step(ts, ops, values, list(combo))
                    succ_values.append(combo + tuple(mon))
            else:
                succ_values = list(_product(*cands))
            for nv in succ_values:
                bits = atom_fn(nv)
                res = ob.progress(obligation, bits)
                if res == BOT:
                    chain = [nv]
                    node = entry
                    while node is not None:
                        chain.append(node[0])
                        node = node[2]
                    chain.reverse()
                    return Counterexample(project(chain), task.formula, depth)
                if res == TOP:
                    continue
                key = (nv, res)
                if key not in new_frontier:
                    new_frontier[key] = (nv, res, entry)
        frontier = new_frontier

    if frontier:
        undecided_tail = True
    if poison is not None:
        return ModelError(poison[0], poison[1])
    return NoCounterexampleWithinBound(task.bound_k, all_paths_decided=not undecided_tail)

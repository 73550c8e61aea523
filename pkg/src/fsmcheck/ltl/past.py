"""Past-operator elimination by latch-variable monitor synthesis.

Each maximal past subformula is replaced by a fresh boolean latch variable
added to the system, with update rules realizing the exact semantics:

* ``O p``: latch starts at p and is re-evaluated inclusively, so its value
  at step t equals "p held at some step <= t";
* ``Y p``: latch starts false and carries p's previous-step value;
* ``H p``: conjunctive latch, the dual of O.

Structurally identical past subformulas share one latch, so state growth is
one variable per distinct past subformula. Bodies must be state formulas
(atoms, boolean connectives, and already-eliminated inner past operators):
a latch read at step t cannot equal a property of states after t, so past
over future operators has no exact latch realization and is rejected.
"""
from __future__ import annotations

from ..semantics.system import (
    BoolDomain, Const, FBinary, FExpr, FUnary, MonitorRule, TransitionSystem,
    VarDef, VarRef,
)
from . import formula as F


class PastEliminationError(Exception):
    pass


_KINDS = {F.Once: ("O", "post_or"), F.Historically: ("H", "post_and"),
          F.Yesterday: ("Y", "cur")}


def eliminate_past(f: F.Formula, ts: TransitionSystem) -> tuple[F.Formula, TransitionSystem]:
    """Returns (future-only formula, augmented system).

    On every trace of the augmented system the latch value at step t equals
    the eliminated subformula's semantics at step t (current-inclusive for
    O and H). Systems without past operators are returned unchanged.
    """
    if not F.has_past(f):
        return f, ts
    elim = _Eliminator(ts)
    out = elim.walk(f)
    return out, ts.with_monitors(tuple(elim.new_vars))


class _Eliminator:
    def __init__(self, ts: TransitionSystem):
        self.ts = ts
        self.new_vars: list[VarDef] = []
        self.cache: dict[tuple[str, FExpr], VarRef] = {}
        self.taken = set(ts.index)

    def walk(self, f: F.Formula) -> F.Formula:
        if isinstance(f, F.Atom):
            return f
        if isinstance(f, tuple(_KINDS)):
            sub = self.walk(f.sub)
            body = self._to_state_expr(sub)
            op, kind = _KINDS[type(f)]
            ref = self._latch(op, kind, body, f.sub)
            return F.Atom(ref)
        if isinstance(f, F.Not):
            return F.Not(self.walk(f.sub))
        if isinstance(f, (F.And, F.Or, F.Implies, F.Until, F.Release)):
            return type(f)(self.walk(f.left), self.walk(f.right))
        if isinstance(f, (F.Next, F.Finally_, F.Globally)):
            return type(f)(self.walk(f.sub))
        if isinstance(f, (F.FinallyWithin, F.GloballyWithin)):
            return type(f)(f.lo, f.hi, self.walk(f.sub))
        raise TypeError(f"unknown formula node {f!r}")

    def _latch(self, op: str, kind: str, body: FExpr, original: F.Formula) -> VarRef:
        key = (op, body)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        index = len(self.ts.variables) + len(self.new_vars)
        name = self._fresh_name(op, body)
        self.new_vars.append(
            VarDef(name, BoolDomain(), monitor=MonitorRule(kind, body))
        )
        ref = VarRef(index, name)
        self.cache[key] = ref
        return ref

    def _fresh_name(self, op: str, body: FExpr) -> str:
        if isinstance(body, VarRef):
            base = f"{op}_{body.name.replace('.', '_')}"
        else:
            base = f"{op}_sub{len(self.new_vars)}"
        name = base
        n = 1
        while name in self.taken:
            n += 1
            name = f"{base}_{n}"
        self.taken.add(name)
        return name

    def _to_state_expr(self, f: F.Formula) -> FExpr:
        if isinstance(f, F.Atom):
            return f.expr
        if isinstance(f, F.Not):
            return FUnary("!", self._to_state_expr(f.sub))
        if isinstance(f, (F.And, F.Or, F.Implies)):
            op = {"And": "&", "Or": "|", "Implies": "->"}[type(f).__name__]
            return FBinary(op, self._to_state_expr(f.left), self._to_state_expr(f.right))
        raise PastEliminationError(
            "past operator over a future subformula has no exact latch "
            f"realization: {F.format_formula(f)}"
        )

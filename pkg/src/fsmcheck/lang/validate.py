"""Static validation of parsed models.

Produces diagnostics instead of raising: an empty list means the model is
well-formed and ready for elaboration. Name resolution and type checking
walk the instance tree from main so that parameter aliasing (including
instances passed as arguments) is checked the way elaboration will bind it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .ast import (
    AssignRule, Binary, BoolLit, BoolType, Case, DefineDecl, EnumType, Expr,
    InstanceDecl, IntLit, ModelAst, ModuleDecl, Name, RangeType, SetLit, Span,
    Unary, VarType,
)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    span: Optional[Span] = None

    def __str__(self) -> str:
        where = f" at {self.span}" if self.span else ""
        return f"{self.severity}[{self.code}]{where}: {self.message}"


# Inferred expression types. Enum values carry the set of symbols the
# expression can produce when statically known (None = unknown membership).
_BOOL = ("bool", None)
_INT = ("int", None)
_ERROR = ("error", None)


def _enum(symbols: Optional[frozenset]) -> tuple:
    return ("enum", symbols)


def validate_model(ast: ModelAst) -> list[Diagnostic]:
    v = _Validator(ast)
    v.run()
    # Instantiating a module twice re-checks it under each binding; drop
    # exact repeats so one syntactic defect reports once per context only.
    seen = set()
    out = []
    for d in v.diags:
        key = (d.code, d.message, d.span)
        if key not in seen:
            seen.add(key)
            out.append(d)
    return out


class _Validator:
    def __init__(self, ast: ModelAst):
        self.ast = ast
        self.diags: list[Diagnostic] = []
        self.modules: dict[str, ModuleDecl] = {}
        self.symbols: set[str] = set()

    def error(self, code: str, message: str, span: Optional[Span] = None) -> None:
        self.diags.append(Diagnostic("error", code, message, span))

    def run(self) -> None:
        self._check_module_table()
        for mod in self.ast.modules:
            self._check_module_locals(mod)
        if self._check_instance_graph():
            main = self.ast.main
            if main is not None and main.params:
                self.error("main-params", "module main must have no parameters", main.span)
            if main is not None:
                ctx = _Ctx(main, "main", {})
                self._bind_instance(ctx, set())

    # -- module table and per-module syntactic checks --------------------

    def _check_module_table(self) -> None:
        mains = 0
        for mod in self.ast.modules:
            if mod.name in self.modules:
                code = "duplicate-main" if mod.name == "main" else "duplicate-module"
                self.error(code, f"duplicate module {mod.name!r}", mod.span)
            else:
                self.modules[mod.name] = mod
            if mod.name == "main":
                mains += 1
            for v in mod.vars:
                if isinstance(v.vartype, EnumType):
                    self.symbols.update(v.vartype.symbols)
        if mains == 0:
            self.error("missing-main", "no module named main")

    def _check_module_locals(self, mod: ModuleDecl) -> None:
        names: dict[str, str] = {}
        for p in mod.params:
            if p in names:
                self.error("duplicate-name", f"duplicate parameter {p!r} in {mod.name}", mod.span)
            names[p] = "param"
        for v in mod.vars:
            if v.name in names:
                self.error("duplicate-name", f"duplicate name {v.name!r} in {mod.name}", v.span)
            names[v.name] = "var"
            if isinstance(v.vartype, EnumType):
                if len(set(v.vartype.symbols)) != len(v.vartype.symbols):
                    self.error("enum-dup-symbol", f"enum for {v.name!r} repeats a symbol", v.span)
                if len(v.vartype.symbols) < 2:
                    self.error("enum-too-small", f"enum for {v.name!r} needs at least 2 symbols", v.span)
        for inst in mod.instances:
            if inst.name in names:
                self.error("duplicate-name", f"duplicate name {inst.name!r} in {mod.name}", inst.span)
            names[inst.name] = "instance"
        for d in mod.defines:
            if d.name in names:
                self.error("duplicate-name", f"duplicate name {d.name!r} in {mod.name}", d.span)
            names[d.name] = "define"

        var_names = {v.name for v in mod.vars}
        rules_seen: set[tuple[str, str]] = set()
        for rule in mod.assigns:
            if rule.target not in var_names:
                self.error(
                    "assign-target",
                    f"{rule.kind}() target {rule.target!r} is not a declared variable of {mod.name}",
                    rule.span,
                )
            key = (rule.kind, rule.target)
            if key in rules_seen:
                self.error(
                    "duplicate-rule",
                    f"variable {rule.target!r} has more than one {rule.kind} rule",
                    rule.span,
                )
            rules_seen.add(key)
            self._check_choice_positions(rule.expr, choice_ok=True)
            self._check_case_defaults(rule.expr)
        for d in mod.defines:
            self._check_choice_positions(d.expr, choice_ok=False)
            self._check_case_defaults(d.expr)
        for inst in mod.instances:
            for a in inst.args:
                self._check_choice_positions(a, choice_ok=False)
                self._check_case_defaults(a)

    def _check_case_defaults(self, expr: Expr) -> None:
        if isinstance(expr, Case):
            last = expr.arms[-1]
            if not (isinstance(last.guard, BoolLit) and last.guard.value):
                self.error(
                    "case-default",
                    "case expression must end in a literal TRUE default arm",
                    expr.span,
                )
            for arm in expr.arms:
                self._check_case_defaults(arm.guard)
                self._check_case_defaults(arm.result)
        elif isinstance(expr, Unary):
            self._check_case_defaults(expr.operand)
        elif isinstance(expr, Binary):
            self._check_case_defaults(expr.left)
            self._check_case_defaults(expr.right)
        elif isinstance(expr, SetLit):
            for item in expr.items:
                self._check_case_defaults(item)

    def _check_choice_positions(self, expr: Expr, choice_ok: bool) -> None:
        """Set literals may appear only as a rule's right side or as case
        arm results within one; their items must be choice-free values."""
        if isinstance(expr, SetLit):
            if not choice_ok:
                self.error(
                    "choice-position",
                    "set literal is only allowed as the right side of an init/next rule",
                    expr.span,
                )
            for item in expr.items:
                self._check_choice_positions(item, choice_ok=False)
        elif isinstance(expr, Case):
            for arm in expr.arms:
                self._check_choice_positions(arm.guard, choice_ok=False)
                self._check_choice_positions(arm.result, choice_ok=choice_ok)
        elif isinstance(expr, Unary):
            self._check_choice_positions(expr.operand, choice_ok=False)
        elif isinstance(expr, Binary):
            self._check_choice_positions(expr.left, choice_ok=False)
            self._check_choice_positions(expr.right, choice_ok=False)

    # -- instance graph ---------------------------------------------------

    def _check_instance_graph(self) -> bool:
        ok = True
        for mod in self.ast.modules:
            for inst in mod.instances:
                target = self.modules.get(inst.module)
                if target is None:
                    self.error(
                        "unresolved-module",
                        f"instantiation of undeclared module {inst.module!r}",
                        inst.span,
                    )
                    ok = False
                elif len(inst.args) != len(target.params):
                    self.error(
                        "arity",
                        f"{inst.module} expects {len(target.params)} argument(s), got {len(inst.args)}",
                        inst.span,
                    )
        # cycle detection over the module instantiation graph
        color: dict[str, int] = {}

        def visit(name: str) -> bool:
            state = color.get(name, 0)
            if state == 1:
                return False
            if state == 2:
                return True
            color[name] = 1
            mod = self.modules.get(name)
            acyclic = True
            if mod is not None:
                for inst in mod.instances:
                    if inst.module in self.modules and not visit(inst.module):
                        acyclic = False
            color[name] = 2
            return acyclic

        for name in self.modules:
            if not visit(name):
                self.error("instantiation-cycle", f"recursive instantiation through {name!r}")
                return False
        return ok

    # -- binding walk ------------------------------------------------------

    def _bind_instance(self, ctx: "_Ctx", define_stack: set) -> None:
        mod = ctx.module
        # child contexts first so dotted lookups can reach into them
        for inst in mod.instances:
            target = self.modules.get(inst.module)
            if target is None or len(inst.args) != len(target.params):
                continue
            args: dict[str, "_Arg"] = {}
            for pname, aexpr in zip(target.params, inst.args):
                alias = self._resolve_alias(ctx, aexpr)
                if alias is not None:
                    args[pname] = _Arg("alias", alias=alias)
                else:
                    args[pname] = _Arg("value", expr=aexpr, ctx=ctx)
            child = _Ctx(target, f"{ctx.path}.{inst.name}", args)
            ctx.children[inst.name] = child
        for inst_name, child in ctx.children.items():
            self._bind_instance(child, define_stack)

        for d in mod.defines:
            self._type_define(ctx, d, define_stack)
        for rule in mod.assigns:
            var = next((v for v in mod.vars if v.name == rule.target), None)
            if var is None:
                continue
            rhs_t = self._type_rule_expr(ctx, rule.expr, define_stack)
            self._check_assign_compat(var.name, var.vartype, rhs_t, rule.span)
        for v in mod.vars:
            if isinstance(v.vartype, RangeType):
                for bound in (v.vartype.lo, v.vartype.hi):
                    t = self._type_expr(ctx, bound, define_stack)
                    if t[0] not in ("int", "error"):
                        self.error(
                            "range-bound-type",
                            f"range bound of {v.name!r} must be an integer expression",
                            v.span,
                        )

    def _resolve_alias(self, ctx: "_Ctx", expr: Expr) -> Optional["_Ctx"]:
        """If expr names an instance (directly, via a param alias, or via a
        dotted path), return that instance's context."""
        if not isinstance(expr, Name):
            return None
        cur: Optional[_Ctx] = ctx
        for i, part in enumerate(expr.parts):
            if cur is None:
                return None
            entry = cur.lookup(part)
            if entry is None:
                return None
            kind, payload = entry
            if kind == "instance":
                cur = payload
            elif kind == "param" and payload.kind == "alias":
                cur = payload.alias
            else:
                return None
        return cur

    def _type_define(self, ctx: "_Ctx", d: DefineDecl, stack: set) -> tuple:
        key = (id(ctx), d.name)
        if key in ctx.define_types:
            return ctx.define_types[key]
        if key in stack:
            self.error("define-cycle", f"combinational cycle through define {d.name!r}", d.span)
            ctx.define_types[key] = _ERROR
            return _ERROR
        stack.add(key)
        t = self._type_expr(ctx, d.expr, stack)
        stack.discard(key)
        ctx.define_types[key] = t
        return t

    def _check_assign_compat(self, name: str, vt: VarType, rhs: tuple, span) -> None:
        kind = rhs[0]
        if kind == "error":
            return
        if isinstance(vt, BoolType) and kind != "bool":
            self.error("assign-type", f"rule for boolean {name!r} produces {kind}", span)
        elif isinstance(vt, RangeType) and kind != "int":
            self.error("assign-type", f"rule for integer {name!r} produces {kind}", span)
        elif isinstance(vt, EnumType):
            if kind != "enum":
                self.error("assign-type", f"rule for enum {name!r} produces {kind}", span)
            elif rhs[1] is not None:
                extra = rhs[1] - set(vt.symbols)
                if extra:
                    self.error(
                        "assign-type",
                        f"rule for {name!r} may produce symbol(s) outside its domain: "
                        + ", ".join(sorted(extra)),
                        span,
                    )

    def _type_rule_expr(self, ctx: "_Ctx", expr: Expr, stack: set) -> tuple:
        if isinstance(expr, SetLit):
            ts = [self._type_rule_expr(ctx, item, stack) for item in expr.items]
            return self._join(ts, expr.span)
        if isinstance(expr, Case):
            for arm in expr.arms:
                self._require_bool(ctx, arm.guard, stack)
            ts = [self._type_rule_expr(ctx, arm.result, stack) for arm in expr.arms]
            return self._join(ts, expr.span)
        return self._type_expr(ctx, expr, stack)

    def _join(self, ts: list[tuple], span) -> tuple:
        kinds = {t[0] for t in ts if t[0] != "error"}
        if not kinds:
            return _ERROR
        if len(kinds) > 1:
            self.error("type-mix", f"mixed result types {sorted(kinds)}", span)
            return _ERROR
        kind = kinds.pop()
        if kind == "enum":
            syms = set()
            for t in ts:
                if t[0] == "enum":
                    if t[1] is None:
                        return _enum(None)
                    syms |= t[1]
            return _enum(frozenset(syms))
        return (kind, None)

    def _require_bool(self, ctx: "_Ctx", expr: Expr, stack: set) -> None:
        t = self._type_expr(ctx, expr, stack)
        if t[0] not in ("bool", "error"):
            self.error("guard-type", "guard must be boolean", _span_of(expr))

    def _type_expr(self, ctx: "_Ctx", expr: Expr, stack: set) -> tuple:
        if isinstance(expr, BoolLit):
            return _BOOL
        if isinstance(expr, IntLit):
            return _INT
        if isinstance(expr, Name):
            return self._type_name(ctx, expr, stack)
        if isinstance(expr, Unary):
            t = self._type_expr(ctx, expr.operand, stack)
            want = "bool" if expr.op == "!" else "int"
            if t[0] not in (want, "error"):
                self.error("op-type", f"operator {expr.op!r} needs {want}, got {t[0]}", expr.span)
                return _ERROR
            return _BOOL if want == "bool" else _INT
        if isinstance(expr, Binary):
            return self._type_binary(ctx, expr, stack)
        if isinstance(expr, Case):
            for arm in expr.arms:
                self._require_bool(ctx, arm.guard, stack)
            ts = [self._type_expr(ctx, arm.result, stack) for arm in expr.arms]
            return self._join(ts, expr.span)
        if isinstance(expr, SetLit):
            # position errors are reported by _check_choice_positions
            ts = [self._type_expr(ctx, item, stack) for item in expr.items]
            return self._join(ts, expr.span)
        raise TypeError(f"unknown expression node {expr!r}")

    def _type_binary(self, ctx: "_Ctx", expr: Binary, stack: set) -> tuple:
        lt = self._type_expr(ctx, expr.left, stack)
        rt = self._type_expr(ctx, expr.right, stack)
        op = expr.op
        if op in ("&", "|", "->"):
            for t, side in ((lt, expr.left), (rt, expr.right)):
                if t[0] not in ("bool", "error"):
                    self.error("op-type", f"operator {op!r} needs boolean operands", _span_of(side))
            return _BOOL
        if op in ("+", "-"):
            for t, side in ((lt, expr.left), (rt, expr.right)):
                if t[0] not in ("int", "error"):
                    self.error("op-type", f"operator {op!r} needs integer operands", _span_of(side))
            return _INT
        if op in ("<", "<=", ">", ">="):
            for t, side in ((lt, expr.left), (rt, expr.right)):
                if t[0] not in ("int", "error"):
                    self.error("op-type", f"comparison {op!r} needs integer operands", _span_of(side))
            return _BOOL
        # = and != : operands must share a kind; enum/symbol membership checked
        if lt[0] == "error" or rt[0] == "error":
            return _BOOL
        if lt[0] != rt[0]:
            self.error("cmp-type", f"cannot compare {lt[0]} with {rt[0]}", expr.span)
            return _BOOL
        if lt[0] == "enum" and lt[1] is not None and rt[1] is not None:
            if not (lt[1] & rt[1]):
                self.error("cmp-type", "enum comparison can never hold (disjoint symbols)", expr.span)
        return _BOOL

    def _type_name(self, ctx: "_Ctx", name: Name, stack: set) -> tuple:
        cur: _Ctx = ctx
        for i, part in enumerate(name.parts):
            last = i == len(name.parts) - 1
            entry = cur.lookup(part)
            if entry is None:
                if last and len(name.parts) == 1 and part in self.symbols:
                    return _enum(frozenset([part]))
                self.error("unresolved", f"unresolved identifier {name.text!r}", name.span)
                return _ERROR
            kind, payload = entry
            if kind == "var":
                if not last:
                    self.error("not-instance", f"{part!r} is a variable, not an instance", name.span)
                    return _ERROR
                return _type_of_var(payload)
            if kind == "define":
                if not last:
                    self.error("not-instance", f"{part!r} is a define, not an instance", name.span)
                    return _ERROR
                return self._type_define(cur, payload, stack)
            if kind == "instance":
                if last:
                    self.error("instance-value", f"instance {part!r} used as a value", name.span)
                    return _ERROR
                cur = payload
            elif kind == "param":
                arg: _Arg = payload
                if arg.kind == "alias":
                    if last:
                        self.error("instance-value", f"instance {part!r} used as a value", name.span)
                        return _ERROR
                    cur = arg.alias
                else:
                    if not last:
                        self.error("not-instance", f"parameter {part!r} is not an instance", name.span)
                        return _ERROR
                    return self._type_expr(arg.ctx, arg.expr, stack)
        return _ERROR


def _type_of_var(vt: VarType) -> tuple:
    if isinstance(vt, BoolType):
        return _BOOL
    if isinstance(vt, RangeType):
        return _INT
    if isinstance(vt, EnumType):
        return _enum(frozenset(vt.symbols))
    return _ERROR


def _span_of(expr: Expr) -> Optional[Span]:
    return getattr(expr, "span", None)


@dataclass
class _Arg:
    kind: str  # "value" | "alias"
    expr: Optional[Expr] = None
    ctx: Optional["_Ctx"] = None
    alias: Optional["_Ctx"] = None


class _Ctx:
    def __init__(self, module: ModuleDecl, path: str, args: dict[str, _Arg]):
        self.module = module
        self.path = path
        self.args = args
        self.children: dict[str, "_Ctx"] = {}
        self.define_types: dict[tuple, tuple] = {}
        self._vars = {v.name: v.vartype for v in module.vars}
        self._defines = {d.name: d for d in module.defines}
        self._instances = {i.name for i in module.instances}

    def lookup(self, name: str):
        if name in self._vars:
            return ("var", self._vars[name])
        if name in self._defines:
            return ("define", self._defines[name])
        if name in self._instances:
            child = self.children.get(name)
            if child is None:
                return None
            return ("instance", child)
        if name in self.args:
            return ("param", self.args[name])
        return None

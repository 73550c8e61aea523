"""Canonical source printer; parse_model(pretty_print(a)) reproduces a."""
from __future__ import annotations

from .ast import (
    AssignRule, Binary, BoolLit, BoolType, Case, DefineDecl, EnumType, Expr,
    InstanceDecl, IntLit, ModelAst, ModuleDecl, Name, RangeType, SetLit, Unary,
    VarDecl, VarType,
)

_PREC = {"->": 40, "|": 50, "&": 60, "=": 70, "!=": 70, "<": 70, "<=": 70,
         ">": 70, ">=": 70, "+": 80, "-": 80}
_UNARY_PREC = 90
_ATOM_PREC = 100


def pretty_print(ast: ModelAst) -> str:
    return "\n".join(_print_module(m) for m in ast.modules)


def print_expr(expr: Expr) -> str:
    return _expr(expr, 0)


def _print_module(mod: ModuleDecl) -> str:
    header = f"MODULE {mod.name}"
    if mod.params:
        header += f"({', '.join(mod.params)})"
    lines = [header]
    if mod.vars or mod.instances:
        lines.append("VAR")
        for v in mod.vars:
            lines.append(f"  {v.name} : {_type(v.vartype)};")
        for inst in mod.instances:
            if inst.args:
                args = ", ".join(_expr(a, 0) for a in inst.args)
                lines.append(f"  {inst.name} : {inst.module}({args});")
            else:
                lines.append(f"  {inst.name} : {inst.module};")
    if mod.defines:
        lines.append("DEFINE")
        for d in mod.defines:
            lines.append(f"  {d.name} := {_expr(d.expr, 0)};")
    if mod.assigns:
        lines.append("ASSIGN")
        for rule in mod.assigns:
            lines.append(f"  {rule.kind}({rule.target}) := {_expr(rule.expr, 0)};")
    lines.append("")
    return "\n".join(lines)


def _type(t: VarType) -> str:
    if isinstance(t, BoolType):
        return "boolean"
    if isinstance(t, EnumType):
        return "{" + ", ".join(t.symbols) + "}"
    if isinstance(t, RangeType):
        return f"{_expr(t.lo, _ATOM_PREC)}..{_expr(t.hi, _ATOM_PREC)}"
    raise TypeError(f"unknown type node {t!r}")


def _expr(e: Expr, parent_prec: int) -> str:
    if isinstance(e, Name):
        return e.text
    if isinstance(e, BoolLit):
        return "TRUE" if e.value else "FALSE"
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, Unary):
        inner = _expr(e.operand, _UNARY_PREC)
        text = f"{e.op}{inner}"
        return f"({text})" if parent_prec > _UNARY_PREC else text
    if isinstance(e, Binary):
        prec = _PREC[e.op]
        if e.op == "->":
            # right-associative
            left = _expr(e.left, prec + 1)
            right = _expr(e.right, prec)
        elif prec == 70:
            # comparisons do not chain
            left = _expr(e.left, prec + 1)
            right = _expr(e.right, prec + 1)
        else:
            left = _expr(e.left, prec)
            right = _expr(e.right, prec + 1)
        text = f"{left} {e.op} {right}"
        return f"({text})" if parent_prec > prec else text
    if isinstance(e, Case):
        lines = ["case"]
        for arm in e.arms:
            lines.append(f"    {_expr(arm.guard, 0)} : {_expr(arm.result, 0)};")
        lines.append("  esac")
        return "\n  ".join(lines)
    if isinstance(e, SetLit):
        return "{" + ", ".join(_expr(item, 0) for item in e.items) + "}"
    raise TypeError(f"unknown expression node {e!r}")

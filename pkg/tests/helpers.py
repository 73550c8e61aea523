"""Shared test utilities: fixture loading and seeded random generators."""
from __future__ import annotations

import random
from pathlib import Path

from fsmcheck.lang import ast

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


# --- random AST generation (round-trip property tests) -------------------

_IDENT_POOL = ["alpha", "beta", "gamma", "delta", "mode", "timer", "sig", "flag"]


def random_expr(rng: random.Random, names: list[str], depth: int = 3) -> ast.Expr:
    if depth <= 0 or rng.random() < 0.3:
        pick = rng.randrange(4)
        if pick == 0:
            return ast.BoolLit(rng.random() < 0.5)
        if pick == 1:
            return ast.IntLit(rng.randrange(-5, 20))
        if pick == 2:
            return ast.Name((rng.choice(names),))
        return ast.Name((rng.choice(names), rng.choice(names)))
    pick = rng.randrange(8)
    if pick == 0:
        return ast.Unary("!", random_expr(rng, names, depth - 1))
    if pick == 1:
        # parse canonicalizes -<int literal>, so keep the operand symbolic
        return ast.Unary("-", ast.Name((rng.choice(names),)))
    if pick < 6:
        op = rng.choice(["&", "|", "->", "=", "!=", "<", "<=", ">", ">=", "+", "-"])
        return ast.Binary(
            op,
            random_expr(rng, names, depth - 1),
            random_expr(rng, names, depth - 1),
        )
    arms = tuple(
        ast.CaseArm(random_expr(rng, names, depth - 1), random_expr(rng, names, depth - 1))
        for _ in range(rng.randrange(1, 4))
    ) + (ast.CaseArm(ast.BoolLit(True), random_expr(rng, names, depth - 1)),)
    return ast.Case(arms)


def random_rule_expr(rng: random.Random, names: list[str]) -> ast.Expr:
    if rng.random() < 0.3:
        items = tuple(random_expr(rng, names, 1) for _ in range(rng.randrange(2, 4)))
        return ast.SetLit(items)
    return random_expr(rng, names, 3)


def random_module(rng: random.Random, name: str, module_names: list[str]) -> ast.ModuleDecl:
    params = tuple(f"p{i}" for i in range(rng.randrange(0, 3)))
    names = list(_IDENT_POOL)
    n_vars = rng.randrange(1, 4)
    vars_ = []
    for i in range(n_vars):
        vname = f"v{i}"
        kind = rng.randrange(3)
        if kind == 0:
            vt = ast.BoolType()
        elif kind == 1:
            vt = ast.EnumType(tuple(rng.sample(["Aa", "Bb", "Cc", "Dd"], rng.randrange(2, 4))))
        else:
            vt = ast.RangeType(ast.IntLit(0), ast.IntLit(rng.randrange(1, 9)))
        vars_.append(ast.VarDecl(vname, vt))
        names.append(vname)
    instances = []
    if module_names and rng.random() < 0.5:
        target = rng.choice(module_names)
        args = tuple(random_expr(rng, names, 1) for _ in range(rng.randrange(0, 3)))
        instances.append(ast.InstanceDecl("sub", target, args))
    defines = []
    for i in range(rng.randrange(0, 3)):
        defines.append(ast.DefineDecl(f"d{i}", random_expr(rng, names, 2)))
    assigns = []
    for v in vars_:
        if rng.random() < 0.8:
            assigns.append(ast.AssignRule("init", v.name, random_rule_expr(rng, names)))
        if rng.random() < 0.8:
            assigns.append(ast.AssignRule("next", v.name, random_rule_expr(rng, names)))
    return ast.ModuleDecl(
        name, params, vars=tuple(vars_), instances=tuple(instances),
        defines=tuple(defines), assigns=tuple(assigns),
    )


def random_model(rng: random.Random) -> ast.ModelAst:
    others = [f"M_{i}" for i in range(rng.randrange(0, 3))]
    modules = [random_module(rng, n, []) for n in others]
    modules.append(random_module(rng, "main", others))
    return ast.ModelAst(tuple(modules))


# --- random checking workloads (oracle-equivalence suites) -----------------


def random_bool_expr(rng: random.Random, names: list[str], depth: int) -> str:
    if depth <= 0 or rng.random() < 0.35:
        name = rng.choice(names)
        return name if rng.random() < 0.7 else f"!{name}"
    op = rng.choice(["&", "|", "->"])
    return (
        f"({random_bool_expr(rng, names, depth - 1)} {op} "
        f"{random_bool_expr(rng, names, depth - 1)})"
    )


def random_bool_model(rng: random.Random, n_vars: int, n_nondet: int) -> str:
    """Boolean model source with bounded nondeterminism so full path
    enumeration stays feasible for the brute-force oracle."""
    names = [f"v{i}" for i in range(n_vars)]
    nondet = set(rng.sample(range(n_vars), min(n_nondet, n_vars)))
    lines = ["MODULE main", "VAR"]
    for n in names:
        lines.append(f"  {n} : boolean;")
    lines.append("ASSIGN")
    for i, n in enumerate(names):
        if rng.random() < 0.85:
            lines.append(f"  init({n}) := {rng.choice(['TRUE', 'FALSE'])};")
        if i in nondet:
            style = rng.randrange(3)
            if style == 0:
                pass  # free: no next rule
            elif style == 1:
                lines.append(f"  next({n}) := {{TRUE, FALSE}};")
            else:
                guard = random_bool_expr(rng, names, 1)
                lines.append(
                    f"  next({n}) := case {guard} : {{TRUE, FALSE}}; TRUE : {n}; esac;"
                )
        else:
            lines.append(f"  next({n}) := {random_bool_expr(rng, names, 2)};")
    return "\n".join(lines) + "\n"


def random_future_formula(rng: random.Random, names: list[str], depth: int) -> str:
    if depth <= 0 or rng.random() < 0.3:
        return random_bool_expr(rng, names, 1)
    pick = rng.randrange(8)
    sub = random_future_formula(rng, names, depth - 1)
    if pick == 0:
        return f"X ({sub})"
    if pick == 1:
        return f"!({sub})"
    if pick == 2:
        lo = rng.randrange(0, 3)
        return f"F[{lo},{lo + rng.randrange(0, 4)}] ({sub})"
    if pick == 3:
        lo = rng.randrange(0, 3)
        return f"G[{lo},{lo + rng.randrange(0, 4)}] ({sub})"
    other = random_future_formula(rng, names, depth - 1)
    if pick == 4:
        return f"({sub}) U ({other})"
    if pick == 5:
        return f"({sub}) R ({other})"
    op = rng.choice(["&", "|", "->"])
    return f"({sub}) {op} ({other})"


def random_past_formula(rng: random.Random, names: list[str], depth: int) -> str:
    """Formulas mixing O/Y/H (over state bodies) with future structure."""
    body = random_bool_expr(rng, names, 1)
    past = body
    for _ in range(rng.randrange(1, depth + 1)):
        past = f"{rng.choice(['O', 'Y', 'H'])} ({past})"
    shell = rng.randrange(4)
    if shell == 0:
        return past
    if shell == 1:
        return f"G[0,{rng.randrange(2, 8)}] !({past})"
    if shell == 2:
        other = random_bool_expr(rng, names, 1)
        return f"({past}) & X ({other})"
    second = f"{rng.choice(['O', 'H'])} ({random_bool_expr(rng, names, 1)})"
    return f"!(({past}) & ({second}))"

from fsmcheck.lang import parse_model, validate_model
from fsmcheck.lang import ast


def errors(model_src):
    diags = validate_model(parse_model(model_src))
    return [d for d in diags if d.severity == "error"]


def codes(model_src):
    return {d.code for d in errors(model_src)}


WELL_FORMED = """
MODULE glob
DEFINE
  T_MAX := 5;

MODULE counter(Glob, run)
VAR
  t : 0..Glob.T_MAX;
ASSIGN
  init(t) := 0;
  next(t) := case
    t = Glob.T_MAX : t;
    run : t + 1;
    TRUE : t;
  esac;

MODULE main
VAR
  go : boolean;
  g : glob;
  c : counter(g, go);
ASSIGN
  init(go) := TRUE;
  next(go) := {TRUE, FALSE};
"""


def test_well_formed_model_is_clean():
    assert errors(WELL_FORMED) == []


def test_unresolved_identifier():
    src = """
MODULE main
VAR x : boolean;
ASSIGN
  next(x) := S_ECU9;
"""
    found = errors(src)
    assert len(found) == 1
    assert found[0].code == "unresolved"
    assert "S_ECU9" in found[0].message
    assert found[0].span is not None


def test_duplicate_main():
    two_mains = ast.ModelAst(
        (
            ast.ModuleDecl("main", (), vars=(ast.VarDecl("x", ast.BoolType()),)),
            ast.ModuleDecl("main", (), vars=(ast.VarDecl("y", ast.BoolType()),)),
        )
    )
    diags = [d for d in validate_model(two_mains) if d.severity == "error"]
    assert len(diags) == 1
    assert diags[0].code == "duplicate-main"


def test_missing_main():
    assert "missing-main" in codes("MODULE other VAR x : boolean;")


def test_main_with_params():
    assert "main-params" in codes("MODULE main(p) VAR x : boolean;")


def test_case_without_default():
    src = """
MODULE main
VAR x : boolean;
ASSIGN
  next(x) := case x : FALSE; esac;
"""
    assert "case-default" in codes(src)


def test_duplicate_rule():
    src = """
MODULE main
VAR x : boolean;
ASSIGN
  init(x) := TRUE;
  init(x) := FALSE;
"""
    assert "duplicate-rule" in codes(src)


def test_set_literal_outside_rule():
    src = """
MODULE main
VAR x : boolean;
DEFINE d := {TRUE, FALSE};
"""
    assert "choice-position" in codes(src)


def test_set_literal_in_case_arm_is_fine():
    src = """
MODULE main
VAR x : boolean;
ASSIGN
  next(x) := case x : {TRUE, FALSE}; TRUE : x; esac;
"""
    assert errors(src) == []


def test_instantiation_cycle():
    src = """
MODULE a
VAR b1 : b;

MODULE b
VAR a1 : a;

MODULE main
VAR root : a;
"""
    assert "instantiation-cycle" in codes(src)


def test_arity_mismatch():
    src = """
MODULE helper(p)
VAR y : boolean;

MODULE main
VAR h : helper(TRUE, FALSE);
"""
    assert "arity" in codes(src)


def test_define_cycle():
    src = """
MODULE main
VAR x : boolean;
DEFINE
  a := b;
  b := a;
"""
    assert "define-cycle" in codes(src)


def test_type_mismatch_in_assignment():
    src = """
MODULE main
VAR x : boolean;
ASSIGN
  init(x) := 3;
"""
    assert "assign-type" in codes(src)


def test_enum_symbol_outside_domain():
    src = """
MODULE main
VAR
  s : {On, Off};
  m : {Fast, Slow};
ASSIGN
  next(s) := Fast;
"""
    assert "assign-type" in codes(src)


def test_enum_comparison_with_member_symbol():
    src = """
MODULE main
VAR s : {On, Off};
VAR x : boolean;
ASSIGN
  next(x) := s = On;
"""
    assert errors(src) == []


def test_unresolved_module():
    src = """
MODULE main
VAR h : nothere;
"""
    assert "unresolved-module" in codes(src)


def test_instance_used_as_value():
    src = """
MODULE helper
VAR y : boolean;

MODULE main
VAR
  x : boolean;
  h : helper;
ASSIGN
  next(x) := h;
"""
    assert "instance-value" in codes(src)


def test_dotted_read_of_instance_var_allowed():
    src = """
MODULE helper
VAR y : boolean;
ASSIGN
  init(y) := TRUE;

MODULE main
VAR
  x : boolean;
  h : helper;
ASSIGN
  next(x) := h.y;
"""
    assert errors(src) == []

from . import ast
from .lexer import ParseError
from .parser import parse_expr_text, parse_model
from .printer import pretty_print, print_expr
from .validate import Diagnostic, validate_model

__all__ = [
    "ast",
    "ParseError",
    "parse_model",
    "parse_expr_text",
    "pretty_print",
    "print_expr",
    "validate_model",
    "Diagnostic",
]

"""Bounded-operator expansion into X-chains of core operators."""
from __future__ import annotations

from . import formula as F


def expand_bounded(f: F.Formula) -> F.Formula:
    """Rewrite every F[a,b]/G[a,b] into nested X/|/& structure with
    identical prefix verdicts on every trace."""
    if isinstance(f, F.FinallyWithin):
        sub = expand_bounded(f.sub)
        out = _or_chain(sub, f.hi - f.lo)
        return _wrap_next(out, f.lo)
    if isinstance(f, F.GloballyWithin):
        sub = expand_bounded(f.sub)
        out = _and_chain(sub, f.hi - f.lo)
        return _wrap_next(out, f.lo)
    if isinstance(f, F.Atom):
        return f
    if isinstance(f, F.Not):
        return F.Not(expand_bounded(f.sub))
    if isinstance(f, (F.And, F.Or, F.Implies, F.Until, F.Release)):
        return type(f)(expand_bounded(f.left), expand_bounded(f.right))
    if isinstance(f, (F.Next, F.Finally_, F.Globally, F.Once, F.Yesterday, F.Historically)):
        return type(f)(expand_bounded(f.sub))
    raise TypeError(f"unknown formula node {f!r}")


def _or_chain(sub: F.Formula, n: int) -> F.Formula:
    # F[0,n] p  =  p | X(p | X(... p))
    out = sub
    for _ in range(n):
        out = F.Or(sub, F.Next(out))
    return out


def _and_chain(sub: F.Formula, n: int) -> F.Formula:
    out = sub
    for _ in range(n):
        out = F.And(sub, F.Next(out))
    return out


def _wrap_next(f: F.Formula, n: int) -> F.Formula:
    for _ in range(n):
        f = F.Next(f)
    return f

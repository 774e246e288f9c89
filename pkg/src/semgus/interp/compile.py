"""Compile formulas to Python closures over an environment dict."""

from __future__ import annotations

from typing import Any, Callable

from ..core import formula as F
from ..core.formula import App, Const, EvaluationError, Formula, Var

Env = dict
Fn = Callable[[Env], Any]


def compile_formula(f: Formula) -> Fn:
    if isinstance(f, Const):
        v = f.value
        return lambda env: v
    if isinstance(f, Var):
        name = f.name

        def var(env):
            try:
                return env[name]
            except KeyError:
                raise EvaluationError(f"unbound variable {name}") from None

        return var
    assert isinstance(f, App)
    args = [compile_formula(a) for a in f.args]
    op = f.op
    if op == "ite":
        c, a, b = args
        return lambda env: a(env) if c(env) else b(env)
    if op == "and":
        return lambda env: all(x(env) for x in args)
    if op == "or":
        return lambda env: any(x(env) for x in args)
    if op == "=>":
        a, b = args
        return lambda env: (not a(env)) or b(env)
    if op == "=" and len(args) == 2:
        a, b = args
        return lambda env: a(env) == b(env)
    if op == "not":
        (a,) = args
        return lambda env: not a(env)
    if op == "get-field":
        i = f.args[0].sort.index(f.index)
        (a,) = args
        return lambda env: a(env)[i]
    if op == "set-field":
        i = f.args[0].sort.index(f.index)
        s, x = args

        def setf(env):
            t = s(env)
            return t[:i] + (x(env),) + t[i + 1:]

        return setf
    if op == "state":
        return lambda env: tuple(x(env) for x in args)
    if len(args) == 2 and op in _BINARY:
        fn = _BINARY[op](f)
        a, b = args
        return lambda env: fn(a(env), b(env))
    apply = F._APPLY[op]
    return lambda env: apply(f, [x(env) for x in args])


def _bv(f):
    return (1 << f.sort.width) - 1 if isinstance(f.sort, F.BitVecSort) else None


def _signed(width):
    half = 1 << (width - 1)
    full = 1 << width
    return lambda v: v - full if v >= half else v


def _slt(f):
    s = _signed(f.args[0].sort.width)
    return lambda a, b: s(a) < s(b)


def _sle(f):
    s = _signed(f.args[0].sort.width)
    return lambda a, b: s(a) <= s(b)


def _bvadd(f):
    m = _bv(f)
    return lambda a, b: (a + b) & m


def _bvsub(f):
    m = _bv(f)
    return lambda a, b: (a - b) & m


_BINARY: dict[str, Callable[[App], Callable[[Any, Any], Any]]] = {
    "+": lambda f: (lambda a, b: a + b),
    "-": lambda f: (lambda a, b: a - b),
    "*": lambda f: (lambda a, b: a * b),
    "<": lambda f: (lambda a, b: a < b),
    "<=": lambda f: (lambda a, b: a <= b),
    ">": lambda f: (lambda a, b: a > b),
    ">=": lambda f: (lambda a, b: a >= b),
    "bvand": lambda f: (lambda a, b: a & b),
    "bvor": lambda f: (lambda a, b: a | b),
    "bvxor": lambda f: (lambda a, b: a ^ b),
    "bvadd": _bvadd,
    "bvsub": _bvsub,
    "bvslt": _slt,
    "bvsle": _sle,
    "bvult": lambda f: (lambda a, b: a < b),
    "bvule": lambda f: (lambda a, b: a <= b),
}

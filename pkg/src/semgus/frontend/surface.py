"""Human-readable infix rendering of terms."""

from __future__ import annotations

from ..core.grammar import Grammar, Term

_INFIX = {"+": "+", "bvadd": "+", "bvand": "&", "bvor": "|", "<": "<", "and": "&&"}


def surface(g: Grammar, t: Term) -> str:
    """Render ``t`` with while/if/:= and infix operators; unknown operators print prefix."""
    p = g.production(t.prod)
    kids = [surface(g, c) for c in t.children]
    op = p.op
    base, _, name = op.partition(".")
    if op == "while":
        return f"while {kids[0]} do {{ {kids[1]} }}"
    if op == "seq":
        return f"{kids[0]}; {kids[1]}"
    if op == "ite":
        return f"if {kids[0]} then {kids[1]} else {kids[2]}"
    if base == "assign":
        return f"{name} := {kids[0]}"
    if base == "store":
        return f"{name}[{kids[0]}] := {kids[1]}"
    if base == "select":
        return f"{name}[{kids[0]}]"
    if base == "var":
        return name
    if base == "char":
        c = int(name)
        return chr(ord("a") + c) if c < 26 else f"<{c}>"
    if op in ("bv0", "bv1"):
        return op[-1]
    if op == "eps":
        return "ε"
    if op == "empty":
        return "∅"
    if op == "alt":
        return f"({kids[0]}|{kids[1]})"
    if op == "cat":
        return kids[0] + kids[1]
    if op == "star":
        inner = kids[0]
        return f"({inner})*" if len(inner) > 1 and not inner.startswith("(") else f"{inner}*"
    if op in ("not", "bvnot"):
        return f"!{kids[0]}"
    if op in _INFIX and len(kids) == 2:
        return f"({kids[0]} {_INFIX[op]} {kids[1]})"
    if not kids:
        return op
    return f"{op}({', '.join(kids)})"

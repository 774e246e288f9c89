"""A small S-expression reader/writer for the problem format and solver output."""

from __future__ import annotations

from dataclasses import dataclass


class SExprSyntaxError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class Symbol(str):
    line = 0
    col = 0


class Keyword(str):
    """``:name`` attribute keywords (stored without the colon)."""

    line = 0
    col = 0


class Numeral(int):
    line = 0
    col = 0


class String(str):
    line = 0
    col = 0


@dataclass(frozen=True)
class BitVecLiteral:
    value: int
    width: int


class SList(list):
    line = 0
    col = 0


def _located(obj, line: int, col: int):
    obj.line = line
    obj.col = col
    return obj


def parse_sexprs(text: str) -> list:
    """Read every top-level S-expression in ``text``."""
    items, pos, line, col = [], 0, 1, 1
    stack: list[SList] = []
    n = len(text)

    def emit(obj):
        if stack:
            stack[-1].append(obj)
        else:
            items.append(obj)

    while pos < n:
        ch = text[pos]
        if ch == "\n":
            pos, line, col = pos + 1, line + 1, 1
            continue
        if ch.isspace():
            pos, col = pos + 1, col + 1
            continue
        if ch == ";":
            while pos < n and text[pos] != "\n":
                pos += 1
            continue
        if ch == "(":
            stack.append(_located(SList(), line, col))
            pos, col = pos + 1, col + 1
            continue
        if ch == ")":
            if not stack:
                raise SExprSyntaxError("unbalanced ')'", line, col)
            done = stack.pop()
            emit(done)
            pos, col = pos + 1, col + 1
            continue
        start_line, start_col = line, col
        if ch == '"':
            end = pos + 1
            buf = []
            while True:
                if end >= n:
                    raise SExprSyntaxError("unterminated string", start_line, start_col)
                if text[end] == '"':
                    if end + 1 < n and text[end + 1] == '"':
                        buf.append('"')
                        end += 2
                        continue
                    break
                buf.append(text[end])
                end += 1
            emit(_located(String("".join(buf)), start_line, start_col))
            consumed = text[pos:end + 1]
        elif ch == "|":
            end = text.find("|", pos + 1)
            if end < 0:
                raise SExprSyntaxError("unterminated quoted symbol", start_line, start_col)
            emit(_located(Symbol(text[pos + 1:end]), start_line, start_col))
            consumed = text[pos:end + 1]
        else:
            end = pos
            while end < n and not text[end].isspace() and text[end] not in '();"':
                end += 1
            tok = text[pos:end]
            emit(_atom(tok, start_line, start_col))
            consumed = tok
        newlines = consumed.count("\n")
        if newlines:
            line += newlines
            col = len(consumed) - consumed.rfind("\n")
        else:
            col += len(consumed)
        pos += len(consumed)
    if stack:
        raise SExprSyntaxError("unbalanced '('", stack[-1].line, stack[-1].col)
    return items


def _atom(tok: str, line: int, col: int):
    if tok.startswith("#b") and len(tok) > 2 and set(tok[2:]) <= {"0", "1"}:
        return BitVecLiteral(int(tok[2:], 2), len(tok) - 2)
    if tok.startswith("#x") and len(tok) > 2:
        try:
            return BitVecLiteral(int(tok[2:], 16), 4 * (len(tok) - 2))
        except ValueError:
            pass
    if tok.isdigit() or (tok.startswith("-") and tok[1:].isdigit()):
        return _located(Numeral(int(tok)), line, col)
    if tok.startswith(":") and len(tok) > 1:
        return _located(Keyword(tok[1:]), line, col)
    return _located(Symbol(tok), line, col)


def location(obj) -> tuple[int, int]:
    return getattr(obj, "line", 0), getattr(obj, "col", 0)


_SIMPLE = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789~!@$%^&*_-+=<>.?/")


def write_symbol(name: str) -> str:
    if name and set(name) <= _SIMPLE and not name[0].isdigit():
        return name
    return f"|{name}|"


def write_sexpr(obj) -> str:
    if isinstance(obj, (list, tuple)):
        return "(" + " ".join(write_sexpr(o) for o in obj) + ")"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, Keyword):
        return ":" + obj
    if isinstance(obj, String):
        return '"' + obj.replace('"', '""') + '"'
    if isinstance(obj, BitVecLiteral):
        return "#b" + format(obj.value, f"0{obj.width}b")
    if isinstance(obj, int):
        return str(obj) if obj >= 0 else f"(- {-obj})"
    return str(obj)

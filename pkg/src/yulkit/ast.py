"""Abstract syntax trees for Yul.

Nodes are immutable dataclasses compared structurally.  Literals keep their
lexical form (digits, escapes, hex case) so that printing a tree and parsing
the result yields an identical tree.  Types and source positions are not
represented: the dialect handled here is untyped, and comments/whitespace are
formatting, not syntax.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from ._stack import ensure_recursion_headroom

KEYWORDS = frozenset(
    "let function if switch case default for break continue leave true false".split()
)

_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*\Z")
_HEX_RE = re.compile(r"[0-9a-fA-F]*\Z")
_DEC_RE = re.compile(r"[0-9]+\Z")

# escape code -> the byte it denotes
SIMPLE_ESCAPES = {"\\": 0x5C, '"': 0x22, "'": 0x27, "n": 0x0A, "r": 0x0D, "t": 0x09}


@dataclass(frozen=True)
class Identifier:
    """A Yul identifier.  Keywords are not identifiers; dots are not allowed
    (dotted names are paths of several identifiers)."""

    text: str

    def __post_init__(self) -> None:
        if not _IDENT_RE.match(self.text):
            raise ValueError(f"malformed identifier: {self.text!r}")
        if self.text in KEYWORDS:
            raise ValueError(f"keyword used as identifier: {self.text!r}")

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Path:
    """One or more identifiers separated by dots.  Paths of length > 1 are
    accepted by the grammar but rejected by the static checker."""

    parts: Tuple[Identifier, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("empty path")

    def __str__(self) -> str:
        return ".".join(p.text for p in self.parts)


def path_of(name: str) -> Path:
    """Convenience constructor for single-identifier paths."""
    return Path((Identifier(name),))


# --- string literal elements -------------------------------------------------

@dataclass(frozen=True)
class RawChar:
    """A character written as itself inside a plain string literal."""

    char: str

    def __post_init__(self) -> None:
        c = self.char
        if len(c) != 1 or c in ('"', "\\") or ord(c) < 0x20:
            raise ValueError(f"character must be escaped in a string literal: {c!r}")


@dataclass(frozen=True)
class SimpleEscape:
    r"""A backslash escape: one of \\ \" \' \n \r \t."""

    code: str

    def __post_init__(self) -> None:
        if self.code not in SIMPLE_ESCAPES:
            raise ValueError(f"unknown escape code: {self.code!r}")


@dataclass(frozen=True)
class HexEscape:
    r"""A \xNN escape denoting one byte."""

    digits: str

    def __post_init__(self) -> None:
        if len(self.digits) != 2 or not _HEX_RE.match(self.digits):
            raise ValueError(f"\\x escape needs two hex digits: {self.digits!r}")


StrElement = Union[RawChar, SimpleEscape, HexEscape]


# --- literals -----------------------------------------------------------------

class Literal:
    """Base class for literals."""

    __slots__ = ()


@dataclass(frozen=True)
class TrueLit(Literal):
    pass


@dataclass(frozen=True)
class FalseLit(Literal):
    pass


@dataclass(frozen=True)
class DecNumber(Literal):
    """A decimal numeral.  Leading zeros are not canonical and are rejected,
    so every well-formed tree prints to a parseable numeral."""

    digits: str

    def __post_init__(self) -> None:
        if not _DEC_RE.match(self.digits):
            raise ValueError(f"malformed decimal numeral: {self.digits!r}")
        if len(self.digits) > 1 and self.digits[0] == "0":
            raise ValueError(f"leading zeros in decimal numeral: {self.digits!r}")


@dataclass(frozen=True)
class HexNumber(Literal):
    """A 0x-prefixed numeral; digit case and leading zeros are preserved."""

    digits: str

    def __post_init__(self) -> None:
        if not self.digits or not _HEX_RE.match(self.digits):
            raise ValueError(f"malformed hex numeral: {self.digits!r}")


@dataclass(frozen=True)
class PlainString(Literal):
    """A double-quoted string, kept as the written sequence of characters and
    escapes."""

    elements: Tuple[StrElement, ...]


@dataclass(frozen=True)
class HexString(Literal):
    """A hex"..." literal: an even number of hex digits denoting bytes."""

    digits: str

    def __post_init__(self) -> None:
        if not _HEX_RE.match(self.digits):
            raise ValueError(f"malformed hex string body: {self.digits!r}")
        if len(self.digits) % 2 != 0:
            raise ValueError("hex string needs an even number of digits")


# --- expressions ----------------------------------------------------------------

class Expression:
    """Base class for expressions."""

    __slots__ = ()


@dataclass(frozen=True)
class FunCall:
    name: Identifier
    args: Tuple[Expression, ...]


@dataclass(frozen=True)
class PathExpr(Expression):
    path: Path


@dataclass(frozen=True)
class LiteralExpr(Expression):
    literal: Literal


@dataclass(frozen=True)
class FunCallExpr(Expression):
    call: FunCall


# --- statements -----------------------------------------------------------------

class Statement:
    """Base class for statements."""

    __slots__ = ()


@dataclass(frozen=True)
class Block:
    statements: Tuple[Statement, ...]


@dataclass(frozen=True)
class BlockStmt(Statement):
    block: Block


@dataclass(frozen=True)
class VariableSingle(Statement):
    name: Identifier
    init: Optional[Expression]


@dataclass(frozen=True)
class VariableMulti(Statement):
    """`let a, b, ... := f(...)` — two or more names, initializer (if any)
    must be a function call."""

    names: Tuple[Identifier, ...]
    init: Optional[FunCall]

    def __post_init__(self) -> None:
        if len(self.names) < 2:
            raise ValueError("multi-variable declaration needs at least two names")


@dataclass(frozen=True)
class AssignSingle(Statement):
    target: Path
    value: Expression


@dataclass(frozen=True)
class AssignMulti(Statement):
    targets: Tuple[Path, ...]
    value: FunCall

    def __post_init__(self) -> None:
        if len(self.targets) < 2:
            raise ValueError("multi-assignment needs at least two targets")


@dataclass(frozen=True)
class FunCallStmt(Statement):
    call: FunCall


@dataclass(frozen=True)
class If(Statement):
    test: Expression
    body: Block


@dataclass(frozen=True)
class SwCase:
    value: Literal
    body: Block


@dataclass(frozen=True)
class Switch(Statement):
    target: Expression
    cases: Tuple[SwCase, ...]
    default: Optional[Block]


@dataclass(frozen=True)
class For(Statement):
    init: Block
    test: Expression
    update: Block
    body: Block


@dataclass(frozen=True)
class Break(Statement):
    pass


@dataclass(frozen=True)
class Continue(Statement):
    pass


@dataclass(frozen=True)
class Leave(Statement):
    pass


@dataclass(frozen=True)
class FunDef:
    """A function definition.  Input and output names must be distinct from
    each other and across the two lists."""

    name: Identifier
    inputs: Tuple[Identifier, ...]
    outputs: Tuple[Identifier, ...]
    body: Block

    def __post_init__(self) -> None:
        names = [i.text for i in self.inputs] + [o.text for o in self.outputs]
        if len(set(names)) != len(names):
            raise ValueError(f"repeated parameter name in function {self.name.text}")


@dataclass(frozen=True)
class FunDefStmt(Statement):
    fundef: FunDef


Node = Union[Block, Statement, Expression, Literal, Path, FunCall, FunDef, SwCase]


# --- structural utilities --------------------------------------------------------

def hoisted_fundefs(block: Block) -> Tuple[FunDef, ...]:
    """The function definitions appearing directly in a block, in order.
    These are the definitions a block makes visible throughout itself."""
    return tuple(s.fundef for s in block.statements if isinstance(s, FunDefStmt))


def declared_names(node: Node) -> Tuple[frozenset, frozenset]:
    """All names declared anywhere in the tree, as a pair (variable names,
    function names).  Variables include let-bound names and function
    parameters/results; collection recurses into nested function bodies."""
    vacc: set = set()
    facc: set = set()
    _collect_declared(node, vacc, facc)
    return frozenset(vacc), frozenset(facc)


def _collect_declared(node: Node, vacc: set, facc: set) -> None:
    if isinstance(node, Block):
        for s in node.statements:
            _collect_declared(s, vacc, facc)
    elif isinstance(node, BlockStmt):
        _collect_declared(node.block, vacc, facc)
    elif isinstance(node, VariableSingle):
        vacc.add(node.name.text)
    elif isinstance(node, VariableMulti):
        vacc.update(n.text for n in node.names)
    elif isinstance(node, If):
        _collect_declared(node.body, vacc, facc)
    elif isinstance(node, Switch):
        for c in node.cases:
            _collect_declared(c.body, vacc, facc)
        if node.default is not None:
            _collect_declared(node.default, vacc, facc)
    elif isinstance(node, For):
        for part in (node.init, node.update, node.body):
            _collect_declared(part, vacc, facc)
    elif isinstance(node, FunDefStmt):
        fd = node.fundef
        facc.add(fd.name.text)
        vacc.update(i.text for i in fd.inputs)
        vacc.update(o.text for o in fd.outputs)
        _collect_declared(fd.body, vacc, facc)
    # assignments, calls, control statements: no declarations


# --- printing --------------------------------------------------------------------

def to_source(node: Node, indent: str = "    ") -> str:
    """Render a tree as Yul source.  The output parses back to a structurally
    equal tree.  Blocks are laid out one statement per line, except that `for`
    headers and blocks holding at most one simple statement stay on one line
    (`{ let x }`, `{ leave }`)."""
    ensure_recursion_headroom()
    if isinstance(node, Block):
        return _block(node, 0, indent)
    if isinstance(node, Statement):
        return _statement(node, 0, indent)
    if isinstance(node, Expression):
        return _expression(node)
    if isinstance(node, Literal):
        return _literal(node)
    if isinstance(node, Path):
        return str(node)
    if isinstance(node, FunCall):
        return _funcall(node)
    if isinstance(node, FunDef):
        return _fundef_head(node) + " " + _block(node.body, 0, indent)
    if isinstance(node, SwCase):
        return "case " + _literal(node.value) + " " + _block(node.body, 0, indent)
    raise TypeError(f"cannot print {type(node).__name__}")


_SIMPLE_STATEMENTS = (
    VariableSingle, VariableMulti, AssignSingle, AssignMulti,
    FunCallStmt, Break, Continue, Leave,
)


def _block(block: Block, depth: int, indent: str) -> str:
    if len(block.statements) <= 1 and all(
        isinstance(s, _SIMPLE_STATEMENTS) for s in block.statements
    ):
        return _block_inline(block)
    inner = indent * (depth + 1)
    lines = [_statement(s, depth + 1, indent) for s in block.statements]
    body = "\n".join(inner + line for line in lines)
    return "{\n" + body + "\n" + indent * depth + "}"


def _block_inline(block: Block) -> str:
    if not block.statements:
        return "{ }"
    return "{ " + " ".join(_statement_inline(s) for s in block.statements) + " }"


def _statement(stmt: Statement, depth: int, indent: str) -> str:
    if isinstance(stmt, BlockStmt):
        return _block(stmt.block, depth, indent)
    if isinstance(stmt, If):
        return "if " + _expression(stmt.test) + " " + _block(stmt.body, depth, indent)
    if isinstance(stmt, Switch):
        parts = ["switch " + _expression(stmt.target)]
        for c in stmt.cases:
            parts.append("case " + _literal(c.value) + " " + _block(c.body, depth, indent))
        if stmt.default is not None:
            parts.append("default " + _block(stmt.default, depth, indent))
        return ("\n" + indent * depth).join(parts)
    if isinstance(stmt, For):
        head = "for {} {} {} ".format(
            _block_inline(stmt.init),
            _expression(stmt.test),
            _block_inline(stmt.update),
        )
        return head + _block(stmt.body, depth, indent)
    if isinstance(stmt, FunDefStmt):
        return _fundef_head(stmt.fundef) + " " + _block(stmt.fundef.body, depth, indent)
    return _statement_inline(stmt)


def _statement_inline(stmt: Statement) -> str:
    if isinstance(stmt, BlockStmt):
        return _block_inline(stmt.block)
    if isinstance(stmt, VariableSingle):
        head = "let " + stmt.name.text
        return head if stmt.init is None else head + " := " + _expression(stmt.init)
    if isinstance(stmt, VariableMulti):
        head = "let " + ", ".join(n.text for n in stmt.names)
        return head if stmt.init is None else head + " := " + _funcall(stmt.init)
    if isinstance(stmt, AssignSingle):
        return str(stmt.target) + " := " + _expression(stmt.value)
    if isinstance(stmt, AssignMulti):
        return ", ".join(str(t) for t in stmt.targets) + " := " + _funcall(stmt.value)
    if isinstance(stmt, FunCallStmt):
        return _funcall(stmt.call)
    if isinstance(stmt, If):
        return "if " + _expression(stmt.test) + " " + _block_inline(stmt.body)
    if isinstance(stmt, Switch):
        parts = ["switch " + _expression(stmt.target)]
        for c in stmt.cases:
            parts.append("case " + _literal(c.value) + " " + _block_inline(c.body))
        if stmt.default is not None:
            parts.append("default " + _block_inline(stmt.default))
        return " ".join(parts)
    if isinstance(stmt, For):
        return "for {} {} {} {}".format(
            _block_inline(stmt.init),
            _expression(stmt.test),
            _block_inline(stmt.update),
            _block_inline(stmt.body),
        )
    if isinstance(stmt, Break):
        return "break"
    if isinstance(stmt, Continue):
        return "continue"
    if isinstance(stmt, Leave):
        return "leave"
    if isinstance(stmt, FunDefStmt):
        return _fundef_head(stmt.fundef) + " " + _block_inline(stmt.fundef.body)
    raise TypeError(f"cannot print {type(stmt).__name__}")


def _fundef_head(fd: FunDef) -> str:
    head = "function {}({})".format(fd.name.text, ", ".join(i.text for i in fd.inputs))
    if fd.outputs:
        head += " -> " + ", ".join(o.text for o in fd.outputs)
    return head


def _expression(expr: Expression) -> str:
    if isinstance(expr, PathExpr):
        return str(expr.path)
    if isinstance(expr, LiteralExpr):
        return _literal(expr.literal)
    if isinstance(expr, FunCallExpr):
        return _funcall(expr.call)
    raise TypeError(f"cannot print {type(expr).__name__}")


def _funcall(call: FunCall) -> str:
    return call.name.text + "(" + ", ".join(_expression(a) for a in call.args) + ")"


def _literal(lit: Literal) -> str:
    if isinstance(lit, TrueLit):
        return "true"
    if isinstance(lit, FalseLit):
        return "false"
    if isinstance(lit, DecNumber):
        return lit.digits
    if isinstance(lit, HexNumber):
        return "0x" + lit.digits
    if isinstance(lit, PlainString):
        return '"' + "".join(_str_element(e) for e in lit.elements) + '"'
    if isinstance(lit, HexString):
        return 'hex"' + lit.digits + '"'
    raise TypeError(f"cannot print {type(lit).__name__}")


def _str_element(el: StrElement) -> str:
    if isinstance(el, RawChar):
        return el.char
    if isinstance(el, SimpleEscape):
        return "\\" + el.code
    return "\\x" + el.digits

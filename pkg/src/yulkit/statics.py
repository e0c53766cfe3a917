"""Static safety checking for Yul.

A statement is safe when every referenced name resolves, every call has the
right arity and result count, literals fit the 256-bit value type, and
break/continue/leave appear only where an enclosing construct absorbs them.
The checker computes, per statement, the set of variables visible after it and
the set of modes in which it can terminate (regular, break, continue, leave);
mode sets are over-approximations, so statements that can never complete
regularly still contribute their modes even when unreachable.

Scoping rules: a variable is visible from just after its declaration to the
end of the enclosing block (for-loop initializers extend to the whole loop);
a function is visible in the whole block where it is defined, including before
the definition; variable accessibility stops at function boundaries, function
accessibility does not.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

from ._stack import ensure_recursion_headroom
from .ast import (
    AssignMulti,
    AssignSingle,
    Block,
    BlockStmt,
    Break,
    Continue,
    DecNumber,
    Expression,
    FalseLit,
    For,
    FunCall,
    FunCallExpr,
    FunCallStmt,
    FunDef,
    FunDefStmt,
    HexEscape,
    HexNumber,
    HexString,
    If,
    Leave,
    Literal,
    LiteralExpr,
    Path,
    PathExpr,
    PlainString,
    RawChar,
    SIMPLE_ESCAPES,
    Statement,
    Switch,
    TrueLit,
    VariableMulti,
    VariableSingle,
    hoisted_fundefs,
)

# A variable table is a set of names; a function table maps a name to its
# (inputs, outputs) arity pair.
VarTable = FrozenSet[str]
FunTable = Mapping[str, Tuple[int, int]]

BlockObserver = Callable[[Block, FunTable], None]


class Mode(enum.Enum):
    """The four ways a statement can terminate."""

    REGULAR = "regular"
    BREAK = "break"
    CONTINUE = "continue"
    LEAVE = "leave"


REGULAR_ONLY: FrozenSet[Mode] = frozenset({Mode.REGULAR})
_REGULAR_OR_LEAVE: FrozenSet[Mode] = frozenset({Mode.REGULAR, Mode.LEAVE})


class ErrorKind(enum.Enum):
    UNKNOWN_VAR = "unknown-var"
    UNKNOWN_FUN = "unknown-fun"
    DUPLICATE_VAR = "duplicate-var"
    DUPLICATE_FUN = "duplicate-fun"
    ARITY_MISMATCH = "arity-mismatch"
    RESULT_COUNT_MISMATCH = "result-count-mismatch"
    LITERAL_TOO_LARGE = "literal-too-large"
    STRING_TOO_LONG = "string-too-long"
    BAD_PATH = "bad-path"
    MODE_VIOLATION = "mode-violation"
    DUPLICATE_CASE = "duplicate-case"
    NON_SINGLE_VALUE = "non-single-value"


class StaticError(Exception):
    """Raised when a safety check fails."""

    def __init__(self, kind: ErrorKind, context: str):
        super().__init__(f"{kind.value}: {context}")
        self.kind = kind
        self.context = context


@dataclass(frozen=True)
class VarsModes:
    """Result of checking a statement: variables visible afterwards, and the
    possible termination modes."""

    vars: VarTable
    modes: FrozenSet[Mode]


# --- literals ---------------------------------------------------------------
#
# The bound checks work on digit counts and byte counts, without constructing
# the value; dynamics.eval_literal independently builds the value, and the two
# routes are required to agree on which literals they accept.

_DEC_LIMIT = str(1 << 256)  # 78 digits; a numeral is safe iff below this


def check_safe_literal(lit: Literal) -> None:
    """Check that a literal denotes a value below 2^256 (strings: at most 32
    bytes)."""
    if isinstance(lit, (TrueLit, FalseLit)):
        return
    if isinstance(lit, DecNumber):
        d = lit.digits
        if len(d) > len(_DEC_LIMIT) or (len(d) == len(_DEC_LIMIT) and d >= _DEC_LIMIT):
            raise StaticError(ErrorKind.LITERAL_TOO_LARGE, f"decimal numeral {d}")
        return
    if isinstance(lit, HexNumber):
        if len(lit.digits.lstrip("0")) > 64:
            raise StaticError(ErrorKind.LITERAL_TOO_LARGE, f"hex numeral 0x{lit.digits}")
        return
    if isinstance(lit, PlainString):
        nbytes = 0
        for el in lit.elements:
            nbytes += len(el.char.encode("utf-8")) if isinstance(el, RawChar) else 1
        if nbytes > 32:
            raise StaticError(ErrorKind.STRING_TOO_LONG, f"string literal is {nbytes} bytes")
        return
    if isinstance(lit, HexString):
        nbytes = len(lit.digits) // 2
        if nbytes > 32:
            raise StaticError(ErrorKind.STRING_TOO_LONG, f"hex string is {nbytes} bytes")
        return
    raise TypeError(f"not a literal: {type(lit).__name__}")


def _literal_key(lit: Literal) -> int:
    # 256-bit value used only for case distinctness; bound-checked already.
    if isinstance(lit, TrueLit):
        return 1
    if isinstance(lit, FalseLit):
        return 0
    if isinstance(lit, DecNumber):
        return int(lit.digits)
    if isinstance(lit, HexNumber):
        return int(lit.digits, 16)
    if isinstance(lit, PlainString):
        out = bytearray()
        for el in lit.elements:
            if isinstance(el, RawChar):
                out.extend(el.char.encode("utf-8"))
            elif isinstance(el, HexEscape):
                out.append(int(el.digits, 16))
            else:
                out.append(SIMPLE_ESCAPES[el.code])
        return int.from_bytes(bytes(out), "big") if out else 0
    if isinstance(lit, HexString):
        return int(lit.digits, 16) if lit.digits else 0
    raise TypeError(f"not a literal: {type(lit).__name__}")


# --- expressions ------------------------------------------------------------

def _check_path(path: Path, vars: VarTable) -> str:
    if len(path.parts) != 1:
        raise StaticError(ErrorKind.BAD_PATH, f"multi-part path {path}")
    name = path.parts[0].text
    if name not in vars:
        raise StaticError(ErrorKind.UNKNOWN_VAR, name)
    return name


def check_safe_expression(expr: Expression, vars: VarTable, funs: FunTable) -> int:
    """Check an expression; return the number of values it yields."""
    if isinstance(expr, PathExpr):
        _check_path(expr.path, vars)
        return 1
    if isinstance(expr, LiteralExpr):
        check_safe_literal(expr.literal)
        return 1
    if isinstance(expr, FunCallExpr):
        return check_safe_funcall(expr.call, vars, funs)
    raise TypeError(f"not an expression: {type(expr).__name__}")


def check_safe_funcall(call: FunCall, vars: VarTable, funs: FunTable) -> int:
    """Check a function call; return its result count."""
    name = call.name.text
    if name not in funs:
        raise StaticError(ErrorKind.UNKNOWN_FUN, name)
    n_in, n_out = funs[name]
    if len(call.args) != n_in:
        raise StaticError(
            ErrorKind.ARITY_MISMATCH,
            f"{name} takes {n_in} argument(s), got {len(call.args)}",
        )
    for arg in call.args:
        if check_safe_expression(arg, vars, funs) != 1:
            raise StaticError(ErrorKind.NON_SINGLE_VALUE, f"argument of {name}")
    return n_out


# --- statements and blocks ----------------------------------------------------

def _check_single_value(expr: Expression, vars: VarTable, funs: FunTable, what: str) -> None:
    if check_safe_expression(expr, vars, funs) != 1:
        raise StaticError(ErrorKind.NON_SINGLE_VALUE, what)


def _declare(vars: VarTable, name: str) -> VarTable:
    if name in vars:
        raise StaticError(ErrorKind.DUPLICATE_VAR, name)
    return vars | {name}


def _extend_funtable(funs: FunTable, fundefs: Iterable[FunDef]) -> Dict[str, Tuple[int, int]]:
    table = dict(funs)
    for fd in fundefs:
        name = fd.name.text
        if name in table:
            raise StaticError(ErrorKind.DUPLICATE_FUN, name)
        table[name] = (len(fd.inputs), len(fd.outputs))
    return table


def check_safe_statement(
    stmt: Statement,
    vars: VarTable,
    funs: FunTable,
    block_observer: Optional[BlockObserver] = None,
) -> VarsModes:
    """Check one statement.  `funs` must already contain the functions hoisted
    from the enclosing block.  Returns the variables visible after the
    statement and its possible termination modes."""
    vars = frozenset(vars)

    if isinstance(stmt, BlockStmt):
        modes = check_safe_block(stmt.block, vars, funs, block_observer)
        return VarsModes(vars, modes)

    if isinstance(stmt, VariableSingle):
        if stmt.init is not None:
            _check_single_value(stmt.init, vars, funs, f"initializer of {stmt.name.text}")
        return VarsModes(_declare(vars, stmt.name.text), REGULAR_ONLY)

    if isinstance(stmt, VariableMulti):
        if stmt.init is not None:
            got = check_safe_funcall(stmt.init, vars, funs)
            if got != len(stmt.names):
                raise StaticError(
                    ErrorKind.RESULT_COUNT_MISMATCH,
                    f"declaring {len(stmt.names)} variables from {got} result(s)",
                )
        out = vars
        for name in stmt.names:
            out = _declare(out, name.text)
        return VarsModes(out, REGULAR_ONLY)

    if isinstance(stmt, AssignSingle):
        _check_path(stmt.target, vars)
        _check_single_value(stmt.value, vars, funs, f"value assigned to {stmt.target}")
        return VarsModes(vars, REGULAR_ONLY)

    if isinstance(stmt, AssignMulti):
        seen = set()
        for target in stmt.targets:
            name = _check_path(target, vars)
            if name in seen:
                raise StaticError(ErrorKind.DUPLICATE_VAR, f"assignment target {name}")
            seen.add(name)
        got = check_safe_funcall(stmt.value, vars, funs)
        if got != len(stmt.targets):
            raise StaticError(
                ErrorKind.RESULT_COUNT_MISMATCH,
                f"assigning {len(stmt.targets)} targets from {got} result(s)",
            )
        return VarsModes(vars, REGULAR_ONLY)

    if isinstance(stmt, FunCallStmt):
        got = check_safe_funcall(stmt.call, vars, funs)
        if got != 0:
            raise StaticError(
                ErrorKind.RESULT_COUNT_MISMATCH,
                f"call statement discards {got} result(s) of {stmt.call.name.text}",
            )
        return VarsModes(vars, REGULAR_ONLY)

    if isinstance(stmt, If):
        _check_single_value(stmt.test, vars, funs, "if condition")
        modes = check_safe_block(stmt.body, vars, funs, block_observer)
        return VarsModes(vars, modes | {Mode.REGULAR})

    if isinstance(stmt, Switch):
        _check_single_value(stmt.target, vars, funs, "switch target")
        if not stmt.cases and stmt.default is None:
            raise StaticError(ErrorKind.MODE_VIOLATION, "switch with no cases and no default")
        seen_values = set()
        modes: FrozenSet[Mode] = frozenset()
        for case in stmt.cases:
            check_safe_literal(case.value)
            key = _literal_key(case.value)
            if key in seen_values:
                raise StaticError(ErrorKind.DUPLICATE_CASE, f"case value {key}")
            seen_values.add(key)
            modes |= check_safe_block(case.body, vars, funs, block_observer)
        if stmt.default is not None:
            modes |= check_safe_block(stmt.default, vars, funs, block_observer)
        else:
            modes |= {Mode.REGULAR}
        return VarsModes(vars, modes)

    if isinstance(stmt, For):
        # Declarations and definitions in the init block scope over the whole
        # loop; its functions are hoisted before its statements are checked.
        loop_funs = _extend_funtable(funs, hoisted_fundefs(stmt.init))
        init = check_safe_statement_list(stmt.init.statements, vars, loop_funs, block_observer)
        if not init.modes <= _REGULAR_OR_LEAVE:
            raise StaticError(ErrorKind.MODE_VIOLATION, "break/continue in loop initializer")
        _check_single_value(stmt.test, init.vars, loop_funs, "loop condition")
        body_modes = check_safe_block(stmt.body, init.vars, loop_funs, block_observer)
        update_modes = check_safe_block(stmt.update, init.vars, loop_funs, block_observer)
        if not update_modes <= _REGULAR_OR_LEAVE:
            raise StaticError(ErrorKind.MODE_VIOLATION, "break/continue in loop update")
        modes = {Mode.REGULAR}
        if Mode.LEAVE in (init.modes | body_modes | update_modes):
            modes.add(Mode.LEAVE)
        return VarsModes(vars, frozenset(modes))

    if isinstance(stmt, Break):
        return VarsModes(vars, frozenset({Mode.BREAK}))
    if isinstance(stmt, Continue):
        return VarsModes(vars, frozenset({Mode.CONTINUE}))
    if isinstance(stmt, Leave):
        return VarsModes(vars, frozenset({Mode.LEAVE}))

    if isinstance(stmt, FunDefStmt):
        fd = stmt.fundef
        # Accessibility of variables stops at the function boundary: the body
        # sees only the inputs and outputs.  Functions stay accessible.
        fvars = frozenset(p.text for p in fd.inputs + fd.outputs)
        body_modes = check_safe_block(fd.body, fvars, funs, block_observer)
        if not body_modes <= _REGULAR_OR_LEAVE:
            raise StaticError(
                ErrorKind.MODE_VIOLATION, f"break/continue escapes function {fd.name.text}"
            )
        return VarsModes(vars, REGULAR_ONLY)

    raise TypeError(f"not a statement: {type(stmt).__name__}")


def check_safe_statement_list(
    stmts: Iterable[Statement],
    vars: VarTable,
    funs: FunTable,
    block_observer: Optional[BlockObserver] = None,
) -> VarsModes:
    """Check statements left to right, threading the variable table.  The mode
    set collects every non-regular mode any statement can produce, plus
    regular iff every statement can complete regularly (dead statements after
    a terminator are checked and still contribute)."""
    vars = frozenset(vars)
    nonregular: FrozenSet[Mode] = frozenset()
    all_regular = True
    for stmt in stmts:
        vm = check_safe_statement(stmt, vars, funs, block_observer)
        vars = vm.vars
        nonregular |= vm.modes - {Mode.REGULAR}
        if Mode.REGULAR not in vm.modes:
            all_regular = False
    modes = nonregular | ({Mode.REGULAR} if all_regular else frozenset())
    return VarsModes(vars, modes)


def check_safe_block(
    block: Block,
    vars: VarTable,
    funs: FunTable,
    block_observer: Optional[BlockObserver] = None,
) -> FrozenSet[Mode]:
    """Check a block; return its possible termination modes.  Local names do
    not escape.  `block_observer`, if given, is called with each block and the
    function table in force inside it (used by instrumented runs)."""
    inner_funs = _extend_funtable(funs, hoisted_fundefs(block))
    if block_observer is not None:
        block_observer(block, inner_funs)
    return check_safe_statement_list(block.statements, frozenset(vars), inner_funs, block_observer).modes


def check_safe_top(block: Block, dialect_funs: FunTable) -> None:
    """Check a whole program: no visible variables, the dialect's builtins as
    the initial function table, and regular termination only."""
    ensure_recursion_headroom()
    modes = check_safe_block(block, frozenset(), dialect_funs)
    if modes != REGULAR_ONLY:
        stray = sorted(m.value for m in modes - {Mode.REGULAR}) or ["none"]
        raise StaticError(
            ErrorKind.MODE_VIOLATION,
            f"top-level block may terminate with mode(s): {', '.join(stray)}",
        )


def fun_table_of(block: Block) -> Dict[str, Tuple[int, int]]:
    """Arity table of the block's hoisted function definitions."""
    return _extend_funtable({}, hoisted_fundefs(block))

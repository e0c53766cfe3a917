"""Two code transformations and the shape restrictions tied to them.

`for_loop_init_rewrite` hoists every loop's initializer in front of the loop,
wrapped in a fresh block, leaving all loops with empty initializers; this is
the precondition under which dead-code elimination preserves static safety.
`dead_code_eliminate` removes the statements of a block that follow a literal
break/continue/leave.  Both rebuild trees structurally, never rename, and
preserve the lexical form of literals.

Correctness of dead-code elimination additionally needs `nofun` on the code
being transformed (a function defined after a terminator is still callable
before it — deleting the definition changes behavior), which is why the
predicates live here alongside the transformations.
"""

from __future__ import annotations

from typing import Union

from .ast import (
    Block,
    BlockStmt,
    Break,
    Continue,
    For,
    FunDef,
    FunDefStmt,
    If,
    Leave,
    Statement,
    SwCase,
    Switch,
)
from .dynamics import CState, EvalError, FunEnv, FunInfo, SOutcome

_TERMINATORS = (Break, Continue, Leave)


# --- loop-initializer hoisting ---------------------------------------------------

def statement_loop_init(stmt: Statement) -> Statement:
    """Statement-level loop-initializer rewrite."""
    if isinstance(stmt, BlockStmt):
        return BlockStmt(for_loop_init_rewrite(stmt.block))
    if isinstance(stmt, If):
        return If(stmt.test, for_loop_init_rewrite(stmt.body))
    if isinstance(stmt, Switch):
        return Switch(
            stmt.target,
            tuple(SwCase(c.value, for_loop_init_rewrite(c.body)) for c in stmt.cases),
            None if stmt.default is None else for_loop_init_rewrite(stmt.default),
        )
    if isinstance(stmt, For):
        loop = For(
            Block(()),
            stmt.test,
            for_loop_init_rewrite(stmt.update),
            for_loop_init_rewrite(stmt.body),
        )
        if not stmt.init.statements:
            return loop
        moved = tuple(statement_loop_init(s) for s in stmt.init.statements)
        return BlockStmt(Block(moved + (loop,)))
    if isinstance(stmt, FunDefStmt):
        fd = stmt.fundef
        return FunDefStmt(FunDef(fd.name, fd.inputs, fd.outputs, for_loop_init_rewrite(fd.body)))
    return stmt


def for_loop_init_rewrite(block: Block) -> Block:
    """Rewrite every `for { init } test { upd } { body }` in the block into
    `{ init for { } test { upd } { body } }`; loops with empty initializers
    are left unwrapped, so the rewrite is idempotent."""
    return Block(tuple(statement_loop_init(s) for s in block.statements))


# --- dead-code elimination --------------------------------------------------------

def statement_dead(stmt: Statement) -> Statement:
    """Statement-level dead-code elimination."""
    if isinstance(stmt, BlockStmt):
        return BlockStmt(dead_code_eliminate(stmt.block))
    if isinstance(stmt, If):
        return If(stmt.test, dead_code_eliminate(stmt.body))
    if isinstance(stmt, Switch):
        return Switch(
            stmt.target,
            tuple(SwCase(c.value, dead_code_eliminate(c.body)) for c in stmt.cases),
            None if stmt.default is None else dead_code_eliminate(stmt.default),
        )
    if isinstance(stmt, For):
        return For(
            dead_code_eliminate(stmt.init),
            stmt.test,
            dead_code_eliminate(stmt.update),
            dead_code_eliminate(stmt.body),
        )
    if isinstance(stmt, FunDefStmt):
        fd = stmt.fundef
        return FunDefStmt(FunDef(fd.name, fd.inputs, fd.outputs, dead_code_eliminate(fd.body)))
    return stmt


def dead_code_eliminate(block: Block) -> Block:
    """Cut each statement list just after its first break/continue/leave; the
    dropped suffix is discarded wholesale, the kept statements are transformed
    recursively."""
    kept = []
    for stmt in block.statements:
        kept.append(statement_dead(stmt))
        if isinstance(stmt, _TERMINATORS):
            break
    return Block(tuple(kept))


# --- restrictions -------------------------------------------------------------------

def nofun(node: Union[Block, Statement]) -> bool:
    """True iff no function definition occurs anywhere in the tree."""
    if isinstance(node, Block):
        return all(nofun(s) for s in node.statements)
    if isinstance(node, FunDefStmt):
        return False
    if isinstance(node, BlockStmt):
        return nofun(node.block)
    if isinstance(node, If):
        return nofun(node.body)
    if isinstance(node, Switch):
        return all(nofun(c.body) for c in node.cases) and (
            node.default is None or nofun(node.default)
        )
    if isinstance(node, For):
        return nofun(node.init) and nofun(node.update) and nofun(node.body)
    return True


def noloopinit(node: Union[Block, Statement]) -> bool:
    """True iff every for loop in the tree has an empty initializer block."""
    if isinstance(node, Block):
        return all(noloopinit(s) for s in node.statements)
    if isinstance(node, BlockStmt):
        return noloopinit(node.block)
    if isinstance(node, If):
        return noloopinit(node.body)
    if isinstance(node, Switch):
        return all(noloopinit(c.body) for c in node.cases) and (
            node.default is None or noloopinit(node.default)
        )
    if isinstance(node, For):
        return (
            not node.init.statements
            and noloopinit(node.update)
            and noloopinit(node.body)
        )
    if isinstance(node, FunDefStmt):
        return noloopinit(node.fundef.body)
    return True


# --- environment lifts and outcome equivalence ----------------------------------------

def funenv_dead(funenv: FunEnv) -> FunEnv:
    """Apply dead-code elimination to every function body in an environment."""
    return tuple(
        {name: FunInfo(info.inputs, info.outputs, dead_code_eliminate(info.body))
         for name, info in scope.items()}
        for scope in funenv
    )


def funenv_nofun(funenv: FunEnv) -> bool:
    """True iff every function body in the environment satisfies nofun."""
    return all(nofun(info.body) for scope in funenv for info in scope.values())


def okeq(a: Union[SOutcome, EvalError], b: Union[SOutcome, EvalError]) -> bool:
    """Outcome equivalence used by the preservation properties: equal
    outcomes, or two errors of any kinds."""
    if isinstance(a, SOutcome) and isinstance(b, SOutcome):
        return a == b
    return isinstance(a, EvalError) and isinstance(b, EvalError)

"""Generation of well-scoped Yul programs and the differential property suites.

The generator mirrors the static checker's symbol-table threading, so every
program it emits is statically safe by construction — no generate-and-filter
bias toward trivial programs.  Loop bodies usually follow a bounded-counter
pattern so that a useful fraction of programs terminates within small fuel,
keeping the LimitError/success boundary interesting.

Each suite runs n independent cases; case i of a run seeded S uses seed S+i,
and a failure report carries that case seed, so any failure can be replayed
with a run of one case at that seed.
"""

from __future__ import annotations

import contextlib
import gc
import random
from dataclasses import dataclass, replace
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Set, Tuple, Union

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
    HexNumber,
    HexString,
    Identifier,
    If,
    Leave,
    Literal,
    LiteralExpr,
    PathExpr,
    PlainString,
    RawChar,
    Statement,
    SwCase,
    Switch,
    TrueLit,
    VariableMulti,
    VariableSingle,
    hoisted_fundefs,
    path_of,
    to_source,
)
from .dynamics import (
    CState,
    DEFAULT_FUEL,
    Dialect,
    EVM_PURE,
    EvalError,
    FunEnv,
    LimitError,
    MASK,
    SOutcome,
    SafetyError,
    Tracer,
    cstate_to_vars,
    exec_statement,
    exec_statement_list,
    exec_top,
    extend_funenv,
    funenv_to_funtable,
)
from .renaming import (
    EMPTY_RENAMING,
    RenameError,
    Renaming,
    funenv_renamevar,
    reference_renamevar,
    soutcome_result_renamevar,
    statement_renamevar,
)
from .statics import (
    Mode,
    StaticError,
    VarsModes,
    check_safe_expression,
    check_safe_statement,
    check_safe_top,
    fun_table_of,
)
from .transforms import (
    dead_code_eliminate,
    for_loop_init_rewrite,
    funenv_dead,
    nofun,
    noloopinit,
    okeq,
    statement_dead,
    statement_loop_init,
)

DEFAULT_FUELS: Tuple[int, ...] = (4, 64, 4096)

_DEFAULT_WEIGHTS: Mapping[str, int] = {
    "let": 5,
    "let-multi": 1,
    "assign": 5,
    "assign-multi": 1,
    "funcall": 2,
    "if": 3,
    "switch": 2,
    "for": 2,
    "block": 1,
    "break": 2,
    "continue": 1,
    "leave": 2,
}

_VAR_POOL: Tuple[str, ...] = tuple("abcdemnst") + tuple(
    f"{c}{d}" for c in "abcde" for d in "0123456789"
)
_FUN_POOL: Tuple[str, ...] = tuple("fghpqruvw") + tuple(
    f"{c}{d}" for c in "fgh" for d in "0123456789"
)


@dataclass(frozen=True)
class GenConfig:
    """Knobs for gen_program.  The same seed and config always produce the
    same program."""

    seed: int
    max_depth: int = 4
    max_stmts_per_block: int = 5
    allow_fundefs: bool = True
    allow_loops: bool = True
    nested_fundefs: bool = True
    builtin_set: Optional[Tuple[str, ...]] = None
    weights: Optional[Mapping[str, int]] = None
    extra_funs: Optional[Mapping[str, Tuple[int, int]]] = None

    def __post_init__(self) -> None:
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.weights is not None:
            if any(w < 0 for w in self.weights.values()):
                raise ValueError("weights must be nonnegative")
            merged = dict(_DEFAULT_WEIGHTS)
            merged.update(self.weights)
            if not any(merged.values()):
                raise ValueError("weights must not all be zero")


class _Gen:
    def __init__(self, cfg: GenConfig, dialect: Dialect):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        table = dialect.funtable()
        if cfg.builtin_set is not None:
            table = {name: table[name] for name in cfg.builtin_set}
        self.base_funs: Dict[str, Tuple[int, int]] = dict(table)
        if cfg.extra_funs:
            self.base_funs.update(cfg.extra_funs)
        self.weights = dict(_DEFAULT_WEIGHTS)
        if cfg.weights:
            self.weights.update(cfg.weights)

    # -- helpers

    def _pick(self, options: Sequence[Tuple[str, int]]) -> str:
        total = sum(w for _, w in options)
        r = self.rng.randrange(total)
        for name, w in options:
            r -= w
            if r < 0:
                return name
        raise AssertionError("weighted pick fell through")

    def _fresh(self, pool: Sequence[str], taken) -> Optional[str]:
        free = [name for name in pool if name not in taken]
        if not free:
            return None
        return self.rng.choice(free[:4])

    def literal(self) -> Literal:
        r = self.rng.random()
        if r < 0.40:
            return DecNumber(str(self.rng.randrange(100)))
        if r < 0.60:
            return HexNumber(format(self.rng.randrange(1, 256), "x"))
        if r < 0.70:
            return TrueLit() if self.rng.random() < 0.5 else FalseLit()
        if r < 0.80:
            return DecNumber(str(self.rng.randrange(MASK // 2, MASK + 1)))
        if r < 0.92:
            chars = "".join(
                self.rng.choice("abcxyz!? ") for _ in range(self.rng.randrange(0, 7))
            )
            return PlainString(tuple(RawChar(c) for c in chars))
        return HexString(
            "".join(self.rng.choice("0123456789abcdef") for _ in range(2 * self.rng.randrange(0, 5)))
        )

    def expression(self, vars: Set[str], funs: Mapping[str, Tuple[int, int]], depth: int = 2) -> Expression:
        if depth > 0 and self.rng.random() < 0.55:
            single = sorted(f for f, (_, m) in funs.items() if m == 1)
            if single:
                name = self.rng.choice(single)
                n, _ = funs[name]
                args = tuple(self.expression(vars, funs, depth - 1) for _ in range(n))
                return FunCallExpr(FunCall(Identifier(name), args))
        if vars and self.rng.random() < 0.6:
            return PathExpr(path_of(self.rng.choice(sorted(vars))))
        return LiteralExpr(self.literal())

    # -- statements

    def block(
        self,
        vars: FrozenSet[str],
        funs: Mapping[str, Tuple[int, int]],
        depth: int,
        in_function: bool,
        in_loop: bool,
        at_top: bool = False,
    ) -> Block:
        funs = dict(funs)
        fundefs: List[FunDef] = []
        if (
            self.cfg.allow_fundefs
            and (at_top or self.cfg.nested_fundefs)
            and depth < self.cfg.max_depth
        ):
            n_defs = int(self._pick([("0", 5), ("1", 4), ("2", 2)]))
            sigs: List[Tuple[str, int, int]] = []
            for _ in range(n_defs):
                name = self._fresh(_FUN_POOL, funs)
                if name is None:
                    break
                sig = (name, self.rng.randrange(0, 3), self.rng.randrange(0, 3))
                funs[name] = sig[1:]
                sigs.append(sig)
            # all signatures are visible before any body is generated, so
            # mutual recursion comes out naturally
            for name, n_in, n_out in sigs:
                fundefs.append(self.fundef(name, n_in, n_out, funs, depth + 1))

        stmts: List[Statement] = []
        local_vars = set(vars)
        budget = self.rng.randint(0 if depth else 1, self.cfg.max_stmts_per_block)
        while budget > 0:
            budget -= 1
            stmt = self.statement(local_vars, funs, depth, in_function, in_loop, at_top)
            if stmt is None:
                continue
            stmts.append(stmt)
            if isinstance(stmt, (Break, Continue, Leave)):
                if self.rng.random() < 0.4:
                    for _ in range(self.rng.randint(1, 2)):
                        dead = self.statement(
                            local_vars, funs, depth, in_function, in_loop, at_top
                        )
                        if dead is not None:
                            stmts.append(dead)
                break

        for fd in fundefs:
            stmts.insert(self.rng.randint(0, len(stmts)), FunDefStmt(fd))
        return Block(tuple(stmts))

    def fundef(
        self, name: str, n_in: int, n_out: int, funs: Mapping[str, Tuple[int, int]], depth: int
    ) -> FunDef:
        params: Set[str] = set()
        def fresh_param() -> Identifier:
            p = self._fresh(_VAR_POOL, params)
            assert p is not None, "parameter pool exhausted"
            params.add(p)
            return Identifier(p)

        inputs = tuple(fresh_param() for _ in range(n_in))
        outputs = tuple(fresh_param() for _ in range(n_out))
        body = self.block(frozenset(params), funs, depth, in_function=True, in_loop=False)
        return FunDef(Identifier(name), inputs, outputs, body)

    def statement(
        self,
        vars: Set[str],
        funs: Mapping[str, Tuple[int, int]],
        depth: int,
        in_function: bool,
        in_loop: bool,
        at_top: bool,
    ) -> Optional[Statement]:
        multi = sorted(f for f, (_, m) in funs.items() if m >= 2)
        void = sorted(f for f, (_, m) in funs.items() if m == 0)
        options: List[Tuple[str, int]] = []

        def w(kind: str) -> int:
            return self.weights.get(kind, 0)

        if self._fresh(_VAR_POOL, vars) is not None:
            options.append(("let", w("let")))
            if multi:
                options.append(("let-multi", w("let-multi")))
        if vars:
            options.append(("assign", w("assign")))
            assignable = [f for f in multi if funs[f][1] <= len(vars)]
            if assignable:
                options.append(("assign-multi", w("assign-multi")))
        if void:
            options.append(("funcall", w("funcall")))
        if depth < self.cfg.max_depth:
            options.append(("if", w("if")))
            options.append(("switch", w("switch")))
            options.append(("block", w("block")))
            if self.cfg.allow_loops:
                options.append(("for", w("for")))
        if in_loop:
            options.append(("break", w("break")))
            options.append(("continue", w("continue")))
        if in_function:
            options.append(("leave", w("leave")))

        options = [(k, weight) for k, weight in options if weight > 0]
        if not options:
            return None
        kind = self._pick(options)

        if kind == "let":
            name = self._fresh(_VAR_POOL, vars)
            init = self.expression(vars, funs) if self.rng.random() < 0.8 else None
            vars.add(name)
            return VariableSingle(Identifier(name), init)
        if kind == "let-multi":
            fname = self.rng.choice(multi)
            n, m = funs[fname]
            names: List[Identifier] = []
            scratch = set(vars)
            for _ in range(m):
                fresh = self._fresh(_VAR_POOL, scratch)
                if fresh is None:
                    return None
                scratch.add(fresh)
                names.append(Identifier(fresh))
            init = None
            if self.rng.random() < 0.9:
                args = tuple(self.expression(vars, funs, 1) for _ in range(n))
                init = FunCall(Identifier(fname), args)
            vars.update(n.text for n in names)
            return VariableMulti(tuple(names), init)
        if kind == "assign":
            target = self.rng.choice(sorted(vars))
            return AssignSingle(path_of(target), self.expression(vars, funs))
        if kind == "assign-multi":
            assignable = [f for f in multi if funs[f][1] <= len(vars)]
            fname = self.rng.choice(assignable)
            n, m = funs[fname]
            targets = tuple(path_of(t) for t in self.rng.sample(sorted(vars), m))
            args = tuple(self.expression(vars, funs, 1) for _ in range(n))
            return AssignMulti(targets, FunCall(Identifier(fname), args))
        if kind == "funcall":
            fname = self.rng.choice(void)
            n, _ = funs[fname]
            args = tuple(self.expression(vars, funs, 1) for _ in range(n))
            return FunCallStmt(FunCall(Identifier(fname), args))
        if kind == "if":
            test = self.expression(vars, funs)
            body = self.block(frozenset(vars), funs, depth + 1, in_function, in_loop)
            return If(test, body)
        if kind == "switch":
            return self._switch(vars, funs, depth, in_function, in_loop)
        if kind == "block":
            return BlockStmt(self.block(frozenset(vars), funs, depth + 1, in_function, in_loop))
        if kind == "for":
            return self._for(vars, funs, depth, in_function)
        if kind == "break":
            return Break()
        if kind == "continue":
            return Continue()
        if kind == "leave":
            return Leave()
        raise AssertionError(f"unhandled kind {kind}")

    def _switch(
        self,
        vars: Set[str],
        funs: Mapping[str, Tuple[int, int]],
        depth: int,
        in_function: bool,
        in_loop: bool,
    ) -> Switch:
        target = self.expression(vars, funs)
        cases: List[SwCase] = []
        used_values: Set[int] = set()
        for _ in range(self.rng.randint(1, 3)):
            value = self.rng.randrange(8)
            if value in used_values:
                continue
            used_values.add(value)
            lit: Literal = (
                DecNumber(str(value)) if self.rng.random() < 0.7 else HexNumber(format(value, "x"))
            )
            cases.append(
                SwCase(lit, self.block(frozenset(vars), funs, depth + 1, in_function, in_loop))
            )
        default = None
        if not cases or self.rng.random() < 0.6:
            default = self.block(frozenset(vars), funs, depth + 1, in_function, in_loop)
        return Switch(target, tuple(cases), default)

    def _for(
        self, vars: Set[str], funs: Mapping[str, Tuple[int, int]], depth: int, in_function: bool
    ) -> For:
        # Mostly bounded counters, so small fuels still see loops finish.
        loop_vars = set(vars)
        if self.rng.random() < 0.85:
            counter = self._fresh(_VAR_POOL, loop_vars)
            assert counter is not None  # guarded by the caller's fresh check
            loop_vars.add(counter)
            init_stmts: List[Statement] = [
                VariableSingle(Identifier(counter), LiteralExpr(DecNumber("0")))
            ]
            if self.rng.random() < 0.3:
                extra = self._fresh(_VAR_POOL, loop_vars)
                if extra is not None:
                    init_expr = self.expression(loop_vars, funs, 1)
                    loop_vars.add(extra)
                    init_stmts.append(VariableSingle(Identifier(extra), init_expr))
            bound = self.rng.randint(1, 4)
            test: Expression = FunCallExpr(
                FunCall(
                    Identifier("lt"),
                    (PathExpr(path_of(counter)), LiteralExpr(DecNumber(str(bound)))),
                )
            )
            update = Block(
                (
                    AssignSingle(
                        path_of(counter),
                        FunCallExpr(
                            FunCall(
                                Identifier("add"),
                                (PathExpr(path_of(counter)), LiteralExpr(DecNumber("1"))),
                            )
                        ),
                    ),
                )
            )
            body = self.block(frozenset(loop_vars), funs, depth + 1, in_function, in_loop=True)
            return For(Block(tuple(init_stmts)), test, update, body)

        init_stmts = []
        if self.rng.random() < 0.5:
            extra = self._fresh(_VAR_POOL, loop_vars)
            if extra is not None:
                init_expr = self.expression(loop_vars, funs, 1)
                loop_vars.add(extra)
                init_stmts.append(VariableSingle(Identifier(extra), init_expr))
        test = LiteralExpr(TrueLit() if self.rng.random() < 0.5 else DecNumber("1"))
        body = self.block(frozenset(loop_vars), funs, depth + 1, in_function, in_loop=True)
        if self.rng.random() < 0.6:
            body = Block(body.statements + (Break(),))
        return For(Block(tuple(init_stmts)), test, Block(()), body)


def gen_program(cfg: GenConfig, dialect: Dialect = EVM_PURE) -> Block:
    """Generate a statically safe program, deterministically per seed.  With
    cfg.extra_funs the program may call those extra signatures, in which case
    it is safe relative to a function table extended with them (callers must
    execute it under a matching function environment)."""
    gen = _Gen(cfg, dialect)
    return gen.block(
        frozenset(), gen.base_funs, depth=0, in_function=False, in_loop=False, at_top=True
    )


# --- suite plumbing ------------------------------------------------------------------

@dataclass(frozen=True)
class SuiteFailure:
    seed: int
    program: str
    prop: str
    detail: str


@dataclass(frozen=True)
class SuiteReport:
    name: str
    cases_run: int
    failures: Tuple[SuiteFailure, ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        lines = [
            f"suite {self.name}: {self.cases_run} case(s), "
            f"{len(self.failures)} failure(s)"
        ]
        for f in self.failures:
            lines.append(f"  seed {f.seed}: {f.prop}: {f.detail}")
            lines.append("    " + f.program.replace("\n", "\n    "))
        return "\n".join(lines)


def _random_value(rng: random.Random) -> int:
    return rng.randrange(16) if rng.random() < 0.7 else rng.randrange(1 << 256)


def _random_cstate(rng: random.Random, names: FrozenSet[str]) -> CState:
    return CState({name: _random_value(rng) for name in sorted(names)})


def _run(thunk: Callable[[], SOutcome]) -> Union[SOutcome, EvalError]:
    try:
        return thunk()
    except EvalError as exc:
        return exc


def _describe(outcome: Union[SOutcome, EvalError]) -> str:
    if isinstance(outcome, SOutcome):
        state = ", ".join(f"{k}={v}" for k, v in sorted(outcome.cstate.local.items()))
        return f"{outcome.mode.value} {{{state}}}"
    return f"error {outcome}"


# --- static soundness ---------------------------------------------------------------

class _SoundnessTracer(Tracer):
    """Re-derives the static judgment at every executed statement and
    expression, and records any divergence from the dynamic outcome: a mode
    outside the static mode set, or a local-variable domain different from
    the predicted variable table."""

    def __init__(self, dialect: Dialect):
        self.dialect_funs = dialect.funtable()
        self.violations: List[str] = []
        self._stmt_cache: Dict[object, object] = {}
        self._expr_cache: Dict[object, object] = {}
        # keyed by id(); each entry keeps the funenv alive so ids stay unique.
        # Scopes are immutable once built, so identity implies equal content.
        self._fkey_cache: Dict[int, Tuple[FunEnv, Tuple]] = {}
        self._last_fenv: Optional[FunEnv] = None
        self._last_fkey: Tuple = ()

    def _funtab(self, funenv: FunEnv) -> Dict[str, Tuple[int, int]]:
        table = dict(self.dialect_funs)
        table.update(funenv_to_funtable(funenv))
        return table

    def _fkey(self, funenv: FunEnv) -> Tuple:
        if funenv is self._last_fenv:  # consecutive events share environments
            return self._last_fkey
        entry = self._fkey_cache.get(id(funenv))
        if entry is None:
            entry = (funenv, tuple(tuple(sorted(scope)) for scope in funenv))
            self._fkey_cache[id(funenv)] = entry
        self._last_fenv = funenv
        self._last_fkey = entry[1]
        return entry[1]

    def on_statement(self, stmt, cstate, funenv, outcome) -> None:
        vars_before = cstate_to_vars(cstate)
        key = (id(stmt), vars_before, self._fkey(funenv))
        judgment = self._stmt_cache.get(key)
        if judgment is None:
            try:
                judgment = check_safe_statement(stmt, vars_before, self._funtab(funenv))
            except StaticError as exc:
                judgment = exc
            self._stmt_cache[key] = judgment
        if isinstance(judgment, StaticError):
            self.violations.append(
                f"executed statement fails the static check: {judgment}"
            )
            return
        assert isinstance(judgment, VarsModes)
        if outcome.mode not in judgment.modes:
            self.violations.append(
                f"mode {outcome.mode.value} outside static modes "
                f"{{{', '.join(sorted(m.value for m in judgment.modes))}}} "
                f"for: {to_source(stmt)}"
            )
        expected = judgment.vars if outcome.mode is Mode.REGULAR else vars_before
        if outcome.cstate.local.keys() != expected:  # keys view == frozenset works
            self.violations.append(
                f"variables {sorted(outcome.cstate.local)} != predicted "
                f"{sorted(expected)} for: {to_source(stmt)}"
            )

    def on_expression(self, expr, cstate, funenv, outcome) -> None:
        vars_before = cstate_to_vars(cstate)
        key = (id(expr), vars_before, self._fkey(funenv))
        judgment = self._expr_cache.get(key)
        if judgment is None:
            try:
                judgment = check_safe_expression(expr, vars_before, self._funtab(funenv))
            except StaticError as exc:
                judgment = exc
            self._expr_cache[key] = judgment
        if isinstance(judgment, StaticError):
            self.violations.append(
                f"executed expression fails the static check: {judgment}"
            )
            return
        if len(outcome.values) != judgment:
            self.violations.append(
                f"{len(outcome.values)} value(s) != static count {judgment} "
                f"for: {to_source(expr)}"
            )


def check_static_soundness_program(
    program: Block, fuels: Sequence[int], dialect: Dialect = EVM_PURE
) -> Optional[str]:
    """Run one program at each fuel under instrumentation.  Returns a failure
    description, or None.  LimitError is legitimate at any fuel; SafetyError
    and instrumentation violations are failures (the program must be safe)."""
    try:
        check_safe_top(program, dialect.funtable())
    except StaticError as exc:
        return f"program is not statically safe: {exc}"
    tracer = _SoundnessTracer(dialect)  # shared: judgments are fuel-independent
    for fuel in fuels:
        try:
            exec_top(program, dialect=dialect, limit=fuel, tracer=tracer)
        except LimitError:
            pass
        except SafetyError as exc:
            return f"SafetyError at fuel {fuel}: {exc}"
        if tracer.violations:
            return f"at fuel {fuel}: " + "; ".join(tracer.violations[:3])
    return None


def _case_static_soundness(seed: int, cfg: GenConfig, fuels: Sequence[int]) -> Optional[SuiteFailure]:
    program = gen_program(replace(cfg, seed=seed))
    detail = check_static_soundness_program(program, fuels)
    if detail is not None:
        return SuiteFailure(seed, to_source(program), "static-soundness", detail)
    return None


# --- generator safety ----------------------------------------------------------------

def _case_gen_safety(seed: int, cfg: GenConfig, fuels: Sequence[int]) -> Optional[SuiteFailure]:
    program = gen_program(replace(cfg, seed=seed))
    again = gen_program(replace(cfg, seed=seed))
    if program != again:
        return SuiteFailure(seed, to_source(program), "gen-determinism", "two runs differ")
    try:
        check_safe_top(program, EVM_PURE.funtable())
    except StaticError as exc:
        return SuiteFailure(seed, to_source(program), "gen-safety", str(exc))
    restricted = gen_program(replace(cfg, seed=seed, allow_fundefs=False))
    if not nofun(restricted):
        return SuiteFailure(
            seed, to_source(restricted), "gen-nofun", "allow_fundefs=False emitted a fundef"
        )
    return None


# --- dead code ------------------------------------------------------------------------

def _helper_env(seed: int, dialect: Dialect) -> FunEnv:
    """A one-scope function environment of generated helpers with nofun
    bodies, used to exercise the funenv side of the dead-code relation."""
    helper_cfg = GenConfig(
        seed=seed,
        max_depth=3,
        max_stmts_per_block=3,
        allow_fundefs=True,
        nested_fundefs=False,
        allow_loops=False,
    )
    helpers = hoisted_fundefs(gen_program(helper_cfg, dialect))
    return extend_funenv((), helpers)


def check_dead_code_program(
    program: Block,
    fuels: Sequence[int],
    rng: random.Random,
    funenv: FunEnv = (),
    dialect: Dialect = EVM_PURE,
    require_nofun: bool = True,
) -> Optional[str]:
    """The dead-code theorems on one program: static preservation (same
    variables, modes a subset) per top-level statement, and okeq of paired
    executions — the transformed statement against the funenv_dead
    environment.  The program must be nofun; the environment's bodies must be
    nofun.  Returns a failure description or None.  require_nofun=False drops
    the hypothesis, which makes the conclusions falsifiable (a definition
    after a terminator vanishes though earlier code may call it)."""
    if require_nofun and not nofun(program):
        return "hypothesis violated: program contains a function definition"
    base = for_loop_init_rewrite(program)  # normalize; rewrite preserves meaning
    funtab = dict(dialect.funtable())
    funtab.update(funenv_to_funtable(funenv))
    funtab.update(fun_table_of(base))

    new_block = dead_code_eliminate(base)
    dead_env = funenv_dead(funenv)
    # top-level definitions (none under the nofun hypothesis) join the
    # environments, so the dropped-hypothesis run still resolves calls
    env_old = extend_funenv(funenv, hoisted_fundefs(base)) if hoisted_fundefs(base) else funenv
    env_new = (
        extend_funenv(dead_env, hoisted_fundefs(new_block))
        if hoisted_fundefs(new_block)
        else dead_env
    )

    # statement-level static preservation, threading the variable table
    vars_before: List[FrozenSet[str]] = []
    vars = frozenset()  # type: FrozenSet[str]
    for stmt in base.statements:
        vars_before.append(vars)
        new_stmt = statement_dead(stmt)
        try:
            vm_old = check_safe_statement(stmt, vars, funtab)
        except StaticError as exc:
            return f"original statement not safe: {exc}"
        try:
            vm_new = check_safe_statement(new_stmt, vars, funtab)
        except StaticError as exc:
            return f"transformed statement not safe: {exc}: {to_source(new_stmt)}"
        if vm_new.vars != vm_old.vars:
            return (
                f"variable table changed: {sorted(vm_old.vars)} -> {sorted(vm_new.vars)} "
                f"for: {to_source(stmt)}"
            )
        if not vm_new.modes <= vm_old.modes:
            return (
                f"modes grew: {sorted(m.value for m in vm_old.modes)} -> "
                f"{sorted(m.value for m in vm_new.modes)} for: {to_source(stmt)}"
            )
        vars = vm_old.vars

    # whole-program paired execution from the empty state (run as a statement
    # list so the final locals stay observable)
    for fuel in fuels:
        out_old = _run(
            lambda: exec_statement_list(base.statements, CState({}), env_old, dialect, fuel)
        )
        out_new = _run(
            lambda: exec_statement_list(new_block.statements, CState({}), env_new, dialect, fuel)
        )
        if not okeq(out_old, out_new):
            return (
                f"okeq failed at fuel {fuel}: {_describe(out_old)} vs {_describe(out_new)}"
            )

    # statement-level paired executions from random states
    if base.statements:
        for _ in range(4):
            k = rng.randrange(len(base.statements))
            stmt = base.statements[k]
            cstate = _random_cstate(rng, vars_before[k])
            fuel = rng.choice(list(fuels))
            out_old = _run(lambda: exec_statement(stmt, cstate, env_old, dialect, fuel))
            out_new = _run(
                lambda: exec_statement(statement_dead(stmt), cstate, env_new, dialect, fuel)
            )
            if not okeq(out_old, out_new):
                return (
                    f"statement okeq failed at fuel {fuel} for: {to_source(stmt)}: "
                    f"{_describe(out_old)} vs {_describe(out_new)}"
                )
    return None


def _case_dead_code(seed: int, cfg: GenConfig, fuels: Sequence[int]) -> Optional[SuiteFailure]:
    funenv = _helper_env(seed ^ 0x5EED, EVM_PURE)
    extra = {
        name: (len(info.inputs), len(info.outputs))
        for scope in funenv
        for name, info in scope.items()
    }
    program = gen_program(replace(cfg, seed=seed, allow_fundefs=False, extra_funs=extra))
    rng = random.Random(f"dead-code:{seed}")
    detail = check_dead_code_program(program, fuels, rng, funenv)
    if detail is not None:
        return SuiteFailure(seed, to_source(program), "dead-code", detail)
    return None


# --- loop init -------------------------------------------------------------------------

_RETRY_CAP = DEFAULT_FUEL


def _okeq_with_retry(
    run_old: Callable[[int], Union[SOutcome, EvalError]],
    run_new: Callable[[int], Union[SOutcome, EvalError]],
    fuel: int,
) -> Optional[str]:
    """okeq at the given fuel; when exactly one side hits the fuel limit —
    the rewrite costs a few extra block entries, so limits shift — retry both
    sides at doubled fuel, up to a cap."""
    while True:
        out_old = run_old(fuel)
        out_new = run_new(fuel)
        if okeq(out_old, out_new):
            return None
        split_limit = isinstance(out_old, LimitError) != isinstance(out_new, LimitError)
        if split_limit and fuel < _RETRY_CAP:
            fuel *= 2
            continue
        return f"okeq failed at fuel {fuel}: {_describe(out_old)} vs {_describe(out_new)}"


def _modes_ok_loop_init(old: FrozenSet[Mode], new: FrozenSet[Mode]) -> bool:
    # The rewrite can only lose the regular mode (a leave-only initializer
    # makes the wrapper block non-regular); it never gains modes.
    return new <= old and (old - new) <= {Mode.REGULAR}


def check_loop_init_program(
    program: Block, fuels: Sequence[int], dialect: Dialect = EVM_PURE
) -> Optional[str]:
    new_block = for_loop_init_rewrite(program)
    if not noloopinit(new_block):
        return "rewrite left a loop with a nonempty initializer"
    if for_loop_init_rewrite(new_block) != new_block:
        return "rewrite is not idempotent"
    funtab = dialect.funtable()
    try:
        check_safe_top(new_block, funtab)
    except StaticError as exc:
        return f"rewritten program not safe: {exc}"

    # per-statement static comparison at the top level and inside top-level
    # function bodies (where leave-bearing initializers can occur)
    def compare_list(stmts: Sequence[Statement], vars: FrozenSet[str], funs) -> Optional[str]:
        for stmt in stmts:
            new_stmt = statement_loop_init(stmt)
            vm_old = check_safe_statement(stmt, vars, funs)
            vm_new = check_safe_statement(new_stmt, vars, funs)
            if vm_new.vars != vm_old.vars:
                return f"variable table changed for: {to_source(stmt)}"
            if not _modes_ok_loop_init(vm_old.modes, vm_new.modes):
                return (
                    f"mode sets inconsistent: {sorted(m.value for m in vm_old.modes)} -> "
                    f"{sorted(m.value for m in vm_new.modes)} for: {to_source(stmt)}"
                )
            vars = vm_old.vars
        return None

    top_funs = dict(funtab)
    top_funs.update(fun_table_of(program))
    detail = compare_list(program.statements, frozenset(), top_funs)
    if detail is not None:
        return detail
    for fd in hoisted_fundefs(program):
        params = frozenset(p.text for p in fd.inputs + fd.outputs)
        detail = compare_list(fd.body.statements, params, dict(top_funs, **fun_table_of(fd.body)))
        if detail is not None:
            return f"in function {fd.name.text}: {detail}"

    for fuel in fuels:
        detail = _okeq_with_retry(
            lambda f: _run(lambda: exec_top(program, dialect=dialect, limit=f)),
            lambda f: _run(lambda: exec_top(new_block, dialect=dialect, limit=f)),
            fuel,
        )
        if detail is not None:
            return detail
    return None


def _case_loop_init(seed: int, cfg: GenConfig, fuels: Sequence[int]) -> Optional[SuiteFailure]:
    program = gen_program(replace(cfg, seed=seed))
    detail = check_loop_init_program(program, fuels)
    if detail is not None:
        return SuiteFailure(seed, to_source(program), "loop-init", detail)
    return None


# --- variable renaming -------------------------------------------------------------------

def check_renamevar_program(
    program: Block,
    fuels: Sequence[int],
    rng: random.Random,
    trials: int = 10,
    dialect: Dialect = EVM_PURE,
) -> Optional[str]:
    """Rename the program's variables apart, then check the renaming relation,
    static preservation (equal mode sets, variable tables tracking the two
    renaming sides), the environment relation, and paired executions from
    related random states."""
    renamed = reference_renamevar(program)

    funtab = dict(dialect.funtable())
    funtab.update(fun_table_of(program))

    env_old = extend_funenv((), hoisted_fundefs(program))
    env_new = extend_funenv((), hoisted_fundefs(renamed))
    if not funenv_renamevar(env_old, env_new):
        return "function environments not related"

    old_stmts = program.statements
    new_stmts = renamed.statements
    if len(old_stmts) != len(new_stmts):
        return "renaming changed the statement count"

    ren = EMPTY_RENAMING
    before: List[Tuple[FrozenSet[str], Renaming]] = []
    after_ren: List[Renaming] = []
    vars_old: FrozenSet[str] = frozenset()
    for old_stmt, new_stmt in zip(old_stmts, new_stmts):
        before.append((vars_old, ren))
        try:
            ren = statement_renamevar(old_stmt, new_stmt, ren)
        except RenameError as exc:
            return f"relation rejected: {exc}: {to_source(old_stmt)}"
        after_ren.append(ren)

        vars_new = frozenset(before[-1][1].new_names())
        vm_old = check_safe_statement(old_stmt, vars_old, funtab)
        vm_new = check_safe_statement(new_stmt, vars_new, funtab)
        if vm_new.modes != vm_old.modes:
            return (
                f"mode sets differ: {sorted(m.value for m in vm_old.modes)} vs "
                f"{sorted(m.value for m in vm_new.modes)} for: {to_source(old_stmt)}"
            )
        if vm_old.vars != frozenset(ren.old_names()):
            return f"old variable table diverged from the renaming for: {to_source(old_stmt)}"
        if vm_new.vars != frozenset(ren.new_names()):
            return f"new variable table diverged from the renaming for: {to_source(old_stmt)}"
        vars_old = vm_old.vars

    # paired executions from related random states
    if old_stmts:
        for _ in range(trials):
            k = rng.randrange(len(old_stmts))
            vars_k, ren_k = before[k]
            cstate_old = _random_cstate(rng, vars_k)
            cstate_new = CState(
                {ren_k.lookup(name): value for name, value in cstate_old.local.items()}
            )
            fuel = rng.choice(list(fuels))
            out_old = _run(
                lambda: exec_statement(old_stmts[k], cstate_old, env_old, dialect, fuel)
            )
            out_new = _run(
                lambda: exec_statement(new_stmts[k], cstate_new, env_new, dialect, fuel)
            )
            if not soutcome_result_renamevar(out_old, out_new, after_ren[k]):
                return (
                    f"outcomes unrelated at fuel {fuel} for: {to_source(old_stmts[k])}: "
                    f"{_describe(out_old)} vs {_describe(out_new)}"
                )
    return None


def _case_renamevar(seed: int, cfg: GenConfig, fuels: Sequence[int]) -> Optional[SuiteFailure]:
    program = gen_program(replace(cfg, seed=seed))
    rng = random.Random(f"renamevar:{seed}")
    detail = check_renamevar_program(program, fuels, rng)
    if detail is not None:
        return SuiteFailure(seed, to_source(program), "renamevar", detail)
    return None


# --- round trip and restrictions ------------------------------------------------------------

def _case_round_trip(seed: int, cfg: GenConfig, fuels: Sequence[int]) -> Optional[SuiteFailure]:
    from .syntax import parse_program

    program = gen_program(replace(cfg, seed=seed))
    text = to_source(program)
    reparsed = parse_program(text)
    if reparsed != program:
        return SuiteFailure(seed, text, "round-trip", "parse(print(t)) != t")
    return None


def _case_restrictions(seed: int, cfg: GenConfig, fuels: Sequence[int]) -> Optional[SuiteFailure]:
    program = gen_program(replace(cfg, seed=seed))
    text = to_source(program)

    rewritten = for_loop_init_rewrite(program)
    if not noloopinit(rewritten):
        return SuiteFailure(seed, text, "loop-init-establishes", "noloopinit false after rewrite")
    if for_loop_init_rewrite(rewritten) != rewritten:
        return SuiteFailure(seed, text, "loop-init-idempotent", "second application changed code")

    eliminated = dead_code_eliminate(program)
    if dead_code_eliminate(eliminated) != eliminated:
        return SuiteFailure(seed, text, "dead-code-idempotent", "second application changed code")
    if noloopinit(rewritten) and not noloopinit(dead_code_eliminate(rewritten)):
        return SuiteFailure(seed, text, "dead-code-preserves-noloopinit", "noloopinit lost")

    restricted = gen_program(replace(cfg, seed=seed, allow_fundefs=False))
    if not nofun(restricted):
        return SuiteFailure(seed, text, "gen-nofun", "allow_fundefs=False emitted a fundef")
    if not nofun(dead_code_eliminate(restricted)):
        return SuiteFailure(seed, to_source(restricted), "dead-code-preserves-nofun", "nofun lost")
    return None


# --- fuel monotonicity ------------------------------------------------------------------

def check_fuel_monotonicity_program(
    program: Block, exponents: Sequence[int] = range(2, 15), dialect: Dialect = EVM_PURE
) -> Optional[str]:
    """Below the success threshold every run must hit the limit; above it,
    every run must return the identical successful outcome."""
    settled: Optional[SOutcome] = None
    for k in exponents:
        fuel = 1 << k
        try:
            out = exec_top(program, dialect=dialect, limit=fuel)
        except LimitError:
            if settled is not None:
                return f"LimitError at fuel 2^{k} after success at lower fuel"
            continue
        except SafetyError as exc:
            return f"SafetyError at fuel 2^{k}: {exc}"
        if settled is None:
            settled = out
        elif out != settled:
            return (
                f"outcome changed with fuel 2^{k}: "
                f"{_describe(settled)} vs {_describe(out)}"
            )
    return None


def _case_fuel_monotonicity(seed: int, cfg: GenConfig, fuels: Sequence[int]) -> Optional[SuiteFailure]:
    program = gen_program(replace(cfg, seed=seed))
    detail = check_fuel_monotonicity_program(program)
    if detail is not None:
        return SuiteFailure(seed, to_source(program), "fuel-monotonicity", detail)
    return None


# --- the runner -------------------------------------------------------------------------

_SUITES: Dict[str, Callable[[int, GenConfig, Sequence[int]], Optional[SuiteFailure]]] = {
    "static-soundness": _case_static_soundness,
    "dead-code": _case_dead_code,
    "loop-init": _case_loop_init,
    "renamevar": _case_renamevar,
    "round-trip": _case_round_trip,
    "restrictions": _case_restrictions,
    "fuel-monotonicity": _case_fuel_monotonicity,
    "gen-safety": _case_gen_safety,
}

SUITE_NAMES = tuple(sorted(_SUITES))


def run_suite(
    name: str,
    n: int,
    seed: int = 0,
    fuels: Optional[Sequence[int]] = None,
    cfg: Optional[GenConfig] = None,
) -> SuiteReport:
    """Run n cases of the named suite; case i uses seed+i.  Failures are
    sorted by seed and each carries the failing program's text."""
    if name not in _SUITES:
        raise ValueError(f"unknown suite {name!r} (have: {', '.join(SUITE_NAMES)})")
    case = _SUITES[name]
    base_cfg = cfg if cfg is not None else GenConfig(seed=0)
    fuels = tuple(fuels) if fuels else DEFAULT_FUELS
    failures = []
    with _gc_paused():  # everything here is acyclic; refcounting suffices
        for i in range(n):
            failure = case(seed + i, base_cfg, fuels)
            if failure is not None:
                failures.append(failure)
    failures.sort(key=lambda f: f.seed)
    return SuiteReport(name, n, tuple(failures))


@contextlib.contextmanager
def _gc_paused():
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


def suite_static_soundness(
    n: int, cfg: Optional[GenConfig] = None, fuels: Optional[Sequence[int]] = None, seed: int = 0
) -> SuiteReport:
    return run_suite("static-soundness", n, seed=seed, fuels=fuels, cfg=cfg)


def suite_dead_code(
    n: int, cfg: Optional[GenConfig] = None, fuels: Optional[Sequence[int]] = None, seed: int = 0
) -> SuiteReport:
    return run_suite("dead-code", n, seed=seed, fuels=fuels, cfg=cfg)


def suite_loop_init(
    n: int, cfg: Optional[GenConfig] = None, fuels: Optional[Sequence[int]] = None, seed: int = 0
) -> SuiteReport:
    return run_suite("loop-init", n, seed=seed, fuels=fuels, cfg=cfg)


def suite_renamevar(
    n: int, cfg: Optional[GenConfig] = None, fuels: Optional[Sequence[int]] = None, seed: int = 0
) -> SuiteReport:
    return run_suite("renamevar", n, seed=seed, fuels=fuels, cfg=cfg)

"""The generator, the property suites, and — crucially — evidence that the
suites can fail: a mutated interpreter and a dropped-hypothesis
counterexample both must be caught."""

import random

import pytest

from yulkit import dynamics
from yulkit.dynamics import CState, EVM_PURE
from yulkit.statics import check_safe_top
from yulkit.syntax import parse_program
from yulkit.testgen import (
    DEFAULT_FUELS,
    GenConfig,
    SUITE_NAMES,
    check_dead_code_program,
    check_fuel_monotonicity_program,
    check_loop_init_program,
    check_renamevar_program,
    check_static_soundness_program,
    gen_program,
    run_suite,
)
from yulkit.transforms import nofun

EVM_FUNS = EVM_PURE.funtable()


# --- generator ---


def test_generator_deterministic():
    cfg = GenConfig(seed=1234)
    assert gen_program(cfg) == gen_program(cfg)


def test_generator_different_seeds_differ():
    programs = {gen_program(GenConfig(seed=s)) for s in range(20)}
    assert len(programs) > 15  # near-certain distinctness


def test_generator_nofun_by_construction():
    for seed in range(50):
        program = gen_program(GenConfig(seed=seed, allow_fundefs=False))
        assert nofun(program)


def test_generator_output_is_safe():
    # sample of the acceptance-scale run
    for seed in range(200):
        check_safe_top(gen_program(GenConfig(seed=seed)), EVM_FUNS)


def test_generator_respects_no_loops():
    for seed in range(30):
        program = gen_program(GenConfig(seed=seed, allow_loops=False))
        assert "for" not in repr(program) or "For" not in {
            type(s).__name__ for s in program.statements
        }


def test_config_validation():
    with pytest.raises(ValueError):
        GenConfig(seed=0, max_depth=0)
    with pytest.raises(ValueError):
        GenConfig(seed=0, weights={"let": -1})
    # partial weights merge with defaults, so zeroing a few keys is fine
    GenConfig(seed=0, weights={"let": 0, "assign": 0})
    from yulkit.testgen import _DEFAULT_WEIGHTS

    with pytest.raises(ValueError):
        GenConfig(seed=0, weights={k: 0 for k in _DEFAULT_WEIGHTS})


def test_default_fuels():
    assert DEFAULT_FUELS == (4, 64, 4096)


# --- per-program checkers on known-good inputs ---


def test_checkers_pass_on_generated_corpus():
    rng = random.Random(0)
    for seed in range(25):
        program = gen_program(GenConfig(seed=seed))
        assert check_static_soundness_program(program, DEFAULT_FUELS) is None
        assert check_loop_init_program(program, DEFAULT_FUELS) is None
        assert (
            check_renamevar_program(program, DEFAULT_FUELS, rng, trials=3) is None
        )
        assert check_fuel_monotonicity_program(program, range(2, 11)) is None
    for seed in range(25):
        program = gen_program(GenConfig(seed=seed, allow_fundefs=False))
        assert check_dead_code_program(program, DEFAULT_FUELS, rng) is None


def test_dead_code_checker_requires_nofun():
    program = parse_program("{ function f() { } }")
    detail = check_dead_code_program(program, DEFAULT_FUELS, random.Random(0))
    assert detail is not None and "hypothesis" in detail


def test_dead_code_counterexample_without_hypothesis():
    # A function definition after `break` is unreachable as a statement but
    # its definition is hoisted: the call before the break depends on it.
    # Dead-code elimination deletes it, so with the nofun hypothesis dropped
    # the checker must report a failure.
    src = "{ let r for { } 1 { } { r := g() break function g() -> v { v := 42 } } }"
    program = parse_program(src)
    check_safe_top(program, EVM_FUNS)  # the counterexample is a safe program
    out = dynamics.exec_top(program, limit=1000)
    assert out.cstate.local == {"r": 42}
    detail = check_dead_code_program(
        program, DEFAULT_FUELS, random.Random(0), require_nofun=False
    )
    assert detail is not None
    assert "hypothesis" not in detail


def test_static_soundness_catches_mutated_interpreter(monkeypatch):
    # skip zeroing of function outputs: unassigned outputs then read as
    # missing locals, which the instrumentation flags
    def broken_initial_state(info, args):
        return CState({p.text: v for p, v in zip(info.inputs, args)})

    monkeypatch.setattr(dynamics, "_initial_function_state", broken_initial_state)
    failures = 0
    for seed in range(80):
        program = gen_program(GenConfig(seed=seed))
        if check_static_soundness_program(program, DEFAULT_FUELS) is not None:
            failures += 1
    assert failures > 0


# --- suite runner ---


def test_suite_names_closed_set():
    assert set(SUITE_NAMES) == {
        "static-soundness",
        "dead-code",
        "loop-init",
        "renamevar",
        "round-trip",
        "restrictions",
        "fuel-monotonicity",
        "gen-safety",
    }


def test_run_suite_empty():
    report = run_suite("round-trip", 0)
    assert report.passed and report.cases_run == 0
    assert "0 case(s), 0 failure(s)" in report.summary()


def test_run_suite_small_all_pass():
    for name in SUITE_NAMES:
        report = run_suite(name, 4, seed=17)
        assert report.passed, report.summary()
        assert report.cases_run == 4


def test_run_suite_case_seed_offsets():
    # cases are seeded seed+i, so a one-case run at seed k replays case k
    full = run_suite("round-trip", 5, seed=100)
    single = run_suite("round-trip", 1, seed=103)
    assert full.passed and single.passed


def test_unknown_suite_rejected():
    with pytest.raises(ValueError, match="no-such-suite"):
        run_suite("no-such-suite", 1)

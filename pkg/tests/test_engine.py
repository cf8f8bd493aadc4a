import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from casverify import speclib as sl
from casverify.engine import (
    RANDOM,
    AssertionSite,
    ChoiceTape,
    Domain,
    ExploreConfig,
    ReplayMismatchError,
    TapeEntry,
    explore,
    replay,
)
from casverify.heap import FaultKind

from oracles import oracle_explore


def exh(**kw) -> ExploreConfig:
    return ExploreConfig(**kw)


def rnd(**kw) -> ExploreConfig:
    kw.setdefault("backend", RANDOM)
    return ExploreConfig(**kw)


# -- mini proofs shared with the oracle-equivalence acceptance check ------------

def proof_assert_true(ctx):
    sl.nd_bool(ctx)
    ctx.sassert("ok", True)


def proof_assert_nd_bool(ctx):
    ctx.sassert("b", sl.nd_bool(ctx))


def proof_pair_assume(ctx):
    length = ctx.choice(Domain.size_t(2))
    cap = ctx.choice(Domain.size_t(2))
    ctx.assume(length <= cap)
    ctx.sassert("bounded", length <= 2)


def proof_havoc_branch(ctx):
    p = ctx.heap.alloc(1)
    ctx.heap.havoc(p, 1)
    value = ctx.heap.read(p, 1)[0]
    ctx.sassert("nonzero_or_zero", value >= 0)


def proof_wild_deref(ctx):
    p = sl.nd_voidp(ctx)
    if not p.is_null:
        ctx.heap.read(p, 1)  # faults on the wild branch


def proof_assume_false(ctx):
    sl.nd_bool(ctx)
    ctx.assume(False)
    ctx.sassert("dead", True)


def proof_three_choices_fail_once(ctx):
    a = ctx.choice(Domain.size_t(1))
    b = ctx.choice(Domain.size_t(1))
    c = ctx.choice(Domain.size_t(1))
    ctx.sassert("not_all_ones", not (a == b == c == 1))


def proof_u8_compare(ctx):
    ctx.sassert("small", sl.nd_u8(ctx) <= 0xFF)


ORACLE_PROOFS = [
    proof_assert_true,
    proof_assert_nd_bool,
    proof_pair_assume,
    proof_havoc_branch,
    proof_wild_deref,
    proof_assume_false,
    proof_three_choices_fail_once,
    proof_u8_compare,
]


# -- exhaustive path counting ----------------------------------------------------

def test_bool_domain_two_paths():
    report = explore(proof_assert_true, exh())
    assert report.verdict.is_pass
    assert report.paths_explored == 2
    assert report.complete


def test_sizet_bound_path_count():
    def proof(ctx):
        ctx.choice(Domain.size_t(4))

    report = explore(proof, exh(size_bound=4))
    assert report.paths_explored == 5


def test_assume_pair_six_of_nine():
    report = explore(proof_pair_assume, exh())
    assert report.paths_explored == 6
    assert report.paths_pruned_by_assume == 3


def test_first_fail_is_lexicographically_minimal():
    report = explore(proof_assert_nd_bool, exh())
    assert report.verdict.is_fail
    assert report.verdict.failed_site == "b"
    assert [ (e.kind, e.index) for e in report.verdict.tape ] == [("bool", 0)]


def test_havoc_byte_paths_match_byte_domain():
    report = explore(proof_havoc_branch, exh(byte_domain=(0, 255)))
    assert report.paths_explored == 2
    report = explore(proof_havoc_branch, exh())
    assert report.paths_explored == 3


def test_fault_produces_fail_with_fault_kind():
    report = explore(proof_wild_deref, exh())
    assert report.verdict.is_fail
    assert report.verdict.fault.kind is FaultKind.WILD_DEREF


def test_all_paths_pruned_is_pass():
    report = explore(proof_assume_false, exh())
    assert report.verdict.is_pass
    assert report.paths_explored == 0
    assert report.paths_pruned_by_assume == 2
    assert report.assertion_hits == {}
    assert not report.dead_assume_warning


def test_dead_assume_warning_flag():
    report = explore(proof_assume_false, exh(warn_dead_assume=True))
    assert report.dead_assume_warning
    report = explore(proof_pair_assume, exh(warn_dead_assume=True))
    assert not report.dead_assume_warning


def test_prune_soundness_no_hits_from_pruned_paths():
    def proof(ctx):
        ctx.sassert("pre", True)
        ctx.assume(sl.nd_bool(ctx))
        ctx.sassert("post", True)

    report = explore(proof, exh())
    # Only the surviving path contributes, including its pre-prune hit.
    assert report.assertion_hits == {"pre": 1, "post": 1}


def test_declared_sites_seed_zero_hits():
    site = AssertionSite("never", description="in dead code")
    report = explore(proof_assert_true, exh(), sites=(site,))
    assert report.assertion_hits["never"] == 0
    assert report.assertion_hits["ok"] == 2


# -- budgets ----------------------------------------------------------------------

def test_max_paths_budget():
    def proof(ctx):
        ctx.choice(Domain.size_t(9))

    report = explore(proof, exh(size_bound=9, max_paths=5))
    assert report.verdict.status == "budget_exhausted"
    assert not report.complete


def test_choice_budget_truncates_path():
    def proof(ctx):
        while True:
            ctx.choice(Domain.custom((0,)))

    report = explore(proof, exh(max_choices_per_path=10, max_paths=50))
    assert report.verdict.status == "budget_exhausted"
    assert report.paths_truncated >= 1


# -- determinism --------------------------------------------------------------------

def _strip_time(report):
    return dataclasses.replace(report, wall_time=0.0)


def test_exhaustive_determinism():
    a = explore(proof_three_choices_fail_once, exh())
    b = explore(proof_three_choices_fail_once, exh())
    assert _strip_time(a) == _strip_time(b)


def test_random_seed_determinism():
    a = explore(proof_three_choices_fail_once, rnd(seed=42))
    b = explore(proof_three_choices_fail_once, rnd(seed=42))
    assert _strip_time(a) == _strip_time(b)
    assert a.verdict.tape == b.verdict.tape


def test_random_rejects_counted_and_budget_verdict():
    report = explore(proof_assume_false, rnd(random_budget=50, seed=1))
    assert report.verdict.status == "budget_exhausted"
    assert report.runs_rejected == 50


def test_random_pass_is_flagged_incomplete():
    report = explore(proof_assert_true, rnd(random_budget=20, seed=3))
    assert report.verdict.is_pass
    assert not report.complete
    assert "weaker" in report.verdict.message


def test_random_fail_replays_to_fail():
    report = explore(proof_three_choices_fail_once, rnd(seed=11, size_bound=1))
    assert report.verdict.is_fail
    again = replay(proof_three_choices_fail_once, report.verdict.tape,
                   rnd(seed=11, size_bound=1))
    assert again.verdict.is_fail
    assert again.verdict.failed_site == report.verdict.failed_site


# -- replay ---------------------------------------------------------------------------

def test_replay_reproduces_fail():
    report = explore(proof_wild_deref, exh())
    rep = replay(proof_wild_deref, report.verdict.tape, exh())
    assert rep.verdict.is_fail
    assert rep.verdict.fault.kind is FaultKind.WILD_DEREF


def test_replay_twice_identical_modulo_wall_time():
    report = explore(proof_three_choices_fail_once, exh(size_bound=1))
    a = replay(proof_three_choices_fail_once, report.verdict.tape, exh(size_bound=1))
    b = replay(proof_three_choices_fail_once, report.verdict.tape, exh(size_bound=1))
    assert _strip_time(a) == _strip_time(b)


def test_replay_index_out_of_domain_is_mismatch():
    tape = ChoiceTape((TapeEntry("bool", 7),))
    with pytest.raises(ReplayMismatchError):
        replay(proof_assert_nd_bool, tape, exh())


def test_replay_kind_mismatch():
    tape = ChoiceTape((TapeEntry("u64", 0),))
    with pytest.raises(ReplayMismatchError):
        replay(proof_assert_nd_bool, tape, exh())


def test_replay_past_tape_end_is_mismatch():
    with pytest.raises(ReplayMismatchError):
        replay(proof_assert_nd_bool, ChoiceTape(()), exh())


def test_replay_leftover_tape_is_legal():
    # e.g. replaying a buggy counterexample against a shorter fixed path
    tape = ChoiceTape((TapeEntry("bool", 1), TapeEntry("bool", 1)))
    rep = replay(proof_assert_nd_bool, tape, exh())
    assert rep.verdict.is_pass


def test_replay_reproduces_epoch_sequence():
    epochs = []

    def proof(ctx):
        p = ctx.heap.alloc(2)
        ctx.heap.write(p, b"ab")
        ctx.heap.havoc(p, 2)
        if sl.nd_bool(ctx):
            ctx.heap.write(p, b"cd")
        epochs.append(tuple(ctx.heap.allocations[p.alloc_id].epochs))
        ctx.sassert("done", not sl.nd_bool(ctx))

    report = explore(proof, exh())
    tape = report.verdict.tape
    epochs.clear()
    replay(proof, tape, exh())
    replay(proof, tape, exh())
    assert epochs[0] == epochs[1]


def test_materialized_bytes_match_tape_entries():
    # a havocked byte's value is exactly the byte-domain entry its draw
    # recorded on the tape
    cfg = exh(byte_domain=(0x10, 0x20, 0x30))
    seen = []

    def proof(ctx):
        p = ctx.heap.alloc(1)
        ctx.heap.havoc(p, 1)
        seen.append(ctx.heap.read(p, 1)[0])
        ctx.sassert("ok", True)

    report = explore(proof, cfg)
    assert report.paths_explored == 3
    assert seen == [0x10, 0x20, 0x30]


def test_config_bounds_validated():
    with pytest.raises(ValueError):
        ExploreConfig(max_paths=0)
    with pytest.raises(ValueError):
        ExploreConfig(random_budget=-1)
    with pytest.raises(ValueError):
        ExploreConfig(byte_domain=())


# -- monotonicity in the size bound ----------------------------------------------------

def proof_fails_at_two(ctx):
    ctx.sassert("lt2", sl.nd_size_t(ctx) < 2)


def test_enlarging_bound_never_turns_fail_into_pass():
    assert explore(proof_fails_at_two, exh(size_bound=2)).verdict.is_fail
    assert explore(proof_fails_at_two, exh(size_bound=4)).verdict.is_fail
    assert explore(proof_fails_at_two, exh(size_bound=8)).verdict.is_fail
    # below the bound the failure is out of scope
    assert explore(proof_fails_at_two, exh(size_bound=1)).verdict.is_pass


# -- usage errors ------------------------------------------------------------------------

def test_framework_usage_error_is_distinguished_fail():
    def proof(ctx):
        p = ctx.heap.alloc(1)
        ctx.heap.write(p, b"a")
        ctx.heap.is_mod(p, 1)  # tracking_on never called

    report = explore(proof, exh())
    assert report.verdict.is_fail
    assert report.verdict.fault is None
    assert report.verdict.message.startswith("framework usage error")


# -- domains and tapes ----------------------------------------------------------------------

def test_domain_validation():
    with pytest.raises(ValueError):
        Domain.custom(())
    with pytest.raises(ValueError):
        Domain.custom((1, 1))


def test_u64_default_boundary_values():
    cfg = exh(size_bound=4)
    assert cfg.u64_domain_values() == (0, 1, 2, 4, 2**32 - 1, 2**64 - 1)


def test_tape_text_roundtrip():
    tape = ChoiceTape((TapeEntry("bool", 1), TapeEntry("sizet", 3),
                       TapeEntry("u8", 0), TapeEntry("wildtoken", 0)))
    text = tape.to_text()
    assert text == "bool:1\nsizet:3\nu8:0\nwildtoken:0\n"
    assert ChoiceTape.from_text(text) == tape


def test_tape_parse_rejects_garbage():
    with pytest.raises(ValueError):
        ChoiceTape.from_text("bool=1\n")
    with pytest.raises(ValueError):
        ChoiceTape.from_text("bool:x\n")


@settings(max_examples=50)
@given(st.lists(st.tuples(st.sampled_from(["bool", "u8", "u64", "sizet", "custom"]),
                          st.integers(0, 30)), max_size=12))
def test_tape_roundtrip_property(pairs):
    tape = ChoiceTape(tuple(TapeEntry(k, i) for k, i in pairs))
    assert ChoiceTape.from_text(tape.to_text()) == tape


# -- engine vs independent enumeration oracle -------------------------------------------------

@pytest.mark.parametrize("proof", ORACLE_PROOFS, ids=lambda p: p.__name__)
def test_exhaustive_matches_bruteforce_oracle(proof):
    cfg = exh()
    report = explore(proof, cfg)
    oracle, outcomes = oracle_explore(proof, cfg)
    engine = "fail" if report.verdict.is_fail else "pass"
    assert engine == oracle
    if engine == "pass":
        # completed path sets agree as well
        oracle_completed = sum(1 for o in outcomes if o[0] == "pass")
        assert report.paths_explored == oracle_completed

from hypothesis import given, settings
from hypothesis import strategies as st
from helpers import ANBN_WORDS, anbn, single_a

from pcgs.machines import (
    BLANK,
    ZERO,
    CounterMachine,
    CounterRule,
    MachineConfig,
    Verdict,
    accepts,
    enumerate_accepted,
    machine_successors,
)
from pcgs.registers import attach_universal_front_end, translate_to_counter
from pcgs.textformat import parse_register_machine


def test_one_rule_step():
    m = CounterMachine(("a",), ("q", "r"), "q", "r", 2, (CounterRule("q", "a", (ZERO, ZERO), "r", (1, 0)),))
    assert machine_successors(m, ("a",), MachineConfig("q", 0, (0, 0))) == {MachineConfig("r", 1, (1, 0))}


def test_blank_guard_needs_positive_counter():
    m = CounterMachine(("a",), ("q", "r"), "q", "r", 1, (CounterRule("q", None, (BLANK,), "r", (-1,)),))
    assert machine_successors(m, (), MachineConfig("q", 0, (0,))) == set()
    assert machine_successors(m, (), MachineConfig("q", 0, (2,))) == {MachineConfig("r", 0, (1,))}


def test_blank_input_read_only_at_end_of_word():
    m = CounterMachine(("a",), ("q", "r"), "q", "r", 1, (CounterRule("q", BLANK, (ZERO,), "r", (0,)),))
    assert machine_successors(m, ("a",), MachineConfig("q", 0, (0,))) == set()
    assert machine_successors(m, ("a",), MachineConfig("q", 1, (0,))) == {MachineConfig("r", 2, (0,))}


def test_front_end_filling_choices():
    text = "registers 3\nlabels: l0 lh\nstart: l0\nhalt: lh\nl0: ADD r1 -> lh\nlh: HALT\n"
    cm = attach_universal_front_end(translate_to_counter(parse_register_machine(text)))
    q0 = cm.start
    # the empty input counter can only be filled
    assert machine_successors(cm, (), MachineConfig(q0, 0, (0, 2, 0))) == {MachineConfig(q0, 0, (0, 2, 1))}
    # once it is positive: keep filling or hand over to l0
    assert machine_successors(cm, (), MachineConfig(q0, 0, (0, 2, 1))) == {
        MachineConfig(q0, 0, (0, 2, 2)),
        MachineConfig("l0", 0, (0, 2, 1)),
    }


def test_single_rule_acceptance():
    m = single_a()
    assert accepts(m, ("a",), 10) is Verdict.ACCEPTED
    assert accepts(m, ("a", "a"), 10) is Verdict.REJECTED


def test_anbn_accepts_language_sample():
    m = anbn()
    for w in ANBN_WORDS:
        assert accepts(m, w, 50) is Verdict.ACCEPTED
    for w in [(), ("a",), ("b", "a"), ("a", "a", "b"), ("a", "b", "a", "b")]:
        assert accepts(m, w, 50) is Verdict.REJECTED


def test_enumerate_accepted():
    assert enumerate_accepted(single_a(), 3, 20) == ([("a",)], True)
    assert enumerate_accepted(anbn(), 6, 50) == (ANBN_WORDS, True)
    assert enumerate_accepted(single_a(), 0, 20) == ([], True)
    eps = CounterMachine(("a",), ("q",), "q", "q", 1, ())
    assert enumerate_accepted(eps, 0, 20) == ([()], True)


def test_bound_hit_on_lambda_loop():
    m = CounterMachine(("a",), ("q", "f"), "q", "f", 1, (CounterRule("q", None, (ZERO,), "q", (1,)), CounterRule("q", None, (BLANK,), "q", (1,))))
    assert accepts(m, (), 10) is Verdict.BOUND_HIT


def test_problems_flags_decrement_of_empty_counter():
    m = CounterMachine(("a",), ("q",), "q", "q", 1, (CounterRule("q", "a", (ZERO,), "q", (-1,)),))
    assert "an empty counter (guard Z) cannot be decremented" in " ".join(m.problems())


@st.composite
def machines(draw):
    n = draw(st.integers(1, 2))
    states = ("q0", "q1", "qF")
    rule = st.builds(
        CounterRule,
        st.sampled_from(states),
        st.sampled_from(("a", "b", None, BLANK)),
        st.tuples(*[st.sampled_from((ZERO, BLANK))] * n),
        st.sampled_from(states),
        st.tuples(*[st.sampled_from((-1, 0, 1))] * n),
    )
    rules = draw(st.lists(rule, max_size=6))
    rules = [r for r in rules if not any(g == ZERO and e == -1 for g, e in zip(r.guards, r.actions))]
    return CounterMachine(("a", "b"), states, "q0", "qF", n, tuple(rules))


words = st.lists(st.sampled_from("ab"), max_size=3).map(tuple)


@settings(max_examples=300, deadline=None)
@given(machines(), words, st.integers(0, 8), st.integers(0, 8))
def test_acceptance_monotone_in_step_bound(m, w, k, extra):
    if accepts(m, w, k) is Verdict.ACCEPTED:
        assert accepts(m, w, k + extra) is Verdict.ACCEPTED


@settings(max_examples=300, deadline=None)
@given(machines(), words, st.lists(st.integers(0, 2), min_size=2, max_size=2), st.integers(0, 4))
def test_counters_stay_nonnegative_and_guards_are_exclusive(m, w, counters, pos):
    mc = MachineConfig("q0", min(pos, len(w)), tuple(counters[: m.counters]))
    for s in machine_successors(m, w, mc):
        assert all(c >= 0 for c in s.counters)
    for r in m.rules:
        fits = all((g == ZERO) == (c == 0) for g, c in zip(r.guards, mc.counters))
        # a rule whose guards fit fires exactly when the input side allows it
        if r.from_state == mc.state and fits and r.read is None:
            expect = tuple(c + e for c, e in zip(mc.counters, r.actions))
            assert MachineConfig(r.to_state, mc.pos, expect) in machine_successors(m, w, mc)

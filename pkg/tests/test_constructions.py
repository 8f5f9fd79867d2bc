import time

import pytest
from helpers import ANBN_WORDS, anbn, names

from pcgs.constructions import (
    FIXED_NONTERMINALS,
    KOREC_TRANSITIONS,
    build_universal_axiom,
    compile_theorem1,
    compile_universal,
    sigma,
    size_report,
    theorem2_bounds,
    transition_symbols,
    validate_final_normal_form,
    with_code,
)
from pcgs.engine import EnumerationBounds, enumerate_language, replay_trace
from pcgs.grammar import Component, PCGSystem, SymbolTable, validate
from pcgs.machines import BLANK, ZERO, CounterMachine, CounterRule
from pcgs.registers import attach_universal_front_end, korec_standin, translate_to_counter


def test_sigma_table():
    assert sigma(1, BLANK) == ("A", "A")
    assert sigma(0, BLANK) == ("A",)
    assert sigma(-1, BLANK) == ()
    assert sigma(1, ZERO) == ("A",)
    assert sigma(0, ZERO) == ()
    with pytest.raises(ValueError, match="partial mapping undefined"):
        sigma(-1, ZERO)


def test_transition_symbol_views():
    t = transition_symbols(anbn())[2]
    assert (t.name, t.state, t.read, t.next_state) == ("t3", "q0", "b", "q1")
    assert (t.store(1), t.store(2), t.action(1), t.action(2)) == (BLANK, ZERO, -1, 0)
    assert t.emitted() == ("b",)


def test_final_normal_form():
    assert validate_final_normal_form(anbn())
    bad = CounterMachine(("a",), ("q", "f"), "q", "f", 2, (CounterRule("q", None, (BLANK, ZERO), "f", (0, 0)),))
    assert not validate_final_normal_form(bad)
    assert validate_final_normal_form(CounterMachine(("a",), ("q", "f"), "q", "f", 2, ()))
    with pytest.raises(ValueError, match="final state"):
        compile_theorem1(bad)
    front = attach_universal_front_end(translate_to_counter(korec_standin()))
    assert validate_final_normal_form(front)


def test_theorem1_needs_two_counters():
    with pytest.raises(ValueError, match="2-counter"):
        compile_theorem1(CounterMachine(("a",), ("q",), "q", "q", 3, ()))


def test_theorem1_shape():
    g = compile_theorem1(anbn())
    assert validate(g) == []
    assert g.n == 6 and g.master == 2
    assert len(g.components[5].productions) == 4


def _machines():
    yield anbn()
    yield CounterMachine(
        ("a",),
        ("p", "r", "f"),
        "p",
        "f",
        2,
        (
            CounterRule("p", "a", (ZERO, ZERO), "r", (0, 1)),
            CounterRule("p", None, (ZERO, ZERO), "r", (1, 1)),
            CounterRule("r", None, (ZERO, BLANK), "r", (0, -1)),
            CounterRule("r", None, (BLANK, ZERO), "r", (-1, 0)),
            CounterRule("r", None, (ZERO, ZERO), "f", (0, 0)),
        ),
    )


@pytest.mark.parametrize("cm", list(_machines()))
def test_theorem1_walkthrough_for_every_initial_transition(cm):
    g = compile_theorem1(cm)
    for k, t in enumerate(transition_symbols(cm)[:2]):
        if t.state != cm.start:
            continue
        trace = replay_trace(g, [k, 0])
        assert names(g, trace[1]) == (t.name, "Q1", "Q1 Z", "Q1 Z", "Q1", "M0")
        assert names(g, trace[2]) == (t.name, t.name, f"{t.name} Z", f"{t.name} Z", t.name, "M0")


@pytest.mark.parametrize("cm", list(_machines()))
def test_theorem1_nonterminal_count(cm):
    g = compile_theorem1(cm)
    I = transition_symbols(cm)
    with_zero = sum(1 for t in I if ZERO in t.rule.guards)
    # t, D1, D2, E1, E2 for every transition; H1, H2 only where some counter is tested for zero
    expected = set(FIXED_NONTERMINALS) | {t.name for t in I}
    expected |= {f"{p}[{t.name}]" for t in I for p in ("D1", "D2", "E1", "E2")}
    expected |= {f"{p}[{t.name}]" for t in I if ZERO in t.rule.guards for p in ("H1", "H2")}
    assert set(g.symbols.nonterminals) == expected
    assert size_report(g).nonterminal_count == 5 * len(I) + 2 * with_zero + 12


def test_theorem1_anbn_words():
    res = enumerate_language(compile_theorem1(anbn()), EnumerationBounds(max_word_length=4))
    assert res.exhausted and res.words == ANBN_WORDS[:2]


def test_universal_on_two_counters_matches_machine():
    u = compile_universal(anbn(), code_counter=None)
    assert u.n == 6 and "code_component" not in u.meta
    res = enumerate_language(u, EnumerationBounds(max_word_length=6, max_configurations=10**6))
    assert res.exhausted and res.words == ANBN_WORDS


def test_universal_axiom():
    assert build_universal_axiom(0) == ("S",)
    assert build_universal_axiom(3) == ("A", "A", "A", "S")
    with pytest.raises(ValueError):
        build_universal_axiom(-1)


def test_with_code_sets_code_component():
    u = with_code(compile_universal(anbn(), code_counter=1), 2)
    assert u.components[2].axiom == ("A", "A", "S")
    assert u.meta["code"] == "2"


def test_empty_system_size():
    g = PCGSystem(SymbolTable.for_components(("S",), (), 1), (Component(()),))
    assert size_report(g).rule_count == 0


def test_standin_universal_size():
    t = time.perf_counter()
    cm = attach_universal_front_end(translate_to_counter(korec_standin()))
    u = compile_universal(cm)
    r = size_report(u)
    elapsed = time.perf_counter() - t
    m = len(cm.rules)
    assert m == KOREC_TRANSITIONS
    b = theorem2_bounds(m)
    assert b == {"components": 12, "rules": 282819, "nonterminals": 23576}
    assert r.component_count == 12
    assert r.rule_count <= b["rules"]
    assert r.nonterminal_count <= b["nonterminals"]
    assert elapsed < 30

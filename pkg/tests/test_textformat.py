import pytest
from helpers import DATA, anbn, load_rm
from hypothesis import given, settings
from test_properties import systems

from pcgs.constructions import compile_theorem1, compile_universal, with_code
from pcgs.registers import korec_standin
from pcgs.textformat import (
    ParseError,
    ValidationError,
    emit_counter_machine,
    emit_grammar,
    emit_register_machine,
    parse_counter_machine,
    parse_grammar,
    parse_machine,
    parse_register_machine,
)

MINIMAL = """# smallest useful system
pcgs nonreturning master=1
nonterminals: S
terminals: a
component 1:
  axiom: S
  S -> a S
  S -> <eps>
"""


def test_minimal_file():
    g = parse_grammar(MINIMAL)
    assert g.n == 1
    assert [str(p) for p in g.components[0].productions] == ["S -> a S", "S -> <eps>"]


def test_undefined_query_symbol_is_reported_with_line():
    text = "pcgs returning master=1\nnonterminals: S\nterminals: a\ncomponent 1:\n axiom: S\n S -> Q3\ncomponent 2:\n axiom: S\n"
    with pytest.raises(ValidationError, match=r"line 6: undefined query symbol 'Q3'"):
        parse_grammar(text)


@pytest.mark.parametrize(
    "text, line",
    [
        ("pcgs sideways master=1\n", 1),
        ("pcgs returning\n", 1),
        ("pcgs returning master=1\nnonterminals: S\nterminals: a\n S -> a\n", 4),
        ("pcgs returning master=1\nnonterminals: S\nterminals: a\ncomponent 2:\n", 4),
        ("pcgs returning master=1\nnonterminals: S\nterminals: a\ncomponent 1:\n axiom: S\n S A -> a\n", 6),
        ("pcgs returning master=1\nnonterminals: S\nterminals: a\ncomponent 1:\n axiom: S\n what\n", 6),
        ("pcgs returning master=1\nnonterminals: S $\n", 2),
    ],
)
def test_positioned_parse_errors(text, line):
    with pytest.raises(ParseError) as e:
        parse_grammar(text)
    assert e.value.line == line


def test_compiled_systems_round_trip():
    for g in (compile_theorem1(anbn()), with_code(compile_universal(anbn(), 1), 2)):
        text = emit_grammar(g)
        assert parse_grammar(text) == g
        assert emit_grammar(parse_grammar(text)) == text


@settings(max_examples=200, deadline=None)
@given(systems())
def test_random_systems_round_trip(g):
    assert parse_grammar(emit_grammar(g)) == g


TWO_RULES = """counters 1
alphabet: a
states: q f
start: q
final: f
(q, a, Z) -> (q, +1)
(q, eps, B) -> (f, -1)
"""


def test_two_rule_counter_machine():
    cm = parse_counter_machine(TWO_RULES)
    assert len(cm.rules) == 2
    assert cm.rules[1].read is None
    assert parse_counter_machine(emit_counter_machine(cm)) == cm
    assert parse_counter_machine(emit_counter_machine(anbn())) == anbn()


def test_zero_guard_decrement_is_invalid():
    with pytest.raises(ValidationError, match="guard Z"):
        parse_counter_machine(TWO_RULES.replace("(q, a, Z) -> (q, +1)", "(q, a, Z) -> (q, -1)"))


def test_counter_machine_errors():
    with pytest.raises(ParseError) as e:
        parse_counter_machine(TWO_RULES.replace("(q, a, Z) -> (q, +1)", "(q, a, Z, Z) -> (q, +1)"))
    assert e.value.line == 6
    with pytest.raises(ParseError):
        parse_counter_machine(TWO_RULES.replace("(q, a, Z)", "(q, a, X)"))
    with pytest.raises(ParseError, match="final"):
        parse_counter_machine(TWO_RULES.replace("final: f\n", ""))
    with pytest.raises(ValidationError, match="state"):
        parse_counter_machine(TWO_RULES.replace("(q, a, Z) -> (q, +1)", "(q, a, Z) -> (nowhere, +1)"))


def test_doubler_file():
    rm = load_rm("doubler.rm")
    assert len(rm.instructions) == 4
    assert parse_register_machine(emit_register_machine(rm)) == rm
    assert isinstance(parse_machine((DATA / "doubler.rm").read_text()), type(rm))


def test_standin_file_round_trip():
    assert parse_register_machine((DATA / "korec_standin.rm").read_text()) == korec_standin()


def test_register_machine_errors():
    text = (DATA / "doubler.rm").read_text()
    with pytest.raises(ValidationError, match="undeclared label l9"):
        parse_register_machine(text.replace("ADD r2 -> l2", "ADD r2 -> l9"))
    with pytest.raises(ParseError, match="register"):
        parse_register_machine(text.replace("ADD r2", "ADD x2"))
    with pytest.raises(ParseError, match="two target labels"):
        parse_register_machine(text.replace("-> l1, lh", "-> l1"))

from pathlib import Path

from pcgs.grammar import PCGSystem
from pcgs.machines import CounterMachine
from pcgs.machines import CounterRule as R
from pcgs.textformat import parse_counter_machine, parse_grammar, parse_register_machine

DATA = Path(__file__).parent / "data"

ANBN_WORDS = [("a", "b"), ("a", "a", "b", "b"), ("a", "a", "a", "b", "b", "b")]


def load_cm(name: str) -> CounterMachine:
    return parse_counter_machine((DATA / name).read_text())


def load_rm(name: str):
    return parse_register_machine((DATA / name).read_text())


def anbn() -> CounterMachine:
    return load_cm("anbn.cm")


def single_a() -> CounterMachine:
    return CounterMachine(("a",), ("q0", "qF"), "q0", "qF", 2, (R("q0", "a", ("Z", "Z"), "qF", (0, 0)),))


def grammar(text: str) -> PCGSystem:
    return parse_grammar(text)


def ids(system: PCGSystem, *strings: str):
    """Configuration from space-separated names; '' is the empty string."""
    table = system.symbols.intern
    return tuple(tuple(table[s] for s in x.split()) for x in strings)


def names(system: PCGSystem, config) -> tuple[str, ...]:
    n = system.symbols.names
    return tuple(" ".join(n[s] for s in x) for x in config)

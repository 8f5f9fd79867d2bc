"""Bounded language-equivalence checks between a grammar system and a counter machine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .engine import EnumerationBounds, EnumerationResult, enumerate_language, word_key
from .grammar import PCGSystem
from .machines import CounterMachine, enumerate_accepted

DEFAULT_CONFIG_BUDGET = 10**7


@dataclass
class EquivalenceReport:
    max_len: int
    words_only_in_grammar: list[tuple[str, ...]]
    words_only_in_machine: list[tuple[str, ...]]
    agreed_words: list[tuple[str, ...]]
    grammar_exhausted: bool
    machine_exact: bool
    grammar: EnumerationResult | None = field(default=None, repr=False)

    @property
    def conclusive(self) -> bool:
        return self.grammar_exhausted and self.machine_exact

    @property
    def mismatch(self) -> bool:
        """A difference that holds even if the searches were cut short.

        A word one side found is genuinely in its language; it only proves a
        difference if the other side's search was complete.
        """
        return bool(
            (self.words_only_in_grammar and self.machine_exact)
            or (self.words_only_in_machine and self.grammar_exhausted)
        )

    @property
    def equal(self) -> bool:
        return self.conclusive and not self.mismatch


def check_equivalence(
    system: PCGSystem,
    machine: CounterMachine,
    max_len: int,
    grammar_bounds: EnumerationBounds | None = None,
    machine_step_bound: int | None = None,
    machine_counters: Sequence[int] | None = None,
    workers: int = 1,
) -> EquivalenceReport:
    """Compare both languages on words of length at most ``max_len``.

    ``machine_counters`` sets the machine's initial counter contents (a universal
    system started with code K matches a machine whose code counter holds K).
    """
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    if set(system.symbols.terminals) != set(machine.alphabet):
        raise ValueError(
            f"alphabet mismatch: grammar terminals {sorted(system.symbols.terminals)} "
            f"vs machine alphabet {sorted(machine.alphabet)}"
        )
    if grammar_bounds is None:
        grammar_bounds = EnumerationBounds(max_word_length=max_len, max_configurations=DEFAULT_CONFIG_BUDGET)
    elif grammar_bounds.max_word_length is None or grammar_bounds.max_word_length > max_len:
        grammar_bounds = EnumerationBounds(
            grammar_bounds.max_depth, grammar_bounds.max_configurations, grammar_bounds.max_string_length, max_len
        )
    if machine_step_bound is None:
        machine_step_bound = default_step_bound(machine, max_len)
    res = enumerate_language(system, grammar_bounds, workers=workers)
    gw = {w for w in res.words if len(w) <= max_len}
    mw_list, exact = enumerate_accepted(machine, max_len, machine_step_bound, machine_counters)
    mw = set(mw_list)
    return EquivalenceReport(
        max_len,
        sorted(gw - mw, key=word_key),
        sorted(mw - gw, key=word_key),
        sorted(gw & mw, key=word_key),
        res.exhausted,
        exact,
        res,
    )


def default_step_bound(machine: CounterMachine, max_len: int) -> int:
    # the machine search is over deduplicated configurations, so a generous bound is cheap
    return 64 * (max_len + 1) * max(1, len(machine.states))

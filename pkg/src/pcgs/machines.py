"""n-counter machines with a read-only input tape."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable, NamedTuple, Sequence

ZERO = "Z"
BLANK = "B"
LAMBDA = None  # read nothing, head stays


@dataclass(frozen=True)
class CounterRule:
    from_state: str
    read: str | None
    guards: tuple[str, ...]
    to_state: str
    actions: tuple[int, ...]

    def __str__(self) -> str:
        x = "eps" if self.read is None else self.read
        acts = ", ".join(f"{a:+d}" if a else "0" for a in self.actions)
        return f"({self.from_state}, {x}, {', '.join(self.guards)}) -> ({self.to_state}, {acts})"


@dataclass(frozen=True)
class CounterMachine:
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    start: str
    final: str
    counters: int
    rules: tuple[CounterRule, ...]

    def problems(self) -> list[str]:
        out = []
        states = set(self.states)
        if self.counters < 1:
            out.append("need at least one counter")
        for q in (self.start, self.final):
            if q not in states:
                out.append(f"state {q!r} not declared")
        if BLANK in self.alphabet or ZERO in self.alphabet:
            out.append("input alphabet may not contain Z or B")
        for r in self.rules:
            for q in (r.from_state, r.to_state):
                if q not in states:
                    out.append(f"{r}: state {q!r} not declared")
            if r.read is not None and r.read != BLANK and r.read not in self.alphabet:
                out.append(f"{r}: unknown input symbol {r.read!r}")
            if len(r.guards) != self.counters or len(r.actions) != self.counters:
                out.append(f"{r}: expected {self.counters} guards and actions")
                continue
            for g, e in zip(r.guards, r.actions):
                if g not in (ZERO, BLANK):
                    out.append(f"{r}: guard must be Z or B")
                if e not in (-1, 0, 1):
                    out.append(f"{r}: action must be -1, 0 or +1")
                if g == ZERO and e == -1:
                    out.append(f"{r}: an empty counter (guard Z) cannot be decremented")
        return out

    def by_state(self) -> dict[str, list[CounterRule]]:
        table = self.__dict__.get("_by_state")
        if table is None:
            table = {}
            for r in self.rules:
                table.setdefault(r.from_state, []).append(r)
            self.__dict__["_by_state"] = table
        return table


class MachineConfig(NamedTuple):
    state: str
    pos: int
    counters: tuple[int, ...]


class Verdict(enum.Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    BOUND_HIT = "bound-hit"


def guards_of(counters: Sequence[int]) -> tuple[str, ...]:
    return tuple(BLANK if c else ZERO for c in counters)


def all_guards(n: int) -> Iterable[tuple[str, ...]]:
    """Every guard combination over n counters, Z before B per position."""
    return product((ZERO, BLANK), repeat=n)


def machine_successors(machine: CounterMachine, word: Sequence[str], mc: MachineConfig) -> set[MachineConfig]:
    out = set()
    g = guards_of(mc.counters)
    for r in machine.by_state().get(mc.state, ()):
        if r.guards != g:
            continue
        pos = mc.pos
        if r.read is not None:
            if r.read == BLANK:
                # only the first blank cell after the input can be read
                if pos != len(word):
                    continue
            elif pos >= len(word) or word[pos] != r.read:
                continue
            pos += 1
        out.add(MachineConfig(r.to_state, pos, tuple(c + e for c, e in zip(mc.counters, r.actions))))
    return out


def initial_config(machine: CounterMachine, counters: Sequence[int] | None = None) -> MachineConfig:
    return MachineConfig(machine.start, 0, tuple(counters) if counters else (0,) * machine.counters)


def accepts(
    machine: CounterMachine,
    word: Sequence[str],
    step_bound: int,
    counters: Sequence[int] | None = None,
) -> Verdict:
    """BFS over configurations reachable within ``step_bound`` steps.

    Accepted once the final state is reached with the whole input consumed.
    """
    start = initial_config(machine, counters)
    seen = {start}
    layer = [start]
    n = len(word)
    for depth in range(step_bound + 1):
        nxt = []
        for mc in layer:
            if mc.state == machine.final and mc.pos >= n:
                return Verdict.ACCEPTED
            if depth == step_bound:
                continue
            for s in machine_successors(machine, word, mc):
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        if depth == step_bound:
            return Verdict.BOUND_HIT if any(machine_successors(machine, word, mc) - seen for mc in layer) else Verdict.REJECTED
        if not nxt:
            return Verdict.REJECTED
        layer = nxt
    return Verdict.REJECTED


def enumerate_accepted(
    machine: CounterMachine, max_len: int, step_bound: int, counters: Sequence[int] | None = None
) -> tuple[list[tuple[str, ...]], bool]:
    """All accepted words up to ``max_len``; the flag is False if any run hit the bound."""
    words, exact = [], True
    for length in range(max_len + 1):
        for w in product(machine.alphabet, repeat=length):
            v = accepts(machine, w, step_bound, counters)
            if v is Verdict.ACCEPTED:
                words.append(w)
            elif v is Verdict.BOUND_HIT:
                exact = False
    return words, exact


def reach_state(
    machine: CounterMachine, state: str, counters: Sequence[int], step_bound: int, start: str | None = None
) -> set[tuple[int, ...]]:
    """Counter vectors with which ``state`` is reached by lambda moves from ``start``."""
    first = MachineConfig(start or machine.start, 0, tuple(counters))
    seen = {first}
    queue = deque([(first, 0)])
    hits = set()
    while queue:
        mc, d = queue.popleft()
        if mc.state == state:
            hits.add(mc.counters)
            continue
        if d == step_bound:
            continue
        for s in machine_successors(machine, (), mc):
            if s not in seen:
                seen.add(s)
                queue.append((s, d + 1))
    return hits

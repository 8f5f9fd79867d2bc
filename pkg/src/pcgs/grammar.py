"""Data model for parallel communicating grammar systems with context-free components.

Symbols are plain string names at the boundary.  The derivation engine interns
them into dense integers (see :class:`SymbolTable.intern`) so configurations can
be hashed and compared cheaply.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

RETURNING = "returning"
NON_RETURNING = "nonreturning"
MODES = (RETURNING, NON_RETURNING)

_QUERY_RE = re.compile(r"^Q[0-9]+$")


def query_name(i: int) -> str:
    """Name of the query symbol addressing component ``i`` (1-based)."""
    return f"Q{i}"


def is_query_name(name: str) -> bool:
    return bool(_QUERY_RE.match(name))


@dataclass(frozen=True)
class Production:
    lhs: str
    rhs: tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"{self.lhs} -> {' '.join(self.rhs) if self.rhs else '<eps>'}"


@dataclass(frozen=True)
class Component:
    productions: tuple[Production, ...]
    axiom: tuple[str, ...] = ("S",)

    def with_axiom(self, word: Sequence[str]) -> "Component":
        return Component(self.productions, tuple(word))


@dataclass(frozen=True)
class SymbolTable:
    nonterminals: tuple[str, ...]
    terminals: tuple[str, ...]
    queries: tuple[str, ...]

    @classmethod
    def for_components(cls, nonterminals, terminals, n: int) -> "SymbolTable":
        return cls(tuple(nonterminals), tuple(terminals), tuple(query_name(i) for i in range(1, n + 1)))

    @cached_property
    def intern(self) -> dict[str, int]:
        """Name -> id.  Nonterminals first, then terminals, then query symbols."""
        ids: dict[str, int] = {}
        for name in (*self.nonterminals, *self.terminals, *self.queries):
            ids.setdefault(name, len(ids))
        return ids

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(self.intern)


@dataclass(frozen=True)
class PCGSystem:
    symbols: SymbolTable
    components: tuple[Component, ...]
    master: int = 1
    mode: str = NON_RETURNING
    # free-form annotations carried through the text format (e.g. construction name)
    meta: dict = field(default_factory=dict, hash=False)

    @property
    def n(self) -> int:
        return len(self.components)

    def with_axiom(self, index: int, word: Sequence[str]) -> "PCGSystem":
        """Copy of the system with component ``index`` (1-based) started from ``word``."""
        comps = list(self.components)
        comps[index - 1] = comps[index - 1].with_axiom(word)
        return PCGSystem(self.symbols, tuple(comps), self.master, self.mode, dict(self.meta))


@dataclass(frozen=True)
class Violation:
    message: str
    component: int | None = None
    rule: Production | None = None

    def __str__(self) -> str:
        where = []
        if self.component is not None:
            where.append(f"component {self.component}")
        if self.rule is not None:
            where.append(f"rule {self.rule}")
        return f"{self.message}" + (f" ({', '.join(where)})" if where else "")


def validate(system: PCGSystem) -> list[Violation]:
    """Check every structural invariant; never raises on structured input."""
    out: list[Violation] = []
    st = system.symbols
    N, T, K = set(st.nonterminals), set(st.terminals), list(st.queries)
    if N & T or N & set(K) or T & set(K):
        out.append(Violation("alphabets not disjoint"))
    if len(K) != system.n:
        out.append(Violation(f"expected {system.n} query symbols, got {len(K)}"))
    elif K != [query_name(i) for i in range(1, system.n + 1)]:
        out.append(Violation("query symbols must be Q1..Qn in component order"))
    if system.n < 1:
        out.append(Violation("a system needs at least one component"))
    if not isinstance(system.master, int) or not 1 <= system.master <= max(system.n, 1):
        out.append(Violation(f"master index {system.master} out of range"))
    if system.mode not in MODES:
        out.append(Violation(f"unknown mode {system.mode!r}"))
    known = N | T | set(K)
    for i, comp in enumerate(system.components, 1):
        if not comp.axiom:
            out.append(Violation("empty axiom word", i))
        for s in comp.axiom:
            if s not in N:
                out.append(Violation(f"axiom symbol {s!r} is not a nonterminal", i))
        for p in comp.productions:
            if p.lhs in K or is_query_name(p.lhs) and p.lhs not in N:
                out.append(Violation("query symbol on lhs", i, p))
            elif p.lhs in T:
                out.append(Violation("terminal on lhs", i, p))
            elif p.lhs not in N:
                out.append(Violation(f"undefined symbol {p.lhs!r}", i, p))
            for s in p.rhs:
                if s not in known:
                    kind = "undefined query symbol" if is_query_name(s) else "undefined symbol"
                    out.append(Violation(f"{kind} {s!r}", i, p))
    return out


def initial_configuration(system: PCGSystem) -> tuple[tuple[int, ...], ...]:
    ids = system.symbols.intern
    return tuple(tuple(ids[s] for s in c.axiom) for c in system.components)


def format_word(system: PCGSystem, word: Sequence[int], sep: str = "") -> str:
    names = system.symbols.names
    return sep.join(names[s] for s in word)


def format_configuration(system: PCGSystem, config) -> str:
    """Render as ``(x1, ..., xn)`` with space-separated symbols; empty strings show as ``<eps>``."""
    parts = [format_word(system, x, " ") or "<eps>" for x in config]
    return "(" + ", ".join(parts) + ")"
